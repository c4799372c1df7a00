from fractions import Fraction as F

import pytest

from floerbar.exactpi import PiRational
from floerbar.novikov import LagrangianParams
from floerbar.persistence import Barcode, Bar, INF, boundary_depth
from floerbar.radial import (GeneratorSpectrum, InfeasibleRanksError,
                             RadialProfile, SlopeDegeneracyError,
                             SpectrumEntry, degree_actions,
                             degree_class_actions, feasible_barcodes,
                             fold_profile, forced_bar_bound, generators,
                             homotopy_filter, sup_difference)

LP = LagrangianParams(dim=1, maslov=2, disk_area=F(1, 2))


def pv(x):
    return PiRational.of(F(x) if not isinstance(x, tuple) else F(*x))


def test_profile_validation():
    with pytest.raises(ValueError):
        RadialProfile(breakpoints=((pv(1), pv(0)), (pv(2), pv(0))))
    with pytest.raises(ValueError):
        RadialProfile(breakpoints=((pv(0), pv(0)),))


def test_fold_spectrum_counts_and_actions():
    s = generators(fold_profile(F(9, 10)), LP, k_range=(0, 1))
    by_degree = {}
    for e in s.entries:
        by_degree.setdefault(e.degree, []).append(e)
    assert {d: len(v) for d, v in by_degree.items()} == {0: 2, 1: 2, 2: 2, 3: 2}
    assert degree_actions(s, 1) == (pv(0), pv(0))
    assert degree_actions(s, 0) == (pv((-9, 40)), pv((-9, 40)))
    assert degree_class_actions(s, 1) == (pv(0), pv((1, 2)))
    assert degree_actions(s, 7) == ()


def test_slope_degeneracy_detected():
    prof = RadialProfile(breakpoints=(
        (pv(0), pv(0)), (PiRational.pi(F(1, 4)), PiRational.pi(F(1, 4)))))
    with pytest.raises(SlopeDegeneracyError):
        generators(prof, LP)


def test_explicit_l_range_must_cover():
    with pytest.raises(ValueError, match="l_range"):
        generators(fold_profile(F(1, 2)), LP, l_range=(5, 6))


def test_fold_feasible_families():
    s = generators(fold_profile(F(9, 10)), LP)
    feas = feasible_barcodes(s, {0: 1, 1: 1})
    assert len(feas) == 2
    depths = sorted(boundary_depth(bc) for bc in feas)
    assert depths == [pv((9, 40)), pv((11, 40))]
    assert forced_bar_bound(s, {0: 1, 1: 1}) == pv((9, 40))


def test_forced_bound_grid_and_monotonicity():
    prev = None
    for num in range(1, 10):
        a = F(num, 10)
        bound = forced_bar_bound(generators(fold_profile(a), LP), {0: 1, 1: 1})
        assert bound == PiRational.of(min(a / 4, F(1, 2) - a / 4))
        if prev is not None:
            assert prev <= bound
        prev = bound
    # limit value: half the recap area
    assert prev < PiRational.of(F(1, 4))


def test_all_forced_spectrum():
    prof = RadialProfile(breakpoints=((pv(0), pv(0)), (pv((1, 2)), pv((1, 10)))),
                         exterior=(0, 1))
    s = generators(prof, LP)
    feas = feasible_barcodes(s, {0: 2, 1: 1})
    assert len(feas) == 1
    assert all(b.is_infinite for b in next(iter(feas)).expand())
    assert forced_bar_bound(s, {0: 2, 1: 1}) == PiRational.of(0)


def test_infeasible_ranks():
    s = generators(fold_profile(F(1, 2)), LP)
    with pytest.raises(InfeasibleRanksError):
        feasible_barcodes(s, {0: 5})


def test_forced_bound_is_minimum():
    s = generators(fold_profile(F(3, 10)), LP)
    bound = forced_bar_bound(s, {0: 1, 1: 1})
    for bc in feasible_barcodes(s, {0: 1, 1: 1}):
        assert not (boundary_depth(bc) < bound)


def test_recap_shift_leaves_bound_alone():
    base = generators(fold_profile(F(7, 10)), LP)
    shifted_entries = []
    for e in base.entries:
        if e.source[0] == "origin":
            shifted_entries.append(SpectrumEntry(
                e.degree + LP.maslov, e.action + PiRational.of(LP.disk_area),
                e.source, e.k + 1))
        else:
            shifted_entries.append(e)
    shifted = GeneratorSpectrum(tuple(shifted_entries), LP)
    assert forced_bar_bound(shifted, {0: 1, 1: 1}) == \
        forced_bar_bound(base, {0: 1, 1: 1})


def test_true_barcode_is_feasible_for_sphere_complex_spectrum():
    # cross-module check: the equator-pair complex's (degree, action) data
    # admits its true barcode among the feasible ones
    entries = (
        SpectrumEntry(0, pv(0), ("gen", "a1")),
        SpectrumEntry(0, pv(0), ("gen", "a3")),
        SpectrumEntry(1, pv((1, 5)), ("gen", "a2")),
        SpectrumEntry(1, pv((1, 5)), ("gen", "a4")),
    )
    s = GeneratorSpectrum(entries, LP)
    feas = feasible_barcodes(s, {0: 1, 1: 1})
    truth = Barcode([Bar(pv(0), INF, 0), Bar(pv(0), pv((1, 5)), 0),
                     Bar(pv((1, 5)), INF, 1)])
    assert truth in feas


def test_sup_difference_and_homotopy():
    p1 = fold_profile(F(1, 2))
    p2 = fold_profile(F(9, 10))
    assert sup_difference(p1, p2) == PiRational.of(F(1, 10))
    assert sup_difference(p1, p1) == PiRational.of(0)

    family = [fold_profile(F(a, 20)) for a in range(10, 19)]
    trace = homotopy_filter(family, LP, {0: 1, 1: 1}, F(2))
    assert len(trace.kept) == len(family)
    assert all(len(k) == 2 for k in trace.kept)
    # the short-bar family survives to the end with its endpoint tracking a/4
    last = trace.kept[-1]
    depths = {boundary_depth(bc) for bc in last}
    assert PiRational.of(F(18, 20) / 4) in depths

    single = homotopy_filter([p1], LP, {0: 1, 1: 1}, F(2))
    assert len(single.kept) == 1

    with pytest.raises(ValueError):
        homotopy_filter([p1, p2], LP, {0: 1, 1: 1}, F(1, 2))


def test_mismatched_domains_rejected():
    p1 = fold_profile(F(1, 2))
    p3 = fold_profile(F(1, 2), capacity=F(2, 3))
    with pytest.raises(ValueError, match="domain"):
        sup_difference(p1, p3)


def test_profile_json_round_trip():
    prof = fold_profile(F(9, 10))
    again = RadialProfile.from_json(prof.to_json())
    assert again == prof


def _steep_profile(t: F) -> RadialProfile:
    """Deep-fold family in capacity coordinates: a valley corner slides from
    the wall foot at 3/4 toward 5/9 while its floor rises with the capacity
    (height = t times the capacity 1); the wall climbs back to full height at
    6/7 and drifts gently to the boundary.  All slopes stay non-integer."""
    rho_t = (1 - t) * F(3, 4) + t * F(5, 9)
    height = t  # capacity * t with capacity 1
    sigma0 = F(-1, 10)
    pts = [(pv(0), pv(-sigma0 * rho_t + height)), (pv(rho_t), pv(height))]
    if t > 0:
        pts.append((pv((3, 4)), pv(0)))
    pts += [(pv((6, 7)), pv(1)), (pv(1), pv(1) + pv((1, 80)))]
    return RadialProfile(breakpoints=tuple(pts), exterior=(0, 2))


def test_steep_profile_degree_formulas():
    # dimension 2, Maslov 4, recap area 2 (capacity = disk_area * dim/maslov);
    # levels and degrees read off the corners
    lp = LagrangianParams(dim=2, maslov=4, disk_area=F(2))
    prof = _steep_profile(F(1))
    s = generators(prof, lp, k_range=range(0, 5))
    # the inner concave-down corner carries the level -1 entry of degree
    # n + 1 = 3 with unrecapped action capacity * t + rho(t) = 1 + 5/9
    down = [e for e in s.entries
            if e.source[:3] == ("kink", 1, -1) and e.k == 0 and e.degree == 3]
    assert len(down) == 1
    assert down[0].action == pv((14, 9))
    # every degree-3 entry sourced at the wall corner or outside exceeds
    # twice the capacity, so only the sliding corner owns low degree-3 actions
    for e in s.entries:
        if e.degree != 3:
            continue
        if e.source[0] == "exterior" or (e.source[0] == "kink" and e.source[1] == 3):
            assert e.action > pv(2), e
    # the gcd exclusion: with dim and Maslov sharing a factor 2, the wall
    # corner's second slot cannot reach degree 3 at all
    wall_second = [e for e in s.entries
                   if e.source[0] == "kink" and e.source[1] == 3
                   and e.source[4] == 1 and e.degree == 3]
    assert wall_second == []


def test_steep_profile_zero_time_low_degree3_only_from_convex_corner():
    # before the valley opens, every degree-3 action below twice the capacity
    # comes from the second slot of the (convex) merged corner -- the slot
    # that can only start bars; wall and exterior entries all sit above
    lp = LagrangianParams(dim=2, maslov=4, disk_area=F(2))
    s = generators(_steep_profile(F(0)), lp, k_range=range(0, 5))
    for e in s.entries:
        if e.degree == 3 and not e.action > pv(2):
            assert e.source[0] == "kink" and e.source[3] == "up" and e.source[4] == 1, e
