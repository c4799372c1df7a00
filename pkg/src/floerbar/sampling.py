"""Seeded random instances: complexes with known barcodes, barcodes, and
admissible sphere diagrams.

Random filtered complexes are produced in normal form -- a planted partial
matching ``d y = q**e z`` whose barcode is known by construction -- and then
scrambled by random filtered basis changes (column plus matching row
operations), which preserve validity, ``d*d = 0`` and the barcode.  That
gives every randomized test three independent answers to compare: the
planted barcode, the reduction output and the rank-function oracle.

Random sphere diagrams come from closed meanders: a pair of non-crossing
chord matchings whose union is a single cycle, with areas drawn exactly from
the admissibility polytope (both curves bisect the sphere).
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .complexes import FilteredComplex, Generator
from .diagrams import TwoCurveDiagram, sphere_diagram_from_meander, _Geometry
from .novikov import NovikovScalar, NovikovSpec
from .persistence import Bar, Barcode, INF

__all__ = [
    "random_barcode",
    "random_complex",
    "perturb_actions",
    "random_meander",
    "random_admissible_areas",
    "random_sphere_diagram",
]


def _random_fraction(rng: random.Random, lo: int = 0, hi: int = 4,
                     max_den: int = 12) -> Fraction:
    den = rng.randint(1, max_den)
    num = rng.randint(lo * den, hi * den)
    return Fraction(num, den)


def random_barcode(rng: random.Random, max_bars: int = 6,
                   degrees: Sequence[int] = (0, 1, 2)) -> Barcode:
    bars = []
    for _ in range(rng.randint(0, max_bars)):
        left = _random_fraction(rng, -2, 4)
        degree = rng.choice(list(degrees))
        if rng.random() < 0.25:
            bars.append(Bar(left, INF, degree))
        else:
            length = _random_fraction(rng, 0, 3) + Fraction(1, 13)
            bars.append(Bar(left, left + length, degree, rng.randint(1, 2)))
    return Barcode(bars)


def random_complex(rng: random.Random, num_generators: int = 8,
                   spec: Optional[NovikovSpec] = None,
                   scramble_rounds: int = 12,
                   ) -> Tuple[FilteredComplex, Barcode]:
    """A valid complex with its barcode known by construction.

    Returns ``(complex, expected_barcode)``; the barcode is stated in the
    default degree window of the complex.
    """
    if spec is None:
        spec = NovikovSpec("q", 2, Fraction(1, 2))
    degree_lo, degree_hi = 0, spec.degree_step + 1
    gens = []
    for i in range(num_generators):
        gens.append(Generator(
            f"g{i}", rng.randrange(degree_lo, degree_hi + 1), _random_fraction(rng)))

    diff: Dict[str, List[Tuple[NovikovScalar, str]]] = {}
    paired = set()
    planted: List[Tuple[Generator, Generator, int]] = []
    order = list(range(num_generators))
    rng.shuffle(order)
    for i in order:
        y = gens[i]
        if y.gid in paired:
            continue
        candidates = []
        for j in range(num_generators):
            z = gens[j]
            if z.gid in paired or z.gid == y.gid:
                continue
            for e in (-1, 0, 1):
                if z.degree + e * spec.degree_step == y.degree - 1 and \
                        z.action + e * spec.action_step < y.action:
                    candidates.append((z, e))
        if candidates and rng.random() < 0.75:
            z, e = rng.choice(candidates)
            diff[y.gid] = [(NovikovScalar.monomial(spec, e), z.gid)]
            paired.add(y.gid)
            paired.add(z.gid)
            planted.append((y, z, e))

    expected = _planted_barcode(spec, gens, planted, paired)
    cx = FilteredComplex(spec, gens, diff)
    cx.validate()
    cx = _scramble(rng, cx, scramble_rounds)
    return cx, expected


def _planted_barcode(spec: NovikovSpec, gens: Sequence[Generator],
                     planted, paired) -> Barcode:
    step, area = spec.degree_step, spec.action_step
    bars = []
    for y, z, e in planted:
        raw_deg = z.degree + e * step
        t = ((raw_deg % step) - raw_deg) // step
        bars.append(Bar(z.action + (e + t) * area, y.action + t * area,
                        raw_deg % step))
    for g in gens:
        if g.gid not in paired:
            t = ((g.degree % step) - g.degree) // step
            bars.append(Bar(g.action + t * area, INF, g.degree % step))
    return Barcode(bars)


def _scramble(rng: random.Random, cx: FilteredComplex, rounds: int) -> FilteredComplex:
    """Random filtered basis changes: for admissible (g, h, e) apply the
    column operation d(g) += q**e d(h) together with the row operation
    "h appears wherever g does, scaled by q**e"."""
    spec = cx.spec
    gens = cx.generators
    matrix: Dict[str, Dict[str, NovikovScalar]] = {
        gid: {t: c for c, t in terms} for gid, terms in cx.differential.items()
    }

    def add_term(row: Dict[str, NovikovScalar], coeff: NovikovScalar, target: str):
        cur = row.get(target)
        new = coeff if cur is None else cur + coeff
        if new.is_zero():
            row.pop(target, None)
        else:
            row[target] = new

    for _ in range(rounds):
        g, h = rng.choice(gens), rng.choice(gens)
        if g.gid == h.gid:
            continue
        ok_e = None
        for e in (-1, 0, 1):
            if h.degree + e * spec.degree_step == g.degree and \
                    h.action + e * spec.action_step < g.action:
                ok_e = e
                break
        if ok_e is None:
            continue
        lam = NovikovScalar.monomial(spec, ok_e)
        # column: d(g) += lam * d(h)
        for t, c in list(matrix.get(h.gid, {}).items()):
            add_term(matrix.setdefault(g.gid, {}), lam * c, t)
        if g.gid in matrix and not matrix[g.gid]:
            del matrix[g.gid]
        # rows: every d(x) containing g picks up lam * that coefficient on h
        for x, row in matrix.items():
            if g.gid in row:
                add_term(row, lam * row[g.gid], h.gid)
        matrix = {gid: row for gid, row in matrix.items() if row}

    out = FilteredComplex(spec, gens,
                          {gid: [(c, t) for t, c in row.items()]
                           for gid, row in matrix.items()})
    out.validate()
    return out


def perturb_actions(rng: random.Random, cx: FilteredComplex, delta: Fraction
                    ) -> Tuple[FilteredComplex, Fraction]:
    """Move every generator action by at most ``delta`` while keeping the
    complex valid; returns the perturbed complex and the bound actually used
    (clamped below a third of the smallest action drop)."""
    slack = None
    astep = cx.spec.action_step if cx.spec else Fraction(0)
    for gid, terms in cx.differential.items():
        x = cx.by_id[gid]
        for coeff, target in terms:
            y = cx.by_id[target]
            for e in coeff.exponents:
                drop = x.action - y.action - e * astep
                slack = drop if slack is None else min(slack, drop)
    used = Fraction(delta)
    if slack is not None:
        used = min(used, slack / 3)
    gens = []
    for g in cx.generators:
        den = rng.randint(1, 9)
        num = rng.randint(-den, den)
        gens.append(Generator(g.gid, g.degree, g.action + used * Fraction(num, den)))
    out = FilteredComplex(cx.spec, gens, cx.differential)
    out.validate()
    return out, used


# ---------------------------------------------------------------------------
# diagrams
# ---------------------------------------------------------------------------


def _random_noncrossing_matching(rng: random.Random, points: Sequence[int]
                                 ) -> List[Tuple[int, int]]:
    if not points:
        return []
    first = points[0]
    # partner at odd offset keeps both sides even
    idx = rng.choice(range(1, len(points), 2))
    pairs = [(first, points[idx])]
    pairs += _random_noncrossing_matching(rng, points[1:idx])
    pairs += _random_noncrossing_matching(rng, points[idx + 1:])
    return pairs


def random_meander(rng: random.Random, crossings: int
                   ) -> Tuple[Dict[int, int], Dict[int, int]]:
    """Two non-crossing matchings on 1..crossings whose union is one cycle."""
    if crossings < 2 or crossings % 2:
        raise ValueError("the number of crossings must be even and at least 2")
    pts = list(range(1, crossings + 1))
    while True:
        north = {a: b for a, b in _random_noncrossing_matching(rng, pts)}
        north.update({b: a for a, b in list(north.items())})
        south = {a: b for a, b in _random_noncrossing_matching(rng, pts)}
        south.update({b: a for a, b in list(south.items())})
        # single cycle?
        seen = {1}
        cur, use_north = 1, True
        while True:
            cur = north[cur] if use_north else south[cur]
            use_north = not use_north
            if cur == 1 and use_north:
                break
            seen.add(cur)
        if len(seen) == crossings:
            return north, south


def _split_total(rng: random.Random, total: Fraction, parts: int) -> List[Fraction]:
    weights = [rng.randint(1, 99) for _ in range(parts)]
    s = sum(weights)
    return [total * Fraction(w, s) for w in weights]


def random_admissible_areas(rng: random.Random, diagram: TwoCurveDiagram
                            ) -> Dict[str, Fraction]:
    """Exact positive areas making both curves bisect the unit-area sphere."""
    geo = _Geometry(diagram)
    k_sides = sorted(geo.face_components("L"), key=min)
    l_sides = sorted(geo.face_components("K"), key=min)
    if len(k_sides) != 2 or len(l_sides) != 2:
        raise ValueError("each curve must have exactly two sides")
    classes: Dict[Tuple[int, int], List[str]] = {}
    for name in diagram.faces:
        ks = 0 if name in k_sides[0] else 1
        ls = 0 if name in l_sides[0] else 1
        classes.setdefault((ks, ls), []).append(name)
    if len(classes) != 4:
        raise ValueError("expected all four side classes to be nonempty")
    s = Fraction(rng.randint(1, 79), 160)  # in (0, 1/2)
    totals = {(0, 0): s, (0, 1): Fraction(1, 2) - s,
              (1, 0): Fraction(1, 2) - s, (1, 1): s}
    areas: Dict[str, Fraction] = {}
    for key, names in classes.items():
        names.sort()
        for name, part in zip(names, _split_total(rng, totals[key], len(names))):
            areas[name] = part
    return areas


def random_sphere_diagram(rng: random.Random, crossings: int = 4) -> TwoCurveDiagram:
    """Admissible random sphere diagram: random closed meander, random exact
    areas satisfying both bisection constraints."""
    north, south = random_meander(rng, crossings)
    placeholder = {f"F{i}": Fraction(1) for i in range(1, crossings + 3)}
    skeleton = sphere_diagram_from_meander(north, south, areas=placeholder)
    areas = random_admissible_areas(rng, skeleton)
    return sphere_diagram_from_meander(north, south, areas=areas)
