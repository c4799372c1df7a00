from fractions import Fraction as F

import pytest

from floerbar.novikov import LagrangianParams
from floerbar.seidel import (EXAMPLE_CASE_NAMES, HypothesisError,
                             QHPresentation, RingElement, averaging_bound,
                             example_case, qh_mul,
                             quasimorphism_defect_bound, telescoping_check,
                             verify_hypotheses)


def quadric_demo(n: int, twist: int = 1) -> QHPresentation:
    return QHPresentation(params=LagrangianParams(n, 2 * n, F(1)),
                          power=2, twist=twist, point_power=1)


def test_qh_mul_examples():
    n = 3
    pres = quadric_demo(n)  # X*X -> q = t**(2n)
    X = RingElement(0, 1)
    assert qh_mul(pres, X, X) == RingElement(2 * n, 0)
    a = RingElement(5, 1)
    assert qh_mul(pres, a, pres.unit()) == a
    hp = QHPresentation(params=LagrangianParams(4, 8, F(1)),
                        power=2, twist=-1, point_power=1)
    assert qh_mul(hp, X, X) == RingElement(-8, 0)


def test_normalization_handles_negative_wraps():
    pres = quadric_demo(2, twist=-1)
    assert pres.normalize(0, -1) == RingElement(4, 1)
    assert pres.normalize(0, 5) == RingElement(-8, 1)


def test_verify_hypotheses_quadric():
    n = 4
    pres = quadric_demo(n, twist=-1)
    data = verify_hypotheses(pres, RingElement(n, 1))
    assert (data.k, data.p, data.m, data.r) == (1, n, 2, 0)


def test_verify_hypotheses_rpn_and_hpn():
    n = 3
    rp = QHPresentation(params=LagrangianParams(n, n + 1, F(1, 2)),
                        power=n + 1, twist=-1, point_power=n)
    data = verify_hypotheses(rp, RingElement(1, 1))
    assert (data.k, data.p, data.m, data.r) == (n, n, n + 1, 0)
    hp = QHPresentation(params=LagrangianParams(4 * n, 4 * n + 4, F(1)),
                        power=n + 1, twist=-1, point_power=n)
    data = verify_hypotheses(hp, RingElement(2, 1))
    assert (data.k, data.p, data.m, data.r) == (n, 2 * n, n + 1, -(2 * n + 2))


def test_verify_hypotheses_failure():
    pres = quadric_demo(2, twist=-1)
    with pytest.raises(HypothesisError):
        verify_hypotheses(pres, RingElement(1, 0))  # unit never hits the point


def test_averaging_bound_examples():
    n = 5
    assert averaging_bound(1, n, 2, 0, F(1, 2) / (2 * n)) == F(1, 4)
    assert averaging_bound(n, n, n + 1, 0, F(1, 2 * n + 2)) == F(n, 2 * n + 2)
    assert averaging_bound(n, 2 * n, n + 1, -(2 * n + 2), F(1, 4 * n + 4)) == F(n, n + 1)
    assert averaging_bound(2, 7, 5, 0, F(1, 9)) == F(7, 9)  # p*kappa, any k
    with pytest.raises(ValueError):
        averaging_bound(3, 1, 3, 0, F(1))


def test_zero_twist_average_is_p_kappa():
    # r = 0: the average equals p * kappa independently of k
    for m in range(2, 7):
        for k in range(1, m):
            assert averaging_bound(k, 4, m, 0, F(2, 11)) == F(8, 11)


def test_telescoping_cancels_and_reports():
    rep = telescoping_check(1, 3, 2, 0, F(1, 6))
    assert rep.ok
    assert rep.total == 2 * averaging_bound(1, 3, 2, 0, F(1, 6))
    assert [t[2] for t in rep.terms] == [False, True]
    with pytest.raises(ValueError):
        telescoping_check(2, 1, 2, 0, F(1))


def test_telescoping_sweep():
    kappa = F(1, 7)
    for m in range(2, 7):
        for k in range(1, m):
            for p in range(-8, 9):
                for r in range(-8, 9):
                    assert telescoping_check(k, p, m, r, kappa).ok


def test_example_table():
    expected_bounds = {
        "RPn": lambda n: F(n, 2 * n + 2),
        "CPn_diag": lambda n: F(n, n + 1),
        "Sn_quadric": lambda n: F(1, 2),
        "HPn_gr": lambda n: F(n, n + 1),
    }
    for name in EXAMPLE_CASE_NAMES:
        for n in range(1, 11):
            case = example_case(name, n)
            assert case.bound == expected_bounds[name](n), (name, n)
            assert case.telescoping.ok
            assert case.bound < F(case.presentation.params.disk_area)
            redo = verify_hypotheses(case.presentation, case.seidel.element)
            assert redo == case.seidel


def test_example_table_specific_values():
    assert example_case("RPn", 1).bound == F(1, 4)
    assert example_case("CPn_diag", 2).bound == F(2, 3)
    assert example_case("Sn_quadric", 3).bound == F(1, 2)
    assert example_case("HPn_gr", 1).bound == F(1, 2)
    with pytest.raises(KeyError):
        example_case("unknown", 2)


def test_defect_bounds():
    assert quasimorphism_defect_bound(F(3, 4)) == F(3, 4)
    assert quasimorphism_defect_bound(F(1, 2), homogenized=True) == 1
    assert quasimorphism_defect_bound(F(0)) == 0
    n = 6
    assert quasimorphism_defect_bound(example_case("CPn_diag", n).bound,
                                      homogenized=True) == F(2 * n, n + 1)
    with pytest.raises(ValueError):
        quasimorphism_defect_bound(F(-1))
