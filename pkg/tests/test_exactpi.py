from fractions import Fraction as F

import pytest

from floerbar.exactpi import PiRational, _convergents


def test_convergents_alternate_and_tighten():
    cs = list(_convergents())
    lows = cs[0::2]
    highs = cs[1::2]
    assert all(a < b for a, b in zip(lows, lows[1:]))
    assert all(a > b for a, b in zip(highs, highs[1:]))
    assert all(lo < hi for lo, hi in zip(lows, highs))
    # classic bracketing rationals
    assert lows[0] == 3
    assert highs[0] == F(22, 7)


def test_signs_against_sharp_rationals():
    assert PiRational(F(-22, 7), F(1)).sign() == -1       # pi < 22/7
    assert PiRational(F(-3), F(1)).sign() == 1            # pi > 3
    assert PiRational(F(355, 113), F(-1)).sign() == 1     # 355/113 > pi
    assert PiRational(F(-355, 113), F(1)).sign() == -1
    assert PiRational(F(0), F(0)).sign() == 0


def test_total_order_and_arith():
    third_pi = PiRational.pi(F(1, 3))
    one = PiRational.of(1)
    assert one < third_pi < PiRational.of(2)
    assert third_pi * 3 == PiRational.pi()
    assert (third_pi + third_pi + third_pi - PiRational.pi()) == PiRational.of(0)
    assert abs(PiRational(F(1), F(-1))) == PiRational(F(-1), F(1))
    assert PiRational.pi() / 2 == PiRational.pi(F(1, 2))
    with pytest.raises(TypeError):
        PiRational.pi() * PiRational.pi()


def test_equality_needs_matching_coefficients():
    assert PiRational(F(1, 2), F(0)) == F(1, 2)
    assert PiRational(F(0), F(1)) != F(22, 7)
    assert hash(PiRational.of(F(2, 3))) == hash(F(2, 3))


def test_json_round_trip():
    x = PiRational(F(-9, 40), F(2, 7))
    assert PiRational.from_json(x.to_json()) == x
    assert PiRational.from_json("5/8") == PiRational.of(F(5, 8))
