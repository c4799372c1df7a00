"""Exact arithmetic in the rank-2 module Q + Q*pi.

Radial-profile actions mix rational multiples of the recapping area with
rational multiples of pi, so they live in the module of values ``a + b*pi``
with ``a, b`` rational.  Addition, subtraction and scaling by rationals are
componentwise; there is no multiplication of two pi-parts.

Comparisons are exact: the sign of ``a + b*pi`` reduces to comparing the
rational ``-a/b`` against pi, which is decided by refining the continued
fraction convergents of pi (they alternate below/above) until the rational
falls outside the bracket.  Equality holds only when both coefficients agree;
pi being irrational, no nonzero element of the module vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .novikov import format_rational, parse_rational

__all__ = ["PiRational", "PiPrecisionError"]

# Continued fraction expansion of pi; 60 terms give far more precision than
# any rational that can plausibly appear in a profile comparison.
_PI_CF = (
    3, 7, 15, 1, 292, 1, 1, 1, 2, 1, 3, 1, 14, 2, 1, 1, 2, 2, 2, 2,
    1, 84, 2, 1, 1, 15, 3, 13, 1, 4, 2, 6, 6, 99, 1, 2, 2, 6, 3, 5,
    1, 1, 6, 8, 1, 7, 1, 2, 3, 7, 1, 2, 1, 1, 12, 1, 1, 1, 3, 1,
)


def _convergents():
    p_prev, q_prev = 1, 0
    p, q = _PI_CF[0], 1
    yield Fraction(p, q)
    for a in _PI_CF[1:]:
        p, p_prev = a * p + p_prev, p
        q, q_prev = a * q + q_prev, q
        yield Fraction(p, q)


class PiPrecisionError(ArithmeticError):
    """Comparison against pi could not be resolved within the stored expansion."""


def _compare_with_pi(t: Fraction) -> int:
    """Return -1 / +1 according to ``t < pi`` / ``t > pi`` (never 0)."""
    low = None
    high = None
    for i, c in enumerate(_convergents()):
        if i % 2 == 0:
            low = c
        else:
            high = c
        if low is not None and t < low:
            return -1
        if high is not None and t > high:
            return 1
    raise PiPrecisionError(f"cannot separate {t} from pi with the stored expansion")


_NumberLike = Union[int, Fraction, "PiRational"]


@dataclass(frozen=True)
class PiRational:
    """Exact value ``rational + pi_coeff * pi``."""

    rational: Fraction = Fraction(0)
    pi_coeff: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "rational", Fraction(self.rational))
        object.__setattr__(self, "pi_coeff", Fraction(self.pi_coeff))

    # -- constructors ------------------------------------------------------

    @classmethod
    def of(cls, value: _NumberLike) -> "PiRational":
        if isinstance(value, PiRational):
            return value
        return cls(Fraction(value), Fraction(0))

    @classmethod
    def pi(cls, coeff: _NumberLike = 1) -> "PiRational":
        return cls(Fraction(0), Fraction(coeff))

    # -- structure ---------------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self.pi_coeff == 0

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} has a nonzero pi part")
        return self.rational

    def sign(self) -> int:
        if self.pi_coeff == 0:
            return 0 if self.rational == 0 else (1 if self.rational > 0 else -1)
        # a + b*pi > 0  <=>  pi > -a/b when b > 0, and pi < -a/b when b < 0
        side = _compare_with_pi(-self.rational / self.pi_coeff)
        return -side if self.pi_coeff > 0 else side

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: _NumberLike) -> "PiRational":
        o = PiRational.of(other)
        return PiRational(self.rational + o.rational, self.pi_coeff + o.pi_coeff)

    __radd__ = __add__

    def __sub__(self, other: _NumberLike) -> "PiRational":
        o = PiRational.of(other)
        return PiRational(self.rational - o.rational, self.pi_coeff - o.pi_coeff)

    def __rsub__(self, other: _NumberLike) -> "PiRational":
        return PiRational.of(other) - self

    def __neg__(self) -> "PiRational":
        return PiRational(-self.rational, -self.pi_coeff)

    def __mul__(self, other) -> "PiRational":
        if isinstance(other, PiRational):
            if other.is_rational:
                other = other.rational
            elif self.is_rational:
                self, other = other, self.rational
            else:
                raise TypeError("cannot multiply two values with pi parts")
        scale = Fraction(other)
        return PiRational(self.rational * scale, self.pi_coeff * scale)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "PiRational":
        if isinstance(other, PiRational):
            other = other.as_fraction()
        return self * (1 / Fraction(other))

    # -- order -------------------------------------------------------------

    @staticmethod
    def _comparable(other) -> bool:
        return isinstance(other, (int, Fraction, PiRational))

    def _cmp(self, other: _NumberLike) -> int:
        return (self - PiRational.of(other)).sign()

    def __lt__(self, other) -> bool:
        if not self._comparable(other):
            return NotImplemented
        return self._cmp(other) < 0

    def __le__(self, other) -> bool:
        if not self._comparable(other):
            return NotImplemented
        return self._cmp(other) <= 0

    def __gt__(self, other) -> bool:
        if not self._comparable(other):
            return NotImplemented
        return self._cmp(other) > 0

    def __ge__(self, other) -> bool:
        if not self._comparable(other):
            return NotImplemented
        return self._cmp(other) >= 0

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = PiRational.of(other)
        if not isinstance(other, PiRational):
            return NotImplemented
        return self.rational == other.rational and self.pi_coeff == other.pi_coeff

    def __hash__(self) -> int:
        if self.pi_coeff == 0:
            return hash(self.rational)
        return hash((self.rational, self.pi_coeff))

    def __abs__(self) -> "PiRational":
        return -self if self.sign() < 0 else self

    def __bool__(self) -> bool:
        return self.sign() != 0

    # -- serialization -----------------------------------------------------

    def to_json(self) -> list:
        return [format_rational(self.rational), format_rational(self.pi_coeff)]

    @classmethod
    def from_json(cls, data) -> "PiRational":
        if isinstance(data, (str, int)):
            return cls.of(parse_rational(data))
        q, p = data
        return cls(parse_rational(q), parse_rational(p))

    def __str__(self) -> str:
        if self.pi_coeff == 0:
            return format_rational(self.rational)
        pi_part = "pi" if self.pi_coeff == 1 else f"{format_rational(self.pi_coeff)}*pi"
        if self.rational == 0:
            return pi_part
        return f"{format_rational(self.rational)} + {pi_part}"

    __repr__ = __str__
