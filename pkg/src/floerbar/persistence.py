"""Barcodes and the exact metrics between them.

A barcode is a finite multiset of degree-labelled half-open intervals
``(left, right]`` (finite) or ``(left, +inf)``.  Endpoints are exact numbers:
rationals, or rational-plus-pi values from :mod:`floerbar.exactpi`; the code
only ever adds, subtracts, halves and compares them, so any exact linearly
ordered type works.

The bottleneck distance is computed exactly: a candidate tolerance ``delta``
admits a matching iff, after deleting some bars of length ``<= 2*delta``, the
remaining bars biject so that matched intervals contain each other's
``delta``-shrinkings.  Feasibility for one candidate is a maximum bipartite
matching; the optimum is the smallest feasible value among the finitely many
endpoint differences and half-lengths.  The shift-quotient metric minimises
the bottleneck distance over global translations of one barcode, scanning the
finite candidate set of endpoint differences together with all their
pairwise midpoints (the distance is piecewise linear in the shift with slopes
-1, 0, 1, so its minimum is attained there).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

from .matching import max_bipartite_matching
from .novikov import format_rational, parse_rational

__all__ = [
    "INF",
    "NEG_INF",
    "Bar",
    "Barcode",
    "boundary_depth",
    "bar_length_spectrum",
    "shift_barcode",
    "collapse_degrees",
    "bottleneck_distance",
    "interleaving_distance",
    "shifted_bottleneck",
    "brute_force_bottleneck",
]


class _Infinity:
    """Positive infinity sentinel compatible with every exact endpoint type."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("floerbar.INF")

    def __neg__(self):
        return NEG_INF

    def __add__(self, other):
        if other is NEG_INF:
            raise ArithmeticError("inf + (-inf)")
        return self

    __radd__ = __add__

    def __sub__(self, other):
        if other is self:
            raise ArithmeticError("inf - inf")
        return self

    def __rsub__(self, other):
        return NEG_INF

    def __repr__(self):
        return "inf"


class _NegInfinity:
    """Negative infinity sentinel; marks spectral invariants of the zero class."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __lt__(self, other):
        return other is not self

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("floerbar.NEG_INF")

    def __neg__(self):
        return INF

    def __repr__(self):
        return "-inf"


INF = _Infinity()
NEG_INF = _NegInfinity()


def _abs(x):
    zero = x - x
    return -x if x < zero else x


def _halve(x):
    return x * Fraction(1, 2)


@dataclass(frozen=True)
class Bar:
    """Half-open interval ``(left, right]`` (or ``(left, inf)``) in one degree."""

    left: object
    right: object
    degree: int = 0
    multiplicity: int = 1

    def __post_init__(self) -> None:
        if self.multiplicity < 1:
            raise ValueError("multiplicity must be positive")
        if not self.is_infinite and not (self.left < self.right):
            raise ValueError(f"empty bar ({self.left}, {self.right}]")

    @property
    def is_infinite(self) -> bool:
        return self.right is INF

    @property
    def length(self):
        return INF if self.is_infinite else self.right - self.left

    def shifted(self, c) -> "Bar":
        right = INF if self.is_infinite else self.right - c
        return Bar(self.left - c, right, self.degree, self.multiplicity)

    def to_json(self) -> dict:
        return {
            "left": _endpoint_to_json(self.left),
            "right": "inf" if self.is_infinite else _endpoint_to_json(self.right),
            "degree": self.degree,
            "mult": self.multiplicity,
        }


def _endpoint_to_json(x):
    if isinstance(x, Fraction):
        return format_rational(x)
    if hasattr(x, "to_json"):
        return x.to_json()
    return format_rational(Fraction(x))


def _endpoint_from_json(data):
    if isinstance(data, list):
        from .exactpi import PiRational

        return PiRational.from_json(data)
    return parse_rational(data)


def _bar_sort_key(bar: Bar):
    return (bar.degree, _OrderToken(bar.left), _OrderToken(bar.right))


class _OrderToken:
    """Total-order adapter so heterogeneous exact endpoints sort stably."""

    __slots__ = ("value",)

    def __init__(self, value):
        self.value = value

    def __lt__(self, other):
        return self.value < other.value

    def __eq__(self, other):
        return self.value == other.value


class Barcode:
    """Canonical multiset of bars: sorted by (degree, left, right), merged."""

    __slots__ = ("bars",)

    def __init__(self, bars: Iterable[Bar] = ()) -> None:
        merged = {}
        for bar in bars:
            key = (bar.degree, bar.left, bar.right)
            merged[key] = merged.get(key, 0) + bar.multiplicity
        canon = [Bar(left, right, degree, mult)
                 for (degree, left, right), mult in merged.items()]
        canon.sort(key=_bar_sort_key)
        object.__setattr__(self, "bars", tuple(canon))

    def __iter__(self):
        return iter(self.bars)

    def __len__(self) -> int:
        return sum(bar.multiplicity for bar in self.bars)

    def __eq__(self, other) -> bool:
        return isinstance(other, Barcode) and self.bars == other.bars

    def __hash__(self) -> int:
        return hash(self.bars)

    def __repr__(self) -> str:
        inner = ", ".join(
            f"deg {b.degree}: ({b.left}, {b.right}]" + (f" x{b.multiplicity}" if b.multiplicity > 1 else "")
            for b in self.bars
        )
        return f"Barcode[{inner}]"

    def expand(self) -> List[Bar]:
        """Bars with multiplicity one, repeated."""
        out = []
        for bar in self.bars:
            out.extend([Bar(bar.left, bar.right, bar.degree)] * bar.multiplicity)
        return out

    def in_degree(self, degree: int) -> "Barcode":
        return Barcode(b for b in self.bars if b.degree == degree)

    def degrees(self) -> Tuple[int, ...]:
        return tuple(sorted({b.degree for b in self.bars}))

    def finite_bars(self) -> List[Bar]:
        return [b for b in self.expand() if not b.is_infinite]

    def infinite_bars(self) -> List[Bar]:
        return [b for b in self.expand() if b.is_infinite]

    def to_json(self) -> dict:
        return {"bars": [bar.to_json() for bar in self.bars]}

    @classmethod
    def from_json(cls, data: dict) -> "Barcode":
        bars = []
        for item in data["bars"]:
            left = _endpoint_from_json(item["left"])
            right = INF if item["right"] == "inf" else _endpoint_from_json(item["right"])
            bars.append(Bar(left, right, int(item.get("degree", 0)), int(item.get("mult", 1))))
        return cls(bars)


def boundary_depth(barcode: Barcode):
    """Maximal length of a finite bar; 0 when there is none."""
    lengths = [b.length for b in barcode.finite_bars()]
    if not lengths:
        return Fraction(0)
    return max(lengths)


def bar_length_spectrum(barcode: Barcode) -> Tuple:
    """Finite bar lengths in increasing order, then one ``INF`` per infinite bar."""
    finite = sorted((b.length for b in barcode.finite_bars()), key=_OrderToken)
    return tuple(finite) + tuple(INF for _ in barcode.infinite_bars())


def shift_barcode(barcode: Barcode, c) -> Barcode:
    """Translate every endpoint by ``-c``; infinite right endpoints stay put."""
    return Barcode(bar.shifted(c) for bar in barcode.bars)


def collapse_degrees(barcode: Barcode, modulus: int) -> Barcode:
    """Reduce bar degrees mod ``modulus`` (for shift-quotient comparisons of
    one fundamental domain against another)."""
    if modulus < 1:
        raise ValueError("modulus must be positive")
    return Barcode(Bar(b.left, b.right, b.degree % modulus, b.multiplicity)
                   for b in barcode.bars)


# ---------------------------------------------------------------------------
# bottleneck distance
# ---------------------------------------------------------------------------


def _bar_matching_cost(a: Bar, b: Bar):
    """Smallest delta with ``a`` inside the delta-thickening of ``b`` and vice
    versa; INF when one bar is finite and the other is not."""
    if a.is_infinite != b.is_infinite:
        return INF
    left = _abs(a.left - b.left)
    if a.is_infinite:
        return left
    right = _abs(a.right - b.right)
    return max(left, right, key=_OrderToken)


def _deletion_cost(bar: Bar):
    """Smallest delta allowing ``bar`` to be deleted (length <= 2*delta)."""
    return INF if bar.is_infinite else _halve(bar.length)


def _delta_feasible(bars1: Sequence[Bar], bars2: Sequence[Bar], delta,
                    degree_sensitive: bool) -> bool:
    n1, n2 = len(bars1), len(bars2)
    # Left side: bars1 then n2 diagonal slots; right side: bars2 then n1 slots.
    adjacency: List[List[int]] = []
    deletable2 = [not (_deletion_cost(b) > delta) for b in bars2]
    for a in bars1:
        nbrs = []
        for j, b in enumerate(bars2):
            if degree_sensitive and a.degree != b.degree:
                continue
            if not (_bar_matching_cost(a, b) > delta):
                nbrs.append(j)
        if not (_deletion_cost(a) > delta):
            nbrs.extend(range(n2, n2 + n1))
        adjacency.append(nbrs)
    for j in range(n2):
        # diagonal slot for bars2[j]: absorbs it when deletable, and can
        # always pair off with a diagonal slot on the other side
        nbrs = [j] if deletable2[j] else []
        nbrs.extend(range(n2, n2 + n1))
        adjacency.append(nbrs)
    match = max_bipartite_matching(n1 + n2, n2 + n1, adjacency)
    return all(v != -1 for v in match)


def _candidate_deltas(bars1: Sequence[Bar], bars2: Sequence[Bar],
                      degree_sensitive: bool) -> List:
    seen = set()
    out = []

    def push(x):
        if x is INF:
            return
        if x not in seen:
            seen.add(x)
            out.append(x)

    zero = Fraction(0)
    push(zero)
    for a in bars1:
        push(_deletion_cost(a))
    for b in bars2:
        push(_deletion_cost(b))
    for a in bars1:
        for b in bars2:
            if degree_sensitive and a.degree != b.degree:
                continue
            if a.is_infinite != b.is_infinite:
                continue
            push(_abs(a.left - b.left))
            if not a.is_infinite:
                push(_abs(a.right - b.right))
    out.sort(key=_OrderToken)
    return out


def bottleneck_distance(b1: Barcode, b2: Barcode, degree_sensitive: bool = True):
    """Exact bottleneck distance; ``INF`` when no tolerance works (mismatched
    infinite-bar counts)."""
    bars1, bars2 = b1.expand(), b2.expand()
    candidates = _candidate_deltas(bars1, bars2, degree_sensitive)
    lo, hi = 0, len(candidates) - 1
    if not candidates:
        return Fraction(0)
    if not _delta_feasible(bars1, bars2, candidates[hi], degree_sensitive):
        return INF
    best = candidates[hi]
    while lo <= hi:
        mid = (lo + hi) // 2
        if _delta_feasible(bars1, bars2, candidates[mid], degree_sensitive):
            best = candidates[mid]
            hi = mid - 1
        else:
            lo = mid + 1
    return best


def interleaving_distance(b1: Barcode, b2: Barcode):
    """The interleaving distance of persistence modules coincides with the
    degree-sensitive bottleneck distance of their barcodes; exposed as an
    alias with its own name."""
    return bottleneck_distance(b1, b2, degree_sensitive=True)


def _all_endpoints(bars: Sequence[Bar]) -> List:
    out = []
    for b in bars:
        out.append(b.left)
        if not b.is_infinite:
            out.append(b.right)
    return out


def shifted_bottleneck(b1: Barcode, b2: Barcode, degree_sensitive: bool = True,
                       debug: bool = False):
    """Minimise ``bottleneck(b1, shift(b2, c))`` over shifts ``c``.

    Returns ``(distance, best_shift)``; the smallest optimal shift is
    reported.  The candidate shifts are all endpoint differences
    ``e2 - e1`` plus every pairwise midpoint, which exhausts the kinks of the
    piecewise linear shift-to-distance function (slopes -1, 0, 1).  With
    ``debug`` the slope bound is asserted by sampling between consecutive
    candidates: the distance there is 1-Lipschitz-consistent and never
    undercuts the reported minimum.
    """
    e1, e2 = _all_endpoints(b1.expand()), _all_endpoints(b2.expand())
    if not e1 or not e2:
        zero = Fraction(0)
        return bottleneck_distance(b1, b2, degree_sensitive), zero
    diffs = []
    seen = set()
    for y in e2:
        for x in e1:
            d = y - x
            if d not in seen:
                seen.add(d)
                diffs.append(d)
    candidates = list(diffs)
    for a, b in itertools.combinations(diffs, 2):
        m = _halve(a + b)
        if m not in seen:
            seen.add(m)
            candidates.append(m)
    zero = e1[0] - e1[0]
    if zero not in seen:
        candidates.append(zero)
    candidates.sort(key=_OrderToken)

    def dist_at(c):
        return bottleneck_distance(b1, shift_barcode(b2, c), degree_sensitive)

    best = None
    best_c = None
    values = []
    for c in candidates:
        d = dist_at(c)
        values.append(d)
        if best is None or d < best:
            best, best_c = d, c
    if debug:
        for (c0, d0), (c1, d1) in zip(zip(candidates, values),
                                      zip(candidates[1:], values[1:])):
            mid = _halve(c0 + c1)
            dm = dist_at(mid)
            if dm is not INF and best is not INF:
                assert not (dm < best), "shift candidate set missed a minimum"
            if INF not in (d0, dm):
                assert not (_abs(dm - d0) > _abs(mid - c0)), "slope bound violated"
            if INF not in (d1, dm):
                assert not (_abs(d1 - dm) > _abs(c1 - mid)), "slope bound violated"
    return best, best_c


# ---------------------------------------------------------------------------
# exhaustive oracle
# ---------------------------------------------------------------------------


def brute_force_bottleneck(b1: Barcode, b2: Barcode, degree_sensitive: bool = True):
    """Bottleneck distance by exhausting all partial matchings.

    Independent of the candidate/matching machinery above; practical for
    barcodes with at most ~7 bars.
    """
    bars1, bars2 = b1.expand(), b2.expand()

    def solve(i: int, free2: Tuple[int, ...]):
        if i == len(bars1):
            cost = Fraction(0)
            for j in free2:
                cost = max(cost, _deletion_cost(bars2[j]), key=_OrderToken)
            return cost
        a = bars1[i]
        best = INF
        drop = _deletion_cost(a)
        if not (drop is INF):
            sub = solve(i + 1, free2)
            cand = max(drop, sub, key=_OrderToken) if sub is not INF else INF
            if cand < best:
                best = cand
        for idx, j in enumerate(free2):
            b = bars2[j]
            if degree_sensitive and a.degree != b.degree:
                continue
            pair_cost = _bar_matching_cost(a, b)
            if pair_cost is INF:
                continue
            sub = solve(i + 1, free2[:idx] + free2[idx + 1:])
            if sub is INF:
                continue
            cand = max(pair_cost, sub, key=_OrderToken)
            if cand < best:
                best = cand
        return best

    return solve(0, tuple(range(len(bars2))))
