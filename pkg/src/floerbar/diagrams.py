"""Combinatorial two-curve diagrams on the sphere or the annulus.

A diagram records two embedded closed curves K and L meeting transversally:
the cyclic order of the crossing points along each curve, the faces of the
arrangement as oriented boundary walks (face on the left of every traversed
arc), and an exact positive area per face.  On the sphere each curve must
bisect the total area; on the annulus two designated faces carry the
boundary circles.

Lunes -- index-one bigons between the curves -- are enumerated by brute
force over boundary data: a path along K from x to y, a path along L back,
each with bounded winding.  Such a boundary determines a face-wise winding
function w up to a global constant (pinned on the annulus by requiring w = 0
on the boundary faces); the candidate is a lune iff some constant offset
makes w nonnegative with index one, the index being twice the sum of the
mean corner windings at the two endpoints.  An embedded bigon has w = 1
inside and three zero corners at each end, hence index 2*(1/4 + 1/4) = 1;
that sanity case anchors the criterion, and the bundled equator examples
plus the d*d = 0 requirement gate it.

The filtered complex of a diagram has the crossing points as generators,
degrees from a two-colouring of the lune graph, actions propagated along a
spanning forest by "action drop = lune area", and the differential counting
lunes mod 2 grouped by recapping exponent.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from .complexes import FilteredComplex, Generator
from .novikov import NovikovScalar, NovikovSpec, format_rational, parse_rational
from .persistence import boundary_depth

__all__ = [
    "TwoCurveDiagram",
    "Lune",
    "DiagramError",
    "InadmissibleDiagramError",
    "validate_diagram",
    "enumerate_lunes",
    "build_complex",
    "diagram_beta",
    "diagram_gamma",
    "sphere_spec",
    "sphere_diagram_from_meander",
    "meander_faces",
    "equator_pair_diagram",
    "equator_pair_annulus",
    "symmetric_equator_areas",
    "annulus_example_areas",
    "two_circle_diagram",
    "relabel_diagram",
]

# Quantum variable of the sphere theory: degree 2, action one half of the
# unit total area.
SPHERE_DEGREE_STEP = 2
SPHERE_ACTION_STEP = Fraction(1, 2)


def sphere_spec() -> NovikovSpec:
    return NovikovSpec("q", SPHERE_DEGREE_STEP, SPHERE_ACTION_STEP)


class DiagramError(ValueError):
    """Structural invariant of a diagram failed."""


class InadmissibleDiagramError(ValueError):
    """The diagram admits no consistent filtered complex."""


Step = Tuple[str, int, int, int]  # (curve "K"/"L", from point, to point, direction +-1)


@dataclass(frozen=True)
class TwoCurveDiagram:
    surface: str                       # "sphere" | "annulus"
    order_k: Tuple[int, ...]
    order_l: Tuple[int, ...]
    faces: Mapping[str, Tuple[Step, ...]]
    areas: Mapping[str, Fraction]
    boundary_faces: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "order_k", tuple(self.order_k))
        object.__setattr__(self, "order_l", tuple(self.order_l))
        object.__setattr__(self, "faces",
                           {name: tuple(tuple(s) for s in walk)
                            for name, walk in self.faces.items()})
        object.__setattr__(self, "areas",
                           {name: Fraction(a) for name, a in self.areas.items()})
        object.__setattr__(self, "boundary_faces", tuple(self.boundary_faces))

    @property
    def points(self) -> Tuple[int, ...]:
        return tuple(sorted(self.order_k))

    def to_json(self) -> dict:
        data = {
            "surface": self.surface,
            "order_k": list(self.order_k),
            "order_l": list(self.order_l),
            "faces": {name: [list(s) for s in walk] for name, walk in self.faces.items()},
            "areas": {name: format_rational(a) for name, a in self.areas.items()},
        }
        if self.boundary_faces:
            data["boundary_faces"] = list(self.boundary_faces)
        return data

    @classmethod
    def from_json(cls, data: dict) -> "TwoCurveDiagram":
        return cls(
            surface=data["surface"],
            order_k=tuple(data["order_k"]),
            order_l=tuple(data["order_l"]),
            faces={name: tuple(tuple(step) for step in walk)
                   for name, walk in data["faces"].items()},
            areas={name: parse_rational(a) for name, a in data["areas"].items()},
            boundary_faces=tuple(data.get("boundary_faces", ())),
        )


@dataclass(frozen=True)
class Lune:
    """Index-one bigon from ``source`` to ``target`` with winding data."""

    source: int
    target: int
    k_path: Tuple[int, int]            # (direction, extra full windings)
    l_path: Tuple[int, int]
    w: Tuple[Tuple[str, int], ...]     # face -> winding, sorted, zeros dropped
    area: Fraction

    def winding(self, face: str) -> int:
        return dict(self.w).get(face, 0)


# ---------------------------------------------------------------------------
# geometry cache
# ---------------------------------------------------------------------------


class _Geometry:
    """Arc tables, face incidences and corner lists of a diagram."""

    def __init__(self, d: TwoCurveDiagram):
        self.d = d
        self.m = len(d.order_k)
        self.pos = {"K": {p: i for i, p in enumerate(d.order_k)},
                    "L": {p: i for i, p in enumerate(d.order_l)}}
        self.order = {"K": d.order_k, "L": d.order_l}
        # arc i of a curve runs from order[i] to order[i+1]
        self.arcs = {curve: [(seq[i], seq[(i + 1) % self.m]) for i in range(self.m)]
                     for curve, seq in self.order.items()}
        self.left: Dict[Tuple[str, int], str] = {}
        self.right: Dict[Tuple[str, int], str] = {}
        self.corners: Dict[int, List[str]] = {p: [] for p in d.order_k}
        for name, walk in d.faces.items():
            for idx, step in enumerate(walk):
                curve, frm, to, direction = step
                arc = self.step_arc(step)
                side = self.left if direction == 1 else self.right
                if (curve, arc) in side:
                    raise DiagramError(
                        f"arc {curve}{arc} traversed twice in direction {direction}")
                side[(curve, arc)] = name
                nxt = walk[(idx + 1) % len(walk)]
                corner = to
                if nxt[1] != corner:
                    raise DiagramError(
                        f"walk of face {name} breaks at step {step} -> {nxt}")
                self.corners[corner].append(name)

    def step_arc(self, step: Step) -> int:
        curve, frm, to, direction = step
        pos = self.pos[curve]
        if frm not in pos or to not in pos:
            raise DiagramError(f"step {step} uses unknown point")
        if direction == 1:
            arc = pos[frm]
            expected = self.order[curve][(arc + 1) % self.m]
            if expected != to:
                raise DiagramError(f"step {step} is not a positive arc of {curve}")
        elif direction == -1:
            arc = pos[to]
            expected = self.order[curve][(arc + 1) % self.m]
            if expected != frm:
                raise DiagramError(f"step {step} is not a reversed arc of {curve}")
        else:
            raise DiagramError(f"step {step} has invalid direction")
        return arc

    def face_components(self, across: str) -> List[FrozenSet[str]]:
        """Connected components of faces glued across arcs of one curve."""
        parent = {name: name for name in self.d.faces}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i in range(self.m):
            key = (across, i)
            a, b = self.left.get(key), self.right.get(key)
            if a is None or b is None:
                raise DiagramError(f"arc {across}{i} missing a side")
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
        groups: Dict[str, set] = {}
        for name in self.d.faces:
            groups.setdefault(find(name), set()).add(name)
        return [frozenset(g) for g in groups.values()]


def validate_diagram(d: TwoCurveDiagram) -> None:
    """Check all structural invariants; raise DiagramError on the first failure."""
    m = len(d.order_k)
    if m < 2 or m % 2 != 0:
        raise DiagramError("transverse closed curves cross an even number >= 2 of times")
    if sorted(d.order_k) != sorted(d.order_l):
        raise DiagramError("the two cyclic orders must visit the same point set")
    if len(set(d.order_k)) != m or len(set(d.order_l)) != m:
        raise DiagramError("each point appears exactly once per cyclic order")
    if d.surface not in ("sphere", "annulus"):
        raise DiagramError(f"unknown surface {d.surface!r}")
    for name, area in d.areas.items():
        if area <= 0:
            raise DiagramError(f"face {name} has non-positive area")
    if set(d.areas) != set(d.faces):
        raise DiagramError("areas and faces must list the same names")
    geo = _Geometry(d)  # walk coherence, arc incidences, corners
    for p, corner_faces in geo.corners.items():
        if len(corner_faces) != 4:
            raise DiagramError(f"point {p} has {len(corner_faces)} corners, expected 4")
    for name, walk in d.faces.items():
        for idx, step in enumerate(walk):
            nxt = walk[(idx + 1) % len(walk)]
            if step[0] == nxt[0]:
                raise DiagramError(f"face {name} has consecutive arcs of one curve")
    # Euler count: crossings - arcs + disk faces
    if d.surface == "sphere":
        if d.boundary_faces:
            raise DiagramError("sphere diagrams have no boundary faces")
        if m - 2 * m + len(d.faces) != 2:
            raise DiagramError("Euler count fails for the sphere")
        _check_bisection(d, geo)
    else:
        if len(set(d.boundary_faces)) != 2:
            raise DiagramError("annulus diagrams need two distinct boundary faces")
        for bf in d.boundary_faces:
            if bf not in d.faces:
                raise DiagramError(f"unknown boundary face {bf!r}")
        if m - 2 * m + len(d.faces) - 2 != 0:
            raise DiagramError("Euler count fails for the annulus")


def _check_bisection(d: TwoCurveDiagram, geo: _Geometry) -> None:
    total = sum(d.areas.values())
    half = total / 2
    for curve, across in (("K", "L"), ("L", "K")):
        comps = geo.face_components(across)
        if len(comps) != 2:
            raise DiagramError(f"curve {curve} does not split the sphere into two sides")
        for comp in comps:
            side = sum(d.areas[f] for f in comp)
            if side != half:
                raise DiagramError(
                    f"curve {curve} does not bisect the area: side sums to {side}")


# ---------------------------------------------------------------------------
# lune enumeration
# ---------------------------------------------------------------------------


def _path_traversals(geo: _Geometry, curve: str, start: int, end: int,
                     direction: int, windings: int) -> Dict[int, int]:
    """Net arc traversal counts of the monotone path start -> end."""
    m = geo.m
    pos = geo.pos[curve]
    counts: Dict[int, int] = {}
    i, j = pos[start], pos[end]
    if direction == 1:
        steps = (j - i) % m
        arcs = [(i + t) % m for t in range(steps)]
    else:
        steps = (i - j) % m
        arcs = [(i - 1 - t) % m for t in range(steps)]
    for a in arcs:
        counts[a] = counts.get(a, 0) + direction
    for a in range(m):
        counts[a] = counts.get(a, 0) + direction * windings
    return {a: c for a, c in counts.items() if c}


def _solve_winding(geo: _Geometry, traversals: Dict[Tuple[str, int], int]
                   ) -> Optional[Dict[str, int]]:
    """Solve w(left) - w(right) = net traversal on every arc; None if inconsistent."""
    faces = list(geo.d.faces)
    w: Dict[str, int] = {faces[0]: 0}
    frontier = [faces[0]]
    adjacency: Dict[str, List[Tuple[str, int]]] = {name: [] for name in faces}
    for curve in ("K", "L"):
        for i in range(geo.m):
            n = traversals.get((curve, i), 0)
            lf, rf = geo.left[(curve, i)], geo.right[(curve, i)]
            adjacency[rf].append((lf, n))
            adjacency[lf].append((rf, -n))
    while frontier:
        cur = frontier.pop()
        for nbr, jump in adjacency[cur]:
            val = w[cur] + jump
            if nbr in w:
                if w[nbr] != val:
                    return None
            else:
                w[nbr] = val
                frontier.append(nbr)
    if len(w) != len(faces):
        raise DiagramError("face adjacency graph is disconnected")
    return w


def _lune_index_numerator(geo: _Geometry, w: Dict[str, int], x: int, y: int) -> int:
    """4 * (m_x + m_y): twice the sum of all eight corner windings."""
    return (2 * sum(w[f] for f in geo.corners[x])
            + 2 * sum(w[f] for f in geo.corners[y])) // 2


def enumerate_lunes(d: TwoCurveDiagram, max_wind: int = 2) -> Tuple[Lune, ...]:
    """All index-one nonnegative-winding bigons with bounded full windings.

    For each ordered point pair and each pair of monotone boundary paths
    (along K from x to y, along L from y to x), the face winding function is
    solved from the jump conditions and accepted if a constant offset makes
    it nonnegative with index one (offset forced to zero on the annulus by
    the boundary faces).
    """
    validate_diagram(d)
    geo = _Geometry(d)
    lunes: List[Lune] = []
    seen = set()
    points = d.points
    for x, y in itertools.permutations(points, 2):
        for dk, dl in itertools.product((1, -1), repeat=2):
            for jk in range(max_wind + 1):
                for jl in range(max_wind + 1 - jk):
                    traversals: Dict[Tuple[str, int], int] = {}
                    for a, c in _path_traversals(geo, "K", x, y, dk, jk).items():
                        traversals[("K", a)] = c
                    for a, c in _path_traversals(geo, "L", y, x, dl, jl).items():
                        traversals[("L", a)] = traversals.get(("L", a), 0) + c
                    w = _solve_winding(geo, traversals)
                    if w is None:
                        continue
                    w = _normalize_offset(d, geo, w, x, y)
                    if w is None:
                        continue
                    key = (x, y, tuple(sorted(w.items())))
                    # the winding function determines the boundary traversal,
                    # so distinct parameters never collide
                    if key in seen:
                        raise AssertionError(f"duplicate lune candidate {key}")
                    seen.add(key)
                    area = sum((d.areas[f] * c for f, c in w.items()), Fraction(0))
                    if area <= 0:
                        raise DiagramError("nonzero nonnegative winding with zero area")
                    lunes.append(Lune(
                        source=x, target=y,
                        k_path=(dk, jk), l_path=(dl, jl),
                        w=tuple(sorted((f, c) for f, c in w.items() if c)),
                        area=area,
                    ))
    lunes.sort(key=lambda l: (l.source, l.target, l.area, l.w))
    return tuple(lunes)


def _normalize_offset(d: TwoCurveDiagram, geo: _Geometry, w: Dict[str, int],
                      x: int, y: int) -> Optional[Dict[str, int]]:
    if d.surface == "annulus":
        bf0, bf1 = d.boundary_faces
        if w[bf0] != w[bf1]:
            return None
        shift = -w[bf0]
    else:
        four_means = _lune_index_numerator(geo, w, x, y)
        # index 2(m_x + m_y) = four_means / 2 + 4*shift must equal 1
        num = 2 - four_means
        if num % 8 != 0:
            return None
        shift = num // 8
    shifted = {f: c + shift for f, c in w.items()}
    if any(c < 0 for c in shifted.values()):
        return None
    if _lune_index_numerator(geo, shifted, x, y) != 2:
        return None
    if all(c == 0 for c in shifted.values()):
        return None
    return shifted


# ---------------------------------------------------------------------------
# the filtered complex of a diagram
# ---------------------------------------------------------------------------


def _sphere_degrees(points: Sequence[int], lunes: Sequence[Lune]) -> Dict[int, int]:
    """Proper 2-colouring of the lune graph (the quantum variable has degree
    two, so only parity matters); each component is anchored at its smallest
    point, whose colour is that point's label parity, putting point 1 in
    degree 0."""
    graph: Dict[int, set] = {p: set() for p in points}
    for lune in lunes:
        graph[lune.source].add(lune.target)
        graph[lune.target].add(lune.source)
    colour: Dict[int, int] = {}
    for start in sorted(graph):
        if start in colour:
            continue
        colour[start] = (start - 1) % 2
        stack = [start]
        while stack:
            cur = stack.pop()
            for nbr in graph[cur]:
                if nbr in colour:
                    if colour[nbr] == colour[cur]:
                        raise InadmissibleDiagramError("lune graph is not bipartite")
                else:
                    colour[nbr] = 1 - colour[cur]
                    stack.append(nbr)
    return colour


def _annulus_degrees(points: Sequence[int], lunes: Sequence[Lune]) -> Dict[int, int]:
    """Exact integer grading: every lune drops the degree by one and there is
    no recapping to absorb defects.  Each component is shifted so its
    smallest degree is 0."""
    degree: Dict[int, int] = {}
    adjacency: Dict[int, List[Tuple[int, int]]] = {p: [] for p in points}
    for lune in lunes:
        adjacency[lune.source].append((lune.target, -1))
        adjacency[lune.target].append((lune.source, +1))
    for start in sorted(adjacency):
        if start in degree:
            continue
        component = [start]
        degree[start] = 0
        stack = [start]
        while stack:
            cur = stack.pop()
            for nbr, jump in adjacency[cur]:
                val = degree[cur] + jump
                if nbr in degree:
                    if degree[nbr] != val:
                        raise InadmissibleDiagramError(
                            "lune degrees are inconsistent around a cycle")
                else:
                    degree[nbr] = val
                    component.append(nbr)
                    stack.append(nbr)
        base = min(degree[p] for p in component)
        for p in component:
            degree[p] -= base
    return degree


def _lune_exponent(degree: Dict[int, int], lune: Lune,
                   degree_step: Optional[int]) -> int:
    """Recapping exponent forced by the grading: the differential lowers the
    degree by exactly one, counting the quantum variable."""
    dd = degree[lune.source] - 1 - degree[lune.target]
    if degree_step is None:
        if dd != 0:
            raise InadmissibleDiagramError(
                f"lune {lune.source}->{lune.target} breaks the degree rule"
                " and the surface admits no recapping")
        return 0
    if dd % degree_step != 0:
        raise InadmissibleDiagramError(
            f"lune {lune.source}->{lune.target} breaks the degree rule mod"
            f" {degree_step}")
    return dd // degree_step


def _propagate_actions(points: Sequence[int], lunes: Sequence[Lune],
                       degree: Dict[int, int], degree_step: Optional[int],
                       action_step: Optional[Fraction]) -> Dict[int, Fraction]:
    """Actions along a spanning forest of the lune graph.

    Each lune pins the action drop of its endpoints exactly: drop = area +
    exponent * action_step with the grading-forced recapping exponent.  The
    smallest point of each component sits at action zero.
    """
    adjacency: Dict[int, List[Tuple[Lune, int]]] = {p: [] for p in points}
    for lune in lunes:
        e = _lune_exponent(degree, lune, degree_step)
        adjacency[lune.source].append((lune, e))
        adjacency[lune.target].append((lune, e))
    action: Dict[int, Fraction] = {}
    for start in sorted(points):
        if start in action:
            continue
        action[start] = Fraction(0)
        stack = [start]
        while stack:
            cur = stack.pop()
            for lune, e in sorted(adjacency[cur],
                                  key=lambda le: (le[0].area, le[0].source, le[0].target)):
                drop = lune.area + (e * action_step if action_step else 0)
                if lune.source == cur and lune.target not in action:
                    action[lune.target] = action[cur] - drop
                    stack.append(lune.target)
                elif lune.target == cur and lune.source not in action:
                    action[lune.source] = action[cur] + drop
                    stack.append(lune.source)
    return action


def build_complex(d: TwoCurveDiagram, max_wind: int = 2) -> FilteredComplex:
    """Filtered complex of a diagram; raises InadmissibleDiagramError when no
    consistent degree/action/differential assignment exists.

    Every lune -- including pairs that cancel mod 2 -- must satisfy the
    index/area compatibility "action drop = area + exponent * recap area"
    with the exponent forced by the grading; a violation marks the diagram
    inadmissible rather than producing a skewed complex.
    """
    lunes = enumerate_lunes(d, max_wind)
    points = d.points
    spec = sphere_spec() if d.surface == "sphere" else None
    if d.surface == "sphere":
        degree = _sphere_degrees(points, lunes)
    else:
        degree = _annulus_degrees(points, lunes)
    dstep = spec.degree_step if spec else None
    astep = spec.action_step if spec else None
    action = _propagate_actions(points, lunes, degree, dstep, astep)

    entries: Dict[Tuple[int, int], int] = {}
    exponents: Dict[Tuple[int, int], int] = {}
    for lune in lunes:
        e = _lune_exponent(degree, lune, dstep)
        expected_drop = lune.area + (e * astep if astep else 0)
        if action[lune.source] - action[lune.target] != expected_drop:
            raise InadmissibleDiagramError(
                f"lune {lune.source}->{lune.target} (area {lune.area}) is"
                " incompatible with the action assignment: same-endpoint lunes"
                " must share their area in each recap class")
        key = (lune.source, lune.target)
        entries[key] = entries.get(key, 0) ^ 1
        exponents[key] = e

    differential: Dict[str, List[Tuple[NovikovScalar, str]]] = {}
    for (src, tgt), parity in sorted(entries.items()):
        if not parity:
            continue
        coeff = NovikovScalar.monomial(spec, exponents[(src, tgt)])
        differential.setdefault(f"a{src}", []).append((coeff, f"a{tgt}"))

    gens = [Generator(f"a{p}", degree[p], action[p]) for p in points]
    cx = FilteredComplex(spec, gens, differential)
    try:
        cx.validate()
    except Exception as exc:
        raise InadmissibleDiagramError(f"diagram complex invalid: {exc}") from exc
    return cx


def diagram_beta(d: TwoCurveDiagram, max_wind: int = 2) -> Fraction:
    """Boundary depth of the diagram's filtered complex."""
    from .complexes import barcode

    return boundary_depth(barcode(build_complex(d, max_wind)))


def diagram_gamma(d: TwoCurveDiagram, max_wind: int = 2) -> Fraction:
    """Spectral norm of the diagram's complex: infinite-bar gap between the
    fundamental degree 1 and the point degree 0.  Sphere only."""
    from .complexes import gamma

    if d.surface != "sphere":
        raise InadmissibleDiagramError(
            "the spectral norm needs the sphere theory (actions on the annulus"
            " are only defined per component)")
    return gamma(build_complex(d, max_wind), 1, 0)


# ---------------------------------------------------------------------------
# constructors: meanders, the bundled examples
# ---------------------------------------------------------------------------


def _face_walks_from_meander(m: int, north: Mapping[int, int], south: Mapping[int, int]
                             ) -> Tuple[Tuple[int, ...], Dict[str, Tuple[Step, ...]], Dict[str, str]]:
    """Trace the faces of the arrangement (K = circle 1..m, L = alternating
    chords) from the rotation system of the planar embedding.

    Returns (order_l, face walks, face hemisphere tags).  Face names are
    F1, F2, ... in a canonical order.
    """
    order_k = tuple(range(1, m + 1))
    # L visits points alternating north/south chords, starting north from 1
    order_l = [1]
    use_north = True
    while True:
        cur = order_l[-1]
        nxt = north[cur] if use_north else south[cur]
        use_north = not use_north
        if nxt == 1:
            break
        order_l.append(nxt)
        if len(order_l) > m:
            raise DiagramError("chord matchings do not close into one curve")
    if len(order_l) != m:
        raise DiagramError("chord matchings do not form a single closed curve")
    order_l = tuple(order_l)

    posk = {p: i for i, p in enumerate(order_k)}
    posl = {p: i for i, p in enumerate(order_l)}
    arcs = {"K": [(order_k[i], order_k[(i + 1) % m]) for i in range(m)],
            "L": [(order_l[i], order_l[(i + 1) % m]) for i in range(m)]}
    # L alternates hemispheres by construction, starting with a north chord
    hemiline = ["N" if i % 2 == 0 else "S" for i in range(m)]
    for i in range(m):
        a, b = arcs["L"][i]
        expected = north if hemiline[i] == "N" else south
        if expected.get(a) != b:
            raise DiagramError("chord matchings do not alternate hemispheres")

    def dart(curve: str, arc: int, orient: int):
        return (curve, arc, orient)

    def head(dartv):
        curve, arc, orient = dartv
        a, b = arcs[curve][arc]
        return b if orient == 1 else a

    def reverse(dartv):
        curve, arc, orient = dartv
        return (curve, arc, -orient)

    # counterclockwise rotation of outgoing darts at each point, with the
    # north hemisphere drawn as the inside of the circle:
    # [L-dart heading south, K forward, L-dart heading north, K backward]
    rotation: Dict[int, List] = {}
    for p in order_k:
        k_fwd = dart("K", posk[p], 1)
        k_bwd = dart("K", (posk[p] - 1) % m, -1)
        l_fwd = dart("L", posl[p], 1)
        l_bwd = dart("L", (posl[p] - 1) % m, -1)
        fwd_hemi = hemiline[posl[p]]
        l_north = l_fwd if fwd_hemi == "N" else l_bwd
        l_south = l_bwd if fwd_hemi == "N" else l_fwd
        # orientation chosen so that the action drops along the differential:
        # the bigon lunes of the equator pair run from the even crossings to
        # the odd ones
        rotation[p] = [l_south, k_bwd, l_north, k_fwd]

    def next_dart(dartv):
        p = head(dartv)
        rot = rotation[p]
        rev = reverse(dartv)
        return rot[(rot.index(rev) + 1) % 4]

    all_darts = [("K", i, o) for i in range(m) for o in (1, -1)]
    all_darts += [("L", i, o) for i in range(m) for o in (1, -1)]
    unvisited = set(all_darts)
    walks = []
    while unvisited:
        start = min(unvisited)
        orbit = []
        cur = start
        while True:
            orbit.append(cur)
            unvisited.discard(cur)
            cur = next_dart(cur)
            if cur == start:
                break
        walks.append(orbit)

    faces: Dict[str, Tuple[Step, ...]] = {}
    hemis: Dict[str, str] = {}
    for idx, orbit in enumerate(sorted(walks), start=1):
        steps = []
        tags = set()
        for curve, arc, orient in orbit:
            a, b = arcs[curve][arc]
            frm, to = (a, b) if orient == 1 else (b, a)
            steps.append((curve, frm, to, orient))
            if curve == "L":
                tags.add(hemiline[arc])
        if len(tags) != 1:
            raise DiagramError("face touches chords of both hemispheres")
        name = f"F{idx}"
        faces[name] = tuple(steps)
        hemis[name] = tags.pop()
    return order_l, faces, hemis


def sphere_diagram_from_meander(north: Mapping[int, int], south: Mapping[int, int],
                                areas: Mapping[str, Fraction]) -> TwoCurveDiagram:
    """Sphere diagram of a closed meander: K the round equator through points
    1..m in order, L the closed curve of alternating non-crossing chords."""
    m = len(north) if isinstance(north, dict) else len(dict(north))
    north, south = dict(north), dict(south)
    order_l, faces, _hemis = _face_walks_from_meander(m, north, south)
    return TwoCurveDiagram(
        surface="sphere",
        order_k=tuple(range(1, m + 1)),
        order_l=order_l,
        faces=faces,
        areas=areas,
    )


def meander_faces(north: Mapping[int, int], south: Mapping[int, int]):
    """Face walks and hemisphere tags of a meander; used by samplers and by
    the bundled example constructors to place areas."""
    m = len(dict(north))
    return _face_walks_from_meander(m, dict(north), dict(south))


def _matching_as_map(pairs: Iterable[Tuple[int, int]]) -> Dict[int, int]:
    out: Dict[int, int] = {}
    for a, b in pairs:
        out[a] = b
        out[b] = a
    return out


_EQUATOR_NORTH = _matching_as_map([(1, 4), (2, 3)])
_EQUATOR_SOUTH = _matching_as_map([(1, 2), (3, 4)])


def _equator_face_names() -> Dict[str, str]:
    """Map generated face names to the conventional labels A1..A6 by their
    boundary signatures: A1/A3 the north bigons at corners {4,1}/{2,3}, A5/A6
    the south bigons at {1,2}/{3,4}, A2/A4 the north/south squares."""
    _order_l, faces, hemis = _face_walks_from_meander(4, _EQUATOR_NORTH, _EQUATOR_SOUTH)
    names = {}
    for name, walk in faces.items():
        corners = frozenset(step[1] for step in walk)
        if len(walk) == 4:
            names[name] = "A2" if hemis[name] == "N" else "A4"
        elif corners == frozenset({4, 1}):
            names[name] = "A1"
        elif corners == frozenset({2, 3}):
            names[name] = "A3"
        elif corners == frozenset({1, 2}):
            names[name] = "A5"
        elif corners == frozenset({3, 4}):
            names[name] = "A6"
        else:
            raise DiagramError("unexpected face signature in the equator pair")
    return names


def equator_pair_diagram(areas: Mapping[str, Fraction]) -> TwoCurveDiagram:
    """The four-crossing equator pair with faces labelled A1..A6.

    ``areas`` maps those labels to positive rationals subject to the four
    half-area constraints (each curve bisects the sphere).
    """
    order_l, faces, _h = _face_walks_from_meander(4, _EQUATOR_NORTH, _EQUATOR_SOUTH)
    rename = _equator_face_names()
    faces = {rename[name]: walk for name, walk in faces.items()}
    return TwoCurveDiagram(
        surface="sphere",
        order_k=(1, 2, 3, 4),
        order_l=order_l,
        faces=faces,
        areas={name: Fraction(areas[name]) for name in faces},
    )


def symmetric_equator_areas(eps: Fraction) -> Dict[str, Fraction]:
    """The symmetric area choice: the four bigons get 1/4 - eps, the two
    squares 2*eps."""
    eps = Fraction(eps)
    if not 0 < eps < Fraction(1, 4):
        raise ValueError("eps must lie strictly between 0 and 1/4")
    p = Fraction(1, 4) - eps
    return {"A1": p, "A3": p, "A5": p, "A6": p, "A2": 2 * eps, "A4": 2 * eps}


def equator_pair_annulus(areas: Mapping[str, Fraction]) -> TwoCurveDiagram:
    """The annulus variant: same arrangement, holes punched inside A1 and A5."""
    order_l, faces, _h = _face_walks_from_meander(4, _EQUATOR_NORTH, _EQUATOR_SOUTH)
    rename = _equator_face_names()
    sphere = TwoCurveDiagram(
        surface="sphere",
        order_k=(1, 2, 3, 4),
        order_l=order_l,
        faces={rename[name]: walk for name, walk in faces.items()},
        areas={name: Fraction(areas[name]) for name in rename.values()},
    )
    return TwoCurveDiagram(
        surface="annulus",
        order_k=sphere.order_k,
        order_l=sphere.order_l,
        faces=sphere.faces,
        areas=sphere.areas,
        boundary_faces=("A1", "A5"),
    )


def annulus_example_areas(eps: Fraction) -> Dict[str, Fraction]:
    """Total area one: the two surviving bigons get 1/2 - 2*eps, the rest eps."""
    eps = Fraction(eps)
    if not 0 < eps < Fraction(1, 4):
        raise ValueError("eps must lie strictly between 0 and 1/4")
    big = Fraction(1, 2) - 2 * eps
    return {"A3": big, "A6": big, "A1": eps, "A2": eps, "A4": eps, "A5": eps}


def two_circle_diagram(areas: Optional[Mapping[str, Fraction]] = None) -> TwoCurveDiagram:
    """Two great circles crossing twice; default areas all 1/4."""
    north = _matching_as_map([(1, 2)])
    south = _matching_as_map([(1, 2)])
    order_l, faces, _h = _face_walks_from_meander(2, north, south)
    if areas is None:
        areas = {name: Fraction(1, 4) for name in faces}
    return TwoCurveDiagram(
        surface="sphere",
        order_k=(1, 2),
        order_l=order_l,
        faces=faces,
        areas=areas,
    )


def relabel_diagram(d: TwoCurveDiagram, perm: Mapping[int, int]) -> TwoCurveDiagram:
    """Rename points by a bijection; faces and areas keep their names."""
    return TwoCurveDiagram(
        surface=d.surface,
        order_k=tuple(perm[p] for p in d.order_k),
        order_l=tuple(perm[p] for p in d.order_l),
        faces={name: tuple((c, perm[f], perm[t], o) for (c, f, t, o) in walk)
               for name, walk in d.faces.items()},
        areas=d.areas,
        boundary_faces=d.boundary_faces,
    )
