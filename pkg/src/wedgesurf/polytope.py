"""Polytopes as labeled inequality systems, and exact vertex enumeration.

Every polytope here is written as ``{x : a_i . x <= 1}`` with the origin in
the interior, so a facet is fully described by its rational normal vector
and a label.  Labels survive through all constructors, which is what lets
combinatorial face descriptions be matched against geometry:

* ``("base", i)`` - facet i of a plain factor,
* ``("pair", i, j)`` - facet of a wedge-style construction pairing facet i
  of the left factor with facet j of the right factor,
* ``("lid", "+"|"-")`` - the two ends of a prism.

Constructors build polygons with rational unit-circle vertices, simplices
centered at the origin, wedge products, generalized wedges over a facet,
deformed products and prisms.  ``vertex_enumerate`` solves tight systems
exactly; for simple polytopes each vertex comes annotated with its tight
facet labels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

from .exactkernel import (
    SingularMatrixError,
    Vec,
    dot,
    frac,
    positively_spans,
    rational_str,
    solve_square,
    vec,
    vec_scale,
    vec_sub,
    zero_vec,
)

Label = tuple


def base(i: int) -> Label:
    return ("base", i)


def pair(i: int, j: int) -> Label:
    return ("pair", i, j)


def lid(sign: str) -> Label:
    if sign not in ("+", "-"):
        raise ValueError("lid sign must be '+' or '-'")
    return ("lid", sign)


class UnboundedError(ValueError):
    """The inequality system does not describe a bounded polytope."""


class DegenerateVertexError(ValueError):
    """A candidate tight set failed to produce a valid simple vertex."""


@dataclass(frozen=True)
class HPolytope:
    """A bounded polytope ``{x : normals[i] . x <= 1}`` with labeled facets."""

    dim: int
    normals: tuple[Vec, ...]
    labels: tuple[Label, ...]

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError("dimension must be positive")
        if len(self.normals) != len(self.labels):
            raise ValueError("need one label per facet")
        for a in self.normals:
            if len(a) != self.dim:
                raise ValueError("facet normal of wrong dimension")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("facet labels must be unique")
        if len(set(self.normals)) != len(self.normals):
            raise ValueError("duplicate facet normals")

    @property
    def facet_count(self) -> int:
        return len(self.normals)

    def facet_index(self, label: Label) -> int:
        return self._label_map()[label]

    def _label_map(self) -> dict[Label, int]:
        cached = self.__dict__.get("_labels_cache")
        if cached is None:
            cached = {lb: i for i, lb in enumerate(self.labels)}
            object.__setattr__(self, "_labels_cache", cached)
        return cached

    def is_bounded(self) -> bool:
        return positively_spans(self.normals).spans

    def contains(self, x: Sequence[Fraction], strict: bool = False) -> bool:
        if strict:
            return all(dot(a, x) < 1 for a in self.normals)
        return all(dot(a, x) <= 1 for a in self.normals)

    def tight_set(self, x: Sequence[Fraction]) -> frozenset[Label]:
        return frozenset(
            lb for a, lb in zip(self.normals, self.labels) if dot(a, x) == 1
        )

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "facets": [
                {"label": list(lb), "normal": [rational_str(c) for c in a]}
                for lb, a in zip(self.labels, self.normals)
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "HPolytope":
        normals = []
        labels = []
        for f in data["facets"]:
            normals.append(vec(f["normal"]))
            labels.append(tuple(f["label"]))
        return cls(dim=data["dim"], normals=tuple(normals), labels=tuple(labels))


@dataclass(frozen=True)
class VPolytope:
    """A vertex list, optionally annotated with tight facet labels."""

    dim: int
    vertices: tuple[Vec, ...]
    tight: tuple[frozenset[Label], ...] | None = None

    def __post_init__(self) -> None:
        for v in self.vertices:
            if len(v) != self.dim:
                raise ValueError("vertex of wrong dimension")
        if self.tight is not None and len(self.tight) != len(self.vertices):
            raise ValueError("need one tight set per vertex")

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    def centroid(self) -> Vec:
        n = len(self.vertices)
        if n == 0:
            raise ValueError("empty vertex set")
        total = list(zero_vec(self.dim))
        for v in self.vertices:
            for k, x in enumerate(v):
                total[k] += x
        return tuple(c / n for c in total)

    def by_tight_set(self) -> dict[frozenset[Label], Vec]:
        if self.tight is None:
            raise ValueError("vertices carry no tight annotations")
        return dict(zip(self.tight, self.vertices))

    def to_json(self) -> dict:
        data: dict = {
            "dim": self.dim,
            "vertices": [[rational_str(c) for c in v] for v in self.vertices],
        }
        if self.tight is not None:
            data["tight"] = [sorted(map(list, t)) for t in self.tight]
        return data


# --- factor constructors --------------------------------------------------


def _circle_point(t: Fraction | None) -> Vec:
    """Rational point on the unit circle with tangent half-angle t.

    ``None`` stands for the angle pi, i.e. the point (-1, 0).
    """
    if t is None:
        return vec([-1, 0])
    t = frac(t)
    d = 1 + t * t
    return ((1 - t * t) / d, 2 * t / d)


_POLYGON_TANGENTS: dict[int, list[Fraction | None]] = {
    # 3-4-5 and 8-15-17 points: exact, well spread, and stable under tests.
    3: [Fraction(3, 5), None, Fraction(-3, 5)],
    4: [Fraction(0), Fraction(1), None, Fraction(-1)],
    5: [
        Fraction(0),
        Fraction(1, 2),
        Fraction(2),
        Fraction(-2),
        Fraction(-1, 2),
    ],
}


def _polygon_tangents(p: int) -> list[Fraction | None]:
    if p in _POLYGON_TANGENTS:
        return list(_POLYGON_TANGENTS[p])
    for denominator_bound in (16, 64, 256, 1024):
        ts: list[Fraction | None] = []
        for k in range(p):
            theta = 2 * math.pi * k / p
            if theta > math.pi:
                theta -= 2 * math.pi
            if p % 2 == 0 and k == p // 2:
                ts.append(None)
            else:
                approx = Fraction(math.tan(theta / 2)).limit_denominator(
                    denominator_bound
                )
                ts.append(approx)
        points = [_circle_point(t) for t in ts]
        if _convex_cyclic(points):
            return ts
    raise ValueError(f"could not place {p} rational points on the circle")


def _cross2(u: Vec, v: Vec) -> Fraction:
    return u[0] * v[1] - u[1] * v[0]


def _convex_cyclic(points: Sequence[Vec]) -> bool:
    """All consecutive circle points turn counterclockwise by < pi."""
    n = len(points)
    if len(set(points)) != n:
        return False
    for i in range(n):
        u, v = points[i], points[(i + 1) % n]
        if _cross2(u, v) <= 0 or 1 + dot(u, v) <= 0:
            return False
    return True


@lru_cache(maxsize=None)
def make_polygon(p: int) -> HPolytope:
    """A convex p-gon with rational vertices on the unit circle.

    Facet i is the chord joining vertex i to vertex i+1, so facet adjacency
    runs around a p-cycle and the labels ("base", 0..p-1) follow it.
    """
    if p < 3:
        raise ValueError("a polygon needs p >= 3")
    points = [_circle_point(t) for t in _polygon_tangents(p)]
    if not _convex_cyclic(points):
        raise ValueError("polygon points are not in convex cyclic position")
    normals = []
    for i in range(p):
        u, v = points[i], points[(i + 1) % p]
        denom = 1 + dot(u, v)
        normals.append(vec_scale(1 / denom, (u[0] + v[0], u[1] + v[1])))
    poly = HPolytope(
        dim=2,
        normals=tuple(normals),
        labels=tuple(base(i) for i in range(p)),
    )
    _check_polygon_cycle(poly, points)
    return poly


def _check_polygon_cycle(poly: HPolytope, points: Sequence[Vec]) -> None:
    enumerated = vertex_enumerate(poly)
    expected = {
        frozenset({base((i - 1) % poly.facet_count), base(i)}): points[i]
        for i in range(poly.facet_count)
    }
    assert enumerated.tight is not None
    actual = enumerated.by_tight_set()
    if actual != expected:
        raise ValueError("polygon facets do not meet in a single p-cycle")


def make_simplex(n: int) -> HPolytope:
    """The n-simplex ``{-x_i <= 1, sum x_i <= 1}`` (vertex centroid at 0).

    Facet j < n has normal -e_j; facet n is the all-ones row.  Vertex j of
    the simplex is tight on every facet except j.
    """
    if n < 1:
        raise ValueError("simplex dimension must be >= 1")
    normals = []
    for j in range(n):
        row = [Fraction(0)] * n
        row[j] = Fraction(-1)
        normals.append(tuple(row))
    normals.append(vec([1] * n))
    return HPolytope(
        dim=n,
        normals=tuple(normals),
        labels=tuple(base(j) for j in range(n + 1)),
    )


def simplex_vertex(n: int, j: int) -> Vec:
    """Vertex j of ``make_simplex(n)``: the one off facet j."""
    if not 0 <= j <= n:
        raise ValueError("vertex index out of range")
    if j == n:
        return vec([-1] * n)
    coords = [Fraction(-1)] * n
    coords[j] = Fraction(n)
    return tuple(coords)


# --- wedge-style constructors ---------------------------------------------


def generalized_wedge(P: HPolytope, f: int, Q: HPolytope) -> HPolytope:
    """The wedge of P over its facet f with fiber Q.

    The system keeps every facet of P except f as ``[a_i | 0]`` and replaces
    f by the combined rows ``[a_f | b_j]``, one per facet j of Q.
    """
    if not 0 <= f < P.facet_count:
        raise ValueError("facet index out of range")
    d, dq = P.dim, Q.dim
    normals: list[Vec] = []
    labels: list[Label] = []
    for i, a in enumerate(P.normals):
        if i == f:
            continue
        normals.append(a + zero_vec(dq))
        labels.append(base(i))
    af = P.normals[f]
    for j, b in enumerate(Q.normals):
        normals.append(af + b)
        labels.append(pair(f, j))
    return HPolytope(dim=d + dq, normals=tuple(normals), labels=tuple(labels))


def wedge_product(P: HPolytope, Q: HPolytope) -> HPolytope:
    """The wedge product of P and Q: one block of Q-rows per facet of P.

    Row (i, j) reads ``a_i . x + b_j . y_i <= 1`` where y_i is the i-th
    block of Q-coordinates, so the dimension is dim P + m * dim Q.
    """
    d, dq, m = P.dim, Q.dim, P.facet_count
    normals: list[Vec] = []
    labels: list[Label] = []
    for i, a in enumerate(P.normals):
        prefix = zero_vec(i * dq)
        suffix = zero_vec((m - 1 - i) * dq)
        for j, b in enumerate(Q.normals):
            normals.append(a + prefix + b + suffix)
            labels.append(pair(i, j))
    return HPolytope(dim=d + m * dq, normals=tuple(normals), labels=tuple(labels))


def _deformed_product_rows(
    P: HPolytope, Q: HPolytope, f: int, eps: Fraction
) -> tuple[list[Vec], list[Label]]:
    d, dq = P.dim, Q.dim
    normals: list[Vec] = []
    labels: list[Label] = []
    for i, a in enumerate(P.normals):
        normals.append(a + zero_vec(dq))
        labels.append(base(i))
    af = vec_scale(1 / (1 + eps), P.normals[f])
    for j, b in enumerate(Q.normals):
        normals.append(af + b)
        labels.append(pair(f, j))
    return normals, labels


def deformed_product(P: HPolytope, Q: HPolytope, f: int, eps: Fraction) -> HPolytope:
    """Deformed product of P and Q relative to facet f of P.

    Keeps all facets of P and adds the rows ``[(1/(1+eps)) a_f | b_j]``.
    As eps grows the combined rows decouple and the system approaches the
    plain product; at eps = 0 they coincide with the generalized wedge rows.
    """
    eps = frac(eps)
    if eps <= 0:
        raise ValueError("deformation parameter must be positive")
    if not 0 <= f < P.facet_count:
        raise ValueError("facet index out of range")
    normals, labels = _deformed_product_rows(P, Q, f, eps)
    return HPolytope(dim=P.dim + Q.dim, normals=tuple(normals), labels=tuple(labels))


def product(P: HPolytope, Q: HPolytope) -> HPolytope:
    """Cartesian product; facets are relabeled ("base", 0..m+m'-1)."""
    normals: list[Vec] = []
    for a in P.normals:
        normals.append(a + zero_vec(Q.dim))
    for b in Q.normals:
        normals.append(zero_vec(P.dim) + b)
    return HPolytope(
        dim=P.dim + Q.dim,
        normals=tuple(normals),
        labels=tuple(base(i) for i in range(len(normals))),
    )


def prism(P: HPolytope, delta: Fraction = Fraction(1, 4)) -> HPolytope:
    """P x [-1/delta, 1/delta]: P's labels survive, lids are ("lid", +/-)."""
    delta = frac(delta)
    if delta <= 0:
        raise ValueError("lid coefficient must be positive")
    normals = [a + (Fraction(0),) for a in P.normals]
    labels = list(P.labels)
    normals.append(zero_vec(P.dim) + (delta,))
    labels.append(lid("+"))
    normals.append(zero_vec(P.dim) + (-delta,))
    labels.append(lid("-"))
    return HPolytope(dim=P.dim + 1, normals=tuple(normals), labels=tuple(labels))


# --- vertex enumeration ---------------------------------------------------

_SUBSET_SLACK = 8


def vertex_enumerate(
    P: HPolytope,
    candidates: Iterable[Iterable[Label]] | None = None,
) -> VPolytope:
    """Enumerate the vertices of a bounded system exactly.

    Without candidates, all d-subsets of facets are tried; this is guarded
    to small cases (``m <= d + 8`` or ``d <= 4``).  With candidates, each
    tight label set must produce a nonsingular system whose solution lies
    on exactly those facets and strictly inside all others; any violation
    raises :class:`DegenerateVertexError`, which signals that the claimed
    combinatorics does not match the geometry.
    """
    if not P.is_bounded():
        raise UnboundedError("facet normals do not positively span")
    d, m = P.dim, P.facet_count
    found: dict[Vec, frozenset[Label]] = {}
    if candidates is None:
        if m > d + _SUBSET_SLACK and d > 4:
            raise ValueError(
                f"subset enumeration refused for m={m}, d={d}; "
                "pass combinatorial vertex candidates"
            )
        for subset in combinations(range(m), d):
            rows = [P.normals[i] for i in subset]
            try:
                x = solve_square(rows, [Fraction(1)] * d)
            except SingularMatrixError:
                continue
            if all(dot(a, x) <= 1 for a in P.normals):
                found.setdefault(x, P.tight_set(x))
    else:
        for cand in candidates:
            cand = frozenset(cand)
            idx = [P.facet_index(lb) for lb in sorted(cand)]
            if len(idx) != d:
                raise DegenerateVertexError(
                    f"candidate has {len(idx)} tight facets, expected {d}"
                )
            rows = [P.normals[i] for i in idx]
            try:
                x = solve_square(rows, [Fraction(1)] * d)
            except SingularMatrixError as exc:
                raise DegenerateVertexError(
                    f"singular tight system for candidate {sorted(cand)}"
                ) from exc
            tight = P.tight_set(x)
            if tight != cand:
                raise DegenerateVertexError(
                    f"candidate {sorted(cand)} resolved to tight set "
                    f"{sorted(tight)}"
                )
            if not P.contains(x):
                raise DegenerateVertexError(
                    f"candidate {sorted(cand)} violates the system"
                )
            found[x] = tight
    ordered = sorted(found)
    return VPolytope(
        dim=d,
        vertices=tuple(ordered),
        tight=tuple(found[v] for v in ordered),
    )


def check_simple(P: HPolytope, V: VPolytope) -> bool:
    """True iff every enumerated vertex lies on exactly dim facets."""
    assert V.tight is not None
    return all(len(t) == P.dim for t in V.tight)


def polar_dual(
    V: VPolytope,
    recenter: bool = True,
    labels: Sequence[Label] | None = None,
) -> HPolytope:
    """Polar dual ``{x : v . x <= 1 for all vertices v}``.

    The origin must be interior to conv(V); with ``recenter`` the vertex
    centroid is translated to the origin first (an interior point of any
    polytope), making the polar well-defined.
    """
    vertices = V.vertices
    if recenter:
        c = V.centroid()
        vertices = tuple(vec_sub(v, c) for v in vertices)
    if labels is None:
        labels = tuple(base(i) for i in range(len(vertices)))
    return HPolytope(dim=V.dim, normals=vertices, labels=tuple(labels))


# --- special wedge products ------------------------------------------------


def wp_system(p: int, q: int) -> HPolytope:
    """The canonical wedge product C_p wedge (simplex with q facets)."""
    if q < 2:
        raise ValueError("the simplex factor needs q >= 2 facets")
    return wedge_product(make_polygon(p), make_simplex(q - 1))


def wp_vertex_coords(
    p: int, q: int, polygon_vertices: dict[frozenset[Label], Vec] | None = None
) -> dict:
    """Exact coordinates of every wp(p, q-1) vertex, keyed by FaceVector.

    A vertex with full entries at (i, i+1) projects to the polygon vertex
    on facets i and i+1; block k carries ``(1 - a_k . x)`` times the simplex
    vertex selected by the co-singleton entry, and the two full blocks
    collapse to zero.
    """
    from .wpcombin import WpParams, vertex_full_position, wp_vertices

    poly = make_polygon(p)
    if polygon_vertices is None:
        polygon_vertices = vertex_enumerate(poly).by_tight_set()
    n = q - 1
    simplex_verts = [simplex_vertex(n, j) for j in range(q)]
    coords = {}
    for fv in wp_vertices(WpParams(p=p, q=q)):
        i = vertex_full_position(fv)
        x = polygon_vertices[frozenset({base(i), base((i + 1) % p)})]
        blocks: list[Fraction] = list(x)
        for k in range(p):
            if k in (i, (i + 1) % p):
                blocks.extend(zero_vec(n))
            else:
                scale = 1 - dot(poly.normals[k], x)
                missing = [j for j in range(q) if not fv.masks[k] >> j & 1]
                (j,) = missing
                blocks.extend(vec_scale(scale, simplex_verts[j]))
        coords[fv] = tuple(blocks)
    return coords
