"""Exact verification that realized face cycles are embedded polygons.

Faces arrive as coordinate cycles in some R^e.  Each face is checked to be
planar, in strictly convex position, and cyclically ordered; face pairs can
then be tested for honest disjointness: two faces may meet only in a shared
edge or a shared vertex that the combinatorics already predicts.  All
predicates are rational and exact, so a passing report is a proof and not a
numerical opinion.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Sequence

from .complexes import PolygonalComplex
from .exactkernel import (
    Vec,
    affine_rank,
    dot,
    gauss_solve,
    vec_add,
    vec_scale,
    vec_sub,
)

_ZERO = Fraction(0)
_ONE = Fraction(1)

Point2 = tuple[Fraction, Fraction]


class GeometryError(ValueError):
    """A face cycle failed planarity, convexity or ordering."""


@dataclass(frozen=True)
class PlanarFace:
    """A verified convex planar polygon with an exact 2D chart."""

    key: Hashable
    vertex_keys: tuple[Hashable, ...]
    points: tuple[Vec, ...]
    origin: Vec
    basis: tuple[Vec, Vec]
    coords2d: tuple[Point2, ...]
    halfplanes: tuple[tuple[Point2, Fraction], ...]  # n . x <= c, interior side

    def to_ambient(self, s: Fraction, t: Fraction) -> Vec:
        u1, u2 = self.basis
        return vec_add(self.origin, vec_add(vec_scale(s, u1), vec_scale(t, u2)))

    def contains_2d(self, pt: Point2, strict: bool = False) -> bool:
        for n, c in self.halfplanes:
            v = n[0] * pt[0] + n[1] * pt[1]
            if v > c or (strict and v == c):
                return False
        return True


def _chart_coords(
    origin: Vec, u1: Vec, u2: Vec, point: Vec
) -> Point2 | None:
    rows = [(a, b) for a, b in zip(u1, u2)]
    result = gauss_solve(rows, vec_sub(point, origin))
    if result is None:
        return None
    particular, basis = result
    if basis:  # u1, u2 dependent; caller guards against this
        raise GeometryError("degenerate chart basis")
    return (particular[0], particular[1])


def make_planar_face(
    key: Hashable,
    vertex_keys: Sequence[Hashable],
    points: Sequence[Vec],
) -> PlanarFace:
    """Verify a coordinate cycle is a convex planar polygon; build its chart.

    Raises :class:`GeometryError` when the points are not affinely rank 2,
    some point leaves the plane of the first three independent ones, or the
    cycle is not in strictly convex position (which also rejects star
    polygons traversed in the wrong order).
    """
    pts = [tuple(p) for p in points]
    n = len(pts)
    if n < 3:
        raise GeometryError(f"face {key!r}: needs at least 3 points")
    if len(set(pts)) != n:
        raise GeometryError(f"face {key!r}: repeated coordinates")
    if affine_rank(pts) != 2:
        raise GeometryError(f"face {key!r}: affine rank != 2")
    origin = pts[0]
    u1 = vec_sub(pts[1], origin)
    u2 = None
    for cand in pts[2:]:
        w = vec_sub(cand, origin)
        if affine_rank([origin, pts[1], cand]) == 2:
            u2 = w
            break
    assert u2 is not None
    coords = []
    for p in pts:
        c = _chart_coords(origin, u1, u2, p)
        if c is None:
            raise GeometryError(f"face {key!r}: point off the face plane")
        coords.append(c)
    halfplanes = []
    orientation = 0
    for i in range(n):
        a = coords[i]
        b = coords[(i + 1) % n]
        d = (b[0] - a[0], b[1] - a[1])
        normal = (d[1], -d[0])  # one of the two sides
        c_val = normal[0] * a[0] + normal[1] * a[1]
        sides = set()
        for j, other in enumerate(coords):
            if j in (i, (i + 1) % n):
                continue
            v = normal[0] * other[0] + normal[1] * other[1]
            if v == c_val:
                raise GeometryError(
                    f"face {key!r}: vertex on the line of edge {i}"
                )
            sides.add(1 if v > c_val else -1)
        if len(sides) != 1:
            raise GeometryError(f"face {key!r}: not in convex position")
        side = sides.pop()
        if orientation == 0:
            orientation = side
        elif orientation != side:
            raise GeometryError(f"face {key!r}: inconsistent cyclic order")
        if side < 0:
            halfplanes.append(((normal[0], normal[1]), c_val))
        else:
            halfplanes.append(((-normal[0], -normal[1]), -c_val))
    return PlanarFace(
        key=key,
        vertex_keys=tuple(vertex_keys),
        points=tuple(pts),
        origin=origin,
        basis=(u1, u2),
        coords2d=tuple(coords),
        halfplanes=tuple(halfplanes),
    )


# --- exact pairwise intersection ------------------------------------------


def _clip_line(
    face: PlanarFace, start: Point2, direction: Point2
) -> tuple[Fraction, Fraction] | None:
    """Intersect the parametrized line with the face; r-interval or None."""
    lo: Fraction | None = None
    hi: Fraction | None = None
    for n, c in face.halfplanes:
        alpha = n[0] * direction[0] + n[1] * direction[1]
        beta = c - (n[0] * start[0] + n[1] * start[1])
        if alpha == 0:
            if beta < 0:
                return None
            continue
        bound = beta / alpha
        if alpha > 0:
            hi = bound if hi is None or bound < hi else hi
        else:
            lo = bound if lo is None or bound > lo else lo
    if lo is None or hi is None:
        raise GeometryError("unbounded clip against a bounded polygon")
    if lo > hi:
        return None
    return lo, hi


def _clip_polygon(
    subject: list[Point2], halfplanes: Sequence[tuple[Point2, Fraction]]
) -> list[Point2]:
    """Sutherland-Hodgman clipping, exact; output may be degenerate."""
    pts = list(subject)
    for n, c in halfplanes:
        if not pts:
            return []
        out: list[Point2] = []
        values = [n[0] * p[0] + n[1] * p[1] - c for p in pts]
        m = len(pts)
        for i in range(m):
            cur, nxt = pts[i], pts[(i + 1) % m]
            vc, vn = values[i], values[(i + 1) % m]
            if vc <= 0:
                out.append(cur)
            if (vc < 0 < vn) or (vn < 0 < vc):
                t = vc / (vc - vn)
                out.append(
                    (
                        cur[0] + t * (nxt[0] - cur[0]),
                        cur[1] + t * (nxt[1] - cur[1]),
                    )
                )
        deduped: list[Point2] = []
        for p in out:
            if not deduped or deduped[-1] != p:
                deduped.append(p)
        if len(deduped) > 1 and deduped[0] == deduped[-1]:
            deduped.pop()
        pts = deduped
    return pts


@dataclass(frozen=True)
class Intersection:
    """Exact intersection of two face polygons: nothing, point, segment, patch."""

    kind: str  # "empty" | "point" | "segment" | "patch"
    points: tuple[Vec, ...] = ()


def intersect_faces(A: PlanarFace, B: PlanarFace) -> Intersection:
    e = len(A.origin)
    u1, u2 = A.basis
    v1, v2 = B.basis
    rows = [(u1[k], u2[k], -v1[k], -v2[k]) for k in range(e)]
    rhs = vec_sub(B.origin, A.origin)
    solved = gauss_solve(rows, rhs)
    if solved is None:
        return Intersection(kind="empty")
    particular, nullbasis = solved
    dim = len(nullbasis)
    if dim == 0:
        s, t = particular[0], particular[1]
        if A.contains_2d((s, t)) and B.contains_2d((particular[2], particular[3])):
            return Intersection(kind="point", points=(A.to_ambient(s, t),))
        return Intersection(kind="empty")
    if dim == 1:
        direction = nullbasis[0]
        ia = _clip_line(A, (particular[0], particular[1]), (direction[0], direction[1]))
        ib = _clip_line(B, (particular[2], particular[3]), (direction[2], direction[3]))
        if ia is None or ib is None:
            return Intersection(kind="empty")
        lo = max(ia[0], ib[0])
        hi = min(ia[1], ib[1])
        if lo > hi:
            return Intersection(kind="empty")
        pa = A.to_ambient(
            particular[0] + lo * direction[0], particular[1] + lo * direction[1]
        )
        if lo == hi:
            return Intersection(kind="point", points=(pa,))
        pb = A.to_ambient(
            particular[0] + hi * direction[0], particular[1] + hi * direction[1]
        )
        return Intersection(kind="segment", points=(pa, pb))
    # Coplanar faces: clip B's chart image of A... clip A in B-plane charts.
    coords_b_in_a = []
    for p in B.points:
        c = _chart_coords(A.origin, u1, u2, p)
        if c is None:
            raise GeometryError("coplanar faces disagree on their plane")
        coords_b_in_a.append(c)
    clipped = _clip_polygon(coords_b_in_a, A.halfplanes)
    if not clipped:
        return Intersection(kind="empty")
    ambient = tuple(A.to_ambient(s, t) for s, t in clipped)
    distinct = tuple(dict.fromkeys(ambient))
    if len(distinct) == 1:
        return Intersection(kind="point", points=distinct)
    if affine_rank(distinct) == 1:
        ordered = sorted(distinct)
        return Intersection(kind="segment", points=(ordered[0], ordered[-1]))
    return Intersection(kind="patch", points=distinct)


@dataclass
class EmbeddingReport:
    ok: bool
    face_count: int
    pairwise_checked: bool
    failures: list[str] = field(default_factory=list)


def verify_embedded_complex(
    cells: PolygonalComplex,
    coords: dict[Hashable, Vec],
    pairwise_limit: int = 64,
) -> EmbeddingReport:
    """Check that realized faces are convex planar and pairwise honest.

    Full quadratic disjointness runs when the face count stays within
    ``pairwise_limit``; beyond that only face pairs sharing a vertex are
    tested (star-wise checking) and the report records the downgrade.
    """
    failures: list[str] = []
    keys = list(coords)
    if len(set(coords.values())) != len(keys):
        failures.append("two vertices share coordinates")
    faces: list[PlanarFace] = []
    for key, cycle in zip(cells.face_keys, cells.face_cycles):
        try:
            faces.append(
                make_planar_face(key, cycle, [coords[v] for v in cycle])
            )
        except GeometryError as exc:
            failures.append(str(exc))
    if failures:
        return EmbeddingReport(
            ok=False,
            face_count=cells.face_count,
            pairwise_checked=False,
            failures=failures,
        )
    pairwise = cells.face_count <= pairwise_limit
    for ai in range(len(faces)):
        for bi in range(ai + 1, len(faces)):
            A, B = faces[ai], faces[bi]
            shared = set(A.vertex_keys) & set(B.vertex_keys)
            if not pairwise and not shared:
                continue
            msg = _check_pair(A, B, shared, coords)
            if msg is not None:
                failures.append(msg)
    return EmbeddingReport(
        ok=not failures,
        face_count=cells.face_count,
        pairwise_checked=pairwise,
        failures=failures,
    )


def _check_pair(
    A: PlanarFace,
    B: PlanarFace,
    shared: set,
    coords: dict[Hashable, Vec],
) -> str | None:
    inter = intersect_faces(A, B)
    tag = f"faces {A.key!r} / {B.key!r}"
    if len(shared) == 0:
        if inter.kind != "empty":
            return f"{tag}: disjoint faces intersect ({inter.kind})"
    elif len(shared) == 1:
        (v,) = shared
        if inter.kind != "point" or inter.points != (coords[v],):
            return f"{tag}: expected a single shared corner"
    elif len(shared) == 2:
        expected = {coords[v] for v in shared}
        if inter.kind != "segment" or set(inter.points) != expected:
            return f"{tag}: expected exactly the shared edge"
    else:
        return f"{tag}: {len(shared)} shared vertices"
    return None
