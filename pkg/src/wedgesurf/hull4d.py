"""Exact convex hulls in up to four dimensions, with full face lattices.

The hull is computed by gift wrapping: find one supporting hyperplane by
rotating around growing contact sets, then breadth-first-search facet by
facet across ridges.  Facets are carried as exact hyperplanes together with
the full set of input points lying on them, so coplanar degeneracies need no
perturbation.  Ridges of a facet come from a recursive wrap of its chart,
bottoming out at ordered convex polygons.

On top of the facets, the face lattice is the closure of the facet contact
sets under intersection; every proper face of a polytope is an intersection
of facets, so the closure is complete.  A separate certification pass checks
the defining property that every ridge lies in exactly two facets.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Iterable, Sequence

from .exactkernel import (
    Vec,
    affine_rank,
    dot,
    gauss_solve,
    rank,
    vec_scale,
    vec_sub,
)

_ZERO = Fraction(0)
_ONE = Fraction(1)


class HullError(ValueError):
    """The input point set does not satisfy the hull preconditions."""


Hyperplane = tuple[Vec, Fraction]  # (a, c) meaning a . x <= c inside


def canonical_hyperplane(a: Sequence[Fraction], c: Fraction) -> Hyperplane:
    """Scale (a, c) to a primitive integer tuple, preserving orientation."""
    entries = list(a) + [c]
    denom_lcm = 1
    for x in entries:
        denom_lcm = denom_lcm * x.denominator // gcd(denom_lcm, x.denominator)
    ints = [int(x * denom_lcm) for x in entries]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g == 0:
        raise HullError("zero hyperplane")
    ints = [v // g for v in ints]
    return tuple(Fraction(v) for v in ints[:-1]), Fraction(ints[-1])


@dataclass(frozen=True)
class Facet:
    vertices: frozenset[int]
    normal: Vec
    offset: Fraction


@dataclass(frozen=True)
class HullResult:
    points: tuple[Vec, ...]
    facets: tuple[Facet, ...]

    @property
    def dim(self) -> int:
        return len(self.points[0])

    @cached_property
    def facets_of_point(self) -> dict[int, frozenset[int]]:
        out: dict[int, set[int]] = {}
        for fi, F in enumerate(self.facets):
            for i in F.vertices:
                out.setdefault(i, set()).add(fi)
        return {i: frozenset(fs) for i, fs in out.items()}


def _vanishing_functionals(
    points: Sequence[Vec], subset: Iterable[int]
) -> list[Vec]:
    """Basis of affine functionals (a, c) with a . x = c on the subset."""
    d = len(points[0])
    rows = [tuple(points[i]) + (Fraction(-1),) for i in subset]
    if not rows:
        return [
            tuple(
                _ONE if k == j else _ZERO for k in range(d + 1)
            )
            for j in range(d + 1)
        ]
    solved = gauss_solve(rows, [_ZERO] * len(rows), nvars=d + 1)
    assert solved is not None
    _, basis = solved
    return list(basis)


def _contact(points: Sequence[Vec], h: Hyperplane) -> frozenset[int]:
    a, c = h
    return frozenset(i for i, x in enumerate(points) if dot(a, x) == c)


def _is_supporting(points: Sequence[Vec], h: Hyperplane) -> bool:
    a, c = h
    return all(dot(a, x) <= c for x in points)


def _independent_functional(
    h: Hyperplane, candidates: list[Vec]
) -> Vec | None:
    """First candidate (a, c)-vector not proportional to h."""
    href = tuple(h[0]) + (h[1],)
    for cand in candidates:
        rows = [href, cand]
        solved = gauss_solve(
            [tuple(r[k] for r in rows) for k in range(len(href))],
            [_ZERO] * len(href),
            nvars=2,
        )
        assert solved is not None
        if not solved[1]:  # no nullspace: the two are independent
            return cand
    return None


def _pivot(
    points: Sequence[Vec],
    h: Hyperplane,
    hprime: Vec,
    beta: int = 1,
) -> Hyperplane:
    """Rotate supporting h in the pencil spanned with hprime.

    Returns the supporting hyperplane ``alpha*h + beta*hprime`` with the
    smallest feasible ``alpha``; its contact set gains at least one point
    off h.  ``beta`` fixes which side of hprime the rotation favours (the
    ridge pivot needs the old facet's remaining vertices to stay feasible).
    Working in the full projective pencil avoids losing the hyperplane
    hprime itself, which a naive ``h + t*hprime`` parametrisation misses.
    """
    a, c = h
    aprime, cprime = tuple(hprime[:-1]), hprime[-1]
    alpha: Fraction | None = None
    for x in points:
        u = c - dot(a, x)
        if u <= 0:
            continue
        w = cprime - dot(aprime, x)
        bound = -beta * w / u
        if alpha is None or bound > alpha:
            alpha = bound
    if alpha is None:
        raise HullError("no point off the hyperplane; input not full-dim?")
    rotated = canonical_hyperplane(
        tuple(alpha * ai + beta * api for ai, api in zip(a, aprime)),
        alpha * c + beta * cprime,
    )
    assert _is_supporting(points, rotated)
    return rotated


def _initial_facet_plane(points: Sequence[Vec]) -> Hyperplane:
    d = len(points[0])
    lo = min(x[0] for x in points)
    h = canonical_hyperplane(
        tuple(Fraction(-1) if k == 0 else _ZERO for k in range(d)),
        Fraction(-lo),
    )
    while True:
        contact = _contact(points, h)
        if affine_rank([points[i] for i in contact]) == d - 1:
            return h
        basis = _vanishing_functionals(points, contact)
        hprime = _independent_functional(h, basis)
        assert hprime is not None
        h = _pivot(points, h, hprime)


def _chart_points(points: Sequence[Vec], subset: Sequence[int]) -> list[Vec]:
    """Affine chart of a rank-r subset onto R^r coordinates."""
    pts = [points[i] for i in subset]
    origin = pts[0]
    basis: list[Vec] = []
    for x in pts[1:]:
        cand = vec_sub(x, origin)
        if rank(basis + [cand]) == len(basis) + 1:
            basis.append(cand)
    coords = []
    rows = [tuple(b[k] for b in basis) for k in range(len(origin))]
    for x in pts:
        solved = gauss_solve(rows, vec_sub(x, origin), nvars=len(basis))
        assert solved is not None and not solved[1]
        coords.append(solved[0])
    return coords


def _polygon_edge_sets(points: Sequence[Vec]) -> list[frozenset[int]]:
    """Edges of a 2D point set's hull, as contact index sets."""
    order = sorted(range(len(points)), key=lambda i: points[i])

    def half(indices):
        chain: list[int] = []
        for i in indices:
            while len(chain) >= 2:
                o, b = points[chain[-2]], points[chain[-1]]
                x = points[i]
                cross = (b[0] - o[0]) * (x[1] - o[1]) - (b[1] - o[1]) * (
                    x[0] - o[0]
                )
                if cross <= 0:
                    chain.pop()
                else:
                    break
            chain.append(i)
        return chain

    lower = half(order)
    upper = half(order[::-1])
    ring = lower[:-1] + upper[:-1]
    if len(ring) < 3:
        raise HullError("2D chart collapsed; expected a genuine polygon")
    edges = []
    n = len(ring)
    for k in range(n):
        uidx, vidx = ring[k], ring[(k + 1) % n]
        uu, vv = points[uidx], points[vidx]
        normal = (vv[1] - uu[1], uu[0] - vv[0])
        cval = normal[0] * uu[0] + normal[1] * uu[1]
        members = frozenset(
            i
            for i, x in enumerate(points)
            if normal[0] * x[0] + normal[1] * x[1] == cval
        )
        edges.append(members)
    return edges


def _subface_sets(
    points: Sequence[Vec], subset: Sequence[int]
) -> list[frozenset[int]]:
    """Contact sets of the facets of conv(subset), in global indices."""
    r = affine_rank([points[i] for i in subset])
    chart = _chart_points(points, subset)
    if r == 1:
        keyed = sorted(range(len(subset)), key=lambda i: chart[i])
        lo, hi = chart[keyed[0]], chart[keyed[-1]]
        return [
            frozenset(subset[i] for i in range(len(subset)) if chart[i] == lo),
            frozenset(subset[i] for i in range(len(subset)) if chart[i] == hi),
        ]
    if r == 2:
        local = _polygon_edge_sets(chart)
    else:
        local = [
            F.vertices
            for F in _wrap(tuple(chart)).facets
        ]
    return [frozenset(subset[i] for i in members) for members in local]


def _wrap(points: tuple[Vec, ...]) -> HullResult:
    d = len(points[0])
    if affine_rank(points) != d:
        raise HullError(f"points do not affinely span R^{d}")
    start = _initial_facet_plane(points)
    queue = [start]
    seen: dict[Hyperplane, frozenset[int]] = {start: _contact(points, start)}
    while queue:
        h = queue.pop()
        members = seen[h]
        for ridge in _subface_sets(points, sorted(members)):
            basis = _vanishing_functionals(points, ridge)
            hprime = _independent_functional(h, basis)
            assert hprime is not None
            # the old facet's off-ridge vertices fix the rotation direction
            aprime, cprime = tuple(hprime[:-1]), hprime[-1]
            wsigns = {
                1 if cprime - dot(aprime, points[i]) > 0 else -1
                for i in members - ridge
                if cprime - dot(aprime, points[i]) != 0
            }
            if len(wsigns) != 1:
                raise HullError("ridge does not bound the facet properly")
            neighbor = _pivot(points, h, hprime, wsigns.pop())
            if neighbor not in seen:
                seen[neighbor] = _contact(points, neighbor)
                queue.append(neighbor)
    facets = tuple(
        Facet(vertices=members, normal=h[0], offset=h[1])
        for h, members in sorted(seen.items())
    )
    return HullResult(points=points, facets=facets)


def convex_hull(points: Sequence[Vec]) -> HullResult:
    """Exact hull of a full-dimensional point set, dim <= 4."""
    pts = tuple(tuple(x) for x in points)
    if len(set(pts)) != len(pts):
        raise HullError("duplicate input points")
    d = len(pts[0])
    if d > 4:
        raise HullError("gift wrapping here is limited to dimension <= 4")
    return _wrap(pts)


@dataclass(frozen=True)
class FaceLattice:
    hull: HullResult
    by_dim: dict[int, frozenset[frozenset[int]]]

    def faces(self, dim: int) -> frozenset[frozenset[int]]:
        return self.by_dim.get(dim, frozenset())

    def has_face(self, vertex_set: Iterable[int], dim: int) -> bool:
        return frozenset(vertex_set) in self.faces(dim)

    @property
    def hull_vertices(self) -> frozenset[int]:
        return frozenset(i for f in self.faces(0) for i in f)

    def f_vector(self) -> tuple[int, ...]:
        top = max(self.by_dim)
        return tuple(len(self.faces(k)) for k in range(top + 1))


def face_lattice(hull: HullResult) -> FaceLattice:
    """Close the facet contact sets under intersection and grade by rank."""
    current = {F.vertices for F in hull.facets}
    frontier = set(current)
    while frontier:
        new: set[frozenset[int]] = set()
        for A in frontier:
            for B in current:
                C = A & B
                if C and C not in current and C not in new:
                    new.add(C)
        current |= new
        frontier = new
    by_dim: dict[int, set[frozenset[int]]] = {}
    for face in current:
        r = affine_rank([hull.points[i] for i in face])
        by_dim.setdefault(r, set()).add(face)
    return FaceLattice(
        hull=hull,
        by_dim={k: frozenset(v) for k, v in by_dim.items()},
    )


def certify_lattice(lattice: FaceLattice) -> bool:
    """Every ridge in exactly two facets; facet contacts have full rank."""
    hull = lattice.hull
    d = hull.dim
    for ridge in lattice.faces(d - 2):
        count = sum(1 for F in hull.facets if ridge <= F.vertices)
        if count != 2:
            return False
    for F in hull.facets:
        if affine_rank([hull.points[i] for i in F.vertices]) != d - 1:
            return False
        if not _is_supporting(hull.points, (F.normal, F.offset)):
            return False
    return True


# --- polarity and Schlegel projection --------------------------------------


def centroid(points: Sequence[Vec]) -> Vec:
    n = len(points)
    d = len(points[0])
    return tuple(
        sum((x[k] for x in points), _ZERO) / n for k in range(d)
    )


def polar_vertex(F: Facet, center: Vec) -> Vec:
    """Vertex of the polar dual corresponding to a facet of the primal."""
    shifted = F.offset - dot(F.normal, center)
    if shifted <= 0:
        raise HullError("center is not interior to the facet side")
    return vec_scale(_ONE / shifted, F.normal)


@dataclass(frozen=True)
class SchlegelChart:
    """Projection of points through a window facet into its hyperplane."""

    viewpoint: Vec
    images: dict[int, Vec]  # point index -> 3D chart coordinates


def schlegel_project(
    points: Sequence[Vec],
    window_normal: Vec,
    window_offset: Fraction,
    window_vertices: Sequence[int],
    other_facets: Sequence[Hyperplane],
) -> SchlegelChart:
    """Central projection from just beyond one facet onto that facet.

    The viewpoint sits above the window facet's centroid, pulled in far
    enough to stay strictly beneath every other facet, which makes the
    projection injective on the rest of the boundary.  Images come back in
    an exact 3D chart of the window hyperplane.
    """
    a, c = window_normal, window_offset
    xc = centroid([points[i] for i in window_vertices])
    assert dot(a, xc) == c
    t_cap: Fraction | None = None
    for ao, co in other_facets:
        rise = dot(ao, a)
        room = co - dot(ao, xc)
        if room <= 0:
            raise HullError("window centroid is not beneath the other facets")
        if rise > 0:
            bound = room / rise
            t_cap = bound if t_cap is None else min(t_cap, bound)
    t = _ONE if t_cap is None else t_cap / 2
    y = tuple(xi + t * ai for xi, ai in zip(xc, a))
    assert dot(a, y) > c
    basis_rows = [tuple(a)]
    solved = gauss_solve(basis_rows, [_ZERO], nvars=len(a))
    assert solved is not None
    basis = solved[1]
    assert len(basis) == len(a) - 1
    chart_rows = [tuple(b[k] for b in basis) for k in range(len(a))]
    images = {}
    ay = dot(a, y)
    for i, x in enumerate(points):
        ax = dot(a, x)
        if ax > c:
            raise HullError("point beyond the window facet")
        s = (c - ay) / (ax - ay)
        z = tuple(yi + s * (xi - yi) for yi, xi in zip(y, x))
        flat = gauss_solve(chart_rows, vec_sub(z, xc), nvars=len(basis))
        assert flat is not None and not flat[1]
        images[i] = flat[0]
    return SchlegelChart(viewpoint=y, images=images)
