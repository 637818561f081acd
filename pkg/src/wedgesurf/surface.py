"""The closed surface spanned by selected polygon faces of C_p wedge Delta.

Inside the wedge product of a p-gon with a (q-1)-simplex, keep exactly the
polygon 2-faces whose co-singleton labels sum to 0 or 1 mod q, together with
all their edges and vertices.  The result is a closed, connected, orientable
2-manifold using every vertex of the ambient polytope; a four-generator
symmetry group acts transitively on its flags.  This module builds that
complex, certifies each of those claims by direct enumeration, and realizes
it linearly in R^5.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .complexes import (
    PolygonalComplex,
    check_manifold,
    check_orientable,
    dual_complex,
    is_connected,
    vertex_link_cycle,
)
from .exactkernel import Vec, mat_vec
from .geomcheck import EmbeddingReport, verify_embedded_complex
from .polytope import wp_vertex_coords
from .wpcombin import (
    FaceVector,
    WpParams,
    full_mask,
    incidence,
    mask_indices,
    mask_of,
    pgon_edge,
    pgon_edges,
    pgon_from_labels,
    pgon_labels,
    pgon_vertex,
    pgon_vertices,
    wp_pgons,
    wp_vertices,
)

GENERATORS = ("flip", "parity", "rotate", "shift")


@dataclass(frozen=True)
class SurfaceComplex:
    """Polygon faces selected by the label-sum rule, with derived skeleton."""

    params: WpParams
    pgons: tuple[FaceVector, ...]

    @property
    def p(self) -> int:
        return self.params.p

    @property
    def q(self) -> int:
        return self.params.q

    @cached_property
    def edges(self) -> tuple[FaceVector, ...]:
        seen: dict[FaceVector, None] = {}
        for g in self.pgons:
            for e in pgon_edges(g):
                seen.setdefault(e)
        return tuple(seen)

    @cached_property
    def vertices(self) -> tuple[FaceVector, ...]:
        seen: dict[FaceVector, None] = {}
        for g in self.pgons:
            for v in pgon_vertices(g):
                seen.setdefault(v)
        return tuple(seen)

    @cached_property
    def pgon_set(self) -> frozenset[FaceVector]:
        return frozenset(self.pgons)

    @cached_property
    def edge_set(self) -> frozenset[FaceVector]:
        return frozenset(self.edges)

    @cached_property
    def vertex_set(self) -> frozenset[FaceVector]:
        return frozenset(self.vertices)

    @cached_property
    def edge_pgons(self) -> dict[FaceVector, tuple[FaceVector, ...]]:
        out: dict[FaceVector, list[FaceVector]] = {e: [] for e in self.edges}
        for g in self.pgons:
            for e in pgon_edges(g):
                out[e].append(g)
        return {e: tuple(gs) for e, gs in out.items()}

    @cached_property
    def vertex_edges(self) -> dict[FaceVector, tuple[FaceVector, ...]]:
        out: dict[FaceVector, dict[FaceVector, None]] = {
            v: {} for v in self.vertices
        }
        for g in self.pgons:
            corners = pgon_vertices(g)
            sides = pgon_edges(g)
            p = self.p
            for k in range(p):
                # edge k runs between corners k-1 and k
                out[corners[(k - 1) % p]].setdefault(sides[k])
                out[corners[k]].setdefault(sides[k])
        return {v: tuple(es) for v, es in out.items()}

    def f_vector(self) -> tuple[int, int, int]:
        return (len(self.vertices), len(self.edges), len(self.pgons))

    def contains_face(self, fv: FaceVector) -> bool:
        return (
            fv in self.pgon_set or fv in self.edge_set or fv in self.vertex_set
        )

    def label_sum(self, g: FaceVector) -> int:
        return sum(pgon_labels(g)) % self.q

    def orientation_sign(self, g: FaceVector) -> int:
        """+1 on faces with label sum 0 (forward cycle), -1 on sum 1."""
        return 1 if self.label_sum(g) == 0 else -1

    @cached_property
    def _cells(self) -> PolygonalComplex:
        return PolygonalComplex(
            face_keys=self.pgons,
            face_cycles=tuple(tuple(pgon_vertices(g)) for g in self.pgons),
        )

    def to_polygonal(self) -> PolygonalComplex:
        return self._cells

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "f_vector": list(self.f_vector()),
            "pgons": [g.to_json() for g in self.pgons],
            "edges": [e.to_json() for e in self.edges],
            "vertices": [v.to_json() for v in self.vertices],
            "pgon_cycles": [
                [v.to_json() for v in pgon_vertices(g)] for g in self.pgons
            ],
        }


def expected_f_vector(p: int, q: int) -> tuple[int, int, int]:
    scale = q ** (p - 2)
    return (p * scale, p * q * scale, 2 * q * scale)


def expected_genus(p: int, q: int) -> int:
    surplus = q ** (p - 2) * (p * q - p - 2 * q)
    assert surplus % 2 == 0
    return 1 + surplus // 2


def build_surface(params: WpParams) -> SurfaceComplex:
    """Select the polygon faces whose labels sum to 0 or 1 mod q."""
    if params.q < 2:
        raise ValueError("surface needs q >= 2 (a genuine simplex factor)")
    chosen = tuple(
        g
        for g in wp_pgons(params)
        if sum(pgon_labels(g)) % params.q in (0, 1)
    )
    return SurfaceComplex(params=params, pgons=chosen)


def surface_is_manifold(S: SurfaceComplex) -> bool:
    """Closed-manifold test, including the link length 2q."""
    cells = S.to_polygonal()
    if not check_manifold(cells).ok:
        return False
    return all(
        len(vertex_link_cycle(cells, v)) == 2 * S.q for v in S.vertices
    )


def surface_is_connected(S: SurfaceComplex) -> bool:
    return is_connected(S.to_polygonal())


def surface_orientation(S: SurfaceComplex) -> dict[FaceVector, int] | None:
    """Orientation by the label-sum rule, validated edge by edge.

    Faces with label sum 0 keep their stored corner cycle, faces with sum 1
    reverse it.  Returns the sign assignment when every edge is traversed
    once in each direction, else None.  The assignment is cross-checked
    against generic orientation propagation.
    """
    directed: dict[tuple[FaceVector, FaceVector], int] = {}
    for g in S.pgons:
        corners = pgon_vertices(g)
        if S.orientation_sign(g) < 0:
            corners = corners[::-1]
        n = len(corners)
        for k in range(n):
            arc = (corners[k], corners[(k + 1) % n])
            directed[arc] = directed.get(arc, 0) + 1
    for (a, b), count in directed.items():
        if count != 1 or directed.get((b, a), 0) != 1:
            return None
    generic_ok, _ = check_orientable(S.to_polygonal())
    assert generic_ok, "sum-rule orientation exists but propagation failed"
    return {g: S.orientation_sign(g) for g in S.pgons}


def surface_genus(S: SurfaceComplex) -> int:
    if not surface_is_connected(S):
        raise ValueError("genus needs a connected surface")
    if not surface_is_manifold(S):
        raise ValueError("genus needs a closed manifold")
    if surface_orientation(S) is None:
        raise ValueError("genus needs an orientable surface")
    f0, f1, f2 = S.f_vector()
    chi = f0 - f1 + f2
    assert chi % 2 == 0
    return (2 - chi) // 2


# --- the four symmetry generators -----------------------------------------


def _permute_mask(mask: int, perm: dict[int, int]) -> int:
    return mask_of((perm[j] for j in mask_indices(mask)), len(perm))


def apply_automorphism(name: str, fv: FaceVector) -> FaceVector:
    """Apply one generator entrywise to a face vector.

    flip    reverse the block order
    parity  first block j -> 1-j, all other blocks j -> -j (mod q)
    rotate  first block j -> j+1, second block j -> j-1 (mod q)
    shift   cyclic left shift of the blocks

    Full entries are carried setwise (each map permutes Z_q, so they stay
    full); co-singletons map to co-singletons.
    """
    p, q = fv.m, fv.mprime
    masks = list(fv.masks)
    if name == "flip":
        masks = masks[::-1]
    elif name == "shift":
        masks = masks[1:] + masks[:1]
    elif name == "parity":
        first = {j: (1 - j) % q for j in range(q)}
        rest = {j: (-j) % q for j in range(q)}
        masks = [_permute_mask(masks[0], first)] + [
            _permute_mask(mk, rest) for mk in masks[1:]
        ]
    elif name == "rotate":
        up = {j: (j + 1) % q for j in range(q)}
        down = {j: (j - 1) % q for j in range(q)}
        masks[0] = _permute_mask(masks[0], up)
        masks[1] = _permute_mask(masks[1], down)
    else:
        raise ValueError(f"unknown generator {name!r}")
    return FaceVector(m=p, mprime=q, masks=tuple(masks))


@dataclass(frozen=True)
class Flag:
    vertex: FaceVector
    edge: FaceVector
    pgon: FaceVector


@dataclass
class FlagReport:
    transitive: bool
    flag_count: int
    orbit_size: int
    generator_checks: dict[str, bool] = field(default_factory=dict)


def base_flag(S: SurfaceComplex) -> Flag:
    """The distinguished flag: all-zero p-gon, its edge 0 and corner 0."""
    g0 = pgon_from_labels([0] * S.p, S.q)
    return Flag(
        vertex=pgon_vertex(g0, 0),
        edge=pgon_edge(g0, 0),
        pgon=g0,
    )


def all_flags(S: SurfaceComplex) -> list[Flag]:
    out = []
    p = S.p
    for g in S.pgons:
        corners = pgon_vertices(g)
        sides = pgon_edges(g)
        for k in range(p):
            out.append(Flag(vertex=corners[(k - 1) % p], edge=sides[k], pgon=g))
            out.append(Flag(vertex=corners[k], edge=sides[k], pgon=g))
    return out


def _apply_to_flag(S: SurfaceComplex, name: str, flag: Flag) -> Flag:
    image = Flag(
        vertex=apply_automorphism(name, flag.vertex),
        edge=apply_automorphism(name, flag.edge),
        pgon=apply_automorphism(name, flag.pgon),
    )
    if (
        image.vertex not in S.vertex_set
        or image.edge not in S.edge_set
        or image.pgon not in S.pgon_set
    ):
        raise ValueError(f"generator {name!r} left the surface")
    if not (
        incidence(image.vertex, image.edge)
        and incidence(image.edge, image.pgon)
    ):
        raise ValueError(f"generator {name!r} broke incidence")
    return image


FLAG_GUARD = 10**5


def check_flag_transitive(S: SurfaceComplex) -> FlagReport:
    """Grow the base flag's orbit under the four generators; compare counts."""
    flag_count = 4 * S.p * S.q ** (S.p - 1)
    if flag_count > FLAG_GUARD:
        raise ValueError(f"flag count {flag_count} exceeds guard {FLAG_GUARD}")
    flags = all_flags(S)
    assert len(flags) == len(set(flags)) == flag_count
    checks = {}
    start = base_flag(S)
    orbit = {start}
    frontier = [start]
    while frontier:
        flag = frontier.pop()
        for name in GENERATORS:
            image = _apply_to_flag(S, name, flag)
            checks[name] = True
            if image not in orbit:
                orbit.add(image)
                frontier.append(image)
    return FlagReport(
        transitive=len(orbit) == flag_count,
        flag_count=flag_count,
        orbit_size=len(orbit),
        generator_checks=checks,
    )


def dual_surface(S: SurfaceComplex) -> PolygonalComplex:
    """Abstract dual: one 2q-gon per vertex, one vertex per p-gon."""
    return dual_complex(S.to_polygonal())


# --- realizations ----------------------------------------------------------


@dataclass(frozen=True)
class RealizedComplex:
    """A polygonal complex together with exact vertex coordinates."""

    cells: PolygonalComplex
    coords: dict[object, Vec]

    @property
    def dim(self) -> int:
        return len(next(iter(self.coords.values())))

    def verify(self, pairwise_limit: int = 64) -> EmbeddingReport:
        return verify_embedded_complex(
            self.cells, self.coords, pairwise_limit=pairwise_limit
        )


def canonical_realization(S: SurfaceComplex) -> RealizedComplex:
    """The surface on the actual wedge-product vertex coordinates."""
    coords = wp_vertex_coords(S.p, S.q)
    return RealizedComplex(
        cells=S.to_polygonal(),
        coords={v: coords[v] for v in S.vertices},
    )


def _random_map(rng: random.Random, rows: int, cols: int) -> list[Vec]:
    return [
        tuple(Fraction(rng.randint(-999, 999), 1000) for _ in range(cols))
        for _ in range(rows)
    ]


def project_generic_r5(
    R: RealizedComplex,
    seed: int = 0,
    attempts: int = 20,
    pairwise_limit: int = 64,
) -> RealizedComplex:
    """Push a realization down to R^5 by a random exact linear map.

    Faces of an embedded 2-complex miss each other generically in five
    dimensions, so almost every rational matrix works; each candidate image
    is still verified exactly and rejected on any contact.  Inputs already
    in R^5 pass through unchanged.
    """
    if R.dim < 5:
        raise ValueError("need a realization in dimension >= 5")
    if R.dim == 5:
        return R
    last: EmbeddingReport | None = None
    for attempt in range(attempts):
        rng = random.Random(seed * 1009 + attempt)
        matrix = _random_map(rng, 5, R.dim)
        coords = {k: mat_vec(matrix, x) for k, x in R.coords.items()}
        candidate = RealizedComplex(cells=R.cells, coords=coords)
        report = candidate.verify(pairwise_limit=pairwise_limit)
        if report.ok:
            return candidate
        last = report
    raise RuntimeError(
        f"no embedding after {attempts} random maps; last failures: "
        f"{last.failures if last else []}"
    )
