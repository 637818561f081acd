"""Deformed wedge products of a polygon and an interval, projected to R^4/R^3.

The inequality system built here perturbs ``C_p wedge [-1,1]`` into a band
matrix: row pair i carries the polygon normal a_i scaled by M^(p-1-i), a
small +-eps on the diagonal y-column and a unit super-diagonal, while the
first row pair carries -1 across all later y-columns.  For suitable eps and
M this keeps the wedge-product combinatorics (certified by solving every
vertex system) while tilting all surface p-gons so that they survive the
orthogonal projection onto the first four coordinates and land on the lower
hull; dropping the fourth coordinate then embeds the surface in R^3.

Every step ships an exact certificate: positive-spanning multipliers for
face survival, sign-patterned nonnegative combinations for the lower hull,
and rational face-intersection tests for the final embedding.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .complexes import PolygonalComplex, vertex_link_cycle
from .exactkernel import (
    SpanCertificate,
    SpanResult,
    Vec,
    dot,
    frac,
    nonneg_combination,
    positively_spans,
    vec_sub,
    zero_vec,
)
from .hull4d import (
    FaceLattice,
    HullResult,
    centroid,
    certify_lattice,
    convex_hull,
    face_lattice,
    polar_vertex,
    schlegel_project,
)
from .polytope import (
    DegenerateVertexError,
    HPolytope,
    Label,
    VPolytope,
    base,
    lid,
    make_polygon,
    pair,
    vertex_enumerate,
)
from .surface import RealizedComplex, build_surface
from .wpcombin import (
    FaceVector,
    WpParams,
    pgon_edges,
    pgon_vertices,
    tight_labels,
    wp_vertices,
)

EPS_DEFAULT = Fraction(1, 10)
M_DEFAULT = Fraction(64)
DELTA_DEFAULT = Fraction(1, 4)
MAX_RETRIES = 8


class CertificationError(RuntimeError):
    """A deformation or projection claim could not be certified."""


def _polygon_normals(p: int) -> list[Vec]:
    poly = make_polygon(p)
    return [poly.normals[poly.facet_index(base(i))] for i in range(p)]


def _band_rows(
    p: int,
    eps: Fraction,
    M: Fraction,
    scale_power: int,
    with_interval: bool,
    delta: Fraction | None,
) -> tuple[list[Vec], list[Label]]:
    """Rows of the deformed system, normalized to right-hand side 1.

    ``scale_power`` is the exponent of M on the first row pair (p-1 for the
    plain wedge product, p when an interval factor extends the chain).  With
    the interval, the super-diagonal continues through the z-column and two
    lid rows (0, ..., 0, +-delta) close the system.
    """
    a = _polygon_normals(p)
    ycols = p + (1 if with_interval else 0)
    normals: list[Vec] = []
    labels: list[Label] = []
    for i in range(p):
        weight = M ** (scale_power - i)
        for j in (0, 1):
            sign = eps if j == 1 else -eps
            row = [weight * a[i][0], weight * a[i][1]] + [Fraction(0)] * ycols
            row[2 + i] = sign
            if i == 0:
                for c in range(1, ycols):
                    row[2 + c] = Fraction(-1)
            elif i + 1 < ycols:
                row[2 + i + 1] = Fraction(1)
            normals.append(tuple(x / weight for x in row))
            labels.append(pair(i, j))
    if with_interval:
        assert delta is not None
        for s, sgn in (("+", 1), ("-", -1)):
            row = zero_vec(2 + p) + (sgn * delta,)
            normals.append(row)
            labels.append(lid(s))
    return normals, labels


def deformed_wp_system(p: int, eps: Fraction, M: Fraction) -> HPolytope:
    """The band system for the wedge product of C_p and an interval."""
    if p < 3:
        raise ValueError("need a polygon with at least 3 facets")
    eps, M = frac(eps), frac(M)
    if eps <= 0:
        raise ValueError("eps must be positive (eps = 0 degenerates)")
    if M < 2:
        raise ValueError("M must be at least 2")
    normals, labels = _band_rows(
        p, eps, M, scale_power=p - 1, with_interval=False, delta=None
    )
    return HPolytope(dim=p + 2, normals=tuple(normals), labels=tuple(labels))


def deformed_prism_system(
    p: int, eps: Fraction, M: Fraction, delta: Fraction
) -> HPolytope:
    """The band system for (C_p wedge interval) x interval."""
    if p < 3:
        raise ValueError("need a polygon with at least 3 facets")
    eps, M, delta = frac(eps), frac(M), frac(delta)
    if eps <= 0 or delta <= 0:
        raise ValueError("eps and delta must be positive")
    if M < 2:
        raise ValueError("M must be at least 2")
    normals, labels = _band_rows(
        p, eps, M, scale_power=p, with_interval=True, delta=delta
    )
    return HPolytope(dim=p + 3, normals=tuple(normals), labels=tuple(labels))


def _wp_candidates(p: int) -> list[frozenset[Label]]:
    return [tight_labels(v) for v in wp_vertices(WpParams(p=p, q=2))]


@dataclass(frozen=True)
class DeformedWp:
    """A certified deformed realization of C_p wedge interval."""

    p: int
    eps: Fraction
    M: Fraction
    system: HPolytope
    vertices: VPolytope

    @property
    def dim(self) -> int:
        return self.system.dim

    @cached_property
    def vertex_coords(self) -> dict[FaceVector, Vec]:
        by_tight = {
            tight_labels(v): v for v in wp_vertices(WpParams(p=self.p, q=2))
        }
        assert self.vertices.tight is not None
        return {
            by_tight[t]: x
            for x, t in zip(self.vertices.vertices, self.vertices.tight)
        }


def build_deformed_wp(
    p: int,
    eps: Fraction = EPS_DEFAULT,
    M: Fraction = M_DEFAULT,
    retries: int = MAX_RETRIES,
) -> DeformedWp:
    """Build the band system and certify it against the wedge combinatorics.

    Certification solves all p 2^(p-2) vertex systems and demands strict
    feasibility of every non-tight inequality.  On failure, eps halves and
    M doubles, up to ``retries`` times.
    """
    eps, M = frac(eps), frac(M)
    candidates = _wp_candidates(p)
    for _ in range(retries + 1):
        system = deformed_wp_system(p, eps, M)
        try:
            V = vertex_enumerate(system, candidates=candidates)
        except DegenerateVertexError:
            eps /= 2
            M *= 2
            continue
        return DeformedWp(p=p, eps=eps, M=M, system=system, vertices=V)
    raise CertificationError(
        f"no certified deformation for p={p} after {retries} escalations"
    )


# --- face certificates -----------------------------------------------------


@dataclass(frozen=True)
class PreservationCheck:
    """Outcome of the survive-the-projection test for one face."""

    preserved: bool
    k: int
    result: SpanResult | None  # None when k = d (vacuous condition)


@dataclass(frozen=True)
class LowerHullCheck:
    on_lower_hull: bool
    k: int
    certificate: SpanCertificate | None


def _tight_normals(system: HPolytope, tight: Iterable[Label]) -> list[Vec]:
    return [system.normals[system.facet_index(lb)] for lb in sorted(tight)]


def check_preserved(
    system: HPolytope, tight: Iterable[Label], k: int
) -> PreservationCheck:
    """A face survives projection onto the first k coordinates iff its
    tight normals, truncated to the last d-k coordinates, positively span."""
    d = system.dim
    if not 0 < k <= d:
        raise ValueError(f"projection target k={k} out of range for dim {d}")
    rows = _tight_normals(system, tight)
    if k == d:
        return PreservationCheck(preserved=True, k=k, result=None)
    result = positively_spans([r[k:] for r in rows])
    return PreservationCheck(preserved=result.spans, k=k, result=result)


def check_lower_hull(
    system: HPolytope, tight: Iterable[Label], k: int
) -> LowerHullCheck:
    """Find an outer normal for the face that is zero past coordinate k-1
    and strictly negative there; such a face projects onto the lower hull."""
    d = system.dim
    if not 0 < k <= d:
        raise ValueError(f"projection target k={k} out of range for dim {d}")
    rows = _tight_normals(system, tight)
    pattern = ["free"] * (k - 1) + ["negative"] + ["zero"] * (d - k)
    cert = nonneg_combination(rows, pattern)
    return LowerHullCheck(on_lower_hull=cert is not None, k=k, certificate=cert)


def verify_face_certificates(
    system: HPolytope,
    tight: Iterable[Label],
    preserved: PreservationCheck,
    lower: LowerHullCheck,
) -> bool:
    """Re-run both certificates against the system, from scratch."""
    rows = _tight_normals(system, tight)
    k = preserved.k
    if preserved.result is not None:
        cert = preserved.result.certificate
        if cert is None or not cert.verify([r[k:] for r in rows]):
            return False
        if any(m < 1 for m in cert.multipliers):
            return False
    if lower.certificate is None:
        return False
    cert = lower.certificate
    if not cert.verify(rows):
        return False
    witness = cert.witness
    k = lower.k
    return witness[k - 1] < 0 and all(x == 0 for x in witness[k:])


@dataclass(frozen=True)
class FaceCertificate:
    face: FaceVector
    tight: frozenset[Label]
    preserved: PreservationCheck
    lower: LowerHullCheck

    @property
    def ok(self) -> bool:
        return self.preserved.preserved and self.lower.on_lower_hull


@dataclass(frozen=True)
class PreservationReport:
    k: int
    certificates: tuple[FaceCertificate, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.certificates)

    def reverify(self, system: HPolytope) -> bool:
        return all(
            verify_face_certificates(system, c.tight, c.preserved, c.lower)
            for c in self.certificates
        )


def certify_faces(
    system: HPolytope, faces: Sequence[FaceVector], k: int
) -> PreservationReport:
    certs = []
    for fv in faces:
        tight = tight_labels(fv)
        certs.append(
            FaceCertificate(
                face=fv,
                tight=tight,
                preserved=check_preserved(system, tight, k),
                lower=check_lower_hull(system, tight, k),
            )
        )
    return PreservationReport(k=k, certificates=tuple(certs))


def certify_surface(D: DeformedWp, k: int = 4) -> PreservationReport:
    """Certificates for all 2^p surface p-gons of the deformed system."""
    S = build_surface(WpParams(p=D.p, q=2))
    return certify_faces(D.system, S.pgons, k)


# --- projection ------------------------------------------------------------

PAIRWISE_FACE_LIMIT = 32


def project_surface(
    D: DeformedWp,
    target: int = 3,
    report: PreservationReport | None = None,
    pairwise_limit: int = PAIRWISE_FACE_LIMIT,
) -> RealizedComplex:
    """Drop the certified deformed surface to the first 3 or 4 coordinates.

    Faces are re-verified exactly in the image: planarity, convex position,
    cyclic order, and (up to ``pairwise_limit`` faces, the quadratic test)
    mutual intersections limited to shared vertices and edges.
    """
    if target not in (3, 4):
        raise ValueError("target dimension must be 3 or 4")
    if report is None:
        report = certify_surface(D, k=4)
    if report.k != 4 or not report.ok:
        raise CertificationError(
            "surface faces lack preserved/lower-hull certificates"
        )
    S = build_surface(WpParams(p=D.p, q=2))
    cells = S.to_polygonal()
    coords = {v: x[:target] for v, x in D.vertex_coords.items()}
    embedding = RealizedComplex(cells=cells, coords=coords)
    check = embedding.verify(pairwise_limit=pairwise_limit)
    if not check.ok:
        raise CertificationError(
            f"projected surface failed verification: {check.failures[:4]}"
        )
    return embedding


# --- prism pipeline: dual surface via polarity and Schlegel ----------------

PrismKey = tuple[FaceVector, str]  # wedge-product vertex plus lid sign


@dataclass(frozen=True)
class DeformedPrism:
    """A certified deformed realization of (C_p wedge interval) x interval."""

    p: int
    eps: Fraction
    M: Fraction
    delta: Fraction
    system: HPolytope
    vertices: VPolytope

    @property
    def dim(self) -> int:
        return self.system.dim

    @cached_property
    def vertex_coords(self) -> dict[PrismKey, Vec]:
        by_tight = {
            tight_labels(v): v for v in wp_vertices(WpParams(p=self.p, q=2))
        }
        assert self.vertices.tight is not None
        out: dict[PrismKey, Vec] = {}
        for x, t in zip(self.vertices.vertices, self.vertices.tight):
            signs = [s for s in ("+", "-") if lid(s) in t]
            assert len(signs) == 1
            fv = by_tight[t - {lid(signs[0])}]
            out[(fv, signs[0])] = x
        return out


def build_deformed_prism(
    p: int,
    eps: Fraction = EPS_DEFAULT,
    M: Fraction = M_DEFAULT,
    delta: Fraction = DELTA_DEFAULT,
    retries: int = MAX_RETRIES,
) -> DeformedPrism:
    """Certified prism over the deformed wedge product.

    Each prism vertex is a wedge-product vertex system plus one lid row;
    the same eps/M escalation as the base build applies, delta stays put
    (the lid rows only pin the last coordinate to +-1/delta).
    """
    eps, M, delta = frac(eps), frac(M), frac(delta)
    candidates = [
        t | {lid(s)} for t in _wp_candidates(p) for s in ("+", "-")
    ]
    for _ in range(retries + 1):
        system = deformed_prism_system(p, eps, M, delta)
        try:
            V = vertex_enumerate(system, candidates=candidates)
        except DegenerateVertexError:
            eps /= 2
            M *= 2
            continue
        return DeformedPrism(
            p=p, eps=eps, M=M, delta=delta, system=system, vertices=V
        )
    raise CertificationError(
        f"no certified prism deformation for p={p} after {retries} escalations"
    )


@dataclass(frozen=True)
class PosetCopiesReport:
    """Where the projected polytope's lattice hosts the surface poset.

    The prism boundary carries the surface three times: a bottom and a top
    copy (faces joined with one lid) and a copy shifted up one dimension
    (the prisms over the faces).  ``missing`` lists, per copy, surface
    faces whose vertex set did not appear in the lattice at the right rank.
    """

    missing: dict[str, tuple[FaceVector, ...]]

    @property
    def ok(self) -> bool:
        return not any(self.missing.values())


@dataclass(frozen=True)
class PrismPipelineResult:
    prism: DeformedPrism
    report: PreservationReport
    hull: HullResult
    lattice: FaceLattice
    copies: PosetCopiesReport
    prism_complex: RealizedComplex
    dual_complex: RealizedComplex
    dual_coords4: dict[FaceVector, Vec]
    window_vertex: PrismKey


def _surface_edge_ends(
    S, p: int
) -> dict[FaceVector, tuple[FaceVector, FaceVector]]:
    ends: dict[FaceVector, tuple[FaceVector, FaceVector]] = {}
    for g in S.pgons:
        corners = pgon_vertices(g)
        for k, e in enumerate(pgon_edges(g)):
            ends.setdefault(e, (corners[(k - 1) % p], corners[k]))
    return ends


def _check_poset_copies(
    S, lattice: FaceLattice, idx: dict[PrismKey, int], p: int
) -> PosetCopiesReport:
    ends = _surface_edge_ends(S, p)
    members = (
        [("v", v, (v,)) for v in S.vertices]
        + [("e", e, ends[e]) for e in S.edges]
        + [("g", g, tuple(pgon_vertices(g))) for g in S.pgons]
    )
    dim_of = {"v": 0, "e": 1, "g": 2}
    missing: dict[str, list[FaceVector]] = {"bottom": [], "top": [], "prism": []}
    for kind, face, corners in members:
        d0 = dim_of[kind]
        for name, signs, lift in (
            ("bottom", ("-",), 0),
            ("top", ("+",), 0),
            ("prism", ("-", "+"), 1),
        ):
            want = frozenset(idx[(v, s)] for v in corners for s in signs)
            if not lattice.has_face(want, d0 + lift):
                missing[name].append(face)
    return PosetCopiesReport(
        missing={k: tuple(v) for k, v in missing.items()}
    )


def build_prism_pipeline(
    p: int,
    eps: Fraction = EPS_DEFAULT,
    M: Fraction = M_DEFAULT,
    delta: Fraction = DELTA_DEFAULT,
    pairwise_limit: int = 64,
) -> PrismPipelineResult:
    """Project the deformed prism to R^4 and extract the dual surface.

    The pipeline certifies the p-gon-prism faces (preserved + lower hull),
    takes the exact hull of the projected vertices, confirms the three
    surface poset copies in its face lattice, polarizes, reads the dual
    surface off the dual 2-skeleton (one quadrilateral per surface vertex,
    cornered at the duals of its incident p-gon prisms), and renders it in
    R^3 by a Schlegel projection through the dual facet farthest from the
    center.  No dual facet avoids the dual surface entirely -- every
    projected vertex lies on some p-gon prism -- but the window facet being
    3-dimensional can never contain the 2-dimensional dual surface, so the
    projection stays injective on it.  Alongside, the prism over the
    surface itself is dropped to R^3 off the lower hull.  Every geometric
    claim is re-verified exactly; failures raise CertificationError.
    """
    prism = build_deformed_prism(p, eps, M, delta)
    S = build_surface(WpParams(p=p, q=2))
    report = certify_faces(prism.system, S.pgons, k=4)
    if not report.ok or not report.reverify(prism.system):
        raise CertificationError("p-gon prism faces lack certificates")

    keys = sorted(prism.vertex_coords, key=lambda ks: (ks[0].masks, ks[1]))
    pts4 = [prism.vertex_coords[key][:4] for key in keys]
    if len(set(pts4)) != len(pts4):
        raise CertificationError("projected prism vertices collide")
    idx = {key: i for i, key in enumerate(keys)}

    hull = convex_hull(pts4)
    lattice = face_lattice(hull)
    if not certify_lattice(lattice):
        raise CertificationError("projected polytope lattice failed checks")
    if lattice.hull_vertices != frozenset(range(len(pts4))):
        raise CertificationError("a projected point is not a hull vertex")

    copies = _check_poset_copies(S, lattice, idx, p)
    if not copies.ok:
        raise CertificationError(
            f"surface poset copies incomplete: {copies.missing}"
        )

    # polarize; the p-gon prisms become the dual surface's vertices
    m = centroid(hull.points)
    facet_index = {F.vertices: fi for fi, F in enumerate(hull.facets)}
    facet_of_pgon: dict[FaceVector, int] = {}
    for g in S.pgons:
        want = frozenset(
            idx[(v, s)] for v in pgon_vertices(g) for s in ("+", "-")
        )
        fi = facet_index.get(want)
        if fi is None:
            raise CertificationError("p-gon prism is not a facet in R^4")
        facet_of_pgon[g] = fi
    dual_points = [polar_vertex(F, m) for F in hull.facets]
    dual_coords4 = {g: dual_points[facet_of_pgon[g]] for g in S.pgons}

    # the dual 2-face over each vertical edge must be exactly the
    # quadrilateral of its 2q incident p-gon prisms, in link order
    C = S.to_polygonal()
    quad_cycles: list[tuple[FaceVector, ...]] = []
    for v in S.vertices:
        vertical = frozenset((idx[(v, "-")], idx[(v, "+")]))
        through = {
            fi for fi, F in enumerate(hull.facets) if vertical <= F.vertices
        }
        link = vertex_link_cycle(C, v)
        cycle = tuple(C.face_keys[i] for i in link)
        if through != {facet_of_pgon[g] for g in cycle}:
            raise CertificationError(
                "dual 2-face picks up facets beyond the p-gon prisms"
            )
        quad_cycles.append(cycle)

    # Schlegel window: the dual facet (one per projected vertex) farthest
    # from the center, i.e. with the shortest primal vertex vector
    w_star = min(
        keys, key=lambda ks: (
            dot(vec_sub(pts4[idx[ks]], m), vec_sub(pts4[idx[ks]], m)),
            pts4[idx[ks]],
        )
    )
    w_vec = vec_sub(pts4[idx[w_star]], m)
    window_members = [
        fi for fi, F in enumerate(hull.facets) if idx[w_star] in F.vertices
    ]
    other_facets = [
        (vec_sub(x, m), Fraction(1))
        for i, x in enumerate(pts4)
        if i != idx[w_star]
    ]
    chart = schlegel_project(
        dual_points, w_vec, Fraction(1), window_members, other_facets
    )
    dual_cells = PolygonalComplex(
        face_keys=tuple(S.vertices), face_cycles=tuple(quad_cycles)
    )
    dual_complex = RealizedComplex(
        cells=dual_cells,
        coords={g: chart.images[facet_of_pgon[g]] for g in S.pgons},
    )
    dual_check = dual_complex.verify(pairwise_limit=pairwise_limit)
    if not dual_check.ok:
        raise CertificationError(
            f"dual surface failed in R^3: {dual_check.failures[:4]}"
        )

    # the prism over the surface, dropped off the lower hull into R^3
    ends = _surface_edge_ends(S, p)
    face_keys: list = []
    cycles: list[tuple[PrismKey, ...]] = []
    for g in S.pgons:
        corners = pgon_vertices(g)
        face_keys.append(("bottom", g))
        cycles.append(tuple((v, "-") for v in corners))
        face_keys.append(("top", g))
        cycles.append(tuple((v, "+") for v in corners))
    for e in S.edges:
        a, b = ends[e]
        face_keys.append(("side", e))
        cycles.append(((a, "-"), (b, "-"), (b, "+"), (a, "+")))
    prism_complex = RealizedComplex(
        cells=PolygonalComplex(
            face_keys=tuple(face_keys), face_cycles=tuple(cycles)
        ),
        coords={key: pts4[i][:3] for key, i in idx.items()},
    )
    prism_check = prism_complex.verify(pairwise_limit=pairwise_limit)
    if not prism_check.ok:
        raise CertificationError(
            f"prism complex failed in R^3: {prism_check.failures[:4]}"
        )

    return PrismPipelineResult(
        prism=prism,
        report=report,
        hull=hull,
        lattice=lattice,
        copies=copies,
        prism_complex=prism_complex,
        dual_complex=dual_complex,
        dual_coords4=dual_coords4,
        window_vertex=w_star,
    )
