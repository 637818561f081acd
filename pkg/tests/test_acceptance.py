"""Acceptance run: the package's headline claims, one test per criterion.

Every test checks one advertised result end to end, enforces its stated
wall-clock budget, and prints a single pass line.  All arithmetic in
these checks is exact; there are no numerical tolerances anywhere.
"""

import time
from fractions import Fraction

from wedgesurf.complexes import check_manifold
from wedgesurf.complexes import genus as complex_genus
from wedgesurf.exactkernel import vec
from wedgesurf.moduli import moduli_bounds
from wedgesurf.polytope import (
    HPolytope,
    generalized_wedge,
    make_polygon,
    make_simplex,
    vertex_enumerate,
    wp_system,
)
from wedgesurf.projection import (
    EPS_DEFAULT,
    M_DEFAULT,
    build_deformed_wp,
    build_prism_pipeline,
    certify_surface,
    check_lower_hull,
    project_surface,
)
from wedgesurf.surface import (
    build_surface,
    check_flag_transitive,
    surface_genus,
    surface_is_connected,
    surface_is_manifold,
    surface_orientation,
)
from wedgesurf.wpcombin import (
    WpParams,
    incidence,
    tight_labels,
    wedge_product_vertices,
    wp_pgons,
    wp_vertices,
)

PQ_RANGE = [(p, q) for p in (3, 4, 5, 6) for q in (2, 3)]


def _finish(number: int, label: str, started: float, budget: float | None):
    elapsed = time.perf_counter() - started
    if budget is not None:
        assert elapsed < budget, (
            f"criterion {number} took {elapsed:.1f}s, budget {budget:.0f}s"
        )
    print(f"criterion {number} ({label}): pass [{elapsed:.1f}s]")


def test_criterion_1_counting_identities():
    t0 = time.perf_counter()
    for p, q in PQ_RANGE:
        params = WpParams(p=p, q=q)
        system = wp_system(p, q)
        assert system.dim == 2 + p * (q - 1)
        assert system.facet_count == p * q
        verts = wp_vertices(params)
        assert len(verts) == len(set(verts)) == p * q ** (p - 2)
        pgons = wp_pgons(params)
        assert len(pgons) == len(set(pgons)) == q**p
    _finish(1, "counting identities", t0, 5)


def test_criterion_2_geometry_matches_combinatorics():
    t0 = time.perf_counter()
    for p, q in PQ_RANGE:
        V = vertex_enumerate(wp_system(p, q))
        combinatorial = {tight_labels(v) for v in wp_vertices(WpParams(p=p, q=q))}
        geometric = set(map(frozenset, V.tight))
        assert geometric == combinatorial
        assert V.vertex_count == len(combinatorial)
    _finish(2, "vertex enumeration bijection", t0, 30)


def _octahedron_structure(S):
    """Exhibit the complex as the octahedron: three antipodal pairs whose
    eight sign transversals are exactly the triangle faces."""
    cells = S.to_polygonal()
    verts = S.vertices
    neighbors = {v: set() for v in verts}
    for e in cells.edges():
        u, v = tuple(e)
        neighbors[u].add(v)
        neighbors[v].add(u)
    side = {}
    axis = 0
    for v in verts:
        if v in side:
            continue
        opposite = set(verts) - {v} - neighbors[v]
        assert len(opposite) == 1
        side[v] = (axis, 1)
        side[opposite.pop()] = (axis, -1)
        axis += 1
    assert axis == 3
    patterns = set()
    for cycle in cells.face_cycles:
        marks = sorted(side[v] for v in cycle)
        assert [a for a, _ in marks] == [0, 1, 2]
        patterns.add(tuple(s for _, s in marks))
    assert len(patterns) == 8


def test_criterion_3_surface_topology():
    t0 = time.perf_counter()
    for p, q in PQ_RANGE:
        S = build_surface(WpParams(p=p, q=q))
        scale = q ** (p - 2)
        assert S.f_vector() == (p * scale, p * q * scale, 2 * q * scale)
        assert surface_is_manifold(S)
        assert surface_is_connected(S)
        assert surface_orientation(S) is not None
        expected = 1 + Fraction(scale * (p * q - p - 2 * q), 2)
        assert surface_genus(S) == expected
    _octahedron_structure(build_surface(WpParams(p=3, q=2)))
    _finish(3, "f-vector, topology, octahedron", t0, 10)


def test_criterion_4_regularity():
    t0 = time.perf_counter()
    for p, q in [(3, 2), (4, 2), (5, 2), (3, 3), (4, 3), (5, 3)]:
        S = build_surface(WpParams(p=p, q=q))
        report = check_flag_transitive(S)
        assert report.flag_count == 4 * p * q ** (p - 1)
        assert report.transitive
        assert report.orbit_size == report.flag_count
    _finish(4, "flag count and transitivity", t0, 60)


def test_criterion_5_projection_certificates():
    t0 = time.perf_counter()
    for p in (4, 5, 6):
        D = build_deformed_wp(p, eps=EPS_DEFAULT, M=M_DEFAULT)
        report = certify_surface(D, k=4)
        assert len(report.certificates) == 2**p
        assert all(
            c.preserved.preserved and c.lower.on_lower_hull
            for c in report.certificates
        )
        assert report.reverify(D.system)
        R = project_surface(D, target=3, report=report)
        check = R.verify(pairwise_limit=32)
        assert check.ok
        assert check.pairwise_checked == (p <= 5)
    _finish(5, "preserved faces and R^3 surface", t0, 180)


def test_criterion_6_generalized_wedge_vertex_count():
    t0 = time.perf_counter()
    cases = [  # polygon size n, facet with nbar=2 vertices, simplex dim
        (4, 2, 1),
        (5, 2, 1),  # wedge over the pentagon: (5-2)*2+2 = 8 vertices
        (5, 2, 2),
        (3, 2, 2),
        (6, 2, 1),
    ]
    counts = []
    for n, nbar, fdim in cases:
        W = generalized_wedge(make_polygon(n), 0, make_simplex(fdim))
        nprime = fdim + 1
        expected = (n - nbar) * nprime + nbar
        assert vertex_enumerate(W).vertex_count == expected
        counts.append(expected)
    assert counts[1] == 8
    assert len(cases) >= 5
    _finish(6, "generalized-wedge vertex formula", t0, 5)


def test_criterion_7_dual_pipeline():
    t0 = time.perf_counter()
    for p in (4, 5):
        result = build_prism_pipeline(p)
        assert result.report.ok
        assert result.report.reverify(result.prism.system)
        assert result.copies.ok
        dual_cells = result.dual_complex.cells
        S = build_surface(WpParams(p=p, q=2))
        f0, f1, f2 = S.f_vector()
        assert dual_cells.f_vector() == (f2, f1, f0)
        assert complex_genus(dual_cells) == surface_genus(S)
        # every quad sits in the dual 2-skeleton: its corners are the
        # duals of the p-gon prisms around the matching vertical edge
        for vkey, cycle in zip(dual_cells.face_keys, dual_cells.face_cycles):
            assert len(cycle) == 4
            assert all(incidence(vkey, g) for g in cycle)
        check = result.dual_complex.verify(pairwise_limit=64)
        assert check.ok and check.pairwise_checked
    _finish(7, "prism, polarity, Schlegel", t0, 300)


def test_criterion_8_moduli_bounds():
    t0 = time.perf_counter()
    for p in (3, 4, 5, 6):
        report = moduli_bounds(p, verify=True)
        assert report.support is not None and report.support.ok
        assert report.support_bound == 6 * p
        assert report.naive_estimate == 2 ** (p - 2) * (12 - p) - 15
    assert moduli_bounds(12).naive_estimate == -15
    _finish(8, "support sets and estimates", t0, 30)


def test_criterion_9_negative_controls():
    t0 = time.perf_counter()
    # wedge product with a non-simplex fiber is not simple
    square = [frozenset({i, (i + 1) % 4}) for i in range(4)]
    non_simple = wedge_product_vertices(4, square, 4, square)
    dim = 2 + 4 * 2
    assert all(v.tight_count() == 12 for v in non_simple)
    assert 12 > dim
    # a surface missing one face has boundary and fails the manifold check
    S = build_surface(WpParams(p=4, q=2))
    cells = S.to_polygonal()
    mutilated = type(cells)(
        face_keys=cells.face_keys[1:], face_cycles=cells.face_cycles[1:]
    )
    verdict = check_manifold(mutilated)
    assert not verdict.ok
    assert verdict.boundary_edges
    # a face whose only tight normal points up cannot be on the lower hull
    box = HPolytope(
        dim=2,
        normals=(vec((0, 1)), vec((0, -1)), vec((1, 0)), vec((-1, 0))),
        labels=("top", "bottom", "right", "left"),
    )
    assert not check_lower_hull(box, ["top"], k=1).on_lower_hull
    assert check_lower_hull(box, ["left"], k=1).on_lower_hull
    _finish(9, "negative controls", t0, None)
