import pytest

from wedgesurf.wpcombin import (
    FaceVector,
    WpParams,
    cosingleton_mask,
    full_mask,
    incidence,
    mask_of,
    meet,
    pgon_edges,
    pgon_from_labels,
    pgon_labels,
    pgon_vertices,
    tight_labels,
    vertex_full_position,
    wedge_product_vertices,
    wp_pgons,
    wp_vertices,
)


@pytest.mark.parametrize(
    "p,q",
    [(3, 2), (4, 2), (5, 2), (6, 2), (3, 3), (4, 3), (5, 3), (6, 3)],
)
def test_wp_vertex_and_pgon_counts(p, q):
    params = WpParams(p=p, q=q)
    verts = wp_vertices(params)
    pgons = wp_pgons(params)
    assert len(verts) == p * q ** (p - 2) == params.vertex_count
    assert len(pgons) == q**p == params.pgon_count
    assert len(set(verts)) == len(verts)
    assert len(set(pgons)) == len(pgons)


@pytest.mark.parametrize("p,q", [(3, 2), (4, 2), (5, 3)])
def test_wp_vertices_are_simple(p, q):
    # Tight facet count of every vertex equals the dimension 2 + p(q-1).
    params = WpParams(p=p, q=q)
    for v in wp_vertices(params):
        assert v.tight_count() == params.dim
        assert len(tight_labels(v)) == params.dim


def test_vertex_structure_4_3():
    params = WpParams(p=4, q=3)
    for v in wp_vertices(params):
        i = vertex_full_position(v)
        full = full_mask(3)
        assert v.masks[i] == full
        assert v.masks[(i + 1) % 4] == full
        for k in range(4):
            if k not in (i, (i + 1) % 4):
                assert v.masks[k].bit_count() == 2


def test_incidence_example():
    # Vertex ([2], [2], {1}, {1}) sits on the edge ([2], {1}, {1}, {1}).
    q = 2
    vertex = FaceVector(4, q, (3, 3, 2, 2))
    edge = FaceVector(4, q, (3, 2, 2, 2))
    assert incidence(vertex, edge)
    assert not incidence(edge, vertex)


def test_incidence_requires_entrywise_subsets():
    q = 3
    a = FaceVector(3, q, (full_mask(q), full_mask(q), cosingleton_mask(0, q)))
    b = FaceVector(3, q, (full_mask(q), cosingleton_mask(1, q), cosingleton_mask(0, q)))
    assert incidence(a, b)
    c = FaceVector(3, q, (full_mask(q), cosingleton_mask(1, q), cosingleton_mask(1, q)))
    assert not incidence(a, c)


def test_pgon_corner_cycle():
    params = WpParams(p=5, q=2)
    pgon = wp_pgons(params)[7]
    corners = pgon_vertices(pgon)
    edges = pgon_edges(pgon)
    assert len(set(corners)) == 5
    assert len(set(edges)) == 5
    for fv in corners + edges:
        assert incidence(fv, pgon)
    # Edge k joins corners k-1 and k.
    for k in range(5):
        assert incidence(corners[(k - 1) % 5], edges[k])
        assert incidence(corners[k], edges[k])
        for i in range(5):
            if i not in ((k - 1) % 5, k):
                assert not incidence(corners[i], edges[k])


def test_edge_is_meet_of_its_corners():
    params = WpParams(p=4, q=3)
    pgon = wp_pgons(params)[10]
    corners = pgon_vertices(pgon)
    edges = pgon_edges(pgon)
    for k in range(4):
        assert meet(corners[(k - 1) % 4], corners[k]) == edges[k]


def test_pgon_labels_round_trip():
    fv = pgon_from_labels((2, 0, 1, 2), q=3)
    assert pgon_labels(fv) == (2, 0, 1, 2)
    params = WpParams(p=4, q=3)
    assert fv in wp_pgons(params)


def test_wedge_product_vertices_generalizes_wp():
    # C_4 wedge segment: the generic enumeration must match wp_vertices.
    p_verts = [frozenset({i, (i + 1) % 4}) for i in range(4)]
    q_verts = [frozenset({1}), frozenset({0})]  # segment vertex j is tight off facet j
    generic = wedge_product_vertices(4, p_verts, 2, q_verts)
    assert set(generic) == set(wp_vertices(WpParams(p=4, q=2)))


def test_wedge_product_vertices_square_factor():
    # C_4 wedge C_4 has 4 * 4^2 vertices, each tight on 12 > 10 facets.
    sq = [frozenset({i, (i + 1) % 4}) for i in range(4)]
    verts = wedge_product_vertices(4, sq, 4, sq)
    assert len(verts) == 4 * 16
    assert len(set(verts)) == len(verts)
    for v in verts:
        assert v.tight_count() == 12


def test_vertices_lie_on_pgons():
    params = WpParams(p=4, q=2)
    pgons = wp_pgons(params)
    for v in wp_vertices(params):
        containing = [g for g in pgons if incidence(v, g)]
        # Free entries at the two full positions: q^2 polygon faces.
        assert len(containing) == 4


def test_mask_helpers():
    assert mask_of([0, 2], 3) == 0b101
    assert cosingleton_mask(1, 3) == 0b101
    assert full_mask(3) == 0b111
    fv = FaceVector(3, 3, (0b101, 0b111, 0b011))
    assert fv.entries() == ((0, 2), (0, 1, 2), (0, 1))
    assert FaceVector.from_json(fv.to_json()) == fv
