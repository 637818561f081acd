from fractions import Fraction

import pytest

from wedgesurf.exactkernel import dot, positively_spans, vec
from wedgesurf.polytope import (
    DegenerateVertexError,
    HPolytope,
    UnboundedError,
    _deformed_product_rows,
    base,
    check_simple,
    deformed_product,
    generalized_wedge,
    lid,
    make_polygon,
    make_simplex,
    pair,
    polar_dual,
    prism,
    product,
    simplex_vertex,
    vertex_enumerate,
    wedge_product,
    wp_system,
    wp_vertex_coords,
)
from wedgesurf.wpcombin import WpParams, tight_labels, wp_vertices

F = Fraction


def interval() -> HPolytope:
    return make_simplex(1)


def test_make_polygon_square():
    sq = make_polygon(4)
    assert sq.dim == 2
    assert set(sq.normals) == {
        vec([1, 1]),
        vec([-1, 1]),
        vec([-1, -1]),
        vec([1, -1]),
    }
    V = vertex_enumerate(sq)
    assert set(V.vertices) == {
        vec([1, 0]),
        vec([0, 1]),
        vec([-1, 0]),
        vec([0, -1]),
    }


@pytest.mark.parametrize("p", [3, 4, 5, 6, 7, 8, 12])
def test_make_polygon_cycle(p):
    poly = make_polygon(p)
    V = vertex_enumerate(poly)
    assert V.vertex_count == p
    assert V.tight is not None
    # Facet adjacency is the p-cycle base(i-1) ~ base(i).
    tights = set(V.tight)
    assert tights == {
        frozenset({base((i - 1) % p), base(i)}) for i in range(p)
    }
    for v in V.vertices:
        assert dot(v, v) == 1  # vertices sit on the unit circle


def test_make_simplex_interval():
    seg = make_simplex(1)
    V = vertex_enumerate(seg)
    assert set(V.vertices) == {(F(-1),), (F(1),)}
    assert simplex_vertex(1, 0) == (F(1),)
    assert simplex_vertex(1, 1) == (F(-1),)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_make_simplex_structure(n):
    S = make_simplex(n)
    assert S.facet_count == n + 1
    V = vertex_enumerate(S)
    assert V.vertex_count == n + 1
    # Vertex j is off facet j only, and the centroid is the origin.
    for j in range(n + 1):
        x = simplex_vertex(n, j)
        tight = S.tight_set(x)
        assert tight == frozenset(base(i) for i in range(n + 1) if i != j)
    assert V.centroid() == tuple([F(0)] * n)


def test_generalized_wedge_interval_over_interval():
    W = generalized_wedge(interval(), 0, interval())
    assert W.dim == 2
    assert W.facet_count == 3
    V = vertex_enumerate(W)
    assert V.vertex_count == 3


def test_generalized_wedge_square_over_edge():
    W = generalized_wedge(make_polygon(4), 0, interval())
    assert W.facet_count == 5
    V = vertex_enumerate(W)
    assert V.vertex_count == 6  # triangular prism


def test_generalized_wedge_pentagon_over_triangle():
    W = generalized_wedge(make_polygon(5), 1, make_simplex(2))
    assert W.dim == 4
    assert W.facet_count == 7
    V = vertex_enumerate(W)
    assert V.vertex_count == 11


@pytest.mark.parametrize(
    "n,nbar,nprime,fdim",
    [(4, 2, 2, 1), (5, 2, 2, 1), (5, 2, 3, 2), (3, 2, 3, 2), (6, 2, 2, 1)],
)
def test_generalized_wedge_vertex_count_formula(n, nbar, nprime, fdim):
    # (n - nbar) n' + nbar vertices for a wedge over a facet with nbar
    # vertices, fiber with n' vertices.
    P = make_polygon(n)
    Q = make_simplex(fdim)
    W = generalized_wedge(P, 0, Q)
    V = vertex_enumerate(W)
    assert V.vertex_count == (n - nbar) * nprime + nbar


def test_wedge_product_dimensions():
    W = wp_system(4, 2)
    assert W.dim == 2 + 4 * 1
    assert W.facet_count == 8
    W53 = wp_system(5, 3)
    assert W53.dim == 2 + 5 * 2
    assert W53.facet_count == 15


@pytest.mark.parametrize("p,q", [(3, 2), (4, 2), (3, 3), (4, 3), (5, 2)])
def test_wp_vertex_bijection(p, q):
    W = wp_system(p, q)
    V = vertex_enumerate(W)
    params = WpParams(p=p, q=q)
    expected = {tight_labels(fv) for fv in wp_vertices(params)}
    assert V.tight is not None
    assert set(V.tight) == expected
    assert V.vertex_count == params.vertex_count
    assert check_simple(W, V)


@pytest.mark.parametrize("p,q", [(3, 2), (4, 2), (4, 3)])
def test_wp_vertex_coords_match_enumeration(p, q):
    W = wp_system(p, q)
    V = vertex_enumerate(W)
    coords = wp_vertex_coords(p, q)
    assert set(coords.values()) == set(V.vertices)
    for fv, x in coords.items():
        assert W.tight_set(x) == tight_labels(fv)


def test_wedge_product_fiber_property():
    # Over an interior point of P the y-blocks each hold a scaled copy of Q;
    # over a point on facet i the i-th block degenerates to {0}.
    P = make_polygon(4)
    Q = make_simplex(1)
    x = vec(["1/3", "1/4"])
    assert P.contains(x, strict=True)
    for a in P.normals:
        slack = 1 - dot(a, x)
        assert slack > 0  # nonempty interior fiber blocks
    # On facet 0 the block system {b . y <= 0} must pin y to the origin,
    # which is exactly positive spanning of Q's normals.
    assert positively_spans(Q.normals).spans


def test_wedge_product_special_face_affine_copy():
    # The polygon vertices lift to a face of the generalized wedge that is
    # an exact affine copy of the polygon.
    P = make_polygon(4)
    Q = make_simplex(1)
    W = generalized_wedge(P, 0, Q)
    Vp = vertex_enumerate(P)
    w = simplex_vertex(1, 0)
    lifted = []
    for v in Vp.vertices:
        scale = 1 - dot(P.normals[0], v)
        lifted.append(v + tuple(scale * c for c in w))
    from wedgesurf.exactkernel import affine_rank

    assert affine_rank(lifted) == 2
    # All lifted points satisfy the wedge system and are tight on the rows
    # pairing facet 0 with the facets of Q that hold the fiber vertex w.
    i01 = W.facet_index(pair(0, 1))
    for u in lifted:
        assert W.contains(u)
        assert dot(W.normals[i01], u) == 1


def test_deformed_product_large_eps_is_a_cube():
    D = deformed_product(make_polygon(4), interval(), 0, F(10**6))
    assert D.facet_count == 6
    V = vertex_enumerate(D)
    assert V.vertex_count == 8
    assert check_simple(D, V)


def test_deformed_product_pentagon_triangle():
    D = deformed_product(make_polygon(5), make_simplex(2), 0, F(1, 10))
    assert D.dim == 4
    assert D.facet_count == 8


def test_deformed_product_rejects_nonpositive_eps():
    with pytest.raises(ValueError):
        deformed_product(make_polygon(4), interval(), 0, F(0))
    with pytest.raises(ValueError):
        deformed_product(make_polygon(4), interval(), 0, F(-1, 2))


def test_deformed_product_eps_zero_matches_generalized_wedge():
    P, Q = make_polygon(5), make_simplex(2)
    rows, labels = _deformed_product_rows(P, Q, 2, F(0))
    W = generalized_wedge(P, 2, Q)
    for j in range(Q.facet_count):
        k = labels.index(pair(2, j))
        kw = W.facet_index(pair(2, j))
        assert rows[k] == W.normals[kw]


def test_product_and_prism():
    cube = product(make_polygon(4), interval())
    assert cube.dim == 3
    assert cube.facet_count == 6
    assert vertex_enumerate(cube).vertex_count == 8

    pr = prism(make_polygon(4), F(1))
    assert pr.facet_count == 6
    V = vertex_enumerate(pr)
    assert V.vertex_count == 8
    assert lid("+") in pr.labels and lid("-") in pr.labels

    pw = prism(wp_system(4, 2), F(1, 4))
    assert pw.dim == 7
    assert pw.facet_count == 10


def test_vertex_enumerate_unbounded_rejected():
    H = HPolytope(
        dim=2,
        normals=(vec([1, 0]), vec([0, 1])),
        labels=(base(0), base(1)),
    )
    with pytest.raises(UnboundedError):
        vertex_enumerate(H)


def test_vertex_enumerate_guard():
    W = wp_system(6, 3)  # m = 18, d = 14: within the m <= d + 8 guard
    assert W.facet_count <= W.dim + 8


def test_vertex_enumerate_candidate_mode_flags_bad_candidates():
    W = wp_system(4, 2)
    good = [tight_labels(fv) for fv in wp_vertices(WpParams(p=4, q=2))]
    V = vertex_enumerate(W, candidates=good)
    assert V.vertex_count == 16
    # Full entries at the opposite positions 0 and 2 are not a vertex.
    bad = [frozenset({pair(0, 0), pair(0, 1), pair(2, 0), pair(2, 1), pair(1, 0), pair(3, 0)})]
    with pytest.raises(DegenerateVertexError):
        vertex_enumerate(W, candidates=bad)


def test_non_simple_wedge_product_detected():
    # C_4 wedge C_4: a vertex built from square-vertex fibers lies on 12
    # facets of the 10-dimensional system, so the polytope is not simple.
    P = make_polygon(4)
    W = wedge_product(P, P)
    Vp = vertex_enumerate(P).by_tight_set()
    x = Vp[frozenset({base(0), base(1)})]
    coords = list(x)
    for k in range(4):
        if k in (0, 1):
            coords.extend([F(0), F(0)])
        else:
            scale = 1 - dot(P.normals[k], x)
            y = Vp[frozenset({base(0), base(1)})]
            coords.extend(scale * c for c in y)
    point = tuple(coords)
    assert W.contains(point)
    assert len(W.tight_set(point)) == 12 > W.dim


def test_polar_dual_involution():
    sq = vertex_enumerate(make_polygon(4))
    dual = polar_dual(sq)
    dd = polar_dual(vertex_enumerate(dual))
    assert set(dd.normals) == set(make_polygon(4).normals)


def test_polar_dual_recenter():
    # Shift a square away from the origin; recentering restores the polar.
    shifted = [(v[0] + 5, v[1]) for v in vertex_enumerate(make_polygon(4)).vertices]
    from wedgesurf.polytope import VPolytope

    V = VPolytope(dim=2, vertices=tuple(shifted))
    dual = polar_dual(V, recenter=True)
    assert dual.is_bounded()


def test_hpolytope_json_round_trip():
    W = wp_system(4, 2)
    data = W.to_json()
    back = HPolytope.from_json(data)
    assert back == W
