from fractions import Fraction

import pytest

from wedgesurf.complexes import (
    PolygonalComplex,
    check_manifold,
    check_orientable,
    complexes_isomorphic_by_keys,
    cycles_equivalent,
    dual_complex,
    genus,
    is_connected,
    vertex_link_cycle,
)


def cube_complex() -> PolygonalComplex:
    # vertices are bitmasks (x, y, z); faces listed with arbitrary cycle sense
    return PolygonalComplex(
        face_keys=("z0", "z1", "y0", "y1", "x0", "x1"),
        face_cycles=(
            (0, 1, 3, 2),
            (4, 5, 7, 6),
            (0, 1, 5, 4),
            (2, 3, 7, 6),
            (0, 2, 6, 4),
            (1, 3, 7, 5),
        ),
    )


def torus_grid(n: int = 3) -> PolygonalComplex:
    keys = []
    cycles = []
    for i in range(n):
        for j in range(n):
            keys.append((i, j))
            cycles.append(
                (
                    (i, j),
                    ((i + 1) % n, j),
                    ((i + 1) % n, (j + 1) % n),
                    (i, (j + 1) % n),
                )
            )
    return PolygonalComplex(face_keys=tuple(keys), face_cycles=tuple(cycles))


def mobius_band() -> PolygonalComplex:
    # five triangles in a cycle with an odd twist
    cycles = tuple(tuple((k + s) % 5 for s in (0, 1, 2)) for k in range(5))
    return PolygonalComplex(face_keys=tuple(range(5)), face_cycles=cycles)


def test_cube_counts_and_topology():
    C = cube_complex()
    assert C.f_vector() == (8, 12, 6)
    assert C.euler_characteristic() == 2
    assert check_manifold(C).ok
    assert is_connected(C)
    orientable, signs = check_orientable(C)
    assert orientable
    assert set(signs) == set(C.face_keys)
    assert genus(C) == 0


def test_cube_orientation_signs_flip_across_edges():
    C = cube_complex()
    _, signs = check_orientable(C)
    ef = C.edge_faces()
    for e, (f, g) in ef.items():
        cf, cg = C.face_cycles[f], C.face_cycles[g]

        def direction(cycle, edge=e):
            u, v = tuple(edge)
            k = cycle.index(u)
            return (u, v) if cycle[(k + 1) % len(cycle)] == v else (v, u)

        same = direction(cf) == direction(cg)
        sf, sg = signs[C.face_keys[f]], signs[C.face_keys[g]]
        assert (sf == sg) != same


def test_torus_genus_one():
    C = torus_grid(3)
    assert C.f_vector() == (9, 18, 9)
    assert C.euler_characteristic() == 0
    assert check_manifold(C).ok
    assert genus(C) == 1


def test_mobius_band_is_nonorientable_with_boundary():
    C = mobius_band()
    report = check_manifold(C)
    assert not report.ok
    assert len(report.boundary_edges) == 5
    assert not report.overused_edges
    orientable, signs = check_orientable(C)
    assert not orientable
    assert signs is None


def test_bowtie_vertex_is_not_manifold():
    C = PolygonalComplex(
        face_keys=("a", "b"),
        face_cycles=((0, 1, 2), (0, 3, 4)),
    )
    report = check_manifold(C)
    assert not report.ok
    with pytest.raises(ValueError):
        vertex_link_cycle(C, 0)


def test_three_faces_on_an_edge_is_overuse():
    C = PolygonalComplex(
        face_keys=("a", "b", "c"),
        face_cycles=((0, 1, 2), (0, 1, 3), (0, 1, 4)),
    )
    report = check_manifold(C)
    assert frozenset((0, 1)) in report.overused_edges
    orientable, _ = check_orientable(C)
    assert not orientable


def test_link_cycle_matches_incident_faces():
    C = cube_complex()
    order = vertex_link_cycle(C, 0)
    assert len(order) == 3
    assert {C.face_keys[i] for i in order} == {"z0", "y0", "x0"}
    # consecutive link faces share an edge through the vertex
    for k in range(3):
        f, g = order[k], order[(k + 1) % 3]
        shared = set(C.face_edges(f)) & set(C.face_edges(g))
        assert any(0 in e for e in shared)


def test_cube_dual_is_octahedron_and_dual_dual_restores():
    C = cube_complex()
    D = dual_complex(C)
    assert D.f_vector() == (6, 12, 8)
    assert all(len(cycle) == 3 for cycle in D.face_cycles)
    assert check_manifold(D).ok
    assert genus(D) == 0
    DD = dual_complex(D)
    assert complexes_isomorphic_by_keys(DD, C)


def test_dual_rejects_open_surfaces():
    with pytest.raises(ValueError):
        dual_complex(mobius_band())


def test_cycles_equivalent_up_to_rotation_and_reflection():
    assert cycles_equivalent((1, 2, 3, 4), (3, 4, 1, 2))
    assert cycles_equivalent((1, 2, 3, 4), (2, 1, 4, 3))
    assert not cycles_equivalent((1, 2, 3, 4), (1, 3, 2, 4))
    assert not cycles_equivalent((1, 2, 3), (1, 2, 3, 4))


def test_disconnected_pair_of_tetrahedra():
    tet = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
    shifted = [tuple(v + 10 for v in c) for c in tet]
    C = PolygonalComplex(
        face_keys=tuple(range(8)),
        face_cycles=tuple(tet + shifted),
    )
    assert check_manifold(C).ok
    assert not is_connected(C)
    with pytest.raises(ValueError):
        genus(C)


def test_face_cycle_validation():
    with pytest.raises(ValueError):
        PolygonalComplex(face_keys=("a",), face_cycles=((0, 1),))
    with pytest.raises(ValueError):
        PolygonalComplex(face_keys=("a",), face_cycles=((0, 1, 1),))
    with pytest.raises(ValueError):
        PolygonalComplex(face_keys=("a", "a"), face_cycles=((0, 1, 2), (3, 4, 5)))
