"""Polygonal 2-complexes given by face boundary cycles, plus topology checks.

A complex is a list of faces, each a cyclic tuple of hashable vertex keys.
Edges are derived as unordered key pairs; this is faithful for subcomplexes
of polytope boundaries, where two vertices span at most one edge.  The
checks below do not assume the complex is closed: strips with boundary are
fine, which is what lets the same code reject a mutilated surface or a
Moebius strip.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

VertexKey = Hashable
FaceKey = Hashable
Edge = frozenset


@dataclass(frozen=True)
class PolygonalComplex:
    """Faces as cyclic vertex-key tuples, keyed for cross-referencing."""

    face_keys: tuple[FaceKey, ...]
    face_cycles: tuple[tuple[VertexKey, ...], ...]

    def __post_init__(self) -> None:
        if len(self.face_keys) != len(self.face_cycles):
            raise ValueError("need one key per face")
        if len(set(self.face_keys)) != len(self.face_keys):
            raise ValueError("face keys must be unique")
        for cycle in self.face_cycles:
            if len(cycle) < 3:
                raise ValueError("faces need at least 3 vertices")
            if len(set(cycle)) != len(cycle):
                raise ValueError("face cycle repeats a vertex")

    @property
    def face_count(self) -> int:
        return len(self.face_cycles)

    def vertices(self) -> list[VertexKey]:
        seen: dict[VertexKey, None] = {}
        for cycle in self.face_cycles:
            for v in cycle:
                seen.setdefault(v)
        return list(seen)

    def face_edges(self, idx: int) -> list[Edge]:
        cycle = self.face_cycles[idx]
        n = len(cycle)
        return [frozenset((cycle[k], cycle[(k + 1) % n])) for k in range(n)]

    def edges(self) -> list[Edge]:
        seen: dict[Edge, None] = {}
        for idx in range(self.face_count):
            for e in self.face_edges(idx):
                seen.setdefault(e)
        return list(seen)

    def edge_faces(self) -> dict[Edge, list[int]]:
        # Memoized: link walks call this once per vertex, and rebuilding
        # the incidence dict each time turns linear scans quadratic.
        cached = self.__dict__.get("_edge_faces_cache")
        if cached is None:
            cached = {}
            for idx in range(self.face_count):
                for e in self.face_edges(idx):
                    cached.setdefault(e, []).append(idx)
            self.__dict__["_edge_faces_cache"] = cached
        return cached

    def vertex_faces(self) -> dict[VertexKey, list[int]]:
        cached = self.__dict__.get("_vertex_faces_cache")
        if cached is None:
            cached = {}
            for idx, cycle in enumerate(self.face_cycles):
                for v in cycle:
                    cached.setdefault(v, []).append(idx)
            self.__dict__["_vertex_faces_cache"] = cached
        return cached

    def f_vector(self) -> tuple[int, int, int]:
        return (len(self.vertices()), len(self.edges()), self.face_count)

    def euler_characteristic(self) -> int:
        f0, f1, f2 = self.f_vector()
        return f0 - f1 + f2


@dataclass
class ManifoldReport:
    ok: bool
    boundary_edges: list[Edge] = field(default_factory=list)
    overused_edges: list[Edge] = field(default_factory=list)
    bad_links: list[VertexKey] = field(default_factory=list)


def check_manifold(C: PolygonalComplex) -> ManifoldReport:
    """Closed-surface test: edges in exactly 2 faces, vertex links single cycles."""
    ef = C.edge_faces()
    boundary = [e for e, fs in ef.items() if len(fs) == 1]
    overused = [e for e, fs in ef.items() if len(fs) > 2]
    bad_links: list[VertexKey] = []
    if not boundary and not overused:
        for v, faces in C.vertex_faces().items():
            if not _link_is_single_cycle(C, v, faces, ef):
                bad_links.append(v)
    ok = not boundary and not overused and not bad_links
    return ManifoldReport(
        ok=ok,
        boundary_edges=boundary,
        overused_edges=overused,
        bad_links=bad_links,
    )


def _vertex_edges_in_face(C: PolygonalComplex, idx: int, v: VertexKey) -> tuple[Edge, Edge]:
    cycle = C.face_cycles[idx]
    k = cycle.index(v)
    n = len(cycle)
    return (
        frozenset((cycle[(k - 1) % n], v)),
        frozenset((v, cycle[(k + 1) % n])),
    )


def _link_is_single_cycle(
    C: PolygonalComplex,
    v: VertexKey,
    faces: list[int],
    ef: dict[Edge, list[int]],
) -> bool:
    if not faces:
        return False
    start = faces[0]
    edge = _vertex_edges_in_face(C, start, v)[0]
    visited = set()
    face = start
    while True:
        visited.add(face)
        e1, e2 = _vertex_edges_in_face(C, face, v)
        edge = e2 if edge == e1 else e1
        nxt = [f for f in ef[edge] if f != face]
        if len(nxt) != 1:
            return False
        face = nxt[0]
        if face == start:
            break
        if face in visited:
            return False
    return len(visited) == len(faces)


def vertex_link_cycle(C: PolygonalComplex, v: VertexKey) -> list[int]:
    """Faces around v in rotation order (requires a manifold vertex)."""
    ef = C.edge_faces()
    faces = C.vertex_faces()[v]
    start = faces[0]
    edge = _vertex_edges_in_face(C, start, v)[0]
    order = []
    face = start
    while True:
        order.append(face)
        e1, e2 = _vertex_edges_in_face(C, face, v)
        edge = e2 if edge == e1 else e1
        nxt = [f for f in ef[edge] if f != face]
        if len(nxt) != 1:
            raise ValueError(f"vertex {v!r} is not a manifold vertex")
        face = nxt[0]
        if face == start:
            break
        if len(order) > len(faces):
            raise ValueError(f"vertex {v!r} link does not close up")
    if len(order) != len(faces):
        raise ValueError(f"vertex {v!r} link is not a single cycle")
    return order


def check_orientable(
    C: PolygonalComplex,
) -> tuple[bool, dict[FaceKey, int] | None]:
    """Try to orient all faces consistently by spreading over shared edges.

    Interior edges must be traversed in opposite directions by their two
    faces.  Returns the orientation assignment (face key -> +-1 relative to
    the stored cycle) when one exists.
    """
    ef = C.edge_faces()
    if any(len(fs) > 2 for fs in ef.values()):
        return False, None
    directed: list[dict[Edge, tuple[VertexKey, VertexKey]]] = []
    for idx in range(C.face_count):
        cycle = C.face_cycles[idx]
        n = len(cycle)
        directed.append(
            {
                frozenset((cycle[k], cycle[(k + 1) % n])): (
                    cycle[k],
                    cycle[(k + 1) % n],
                )
                for k in range(n)
            }
        )
    orient: dict[int, int] = {}
    for seed in range(C.face_count):
        if seed in orient:
            continue
        orient[seed] = 1
        stack = [seed]
        while stack:
            f = stack.pop()
            for e in C.face_edges(f):
                for g in ef[e]:
                    if g == f:
                        continue
                    same_direction = directed[f][e] == directed[g][e]
                    needed = -orient[f] if same_direction else orient[f]
                    if g in orient:
                        if orient[g] != needed:
                            return False, None
                    else:
                        orient[g] = needed
                        stack.append(g)
    return True, {C.face_keys[idx]: s for idx, s in orient.items()}


def is_connected(C: PolygonalComplex) -> bool:
    verts = C.vertices()
    if not verts:
        return True
    adj: dict[VertexKey, set[VertexKey]] = {v: set() for v in verts}
    for e in C.edges():
        u, v = tuple(e)
        adj[u].add(v)
        adj[v].add(u)
    seen = {verts[0]}
    stack = [verts[0]]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(verts)


def genus(C: PolygonalComplex) -> int:
    """Genus of a connected closed orientable complex, from Euler's formula."""
    if not is_connected(C):
        raise ValueError("genus needs a connected complex")
    if not check_manifold(C).ok:
        raise ValueError("genus needs a closed manifold")
    orientable, _ = check_orientable(C)
    if not orientable:
        raise ValueError("genus needs an orientable complex")
    chi = C.euler_characteristic()
    if chi % 2:
        raise AssertionError("odd Euler characteristic on a closed surface")
    return (2 - chi) // 2


def dual_complex(C: PolygonalComplex) -> PolygonalComplex:
    """The dual complex: one face per vertex, running over its link cycle.

    Vertices of the dual are the original face keys.  Requires a closed
    manifold so that every link is a single cycle.
    """
    report = check_manifold(C)
    if not report.ok:
        raise ValueError("dual_complex needs a closed manifold")
    keys = []
    cycles = []
    for v in C.vertices():
        order = vertex_link_cycle(C, v)
        keys.append(v)
        cycles.append(tuple(C.face_keys[idx] for idx in order))
    return PolygonalComplex(face_keys=tuple(keys), face_cycles=tuple(cycles))


def cycles_equivalent(a: Sequence, b: Sequence) -> bool:
    """True iff the cyclic sequences agree up to rotation and reflection."""
    if len(a) != len(b):
        return False
    n = len(a)
    doubled = tuple(b) + tuple(b)
    fwd = tuple(a)
    rev = tuple(reversed(a))
    return any(
        doubled[i : i + n] == fwd or doubled[i : i + n] == rev for i in range(n)
    )


def complexes_isomorphic_by_keys(A: PolygonalComplex, B: PolygonalComplex) -> bool:
    """Compare two complexes whose faces carry matching keys."""
    if set(A.face_keys) != set(B.face_keys):
        return False
    b_cycles = dict(zip(B.face_keys, B.face_cycles))
    return all(
        cycles_equivalent(cycle, b_cycles[key])
        for key, cycle in zip(A.face_keys, A.face_cycles)
    )
