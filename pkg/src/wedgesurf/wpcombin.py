"""Combinatorics of wedge products via index-set face vectors.

A face of a wedge product P wedge Q is encoded as a vector of m subsets of
[m'], one entry per facet of P: entry i lists which copies of Q's facets
paired with facet i are tight on the face.  Vertices, edges and polygon
faces of the special wedge products C_p wedge (simplex of dimension q-1)
all have short descriptions in this encoding:

* a vertex has two cyclically adjacent entries equal to all of [q] and
  co-singleton entries elsewhere,
* an edge has exactly one full entry,
* a p-gon face has only co-singleton entries.

Entries are stored as bitmasks over [m'], which keeps face vectors hashable
and incidence tests cheap.  Nothing in this module does geometry; the
geometric cross-checks live with the polytope code.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct
from typing import Iterable, Iterator, Sequence

Label = tuple


def full_mask(mprime: int) -> int:
    return (1 << mprime) - 1


def cosingleton_mask(j: int, mprime: int) -> int:
    """Bitmask of [m'] minus {j}."""
    if not 0 <= j < mprime:
        raise ValueError(f"index {j} out of range for [{mprime}]")
    return full_mask(mprime) & ~(1 << j)


def mask_of(indices: Iterable[int], mprime: int) -> int:
    mask = 0
    for j in indices:
        if not 0 <= j < mprime:
            raise ValueError(f"index {j} out of range for [{mprime}]")
        mask |= 1 << j
    return mask


def mask_indices(mask: int) -> tuple[int, ...]:
    out = []
    j = 0
    while mask:
        if mask & 1:
            out.append(j)
        mask >>= 1
        j += 1
    return tuple(out)


@dataclass(frozen=True)
class FaceVector:
    """One face of a wedge product, as per-facet tight index sets."""

    m: int
    mprime: int
    masks: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.m < 1 or self.mprime < 1:
            raise ValueError("m and mprime must be positive")
        if self.mprime > 64:
            raise ValueError("bitmask encoding supports mprime <= 64")
        if len(self.masks) != self.m:
            raise ValueError("need one mask per facet of P")
        full = full_mask(self.mprime)
        for mk in self.masks:
            if not 0 <= mk <= full:
                raise ValueError("mask out of range")

    def entry(self, i: int) -> tuple[int, ...]:
        return mask_indices(self.masks[i])

    def entries(self) -> tuple[tuple[int, ...], ...]:
        return tuple(self.entry(i) for i in range(self.m))

    def tight_count(self) -> int:
        return sum(mk.bit_count() for mk in self.masks)

    def full_positions(self) -> tuple[int, ...]:
        full = full_mask(self.mprime)
        return tuple(i for i, mk in enumerate(self.masks) if mk == full)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "mprime": self.mprime,
            "entries": [list(self.entry(i)) for i in range(self.m)],
        }

    @classmethod
    def from_json(cls, data: dict) -> "FaceVector":
        masks = tuple(
            mask_of(entry, data["mprime"]) for entry in data["entries"]
        )
        return cls(m=data["m"], mprime=data["mprime"], masks=masks)


@dataclass(frozen=True)
class WpParams:
    """Parameters of wp(p, q-1) = C_p wedge (simplex with q facets)."""

    p: int
    q: int

    def __post_init__(self) -> None:
        if self.p < 3:
            raise ValueError("the polygon factor needs p >= 3")
        if self.q < 1:
            raise ValueError("the simplex factor needs q >= 1")

    @property
    def dim(self) -> int:
        return 2 + self.p * (self.q - 1)

    @property
    def facet_count(self) -> int:
        return self.p * self.q

    @property
    def vertex_count(self) -> int:
        return self.p * self.q ** (self.p - 2)

    @property
    def pgon_count(self) -> int:
        return self.q**self.p


def incidence(a: FaceVector, b: FaceVector) -> bool:
    """True iff face a is contained in face b.

    Containment of faces reverses containment of tight index sets, so this
    holds exactly when every entry of b is a subset of the matching entry
    of a.
    """
    if (a.m, a.mprime) != (b.m, b.mprime):
        raise ValueError("face vectors from different wedge products")
    return all(bm & ~am == 0 for am, bm in zip(a.masks, b.masks))


def meet(a: FaceVector, b: FaceVector) -> FaceVector:
    """Smallest face containing both index patterns (entrywise intersection)."""
    if (a.m, a.mprime) != (b.m, b.mprime):
        raise ValueError("face vectors from different wedge products")
    return FaceVector(
        m=a.m,
        mprime=a.mprime,
        masks=tuple(am & bm for am, bm in zip(a.masks, b.masks)),
    )


def tight_labels(fv: FaceVector) -> frozenset[Label]:
    """The facet labels ("pair", i, j) tight on the face."""
    out = []
    for i in range(fv.m):
        for j in mask_indices(fv.masks[i]):
            out.append(("pair", i, j))
    return frozenset(out)


def wedge_product_vertices(
    m: int,
    p_vertices: Sequence[frozenset[int]],
    mprime: int,
    q_vertices: Sequence[frozenset[int]],
) -> list[FaceVector]:
    """Vertices of P wedge Q from the vertex descriptions of the factors.

    ``p_vertices`` and ``q_vertices`` list, for each vertex of the factor,
    the set of its tight facet indices.  A vertex of the wedge product picks
    a vertex S of P, sets entry i = [m'] for i in S, and an arbitrary vertex
    of Q everywhere else.
    """
    full = full_mask(mprime)
    q_masks = [mask_of(sorted(qv), mprime) for qv in q_vertices]
    out = []
    for pv in p_vertices:
        free = [i for i in range(m) if i not in pv]
        for combo in iproduct(range(len(q_masks)), repeat=len(free)):
            masks = [0] * m
            for i in pv:
                masks[i] = full
            for i, choice in zip(free, combo):
                masks[i] = q_masks[choice]
            out.append(FaceVector(m=m, mprime=mprime, masks=tuple(masks)))
    return out


def wp_vertices(params: WpParams) -> list[FaceVector]:
    """All p q^(p-2) vertices of wp(p, q-1), in a fixed deterministic order."""
    p, q = params.p, params.q
    full = full_mask(q)
    out = []
    for i in range(p):
        others = [k for k in range(p) if k not in (i, (i + 1) % p)]
        for combo in iproduct(range(q), repeat=len(others)):
            masks = [0] * p
            masks[i] = full
            masks[(i + 1) % p] = full
            for k, j in zip(others, combo):
                masks[k] = cosingleton_mask(j, q)
            out.append(FaceVector(m=p, mprime=q, masks=tuple(masks)))
    return out


def wp_pgons(params: WpParams) -> list[FaceVector]:
    """All q^p polygon faces of wp(p, q-1): purely co-singleton vectors."""
    p, q = params.p, params.q
    out = []
    for combo in iproduct(range(q), repeat=p):
        masks = tuple(cosingleton_mask(j, q) for j in combo)
        out.append(FaceVector(m=p, mprime=q, masks=masks))
    return out


def pgon_labels(fv: FaceVector) -> tuple[int, ...]:
    """Recover (j_0, ..., j_{p-1}) from a purely co-singleton face vector."""
    full = full_mask(fv.mprime)
    labels = []
    for mk in fv.masks:
        missing = full & ~mk
        if missing.bit_count() != 1:
            raise ValueError("face vector is not a polygon face")
        labels.append(missing.bit_length() - 1)
    return tuple(labels)


def pgon_from_labels(labels: Sequence[int], q: int) -> FaceVector:
    masks = tuple(cosingleton_mask(j, q) for j in labels)
    return FaceVector(m=len(labels), mprime=q, masks=masks)


def vertex_full_position(fv: FaceVector) -> int:
    """Position i such that the vertex has full entries at (i, i+1 mod p)."""
    fulls = fv.full_positions()
    if len(fulls) != 2:
        raise ValueError("face vector is not a wp vertex")
    i, k = fulls
    p = fv.m
    if (i + 1) % p == k:
        return i
    if (k + 1) % p == i:
        return k
    raise ValueError("full entries are not cyclically adjacent")


def pgon_vertex(fv: FaceVector, i: int) -> FaceVector:
    """Vertex of a polygon face at corner i (full entries at i, i+1)."""
    p = fv.m
    full = full_mask(fv.mprime)
    masks = list(fv.masks)
    masks[i] = full
    masks[(i + 1) % p] = full
    return FaceVector(m=p, mprime=fv.mprime, masks=tuple(masks))


def pgon_edge(fv: FaceVector, k: int) -> FaceVector:
    """Edge of a polygon face obtained by freeing entry k."""
    masks = list(fv.masks)
    masks[k] = full_mask(fv.mprime)
    return FaceVector(m=fv.m, mprime=fv.mprime, masks=tuple(masks))


def pgon_vertices(fv: FaceVector) -> list[FaceVector]:
    """The p corners of a polygon face in cyclic order."""
    return [pgon_vertex(fv, i) for i in range(fv.m)]


def pgon_edges(fv: FaceVector) -> list[FaceVector]:
    """The p edges of a polygon face; edge k joins corners k-1 and k."""
    return [pgon_edge(fv, k) for k in range(fv.m)]


def iter_faces_json(faces: Iterable[FaceVector]) -> Iterator[dict]:
    for fv in faces:
        yield fv.to_json()
