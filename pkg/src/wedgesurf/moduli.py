"""Affine support sets and lower bounds on surface deformation counts.

An affine support set of a simple polytope is a vertex subset whose trace
on every facet is affinely independent, in every realization.  Such a set
certifies many independent local deformations: each facet can be tilted
through its trace, and after a projection preserving the set the bound
``ambient dim x cardinality`` survives.  For the wedge product of a p-gon
and an interval the standard set below has 2p members, giving 6p for the
surfaces embedded in R^3.

Two verifications back the claim.  A numeric check computes the affine
rank of every facet trace in a family of certified realizations.  A
combinatorial check walks, per facet, a flag of faces whose member counts
grow by exactly one per dimension step -- the counting argument that makes
the trace independent in any realization at once.  The verdicts say
"certified", never "proved": sampling realizations cannot exhaust them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exactkernel import Vec, affine_rank
from .polytope import Label, pair, wp_vertex_coords
from .projection import DeformedWp, build_deformed_wp
from .surface import build_surface, expected_f_vector
from .wpcombin import FaceVector, WpParams, tight_labels, wp_vertices

_FULL = 3  # both interval inequalities tight
_SWAP = {0: 0, 1: 2, 2: 1, 3: 3}  # exchange the two interval facets

CERTIFICATION_LABEL = "certified via flag argument + sampled realizations"


@dataclass(frozen=True)
class SupportSet:
    """A candidate affine support set for the wedge product over a p-gon."""

    p: int
    members: tuple[FaceVector, ...]

    def __post_init__(self) -> None:
        if self.p < 3:
            raise ValueError("support sets need p >= 3")
        if len(self.members) != 2 * self.p:
            raise ValueError(
                f"need exactly {2 * self.p} members, got {len(self.members)}"
            )
        if len(set(self.members)) != len(self.members):
            raise ValueError("support set members must be distinct")
        vertex_set = set(wp_vertices(WpParams(p=self.p, q=2)))
        for v in self.members:
            if v not in vertex_set:
                raise ValueError(f"{v} is not a wedge-product vertex")


def _fv(p: int, masks: Sequence[int]) -> FaceVector:
    return FaceVector(m=p, mprime=2, masks=tuple(masks))


def standard_support_set(p: int) -> SupportSet:
    """The 2p-member set: two fulls sliding around the cycle, with all-0
    tails on one family and all-1 tails on the mirror family."""
    lo, hi = 1, 2  # singletons {0} and {1}
    members: list[FaceVector] = []
    for tail in (hi, lo):
        head = _SWAP[tail]
        for k in range(p - 1):
            members.append(
                _fv(p, (head,) * k + (_FULL, _FULL) + (tail,) * (p - k - 2))
            )
        members.append(_fv(p, (_FULL,) + (head,) * (p - 2) + (_FULL,)))
    return SupportSet(p=p, members=tuple(members))


# --- combinatorial flag certificate ----------------------------------------


def _flag_chain(p: int) -> list[FaceVector]:
    """Faces G_0 c G_1 c ... c G_{p+1}, one per dimension, ending in a
    facet; member counts against the standard set grow by one per step."""
    z = 1  # singleton {0}
    chain = [
        _fv(p, (_FULL, _FULL) + (z,) * (p - 2)),
        _fv(p, (_FULL,) + (z,) * (p - 1)),
        _fv(p, (z,) * p),
    ]
    for k in range(3, p + 2):
        chain.append(_fv(p, (z,) * (p - (k - 2)) + (0,) * (k - 2)))
    return chain


def rotate_swap(fv: FaceVector) -> FaceVector:
    """Rotate positions one step and exchange the interval facets on the
    entry that wraps around; generates a 2p-cycle on facets."""
    masks = (_SWAP[fv.masks[-1]],) + fv.masks[:-1]
    return FaceVector(m=fv.m, mprime=fv.mprime, masks=masks)


def _face_contains_vertex(face: FaceVector, v: FaceVector) -> bool:
    return all(fm & vm == fm for fm, vm in zip(face.masks, v.masks))


def _facet_label(face: FaceVector) -> Label:
    nonzero = [(i, mk) for i, mk in enumerate(face.masks) if mk]
    assert len(nonzero) == 1 and nonzero[0][1] in (1, 2)
    i, mk = nonzero[0]
    return pair(i, 0 if mk == 1 else 1)


def flag_certificate(A: SupportSet, facets: int) -> dict[Label, bool]:
    """Per-facet verdicts of the counting argument.

    The base chain targets one facet; its images under ``rotate_swap``
    sweep all 2p facets.  A facet passes when the chain is nested, has one
    face per dimension, and meets the support set in i+1 members at
    dimension i -- which pins the facet trace as affinely independent.
    """
    p = A.p
    chain = _flag_chain(p)
    out: dict[Label, bool] = {}
    for _ in range(facets):
        label = _facet_label(chain[-1])
        ok = True
        for i, G in enumerate(chain):
            if G.tight_count() != (p + 2) - i:
                ok = False
            if i + 1 < len(chain):
                nxt = chain[i + 1]
                if not all(
                    n & g == n for g, n in zip(G.masks, nxt.masks)
                ):
                    ok = False
            hits = sum(1 for v in A.members if _face_contains_vertex(G, v))
            if hits != i + 1:
                ok = False
        out[label] = ok
        chain = [rotate_swap(G) for G in chain]
    return out


# --- numeric check over sampled realizations --------------------------------

Realization = Mapping[FaceVector, Vec]

SAMPLE_GRID = (
    (Fraction(1, 10), Fraction(64)),
    (Fraction(1, 10), Fraction(128)),
    (Fraction(1, 12), Fraction(64)),
    (Fraction(1, 12), Fraction(128)),
    (Fraction(1, 16), Fraction(64)),
)


def standard_realizations(p: int) -> list[Realization]:
    """The canonical coordinates plus five certified deformations."""
    out: list[Realization] = [wp_vertex_coords(p, 2)]
    for eps, M in SAMPLE_GRID:
        out.append(build_deformed_wp(p, eps, M).vertex_coords)
    return out


@dataclass(frozen=True)
class FacetVerdict:
    facet: Label
    count: int
    numeric_ok: bool
    flag_ok: bool

    @property
    def ok(self) -> bool:
        return self.numeric_ok and self.flag_ok


@dataclass(frozen=True)
class SupportReport:
    p: int
    verdicts: tuple[FacetVerdict, ...]
    realization_count: int

    @property
    def ok(self) -> bool:
        return all(v.ok for v in self.verdicts)

    @property
    def label(self) -> str:
        return CERTIFICATION_LABEL

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "ok": self.ok,
            "label": self.label,
            "realizations": self.realization_count,
            "facets": [
                {
                    "facet": str(v.facet),
                    "members": v.count,
                    "numeric_ok": v.numeric_ok,
                    "flag_ok": v.flag_ok,
                }
                for v in self.verdicts
            ],
        }


def verify_support_set(
    A: SupportSet,
    realizations: Iterable[Realization | DeformedWp],
) -> SupportReport:
    """Check affine independence of every facet trace.

    Numerically: in each supplied realization the trace's affine rank must
    be its cardinality minus one.  Combinatorially: the flag chain counts.
    A trace larger than (facet dimension + 1) can never be independent and
    fails without touching coordinates.
    """
    p = A.p
    coord_maps: list[Realization] = [
        r.vertex_coords if isinstance(r, DeformedWp) else r
        for r in realizations
    ]
    tight_of = {v: tight_labels(v) for v in A.members}
    flag_ok = flag_certificate(A, facets=2 * p)
    verdicts = []
    for i in range(p):
        for j in (0, 1):
            lb = pair(i, j)
            trace = [v for v in A.members if lb in tight_of[v]]
            numeric = len(trace) <= p + 2  # facet dimension + 1
            if numeric:
                for coords in coord_maps:
                    pts = [coords[v] for v in trace]
                    if affine_rank(pts) != len(trace) - 1:
                        numeric = False
                        break
            verdicts.append(
                FacetVerdict(
                    facet=lb,
                    count=len(trace),
                    numeric_ok=numeric,
                    flag_ok=flag_ok.get(lb, False),
                )
            )
    return SupportReport(
        p=p,
        verdicts=tuple(verdicts),
        realization_count=len(coord_maps),
    )


# --- moduli bounds ----------------------------------------------------------


@dataclass(frozen=True)
class ModuliReport:
    """Lower bound from the support set next to the naive freedom count.

    The naive count (vertex freedoms minus planarity constraints minus a
    projective basis) decays as p grows and turns negative from p = 12 on;
    the support-set bound 6p keeps growing.
    """

    p: int
    support_bound: int
    naive_estimate: int
    f_vector: tuple[int, int, int]
    support: SupportReport | None

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "support_bound": self.support_bound,
            "naive_estimate": self.naive_estimate,
            "f_vector": list(self.f_vector),
            "support": None if self.support is None else self.support.to_json(),
        }

    def render_table(self) -> str:
        naive = str(self.naive_estimate)
        if self.naive_estimate <= 0:
            naive += " (vacuous)"
        lines = [
            f"surface on {self.f_vector[0]} vertices, "
            f"{self.f_vector[1]} edges, {self.f_vector[2]} polygons",
            f"support set       : {2 * self.p} vertices",
            f"support-set bound : {self.support_bound}",
            f"naive estimate    : {naive}",
        ]
        if self.support is not None:
            status = "pass" if self.support.ok else "FAIL"
            lines.append(
                f"support checks    : {status} on {len(self.support.verdicts)}"
                f" facets x {self.support.realization_count} realizations"
            )
            lines.append(f"                    ({self.support.label})")
        return "\n".join(lines)


def moduli_bounds(p: int, verify: bool = False) -> ModuliReport:
    """Both lower-bound estimates for the surface over the p-gon.

    The f-vector is enumerated, then matched against the closed form; the
    naive count 3 f0 - 2 f1 + 3 f2 - 15 must agree with 2^(p-2)(12-p) - 15.
    With ``verify`` the standard support set is checked on the canonical
    realization plus the five-sample deformation grid.
    """
    S = build_surface(WpParams(p=p, q=2))
    fv = S.f_vector()
    assert fv == expected_f_vector(p, 2)
    f0, f1, f2 = fv
    naive = 3 * f0 - 2 * f1 + 3 * f2 - 15
    assert naive == 2 ** (p - 2) * (12 - p) - 15
    support = None
    if verify:
        A = standard_support_set(p)
        support = verify_support_set(A, standard_realizations(p))
    return ModuliReport(
        p=p,
        support_bound=6 * p,
        naive_estimate=naive,
        f_vector=fv,
        support=support,
    )
