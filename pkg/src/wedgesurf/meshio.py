"""Mesh and certificate serialization: OFF, OBJ, and rational JSON.

Mesh files carry decimal coordinates because viewers want floats; the
expansion is computed from the exact rationals at a configurable number of
significant digits, so output is reproducible bit for bit.  Anything meant
for re-verification -- R^4 coordinates, certificate multipliers, witness
vectors -- is serialized as exact "num/den" strings instead.
"""

from __future__ import annotations

import json
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Iterable, Mapping

from .complexes import FaceKey, PolygonalComplex, VertexKey
from .exactkernel import rational_str
from .projection import FaceCertificate, PreservationReport
from .surface import RealizedComplex
from .wpcombin import FaceVector

PRECISION_DEFAULT = 17


def decimal_str(x: Fraction, precision: int = PRECISION_DEFAULT) -> str:
    """Decimal expansion of a rational, at ``precision`` significant digits.

    Rendered without exponent so mesh tools with naive float parsers stay
    happy; trailing zeros are not padded ("1/2" -> "0.5", not "0.50...").
    """
    if precision < 1:
        raise ValueError("precision must be at least 1")
    x = Fraction(x)
    with localcontext() as ctx:
        ctx.prec = precision
        d = Decimal(x.numerator) / Decimal(x.denominator)
    return format(d, "f")


def key_text(key: object) -> str:
    """Stable readable rendering of a complex vertex/face key."""
    if isinstance(key, FaceVector):
        return "|".join(
            "".join(str(j) for j in key.entry(i)) for i in range(key.m)
        )
    if isinstance(key, tuple):
        return ":".join(key_text(part) for part in key)
    if isinstance(key, frozenset):
        return "{" + ",".join(sorted(key_text(part) for part in key)) + "}"
    return str(key)


def _vertex_index(C: PolygonalComplex) -> dict[VertexKey, int]:
    return {v: i for i, v in enumerate(C.vertices())}


def oriented_cycles(
    C: PolygonalComplex,
    orientation: Mapping[FaceKey, int] | None = None,
) -> list[tuple[int, ...]]:
    """Faces as vertex-index cycles, flipped where the sign is -1."""
    index = _vertex_index(C)
    out = []
    for key, cycle in zip(C.face_keys, C.face_cycles):
        if orientation is not None and orientation[key] < 0:
            cycle = cycle[::-1]
        out.append(tuple(index[v] for v in cycle))
    return out


def off_text(
    R: RealizedComplex,
    orientation: Mapping[FaceKey, int] | None = None,
    precision: int = PRECISION_DEFAULT,
) -> str:
    """OFF: header, then ``vertices faces edges``, coordinates, face rows."""
    C = R.cells
    verts = C.vertices()
    lines = ["OFF", f"{len(verts)} {C.face_count} {len(C.edges())}"]
    for v in verts:
        lines.append(" ".join(decimal_str(x, precision) for x in R.coords[v]))
    for cycle in oriented_cycles(C, orientation):
        lines.append(" ".join(str(n) for n in (len(cycle), *cycle)))
    return "\n".join(lines) + "\n"


def obj_text(
    R: RealizedComplex,
    orientation: Mapping[FaceKey, int] | None = None,
    precision: int = PRECISION_DEFAULT,
) -> str:
    """Wavefront OBJ with 1-based face indices."""
    C = R.cells
    lines = []
    for v in C.vertices():
        lines.append(
            "v " + " ".join(decimal_str(x, precision) for x in R.coords[v])
        )
    for cycle in oriented_cycles(C, orientation):
        lines.append("f " + " ".join(str(n + 1) for n in cycle))
    return "\n".join(lines) + "\n"


# --- exact JSON ------------------------------------------------------------


def vec_json(x: Iterable[Fraction]) -> list[str]:
    return [rational_str(c) for c in x]


def certificate_json(cert: FaceCertificate) -> dict:
    preserved: dict[str, object] = {
        "preserved": cert.preserved.preserved,
        "k": cert.preserved.k,
    }
    result = cert.preserved.result
    if result is None:
        preserved["note"] = "target equals ambient dimension"
    elif result.certificate is not None:
        preserved["multipliers"] = vec_json(result.certificate.multipliers)
        preserved["witness"] = vec_json(result.certificate.witness)
    elif result.separator is not None:
        preserved["separator"] = vec_json(result.separator)
    lower: dict[str, object] = {
        "on_lower_hull": cert.lower.on_lower_hull,
        "k": cert.lower.k,
    }
    if cert.lower.certificate is not None:
        lower["multipliers"] = vec_json(cert.lower.certificate.multipliers)
        lower["witness"] = vec_json(cert.lower.certificate.witness)
    return {
        "face": key_text(cert.face),
        "tight": [list(lb) for lb in sorted(cert.tight)],
        "ok": cert.ok,
        "preserved": preserved,
        "lower_hull": lower,
    }


def report_json(report: PreservationReport) -> dict:
    return {
        "k": report.k,
        "ok": report.ok,
        "faces": [certificate_json(c) for c in report.certificates],
    }


def realized_json(R: RealizedComplex) -> dict:
    """Exact-coordinate dump of a realized complex (used for R^4 output)."""
    C = R.cells
    verts = C.vertices()
    return {
        "dim": R.dim,
        "vertices": [
            {"key": key_text(v), "coords": vec_json(R.coords[v])}
            for v in verts
        ],
        "faces": [
            {"key": key_text(key), "cycle": list(cycle)}
            for key, cycle in zip(C.face_keys, oriented_cycles(C))
        ],
    }


def dump_json(data: object) -> str:
    """Canonical JSON text: two-space indent, stable key order as built."""
    return json.dumps(data, indent=2) + "\n"
