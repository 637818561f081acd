"""Exact rational linear algebra and positive-combination certificates.

Everything in this module computes over :class:`fractions.Fraction`.  There
are no floats, no epsilons and no tolerances anywhere: equalities are exact,
and every yes/no answer about positive spans or sign-constrained combinations
is backed by a certificate that can be re-verified with plain arithmetic.

Vectors are tuples of ``Fraction``; matrices are sequences of such row
tuples.  All helpers return fresh tuples, so values can be shared freely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Literal, Sequence

Vec = tuple[Fraction, ...]
Pattern = Literal["zero", "negative", "free"]

_ZERO = Fraction(0)
_ONE = Fraction(1)


class SingularMatrixError(ArithmeticError):
    """Raised when a square system has no unique solution."""


def frac(value: int | str | Fraction) -> Fraction:
    """Coerce ints, ``"num/den"`` strings and Fractions to Fraction."""
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


def vec(values: Iterable[int | str | Fraction]) -> Vec:
    return tuple(frac(v) for v in values)


def zero_vec(n: int) -> Vec:
    return (_ZERO,) * n


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    if len(u) != len(v):
        raise ValueError(f"dimension mismatch: {len(u)} vs {len(v)}")
    total = _ZERO
    for a, b in zip(u, v):
        if a and b:
            total += a * b
    return total

def vec_add(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vec:
    if len(u) != len(v):
        raise ValueError("dimension mismatch")
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vec:
    if len(u) != len(v):
        raise ValueError("dimension mismatch")
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c: Fraction, u: Sequence[Fraction]) -> Vec:
    return tuple(c * a for a in u)


def mat_vec(rows: Sequence[Sequence[Fraction]], x: Sequence[Fraction]) -> Vec:
    return tuple(dot(row, x) for row in rows)


def gauss_solve(
    rows: Sequence[Sequence[Fraction]],
    rhs: Sequence[Fraction],
    nvars: int | None = None,
) -> tuple[Vec, list[Vec]] | None:
    """Solve ``A x = b`` exactly.

    Returns ``(particular, nullspace_basis)`` describing the full affine
    solution set, or ``None`` when the system is inconsistent.  ``nvars``
    is only needed when ``rows`` is empty.
    """
    m = len(rows)
    if m == 0:
        if nvars is None:
            raise ValueError("nvars required for an empty system")
        basis = []
        for j in range(nvars):
            e = [_ZERO] * nvars
            e[j] = _ONE
            basis.append(tuple(e))
        return zero_vec(nvars), basis
    n = len(rows[0])
    if nvars is not None and nvars != n:
        raise ValueError("nvars disagrees with row length")
    if len(rhs) != m:
        raise ValueError("rhs length mismatch")
    work = [[frac(x) for x in row] + [frac(b)] for row, b in zip(rows, rhs)]
    pivot_of_col: dict[int, int] = {}
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, m) if work[i][c]), None)
        if pr is None:
            continue
        work[r], work[pr] = work[pr], work[r]
        pv = work[r][c]
        if pv != 1:
            work[r] = [x / pv for x in work[r]]
        row_r = work[r]
        for i in range(m):
            if i != r and work[i][c]:
                f = work[i][c]
                work[i] = [a - f * b for a, b in zip(work[i], row_r)]
        pivot_of_col[c] = r
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if work[i][n]:
            return None
    particular = [_ZERO] * n
    for c, i in pivot_of_col.items():
        particular[c] = work[i][n]
    free_cols = [c for c in range(n) if c not in pivot_of_col]
    basis = []
    for f in free_cols:
        v = [_ZERO] * n
        v[f] = _ONE
        for c, i in pivot_of_col.items():
            v[c] = -work[i][f]
        basis.append(tuple(v))
    return tuple(particular), basis


def solve_square(
    rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]
) -> Vec:
    """Solve a square system ``M x = rhs``; raise if M is singular.

    Rows are rescaled to integers and eliminated fraction-free (Bareiss),
    which keeps the inner loop in machine/big-int arithmetic; the result is
    still exact.
    """
    n = len(rows)
    if n == 0:
        return ()
    if any(len(row) != n for row in rows):
        raise ValueError("matrix is not square")
    work: list[list[int]] = []
    for row, b in zip(rows, rhs):
        entries = [frac(x) for x in row] + [frac(b)]
        scale = 1
        for x in entries:
            d = x.denominator
            if d != 1:
                scale = scale * d // math.gcd(scale, d)
        work.append([int(x * scale) for x in entries])
    prev = 1
    for col in range(n):
        pr = next((i for i in range(col, n) if work[i][col]), None)
        if pr is None:
            raise SingularMatrixError("zero pivot column")
        if pr != col:
            work[col], work[pr] = work[pr], work[col]
        pivot = work[col][col]
        row_c = work[col]
        for i in range(col + 1, n):
            head = work[i][col]
            row_i = work[i]
            for j in range(col + 1, n + 1):
                row_i[j] = (row_i[j] * pivot - head * row_c[j]) // prev
            row_i[col] = 0
        prev = pivot
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        acc = Fraction(work[i][n])
        row_i = work[i]
        for j in range(i + 1, n):
            if row_i[j]:
                acc -= row_i[j] * x[j]
        x[i] = acc / row_i[i]
    return tuple(x)


def rank(vectors: Sequence[Sequence[Fraction]]) -> int:
    """Rank of the linear span of the given vectors."""
    vectors = [v for v in vectors]
    if not vectors:
        return 0
    n = len(vectors[0])
    work = [[frac(x) for x in v] for v in vectors]
    r = 0
    m = len(work)
    for c in range(n):
        pr = next((i for i in range(r, m) if work[i][c]), None)
        if pr is None:
            continue
        work[r], work[pr] = work[pr], work[r]
        pv = work[r][c]
        row_r = work[r]
        for i in range(r + 1, m):
            if work[i][c]:
                f = work[i][c] / pv
                work[i] = [a - f * b for a, b in zip(work[i], row_r)]
        r += 1
        if r == m:
            break
    return r


def affine_rank(points: Sequence[Sequence[Fraction]]) -> int:
    """Dimension of the affine hull of the given points.

    A single point (or several equal points) has affine rank 0, a segment
    has affine rank 1, a planar polygon 2, and so on.
    """
    points = list(points)
    if not points:
        raise ValueError("affine_rank needs at least one point")
    base = points[0]
    return rank([vec_sub(p, base) for p in points[1:]])


def nullspace_vector(vectors: Sequence[Sequence[Fraction]], n: int) -> Vec | None:
    """Some nonzero c with v . c = 0 for every v, or None if none exists."""
    result = gauss_solve(list(vectors), [_ZERO] * len(vectors), nvars=n)
    assert result is not None  # homogeneous systems are always consistent
    _, basis = result
    return basis[0] if basis else None


@dataclass(frozen=True)
class SpanCertificate:
    """Nonnegative multipliers and the exact combination they produce.

    ``witness`` equals ``sum(multipliers[i] * vectors[i])`` for the vector
    family the certificate was issued for; :meth:`verify` recomputes this
    from scratch.
    """

    multipliers: Vec
    witness: Vec

    def verify(
        self,
        vectors: Sequence[Sequence[Fraction]],
        min_multiplier: Fraction = _ZERO,
    ) -> bool:
        if len(self.multipliers) != len(vectors):
            return False
        if any(m < min_multiplier for m in self.multipliers):
            return False
        total = list(zero_vec(len(self.witness)))
        for m, v in zip(self.multipliers, vectors):
            if len(v) != len(self.witness):
                return False
            for k, x in enumerate(v):
                total[k] += m * x
        return tuple(total) == self.witness


@dataclass(frozen=True)
class SpanResult:
    """Outcome of a positive-span test.

    Exactly one of ``certificate`` (on success) and ``separator`` (on
    failure) is set.  The separator c satisfies ``c . v >= 0`` for every
    input vector, which refutes positive spanning; when the family does not
    even span linearly, c is a nonzero vector orthogonal to all of them.
    """

    spans: bool
    rank: int
    certificate: SpanCertificate | None = None
    separator: Vec | None = None


def _phase_one(
    eq_rows: list[list[Fraction]],
    eq_rhs: list[Fraction],
    nvars: int,
) -> tuple[list[Fraction] | None, Vec | None]:
    """Find x >= 0 with ``A x = b``, or a Farkas refutation.

    Returns ``(x, None)`` when feasible and ``(None, y)`` otherwise, where
    y satisfies ``y . A_j <= 0`` for every column j and ``y . b > 0``.
    Uses phase-one simplex with Bland's rule, so it always terminates.
    """
    k = len(eq_rows)
    if k == 0:
        return [_ZERO] * nvars, None
    signs = []
    tableau = []
    for row, b in zip(eq_rows, eq_rhs):
        s = -_ONE if b < 0 else _ONE
        signs.append(s)
        tableau.append([s * x for x in row])
    rhs = [abs(frac(b)) for b in eq_rhs]
    # Columns: nvars structural + k artificial; artificials start basic.
    for i in range(k):
        for j in range(k):
            tableau[i].append(_ONE if i == j else _ZERO)
        tableau[i].append(rhs[i])
    ncols = nvars + k
    obj = [_ZERO] * (ncols + 1)
    for j in range(ncols + 1):
        col_sum = sum(tableau[i][j] for i in range(k))
        if j < nvars or j == ncols:
            obj[j] = -col_sum
    basis = list(range(nvars, nvars + k))
    while True:
        enter = next((j for j in range(ncols) if obj[j] < 0), None)
        if enter is None:
            break
        best: tuple[Fraction, int] | None = None
        leave_row = -1
        for i in range(k):
            t = tableau[i][enter]
            if t > 0:
                ratio = tableau[i][ncols] / t
                key = (ratio, basis[i])
                if best is None or key < best:
                    best = key
                    leave_row = i
        if leave_row < 0:  # phase-one objective is bounded below by 0
            raise AssertionError("phase-one simplex reported unbounded")
        pv = tableau[leave_row][enter]
        if pv != 1:
            tableau[leave_row] = [x / pv for x in tableau[leave_row]]
        prow = tableau[leave_row]
        for i in range(k):
            if i != leave_row and tableau[i][enter]:
                f = tableau[i][enter]
                tableau[i] = [a - f * b for a, b in zip(tableau[i], prow)]
        if obj[enter]:
            f = obj[enter]
            obj = [a - f * b for a, b in zip(obj, prow)]
        basis[leave_row] = enter
    value = -obj[ncols]
    if value == 0:
        x = [_ZERO] * ncols
        for i, var in enumerate(basis):
            x[var] = tableau[i][ncols]
        return x[:nvars], None
    y = tuple(signs[i] * (_ONE - obj[nvars + i]) for i in range(k))
    for j in range(nvars):  # sanity: certificate must refute exactly
        col = sum(y[i] * eq_rows[i][j] for i in range(k))
        if col > 0:
            raise AssertionError("invalid Farkas certificate column")
    if dot(y, vec(eq_rhs)) <= 0:
        raise AssertionError("invalid Farkas certificate value")
    return None, y


def positively_spans(vectors: Sequence[Sequence[Fraction]]) -> SpanResult:
    """Decide whether the vectors positively span their ambient space.

    The family positively spans R^n iff it has full rank and some strictly
    positive combination of it vanishes; the certificate scales multipliers
    to be >= 1.  On failure the result carries a separating functional.
    """
    vectors = [vec(v) for v in vectors]
    if not vectors:
        raise ValueError("positively_spans needs at least one vector")
    n = len(vectors[0])
    if any(len(v) != n for v in vectors):
        raise ValueError("vectors of mixed dimension")
    r = rank(vectors)
    if r < n:
        sep = nullspace_vector(vectors, n)
        assert sep is not None
        return SpanResult(spans=False, rank=r, separator=sep)
    # lambda >= 1 with sum(lambda_i v_i) = 0  <=>  mu >= 0 with
    # sum(mu_i v_i) = -sum(v_i), via lambda = 1 + mu.
    target = zero_vec(n)
    for v in vectors:
        target = vec_sub(target, v)
    eq_rows = [[v[c] for v in vectors] for c in range(n)]
    x, farkas = _phase_one(eq_rows, list(target), len(vectors))
    if x is not None:
        multipliers = tuple(_ONE + m for m in x)
        witness = list(zero_vec(n))
        for m, v in zip(multipliers, vectors):
            for kk, val in enumerate(v):
                witness[kk] += m * val
        cert = SpanCertificate(multipliers=multipliers, witness=tuple(witness))
        assert cert.witness == zero_vec(n)
        return SpanResult(spans=True, rank=n, certificate=cert)
    assert farkas is not None
    separator = vec_scale(-_ONE, farkas)
    return SpanResult(spans=False, rank=n, separator=separator)


def nonneg_combination(
    vectors: Sequence[Sequence[Fraction]],
    target_pattern: Sequence[Pattern],
) -> SpanCertificate | None:
    """Find lambda >= 0 whose combination matches a per-coordinate pattern.

    Pattern entries: ``"zero"`` forces the coordinate of the combination to
    vanish, ``"negative"`` forces it strictly below zero, ``"free"`` leaves
    it unconstrained.  Returns a certificate or None when infeasible.

    Strict negativity is encoded as <= -1; this loses no generality because
    the remaining constraints are homogeneous, so solutions rescale.
    """
    vectors = [vec(v) for v in vectors]
    if not vectors:
        raise ValueError("nonneg_combination needs at least one vector")
    n = len(vectors[0])
    if len(target_pattern) != n:
        raise ValueError("pattern length must match vector dimension")
    for entry in target_pattern:
        if entry not in ("zero", "negative", "free"):
            raise ValueError(f"bad pattern entry: {entry!r}")
    nv = len(vectors)
    neg_coords = [c for c, e in enumerate(target_pattern) if e == "negative"]
    slack_of = {c: nv + i for i, c in enumerate(neg_coords)}
    nvars = nv + len(neg_coords)
    eq_rows: list[list[Fraction]] = []
    eq_rhs: list[Fraction] = []
    for c, entry in enumerate(target_pattern):
        if entry == "free":
            continue
        row = [v[c] for v in vectors] + [_ZERO] * len(neg_coords)
        if entry == "negative":
            row[slack_of[c]] = _ONE
            eq_rhs.append(-_ONE)
        else:
            eq_rhs.append(_ZERO)
        eq_rows.append(row)
    x, _ = _phase_one(eq_rows, eq_rhs, nvars)
    if x is None:
        return None
    multipliers = tuple(x[:nv])
    witness = list(zero_vec(n))
    for m, v in zip(multipliers, vectors):
        if m:
            for kk, val in enumerate(v):
                witness[kk] += m * val
    for c, entry in enumerate(target_pattern):
        if entry == "zero":
            assert witness[c] == 0
        elif entry == "negative":
            assert witness[c] < 0
    return SpanCertificate(multipliers=multipliers, witness=tuple(witness))


def rational_str(x: Fraction) -> str:
    """Render a Fraction as ``"num"`` or ``"num/den"`` (lowest terms)."""
    x = frac(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"
