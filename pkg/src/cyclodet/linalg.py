"""Dense exact linear algebra over Q(zeta_n).

Rows and columns are 0-based in storage; :func:`minor` takes the 1-based
index used in the mathematical statements.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import mpmath
import numpy as np

from .cyclotomic import CycNum, CyclotomicContext, context
from .errors import PreconditionError

__all__ = [
    "ExactMatrix",
    "SingularMatrixError",
    "BasisSpec",
    "TriangularReport",
    "determinant",
    "minor",
    "solve",
    "build_B_s",
    "build_C_s",
    "fourier_vector",
    "fourier_basis",
    "fourier_basis_inverse",
    "change_of_basis",
    "assert_block_triangular",
    "charpoly_eval",
    "verify_integer_spectrum",
    "float_determinant",
    "verify_c1_recurrence",
    "eei_sides",
    "verify_eei",
]


class SingularMatrixError(ArithmeticError):
    pass


class ExactMatrix:
    """Immutable dense matrix of CycNum entries sharing one context."""

    __slots__ = ("ctx", "rows", "cols", "entries")

    def __init__(self, ctx: CyclotomicContext, rows: int, cols: int, entries: Iterable):
        entries = tuple(entries)
        if len(entries) != rows * cols:
            raise ValueError(f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(entries)}")
        conv = []
        for e in entries:
            if not isinstance(e, CycNum):
                e = ctx.from_rational(e)
            elif e.ctx.n != ctx.n:
                raise ValueError("matrix entries from different cyclotomic fields")
            conv.append(e)
        self.ctx = ctx
        self.rows = rows
        self.cols = cols
        self.entries = tuple(conv)

    @classmethod
    def from_rows(cls, ctx: CyclotomicContext, rows: Sequence[Sequence]) -> ExactMatrix:
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(ctx, len(rows), ncols, [e for r in rows for e in r])

    @classmethod
    def identity(cls, ctx: CyclotomicContext, size: int) -> ExactMatrix:
        return cls.diagonal(ctx, [ctx.one] * size)

    @classmethod
    def zeros(cls, ctx: CyclotomicContext, rows: int, cols: int) -> ExactMatrix:
        return cls(ctx, rows, cols, [ctx.zero] * (rows * cols))

    @classmethod
    def diagonal(cls, ctx: CyclotomicContext, diag: Sequence) -> ExactMatrix:
        size = len(diag)
        entries = [ctx.zero] * (size * size)
        for i, d in enumerate(diag):
            entries[i * size + i] = d
        return cls(ctx, size, size, entries)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, idx: tuple[int, int]) -> CycNum:
        i, j = idx
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"entry {idx} outside {self.rows}x{self.cols} matrix")
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[CycNum, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple[CycNum, ...]:
        return self.entries[j::self.cols] if self.cols else ()

    def to_rows(self) -> list[list[CycNum]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def with_entry(self, i: int, j: int, value) -> ExactMatrix:
        entries = list(self.entries)
        entries[i * self.cols + j] = value
        return ExactMatrix(self.ctx, self.rows, self.cols, entries)

    def transpose(self) -> ExactMatrix:
        return ExactMatrix(
            self.ctx, self.cols, self.rows,
            [self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)],
        )

    def conj_transpose(self) -> ExactMatrix:
        return ExactMatrix(
            self.ctx, self.cols, self.rows,
            [self.entries[i * self.cols + j].conj() for j in range(self.cols) for i in range(self.rows)],
        )

    def _check_same(self, other: ExactMatrix):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: ExactMatrix) -> ExactMatrix:
        self._check_same(other)
        return ExactMatrix(self.ctx, self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: ExactMatrix) -> ExactMatrix:
        self._check_same(other)
        return ExactMatrix(self.ctx, self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self) -> ExactMatrix:
        return ExactMatrix(self.ctx, self.rows, self.cols, [-a for a in self.entries])

    def scale(self, s) -> ExactMatrix:
        return ExactMatrix(self.ctx, self.rows, self.cols, [a * s for a in self.entries])

    def __matmul__(self, other: ExactMatrix) -> ExactMatrix:
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        ctx = self.ctx
        out = []
        bcols = [other.col(j) for j in range(other.cols)]
        for i in range(self.rows):
            r = self.row(i)
            nz = [(k, a) for k, a in enumerate(r) if a]
            for col in bcols:
                acc = ctx.zero
                for k, a in nz:
                    b = col[k]
                    if b:
                        acc = acc + a * b
                out.append(acc)
        return ExactMatrix(ctx, self.rows, other.cols, out)

    def apply(self, vec: Sequence[CycNum]) -> list[CycNum]:
        """Matrix-vector product."""
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        out = []
        for i in range(self.rows):
            acc = self.ctx.zero
            for a, v in zip(self.row(i), vec):
                if a and v:
                    acc = acc + a * v
            out.append(acc)
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    __hash__ = None

    def __repr__(self) -> str:
        body = "; ".join(", ".join(str(e) for e in self.row(i)) for i in range(self.rows))
        return f"ExactMatrix(n={self.ctx.n}, {self.rows}x{self.cols}, [{body}])"


def _eliminate_below(work: list[list[CycNum]], k: int, ncols: int) -> None:
    pivot_inv = work[k][k].inv()
    prow = work[k]
    nz = [(j, prow[j]) for j in range(k + 1, ncols) if prow[j]]
    for i in range(k + 1, len(work)):
        row = work[i]
        a = row[k]
        if not a:
            continue
        f = a * pivot_inv
        for j, p in nz:
            row[j] = row[j].sub_mul(f, p)
        row[k] = a.ctx.zero


def determinant(M: ExactMatrix) -> CycNum:
    """Exact determinant by Gaussian elimination, first nonzero pivot per column."""
    if not M.is_square():
        raise ValueError(f"determinant of non-square {M.shape} matrix")
    ctx = M.ctx
    size = M.rows
    work = M.to_rows()
    det = ctx.one
    for k in range(size):
        p = next((i for i in range(k, size) if work[i][k]), None)
        if p is None:
            return ctx.zero
        if p != k:
            work[k], work[p] = work[p], work[k]
            det = -det
        _eliminate_below(work, k, size)
        det = det * work[k][k]
    return det


def minor(M: ExactMatrix, j: int) -> ExactMatrix:
    """Delete row j and column j (1-based)."""
    if not M.is_square():
        raise ValueError("minor of non-square matrix")
    if not 1 <= j <= M.rows:
        raise IndexError(f"minor index {j} outside 1..{M.rows}")
    keep = [t for t in range(M.rows) if t != j - 1]
    return ExactMatrix(M.ctx, len(keep), len(keep), [M[a, b] for a in keep for b in keep])


def solve(A: ExactMatrix, B: ExactMatrix) -> ExactMatrix:
    """Exact X with A @ X == B."""
    if not A.is_square():
        raise ValueError("solve needs a square coefficient matrix")
    if A.rows != B.rows:
        raise ValueError(f"incompatible shapes {A.shape} and {B.shape}")
    ctx = A.ctx
    size, nrhs = A.rows, B.cols
    work = [list(A.row(i)) + list(B.row(i)) for i in range(size)]
    width = size + nrhs
    for k in range(size):
        p = next((i for i in range(k, size) if work[i][k]), None)
        if p is None:
            raise SingularMatrixError("coefficient matrix is singular")
        work[k], work[p] = work[p], work[k]
        _eliminate_below(work, k, width)
    X = [[ctx.zero] * nrhs for _ in range(size)]
    for i in range(size - 1, -1, -1):
        row = work[i]
        pinv = row[i].inv()
        for c in range(nrhs):
            acc = row[size + c]
            for j in range(i + 1, size):
                if row[j] and X[j][c]:
                    acc = acc - row[j] * X[j][c]
            X[i][c] = acc * pinv
    return ExactMatrix.from_rows(ctx, X) if size else ExactMatrix(ctx, 0, nrhs, [])


def _check_odd(n: int) -> None:
    if n <= 1 or n % 2 == 0:
        raise PreconditionError("n must be odd and > 1")


def build_B_s(n: int, s: int) -> ExactMatrix:
    """Diagonal matrix with entries 1 - zeta^(i*s), i = 1..n-1."""
    if s % n == 0:
        raise PreconditionError(f"s = {s} is divisible by n = {n}")
    ctx = context(n)
    return ExactMatrix.diagonal(ctx, [ctx.one - ctx.zeta_pow(i * s) for i in range(1, n)])


def build_C_s(A: ExactMatrix, s: int) -> ExactMatrix:
    """A @ B_s for an (n-1)x(n-1) matrix A over Q(zeta_n)."""
    n = A.ctx.n
    if A.shape != (n - 1, n - 1):
        raise ValueError(f"expected a {n - 1}x{n - 1} matrix, got {A.shape}")
    diag = [A.ctx.one - A.ctx.zeta_pow(i * s) for i in range(1, n)]
    # right multiplication by a diagonal matrix scales columns
    return ExactMatrix(A.ctx, A.rows, A.cols,
                       [A.entries[r * A.cols + c] * diag[c] for r in range(A.rows) for c in range(A.cols)])


@dataclass(frozen=True)
class BasisSpec:
    """Choice of n-1 of the Fourier vectors u_0..u_{n-1}, in order."""

    ctx: CyclotomicContext
    included: tuple[int, ...]

    def __post_init__(self):
        n = self.ctx.n
        inc = tuple(self.included)
        object.__setattr__(self, "included", inc)
        if len(inc) != n - 1:
            raise ValueError(f"basis needs {n - 1} vectors, got {len(inc)}")
        if len(set(inc)) != len(inc) or not all(0 <= j < n for j in inc):
            raise ValueError(f"basis indices must be distinct values in 0..{n - 1}")

    @classmethod
    def excluding(cls, n: int, excluded: int) -> BasisSpec:
        return cls(context(n), tuple(j for j in range(n) if j != excluded))

    @property
    def excluded(self) -> int:
        return (set(range(self.ctx.n)) - set(self.included)).pop()


def fourier_vector(ctx: CyclotomicContext, j: int) -> list[CycNum]:
    """u_j = (zeta^(j*i)) for i = 1..n-1."""
    return [ctx.zeta_pow(j * i) for i in range(1, ctx.n)]


def fourier_basis(spec: BasisSpec) -> ExactMatrix:
    ctx = spec.ctx
    cols = [fourier_vector(ctx, j) for j in spec.included]
    size = ctx.n - 1
    return ExactMatrix(ctx, size, size, [cols[c][r] for r in range(size) for c in range(size)])


def fourier_basis_inverse(spec: BasisSpec) -> ExactMatrix:
    """Closed-form inverse of :func:`fourier_basis`.

    Row j (for included exponent j) has entries (zeta^(-ij) - zeta^(-ie)) / n,
    i = 1..n-1, where e is the excluded exponent.  This follows from
    sum_{i=1}^{n-1} zeta^(it) = n-1 if t == 0 (mod n) else -1.
    """
    ctx = spec.ctx
    n = ctx.n
    e = spec.excluded
    size = n - 1
    return ExactMatrix(ctx, size, size, [
        (ctx.zeta_pow(-i * j) - ctx.zeta_pow(-i * e)) / n
        for j in spec.included for i in range(1, n)
    ])


def change_of_basis(C: ExactMatrix, spec: BasisSpec, use_solve: bool = False) -> ExactMatrix:
    """U^-1 C U, the matrix of C in the basis chosen by ``spec``.

    By default U^-1 comes from :func:`fourier_basis_inverse`; ``use_solve``
    computes the same matrix through :func:`solve` instead.
    """
    U = fourier_basis(spec)
    if C.shape != U.shape:
        raise ValueError(f"expected a {U.rows}x{U.cols} matrix, got {C.shape}")
    if use_solve:
        return solve(U, C @ U)
    return fourier_basis_inverse(spec) @ (C @ U)


@dataclass(frozen=True)
class TriangularReport:
    diagonal: tuple[CycNum, ...]
    violating_positions: tuple[tuple[int, int], ...]
    block_partition: tuple[tuple[int, ...], tuple[int, ...]]

    @property
    def ok(self) -> bool:
        return not self.violating_positions


def assert_block_triangular(R: ExactMatrix, spec: BasisSpec, break_index: int | None = None) -> TriangularReport:
    """Check that R has the shape [[X, Y], [0, Z]] with X and Z lower-triangular.

    The blocks are split at ``break_index`` (a position in ``spec.included``);
    by default this is where the excluded exponent would sit in ascending order.
    Violations are returned as 0-based (row, col) positions, never raised.
    """
    if not R.is_square():
        raise ValueError("block-triangular check needs a square matrix")
    size = R.rows
    if break_index is None:
        break_index = sum(1 for j in spec.included if j < spec.excluded)
    first = tuple(range(break_index))
    second = tuple(range(break_index, size))
    bad = []
    for r in range(size):
        for c in range(size):
            if r < break_index <= c:
                continue  # Y block is unconstrained
            if c > r or (c < break_index <= r):
                if R[r, c]:
                    bad.append((r, c))
    return TriangularReport(
        diagonal=tuple(R[i, i] for i in range(size)),
        violating_positions=tuple(bad),
        block_partition=(first, second),
    )


def charpoly_eval(M: ExactMatrix, t) -> CycNum:
    """det(t*I - M)."""
    if not M.is_square():
        raise ValueError("characteristic polynomial of non-square matrix")
    size = M.rows
    entries = [-e for e in M.entries]
    for i in range(size):
        entries[i * size + i] = entries[i * size + i] + t
    return determinant(ExactMatrix(M.ctx, size, size, entries))


def verify_integer_spectrum(M: ExactMatrix, expected: Sequence[int], basis: BasisSpec | None = None) -> bool:
    """True iff det(m*I - M) == 0 for every m in ``expected``.

    ``expected`` must hold dim(M) distinct integers, so a pass pins the
    spectrum down exactly.  With ``basis`` the singularity checks run on
    U^-1 M U instead, which has the same characteristic polynomial and is
    far sparser when M comes from a circulant.
    """
    if len(expected) != M.rows or len(set(expected)) != len(expected):
        raise ValueError("expected spectrum must list dim(M) distinct values")
    target = change_of_basis(M, basis) if basis is not None else M
    return all(charpoly_eval(target, m).is_zero() for m in expected)


def float_determinant(M: ExactMatrix, digits: int | None = None):
    """LU determinant of the complex embedding of M.

    With ``digits`` unset this is LAPACK in double precision and returns a
    complex.  With ``digits`` set, entries are embedded and factorised in
    mpmath floating point at that many significant digits and an mpc is
    returned; double precision cannot resolve an absolute error of 1e-9
    once |det| reaches a few million.
    """
    if not M.is_square():
        raise ValueError("determinant of non-square matrix")
    if digits is None:
        if M.rows == 0:
            return 1.0 + 0j
        arr = np.array([complex(e) for e in M.entries], dtype=complex).reshape(M.rows, M.cols)
        return complex(np.linalg.det(arr))
    with mpmath.workdps(digits):
        if M.rows == 0:
            return mpmath.mpc(1)
        rows = [[+M.entries[r * M.cols + c].to_complex(digits) for c in range(M.cols)] for r in range(M.rows)]
        return mpmath.det(mpmath.matrix(rows))


def verify_c1_recurrence(n: int) -> bool:
    """Check C_1 u_s against the two-term recurrence for every s in 0..n-1."""
    from .circulant import build_matrix, from_sun1

    _check_odd(n)
    ctx = context(n)
    half = (n - 1) // 2
    A = minor(build_matrix(from_sun1(n)), n)
    C1 = build_C_s(A, 1)
    u = [fourier_vector(ctx, j) for j in range(n)]
    for s in range(n):
        lhs = C1.apply(u[s])
        if s < n - 1:
            rhs = [(half - s) * x - (half - s - 1) * y for x, y in zip(u[s], u[s + 1])]
        else:
            rhs = [-half * x - half * y for x, y in zip(u[n - 1], u[0])]
        if lhs != rhs:
            return False
    return True


def eei_sides(sym, i: int, j: int) -> tuple[CycNum, CycNum]:
    """Both sides of the eigenvector-eigenvalue identity for the circulant of ``sym``.

    Returns ((1/n) * prod_{k != i} (lam_i - lam_k), det(lam_i * I - M_j)),
    using |v_ij|^2 = 1/n for the unit Fourier eigenvectors.  ``i`` is the
    0-based eigen-index, ``j`` the 1-based deleted row/column.
    """
    from .circulant import build_matrix, check_condition_iii, dft_eigenvalues

    if not check_condition_iii(sym):
        raise PreconditionError("symbol does not give a normal matrix (condition (iii))")
    n = sym.n
    if not 0 <= i < n:
        raise IndexError(f"eigen-index {i} outside 0..{n - 1}")
    lam = dft_eigenvalues(sym).lambdas
    prod = sym.ctx.one
    for k in range(n):
        if k != i:
            prod = prod * (lam[i] - lam[k])
    return prod / n, charpoly_eval(minor(build_matrix(sym), j), lam[i])


def verify_eei(sym, i: int, j: int) -> bool:
    lhs, rhs = eei_sides(sym, i, j)
    return lhs == rhs
