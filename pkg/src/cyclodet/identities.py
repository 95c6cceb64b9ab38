"""Verifiers for the two derangement determinant identities and their companions.

Each identity can be checked along several independent routes (brute-force
derangement sum, Gaussian elimination, Fourier-basis spectrum, circulant
minor formula); every route returns a :class:`VerificationReport` with exact
left and right sides.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .circulant import (
    CirculantSymbol,
    build_matrix,
    check_condition_iii,
    dft_eigenvalues,
    from_sun1,
    from_sun2,
    from_values,
)
from .cyclotomic import CycNum, context
from .derangements import brute_det
from .errors import PreconditionError
from .linalg import (
    BasisSpec,
    ExactMatrix,
    assert_block_triangular,
    build_B_s,
    build_C_s,
    change_of_basis,
    charpoly_eval,
    determinant,
    eei_sides,
    minor,
    verify_integer_spectrum,
)

__all__ = [
    "VerificationReport",
    "METHODS",
    "DEFAULT_BRUTE_LIMIT",
    "rhs_sun1",
    "rhs_sun2",
    "sun1_matrix",
    "sun2_matrix",
    "verify_sun1",
    "verify_sun2",
    "verify_theorem3",
    "verify_lemma1",
    "verify_scaling",
    "verify_c_s_eigenvalue",
    "verify_eei_report",
]

METHODS = ("brute", "det", "spectrum", "minor_thm")
DEFAULT_BRUTE_LIMIT = 11


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of one check.

    ``verified`` implies ``lhs == rhs``.  The converse fails only when a route
    also asserts structure (block shape, circulant form) and that structure
    is broken; ``details`` then says why.
    """

    identity: str
    n: int
    method: str
    lhs: CycNum
    rhs: CycNum
    verified: bool
    elapsed: float = 0.0
    details: str = ""
    j: int | None = field(default=None, compare=False)
    s: int | None = field(default=None, compare=False)

    def sort_key(self):
        return (self.n, self.method, self.j if self.j is not None else -1, self.s if self.s is not None else -1)

    def to_json(self, timing: bool = True) -> dict:
        return {
            "identity": self.identity,
            "n": self.n,
            "method": self.method,
            "lhs": str(self.lhs),
            "rhs": str(self.rhs),
            "verified": self.verified,
            "elapsed_ms": int(round(self.elapsed * 1000)) if timing else 0,
            "details": self.details,
        }


def _check_odd(n: int) -> None:
    if not isinstance(n, int) or n <= 1 or n % 2 == 0:
        raise PreconditionError("n must be odd and > 1")


def rhs_sun1(n: int) -> Fraction:
    """(-1)^((n-1)/2) * (((n-1)/2)!)^2 / n."""
    _check_odd(n)
    h = (n - 1) // 2
    return Fraction((-1) ** h * math.factorial(h) ** 2, n)


def _odd_double_factorial(k: int) -> int:
    return math.prod(range(1, k + 1, 2))


def rhs_sun2(n: int) -> Fraction:
    """(-1)^((n-1)/2) * ((n-2)!!)^2 / n."""
    _check_odd(n)
    h = (n - 1) // 2
    return Fraction((-1) ** h * _odd_double_factorial(n - 2) ** 2, n)


def sun1_matrix(n: int) -> ExactMatrix:
    """A with a_jk = 1/(1 - zeta^(j-k)) off the diagonal, j, k = 1..n-1."""
    return minor(build_matrix(from_sun1(n)), n)


def sun2_matrix(n: int) -> ExactMatrix:
    """A' with a_jk = (1 + zeta^(j-k))/(1 - zeta^(j-k)) off the diagonal."""
    return minor(build_matrix(from_sun2(n)), n)


def _det_B1(n: int) -> CycNum:
    # B_1 is diagonal; its determinant is the product of 1 - zeta^i
    ctx = context(n)
    out = ctx.one
    for i in range(1, n):
        out = out * (ctx.one - ctx.zeta_pow(i))
    return out


def _symbol_from_minor(A: ExactMatrix) -> tuple[CirculantSymbol, list[tuple[int, int]]]:
    """Read f off a matrix assumed to be M_n of a circulant, and list the
    0-based positions that disagree with f(i - j)."""
    ctx = A.ctx
    n = ctx.n
    values = [None] * n
    for i in range(A.rows):
        for j in range(A.cols):
            k = (i - j) % n
            if values[k] is None:
                values[k] = A[i, j]
    if any(v is None for v in values):
        raise PreconditionError("matrix too small to determine a circulant symbol")
    bad = [(i, j) for i in range(A.rows) for j in range(A.cols) if A[i, j] != values[(i - j) % n]]
    return from_values(ctx, values), bad


def _route_brute(A, rhs, workers):
    lhs = brute_det(A, workers=workers)
    return lhs, lhs == rhs, "derangement sum"


def _route_det(A, rhs):
    lhs = determinant(A)
    return lhs, lhs == rhs, "gaussian elimination"


def _route_minor(A, rhs):
    n = A.ctx.n
    sym, bad = _symbol_from_minor(A)
    spec = dft_eigenvalues(sym)
    notes = []
    if bad:
        notes.append(f"not a circulant minor: {len(bad)} entries differ from the symbol, first {bad[0]}")
    if not spec.zero_indices:
        return A.ctx.zero, False, "; ".join(notes + ["no vanishing DFT coefficient"])
    s = spec.zero_indices[0]
    prod = A.ctx.one
    for i, lam in enumerate(spec.lambdas):
        if i != s:
            prod = prod * lam
    lhs = prod / n
    notes.insert(0, f"zero_indices={list(spec.zero_indices)} s={s}")
    return lhs, lhs == rhs and not bad, "; ".join(notes)


def _is_integer(x: CycNum) -> bool:
    return x.is_rational() and x.den == 1


def _route_spectrum_sun1(A, rhs):
    n = A.ctx.n
    h = (n - 1) // 2
    basis = BasisSpec.excluding(n, h)
    R = change_of_basis(build_C_s(A, 1), basis)
    tri = assert_block_triangular(R, basis)
    detB1 = _det_B1(n)
    if not tri.ok:
        lhs = determinant(R) / detB1
        return lhs, False, (
            f"block-triangular shape broken at {len(tri.violating_positions)} positions, "
            f"first {tri.violating_positions[0]}"
        )
    diag = tri.diagonal
    prod = A.ctx.one
    for d in diag:
        prod = prod * d
    lhs = prod / detB1
    wanted = sorted([k for k in range(1, h + 1)] + [-k for k in range(1, h + 1)])
    ints = sorted(d.num[0] for d in diag) if all(_is_integer(d) for d in diag) else None
    if ints != wanted:
        return lhs, False, f"diagonal is not {{+-1..+-{h}}}: {[str(d) for d in diag]}"
    return lhs, lhs == rhs, f"block split {len(tri.block_partition[0])}+{len(tri.block_partition[1])}, diagonal {{+-1..+-{h}}}"


def _route_spectrum_sun2(A, rhs):
    n = A.ctx.n
    ctx = A.ctx
    basis = BasisSpec(ctx, tuple(range(1, n)))
    expected = list(range(n - 2, -n, -2))
    C1 = build_C_s(A, 1)
    detB1 = _det_B1(n)
    if verify_integer_spectrum(C1, expected, basis):
        lhs = ctx.from_int(math.prod(expected)) / detB1
        return lhs, lhs == rhs, f"spectrum = odd integers in [{2 - n}, {n - 2}] confirmed"
    lhs = determinant(change_of_basis(C1, basis)) / detB1
    return lhs, False, f"spectrum = odd integers in [{2 - n}, {n - 2}] not confirmed"


def _verify_sun(identity, n, method, brute_limit, workers, matrix, expected):
    _check_odd(n)
    if method not in METHODS:
        raise PreconditionError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}")
    if method == "brute" and n > brute_limit:
        raise PreconditionError(f"brute route is limited to n <= {brute_limit}; raise the brute limit to go further")
    start = time.perf_counter()
    ctx = context(n)
    if matrix is None:
        A = sun1_matrix(n) if identity == "sun1" else sun2_matrix(n)
    else:
        A = matrix
        if A.ctx != ctx or A.shape != (n - 1, n - 1):
            raise PreconditionError(f"override matrix must be {n - 1}x{n - 1} over Q(zeta_{n})")
    if expected is None:
        expected = rhs_sun1(n) if identity == "sun1" else rhs_sun2(n)
    rhs = ctx.from_rational(expected) if not isinstance(expected, CycNum) else expected
    if method == "brute":
        lhs, ok, details = _route_brute(A, rhs, workers)
    elif method == "det":
        lhs, ok, details = _route_det(A, rhs)
    elif method == "minor_thm":
        lhs, ok, details = _route_minor(A, rhs)
    elif identity == "sun1":
        lhs, ok, details = _route_spectrum_sun1(A, rhs)
    else:
        lhs, ok, details = _route_spectrum_sun2(A, rhs)
    return VerificationReport(identity, n, method, lhs, rhs, ok, time.perf_counter() - start, details)


def verify_sun1(n: int, method: str = "det", *, brute_limit: int = DEFAULT_BRUTE_LIMIT,
                workers: int = 1, matrix: ExactMatrix | None = None, expected=None) -> VerificationReport:
    """Check det A = rhs_sun1(n) along one route.

    ``matrix`` replaces A and ``expected`` replaces the right side; both
    exist for negative controls.
    """
    return _verify_sun("sun1", n, method, brute_limit, workers, matrix, expected)


def verify_sun2(n: int, method: str = "det", *, brute_limit: int = DEFAULT_BRUTE_LIMIT,
                workers: int = 1, matrix: ExactMatrix | None = None, expected=None) -> VerificationReport:
    """Check det A' = rhs_sun2(n) along one route."""
    return _verify_sun("sun2", n, method, brute_limit, workers, matrix, expected)


def verify_theorem3(sym: CirculantSymbol) -> list[VerificationReport]:
    """det M_j against (1/n) prod_{i != s} lambda_i for every j and every zero index s."""
    spec = dft_eigenvalues(sym)
    if not spec.zero_indices:
        raise PreconditionError("condition (ii) fails: no DFT coefficient of the symbol vanishes")
    if not check_condition_iii(sym):
        raise PreconditionError("condition (iii) fails: the circulant is not normal")
    n = sym.n
    ctx = sym.ctx
    M = build_matrix(sym)
    rhs_by_s = {}
    for s in spec.zero_indices:
        prod = ctx.one
        for i, lam in enumerate(spec.lambdas):
            if i != s:
                prod = prod * lam
        rhs_by_s[s] = prod / n
    reports = []
    for j in range(1, n + 1):
        start = time.perf_counter()
        lhs = determinant(minor(M, j))
        elapsed = time.perf_counter() - start
        for s in spec.zero_indices:
            rhs = rhs_by_s[s]
            reports.append(VerificationReport(
                "theorem3", n, "det", lhs, rhs, lhs == rhs, elapsed,
                f"symbol={sym.label or 'custom'} j={j} s={s}", j=j, s=s,
            ))
    return reports


def _count_report(identity, n, method, passed, total, start, details):
    ctx = context(n)
    return VerificationReport(
        identity, n, method, ctx.from_int(passed), ctx.from_int(total),
        passed == total, time.perf_counter() - start, details,
    )


def verify_lemma1(n: int) -> VerificationReport:
    """Every instance of the four root-of-unity sums (l1), (l2), (s1), (s2).

    (l1) sum_{j != k} x_js/(1 - x_{k-j}) = ((n-1)/2 - s) x_ks - 1/(1 - x_k)
    (l2) sum_{j != k} x_js/(1 - x_{j-k}) = (s - (n+1)/2) x_ks - 1/(1 - x_{-k})  (s > 0)
                                         = (n-1)/2 - 1/(1 - x_{-k})          (s = 0)
    (s1) sum_j x_js/(1 - x_{-j}) = (n-1)/2 - s,   s = 0..n-1
    (s2) sum_j x_js/(1 - x_j)    = s - (n+1)/2,   s = 1..n
    with x_k = zeta^k and j running over 1..n-1.  lhs counts the instances
    that hold, rhs the total; failures are listed in ``details``.
    """
    if not isinstance(n, int) or n < 2:
        raise PreconditionError("n must be >= 2")
    start = time.perf_counter()
    ctx = context(n)
    x = ctx.zeta_pow
    one = ctx.one
    # 1/(1 - x_t) for t != 0 mod n
    g = {t: (one - x(t)).inv() for t in range(1, n)}

    def G(t):
        return g[t % n]

    half_m = Fraction(n - 1, 2)
    half_p = Fraction(n + 1, 2)
    failures = []
    total = 0
    for s in range(n):
        for k in range(1, n):
            total += 2
            left = sum((x(j * s) * G(k - j) for j in range(1, n) if j != k), ctx.zero)
            right = (half_m - s) * x(k * s) - G(k)
            if left != right:
                failures.append(f"l1 s={s} k={k}")
            left = sum((x(j * s) * G(j - k) for j in range(1, n) if j != k), ctx.zero)
            if s > 0:
                right = (s - half_p) * x(k * s) - G(-k)
            else:
                right = half_m - G(-k)
            if left != right:
                failures.append(f"l2 s={s} k={k}")
    for s in range(n):
        total += 1
        left = sum((x(j * s) * G(-j) for j in range(1, n)), ctx.zero)
        if left != half_m - s:
            failures.append(f"s1 s={s}")
    for s in range(1, n + 1):
        total += 1
        left = sum((x(j * s) * G(j) for j in range(1, n)), ctx.zero)
        if left != s - half_p:
            failures.append(f"s2 s={s}")
    parity = "odd" if n % 2 else "even"
    details = f"{total} instances, n {parity}"
    if failures:
        details += "; failed: " + ", ".join(failures)
    return _count_report("lemma1", n, "direct", total - len(failures), total, start, details)


def _admissible_s(n: int) -> list[int]:
    h = (n - 1) // 2
    return [s for s in range(-h, h + 1) if s != 0]


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % p for p in range(2, math.isqrt(n) + 1))


def verify_scaling(n: int) -> VerificationReport:
    """det B_1 = n; for prime n also det B_s = n and det C_s = n det A for every admissible s.

    For composite n the s with det B_s != n are listed but do not count as
    failures.
    """
    _check_odd(n)
    start = time.perf_counter()
    passed = total = 0
    notes = []
    total += 1
    if determinant(build_B_s(n, 1)) == n:
        passed += 1
    else:
        notes.append("det(B_1) != n")
    prime = _is_prime(n)
    if prime:
        A = sun1_matrix(n)
        nA = n * determinant(A)
        for s in _admissible_s(n):
            total += 2
            if determinant(build_B_s(n, s)) == n:
                passed += 1
            else:
                notes.append(f"det(B_{s}) != n")
            if determinant(build_C_s(A, s)) == nA:
                passed += 1
            else:
                notes.append(f"det(C_{s}) != n det(A)")
    else:
        odd = []
        for s in _admissible_s(n):
            d = determinant(build_B_s(n, s))
            if d != n:
                odd.append(f"det(B_{s})={d}")
        if odd:
            notes.append("composite n, expected exceptions: " + ", ".join(odd))
    details = ("prime" if prime else "composite") + (f"; {'; '.join(notes)}" if notes else "")
    return _count_report("scaling", n, "direct", passed, total, start, details)


def verify_c_s_eigenvalue(n: int) -> VerificationReport:
    """The eigenvector sums behind C_t u_s = t u_s with t = (n-1)/2 - s, and
    det(t I - C_t) = 0 for every admissible t.

    The sum identity is required for s in 0..n-1 except (n-1)/2; the case
    s = (n-1)/2 (where both sides vanish) is checked too and reported in
    ``details`` without affecting the verdict.
    """
    _check_odd(n)
    start = time.perf_counter()
    ctx = context(n)
    h = (n - 1) // 2
    x = ctx.zeta_pow
    g = {t: (ctx.one - x(t)).inv() for t in range(1, n)}
    passed = total = 0
    failures = []
    extra = True
    for s in range(n):
        for k in range(1, n):
            left = sum(
                ((ctx.one - x(j * (h - s))) * g[(k - j) % n] * x(j * s) for j in range(1, n) if j != k),
                ctx.zero,
            )
            holds = left == (h - s) * x(k * s)
            if s == h:
                extra = extra and holds
                continue
            total += 1
            if holds:
                passed += 1
            else:
                failures.append(f"sum s={s} k={k}")
    A = sun1_matrix(n)
    for t in _admissible_s(n):
        total += 1
        if charpoly_eval(build_C_s(A, t), t).is_zero():
            passed += 1
        else:
            failures.append(f"det({t}I - C_{t}) != 0")
    details = f"{total} checks; s=(n-1)/2 sum identity {'holds' if extra else 'fails'}"
    if failures:
        details += "; failed: " + ", ".join(failures)
    return _count_report("spectrum", n, "direct", passed, total, start, details)


def verify_eei_report(sym: CirculantSymbol, i: int, j: int) -> VerificationReport:
    """Eigenvector-eigenvalue identity for one (i, j) as a report."""
    start = time.perf_counter()
    lhs, rhs = eei_sides(sym, i, j)
    return VerificationReport(
        "eei", sym.n, "direct", lhs, rhs, lhs == rhs, time.perf_counter() - start,
        f"symbol={sym.label or 'custom'} i={i} j={j}", j=j, s=i,
    )
