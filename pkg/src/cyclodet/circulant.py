"""Circulant symbols f_n, their matrices and DFT spectra."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .cyclotomic import CycNum, CyclotomicContext, context
from .errors import PreconditionError
from .linalg import ExactMatrix

__all__ = [
    "CirculantSymbol",
    "SpectrumResult",
    "from_values",
    "from_sun1",
    "from_sun2",
    "from_abc",
    "parse_symbol",
    "build_matrix",
    "dft_eigenvalues",
    "check_condition_iii",
    "fourier_action_check",
    "scan_abc",
]


@dataclass(frozen=True)
class CirculantSymbol:
    """A period-n function on the integers, stored as f(0), ..., f(n-1).

    Periodicity holds by construction since lookups reduce k modulo n.
    """

    ctx: CyclotomicContext
    values: tuple[CycNum, ...]
    label: str = ""

    def __post_init__(self):
        values = tuple(self.values)
        object.__setattr__(self, "values", values)
        if len(values) != self.ctx.n:
            raise ValueError(f"symbol needs {self.ctx.n} values, got {len(values)}")

    @property
    def n(self) -> int:
        return self.ctx.n

    def __call__(self, k: int) -> CycNum:
        return self.values[k % self.ctx.n]


@dataclass(frozen=True)
class SpectrumResult:
    lambdas: tuple[CycNum, ...]
    zero_indices: tuple[int, ...]


def from_values(ctx: CyclotomicContext, values: Sequence, label: str = "") -> CirculantSymbol:
    vals = [v if isinstance(v, CycNum) else ctx.from_rational(v) for v in values]
    return CirculantSymbol(ctx, tuple(vals), label)


def _require_odd(n: int) -> None:
    if n <= 1 or n % 2 == 0:
        raise PreconditionError("n must be odd and > 1")


def from_sun1(n: int) -> CirculantSymbol:
    """f(k) = 1/(1 - zeta^k), f(0) = 0."""
    _require_odd(n)
    ctx = context(n)
    vals = [ctx.zero] + [(ctx.one - ctx.zeta_pow(k)).inv() for k in range(1, n)]
    return CirculantSymbol(ctx, tuple(vals), "sun1")


def from_sun2(n: int) -> CirculantSymbol:
    """f(k) = (1 + zeta^k)/(1 - zeta^k), f(0) = 0."""
    _require_odd(n)
    ctx = context(n)
    vals = [ctx.zero] + [
        (ctx.one + ctx.zeta_pow(k)) * (ctx.one - ctx.zeta_pow(k)).inv() for k in range(1, n)
    ]
    return CirculantSymbol(ctx, tuple(vals), "sun2")


def from_abc(n: int, a: int, b: int, c: int) -> CirculantSymbol:
    """f(k) = (a + b*zeta^(c*k))/(1 - zeta^k), f(0) = 0.

    Nothing is assumed about the spectrum; use :func:`dft_eigenvalues` to
    see whether some DFT coefficient vanishes.
    """
    if n <= 1:
        raise PreconditionError("n must be > 1")
    ctx = context(n)
    vals = [ctx.zero] + [
        (a + b * ctx.zeta_pow(c * k)) * (ctx.one - ctx.zeta_pow(k)).inv() for k in range(1, n)
    ]
    return CirculantSymbol(ctx, tuple(vals), f"abc:{a},{b},{c}")


_ABC = re.compile(r"^abc:(-?\d+),(-?\d+),(-?\d+)$")


def parse_symbol(text: str, n: int) -> CirculantSymbol:
    """Build a symbol from ``sun1``, ``sun2`` or ``abc:a,b,c``."""
    text = text.strip()
    if text == "sun1":
        return from_sun1(n)
    if text == "sun2":
        return from_sun2(n)
    m = _ABC.match(text)
    if m is None:
        raise ValueError(f"unknown symbol {text!r}; expected sun1, sun2 or abc:a,b,c")
    return from_abc(n, *(int(g) for g in m.groups()))


def build_matrix(sym: CirculantSymbol) -> ExactMatrix:
    """M with m_ij = f(i - j)."""
    n = sym.n
    return ExactMatrix(sym.ctx, n, n, [sym(i - j) for i in range(n) for j in range(n)])


@lru_cache(maxsize=64)
def dft_eigenvalues(sym: CirculantSymbol) -> SpectrumResult:
    """lambda_i = sum_k f(k) zeta^(-k*i) for i = 0..n-1, plus the indices where it vanishes."""
    ctx = sym.ctx
    n = sym.n
    lambdas = []
    for i in range(n):
        acc = ctx.zero
        for k, f in enumerate(sym.values):
            if f:
                acc = acc + f * ctx.zeta_pow(-k * i)
        lambdas.append(acc)
    return SpectrumResult(tuple(lambdas), tuple(i for i, lam in enumerate(lambdas) if lam.is_zero()))


@lru_cache(maxsize=64)
def check_condition_iii(sym: CirculantSymbol) -> bool:
    """Exact check of sum_k f(i-k) conj(f(j-k)) == sum_k conj(f(k-i)) f(k-j) for all i, j.

    This is M M* == M* M entrywise.  Every circulant matrix is normal, so a
    well-formed symbol always passes; the check is still done in full.
    """
    ctx = sym.ctx
    n = sym.n
    conj = [v.conj() for v in sym.values]
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            left = ctx.zero
            right = ctx.zero
            for k in range(1, n + 1):
                a, b = sym(i - k), conj[(j - k) % n]
                if a and b:
                    left = left + a * b
                a, b = conj[(k - i) % n], sym(k - j)
                if a and b:
                    right = right + a * b
            if left != right:
                return False
    return True


def fourier_action_check(sym: CirculantSymbol) -> bool:
    """M w_i == lambda_i w_i for every i, with w_i = (zeta^(i*k)) for k = 1..n."""
    ctx = sym.ctx
    n = sym.n
    M = build_matrix(sym)
    lam = dft_eigenvalues(sym).lambdas
    for i in range(n):
        w = [ctx.zeta_pow(i * k) for k in range(1, n + 1)]
        if M.apply(w) != [lam[i] * x for x in w]:
            return False
    return True


def _projective_key(sym: CirculantSymbol) -> tuple:
    lead = next((v for v in sym.values if v), None)
    if lead is None:
        return ()
    inv = lead.inv()
    return tuple(v * inv for v in sym.values)


def scan_abc(n: int, bound: int = 3, limit: int | None = None, skip_known: bool = True) -> list[CirculantSymbol]:
    """Symbols from_abc(n, a, b, c) with |a|, |b| <= bound, 0 <= c < n that
    have a vanishing DFT coefficient and pass condition (iii).

    Symbols that are scalar multiples of one already seen are skipped, as
    are (with ``skip_known``) multiples of the sun1 and sun2 symbols.  The
    scan stops after ``limit`` hits.
    """
    found = []
    seen = set()
    if skip_known:
        seen.add(_projective_key(from_abc(n, 1, 0, 0)))
        seen.add(_projective_key(from_abc(n, 1, 1, 1)))
    for c in [*range(1, n), 0]:
        for a in range(-bound, bound + 1):
            for b in range(-bound, bound + 1):
                if b == 0 and (a == 0 or c != 0):
                    continue  # zero symbol, or c plays no role
                sym = from_abc(n, a, b, c)
                key = _projective_key(sym)
                if not key or key in seen:
                    continue
                seen.add(key)
                if dft_eigenvalues(sym).zero_indices and check_condition_iii(sym):
                    found.append(sym)
                    if limit is not None and len(found) >= limit:
                        return found
    return found
