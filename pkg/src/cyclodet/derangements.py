"""Signed derangement enumeration and the brute-force derangement determinant.

``brute_det`` is deliberately independent of the elimination code in
``linalg``: it never divides, never pivots and never touches the field
multiplication.  Every entry is scaled to an integer polynomial, packed into
one big integer (Kronecker substitution) and the signed products are summed
as plain integers, folded modulo x^n - 1 along the way.  Reduction modulo
Phi_n happens once, at the end.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Sequence

import gmpy2

from .cyclotomic import CycNum
from .errors import PreconditionError
from .linalg import ExactMatrix

__all__ = [
    "SignedPermutation",
    "count_derangements",
    "derangements",
    "sign_by_inversions",
    "sign_by_cycles",
    "brute_det",
]


@dataclass(frozen=True)
class SignedPermutation:
    """``mapping[j-1]`` is the image of j; entries are 1-based."""

    mapping: tuple[int, ...]
    sign: int

    def __post_init__(self):
        m = len(self.mapping)
        if sorted(self.mapping) != list(range(1, m + 1)):
            raise ValueError(f"{self.mapping} is not a permutation of 1..{m}")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    @property
    def is_derangement(self) -> bool:
        return all(t != j for j, t in enumerate(self.mapping, 1))


def count_derangements(m: int) -> int:
    """Subfactorial !m via D(m) = (m-1)(D(m-1) + D(m-2))."""
    if m < 0:
        raise ValueError("m must be >= 0")
    prev, cur = 1, 0  # D(0), D(1)
    if m == 0:
        return prev
    for k in range(2, m + 1):
        prev, cur = cur, (k - 1) * (cur + prev)
    return cur


def sign_by_inversions(mapping: Sequence[int]) -> int:
    inv = sum(1 for a in range(len(mapping)) for b in range(a + 1, len(mapping)) if mapping[a] > mapping[b])
    return -1 if inv % 2 else 1


def sign_by_cycles(mapping: Sequence[int]) -> int:
    """(-1)^(m - number of cycles)."""
    m = len(mapping)
    seen = [False] * (m + 1)
    cycles = 0
    for start in range(1, m + 1):
        if not seen[start]:
            cycles += 1
            k = start
            while not seen[k]:
                seen[k] = True
                k = mapping[k - 1]
    return -1 if (m - cycles) % 2 else 1


def derangements(m: int) -> Iterator[SignedPermutation]:
    """All derangements of 1..m in lexicographic order, with signs.

    Backtracking over positions; a value placed after larger values already
    used adds that many inversions, so parity is tracked without a final pass.
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    current = [0] * m

    def rec(pos: int, used: int, parity: int):
        if pos == m:
            yield SignedPermutation(tuple(current), -1 if parity else 1)
            return
        for v in range(1, m + 1):
            if v == pos + 1 or used >> v & 1:
                continue
            current[pos] = v
            yield from rec(pos + 1, used | 1 << v, parity ^ ((used >> (v + 1)).bit_count() & 1))

    yield from rec(0, 0, 0)


# ---------------------------------------------------------------------------
# brute-force determinant
# ---------------------------------------------------------------------------

def _signed_pack(coeffs: Sequence[int], bits: int) -> int:
    pos = gmpy2.pack([c if c > 0 else 0 for c in coeffs], bits)
    neg = gmpy2.pack([-c if c < 0 else 0 for c in coeffs], bits)
    return int(pos - neg)


# reduce the packed prefix modulo 2^(bits*n) - 1 every few levels; this is
# x^n - 1 folding of the underlying polynomial and keeps operands short
_FOLD_EVERY = 4


def _partial_sum(packed: list[list], first: int, mod) -> gmpy2.mpz:
    """Signed sum over derangements with position 0 sent to ``first``.

    ``packed[i][j]`` is the packed entry (i, j), 0 when the entry is zero.
    The result is a packed value modulo ``mod``.
    """
    m = len(packed)
    cand = [[(v, 1 << v, packed[i][v]) for v in range(m) if v != i and packed[i][v]] for i in range(m)]
    last = m - 1
    total = gmpy2.mpz(0)

    def rec(pos: int, used: int, parity: int, prefix):
        nonlocal total
        if pos == last:
            for v, bit, e in cand[pos]:
                if not used & bit:
                    if ((used >> (v + 1)).bit_count() ^ parity) & 1:
                        total -= prefix * e
                    else:
                        total += prefix * e
            return
        for v, bit, e in cand[pos]:
            if used & bit:
                continue
            p = prefix * e
            if pos % _FOLD_EVERY == _FOLD_EVERY - 1:
                p %= mod
            rec(pos + 1, used | bit, parity ^ ((used >> (v + 1)).bit_count() & 1), p)

    start = packed[0][first]
    if not start:
        return total
    # position 0 -> first adds no inversions (nothing placed before it)
    rec(1, 1 << first, 0, start)
    return total % mod


def _partial_sum_task(args):
    packed, first, mod = args
    return _partial_sum(packed, first, mod)


def brute_det(M: ExactMatrix, workers: int = 1) -> CycNum:
    """Sum over derangements tau of sign(tau) * prod_j M[j, tau(j)].

    Requires a square matrix with an exactly zero diagonal.  With
    ``workers > 1`` the sum is split by the image of the first position and
    farmed out to processes; the result is identical either way.
    """
    if not M.is_square():
        raise PreconditionError(f"brute_det needs a square matrix, got {M.shape}")
    m = M.rows
    ctx = M.ctx
    n = ctx.n
    for i in range(m):
        if not M[i, i].is_zero():
            raise PreconditionError(f"diagonal entry ({i}, {i}) is nonzero")
    if m == 0:
        return ctx.one
    if m == 1:
        return ctx.zero

    entries = [[M[i, j] for j in range(m)] for i in range(m)]
    L = math.lcm(*(x.den for row in entries for x in row))
    ints = [[[c * (L // x.den) for c in x.num] for x in row] for row in entries]
    norm = max(sum(abs(c) for c in p) for row in ints for p in row)
    # a product of m entries has L1 norm at most norm^m, and folding modulo
    # x^n - 1 cannot increase it, so every slot of the sum stays below
    # D(m) * norm^m in size; two spare bits for the sign
    bits = (count_derangements(m) * norm**m).bit_length() + 2
    packed = [[gmpy2.mpz(_signed_pack(p, bits)) if any(p) else 0 for p in row] for row in ints]
    mod = (gmpy2.mpz(1) << (bits * n)) - 1

    firsts = [v for v in range(1, m) if packed[0][v]]
    if workers > 1 and len(firsts) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_partial_sum_task, [(packed, v, mod) for v in firsts]))
    else:
        parts = [_partial_sum(packed, v, mod) for v in firsts]
    total = sum(parts, gmpy2.mpz(0))

    # shift every slot by half so the balanced digits become plain ones
    half = 1 << (bits - 1)
    shifted = (total + gmpy2.pack([half] * n, bits)) % mod
    raw = gmpy2.unpack(shifted, bits)
    poly = [int(x) - half for x in raw[:n]]
    return CycNum(ctx, ctx.reduce(poly), L**m)
