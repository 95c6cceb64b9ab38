import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyclodet.circulant import build_matrix, from_sun1, from_sun2
from cyclodet.cyclotomic import context
from cyclodet.derangements import (
    SignedPermutation,
    brute_det,
    count_derangements,
    derangements,
    sign_by_cycles,
    sign_by_inversions,
)
from cyclodet.errors import PreconditionError
from cyclodet.linalg import ExactMatrix, determinant, minor


def subfactorial_by_inclusion_exclusion(m):
    return sum((-1) ** k * math.factorial(m) // math.factorial(k) for k in range(m + 1))


def test_count_examples():
    assert count_derangements(0) == 1
    assert count_derangements(1) == 0
    assert count_derangements(2) == 1
    assert count_derangements(4) == 9
    assert count_derangements(10) == 1334961
    with pytest.raises(ValueError):
        count_derangements(-1)


@pytest.mark.parametrize("m", range(0, 16))
def test_count_against_inclusion_exclusion(m):
    assert count_derangements(m) == subfactorial_by_inclusion_exclusion(m)


@pytest.mark.parametrize("m", range(0, 11))
def test_stream_length(m):
    assert sum(1 for _ in derangements(m)) == count_derangements(m)


def test_small_streams():
    assert list(derangements(2)) == [SignedPermutation((2, 1), -1)]
    assert list(derangements(3)) == [SignedPermutation((2, 3, 1), 1), SignedPermutation((3, 1, 2), 1)]
    four = list(derangements(4))
    assert len(four) == 9
    # sum of signs is det(J - I) for the 4x4 all-ones matrix J
    assert sum(p.sign for p in four) == -3
    ctx = context(3)
    J_minus_I = ExactMatrix.from_rows(ctx, [[0 if i == j else 1 for j in range(4)] for i in range(4)])
    assert determinant(J_minus_I) == -3


@pytest.mark.parametrize("m", range(0, 9))
def test_signs_and_uniqueness(m):
    seen = set()
    for p in derangements(m):
        assert p.is_derangement
        assert p.sign == sign_by_inversions(p.mapping) == sign_by_cycles(p.mapping)
        seen.add(p.mapping)
    brute = {q for q in itertools.permutations(range(1, m + 1)) if all(q[i] != i + 1 for i in range(m))}
    assert seen == brute


def test_stream_is_deterministic_and_sorted():
    a = [p.mapping for p in derangements(6)]
    assert a == sorted(a)
    assert a == [p.mapping for p in derangements(6)]


def test_signed_permutation_validation():
    with pytest.raises(ValueError):
        SignedPermutation((1, 1), 1)
    with pytest.raises(ValueError):
        SignedPermutation((2, 1), 0)


def sun_matrix(sym):
    return minor(build_matrix(sym), sym.n)


def test_brute_examples():
    assert brute_det(sun_matrix(from_sun1(3))) == Fraction(-1, 3)
    assert brute_det(sun_matrix(from_sun2(3))) == Fraction(-1, 3)
    assert brute_det(sun_matrix(from_sun1(5))) == Fraction(4, 5)


def test_brute_rejects_nonzero_diagonal():
    ctx = context(5)
    with pytest.raises(PreconditionError):
        brute_det(ExactMatrix.identity(ctx, 3))
    with pytest.raises(PreconditionError):
        brute_det(ExactMatrix.zeros(ctx, 2, 3))


def test_brute_degenerate_sizes():
    ctx = context(5)
    assert brute_det(ExactMatrix.zeros(ctx, 0, 0)) == 1
    assert brute_det(ExactMatrix.zeros(ctx, 1, 1)) == 0
    assert brute_det(ExactMatrix.zeros(ctx, 4, 4)) == 0


@pytest.mark.parametrize("n", [3, 5, 7, 9])
def test_brute_equals_det_on_suns(n):
    for sym in (from_sun1(n), from_sun2(n)):
        A = sun_matrix(sym)
        assert brute_det(A) == determinant(A)


def test_brute_equals_explicit_stream_sum():
    # sum over the public stream, term by term in the field
    A = sun_matrix(from_sun2(7))
    ctx = A.ctx
    total = ctx.zero
    for p in derangements(6):
        term = ctx.from_int(p.sign)
        for j, t in enumerate(p.mapping):
            term = term * A[j, t - 1]
        total = total + term
    assert brute_det(A) == total == Fraction(-225, 7)


def test_parallel_partition_matches_sequential():
    A = sun_matrix(from_sun1(9))
    assert brute_det(A, workers=3) == brute_det(A, workers=1)


@st.composite
def zero_diag_matrices(draw):
    n = draw(st.sampled_from([2, 3, 4, 5, 7, 8, 12]))
    size = draw(st.integers(0, 6))
    ctx = context(n)
    coef = st.fractions(min_value=-5, max_value=5, max_denominator=4)
    rows = []
    for i in range(size):
        row = []
        for j in range(size):
            if i == j:
                row.append(ctx.zero)
            else:
                row.append(ctx.from_coeffs(draw(st.lists(coef, min_size=ctx.degree, max_size=ctx.degree))))
        rows.append(row)
    return ExactMatrix.from_rows(ctx, rows) if size else ExactMatrix.zeros(ctx, 0, 0)


@settings(max_examples=60, deadline=None)
@given(zero_diag_matrices())
def test_brute_equals_det_random(M):
    assert brute_det(M) == determinant(M)


def test_brute_handles_large_heights():
    # entries with big numerators force wide packing slots
    rng = random.Random(5)
    ctx = context(7)
    size = 5
    rows = [[ctx.zero if i == j else ctx.from_coeffs([Fraction(rng.randint(-10**12, 10**12), rng.randint(1, 10**6))
                                                     for _ in range(ctx.degree)])
             for j in range(size)] for i in range(size)]
    M = ExactMatrix.from_rows(ctx, rows)
    assert brute_det(M) == determinant(M)
