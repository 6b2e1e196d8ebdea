import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from cclab.cc import cc_module
from cclab.grassmannian import (
    count_profile_mod_p,
    euler_grassmannian,
    grassmannian_profile,
    iter_subreps,
    tube_count,
)
from cclab.interpolate import BudgetExceeded
from cclab.rep import RepresentationError, direct_sum, reduce_mod, simple

from _support import random_sum


def gauss_binomial(n, k, q):
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def test_simple_and_projective_profiles(A2):
    from cclab.rep import projective

    assert grassmannian_profile(simple(A2, 0)).euler == {(0, 0): 1, (1, 0): 1}
    assert grassmannian_profile(projective(A2, 0)).euler == {(0, 0): 1, (0, 1): 1, (1, 1): 1}


def test_semisimple_gives_gaussian_binomials(A2):
    S = direct_sum(*[simple(A2, 1)] * 3)
    for p in (2, 3, 5):
        counts = count_profile_mod_p(reduce_mod(S, p))
        for k in range(4):
            assert counts[(0, k)] == gauss_binomial(3, k, p)


def test_regular_two_profile(kcat):
    prof = grassmannian_profile(kcat.get("u[0](2)"))
    assert prof.euler == {
        (0, 0): 1, (0, 1): 2, (0, 2): 1, (1, 1): 1, (1, 2): 2, (2, 2): 1,
    }
    assert prof.details[(1, 1)].poly == [1]


def test_tube_engine_matches_enumeration(kcat):
    for n in (1, 2, 3):
        for lam in ("0", "1", "inf"):
            M = kcat.get(f"u[{lam}]({n})")
            for p in (2, 3):
                R = reduce_mod(M, p)
                assert count_profile_mod_p(R, engine="tube") == count_profile_mod_p(R, engine="enumerate")


def _subspaces_f2(n):
    vecs = range(1 << n)
    seen = set()
    for gens in product(vecs, repeat=n):
        span = {0}
        for g in gens:
            span |= {v ^ g for v in span}
        seen.add(frozenset(span))
    return seen


def _shift(v, n):
    # nilpotent Jordan block on bit vectors: e_i -> e_(i+1), e_(n-1) -> 0
    return (v << 1) & ((1 << n) - 1)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_tube_count_against_brute_force(n):
    subs = _subspaces_f2(n)
    dim = {S: len(S).bit_length() - 1 for S in subs}
    brute = {}
    for U1 in subs:
        for U2 in subs:
            if U1 <= U2 and all(_shift(v, n) in U2 for v in U1):
                key = (dim[U1], dim[U2])
                brute[key] = brute.get(key, 0) + 1
    for a in range(n + 1):
        for b in range(n + 1):
            assert tube_count(n, a, b, 2) == brute.get((a, b), 0)


@settings(max_examples=25)
@given(st.integers(0, 10**6))
def test_split_engine_matches_enumeration(seed):
    from cclab.catalog import build_catalog
    from cclab.quiver import linear_quiver

    cat = build_catalog(linear_quiver(3))
    M, _ = random_sum(cat, random.Random(seed), max_parts=3, max_dim=4)
    R = reduce_mod(M, 2)
    assert count_profile_mod_p(R, engine="split") == count_profile_mod_p(R, engine="enumerate")


def test_iter_subreps_agrees_with_counts(kcat):
    R = reduce_mod(kcat.get("P1"), 3)
    got = {}
    for bases in iter_subreps(R):
        e = tuple(len(b) for b in bases)
        got[e] = got.get(e, 0) + 1
    assert got == count_profile_mod_p(R, engine="enumerate")


def test_euler_grassmannian_single_vector(kcat):
    cp = euler_grassmannian(kcat.get("u[1](2)"), (1, 2))
    assert cp.euler == 2
    assert cp.poly == [1, 1]


def test_convolution_for_direct_sums(K):
    # chi(Gr_e(M + N)) = sum_{e1 + e2 = e} chi(Gr_e1 M) chi(Gr_e2 N)
    from cclab.catalog import build_catalog

    cat = build_catalog(K)
    M, N = cat.get("P1"), cat.get("u[inf](1)")
    gM, gN = grassmannian_profile(M).euler, grassmannian_profile(N).euler
    want = {}
    for (a, x), (b, y) in product(gM.items(), gN.items()):
        e = tuple(i + j for i, j in zip(a, b))
        want[e] = want.get(e, 0) + x * y
    want = {e: v for e, v in want.items() if v}
    assert grassmannian_profile(direct_sum(M, N), engine="enumerate").euler == want


def test_errors(kcat):
    M = kcat.get("u[0](2)")
    with pytest.raises(RepresentationError):
        count_profile_mod_p(M)
    with pytest.raises(RepresentationError):
        count_profile_mod_p(reduce_mod(M, 2), (3, 0))
    with pytest.raises(RepresentationError):
        grassmannian_profile(reduce_mod(M, 2))
    with pytest.raises(BudgetExceeded):
        count_profile_mod_p(reduce_mod(kcat.get("P2"), 5), engine="enumerate", budget=0)


def test_character_positivity_on_small_catalog(A3):
    from cclab.catalog import build_catalog

    for m in build_catalog(A3).members:
        assert all(c > 0 for c in cc_module(m.rep).coefficients())
