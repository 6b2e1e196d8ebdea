import random

from hypothesis import given, settings, strategies as st

from cclab.ar import max_injective_summand, max_projective_summand, tau, tau_inverse, tau_power
from cclab.catalog import build_catalog, decompose, is_isomorphic
from cclab.rep import direct_sum, injective, projective, simple

from _support import multiset, random_sum


def test_tau_kills_projectives(K, A3, D4):
    for Q in (K, A3, D4):
        for i in Q.vertices:
            assert tau(projective(Q, i)).is_zero()
            assert tau_inverse(injective(Q, i)).is_zero()


def test_tau_on_kronecker_dimensions(K):
    # dimension vectors move by the Coxeter matrix
    assert tau_inverse(projective(K, 0)).dims == (3, 4)
    assert tau_inverse(projective(K, 1)).dims == (2, 3)
    assert tau(injective(K, 1)).dims == (4, 3)
    assert tau_power(projective(K, 1), -3).dims == (6, 7)


def test_tau_on_a2(A2):
    assert is_isomorphic(tau_inverse(projective(A2, 1)), simple(A2, 0))
    assert is_isomorphic(tau(simple(A2, 0)), projective(A2, 1))


def test_regulars_are_tau_periodic(kcat):
    for lam in ("0", "1", "inf"):
        for n in (1, 2, 3):
            M = kcat.get(f"u[{lam}]({n})")
            assert is_isomorphic(tau(M), M)
            assert is_isomorphic(tau_inverse(M), M)


def test_catalog_closed_under_tau(A3, D4):
    for Q in (A3, D4):
        cat = build_catalog(Q)
        labels = set(cat.labels())
        for m in cat.members:
            T = tau(m.rep)
            if not T.is_zero():
                assert decompose(T, cat).is_indecomposable()
                assert set(decompose(T, cat).parts) <= labels


def test_tau_inverse_undoes_tau_on_nonprojectives(kcat):
    for label in ("u[0](2)", "tau^-1 P1", "I2"):
        M = kcat.get(label)
        assert is_isomorphic(tau_inverse(tau(M)), M)


def _strip(labels, prefix):
    return multiset(l for l in labels if not l.startswith(prefix))


@settings(max_examples=30)
@given(st.integers(0, 10**6))
def test_projective_and_injective_summands(seed):
    from cclab.quiver import linear_quiver

    Q = linear_quiver(3)
    cat = build_catalog(Q)
    M, chosen = random_sum(cat, random.Random(seed), max_parts=4)
    P0, mult, rest = max_projective_summand(M)
    proj_labels = [f"P{i + 1}" for i in Q.vertices]
    assert mult == [chosen.count(l) for l in proj_labels]
    assert decompose(rest, cat).parts == {k: v for k, v in multiset(chosen).items() if k not in proj_labels}
    assert is_isomorphic(direct_sum(P0, rest), M)
    I0, imult, irest = max_injective_summand(M)
    inj = [decompose(injective(Q, i), cat) for i in Q.vertices]
    inj_labels = [next(iter(d.parts)) for d in inj]
    assert imult == [chosen.count(l) for l in inj_labels]
    assert is_isomorphic(direct_sum(I0, irest), M)


def test_summands_on_kronecker(kcat):
    M = direct_sum(kcat.get("P1"), kcat.get("P1"), kcat.get("u[1](1)"), kcat.get("I2"))
    P0, mult, rest = max_projective_summand(M)
    assert mult == [2, 0]
    assert decompose(rest, kcat).parts == {"u[1](1)": 1, "I2": 1}
    _, imult, irest = max_injective_summand(M)
    assert imult == [0, 1]
    assert decompose(irest, kcat).parts == {"P1": 2, "u[1](1)": 1}
