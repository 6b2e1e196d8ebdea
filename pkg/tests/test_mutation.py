import pytest

from cclab.catalog import build_catalog
from cclab.cc import cc_module
from cclab.laurent import LaurentPolynomial
from cclab.mutation import MutationError, exchange_matrix, fz_mutation_oracle, mutate_matrix
from cclab.quiver import parse_quiver


def _from_modules(Q):
    chars = {cc_module(m.rep) for m in build_catalog(Q).members}
    return chars | {LaurentPolynomial.variable(Q.n, i) for i in Q.vertices}


@pytest.mark.parametrize("name,count", [("A2", 5), ("A3", 9), ("D4", 16)])
def test_mutation_matches_module_characters(name, count, request):
    Q = request.getfixturevalue(name)
    oracle = fz_mutation_oracle(Q)
    assert len(oracle) == count
    assert oracle == _from_modules(Q)


def test_mutation_is_an_involution(D4):
    B = exchange_matrix(D4)
    for k in range(4):
        assert mutate_matrix(mutate_matrix(B, k), k) == B


def test_exchange_matrix(K):
    assert exchange_matrix(K) == ((0, 2), (-2, 0))


def test_oracle_refuses_what_it_cannot_finish(K):
    with pytest.raises(MutationError):
        fz_mutation_oracle(K)
    with pytest.raises(MutationError):
        fz_mutation_oracle(parse_quiver("vertices: 1\n"))
