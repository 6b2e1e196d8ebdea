import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from cclab.catalog import (
    CatalogError,
    ar_middle,
    build_catalog,
    decompose,
    is_isomorphic,
    kronecker_regular,
)
from cclab.quiver import parse_quiver
from cclab.rep import dim_hom, direct_sum, reduce_mod, simple

from _support import multiset, random_sum


def test_dynkin_catalog_sizes(A2, A3, D4):
    # number of positive roots
    assert len(build_catalog(A2)) == 3
    assert len(build_catalog(A3)) == 6
    assert len(build_catalog(D4)) == 12


def test_kronecker_catalog_shape(kcat):
    kinds = multiset(m.kind for m in kcat.members)
    assert kinds == {"preprojective": 7, "preinjective": 7, "regular": 24}
    assert kcat.labels()[:4] == ["P2", "P1", "tau^-1 P2", "tau^-1 P1"]
    assert kcat.get("u[0](3)").dims == (3, 3)


def test_members_are_indecomposable_bricks_or_uniserial(A3, D4, kcat):
    for cat in (build_catalog(A3), build_catalog(D4)):
        for k, m in enumerate(cat.members):
            assert cat.hom_dim(k, k) == 1
    for lam in ("0", "1", "inf"):
        for n in (1, 2, 3):
            M = kcat.get(f"u[{lam}]({n})")
            assert dim_hom(M, M) == n


@pytest.mark.parametrize("name", ["A2", "A3", "D4"])
def test_hom_table_unitriangular_in_ar_order(name, request):
    cat = build_catalog(request.getfixturevalue(name))
    table = cat.hom_table()
    order = cat.ar_order
    for a, j in enumerate(order):
        assert table[j][j] == 1
        for k in order[:a]:
            assert table[j][k] == 0


@settings(max_examples=40)
@given(st.integers(0, 10**6), st.sampled_from(["A3", "D4", "K"]))
def test_decompose_random_sums(seed, name):
    from cclab.quiver import linear_quiver

    Q = {"A3": linear_quiver(3), "D4": parse_quiver(D4_TEXT), "K": parse_quiver(K_TEXT)}[name]
    cat = build_catalog(Q)
    M, chosen = random_sum(cat, random.Random(seed), max_parts=3, max_dim=5)
    assert decompose(M, cat).parts == multiset(chosen)


D4_TEXT = "vertices: 4\narrow a: 1 -> 4\narrow b: 2 -> 4\narrow c: 3 -> 4\n"
K_TEXT = "vertices: 2\narrow a: 1 -> 2\narrow b: 1 -> 2\n"


def test_decompose_over_finite_field(kcat):
    M = direct_sum(kcat.get("u[inf](2)"), kcat.get("tau^-1 P1"))
    assert decompose(reduce_mod(M, 5), kcat).parts == {"u[inf](2)": 1, "tau^-1 P1": 1}


def test_decompose_outside_caps(K):
    small = build_catalog(K, regular_cap=2, component_cap=1)
    with pytest.raises(CatalogError):
        decompose(kronecker_regular(K, "0", 3), small)
    # a regular at a parameter the catalog does not list
    other = kronecker_regular(K, "0", 1)
    other = other.__class__.from_lists(K, (1, 1), {"a": [[1]], "b": [[2]]})
    with pytest.raises(CatalogError):
        decompose(other, small)


def test_non_kronecker_non_dynkin_rejected():
    Q = parse_quiver("vertices: 2\narrow a: 1 -> 2\narrow b: 1 -> 2\narrow c: 1 -> 2\n")
    with pytest.raises(CatalogError):
        build_catalog(Q)


def test_is_isomorphic(kcat):
    a = direct_sum(kcat.get("P1"), kcat.get("P2"))
    b = direct_sum(kcat.get("P2"), kcat.get("P1"))
    assert is_isomorphic(a, b, kcat)
    assert not is_isomorphic(kcat.get("u[0](1)"), kcat.get("u[1](1)"), kcat)


def test_ar_middle_kronecker(kcat):
    B = ar_middle(kcat.get("u[1](2)"), kcat)
    assert decompose(B, kcat).parts == {"u[1](1)": 1, "u[1](3)": 1}
    B = ar_middle(kcat.get("u[0](1)"), kcat)
    assert decompose(B, kcat).parts == {"u[0](2)": 1}
    B = ar_middle(kcat.get("tau^-1 P2"), kcat)
    assert decompose(B, kcat).parts == {"P1": 2}


def test_ar_middle_dynkin(A2, A3):
    cat = build_catalog(A2)
    assert decompose(ar_middle(simple(A2, 0), cat), cat).parts == {"P1": 1}
    cat3 = build_catalog(A3)
    assert ar_middle(simple(A3, 0), cat3).dims == (1, 1, 0)
    from cclab.rep import injective

    B = decompose(ar_middle(injective(A3, 1), cat3), cat3)
    assert B.dims == (1, 2, 1)
    assert sorted(cat3.get(l).dims for l in B.parts) == [(0, 1, 0), (1, 1, 1)]


def test_ar_middle_errors(kcat):
    with pytest.raises(CatalogError):
        ar_middle(kcat.get("P1"), kcat)
    with pytest.raises(CatalogError):
        ar_middle(direct_sum(kcat.get("I1"), kcat.get("I1")), kcat)
    with pytest.raises(CatalogError):
        ar_middle(kcat.get("u[0](8)"), kcat)


def test_catalog_json_export(tmp_path, A3):
    cat = build_catalog(A3)
    path = tmp_path / "catalog.json"
    cat.save(path)
    data = json.loads(path.read_text())
    assert len(data["members"]) == 6
    assert len(data["hom_table"]) == 6
    assert sorted(data["ar_order"]) == sorted(cat.labels())
