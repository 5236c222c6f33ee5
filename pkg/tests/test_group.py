import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dngates.group import (
    GroupElement,
    GroupError,
    check_order,
    decode,
    elements,
    encode,
    fundamental_rep,
    group_table,
    identity,
    inverse,
    inverse_table,
    irrep_entry,
    irrep_labels,
    irrep_value,
    multiply,
    re_trace,
    trace_table,
)

ORDERS = [2, 4, 8, 16]


def element_of(N):
    return st.builds(GroupElement, st.integers(0, 1), st.integers(0, N - 1), st.just(N))


orders = st.sampled_from(ORDERS)


@pytest.mark.parametrize("bad", [0, 1, 3, 6, 12, -4, 2.0])
def test_rejects_bad_orders(bad):
    with pytest.raises(GroupError):
        check_order(bad)


def test_element_validation():
    with pytest.raises(GroupError):
        GroupElement(2, 0, 4)
    with pytest.raises(GroupError):
        GroupElement(0, 4, 4)
    with pytest.raises(GroupError):
        GroupElement(0, 0, 4) * GroupElement(0, 0, 8)


def test_rotation_subgroup_example():
    assert multiply(GroupElement(0, 1, 4), GroupElement(0, 2, 4)) == GroupElement(0, 3, 4)


def test_reflection_conjugates_rotation():
    for N in ORDERS:
        s, r = GroupElement(1, 0, N), GroupElement(0, 1, N)
        assert s * r * s == inverse(r)


@pytest.mark.parametrize("N", [2, 4, 8])
def test_associativity_exhaustive(N):
    T = group_table(N)
    G = 2 * N
    a, b, c = np.meshgrid(np.arange(G), np.arange(G), np.arange(G), indexing="ij")
    assert np.array_equal(T[T[a, b], c], T[a, T[b, c]])


@given(st.data())
def test_associativity_random_n16(data):
    a, b, c = (data.draw(element_of(16)) for _ in range(3))
    assert (a * b) * c == a * (b * c)


@given(orders.flatmap(element_of))
def test_inverse_and_identity(g):
    e = identity(g.N)
    assert g * inverse(g) == e == inverse(g) * g
    assert g * e == g == e * g
    assert inverse(inverse(g)) == g


@pytest.mark.parametrize("N", ORDERS)
def test_homomorphism_all_pairs(N):
    els = list(elements(N))
    reps = {g: fundamental_rep(g) for g in els}
    for g, h in itertools.product(els, els):
        assert np.max(np.abs(reps[g * h] - reps[g] @ reps[h])) < 1e-12


@given(orders.flatmap(element_of))
def test_re_trace_is_class_function(g):
    rep = fundamental_rep(g)
    assert abs(re_trace(g) - np.trace(rep).real) < 1e-12
    for h in elements(g.N):
        assert abs(re_trace(h * g * inverse(h)) - re_trace(g)) < 1e-12
    assert abs(re_trace(inverse(g)) - re_trace(g)) < 1e-12


@pytest.mark.parametrize("N", ORDERS)
def test_dimension_sum(N):
    labels = irrep_labels(N)
    # each 2-d irrep contributes four rows, i.e. d^2 = 4
    assert len(labels) == 2 * N
    distinct = {(lab.kind, lab.l) for lab in labels}
    assert sum(4 if kind == "2d" else 1 for kind, _ in distinct) == 2 * N


@pytest.mark.parametrize("N", [4, 8, 16])
def test_schur_orthogonality(N):
    labels = irrep_labels(N)
    els = list(elements(N))
    rows = np.array([[irrep_entry(lab, g) for g in els] for lab in labels])
    gram = rows.conj() @ rows.T
    weights = np.array([2 * N / lab.dim for lab in labels])
    assert np.max(np.abs(gram - np.diag(weights))) < 1e-12


@pytest.mark.parametrize("N", [4, 8])
def test_irreps_are_homomorphisms(N):
    els = list(elements(N))
    for lab in irrep_labels(N):
        for g, h in itertools.product(els, els):
            lhs = np.atleast_2d(irrep_value(lab, g * h))
            rhs = np.atleast_2d(irrep_value(lab, g)) @ np.atleast_2d(irrep_value(lab, h))
            assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_identity_irrep_values():
    for lab in irrep_labels(8):
        val = np.asarray(irrep_value(lab, identity(8)))
        assert np.allclose(val, np.eye(lab.dim))


def test_encoding_examples():
    assert encode(GroupElement(1, 2, 4)) == "110"
    assert encode(identity(4)) == "000"
    assert encode(GroupElement(0, 5, 8)) == "0101"
    with pytest.raises(GroupError):
        decode("11", 4)


@given(orders.flatmap(element_of))
def test_encode_roundtrip(g):
    bits = encode(g)
    assert decode(bits, g.N) == g
    assert int(bits, 2) == g.index


def test_d2_table_by_hand():
    # order e, r, s, sr ; rotation r has order 2 so the group is abelian
    expected = np.array([[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]])
    assert np.array_equal(group_table(2), expected)


@pytest.mark.parametrize("N", ORDERS)
def test_tables_agree_with_element_api(N):
    T, inv, tr = group_table(N), inverse_table(N), trace_table(N)
    for g in elements(N):
        assert inv[g.index] == inverse(g).index
        assert abs(tr[g.index] - re_trace(g)) < 1e-12
        for h in elements(N):
            assert T[g.index, h.index] == (g * h).index
    assert np.array_equal(T[0], np.arange(2 * N))
    # every row and column is a permutation
    assert all(sorted(row) == list(range(2 * N)) for row in T)
    assert all(sorted(col) == list(range(2 * N)) for col in T.T)


def test_tables_are_read_only():
    with pytest.raises(ValueError):
        group_table(4)[0, 0] = 1


def test_table_cap():
    with pytest.raises(GroupError):
        group_table(128)


@settings(max_examples=50)
@given(orders.flatmap(lambda N: st.tuples(element_of(N), element_of(N))))
def test_multiply_matches_formula(pair):
    g, h = pair
    p = g * h
    sign = -1 if h.m else 1
    assert p.m == (g.m + h.m) % 2
    assert p.k == (sign * g.k + h.k) % g.N
