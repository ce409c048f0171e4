from __future__ import annotations

from functools import lru_cache

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ppmod import gf2_engine as ge
from ppmod.char_theory import class_representative, partitions, perm_character_xi
from ppmod.gf2 import Gf2Matrix
from ppmod.perm_core import (
    GroupAction,
    PermGroup,
    Permutation,
    enumerate_fpf_involutions,
    sylow2_subgroup,
    sylow2_sym,
    symmetric_group,
)
from ppmod.pipeline import pair_coset_type


def xi_module(n):
    return ge.PermModule(enumerate_fpf_involutions(2 * n))


@pytest.fixture(scope="module")
def setups():
    out = {}
    for n in (2, 3, 4):
        module = xi_module(n)
        basis = ge.end_algebra_basis(module, pair_coset_type)
        out[n] = (module, basis, ge.decompose(module, basis))
    return out


@pytest.mark.parametrize("n,p", [(1, 1), (2, 2), (3, 3), (4, 5), (5, 7)])
def test_end_algebra_dimension_is_partition_count(n, p):
    assert ge.end_algebra_basis(xi_module(n), pair_coset_type).size == p


def test_invariant_must_separate_orbits():
    with pytest.raises(ge.NotInvariant):
        ge.end_algebra_basis(xi_module(3), lambda x, y: 0)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_structure_constants_match_integer_products(n, setups):
    _, basis, _ = setups[n]
    mats = [(basis.labels == c).astype(np.int64) for c in range(basis.size)]
    for a in range(basis.size):
        for b in range(basis.size):
            prod = mats[a] @ mats[b]
            expected = sum(basis.structure[a, b, c] * mats[c] for c in range(basis.size))
            assert np.array_equal(prod, expected)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=5, max_size=5),
       st.lists(st.integers(0, 1), min_size=5, max_size=5))
def test_algebra_product_matches_matrix_product(a, b):
    basis = _basis4()
    lhs = basis.matrix(basis.mul(np.array(a), np.array(b)))
    assert lhs == basis.matrix(np.array(a)) @ basis.matrix(np.array(b))


@lru_cache(maxsize=None)
def _basis4():
    return ge.end_algebra_basis(xi_module(4), pair_coset_type)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=5, max_size=5))
def test_fitting_idempotent_is_idempotent(x):
    basis = _basis4()
    e = ge.fitting_idempotent(basis, np.array(x))
    assert np.array_equal(basis.mul(e, e), e)
    assert np.array_equal(basis.mul(e, np.array(x)), basis.mul(np.array(x), e))


@pytest.mark.parametrize("n,dims", [(2, [1, 2]), (3, [1, 14]), (4, [1, 28, 76])])
def test_decomposition_dimensions(n, dims, setups):
    module, _, comps = setups[n]
    assert [c.dimension for c in comps] == dims
    assert all(ge.check_decomposition(module, comps).values())


def test_decomposition_n5():
    module = xi_module(5)
    comps = ge.decompose(module, ge.end_algebra_basis(module, pair_coset_type))
    assert [c.dimension for c in comps] == [1, 260, 684]


def test_corner_algebras_are_local(setups):
    for _, basis, comps in setups.values():
        for c in comps:
            assert ge._is_local(basis, c.coeffs, ge.corner_basis(basis, c.coeffs)) is None
            assert c.local_span == 2 ** len(ge.corner_basis(basis, c.coeffs))


def test_fitting_split_agrees_with_algebra_route(setups):
    module, basis, comps = setups[3]
    for c in range(basis.size):
        theta = basis.orbit_matrix(c)
        split = ge.fitting_split(module, theta)
        e = ge.fitting_idempotent(basis, np.eye(basis.size, dtype=np.int64)[c])
        rank = basis.matrix(e).rank()
        if split is None:
            assert rank in (0, module.dim)
        else:
            kernel, image = split
            assert image.nrows == rank
            assert kernel.nrows + image.nrows == module.dim


def test_fitting_split_rejects_non_endomorphism():
    module = xi_module(2)
    with pytest.raises(ge.NotInvariant):
        ge.fitting_split(module, Gf2Matrix.from_dense([[1, 0, 0], [0, 0, 0], [0, 0, 0]]))


def _regular_module(P):
    return ge.PermModule(GroupAction(P, P.elements(), lambda x, g: x * g))


@pytest.mark.parametrize("m", [2, 4, 6])
def test_regular_module_is_projective(m):
    P = sylow2_sym(m)
    module = _regular_module(P)
    assert ge.is_projective_over_2group(module, Gf2Matrix.identity(module.dim), P)


def test_trivial_and_coset_modules_not_projective():
    P = sylow2_sym(4)
    points = GroupAction(P, [1, 2, 3, 4], lambda x, g: g(x))
    module = ge.PermModule(points)
    assert not ge.is_projective_over_2group(module, Gf2Matrix.identity(4), P)
    ones = Gf2Matrix.from_dense([[1, 1, 1, 1]])
    assert not ge.is_projective_over_2group(module, ones, P)
    with pytest.raises(ge.NotInvariant):
        ge.is_projective_over_2group(module, Gf2Matrix.from_dense([[1, 0, 0, 0]]), P)


def test_base_case_projective_over_sym3_sylow():
    G = symmetric_group(3)
    module = ge.PermModule(GroupAction(G, [1, 2, 3], lambda x, g: g(x)))
    basis = ge.end_algebra_basis(module)
    comps = ge.decompose(module, basis)
    assert [c.dimension for c in comps] == [1, 2]
    P = sylow2_subgroup(G)
    assert [ge.is_projective_over_2group(module, c.subspace(), P) for c in comps] == [False, True]


def test_index_two_subgroups_of_klein_group():
    H = PermGroup([Permutation.parse("(1 2)(3 4)", 4), Permutation.parse("(1 3)(2 4)", 4)], 4)
    subs = ge.index_two_subgroups(H)
    assert len(subs) == 3 and all(len(s) == 2 for s in subs)


def _small_two_subgroups(d):
    yield sylow2_sym(d)
    yield PermGroup([Permutation.from_cycles([(1, 2)], d)], d)
    yield PermGroup([Permutation.from_cycles([(1, 2), (3, 4)], d),
                     Permutation.from_cycles([(1, 3), (2, 4)], d)], d)
    yield PermGroup([Permutation.from_cycles([(1, 3, 2, 4)], d)], d)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_brauer_quotient_routes_agree(n, setups):
    module, basis, comps = setups[n]
    whole = ge.Component(basis, basis.unit % 2, module.dim, 0)
    for Q in _small_two_subgroups(2 * n):
        if Q.order() > ge.MAX_TRACE_ORDER:
            continue
        dims = [ge.brauer_quotient(c, Q, module, method="trace").dimension for c in comps]
        assert dims == [ge.brauer_quotient(c, Q, module, method="fixed").dimension for c in comps]
        # the whole permutation module has Brauer quotient k[Fix(Q)]
        total = ge.brauer_quotient(whole, Q, module, method="trace")
        assert total.dimension == len(total.fixed_points) == sum(dims)


def test_brauer_quotient_of_trivial_component_is_one_dimensional(setups):
    module, _, comps = setups[4]
    for Q in _small_two_subgroups(8):
        assert ge.brauer_quotient(comps[0], Q, module).dimension == 1


def test_brauer_quotient_rejects_non_two_group(setups):
    module, _, comps = setups[2]
    with pytest.raises(ValueError):
        ge.brauer_quotient(comps[0], symmetric_group(4), module)


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("k", [4, 16, 40])
def test_lifted_family_is_complete_and_orthogonal(n, k, setups):
    module, basis, comps = setups[n]
    mod = 1 << k
    lifts = ge.lift_decomposition(basis, comps, k)
    total = np.zeros(basis.size, dtype=object)
    for i, E in enumerate(lifts):
        assert np.array_equal(np.asarray(basis.mul(E, E, mod)) % mod, np.asarray(E) % mod)
        assert np.array_equal(np.asarray(E, dtype=np.int64) % 2, comps[i].coeffs % 2)
        for F in lifts[i + 1:]:
            assert not np.any(np.asarray(basis.mul(E, F, mod)) % mod)
        total = total + np.asarray(E, dtype=object)
    assert np.array_equal(total % mod, basis.unit % mod)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_characters_by_both_routes(n, setups):
    module, basis, comps = setups[n]
    lifts = ge.lift_decomposition(basis, comps, 16)
    reps = [class_representative(r) for r in partitions(2 * n)]
    total = np.zeros(len(reps), dtype=np.int64)
    for c, E in zip(comps, lifts):
        dense = basis.integer_matrix(E, 1 << 16)
        by_matrix = ge.component_character(dense, reps, module.action, 16, c.dimension)
        by_coeffs = ge.character_from_coeffs(basis, E, reps, 16)
        assert by_matrix == by_coeffs
        assert by_coeffs[-1] == c.dimension  # last class is the identity
        total += by_coeffs
    assert total.tolist() == perm_character_xi(2 * n).as_list()


def test_precision_guard():
    module = xi_module(3)
    with pytest.raises(ValueError):
        ge.component_character(np.eye(15, dtype=np.int64), [], module.action, 4, 14)


@given(st.integers(-10**6, 10**6), st.integers(2, 30))
def test_centered_residue(v, k):
    c = ge.centered(v, k)
    assert (c - v) % (1 << k) == 0
    assert -(1 << (k - 1)) < c <= 1 << (k - 1)


def test_enumeration_bound():
    old = ge.MAX_SPAN_BITS
    try:
        ge.MAX_SPAN_BITS = 2
        module = xi_module(4)
        with pytest.raises(ge.EnumerationBound):
            ge.decompose(module, ge.end_algebra_basis(module, pair_coset_type))
    finally:
        ge.MAX_SPAN_BITS = old
