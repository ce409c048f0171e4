from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ppmod import fps_calculus as fps
from ppmod.fps_calculus import FPSet, MuLabel
from ppmod.perm_core import (
    Permutation,
    centralizer_of_set,
    conjugate,
    fpf_involutions,
    set_stabilizer,
    sign,
)


def x(text: str, d: int) -> Permutation:
    return Permutation.parse(text, d)


def test_text_round_trip():
    for X in [fps.U, fps.V, fps.V_i(1), fps.build_W(MuLabel(1, 1))]:
        assert FPSet.from_text(X.to_text()) == X
    assert fps.V.to_text().splitlines()[0] == "support=4 members=3"


def test_text_header_is_checked():
    with pytest.raises(ValueError):
        FPSet.from_text("support=4 members=2\n(1 2)(3 4)\n")


def test_members_are_sorted_and_deduplicated():
    X = FPSet((x("(1 3)(2 4)", 4), x("(1 2)(3 4)", 4), x("(1 2)(3 4)", 4)))
    assert len(X) == 2 and list(X.members) == sorted(X.members)


def test_from_members_relabels_support():
    X = FPSet.from_members([Permutation.parse("(3 5)", 6)])
    assert X == fps.U


def test_star_and_powers():
    VU = fps.star(fps.V, fps.U)
    assert VU.degree == 6 and len(VU) == 3
    assert len(fps.star(fps.V, fps.V)) == 9
    assert fps.star_power(fps.U, 3).members == (x("(1 2)(3 4)(5 6)", 6),)
    assert fps.diag_power(fps.V, 1) == fps.V
    D = fps.diag_power(fps.V, 2)
    assert D.degree == 8 and len(D) == 3 and D == fps.V_i(1)
    assert fps.V_i(0) == fps.V


@given(st.integers(0, 3), st.integers(0, 3))
def test_star_sizes_multiply(a, b):
    if a + b == 0:
        return
    parts = [fps.V] * a + [fps.U] * b
    X = parts[0]
    for p in parts[1:]:
        X = fps.star(X, p)
    assert len(X) == 3 ** a and X.degree == 4 * a + 2 * b and X.is_exact()


def test_factorization_of_w():
    W = fps.build_W(MuLabel(2, 1))
    assert fps.irreducible_factorization(W) == [(fps.V, 1), (fps.U, 2)]
    assert fps.is_irreducible(fps.V) and fps.is_irreducible(fps.V_i(1))
    assert not fps.is_irreducible(W)


def test_equivalence_witness_conjugates():
    X = FPSet((x("(1 2)(3 4)", 4), x("(1 3)(2 4)", 4)))
    Y = FPSet((x("(1 4)(2 3)", 4), x("(1 3)(2 4)", 4)))
    g = fps.equivalence_witness(X, Y)
    assert g is not None
    assert FPSet(tuple(conjugate(m, g) for m in X.members)) == Y
    assert fps.equivalence_witness(fps.V, FPSet((x("(1 2)(3 4)", 4),))) is None


def test_stabilizers_of_v():
    sd = fps.stabilizer_data(fps.V)
    assert (sd.S.order(), sd.N.order(), sd.Nbar.order(), sd.Q.order()) == (4, 24, 6, 4)


@pytest.mark.parametrize("parts", [("V", "V"), ("U",) * 4, ("V", "U", "U"), ("U", "V", "U")])
def test_assembled_stabilizers_match_brute_force(parts, monkeypatch):
    blocks = {"V": fps.V, "U": fps.U}
    X = blocks[parts[0]]
    for p in parts[1:]:
        X = fps.star(X, blocks[p])
    d = X.degree
    S_brute = centralizer_of_set(X.members, d)
    N_brute = set_stabilizer(X.members, d)
    monkeypatch.setattr(fps, "BRUTE_FORCE_DEGREE", 4)
    sd = fps.stabilizer_data(X)
    assert sd.S.order() == S_brute.order()
    assert sd.N.order() == N_brute.order()
    assert all(g in S_brute for g in sd.S.generators)
    assert all(g in N_brute for g in sd.N.generators)


def test_assembled_stabilizer_at_degree_ten():
    sd = fps.stabilizer_data(fps.build_W(MuLabel(1, 2)))
    assert sd.S.order() == centralizer_of_set(fps.V_i(1).members, 8).order() * 2
    assert sd.Nbar.order() == 6


def test_exhaustive_fixed_point_sets_degree_four():
    found = fps.exhaustive_fixed_point_sets(4)
    assert len(found) == 4
    assert fps.V in found
    singles = [X for X in found if len(X) == 1]
    assert len(singles) == 3
    assert all(fps.equivalent(X, fps.build_W(MuLabel(2, 0))) for X in singles)


def test_exhaustive_degree_two():
    assert fps.exhaustive_fixed_point_sets(2) == [fps.U]


def test_non_closed_set():
    X = FPSet((x("(1 2)(3 4)", 4), x("(1 3)(2 4)", 4)))
    assert not fps.is_closed(X)
    assert not fps.is_fixed_point_set(X)


@pytest.mark.parametrize("text,s,t", [("(0,2)", 1, 0), ("(4,0)", 0, 1), ("(8,2)", 1, 2)])
def test_mu_label_parse(text, s, t):
    mu = MuLabel.parse(text)
    assert (mu.s, mu.t) == (s, t) and str(mu) == text


def test_mu_label_rejects():
    for bad in ["(2,2)", "(4,1)"]:
        with pytest.raises(ValueError):
            MuLabel.parse(bad)
    with pytest.raises(ValueError):
        MuLabel(0, 0)


@given(st.integers(1, 40))
def test_enumerate_mu(n):
    mus = fps.enumerate_mu(n)
    assert len(mus) == n // 2 + 1
    assert all(mu.n == n and mu.s + 2 * mu.t == n for mu in mus)
    assert sum(2 ** i for i in mus[-1].I) == n // 2


@pytest.mark.parametrize("n,orders", [(1, [2]), (2, [8, 4]), (3, [16, 8]),
                                       (4, [128, 32, 32]), (5, [256, 64, 64])])
def test_vertex_orders(n, orders):
    specs = [fps.vertex_spec(mu) for mu in fps.enumerate_mu(n)]
    assert [vs.order for vs in specs] == orders
    assert [fps.vertex_order_formula(vs.mu) for vs in specs] == orders


@pytest.mark.parametrize("n", range(1, 6))
def test_vertex_alt_containment(n):
    for mu in fps.enumerate_mu(n):
        gens = fps.vertex_spec(mu).generators
        assert all(sign(g) == 1 for g in gens) == (mu.s == 0)


@pytest.mark.parametrize("n", range(1, 6))
def test_w_sets_closed_and_fixed_by_vertex(n):
    for mu in fps.enumerate_mu(n):
        W = fps.build_W(mu)
        Q = fps.vertex_spec(mu).group
        assert fps.fixed_involutions(Q, 2 * n) == list(W.members)
        assert fps.is_closed(W)
        assert fps.size_two_orbits(W) == mu.s


@pytest.mark.parametrize("n", range(2, 6))
def test_w_sets_pairwise_inequivalent(n):
    Ws = [fps.build_W(mu) for mu in fps.enumerate_mu(n)]
    for i, a in enumerate(Ws):
        for b in Ws[i + 1:]:
            assert not fps.equivalent(a, b)


@pytest.mark.parametrize("n", range(1, 5))
def test_w_sets_are_fixed_point_sets(n):
    for mu in fps.enumerate_mu(n):
        W = fps.build_W(mu)
        sd = fps.stabilizer_data(W)
        proj = fps.projective_components(W, sd.Nbar)
        assert [c.dimension for c in proj] == [2 ** len(mu.I)]


def test_kappa_probe():
    assert fps.kappa_probe(0) is False
    assert fps.kappa_probe(1) is False
    assert fps.is_fixed_point_set(fps.V)


def test_fixed_involutions_of_trivial_group_is_everything():
    from ppmod.perm_core import PermGroup
    assert len(fps.fixed_involutions(PermGroup([], 6), 6)) == len(fpf_involutions(6))
