from itertools import permutations, product

import pytest

from dpstab.generate import graphs_up_to
from dpstab.graph import (
    Bipartition,
    bipartition,
    complete_graph,
    cycle_graph,
    disjoint_union,
    is_bipartite,
    is_connected,
    is_r_thin,
    k2,
    parse_graph6,
    petersen,
    thick_witness,
)
from dpstab.permgroup import identity, is_automorphism, is_identity, transposition
from dpstab.products import direct_product
from dpstab.stability import (
    CoprimeStatus,
    SigmaAutomorphism,
    TwoFoldAutomorphism,
    VerdictKind,
    WitnessError,
    check_not_coprime_witness,
    classify_graph,
    classify_pair,
    coprimality,
    extract_two_fold_from_sigma,
    fiber_automorphisms,
    find_sigma_automorphism,
    find_two_fold,
    is_stable_graph,
    is_stable_pair,
    lift_two_fold_to_sigma,
    two_fold_closure_ops,
    verify_verdict,
)

from oracles import backtrack_aut_count, is_two_fold, naive_aut_count

# cubic graph on 8 vertices whose double cover has extra automorphisms; it is
# connected, R-thin and non-bipartite, so it is nontrivially unstable
GAMMA_STAR = parse_graph6("GJQsSS")


# ---------------------------------------------------------------- order test


@pytest.mark.parametrize("m", [3, 4, 5])
def test_complete_graphs_stable(m):
    stable, (a, b, c) = is_stable_pair(complete_graph(m), k2())
    assert stable and (a, b, c) == (a, 2, 2 * a)


@pytest.mark.parametrize("m", [3, 4])
def test_complete_double_cover_order_oracle(m):
    assert backtrack_aut_count(direct_product(complete_graph(m), k2()).graph) == naive_aut_count(complete_graph(m)) * 2


def test_cycle_examples():
    assert is_stable_pair(cycle_graph(5), k2()) == (True, (10, 2, 20))
    stable, orders = is_stable_pair(cycle_graph(4), k2())
    assert not stable and orders == (8, 2, 128)
    assert backtrack_aut_count(direct_product(cycle_graph(4), k2()).graph) == 128
    for m in range(3, 12, 2):
        assert is_stable_graph(cycle_graph(m))[0]
    for m in range(4, 13, 2):
        stable, (a, b, c) = is_stable_graph(cycle_graph(m))
        assert not stable and c == 8 * m * m


def test_order_inequality_on_all_small_pairs():
    gs = graphs_up_to(4)
    for g in gs:
        for s in gs:
            _, (a, b, c) = is_stable_pair(g, s)
            assert c >= a * b and c % (a * b) == 0


# ---------------------------------------------------------------- two-fold


def test_find_two_fold_examples():
    w = find_two_fold(cycle_graph(4))
    assert w is not None and w.nontrivial and w.is_valid_for(cycle_graph(4))
    assert is_two_fold(cycle_graph(4), w.alpha, w.beta)
    assert find_two_fold(cycle_graph(5)) is None


def test_duplicate_swap_is_a_two_fold():
    for g in graphs_up_to(5):
        pair = thick_witness(g)
        if pair is None:
            continue
        t = TwoFoldAutomorphism(identity(g.n), transposition(g.n, *pair))
        assert t.nontrivial and t.is_valid_for(g)
        assert find_two_fold(g) is not None


def test_r_thin_two_folds_have_no_automorphism_coordinate():
    # a nontrivial two-fold automorphism with an identity or automorphism
    # coordinate forces R-thickness
    for g in graphs_up_to(5):
        if not is_r_thin(g):
            continue
        gens, _ = fiber_automorphisms(g, k2())
        for sa in gens:
            t = TwoFoldAutomorphism(*sa.perms)
            if t.nontrivial:
                assert not is_identity(t.alpha) and not is_automorphism(g, t.alpha)


def test_two_fold_equivalence_for_connected_non_bipartite():
    for g in graphs_up_to(6):
        if is_connected(g) and not is_bipartite(g):
            assert (not is_stable_graph(g)[0]) == (find_two_fold(g) is not None)


def test_two_fold_equivalence_fails_for_k2():
    # K_2 x K_2 = 2K_2 has 8 automorphisms, yet the only two-fold
    # automorphisms of K_2 are (g, g)
    assert not is_stable_graph(k2())[0]
    assert find_two_fold(k2()) is None
    assert not any(a != b for a, b in product(permutations(range(2)), repeat=2) if is_two_fold(k2(), a, b))


def test_gamma_star_unstable_with_witness():
    v = classify_graph(GAMMA_STAR)
    assert v.kind is VerdictKind.NONTRIVIALLY_UNSTABLE
    w = find_two_fold(GAMMA_STAR)
    assert w.nontrivial and is_two_fold(GAMMA_STAR, w.alpha, w.beta)


# ---------------------------------------------------------------- sigma-automorphisms


def test_find_sigma_examples():
    assert find_sigma_automorphism(cycle_graph(5), cycle_graph(6)) is None
    _, order = fiber_automorphisms(cycle_graph(5), cycle_graph(6))
    assert order == 10
    sa = find_sigma_automorphism(cycle_graph(4), k2())
    assert sa is not None and sa.non_diagonal and sa.is_valid_for(cycle_graph(4), k2())
    sa = find_sigma_automorphism(GAMMA_STAR, cycle_graph(6))
    assert sa is not None and sa.non_diagonal and sa.is_valid_for(GAMMA_STAR, cycle_graph(6))


def test_sigma_witness_implies_unstable():
    gs = graphs_up_to(4)
    for g in gs:
        for s in gs:
            if find_sigma_automorphism(g, s) is not None:
                assert not is_stable_pair(g, s)[0]


def test_isolated_sigma_vertices_pinned():
    sigma = disjoint_union(k2(), complete_graph(1))
    sa = find_sigma_automorphism(cycle_graph(4), sigma)
    assert sa.pinned == (2,) and is_identity(sa.perms[2])


def test_fiber_decomposition_round_trip():
    for g in graphs_up_to(4):
        for s in (k2(), cycle_graph(3), cycle_graph(4)):
            gens, _ = fiber_automorphisms(g, s)
            assert all(sa.is_valid_for(g, s) for sa in gens)


# ---------------------------------------------------------------- lift / extract / closure


def test_lift_and_extract_round_trip():
    c4, c6 = cycle_graph(4), cycle_graph(6)
    t = find_two_fold(c4)
    bip = bipartition(c6)
    sa = lift_two_fold_to_sigma(t, bip, c4, c6)
    assert sa.non_diagonal and sa.is_valid_for(c4, c6)
    edge = sa.differing_edge(c6)
    back = extract_two_fold_from_sigma(sa, edge, c4, c6)
    assert {back.alpha, back.beta} == {t.alpha, t.beta}
    a_vertex = bip.a[0]
    b_vertex = next(v for v in bip.b if c6.has_edge(a_vertex, v))
    assert extract_two_fold_from_sigma(sa, (a_vertex, b_vertex), c4, c6) == t


def test_lift_trivial_is_diagonal():
    c5, c6 = cycle_graph(5), cycle_graph(6)
    rot = (1, 2, 3, 4, 0)
    sa = lift_two_fold_to_sigma(TwoFoldAutomorphism(rot, rot), bipartition(c6), c5, c6)
    assert not sa.non_diagonal


def test_lift_rejects_bad_bipartition():
    c4, c6 = cycle_graph(4), cycle_graph(6)
    t = find_two_fold(c4)
    with pytest.raises(WitnessError):
        lift_two_fold_to_sigma(t, Bipartition((0,) * 6), c4, c6)
    with pytest.raises(WitnessError):
        lift_two_fold_to_sigma(t, Bipartition((0, 0, 1, 1, 0, 1)), c4, c6)


def test_extract_preconditions():
    c4 = cycle_graph(4)
    diag = SigmaAutomorphism((identity(4), identity(4)))
    with pytest.raises(WitnessError):
        extract_two_fold_from_sigma(diag, (0, 1), c4, k2())
    sa = find_sigma_automorphism(c4, cycle_graph(4))
    with pytest.raises(WitnessError):
        extract_two_fold_from_sigma(sa, (0, 2), c4, cycle_graph(4))


def test_closure_ops():
    c4 = cycle_graph(4)
    t = find_two_fold(c4)
    one = TwoFoldAutomorphism(identity(4), identity(4))
    ops = two_fold_closure_ops(t, one, c4)
    assert ops["swap"].swap() == t
    assert ops["composition"] == t
    assert t.inverse().then(t) == one
    for g in graphs_up_to(5):
        gens, _ = fiber_automorphisms(g, k2())
        tfas = [TwoFoldAutomorphism(*sa.perms) for sa in gens][:3]
        for t1 in tfas:
            for t2 in tfas:
                assert all(x.is_valid_for(g) for x in two_fold_closure_ops(t1, t2, g).values())


# ---------------------------------------------------------------- coprimality


def test_coprimality_examples():
    cubic = petersen()
    assert coprimality(cubic, cycle_graph(6)).status is CoprimeStatus.COPRIME
    assert coprimality(cycle_graph(7), disjoint_union(cycle_graph(5), cycle_graph(5))).status is CoprimeStatus.COPRIME
    for m in (3, 4, 5):
        km = complete_graph(m)
        gamma = direct_product(km, k2()).graph
        sigma = direct_product(km, cycle_graph(3)).graph
        ans = coprimality(gamma, sigma)
        assert ans.status is CoprimeStatus.NOT_COPRIME and check_not_coprime_witness(gamma, sigma, ans)
        # the unit cofactor: K_m divides itself
        ans = coprimality(gamma, km)
        assert ans.status is CoprimeStatus.NOT_COPRIME and ans.delta.n == m
        assert check_not_coprime_witness(gamma, km, ans)


def test_c6_not_coprime_to_k2():
    ans = coprimality(cycle_graph(6), k2())
    assert ans.status is CoprimeStatus.NOT_COPRIME and ans.delta.n == 2
    assert check_not_coprime_witness(cycle_graph(6), k2(), ans)


def test_non_bipartite_graphs_coprime_to_k2():
    for g in graphs_up_to(6):
        if g.n % 2 == 0 and not is_bipartite(g):
            assert coprimality(g, k2()).status is CoprimeStatus.COPRIME


# ---------------------------------------------------------------- verdicts


def test_verdict_examples():
    v = classify_pair(cycle_graph(4), k2())
    assert v.kind is VerdictKind.TRIVIALLY_UNSTABLE
    assert {"gamma-r-thick", "both-bipartite"} <= set(v.violations)
    assert classify_pair(complete_graph(4), complete_graph(3)).kind is VerdictKind.STABLE
    assert is_stable_pair(complete_graph(4), complete_graph(3))[1] == (24, 6, 144)
    v = classify_pair(GAMMA_STAR, cycle_graph(6))
    assert v.kind is VerdictKind.NONTRIVIALLY_UNSTABLE and v.witness.non_diagonal
    v = classify_graph(cycle_graph(6))
    assert v.kind is VerdictKind.TRIVIALLY_UNSTABLE and "not-coprime" in v.violations
    assert classify_graph(petersen()).kind is VerdictKind.STABLE
    assert classify_graph(petersen()).orders == (120, 2, 240)
    assert classify_graph(complete_graph(4)).kind is VerdictKind.STABLE


def test_verdicts_reverify():
    for g in graphs_up_to(5):
        v = classify_graph(g)
        assert verify_verdict(g, k2(), v)
        assert (v.kind is VerdictKind.TRIVIALLY_UNSTABLE) == bool(v.violations)


def test_verdict_json_orders_are_strings():
    d = classify_graph(petersen()).to_dict()
    assert d["orders"] == {"aut_gamma": "120", "aut_sigma": "2", "aut_product": "240"}
