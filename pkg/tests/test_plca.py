from itertools import product

import pytest

from confalg import catalog as cat
from confalg.cmod import LambdaElement
from confalg.lca import AxiomError, abelian, check_lca, current, virasoro, wb
from confalg.maps import ModuleMap, identity_map, zero_map
from confalg.plca import (
    LambdaProduct,
    associated_lca,
    check_abelian_n_conditions,
    check_cplca,
    check_left_mult_derivation,
    check_module_action,
    check_pair_structure,
    check_plca,
    circ,
    cplca_from_endomorphism,
    current_plca,
    make_product,
    negated_bracket,
    plca_from_map_into,
    plca_from_rbt,
    zero_product,
)
from confalg.polyring import LAM, D, Poly

import oracle

a, c, a0, a1 = (Poly.var(n) for n in ("a", "c", "a0", "a1"))

# abelian 2-dim g with the associative product e1 o e1 = e1, e1 o e2 = e2
LSA = {(0, 0): {0: 1}, (0, 1): {1: 1}}
# 2-dim nonabelian Lie algebra [e1, e2] = e2
NONAB = {(0, 1): {1: 1}, (1, 0): {1: -1}}
# Heisenberg Lie algebra [x, y] = z
HEIS = {(0, 1): {2: 1}, (1, 0): {2: -1}}


def oracle_plca_ok(A, P):
    t = oracle.from_table(A)
    pt = [[oracle.from_element(e) for e in row] for row in P.table]
    return all(oracle.is_zero(oracle.plca_derivation(t, pt, *x)) and oracle.is_zero(oracle.plca_associator(t, pt, *x))
               for x in product(range(A.rank), repeat=3))


def flip_hl(P):
    table = [list(r) for r in P.table]
    table[1][0] = -table[1][0]
    return LambdaProduct(P.name + "~", P.basis, P.params, tuple(tuple(r) for r in table))


# circ


def test_zero_product_values():
    W = wb("b")
    assert circ(zero_product(W), W.element({"L": D}), W.gen(1)).is_zero()


def test_w1_product_entry_verbatim():
    P = cat.build("wb.plca.b1").object
    assert P.table[0][0] == LambdaElement((Poly.zero(), -D * (a * LAM ** 2 - c * LAM)))


def test_negated_bracket_on_vir():
    V = virasoro()
    assert circ(negated_bracket(V), V.gen(0), V.gen(0)) == LambdaElement((-(D + 2 * LAM),))


# check_plca

ALGEBRAS = [virasoro(), wb("b"), wb(0), current(3, HEIS), cat.build("bq.rb.zero", config=cat.CatalogConfig(truncation=3)).algebra]


@pytest.mark.parametrize("A", ALGEBRAS, ids=lambda A: A.name)
def test_trivial_products_pass(A):
    assert check_plca(A, zero_product(A)).ok
    assert check_plca(A, negated_bracket(A)).ok


def test_corrected_w1_product_passes_and_agrees_with_oracle():
    B = cat.build("wb.plca.b1", corrected=True)
    assert check_plca(B.algebra, B.object).ok
    assert oracle_plca_ok(B.algebra, B.object)


def test_printed_w1_product_fails_in_the_associator_only():
    B = cat.build("wb.plca.b1")
    rep = check_plca(B.algebra, B.object)
    assert {w.check for w in rep.witnesses} == {"plca_associator"}
    assert not oracle_plca_ok(B.algebra, B.object)
    # the printed table differs from the corrected one only by the sign of H o L
    assert flip_hl(B.object).table == cat.build("wb.plca.b1", corrected=True).object.table


def test_sign_flip_mutation_of_w1_product():
    # flipping H o L back in the corrected table breaks the associator and the associated
    # bracket; left multiplications stay derivations since [H lam H] = 0
    good = cat.build("wb.plca.b1", corrected=True)
    A, bad = good.algebra, flip_hl(good.object)
    rep = check_plca(A, bad)
    assert rep.by_check("plca_associator") and all(not w.residual.is_zero() for w in rep.witnesses)
    assert check_left_mult_derivation(A, bad).ok
    N = associated_lca(A, bad, verify=False)
    assert not check_lca(N).ok
    assert not check_module_action(N, bad).ok
    with pytest.raises(AxiomError):
        associated_lca(A, bad)


# associated algebras


@pytest.mark.parametrize("A", ALGEBRAS, ids=lambda A: A.name)
def test_associated_of_zero_is_the_algebra(A):
    assert associated_lca(A, zero_product(A)).same_table(A)


@pytest.mark.parametrize("A", ALGEBRAS, ids=lambda A: A.name)
def test_associated_of_negated_bracket_is_negated(A):
    N = associated_lca(A, negated_bracket(A))
    assert all(N.table[i][j] == -A.table[i][j] for i, j in product(range(A.rank), repeat=2))


def test_current_post_lie_lift_has_subadjacent_current():
    G, P = current_plca(2, {}, LSA)
    assert check_plca(G, P).ok
    assert associated_lca(G, P).same_table(current(2, NONAB))


def test_current_with_negated_lie_product():
    neg = {k: {i: -v for i, v in d.items()} for k, d in NONAB.items()}
    G, P = current_plca(2, NONAB, neg)
    assert P.table == negated_bracket(G).table


def test_current_trivial_product():
    G, P = current_plca(2, NONAB, {})
    assert P.is_zero() and check_plca(G, P).ok


def test_current_rejects_non_post_lie():
    with pytest.raises(ValueError):
        current_plca(2, NONAB, {(0, 0): {0: 1}})


# pairs


def test_pair_with_associated_algebra():
    for cid in ("wb.plca.b2.prime", "w0.plca.cl", "wb.plca.gen.prime"):
        B = cat.build(cid)
        assert check_pair_structure(B.algebra, associated_lca(B.algebra, B.object), B.object).ok


def test_pair_abelian_g_left_symmetric():
    G, P = current_plca(2, {}, LSA)
    assert G.is_abelian()
    assert check_pair_structure(G, current(2, NONAB), P).ok


def test_pair_equal_algebras_with_zero_product():
    # {x y} = x o y - y o x + [x y] collapses to [x y] when o = 0, so (G, G) carries o = 0
    V = virasoro()
    assert check_pair_structure(V, V, zero_product(V)).ok


def test_pair_bracket_failure_is_witnessed():
    V = virasoro()
    rep = check_pair_structure(V, V, negated_bracket(V))
    (w,) = rep.by_check("pair_bracket")
    assert w.residual == LambdaElement((2 * (D + 2 * LAM),))


# abelian associated algebra


def test_abelian_conditions_trivial():
    A = abelian(2)
    assert check_abelian_n_conditions(A, zero_product(A)).ok


def test_abelian_conditions_for_negated_bracket_on_vir():
    V = virasoro()
    rep = check_abelian_n_conditions(V, negated_bracket(V))
    (w,) = rep.by_check("abelian_antisymmetry")
    # o - o^op = -2[x y], so the antisymmetry identity leaves -[L lam L]
    assert w.residual == LambdaElement((-(D + 2 * LAM),))
    assert rep.by_check("abelian_left_commutative")


def test_abelian_pair_gives_metabelian_algebra():
    from confalg.lca import derived_series

    half = {k: {i: Poly.const(-v) / 2 for i, v in d.items()} for k, d in HEIS.items()}
    G = current(3, HEIS)
    P = make_product(G.basis, {(i, j): {G.basis[k]: v for k, v in d.items()} for (i, j), d in half.items()})
    assert check_plca(G, P).ok
    assert check_abelian_n_conditions(G, P).ok
    assert associated_lca(G, P).is_abelian()
    series = derived_series(G, 4)
    assert not series[1].is_zero() and series[2].is_zero()


# commutative products


def test_cplca_zero():
    assert check_cplca(wb(2), zero_product(wb(2))).ok


def test_cplca_on_abelian_rank_one():
    A = abelian(1, basis=["u"])
    P = make_product(("u",), {("u", "u"): {"u": 1}})
    assert check_cplca(A, P).ok


def test_cplca_commutativity_fails_for_negated_bracket():
    V = virasoro()
    rep = check_cplca(V, negated_bracket(V))
    (w,) = rep.by_check("commutative")
    assert w.residual == LambdaElement((-2 * (D + 2 * LAM),))


def test_endomorphism_zero():
    V = virasoro()
    rep, P = cplca_from_endomorphism(V, zero_map(1))
    assert rep.ok and P.is_zero()


def test_endomorphism_identity_on_vir():
    V = virasoro()
    rep, _ = cplca_from_endomorphism(V, identity_map(1))
    (w,) = rep.witnesses
    assert w.check == "endomorphism_invariance"
    assert w.residual == LambdaElement((2 * (D + 2 * LAM),))


def test_endomorphism_nilpotent_on_nonabelian_current():
    G = current(2, NONAB)
    phi = ModuleMap.from_columns(G.basis, {G.basis[0]: {G.basis[1]: 1}})
    rep, P = cplca_from_endomorphism(G, phi)
    assert rep.by_check("homomorphism") == [] and rep.by_check("endomorphism_invariance") == []
    assert check_cplca(G, P).ok


# constructions from operators


def test_rbt_trivial_operators():
    W = wb("b")
    assert plca_from_rbt(W, zero_map(2)).is_zero()
    assert plca_from_rbt(W, -identity_map(2)).table == negated_bracket(W).table


def test_rbt_rejects_non_operator():
    with pytest.raises(AxiomError):
        plca_from_rbt(virasoro(), identity_map(1))


def test_rbt_w2_gives_corrected_product():
    B = cat.build("wb.rb.b2")
    P = plca_from_rbt(B.algebra, B.object)
    assert P.table == cat.build("wb.plca.b2", corrected=True).object.table
    assert P.table != cat.build("wb.plca.b2").object.table


def test_map_into_specialises_to_rbt():
    B = cat.build("wb.rb.gen")
    A, T = B.algebra, B.object
    assert plca_from_map_into(A, A, identity_map(2), T).table == plca_from_rbt(A, T).table


def test_map_into_w1_gives_central_charge_product():
    B = cat.build("w0w1.t.cl")
    P = plca_from_map_into(wb(0), wb(1), cat.w0_into_w1(), B.object)
    assert P.table == cat.build("w0.plca.cl").object.table


def test_map_into_w1_gives_corrected_affine_product():
    B = cat.build("w0w1.t.affine")
    P = plca_from_map_into(wb(0), wb(1), cat.w0_into_w1(), B.object)
    assert P.table == cat.build("w0.plca.affine", corrected=True).object.table
    assert check_plca(wb(0), P).ok


def test_map_into_rejects_bad_operator():
    T = ModuleMap.from_columns(("L", "H"), {"L": {"L": 1}}, target_basis=("L", "H"))
    with pytest.raises(AxiomError):
        plca_from_map_into(wb(0), wb(1), cat.w0_into_w1(), T)


def test_left_mult_and_action_for_zero():
    W = wb(3)
    assert check_left_mult_derivation(W, zero_product(W)).ok
    assert check_module_action(W, zero_product(W)).ok
