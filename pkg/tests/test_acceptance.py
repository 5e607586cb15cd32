"""Acceptance criteria 1-8.

Each test carries ``@pytest.mark.criterion(n)``; the terminal summary prints
one PASS/FAIL line per criterion.  Where the stated expectation does not hold
the exact statement is kept as a strict xfail next to a passing test of what
the computation actually gives.
"""

import json
import random
import zlib
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from confalg import catalog as cat
from confalg.ansatz import classify_plca, classify_rb, generic_module_map, generic_product, instantiate_map, \
    instantiate_product, quotient_propagate
from confalg.cmod import LambdaElement, SubmoduleBasis, coefficient_span, hermite_form
from confalg.lca import LCA, abelian, bq_truncated, check_jacobi, check_lca, check_skew, current, derived_series, \
    ideal_product, is_ideal, is_nilpotent, quotient_by_coordinates, sl2_structure_constants, virasoro, wb
from confalg.maps import ConformalLinearMap, ModuleMap, ad, check_derivation, check_rota_baxter, \
    find_inner_representative, identity_map, t_prime, zero_map
from confalg.plca import associated_lca, check_abelian_n_conditions, check_plca, make_product, negated_bracket, \
    plca_from_map_into, plca_from_rbt, transform_product, zero_product
from confalg.polyring import LAM, D, Poly
from confalg.solver import branches_json

import oracle
from helpers import in_family, specialises

criterion = pytest.mark.criterion
b_, q_ = Poly.var("b"), Poly.var("q")
ENTRIES = {e.id: e for e in cat.list_entries()}


def built_algebras():
    names, consts = sl2_structure_constants()
    out = {"Vir": virasoro(), "Cur(sl2)": current(3, consts, names), "W(b)": wb("b")}
    out.update({f"W({k})": wb(k) for k in (0, 1, 2, -1)})
    out.update({f"M{n}(q)": bq_truncated(n, "q") for n in range(7)})
    return out


BUILT = built_algebras()


def certified(cid, values=None, cfg=None):
    return cat.build(cid, values, cfg, corrected=ENTRIES[cid].has_correction)


def neg_id(rank):
    return -identity_map(rank)


# 1. axiom suite


@criterion(1)
@pytest.mark.parametrize("name", sorted(BUILT))
def test_axioms_hold_with_zero_residual(name):
    A = BUILT[name]
    assert check_skew(A).ok and check_jacobi(A).ok


@criterion(1)
def test_sign_flip_in_wb_gives_jacobi_witness():
    W = wb("b")
    LH = LambdaElement((Poly.zero(), D + (1 + b_) * LAM))
    bad = LCA("W(b)-flip", W.basis, W.params, ((W.table[0][0], LH), W.table[1]))
    rep = check_jacobi(bad)
    assert rep.status == "fail" and rep.witnesses
    for w in rep.witnesses:
        assert len(w.generators) == 3 and not w.residual.is_zero()
    w = rep.witnesses[0]
    expected = oracle.jacobi(oracle.from_table(bad), *(bad.index(g) for g in w.generators))
    assert oracle.is_zero(oracle.add(oracle.from_element(w.residual), oracle.neg(expected)))


# 2. Rota-Baxter catalog

RB_W = sorted(i for i in ENTRIES if i.startswith("wb.rb."))
RB_BQ = sorted(i for i in ENTRIES if i.startswith("bq.rb."))


@criterion(2)
@pytest.mark.parametrize("cid", RB_W)
def test_w_families_symbolic(cid):
    B = cat.build(cid)
    assert check_rota_baxter(B.algebra, B.object).ok
    assert check_rota_baxter(B.algebra, t_prime(B.object)).ok


@criterion(2)
def test_generic_family_is_identically_in_b():
    B = cat.build("wb.rb.gen")
    assert "b" in B.algebra.params and check_rota_baxter(B.algebra, B.object).ok


@criterion(2)
@pytest.mark.parametrize("name", sorted(BUILT))
def test_trivial_operators(name):
    A = BUILT[name]
    for T in (zero_map(A.rank), neg_id(A.rank)):
        assert check_rota_baxter(A, T).ok and check_rota_baxter(A, t_prime(T)).ok


@criterion(2)
@pytest.mark.parametrize("n", range(1, 7))
def test_bq_operators_per_truncation(n):
    cfg = cat.CatalogConfig(truncation=n)
    for cid in RB_BQ:
        B = cat.build(cid, config=cfg)
        assert B.algebra.params == ("q",)
        assert check_rota_baxter(B.algebra, B.object).ok
        assert check_rota_baxter(B.algebra, t_prime(B.object)).ok


# 3. PLCA catalog

PLCA_IDS = sorted(i for i, e in ENTRIES.items() if e.kind == "plca" and not i.startswith("bq."))
PLCA_VERBATIM_BAD = sorted(i for i in PLCA_IDS if ENTRIES[i].has_correction)


def full_plca_ok(A, P):
    if not check_plca(A, P).ok:
        return False
    N = associated_lca(A, P, verify=False)
    return cat.plca_report(A, P).ok and check_lca(N).ok


@criterion(3)
@pytest.mark.parametrize("cid", PLCA_IDS)
def test_plca_families_as_certified(cid):
    B = certified(cid)
    assert full_plca_ok(B.algebra, B.object)


@criterion(3)
@pytest.mark.xfail(strict=True, reason="printed H o L (and related) entries carry sign slips; see the corrected tables")
def test_plca_families_verbatim():
    bad = [cid for cid in PLCA_VERBATIM_BAD if not full_plca_ok(cat.build(cid).algebra, cat.build(cid).object)]
    assert bad == []


@criterion(3)
def test_normal_forms_for_every_b():
    bvals = {cid.split(".")[3] for cid in PLCA_IDS if cid.startswith("wb.plca.normal.")}
    assert bvals == {"b0", "b1", "b2", "gen"}
    for cid in PLCA_IDS:
        if cid.startswith("wb.plca.normal.gen."):
            assert certified(cid).algebra.params == ("b",)


@criterion(3)
@pytest.mark.parametrize("n", range(1, 7))
def test_bq_products_per_truncation(n):
    cfg = cat.CatalogConfig(truncation=n)
    for cid in sorted(i for i in ENTRIES if i.startswith("bq.plca.")):
        B = cat.build(cid, config=cfg)
        assert full_plca_ok(B.algebra, B.object)


# 4. cross-construction

RB_TO_PLCA = {f"wb.rb.{f}{p}": f"wb.plca.{f}{p}" for f in ("b1", "b2", "gen") for p in ("", ".prime")}
BQ_TO_PLCA = {"zero": "zero", "negid": "negbracket", "neg_upper": "neg_upper", "neg_base": "neg_base"}
INTO = {f"w0w1.t.{k}": f"w0.plca.{k}" for k in ("cl", "cl.prime", "affine", "affine.prime")}
BC_IDS = sorted(i for i, e in ENTRIES.items() if e.kind == "basis_change")


def induced(rb_id, cfg=None):
    B = cat.build(rb_id, config=cfg)
    if rb_id.startswith("w0w1."):
        return plca_from_map_into(B.algebra, wb(1), cat.w0_into_w1(), B.object)
    return plca_from_rbt(B.algebra, B.object)


def pairs():
    return list(RB_TO_PLCA.items()) + list(INTO.items())


def basis_change_ok(cid, corrected):
    for s in ENTRIES[cid].samples:
        B = cat.build(cid, dict(s), corrected=corrected and ENTRIES[cid].has_correction)
        src, tgt = B.extra
        if not (B.object.transform_lca(B.algebra).same_table(B.algebra)
                and transform_product(B.object, src).table == tgt.table):
            return False
    return True


@criterion(4)
@pytest.mark.parametrize("rb,pl", pairs())
def test_cross_construction_as_certified(rb, pl):
    assert induced(rb).table == certified(pl).object.table


@criterion(4)
@pytest.mark.parametrize("n", range(1, 7))
def test_bq_cross_construction(n):
    cfg = cat.CatalogConfig(truncation=n)
    for rb, pl in BQ_TO_PLCA.items():
        assert induced(f"bq.rb.{rb}", cfg).table == cat.build(f"bq.plca.{pl}", config=cfg).object.table


@criterion(4)
@pytest.mark.parametrize("cid", BC_IDS)
def test_basis_changes_as_certified(cid):
    assert basis_change_ok(cid, corrected=True)


@criterion(4)
def test_central_charge_samples():
    for cid in BC_IDS:
        if ENTRIES[cid].requires == ("c",):
            assert sorted(dict(s)["c"] for s in ENTRIES[cid].samples) == [-3, 1, 2]


@criterion(4)
@pytest.mark.xfail(strict=True, reason="the unprimed printed products and two printed normalisations do not match")
def test_cross_construction_verbatim():
    bad = [pl for rb, pl in pairs() if induced(rb).table != cat.build(pl).object.table]
    bad += [cid for cid in BC_IDS if not basis_change_ok(cid, corrected=False)]
    assert bad == []


# 5. classification searches


def cols_of(*maps):
    return [m.cols for m in maps]


def union_equals(A, T, branches, families, rng):
    """Both inclusions between the branch families and the named families (each a (cols, params) pair)."""
    for br in branches:
        inst = instantiate_map(T, br, {u: rng.randint(-4, 4) for u in br.free})
        if not any(in_family(inst.cols, cols, ps) for cols, ps in families):
            return False
    for cols, ps in families:
        vals = {p: rng.randint(-4, 4) for p in ps}
        concrete = ModuleMap(tuple(c.subs({k: Poly.const(v) for k, v in vals.items()}) for c in cols), A.rank).cols
        if not any(specialises(T, br, concrete) for br in branches):
            return False
    return True


def family(A, columns):
    return ModuleMap.from_columns(A.basis, columns).cols


@criterion(5)
@pytest.mark.parametrize("A", [virasoro(), bq_truncated(0, 2), bq_truncated(0, 3)], ids=lambda A: repr(A.table))
def test_rank_one_rb_search(A):
    T, _ = generic_module_map(A, 3)
    br = classify_rb(A, 3)
    assert [b.status for b in br] == ["solved", "solved"]
    assert sorted(str(instantiate_map(T, b).cols) for b in br) == sorted(str(c) for c in cols_of(zero_map(1), neg_id(1)))


@criterion(5)
def test_vir_plca_search():
    V = virasoro()
    P, _ = generic_product(V, 4)
    br = classify_plca(V, 4)
    assert all(b.status == "solved" for b in br)
    assert sorted(str(instantiate_product(P, b).table) for b in br) == \
        sorted(str(X.table) for X in (zero_product(V), negated_bracket(V)))


M1 = bq_truncated(1, 2)


def m1_branches():
    return quotient_propagate(M1, ["L1"], max_deg=2)


def m1_stated_families():
    return [(zero_map(2).cols, ()), (neg_id(2).cols, ()),
            (family(M1, {"L1": {"L1": -1}}), ()), (family(M1, {"L0": {"L0": -1}}), ())]


@criterion(5)
@pytest.mark.xfail(strict=True, reason="M1 also carries T(L0) = c D L1 with T(L1) = -L1 and its involution partner")
def test_m1_union_as_stated():
    T, _ = generic_module_map(M1, 2)
    assert union_equals(M1, T, m1_branches(), m1_stated_families(), random.Random(4))


@criterion(5)
def test_m1_union_actual():
    T, _ = generic_module_map(M1, 2)
    branches = m1_branches()
    assert all(b.status == "solved" for b in branches)
    c = Poly.var("c")
    extra = [(family(M1, {"L0": {"L1": c * D}, "L1": {"L1": -1}}), ("c",)),
             (family(M1, {"L0": {"L0": -1, "L1": -c * D}}), ("c",))]
    assert union_equals(M1, T, branches, m1_stated_families() + extra, random.Random(4))
    # the extra families are honest operators for every c, checked independently
    t = oracle.from_table(M1)
    for cols, _ in extra:
        sym = [oracle.from_element(col) for col in cols]
        assert all(oracle.is_zero(oracle.rb_residual(t, sym, i, j)) for i, j in product(range(2), repeat=2))
    # every branch restricts to an operator L1 -> {0, -L1}
    for b in branches:
        assert instantiate_map(T, b).cols[1].coords in ((Poly.zero(), Poly.zero()), (Poly.zero(), Poly.const(-1)))


@criterion(5)
def test_w3_search():
    A = wb(3)
    T, _ = generic_module_map(A, 2)
    branches = classify_rb(A, 2)
    assert all(b.status == "solved" for b in branches)
    c = Poly.var("c")
    fam = [(family(A, {"L": {"H": c * D}, "H": {"H": -1}}), ("c",)),
           (family(A, {"L": {"L": -1, "H": -c * D}}), ("c",)),
           (zero_map(2).cols, ()), (neg_id(2).cols, ())]
    assert union_equals(A, T, branches, fam, random.Random(9))


@criterion(5)
@pytest.mark.parametrize("A", [virasoro(), bq_truncated(0, 2), wb(3), M1], ids=lambda A: repr(A.table))
def test_solved_branches_reverify(A):
    T, _ = generic_module_map(A, 2)
    branches = quotient_propagate(A, ["L1"], max_deg=2) if A is M1 else classify_rb(A, 2)
    for b in branches:
        assert b.status == "solved"
        assert check_rota_baxter(A, instantiate_map(T, b, {u: 2 for u in b.free})).ok


# 6. derivations


@criterion(6)
@pytest.mark.parametrize("name", sorted(BUILT))
def test_random_inner_derivations(name):
    A = BUILT[name]
    rng = random.Random(zlib.crc32(name.encode()))
    for _ in range(100):
        x = A.element({g: sum((rng.randint(-3, 3) * D ** k for k in range(3)), Poly.zero()) for g in A.basis})
        assert check_derivation(A, ad(A, x)).ok


@criterion(6)
def test_w0_outer_derivation():
    d = ConformalLinearMap.from_columns(("L", "H"), {"L": {"H": 1}})
    assert check_derivation(wb(0), d).ok
    assert find_inner_representative(wb(0), d, 6) is None


@criterion(6)
@pytest.mark.parametrize("A,x", [(virasoro(), {"L": D ** 2 - 1}), (wb(3), {"L": D + 2, "H": 3 * D})],
                         ids=["Vir", "W(3)"])
def test_inner_round_trip(A, x):
    a = A.element(x)
    rep = find_inner_representative(A, ad(A, a), 6)
    assert rep is not None and ad(A, rep).cols == ad(A, a).cols


# 7. module and series layer

upolys = st.lists(st.integers(-3, 3), max_size=4).map(lambda cs: sum((c * D ** k for k, c in enumerate(cs)), Poly.zero()))
lam_polys = st.lists(upolys, min_size=1, max_size=3).map(lambda cs: sum((c * LAM ** k for k, c in enumerate(cs)), Poly.zero()))


@st.composite
def top_constant_multiplier(draw):
    lower = draw(st.lists(upolys, max_size=2))
    p = Poly.const(draw(st.integers(-3, 3).filter(bool))) * LAM ** len(lower)
    for k, c in enumerate(lower):
        p = p + c * LAM ** k
    return p


@criterion(7)
@settings(max_examples=500)
@given(st.lists(lam_polys, min_size=2, max_size=2), top_constant_multiplier())
def test_multiplier_keeps_coefficient_submodule(coords, p):
    v = LambdaElement(tuple(coords))
    pv = LambdaElement(tuple(p * c for c in coords))
    assert hermite_form(coefficient_span(pv), 2).rows == hermite_form(coefficient_span(v), 2).rows


@criterion(7)
def test_w0_heisenberg_ideal_and_quotient():
    W = wb(0)
    I = hermite_form([W.gen(1)], 2)
    assert is_ideal(W, I) and ideal_product(W, I, I).is_zero()
    Q = quotient_by_coordinates(W, ["H"])
    assert check_lca(Q).ok and Q.same_table(virasoro())


@criterion(7)
def test_vir_not_solvable_to_depth():
    assert all(s == SubmoduleBasis.full(1) for s in derived_series(virasoro(), 6))


@criterion(7)
def test_abelian_rank_two_nilpotent():
    assert is_nilpotent(abelian(2), 2) == "yes"


@criterion(7)
def test_abelian_pair_is_metabelian():
    # Cur(heisenberg) with x o y = -[x y]/2: the associated bracket vanishes
    heis = {(0, 1): {2: 1}, (1, 0): {2: -1}}
    G = current(3, heis)
    P = make_product(G.basis, {(G.basis[i], G.basis[j]): {G.basis[k]: Poly.const(-v) / 2 for k, v in d.items()}
                               for (i, j), d in heis.items()})
    assert check_plca(G, P).ok and check_abelian_n_conditions(G, P).ok
    assert associated_lca(G, P).is_abelian()
    series = derived_series(G, 3)
    assert series[2].is_zero()


# 8. determinism and witnesses


@criterion(8)
def test_catalog_json_is_stable():
    ids = ["wb.plca.b1", "bq.rb.neg_base", "wb.bc.gen.c", "w0.plca.affine"]
    one = cat.summary_json(cat.verify_all(ids=ids), detail=True)
    two = cat.summary_json(cat.verify_all(ids=list(reversed(ids))), detail=True)
    assert one == two and json.loads(one)


@criterion(8)
def test_search_json_is_stable():
    assert branches_json(classify_rb(wb(1), 2)) == branches_json(classify_rb(wb(1), 2))
    assert branches_json(m1_branches()) == branches_json(m1_branches())


@criterion(8)
def test_mutation_witnesses_are_nonzero():
    W = wb("b")
    bad = LCA("flip", W.basis, W.params, ((W.table[0][0], LambdaElement((Poly.zero(), D + (1 + b_) * LAM))), W.table[1]))
    reports = [check_lca(bad), check_rota_baxter(virasoro(), identity_map(1))]
    for cid in PLCA_VERBATIM_BAD[:4]:
        B = cat.build(cid)
        reports.append(cat.plca_report(B.algebra, B.object))
    for rep in reports:
        assert rep.status == "fail" and rep.witnesses
        for w in rep.witnesses:
            assert w.generators and not w.residual.is_zero() and w.to_json()["residual"] != "0"
