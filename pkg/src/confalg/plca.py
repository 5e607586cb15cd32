"""Post-Lie conformal products on a Lie conformal algebra.

A :class:`LambdaProduct` stores ``e_i o_lam e_j`` for every ordered pair of
generators and is extended to arbitrary elements by the same sesquilinear
rule as the bracket.  Expressions such as ``y o_{-lam-D} x`` are evaluated as
the ``lam -> -D - lam`` image of ``y o_lam x``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Dict, List, Mapping, Sequence, Tuple

from .cmod import LambdaElement, zero_element
from .lca import (
    LCA,
    AxiomError,
    CheckReport,
    _as_element,
    _report,
    bracket,
    check_lca,
    check_lie_constants,
    current,
    sesquilinear,
    skew_image,
)
from .maps import BasisChange, ConformalLinearMap, ModuleMap, check_derivation, check_rota_baxter, has_trivial_center
from .polyring import LAM, LAMBDA, MU, MU_, PARTIAL, Poly, as_poly

__all__ = [
    "LambdaProduct",
    "make_product",
    "zero_product",
    "negated_bracket",
    "circ",
    "check_plca",
    "associated_lca",
    "check_pair_structure",
    "check_abelian_n_conditions",
    "check_cplca",
    "cplca_from_endomorphism",
    "plca_from_rbt",
    "plca_from_map_into",
    "check_left_mult_derivation",
    "check_module_action",
    "current_plca",
    "check_post_lie_constants",
    "left_multiplication",
    "transform_product",
    "operator_into_report",
]


@dataclass(frozen=True, eq=False)
class LambdaProduct:
    name: str
    basis: Tuple[str, ...]
    params: Tuple[str, ...]
    table: Tuple[Tuple[LambdaElement, ...], ...]
    _cache: Dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LambdaProduct):
            return NotImplemented
        return self.table == other.table

    def __hash__(self) -> int:
        return hash(self.table)

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.table for e in row)

    def subs(self, values: Mapping[str, object]) -> "LambdaProduct":
        vals = {k: as_poly(v) for k, v in values.items()}
        table = tuple(tuple(e.subs(vals) for e in row) for row in self.table)
        return LambdaProduct(self.name, self.basis, tuple(p for p in self.params if p not in vals), table)

    def variables(self) -> frozenset:
        out = set()
        for row in self.table:
            for e in row:
                out |= e.variables()
        return frozenset(out)

    def format(self) -> List[str]:
        return [f"{self.basis[i]} o {self.basis[j]} = {self.table[i][j].format(self.basis)}"
                for i, j in product(range(self.rank), repeat=2)]

    def dsl(self) -> str:
        lines = [f"product {self.name}"]
        if self.params:
            lines.append("params " + " ".join(self.params))
        lines.append("basis " + " ".join(self.basis))
        lines += [f"circ {self.basis[i]} {self.basis[j]} = {self.table[i][j].format(self.basis)}"
                  for i, j in product(range(self.rank), repeat=2)]
        return "\n".join(lines) + "\n"


def make_product(basis: Sequence[str], entries: Mapping, params: Sequence[str] = (), name: str = "P") -> LambdaProduct:
    """Product from ``{(i, j): value}``; absent pairs are zero."""
    basis = tuple(basis)
    n = len(basis)
    table = [[zero_element(n) for _ in range(n)] for _ in range(n)]
    for (a, b), v in entries.items():
        i = a if isinstance(a, int) else basis.index(a)
        j = b if isinstance(b, int) else basis.index(b)
        e = _as_element(v, basis)
        extra = e.lambda_vars() - {LAMBDA}
        if extra:
            raise ValueError(f"product entries may only use lam, found {sorted(extra)}")
        table[i][j] = e
    return LambdaProduct(name, basis, tuple(params), tuple(tuple(r) for r in table))


def zero_product(A: LCA) -> LambdaProduct:
    return make_product(A.basis, {}, A.params, "0")


def negated_bracket(A: LCA) -> LambdaProduct:
    return LambdaProduct("-bracket", A.basis, A.params, tuple(tuple(-e for e in row) for row in A.table))


def circ(P: LambdaProduct, x: LambdaElement, y: LambdaElement, out=LAMBDA) -> LambdaElement:
    if x.rank != P.rank or y.rank != P.rank:
        raise ValueError("rank mismatch")
    return sesquilinear(P.table, x, y, out, P._cache)


def _check_ranks(A: LCA, P: LambdaProduct):
    if A.rank != P.rank:
        raise ValueError(f"rank mismatch: algebra {A.rank}, product {P.rank}")


def _gens(A):
    return [A.gen(i) for i in range(A.rank)]


def _names(A, *idx):
    return tuple(A.basis[i] for i in idx)


# ----------------------------------------------------------------------
# residuals on generators


def derivation_identity(A: LCA, P: LambdaProduct, x, y, z) -> LambdaElement:
    """``x o_lam [y_mu z] - [(x o_lam y)_{lam+mu} z] - [y_mu (x o_lam z)]``"""
    return (circ(P, x, bracket(A, y, z, MU), LAMBDA)
            - bracket(A, circ(P, x, y, LAMBDA), z, LAM + MU_)
            - bracket(A, y, circ(P, x, z, LAMBDA), MU))


def action_commutator(P: LambdaProduct, x, y, z) -> LambdaElement:
    """``x o_lam (y o_mu z) - y o_mu (x o_lam z)``"""
    return circ(P, x, circ(P, y, z, MU), LAMBDA) - circ(P, y, circ(P, x, z, LAMBDA), MU)


def associator_identity(A: LCA, P: LambdaProduct, x, y, z) -> LambdaElement:
    """``[x_lam y] o_{lam+mu} z - x o (y o z) + y o (x o z) + (x o y) o z - (y o_{-lam-D} x) o z``"""
    s = LAM + MU_
    xy = circ(P, x, y, LAMBDA)
    yx = skew_image(circ(P, y, x, LAMBDA))
    return (circ(P, bracket(A, x, y, LAMBDA), z, s) - action_commutator(P, x, y, z)
            + circ(P, xy, z, s) - circ(P, yx, z, s))


def associated_bracket(A: LCA, P: LambdaProduct, x, y) -> LambdaElement:
    return circ(P, x, y, LAMBDA) - skew_image(circ(P, y, x, LAMBDA)) + bracket(A, x, y, LAMBDA)


def check_plca(A: LCA, P: LambdaProduct, include_algebra: bool = True) -> CheckReport:
    _check_ranks(A, P)
    rep = check_lca(A) if include_algebra else CheckReport()
    g = _gens(A)
    n = A.rank
    items = []
    for i, j, k in product(range(n), repeat=3):
        items.append(("plca_derivation", _names(A, i, j, k), derivation_identity(A, P, g[i], g[j], g[k])))
    for i, j, k in product(range(n), repeat=3):
        items.append(("plca_associator", _names(A, i, j, k), associator_identity(A, P, g[i], g[j], g[k])))
    return rep + _report(items, A.basis)


def associated_lca(A: LCA, P: LambdaProduct, verify: bool = True) -> LCA:
    """The bracket ``x o y - y o_{-lam-D} x + [x_lam y]`` as a new algebra."""
    _check_ranks(A, P)
    g = _gens(A)
    table = tuple(tuple(associated_bracket(A, P, g[i], g[j]) for j in range(A.rank)) for i in range(A.rank))
    N = LCA(f"assoc({A.name},{P.name})", A.basis, A.params, table)
    if verify:
        rep = check_lca(N)
        if not rep.ok:
            raise AxiomError("associated bracket violates the Lie conformal axioms", rep)
    return N


def check_module_action(N: LCA, P: LambdaProduct) -> CheckReport:
    """``{x_lam y} o_{lam+mu} z = x o_lam (y o_mu z) - y o_mu (x o_lam z)`` with N's bracket."""
    _check_ranks(N, P)
    g = _gens(N)
    n = N.rank
    items = []
    for i, j, k in product(range(n), repeat=3):
        r = circ(P, bracket(N, g[i], g[j], LAMBDA), g[k], LAM + MU_) - action_commutator(P, g[i], g[j], g[k])
        items.append(("module_action", _names(N, i, j, k), r))
    return _report(items, N.basis)


def left_multiplication(P: LambdaProduct, i: int) -> ConformalLinearMap:
    return ConformalLinearMap(tuple(P.table[i]), f"L({P.basis[i]})")


def check_left_mult_derivation(A: LCA, P: LambdaProduct) -> CheckReport:
    _check_ranks(A, P)
    rep = CheckReport()
    for i in range(A.rank):
        r = check_derivation(A, left_multiplication(P, i))
        rep = rep + CheckReport(tuple(
            type(w)("left_mult_derivation", (A.basis[i],) + w.generators, w.residual, w.names)
            for w in r.witnesses))
    return rep


def check_pair_structure(G: LCA, N: LCA, P: LambdaProduct) -> CheckReport:
    if G.basis != N.basis:
        raise ValueError("G and N must share basis names")
    _check_ranks(G, P)
    g = _gens(G)
    n = G.rank
    items = []
    for i, j in product(range(n), repeat=2):
        r = N.table[i][j] - associated_bracket(G, P, g[i], g[j])
        items.append(("pair_bracket", _names(G, i, j), r))
    for i, j, k in product(range(n), repeat=3):
        items.append(("pair_derivation", _names(G, i, j, k), derivation_identity(G, P, g[i], g[j], g[k])))
    rep = _report(items, G.basis)
    act = check_module_action(N, P)
    return rep + CheckReport(tuple(type(w)("pair_action", w.generators, w.residual, w.names) for w in act.witnesses))


def check_abelian_n_conditions(G: LCA, P: LambdaProduct) -> CheckReport:
    """The three identities characterising products whose associated bracket vanishes."""
    _check_ranks(G, P)
    g = _gens(G)
    n = G.rank
    items = []
    for i, j in product(range(n), repeat=2):
        r = circ(P, g[i], g[j]) - skew_image(circ(P, g[j], g[i])) + G.table[i][j]
        items.append(("abelian_antisymmetry", _names(G, i, j), r))
    for i, j, k in product(range(n), repeat=3):
        items.append(("abelian_left_commutative", _names(G, i, j, k), action_commutator(P, g[i], g[j], g[k])))
    for i, j, k in product(range(n), repeat=3):
        lhs = skew_image(circ(P, circ(P, g[i], g[k], LAMBDA), g[j], MU), MU)
        rhs = circ(P, circ(P, g[i], g[j], LAMBDA), g[k], LAM + MU_)
        items.append(("abelian_right_exchange", _names(G, i, j, k), lhs - rhs))
    return _report(items, G.basis)


def check_cplca(A: LCA, P: LambdaProduct) -> CheckReport:
    _check_ranks(A, P)
    g = _gens(A)
    n = A.rank
    items = []
    for i, j in product(range(n), repeat=2):
        items.append(("commutative", _names(A, i, j), P.table[i][j] - skew_image(P.table[j][i])))
    for i, j, k in product(range(n), repeat=3):
        items.append(("plca_derivation", _names(A, i, j, k), derivation_identity(A, P, g[i], g[j], g[k])))
    for i, j, k in product(range(n), repeat=3):
        r = circ(P, A.table[i][j], g[k], LAM + MU_) - action_commutator(P, g[i], g[j], g[k])
        items.append(("cplca_bracket_action", _names(A, i, j, k), r))
    if A.is_abelian():
        for i, j, k in product(range(n), repeat=3):
            r = circ(P, g[i], circ(P, g[j], g[k], MU), LAMBDA) - circ(P, circ(P, g[i], g[j], LAMBDA), g[k], LAM + MU_)
            items.append(("associative", _names(A, i, j, k), r))
    return _report(items, A.basis)


def _product_from_operator(A: LCA, T: ModuleMap, name: str) -> LambdaProduct:
    g = _gens(A)
    table = tuple(tuple(bracket(A, T.cols[i], g[j]) for j in range(A.rank)) for i in range(A.rank))
    return LambdaProduct(name, A.basis, A.params, table)


def cplca_from_endomorphism(A: LCA, phi: ModuleMap, center_degree: int = 6) -> Tuple[CheckReport, LambdaProduct]:
    """Report on the homomorphism and antisymmetric-invariance conditions, and
    the product ``x o_lam y = [phi(x)_lam y]``."""
    if phi.rank != A.rank or phi.target_rank != A.rank:
        raise ValueError("rank mismatch")
    if A.is_parameter_free() and not (phi.variables() - {PARTIAL}):
        if not has_trivial_center(A, center_degree):
            raise ValueError(f"{A.name} has nontrivial center up to degree {center_degree}")
    items = []
    g = _gens(A)
    for i, j in product(range(A.rank), repeat=2):
        hom = bracket(A, phi.cols[i], phi.cols[j]) - phi(A.table[i][j])
        items.append(("homomorphism", _names(A, i, j), hom))
    for i, j in product(range(A.rank), repeat=2):
        inv = bracket(A, phi.cols[i], g[j]) + bracket(A, g[i], phi.cols[j])
        items.append(("endomorphism_invariance", _names(A, i, j), inv))
    return _report(items, A.basis), _product_from_operator(A, phi, f"[{phi.name}(x)_lam y]")


def plca_from_rbt(A: LCA, T: ModuleMap, verify: bool = True) -> LambdaProduct:
    """``x o_lam y = [T(x)_lam y]`` for a weight-one Rota-Baxter operator."""
    if verify:
        rep = check_rota_baxter(A, T, 1)
        if not rep.ok:
            raise AxiomError("operator is not a Rota-Baxter operator of weight 1", rep)
    P = _product_from_operator(A, T, f"[{T.name}(x)_lam y]")
    if verify:
        rep = check_plca(A, P, include_algebra=False)
        if not rep.ok:
            raise AxiomError("induced product fails the post-Lie identities", rep)
    return P


# ----------------------------------------------------------------------
# products valued in a larger algebra


def _monomial_embedding(embed: ModuleMap):
    """Per column ``(target index, coefficient, D-power)``."""
    out = []
    for j, col in enumerate(embed.cols):
        nz = [(i, c) for i, c in enumerate(col.coords) if c]
        if len(nz) != 1 or len(nz[0][1].terms) != 1:
            raise ValueError("embedding columns must be single monomials c*D^k e_i")
        i, c = nz[0]
        (mono, coeff), = c.terms.items()
        md = dict(mono)
        if set(md) - {PARTIAL}:
            raise ValueError("embedding must be parameter-free")
        out.append((i, coeff, md.get(PARTIAL, 0)))
    if len({t for t, _, _ in out}) != len(out):
        raise ValueError("embedding is not injective")
    return out


def pull_back(embed: ModuleMap, v: LambdaElement) -> LambdaElement | None:
    """Preimage of ``v`` under a monomial embedding, or None."""
    cols = _monomial_embedding(embed)
    targets = {t for t, _, _ in cols}
    if any(v.coords[i] for i in range(v.rank) if i not in targets):
        return None
    out = []
    for t, c, k in cols:
        p = v.coords[t]
        shifted = {}
        for mono, coeff in p.terms.items():
            md = dict(mono)
            e = md.get(PARTIAL, 0)
            if e < k:
                return None
            md[PARTIAL] = e - k
            shifted[tuple(sorted((n, x) for n, x in md.items() if x))] = Fraction(coeff) / c
        out.append(Poly(shifted))
    return LambdaElement(tuple(out))


def plca_from_map_into(A_small: LCA, A_big: LCA, embed: ModuleMap, T: ModuleMap) -> LambdaProduct:
    """``x o_lam y = [T(x)_lam embed(y)]`` pulled back to ``A_small``."""
    n, m = A_small.rank, A_big.rank
    if embed.rank != n or embed.target_rank != m or T.rank != n or T.target_rank != m:
        raise ValueError("shape mismatch between algebras, embedding and operator")
    _monomial_embedding(embed)
    e = [embed.cols[j] for j in range(n)]
    hom = []
    for i, j in product(range(n), repeat=2):
        r = bracket(A_big, e[i], e[j]) - embed(A_small.table[i][j])
        hom.append(("embedding_homomorphism", _names(A_small, i, j), r))
    rep = _report(hom, A_big.basis)
    if not rep.ok:
        raise AxiomError("embedding is not a homomorphism", rep)

    def pb(v, what):
        w = pull_back(embed, v)
        if w is None:
            raise AxiomError(f"{what} does not lie in the embedded subalgebra",
                             _report([("pullback", _names(A_small, *idx), v)], A_big.basis))
        return w

    table = [[None] * n for _ in range(n)]
    for i, j in product(range(n), repeat=2):
        idx = (i, j)
        table[i][j] = pb(bracket(A_big, T.cols[i], e[j]), "product value")
    items = []
    for i, j in product(range(n), repeat=2):
        idx = (i, j)
        inner_big = bracket(A_big, T.cols[i], e[j]) + bracket(A_big, e[i], T.cols[j]) + bracket(A_big, e[i], e[j])
        inner = pb(inner_big, "operator argument")
        r = bracket(A_big, T.cols[i], T.cols[j]) - T(inner)
        items.append(("operator_identity", _names(A_small, i, j), r))
    rep = _report(items, A_big.basis)
    if not rep.ok:
        raise AxiomError("operator identity fails in the larger algebra", rep)
    return LambdaProduct(f"[{T.name}(x)_lam y]", A_small.basis, tuple(sorted(set(A_small.params) | (T.variables() - {PARTIAL}))),
                         tuple(tuple(r) for r in table))


def operator_into_report(A_small: LCA, A_big: LCA, embed: ModuleMap, T: ModuleMap) -> CheckReport:
    """The checks of :func:`plca_from_map_into` as a report instead of an exception."""
    try:
        plca_from_map_into(A_small, A_big, embed, T)
    except AxiomError as e:
        return e.report
    return CheckReport(())


def transform_product(change: BasisChange, P: LambdaProduct, name: str | None = None) -> LambdaProduct:
    """The table of ``P`` on the new generators of ``change``."""
    table = change.transform_table(lambda x, y: circ(P, x, y), P.rank)
    return LambdaProduct(name or P.name + "'", P.basis, P.params, table)


# ----------------------------------------------------------------------
# lifts of finite-dimensional post-Lie algebras


def _bil(consts, dim, a, b):
    out = [Fraction(0)] * dim
    for i in range(dim):
        if a[i]:
            for j in range(dim):
                if b[j]:
                    for k, v in consts.get((i, j), {}).items():
                        out[k] += a[i] * b[j] * Fraction(v)
    return out


def check_post_lie_constants(dim: int, lie, circ_consts) -> List[str]:
    problems = check_lie_constants(dim, lie)
    basis = [[Fraction(int(i == k)) for k in range(dim)] for i in range(dim)]
    br = lambda a, b: _bil(lie, dim, a, b)
    ci = lambda a, b: _bil(circ_consts, dim, a, b)
    sub = lambda a, b: [p - q for p, q in zip(a, b)]
    add = lambda a, b: [p + q for p, q in zip(a, b)]
    for i, j, k in product(range(dim), repeat=3):
        x, y, z = basis[i], basis[j], basis[k]
        r1 = sub(sub(ci(x, br(y, z)), br(ci(x, y), z)), br(y, ci(x, z)))
        if any(r1):
            problems.append(f"derivation identity fails on ({i}, {j}, {k})")
        lhs = ci(br(x, y), z)
        rhs = add(sub(sub(ci(x, ci(y, z)), ci(y, ci(x, z))), ci(ci(x, y), z)), ci(ci(y, x), z))
        if any(sub(lhs, rhs)):
            problems.append(f"associator identity fails on ({i}, {j}, {k})")
    return problems


def current_plca(dim: int, lie_constants, circ_constants, names: Sequence[str] | None = None) -> Tuple[LCA, LambdaProduct]:
    problems = check_post_lie_constants(dim, lie_constants, circ_constants)
    if problems:
        raise ValueError("not a post-Lie algebra: " + "; ".join(problems))
    A = current(dim, lie_constants, names)
    entries = {(i, j): {k: Poly.const(Fraction(v)) for k, v in circ_constants.get((i, j), {}).items()}
               for i in range(dim) for j in range(dim)}
    return A, make_product(A.basis, entries, (), "Cur(o)")
