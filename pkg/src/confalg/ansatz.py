"""Degree-bounded classification of Rota-Baxter operators and post-Lie products.

A generic operator (or product) has polynomial entries with one fresh unknown
per monomial.  The defining identity is expanded on generators, every
coefficient in ``D``, ``lam`` and ``mu`` becomes one equation, and the system
is handed to :func:`confalg.solver.solve`.  Each solved branch is substituted
back and checked again with the free unknowns left symbolic.
"""

from __future__ import annotations

from itertools import product
from typing import List, Mapping, Sequence, Tuple

from .cmod import LambdaElement
from .lca import LCA, _indices, quotient_by_coordinates
from .maps import (
    ConformalLinearMap,
    ModuleMap,
    check_derivation,
    check_rota_baxter,
    derivation_residual,
    extract_equations,
    rota_baxter_residual,
)
from .plca import LambdaProduct, associator_identity, check_plca, derivation_identity
from .polyring import LAM, PARTIAL, D, Poly
from .solver import ConstraintSystem, SolutionBranch, solve

__all__ = [
    "generic_module_map",
    "generic_product",
    "generic_conformal_map",
    "rb_constraints",
    "plca_constraints",
    "derivation_constraints",
    "classify_rb",
    "classify_plca",
    "classify_derivations",
    "quotient_propagate",
    "instantiate_map",
    "instantiate_product",
    "ClassificationError",
]


class ClassificationError(RuntimeError):
    """A solved branch failed re-verification (a solver defect, never expected)."""


def _fresh(prefix: str, start: int):
    k = start
    while True:
        yield f"{prefix}{k}"
        k += 1


def generic_module_map(A: LCA, max_deg: int, prefix: str = "u") -> Tuple[ModuleMap, List[str]]:
    """Every entry ``sum_k u * D**k`` with ``k <= max_deg``; columns in basis order."""
    if max_deg < 0:
        raise ValueError("max_deg must be non-negative")
    names = _fresh(prefix, 0)
    unknowns, cols = [], []
    for j in range(A.rank):
        coords = []
        for i in range(A.rank):
            p = Poly.zero()
            for k in range(max_deg + 1):
                u = next(names)
                unknowns.append(u)
                p = p + Poly.var(u) * D ** k
            coords.append(p)
        cols.append(LambdaElement(tuple(coords)))
    return ModuleMap(tuple(cols), A.rank, "T"), unknowns


def _generic_lambda_poly(max_deg: int, names, unknowns: List[str]) -> Poly:
    p = Poly.zero()
    for total in range(max_deg + 1):
        for i in range(total, -1, -1):
            u = next(names)
            unknowns.append(u)
            p = p + Poly.var(u) * D ** i * LAM ** (total - i)
    return p


def generic_product(A: LCA, max_deg: int, prefix: str = "u") -> Tuple[LambdaProduct, List[str]]:
    """Entries over monomials ``D**i lam**j`` with ``i + j <= max_deg``."""
    if max_deg < 0:
        raise ValueError("max_deg must be non-negative")
    names = _fresh(prefix, 0)
    unknowns: List[str] = []
    table = []
    for i in range(A.rank):
        row = []
        for j in range(A.rank):
            row.append(LambdaElement(tuple(_generic_lambda_poly(max_deg, names, unknowns) for _ in range(A.rank))))
        table.append(tuple(row))
    return LambdaProduct("P", A.basis, A.params, tuple(table)), unknowns


def generic_conformal_map(A: LCA, max_deg: int, prefix: str = "u") -> Tuple[ConformalLinearMap, List[str]]:
    names = _fresh(prefix, 0)
    unknowns: List[str] = []
    cols = [LambdaElement(tuple(_generic_lambda_poly(max_deg, names, unknowns) for _ in range(A.rank)))
            for _ in range(A.rank)]
    return ConformalLinearMap(tuple(cols), "d"), unknowns


def _system(unknowns, residuals, params) -> ConstraintSystem:
    return ConstraintSystem(tuple(unknowns), tuple(extract_equations(residuals)), tuple(params)).nonzero()


def rb_constraints(A: LCA, T: ModuleMap, unknowns: Sequence[str], weight=1) -> ConstraintSystem:
    res = [rota_baxter_residual(A, T, weight, i, j) for i, j in product(range(A.rank), repeat=2)]
    return _system(unknowns, res, A.params)


def plca_constraints(A: LCA, P: LambdaProduct, unknowns: Sequence[str]) -> ConstraintSystem:
    g = [A.gen(i) for i in range(A.rank)]
    res = []
    for i, j, k in product(range(A.rank), repeat=3):
        res.append(derivation_identity(A, P, g[i], g[j], g[k]))
        res.append(associator_identity(A, P, g[i], g[j], g[k]))
    return _system(unknowns, res, A.params)


def derivation_constraints(A: LCA, d: ConformalLinearMap, unknowns: Sequence[str]) -> ConstraintSystem:
    res = [derivation_residual(A, d, i, j) for i, j in product(range(A.rank), repeat=2)]
    return _system(unknowns, res, A.params)


def instantiate_map(T: ModuleMap, branch: SolutionBranch, free_values: Mapping | None = None) -> ModuleMap:
    return T.subs(branch.full_substitution(dict(free_values or {})))


def instantiate_product(P: LambdaProduct, branch: SolutionBranch, free_values: Mapping | None = None) -> LambdaProduct:
    return P.subs(branch.full_substitution(dict(free_values or {})))


def _verified(branches, check, what):
    for b in branches:
        if b.status != "solved":
            continue
        rep = check(b)
        if not rep.ok:
            raise ClassificationError(f"{what} branch failed re-verification: {rep.dumps()}")
    return branches


def classify_rb(A: LCA, max_deg: int = 3, weight=1, max_branches: int = 512) -> List[SolutionBranch]:
    T, unknowns = generic_module_map(A, max_deg)
    branches = solve(rb_constraints(A, T, unknowns, weight), max_branches)
    return _verified(branches, lambda b: check_rota_baxter(A, instantiate_map(T, b), weight), "Rota-Baxter")


def classify_plca(A: LCA, max_deg: int = 4, max_branches: int = 512) -> List[SolutionBranch]:
    P, unknowns = generic_product(A, max_deg)
    branches = solve(plca_constraints(A, P, unknowns), max_branches)
    return _verified(branches, lambda b: check_plca(A, instantiate_product(P, b), include_algebra=False), "PLCA")


def classify_derivations(A: LCA, max_deg: int = 3) -> List[SolutionBranch]:
    """Conformal derivations with entries of total degree at most ``max_deg`` (a linear family)."""
    d, unknowns = generic_conformal_map(A, max_deg)
    branches = solve(derivation_constraints(A, d, unknowns))
    return _verified(branches, lambda b: check_derivation(A, d.subs(b.full_substitution())), "derivation")


def _project(b: SolutionBranch, unknowns: Sequence[str]) -> SolutionBranch:
    """Forget assignments of auxiliary unknowns."""
    keep = set(unknowns)
    assignments = tuple((k, v) for k, v in b.assignments if k in keep)
    used = set()
    for _, v in assignments:
        used |= v.variables()
    free = tuple(u for u in b.free if u in keep or u in used)
    return SolutionBranch(assignments, free, b.residual, b.status, b.assumptions)


def quotient_propagate(A: LCA, drop, quotient_branches: Sequence[SolutionBranch] | None = None,
                       max_deg: int = 3, weight=1, max_branches: int = 512) -> List[SolutionBranch]:
    """Rota-Baxter classification on ``A`` refined through the quotient by ``drop``.

    The operator is required to preserve the span of the dropped generators,
    so that it induces an operator on the quotient; the induced block is then
    constrained to each quotient branch in turn (quotient free unknowns are
    renamed with a ``qf_`` prefix and kept as unknowns).  With ``drop`` empty
    this is plain :func:`classify_rb`.
    """
    dropped = _indices(A, drop)
    if not dropped:
        return classify_rb(A, max_deg, weight, max_branches)
    Q = quotient_by_coordinates(A, dropped)
    keep = [i for i in range(A.rank) if i not in dropped]
    if quotient_branches is None:
        quotient_branches = classify_rb(Q, max_deg, weight, max_branches)
    TQ, q_unknowns = generic_module_map(Q, max_deg)
    rename = {u: "qf_" + u for u in q_unknowns}

    T, unknowns = generic_module_map(A, max_deg)
    base = rb_constraints(A, T, unknowns, weight)
    invariance = [T.entry(k, d) for d in dropped for k in keep]
    out: List[SolutionBranch] = []
    for qb in quotient_branches:
        if qb.status != "solved":
            out.append(qb)
            continue
        TQb = instantiate_map(TQ, qb)
        extra_unknowns = [rename[u] for u in qb.free]
        block = [T.entry(keep[a], keep[b]) - TQb.entry(a, b).rename(rename)
                 for a in range(len(keep)) for b in range(len(keep))]
        eqs = extract_equations([LambdaElement(tuple(block)), LambdaElement(tuple(invariance))], (PARTIAL,))
        sys = ConstraintSystem(tuple(unknowns) + tuple(extra_unknowns), tuple(eqs) + base.equations, A.params)
        out.extend(_project(b, unknowns) for b in solve(sys.nonzero(), max_branches))
    uniq = {}
    for b in out:
        uniq.setdefault(b.key(), b)
    branches = [uniq[k] for k in sorted(uniq)]
    return _verified(branches, lambda b: check_rota_baxter(A, instantiate_map(T, b), weight), "Rota-Baxter")
