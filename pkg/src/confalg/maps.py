"""C[D]-linear maps and conformal linear maps on a Lie conformal algebra.

Maps are stored by columns: ``cols[j]`` is the image of the generator ``e_j``
in coordinates.  A :class:`ModuleMap` commutes with multiplication by
polynomials in ``D`` and treats every lambda-type variable as a scalar.  A
:class:`ConformalLinearMap` has columns in ``D`` and ``lam`` and acts by
``d_x(p(D) e_k) = p(D + x) d_x(e_k)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import List, Mapping, Optional, Sequence, Tuple

from .cmod import LambdaElement, ModElement, unit, zero_element
from .lca import LCA, AxiomError, CheckReport, _report, bracket, _indices
from .polyring import LAM, LAMBDA, MU, MU_, PARTIAL, D, Poly, as_poly
from .solver import ConstraintSystem, solve

__all__ = [
    "ModuleMap",
    "ConformalLinearMap",
    "apply_module_map",
    "t_prime",
    "identity_map",
    "zero_map",
    "diagonal_map",
    "check_derivation",
    "ad",
    "find_inner_representative",
    "center",
    "has_trivial_center",
    "check_rota_baxter",
    "rota_baxter_residual",
    "induced_on_quotient",
    "BasisChange",
    "extract_equations",
]


def _col_from(value, basis: Sequence[str]) -> LambdaElement:
    if isinstance(value, LambdaElement):
        return value
    out = [Poly.zero()] * len(basis)
    if isinstance(value, Mapping):
        for k, v in value.items():
            idx = k if isinstance(k, int) else basis.index(k)
            out[idx] = out[idx] + as_poly(v)
        return LambdaElement(tuple(out))
    if value == 0:
        return LambdaElement(tuple(out))
    return LambdaElement(tuple(value))


@dataclass(frozen=True)
class ModuleMap:
    """C[D]-linear endomorphism (or map between free modules) by columns."""

    cols: Tuple[LambdaElement, ...]
    target_rank: int | None = None
    name: str = "T"

    def __post_init__(self):
        cols = tuple(LambdaElement(tuple(c.coords)) for c in self.cols)
        object.__setattr__(self, "cols", cols)
        tr = self.target_rank if self.target_rank is not None else len(cols)
        object.__setattr__(self, "target_rank", tr)
        for c in cols:
            if c.rank != tr:
                raise ValueError(f"column rank {c.rank} does not match target rank {tr}")
            if c.lambda_vars():
                raise ValueError("module map entries may not contain lambda-type variables")

    @classmethod
    def from_columns(cls, basis: Sequence[str], columns: Mapping, name: str = "T",
                     target_basis: Sequence[str] | None = None) -> "ModuleMap":
        tb = list(target_basis or basis)
        cols = []
        for j, b in enumerate(basis):
            v = columns.get(b, columns.get(j, 0))
            cols.append(_col_from(v, tb))
        return cls(tuple(cols), len(tb), name)

    @property
    def rank(self) -> int:
        return len(self.cols)

    def entry(self, i: int, j: int) -> Poly:
        return self.cols[j].coords[i]

    def variables(self) -> frozenset:
        out = set()
        for c in self.cols:
            out |= c.variables()
        return frozenset(out)

    def __call__(self, x: LambdaElement) -> LambdaElement:
        return apply_module_map(self, x)

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(tuple(a + b for a, b in zip(self.cols, other.cols)), self.target_rank, self.name)

    def __sub__(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(tuple(a - b for a, b in zip(self.cols, other.cols)), self.target_rank, self.name)

    def __neg__(self) -> "ModuleMap":
        return ModuleMap(tuple(-a for a in self.cols), self.target_rank, self.name)

    def scale(self, p) -> "ModuleMap":
        return ModuleMap(tuple(a.scale(p) for a in self.cols), self.target_rank, self.name)

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """``self o other``."""
        return ModuleMap(tuple(self(c) for c in other.cols), self.target_rank, self.name)

    def subs(self, values: Mapping[str, object]) -> "ModuleMap":
        vals = {k: as_poly(v) for k, v in values.items()}
        return ModuleMap(tuple(c.subs(vals) for c in self.cols), self.target_rank, self.name)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.cols)

    def format(self, basis: Sequence[str], target_basis: Sequence[str] | None = None) -> List[str]:
        tb = target_basis or basis
        return [f"{self.name}({b}) = {c.format(tb)}" for b, c in zip(basis, self.cols)]

    def dsl(self, basis: Sequence[str], params: Sequence[str] = ()) -> str:
        lines = [f"map {self.name}"]
        if params:
            lines.append("params " + " ".join(params))
        lines += [f"T {b} = {c.format(basis)}" for b, c in zip(basis, self.cols)]
        return "\n".join(lines) + "\n"


def identity_map(rank: int) -> ModuleMap:
    return ModuleMap(tuple(unit(rank, j) for j in range(rank)), rank, "id")


def zero_map(rank: int, target_rank: int | None = None) -> ModuleMap:
    tr = rank if target_rank is None else target_rank
    return ModuleMap(tuple(zero_element(tr) for _ in range(rank)), tr, "0")


def diagonal_map(entries: Sequence) -> ModuleMap:
    n = len(entries)
    return ModuleMap(tuple(unit(n, j).scale(as_poly(e)) for j, e in enumerate(entries)), n)


def apply_module_map(T: ModuleMap, x: LambdaElement) -> LambdaElement:
    if x.rank != T.rank:
        raise ValueError(f"rank mismatch: map has rank {T.rank}, element {x.rank}")
    acc = [Poly.zero()] * T.target_rank
    for xj, col in zip(x.coords, T.cols):
        if not xj:
            continue
        for i, t in enumerate(col.coords):
            if t:
                acc[i] = acc[i] + xj * t
    return LambdaElement(tuple(acc))


def t_prime(T: ModuleMap) -> ModuleMap:
    """``-T - id``."""
    if T.target_rank != T.rank:
        raise ValueError("t_prime needs an endomorphism")
    out = -T - identity_map(T.rank)
    return ModuleMap(out.cols, T.rank, T.name + "'")


# ----------------------------------------------------------------------
# Rota-Baxter operators


def rota_baxter_residual(A: LCA, T: ModuleMap, weight, i: int, j: int) -> LambdaElement:
    h = as_poly(weight)
    ei, ej = A.gen(i), A.gen(j)
    ti, tj = T.cols[i], T.cols[j]
    lhs = bracket(A, ti, tj)
    inner = bracket(A, ti, ej) + bracket(A, ei, tj) + A.table[i][j].scale(h)
    return lhs - T(inner)


def check_rota_baxter(A: LCA, T: ModuleMap, weight=1) -> CheckReport:
    if T.rank != A.rank or T.target_rank != A.rank:
        raise ValueError("rank mismatch")
    items = [("rota_baxter", (A.basis[i], A.basis[j]), rota_baxter_residual(A, T, weight, i, j))
             for i, j in product(range(A.rank), repeat=2)]
    return _report(items, A.basis)


def induced_on_quotient(A: LCA, T: ModuleMap, drop) -> ModuleMap:
    """Operator induced on ``A / span(drop)``; T must preserve the span."""
    dropped = _indices(A, drop)
    keep = [i for i in range(A.rank) if i not in dropped]
    bad = []
    for d in dropped:
        leak = LambdaElement(tuple(c if k in keep else Poly.zero() for k, c in enumerate(T.cols[d].coords)))
        if not leak.is_zero():
            bad.append(("invariance", (A.basis[d],), leak))
    if bad:
        raise AxiomError("operator does not preserve the dropped span", _report(bad, A.basis))
    cols = tuple(LambdaElement(tuple(T.cols[j].coords[k] for k in keep)) for j in keep)
    return ModuleMap(cols, len(keep), T.name)


# ----------------------------------------------------------------------
# conformal linear maps and derivations


@dataclass(frozen=True)
class ConformalLinearMap:
    """Columns ``d_lam(e_j)`` with entries in D, lam and parameters."""

    cols: Tuple[LambdaElement, ...]
    name: str = "d"

    def __post_init__(self):
        object.__setattr__(self, "cols", tuple(LambdaElement(tuple(c.coords)) for c in self.cols))
        for c in self.cols:
            extra = c.lambda_vars() - {LAMBDA}
            if extra:
                raise ValueError(f"conformal map entries may only use lam, found {sorted(extra)}")

    @classmethod
    def from_columns(cls, basis: Sequence[str], columns: Mapping, name: str = "d") -> "ConformalLinearMap":
        return cls(tuple(_col_from(columns.get(b, columns.get(j, 0)), basis) for j, b in enumerate(basis)), name)

    @property
    def rank(self) -> int:
        return len(self.cols)

    def apply(self, x: LambdaElement, var: str = LAMBDA) -> LambdaElement:
        """``d_var(x)``; other lambda-type variables of ``x`` act as scalars."""
        if var in x.lambda_vars():
            raise ValueError(f"variable {var!r} already occurs in the argument")
        v = Poly.var(var)
        cols = self.cols if var == LAMBDA else tuple(c.substitute(LAMBDA, v) for c in self.cols)
        acc = [Poly.zero()] * self.rank
        for xk, col in zip(x.coords, cols):
            if not xk:
                continue
            s = xk.substitute(PARTIAL, D + v)
            for i, t in enumerate(col.coords):
                if t:
                    acc[i] = acc[i] + s * t
        return LambdaElement(tuple(acc))

    def __sub__(self, other: "ConformalLinearMap") -> "ConformalLinearMap":
        return ConformalLinearMap(tuple(a - b for a, b in zip(self.cols, other.cols)), self.name)

    def __add__(self, other: "ConformalLinearMap") -> "ConformalLinearMap":
        return ConformalLinearMap(tuple(a + b for a, b in zip(self.cols, other.cols)), self.name)

    def subs(self, values: Mapping[str, object]) -> "ConformalLinearMap":
        vals = {k: as_poly(v) for k, v in values.items()}
        return ConformalLinearMap(tuple(c.subs(vals) for c in self.cols), self.name)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.cols)

    def variables(self) -> frozenset:
        out = set()
        for c in self.cols:
            out |= c.variables()
        return frozenset(out)

    def format(self, basis: Sequence[str]) -> List[str]:
        return [f"{self.name}_lam({b}) = {c.format(basis)}" for b, c in zip(basis, self.cols)]


def derivation_residual(A: LCA, d: ConformalLinearMap, i: int, j: int) -> LambdaElement:
    ei, ej = A.gen(i), A.gen(j)
    lhs = d.apply(bracket(A, ei, ej, MU), LAMBDA)
    t1 = bracket(A, d.cols[i], ej, LAM + MU_)
    t2 = bracket(A, ei, d.cols[j], MU)
    return lhs - t1 - t2


def check_derivation(A: LCA, d: ConformalLinearMap) -> CheckReport:
    if d.rank != A.rank:
        raise ValueError("rank mismatch")
    items = [("derivation", (A.basis[i], A.basis[j]), derivation_residual(A, d, i, j))
             for i, j in product(range(A.rank), repeat=2)]
    return _report(items, A.basis)


def ad(A: LCA, a: LambdaElement) -> ConformalLinearMap:
    if a.lambda_vars():
        raise ValueError("ad needs an element without lambda-type variables")
    return ConformalLinearMap(tuple(bracket(A, a, A.gen(j), LAMBDA) for j in range(A.rank)), "ad")


def extract_equations(values: Sequence[LambdaElement], variables=(PARTIAL, LAMBDA, MU, "nu")) -> List[Poly]:
    """Coefficients in the structural variables of every coordinate."""
    eqs = []
    for v in values:
        for c in v.coords:
            if c:
                eqs.extend(x for _, x in sorted(c.coeff_extract(variables).items()) if x)
    return eqs


def _generic_element(rank: int, max_deg: int, prefix: str) -> Tuple[LambdaElement, List[str]]:
    names, coords = [], []
    for i in range(rank):
        p = Poly.zero()
        for k in range(max_deg + 1):
            n = f"{prefix}{i}_{k}"
            names.append(n)
            p = p + Poly.var(n) * D ** k
        coords.append(p)
    return LambdaElement(tuple(coords)), names


def _require_parameter_free(A: LCA, *objs):
    if not A.is_parameter_free():
        raise ValueError(f"{A.name}: parameters must be instantiated")
    for o in objs:
        if o.variables() - {PARTIAL, LAMBDA}:
            raise ValueError("map entries must be parameter-free")


def find_inner_representative(A: LCA, d: ConformalLinearMap, max_deg: int = 6) -> Optional[ModElement]:
    """Some ``a`` with ``ad(a) = d`` and coordinate degrees at most ``max_deg``."""
    _require_parameter_free(A, d)
    a, names = _generic_element(A.rank, max_deg, "x")
    eqs = extract_equations((ad(A, a) - d).cols)
    branches = [b for b in solve(ConstraintSystem(tuple(names), tuple(eqs))) if b.status == "solved"]
    if not branches:
        return None
    sub = branches[0].full_substitution({u: 0 for u in branches[0].free})
    return ModElement(tuple(c.subs(sub) for c in a.coords))


def center(A: LCA, max_deg: int = 6) -> List[ModElement]:
    """Q-basis of central elements with coordinate degrees at most ``max_deg``."""
    _require_parameter_free(A)
    a, names = _generic_element(A.rank, max_deg, "z")
    eqs = extract_equations(ad(A, a).cols)
    (branch,) = solve(ConstraintSystem(tuple(names), tuple(eqs)))
    out = []
    for f in branch.free:
        sub = branch.full_substitution({u: int(u == f) for u in branch.free})
        out.append(ModElement(tuple(c.subs(sub) for c in a.coords)))
    return out


def has_trivial_center(A: LCA, max_deg: int = 6) -> bool:
    return not center(A, max_deg)


# ----------------------------------------------------------------------
# basis changes


def _constant_inverse(M: List[List[Fraction]]) -> List[List[Fraction]]:
    n = len(M)
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(M)]
    for c in range(n):
        p = next((r for r in range(c, n) if aug[r][c]), None)
        if p is None:
            raise ValueError("matrix is not invertible")
        aug[c], aug[p] = aug[p], aug[c]
        piv = aug[c][c]
        aug[c] = [Fraction(x) / piv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c]:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return [r[n:] for r in aug]


@dataclass(frozen=True)
class BasisChange:
    """New generators ``e'_j = P(e_j)``; ``inverse`` expresses old in new."""

    forward: ModuleMap
    inverse: ModuleMap

    def __post_init__(self):
        n = self.forward.rank
        if self.forward.compose(self.inverse).cols != identity_map(n).cols or \
                self.inverse.compose(self.forward).cols != identity_map(n).cols:
            raise ValueError("basis change and its inverse do not compose to the identity")

    @classmethod
    def from_columns(cls, basis: Sequence[str], columns: Mapping, inverse_columns: Mapping | None = None) -> "BasisChange":
        """Without ``inverse_columns`` the columns must be D-free and the inverse is computed over Q."""
        P = ModuleMap.from_columns(basis, columns, "P")
        if inverse_columns is not None:
            return cls(P, ModuleMap.from_columns(basis, inverse_columns, "P^-1"))
        n = P.rank
        M = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                e = P.entry(i, j)
                if not e.is_constant():
                    raise ValueError("only constant basis changes can be inverted automatically")
                M[i][j] = e.constant_value()
        inv = _constant_inverse(M)
        Q = ModuleMap(tuple(LambdaElement(tuple(Poly.const(inv[i][j]) for i in range(n))) for j in range(n)), n, "P^-1")
        return cls(P, Q)

    def to_new(self, x: LambdaElement) -> LambdaElement:
        """Old coordinates to new coordinates."""
        return self.inverse(x)

    def to_old(self, x: LambdaElement) -> LambdaElement:
        return self.forward(x)

    def transform_table(self, pairing, rank: int) -> Tuple[Tuple[LambdaElement, ...], ...]:
        """New-basis table of a sesquilinear pairing ``(x, y) -> value``."""
        gens = self.forward.cols
        return tuple(tuple(self.to_new(pairing(gens[i], gens[j])) for j in range(rank)) for i in range(rank))

    def transform_lca(self, A: LCA, basis_names: Sequence[str] | None = None) -> LCA:
        table = self.transform_table(lambda x, y: bracket(A, x, y), A.rank)
        return LCA(A.name + "'", tuple(basis_names or A.basis), A.params, table)

    def transform_map(self, T: ModuleMap) -> ModuleMap:
        return self.inverse.compose(T).compose(self.forward)

    def subs(self, values: Mapping) -> "BasisChange":
        return BasisChange(self.forward.subs(values), self.inverse.subs(values))
