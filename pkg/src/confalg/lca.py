"""Finite-rank Lie conformal algebras given by lambda-bracket tables.

A bracket table stores ``[e_i lam e_j]`` for every ordered pair of generators
as a :class:`LambdaElement` in ``D`` and ``lam``.  Brackets of arbitrary
elements are computed by sesquilinear extension::

    [f(D) e_i  x  g(D) e_j] = f(-x) g(D + x) [e_i x e_j]

where ``x`` is the output variable (or any polynomial, e.g. ``lam + mu``) and
every other lambda-type variable in the inputs is carried along as a scalar.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import factorial
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from .cmod import (
    LambdaElement,
    ModElement,
    SubmoduleBasis,
    coefficient_span,
    contains,
    hermite_form,
    unit,
    zero_element,
)
from .polyring import LAM, LAMBDA, MU, MU_, PARTIAL, RESERVED, D, Poly, as_poly

__all__ = [
    "LCA",
    "Witness",
    "CheckReport",
    "AxiomError",
    "make_lca",
    "sesquilinear",
    "skew_image",
    "bracket",
    "check_skew",
    "check_jacobi",
    "check_lca",
    "n_product",
    "virasoro",
    "current",
    "sl2_structure_constants",
    "check_lie_constants",
    "wb",
    "bq_truncated",
    "abelian",
    "quotient_by_coordinates",
    "ideal_product",
    "derived_series",
    "lower_central_series",
    "is_solvable",
    "is_nilpotent",
]

Table = Tuple[Tuple[LambdaElement, ...], ...]


class AxiomError(ValueError):
    """Raised when input data violates an axiom; carries a witness report."""

    def __init__(self, message: str, report: "CheckReport | None" = None):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class Witness:
    check: str
    generators: Tuple[str, ...]
    residual: LambdaElement
    names: Tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "check": self.check,
            "generators": list(self.generators),
            "residual": self.residual.format(self.names or None),
        }


@dataclass(frozen=True)
class CheckReport:
    witnesses: Tuple[Witness, ...] = ()

    @property
    def status(self) -> str:
        return "fail" if self.witnesses else "pass"

    @property
    def ok(self) -> bool:
        return not self.witnesses

    def __bool__(self) -> bool:
        return self.ok

    def __add__(self, other: "CheckReport") -> "CheckReport":
        return CheckReport(self.witnesses + other.witnesses)

    def by_check(self, name: str) -> List[Witness]:
        return [w for w in self.witnesses if w.check == name]

    def to_json(self) -> dict:
        return {"status": self.status, "witnesses": [w.to_json() for w in self.witnesses]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def _report(items: Iterable[Tuple[str, Sequence[str], LambdaElement]], names: Sequence[str]) -> CheckReport:
    return CheckReport(tuple(Witness(c, tuple(g), r, tuple(names)) for c, g, r in items if not r.is_zero()))


@dataclass(frozen=True, eq=False)
class LCA:
    """Lie conformal algebra of finite rank; ``table[i][j]`` is ``[e_i lam e_j]``."""

    name: str
    basis: Tuple[str, ...]
    params: Tuple[str, ...]
    table: Table
    _cache: Dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def index(self, name_or_index) -> int:
        if isinstance(name_or_index, int):
            return name_or_index
        return self.basis.index(name_or_index)

    def gen(self, i) -> ModElement:
        return unit(self.rank, self.index(i))

    def element(self, coeffs: Mapping) -> LambdaElement:
        """Build ``sum coeffs[name] * name`` from a name/index -> Poly mapping."""
        out = [Poly.zero()] * self.rank
        for k, v in coeffs.items():
            out[self.index(k)] = out[self.index(k)] + as_poly(v)
        return LambdaElement(tuple(out))

    def entry(self, i: int, j: int) -> LambdaElement:
        return self.table[i][j]

    def is_abelian(self) -> bool:
        return all(e.is_zero() for row in self.table for e in row)

    def is_parameter_free(self) -> bool:
        return all(not (e.variables() - RESERVED) for row in self.table for e in row)

    def same_table(self, other: "LCA") -> bool:
        return self.rank == other.rank and self.table == other.table

    def __eq__(self, other) -> bool:
        if not isinstance(other, LCA):
            return NotImplemented
        return self.basis == other.basis and self.table == other.table

    def __hash__(self) -> int:
        return hash((self.basis, self.table))

    def subs(self, values: Mapping[str, object]) -> "LCA":
        """Instantiate parameters."""
        vals = {k: as_poly(v) for k, v in values.items()}
        table = tuple(tuple(e.subs(vals) for e in row) for row in self.table)
        params = tuple(p for p in self.params if p not in vals)
        return LCA(self.name, self.basis, params, table)

    def dsl(self) -> str:
        lines = [f"algebra {self.name}"]
        if self.params:
            lines.append("params " + " ".join(self.params))
        lines.append("basis " + " ".join(self.basis))
        for i, j in product(range(self.rank), repeat=2):
            lines.append(f"bracket {self.basis[i]} {self.basis[j]} = {self.table[i][j].format(self.basis)}")
        return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------
# lambda calculus


def _out_poly(out) -> Tuple[Poly, str | None]:
    if isinstance(out, str):
        return Poly.var(out), out
    return as_poly(out), None


def sesquilinear(table: Table, x: LambdaElement, y: LambdaElement, out=LAMBDA, cache: Dict | None = None) -> LambdaElement:
    """Extend a generator table to arbitrary elements by sesquilinearity."""
    var_poly, var = _out_poly(out)
    if var is not None and (var in x.lambda_vars() or var in y.lambda_vars()):
        raise ValueError(f"output variable {var!r} already occurs in an argument")
    acc = [Poly.zero()] * len(table[0][0].coords) if table and table[0] else []
    left = [f.substitute(PARTIAL, -var_poly) if f else None for f in x.coords]
    right = [g.substitute(PARTIAL, D + var_poly) if g else None for g in y.coords]
    key = str(var_poly)
    for i, fl in enumerate(left):
        if fl is None:
            continue
        for j, gr in enumerate(right):
            if gr is None:
                continue
            entry = table[i][j]
            if entry.is_zero():
                continue
            if cache is not None:
                ck = (i, j, key)
                shifted = cache.get(ck)
                if shifted is None:
                    shifted = entry.substitute(LAMBDA, var_poly)
                    cache[ck] = shifted
            else:
                shifted = entry.substitute(LAMBDA, var_poly)
            s = fl * gr
            for k, t in enumerate(shifted.coords):
                if t:
                    acc[k] = acc[k] + s * t
    return LambdaElement(tuple(acc))


def bracket(A: LCA, x: LambdaElement, y: LambdaElement, out=LAMBDA) -> LambdaElement:
    """``[x out y]`` in ``A``; ``out`` is a variable name or a polynomial."""
    if x.rank != A.rank or y.rank != A.rank:
        raise ValueError("rank mismatch")
    return sesquilinear(A.table, x, y, out, A._cache)


def skew_image(v: LambdaElement, var: str = LAMBDA) -> LambdaElement:
    """Substitute ``var -> -D - var`` (D acting on the output coordinates)."""
    return v.substitute(var, -D - Poly.var(var))


def _names(A, idx) -> Tuple[str, ...]:
    return tuple(A.basis[i] for i in idx)


def check_skew(A: LCA) -> CheckReport:
    items = []
    for i in range(A.rank):
        for j in range(i, A.rank):
            r = A.table[i][j] + skew_image(A.table[j][i])
            items.append(("skew", _names(A, (i, j)), r))
    return _report(items, A.basis)


def jacobi_residual(A: LCA, i: int, j: int, k: int) -> LambdaElement:
    ei, ej, ek = A.gen(i), A.gen(j), A.gen(k)
    t1 = bracket(A, ei, bracket(A, ej, ek, MU), LAMBDA)
    t2 = bracket(A, ej, bracket(A, ei, ek, LAMBDA), MU)
    t3 = bracket(A, A.table[i][j], ek, LAM + MU_)
    return t1 - t2 - t3


def check_jacobi(A: LCA) -> CheckReport:
    items = []
    for i, j, k in product(range(A.rank), repeat=3):
        items.append(("jacobi", _names(A, (i, j, k)), jacobi_residual(A, i, j, k)))
    return _report(items, A.basis)


def check_lca(A: LCA) -> CheckReport:
    return check_skew(A) + check_jacobi(A)


def n_product(A: LCA, x: LambdaElement, y: LambdaElement, n: int) -> ModElement:
    """``x_(n) y``: ``n!`` times the coefficient of ``lam**n`` in ``[x lam y]``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    v = bracket(A, x, y, LAMBDA)
    return ModElement(tuple(c.coefficient(LAMBDA, n) * factorial(n) for c in v.coords))


# ----------------------------------------------------------------------
# construction


def _as_element(value, basis: Sequence[str]) -> LambdaElement:
    if isinstance(value, LambdaElement):
        return value
    if isinstance(value, Mapping):
        out = [Poly.zero()] * len(basis)
        for k, v in value.items():
            idx = k if isinstance(k, int) else basis.index(k)
            out[idx] = out[idx] + as_poly(v)
        return LambdaElement(tuple(out))
    if value == 0:
        return zero_element(len(basis))
    return LambdaElement(tuple(value))


def make_lca(basis_names: Sequence[str], params: Sequence[str] = (), partial_table: Mapping | None = None,
             name: str = "A") -> LCA:
    """Build an LCA, completing missing ordered pairs by skew-symmetry.

    ``partial_table`` maps ``(i, j)`` (indices or basis names) to the value of
    ``[e_i lam e_j]`` as a :class:`LambdaElement`, a name -> Poly mapping, or 0.
    Pairs absent in both orders are zero.  If both orders are given they must
    agree; diagonal entries must be self-consistent.
    """
    basis = tuple(basis_names)
    n = len(basis)
    allowed = {PARTIAL, LAMBDA} | set(params)
    given: Dict[Tuple[int, int], LambdaElement] = {}
    for (a, b), v in (partial_table or {}).items():
        i = a if isinstance(a, int) else basis.index(a)
        j = b if isinstance(b, int) else basis.index(b)
        e = _as_element(v, basis)
        if e.rank != n:
            raise ValueError(f"bracket ({basis[i]}, {basis[j]}) has rank {e.rank}, expected {n}")
        extra = e.variables() - allowed
        if extra:
            raise ValueError(f"bracket ({basis[i]}, {basis[j]}) uses undeclared variables {sorted(extra)}")
        given[(i, j)] = e

    table = [[None] * n for _ in range(n)]
    bad = []
    for i in range(n):
        for j in range(i, n):
            a, b = given.get((i, j)), given.get((j, i))
            if a is None and b is None:
                a = b = zero_element(n)
            elif a is None:
                a = -skew_image(b)
            elif b is None:
                b = -skew_image(a)
            r = a + skew_image(b)
            if not r.is_zero():
                bad.append(("skew", (basis[i], basis[j]), r))
            table[i][j] = a
            table[j][i] = b
    if bad:
        rep = _report(bad, basis)
        raise AxiomError("bracket table is inconsistent with skew-symmetry", rep)
    return LCA(name, basis, tuple(params), tuple(tuple(r) for r in table))


def abelian(rank: int, name: str = "Ab", basis: Sequence[str] | None = None) -> LCA:
    basis = tuple(basis or [f"e{i}" for i in range(rank)])
    return make_lca(basis, (), {}, name=name)


def virasoro() -> LCA:
    return make_lca(["L"], (), {("L", "L"): {"L": D + 2 * LAM}}, name="Vir")


def _param(value, default_name: str) -> Tuple[Poly, Tuple[str, ...]]:
    if isinstance(value, str):
        return Poly.var(value), (value,)
    p = as_poly(value)
    return p, tuple(sorted(p.variables()))


def wb(b="b") -> LCA:
    """W(b): rank 2 with generators L, H."""
    bp, params = _param(b, "b")
    table = {
        ("L", "L"): {"L": D + 2 * LAM},
        ("L", "H"): {"H": D + (1 - bp) * LAM},
        ("H", "H"): 0,
    }
    label = str(bp) if bp.is_constant() else str(bp)
    return make_lca(["L", "H"], params, table, name=f"W({label})")


def bq_truncated(n: int, q="q") -> LCA:
    """Rank n+1 truncation of the Block-type algebra B(q), generators L0..Ln."""
    if n < 0:
        raise ValueError("n must be non-negative")
    qp, params = _param(q, "q")
    basis = [f"L{i}" for i in range(n + 1)]
    table = {}
    for i in range(n + 1):
        for j in range(n + 1):
            if i + j <= n:
                table[(i, j)] = {i + j: (i + qp) * D + (i + j + 2 * qp) * LAM}
            else:
                table[(i, j)] = 0
    return make_lca(basis, params, table, name=f"M{n}")


def sl2_structure_constants() -> Tuple[Tuple[str, ...], Dict[Tuple[int, int], Dict[int, Fraction]]]:
    """Basis (e, f, h) with [e,f]=h, [h,e]=2e, [h,f]=-2f."""
    c = {
        (0, 1): {2: 1}, (1, 0): {2: -1},
        (2, 0): {0: 2}, (0, 2): {0: -2},
        (2, 1): {1: -2}, (1, 2): {1: 2},
    }
    return ("e", "f", "h"), c


def _lie_vec(consts, dim, a, b):
    # [x, y] for coefficient vectors x, y
    out = [Fraction(0)] * dim
    for i in range(dim):
        if not a[i]:
            continue
        for j in range(dim):
            if not b[j]:
                continue
            for k, v in consts.get((i, j), {}).items():
                out[k] += a[i] * b[j] * Fraction(v)
    return out


def check_lie_constants(dim: int, consts) -> List[str]:
    """Problems with antisymmetry and the Jacobi identity of finite Lie constants."""
    problems = []
    basis = [[Fraction(int(i == k)) for k in range(dim)] for i in range(dim)]
    for i in range(dim):
        for j in range(dim):
            s = [x + y for x, y in zip(_lie_vec(consts, dim, basis[i], basis[j]),
                                       _lie_vec(consts, dim, basis[j], basis[i]))]
            if any(s):
                problems.append(f"antisymmetry fails on ({i}, {j})")
    for i, j, k in product(range(dim), repeat=3):
        x, y, z = basis[i], basis[j], basis[k]
        t = [sum(v) for v in zip(
            _lie_vec(consts, dim, x, _lie_vec(consts, dim, y, z)),
            _lie_vec(consts, dim, y, _lie_vec(consts, dim, z, x)),
            _lie_vec(consts, dim, z, _lie_vec(consts, dim, x, y)))]
        if any(t):
            problems.append(f"Jacobi fails on ({i}, {j}, {k})")
    return problems


def current(dim: int, lie_structure_constants, names: Sequence[str] | None = None, name: str = "Cur") -> LCA:
    """Current algebra over a Lie algebra with constants ``{(i, j): {k: c}}``."""
    problems = check_lie_constants(dim, lie_structure_constants)
    if problems:
        raise ValueError("invalid Lie structure constants: " + "; ".join(problems))
    basis = tuple(names or [f"a{i}" for i in range(dim)])
    table = {}
    for i in range(dim):
        for j in range(dim):
            table[(i, j)] = {k: Poly.const(Fraction(v)) for k, v in lie_structure_constants.get((i, j), {}).items()}
    return make_lca(basis, (), table, name=name)


# ----------------------------------------------------------------------
# quotients and series


def _indices(A: LCA, drop) -> List[int]:
    return sorted({A.index(d) for d in drop})


def quotient_by_coordinates(A: LCA, drop) -> LCA:
    """Quotient by the C[D]-span of the generators in ``drop``.

    The span must be an ideal; otherwise :class:`AxiomError` is raised with the
    offending brackets as witnesses.
    """
    dropped = _indices(A, drop)
    keep = [i for i in range(A.rank) if i not in dropped]
    bad = []
    for d in dropped:
        for j in range(A.rank):
            for (a, b) in ((d, j), (j, d)):
                e = A.table[a][b]
                leak = LambdaElement(tuple(e.coords[k] if k in keep else Poly.zero() for k in range(A.rank)))
                if not leak.is_zero():
                    bad.append(("ideal", (A.basis[a], A.basis[b]), leak))
    if bad:
        raise AxiomError("dropped generators do not span an ideal", _report(bad, A.basis))
    table = tuple(tuple(LambdaElement(tuple(A.table[i][j].coords[k] for k in keep)) for j in keep) for i in keep)
    label = A.name if not dropped else f"{A.name}/<{','.join(A.basis[d] for d in dropped)}>"
    return LCA(label, tuple(A.basis[i] for i in keep), A.params, table)


def _require_parameter_free(A: LCA):
    if not A.is_parameter_free():
        raise ValueError(f"{A.name}: parameters must be instantiated for submodule computations")


def ideal_product(A: LCA, I: SubmoduleBasis, J: SubmoduleBasis) -> SubmoduleBasis:
    """``[I . J]``: span of the lambda-coefficients of brackets of generators."""
    _require_parameter_free(A)
    gens = []
    for g in I.generators():
        for h in J.generators():
            gens.extend(coefficient_span(bracket(A, g, h, LAMBDA)))
    return hermite_form(gens, rank=A.rank)


def derived_series(A: LCA, depth: int = 8) -> List[SubmoduleBasis]:
    """``[R^[1], ..., R^[depth]]`` with ``R^[k+1] = [R^[k] . R^[k]]``."""
    _require_parameter_free(A)
    cur = SubmoduleBasis.full(A.rank)
    out = [cur]
    for _ in range(depth - 1):
        cur = ideal_product(A, cur, cur)
        out.append(cur)
    return out


def lower_central_series(A: LCA, depth: int = 8) -> List[SubmoduleBasis]:
    """``[R^1, ..., R^depth]`` with ``R^(k+1) = [R^k . R]``."""
    _require_parameter_free(A)
    full = SubmoduleBasis.full(A.rank)
    cur = full
    out = [cur]
    for _ in range(depth - 1):
        cur = ideal_product(A, cur, full)
        out.append(cur)
    return out


def _series_verdict(series: List[SubmoduleBasis]) -> str:
    # "yes": reached zero; "no": stabilised at a nonzero submodule;
    # "indeterminate": neither happened within the depth bound
    for k, s in enumerate(series):
        if s.is_zero():
            return "yes"
        if k and s == series[k - 1]:
            return "no"
    return "indeterminate"


def is_solvable(A: LCA, depth: int = 8) -> str:
    return _series_verdict(derived_series(A, depth))


def is_nilpotent(A: LCA, depth: int = 8) -> str:
    return _series_verdict(lower_central_series(A, depth))


def is_ideal(A: LCA, I: SubmoduleBasis) -> bool:
    return all(contains(I, g) for g in ideal_product(A, I, SubmoduleBasis.full(A.rank)).generators())
