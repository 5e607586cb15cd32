"""Free C[D]-modules: elements, lambda-valued elements and submodules.

Submodule arithmetic works over the principal ideal domain Q[D] and therefore
requires parameter-free coordinates.  Submodules are stored in Hermite normal
form (row echelon, monic pivots, entries above a pivot reduced modulo it), so
equality of submodules is equality of the stored rows.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

from .polyring import LAMBDA_VARS, PARTIAL, Poly, as_poly

__all__ = [
    "LambdaElement",
    "ModElement",
    "SubmoduleBasis",
    "coefficient_span",
    "hermite_form",
    "contains",
    "submodule_sum",
    "submodule_equal",
    "unit",
    "zero_element",
]


@dataclass(frozen=True)
class LambdaElement:
    """A vector over the algebra basis whose coordinates are polynomials.

    Coordinates may depend on ``D`` (acting on the basis vector), on the
    lambda-type variables and on parameters.
    """

    coords: Tuple[Poly, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(as_poly(c) for c in self.coords))

    @property
    def rank(self) -> int:
        return len(self.coords)

    def lambda_vars(self) -> frozenset:
        used = set()
        for c in self.coords:
            used |= c.variables() & LAMBDA_VARS
        return frozenset(used)

    def variables(self) -> frozenset:
        out = set()
        for c in self.coords:
            out |= c.variables()
        return frozenset(out)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coords)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def _check(self, other: "LambdaElement"):
        if other.rank != self.rank:
            raise ValueError(f"rank mismatch: {self.rank} vs {other.rank}")

    def __add__(self, other: "LambdaElement") -> "LambdaElement":
        self._check(other)
        return LambdaElement(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "LambdaElement") -> "LambdaElement":
        self._check(other)
        return LambdaElement(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "LambdaElement":
        return LambdaElement(tuple(-a for a in self.coords))

    def scale(self, p) -> "LambdaElement":
        p = as_poly(p)
        return LambdaElement(tuple(p * a for a in self.coords))

    def __rmul__(self, p) -> "LambdaElement":
        return self.scale(p)

    def substitute(self, var: str, r) -> "LambdaElement":
        return LambdaElement(tuple(c.substitute(var, r) for c in self.coords))

    def subs(self, mapping) -> "LambdaElement":
        return LambdaElement(tuple(c.subs(mapping) for c in self.coords))

    def format(self, names: Sequence[str] | None = None) -> str:
        names = names or [f"e{i}" for i in range(self.rank)]
        parts = [f"({c}) {n}" for c, n in zip(self.coords, names) if c]
        return " + ".join(parts) if parts else "0"

    def __str__(self) -> str:
        return self.format()


class ModElement(LambdaElement):
    """Element of the free module itself: no lambda-type variable allowed."""

    def __post_init__(self):
        super().__post_init__()
        bad = self.lambda_vars()
        if bad:
            raise ValueError(f"module element may not contain {sorted(bad)}")


def unit(rank: int, i: int) -> ModElement:
    return ModElement(tuple(Poly.one() if k == i else Poly.zero() for k in range(rank)))


def zero_element(rank: int) -> LambdaElement:
    return LambdaElement(tuple(Poly.zero() for _ in range(rank)))


def coefficient_span(v: LambdaElement) -> List[ModElement]:
    """Coefficient vectors ``v_j`` of ``v = sum_j v_j * x**j`` for the single
    lambda-type variable ``x`` used by ``v``."""
    used = v.lambda_vars()
    if len(used) > 1:
        raise ValueError(f"element uses several lambda-type variables: {sorted(used)}")
    if v.is_zero():
        return []
    if not used:
        return [ModElement(v.coords)]
    (x,) = used
    deg = max(c.degree(x) for c in v.coords)
    return [ModElement(tuple(c.coefficient(x, k) for c in v.coords)) for k in range(deg + 1)]


# ----------------------------------------------------------------------
# dense univariate helpers over Q; a polynomial is a list, index = degree


def _to_u(p: Poly) -> List[Fraction]:
    extra = p.variables() - {PARTIAL}
    if extra:
        raise ValueError(f"submodule arithmetic needs parameter-free entries, found {sorted(extra)}")
    deg = p.degree(PARTIAL)
    out = [Fraction(0)] * (deg + 1)
    for m, c in p.terms.items():
        out[dict(m).get(PARTIAL, 0)] = c
    return out


def _from_u(a: List[Fraction]) -> Poly:
    return Poly({(((PARTIAL, k),) if k else ()): c for k, c in enumerate(a) if c})


def _trim(a: List[Fraction]) -> List[Fraction]:
    while a and not a[-1]:
        a.pop()
    return a


def _udeg(a: List[Fraction]) -> int:
    return len(a) - 1


def _usub_mul(a: List[Fraction], q: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    """a - q*b"""
    out = list(a) + [Fraction(0)] * max(0, len(q) + len(b) - 1 - len(a))
    for i, qi in enumerate(q):
        if qi:
            for j, bj in enumerate(b):
                out[i + j] -= qi * bj
    return _trim(out)


def _udivmod(a: List[Fraction], b: List[Fraction]):
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    lead = b[-1]
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        f = Fraction(a[-1]) / lead
        q[shift] = f
        for j, bj in enumerate(b):
            a[shift + j] -= f * bj
        _trim(a)
    return _trim(q), a


Row = List[List[Fraction]]


def _row_sub_mul(r: Row, q: List[Fraction], s: Row) -> Row:
    return [_usub_mul(a, q, b) for a, b in zip(r, s)]


def _row_zero(r: Row) -> bool:
    return all(not a for a in r)


@dataclass(frozen=True)
class SubmoduleBasis:
    """Finitely generated submodule of Q[D]^rank in Hermite normal form."""

    rank: int
    rows: Tuple[Tuple[Poly, ...], ...]

    def is_zero(self) -> bool:
        return not self.rows

    def generators(self) -> List[ModElement]:
        return [ModElement(r) for r in self.rows]

    def contains(self, x: LambdaElement) -> bool:
        return contains(self, x)

    def to_json(self) -> list:
        return [[str(c) for c in r] for r in self.rows]

    def format(self, names: Sequence[str] | None = None) -> str:
        if not self.rows:
            return "0"
        return "<" + ", ".join(ModElement(r).format(names) for r in self.rows) + ">"

    @classmethod
    def full(cls, rank: int) -> "SubmoduleBasis":
        return hermite_form([ModElement(tuple(Poly.one() if k == i else Poly.zero() for k in range(rank)))
                             for i in range(rank)], rank=rank)


def hermite_form(generators: Iterable[LambdaElement], rank: int | None = None) -> SubmoduleBasis:
    """Canonical basis of the Q[D]-span of ``generators``."""
    gens = list(generators)
    if rank is None:
        if not gens:
            raise ValueError("rank is required for an empty generator list")
        rank = gens[0].rank
    rows: List[Row] = []
    for g in gens:
        if g.rank != rank:
            raise ValueError(f"rank mismatch: {g.rank} vs {rank}")
        r = [_trim(_to_u(c)) for c in g.coords]
        if not _row_zero(r):
            rows.append(r)

    pivots: List[Tuple[int, Row]] = []
    remaining = rows
    for col in range(rank):
        active = [r for r in remaining if r[col]]
        others = [r for r in remaining if not r[col]]
        while len(active) > 1:
            active.sort(key=lambda r: _udeg(r[col]))
            piv = active[0]
            nxt = [piv]
            for r in active[1:]:
                q, _ = _udivmod(r[col], piv[col])
                r2 = _row_sub_mul(r, q, piv)
                if r2[col]:
                    nxt.append(r2)
                elif not _row_zero(r2):
                    others.append(r2)
            active = nxt
        if active:
            piv = active[0]
            lead = piv[col][-1]
            piv = [[Fraction(c) / lead for c in a] for a in piv]
            pivots.append((col, piv))
        remaining = others

    # reduce entries above each pivot
    for idx, (col, piv) in enumerate(pivots):
        for k in range(idx):
            kc, kr = pivots[k]
            if kr[col]:
                q, _ = _udivmod(kr[col], piv[col])
                if q:
                    pivots[k] = (kc, _row_sub_mul(kr, q, piv))

    return SubmoduleBasis(rank, tuple(tuple(_from_u(a) for a in r) for _, r in pivots))


def contains(s: SubmoduleBasis, x: LambdaElement) -> bool:
    """Membership by successive division against the pivots."""
    if x.rank != s.rank:
        raise ValueError(f"rank mismatch: {x.rank} vs {s.rank}")
    cur = [_trim(_to_u(c)) for c in x.coords]
    for prow in s.rows:
        r = [_trim(_to_u(c)) for c in prow]
        col = next(i for i, a in enumerate(r) if a)
        if any(cur[i] for i in range(col)):
            return False
        if cur[col]:
            q, rem = _udivmod(cur[col], r[col])
            if rem:
                return False
            cur = _row_sub_mul(cur, q, r)
    return _row_zero(cur)


def submodule_sum(s: SubmoduleBasis, t: SubmoduleBasis) -> SubmoduleBasis:
    if s.rank != t.rank:
        raise ValueError(f"rank mismatch: {s.rank} vs {t.rank}")
    return hermite_form(s.generators() + t.generators(), rank=s.rank)


def submodule_equal(s: SubmoduleBasis, t: SubmoduleBasis) -> bool:
    if s.rank != t.rank:
        raise ValueError(f"rank mismatch: {s.rank} vs {t.rank}")
    return s.rows == t.rows
