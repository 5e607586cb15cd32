"""Case-splitting solver for polynomial constraint systems in scalar unknowns.

The solver only applies a few exact reduction moves:

* eliminate an unknown that occurs linearly with a nonzero rational coefficient;
* split on the factors of an equation (factorisation over Q via sympy);
* zero an unknown when an equation is a constant multiple of a power of it;
* substitute every assignment into the remaining equations.

Factors depending on parameters only are assumed nonzero (generic parameters)
and recorded in the branch.  When nothing applies the branch is returned as
``unresolved`` together with the equations left over.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

import sympy

from .polyring import Poly

__all__ = ["ConstraintSystem", "SolutionBranch", "solve", "factor"]


@dataclass(frozen=True)
class ConstraintSystem:
    unknowns: Tuple[str, ...]
    equations: Tuple[Poly, ...]
    params: Tuple[str, ...] = ()

    def __post_init__(self):
        if len(set(self.unknowns)) != len(self.unknowns):
            raise ValueError("unknown names must be unique")
        clash = set(self.unknowns) & set(self.params)
        if clash:
            raise ValueError(f"unknowns clash with parameters: {sorted(clash)}")

    def nonzero(self) -> "ConstraintSystem":
        seen, eqs = set(), []
        for e in self.equations:
            if e and e not in seen:
                seen.add(e)
                eqs.append(e)
        return ConstraintSystem(self.unknowns, tuple(eqs), self.params)


@dataclass(frozen=True)
class SolutionBranch:
    assignments: Tuple[Tuple[str, Poly], ...]
    free: Tuple[str, ...]
    residual: Tuple[Poly, ...]
    status: str
    assumptions: Tuple[Poly, ...] = ()

    @property
    def solution(self) -> Dict[str, Poly]:
        return dict(self.assignments)

    def full_substitution(self, free_values: Dict[str, object] | None = None) -> Dict[str, Poly]:
        sub = dict(self.assignments)
        if free_values:
            fv = {k: Poly.const(v) if not isinstance(v, Poly) else v for k, v in free_values.items()}
            sub = {k: v.subs(fv) for k, v in sub.items()}
            sub.update(fv)
        return sub

    def key(self):
        return (
            self.status != "solved",
            tuple((k, str(v)) for k, v in self.assignments),
            self.free,
            tuple(str(r) for r in self.residual),
        )

    def to_json(self) -> dict:
        out = {
            "status": self.status,
            "assignments": {k: str(v) for k, v in self.assignments},
            "free": list(self.free),
            "residual": [str(r) for r in self.residual],
        }
        if self.assumptions:
            out["assumptions"] = [f"{a} != 0" for a in self.assumptions]
        return out


def branches_json(branches: Sequence[SolutionBranch]) -> str:
    return json.dumps({"branches": [b.to_json() for b in branches]}, indent=2, sort_keys=False)


# ----------------------------------------------------------------------
# sympy bridge, used only for factorisation


def _gens(p: Poly) -> List[str]:
    return sorted(p.variables())


def factor(p: Poly) -> Tuple[Fraction, List[Tuple[Poly, int]]]:
    """Factor over Q: ``p = c * prod(f**m)``."""
    names = _gens(p)
    if not names:
        return p.constant_value(), []
    syms = sympy.symbols(names)
    data = {}
    for m, c in p.terms.items():
        md = dict(m)
        data[tuple(md.get(n, 0) for n in names)] = sympy.Rational(c.numerator, c.denominator)
    sp = sympy.Poly.from_dict(data, *syms, domain=sympy.QQ)
    c, facs = sp.factor_list()
    out = []
    for f, mult in facs:
        terms = {}
        for exps, coeff in f.as_dict().items():
            mono = tuple((n, e) for n, e in zip(names, exps) if e)
            r = sympy.Rational(coeff)
            terms[mono] = Fraction(int(r.p), int(r.q))
        out.append((Poly(terms), int(mult)))
    cr = sympy.Rational(c)
    return Fraction(int(cr.p), int(cr.q)), out


# ----------------------------------------------------------------------
# branch state


@dataclass
class _State:
    assign: Dict[str, Poly]
    eqs: List[Poly]
    assumptions: List[Poly] = field(default_factory=list)


def _normalise(p: Poly) -> Poly:
    return p.monic() if p else p


def _eq_key(p: Poly):
    return (len(p.terms), p.degree(), str(p))


def _apply(state: _State, var: str, value: Poly):
    sub = {var: value}
    state.assign = {k: v.subs(sub) for k, v in state.assign.items()}
    state.assign[var] = value
    state.eqs = [e.subs(sub) for e in state.eqs]


def _linear_candidate(eq: Poly, unknowns: Sequence[str]):
    """Unknown occurring only linearly with a nonzero rational coefficient."""
    for u in reversed(unknowns):
        if eq.degree(u) != 1:
            continue
        c = eq.coefficient(u, 1)
        if c.is_constant():
            return u, c.constant_value(), eq.coefficient(u, 0)
    return None


def _split_params(p: Poly, unknown_set) -> bool:
    return not (p.variables() & unknown_set)


_FACTOR_CACHE: Dict[Poly, Tuple[Tuple[Poly, ...], Tuple[Poly, ...]]] = {}


def _factors(e: Poly, unknown_set):
    """(parameter-only factors, factors involving unknowns), all monic."""
    hit = _FACTOR_CACHE.get(e)
    if hit is None:
        _, facs = factor(e)
        ponly, rest = [], []
        for f, _m in facs:
            (ponly if _split_params(f, unknown_set) else rest).append(f.monic())
        hit = (tuple(ponly), tuple(rest))
        if len(_FACTOR_CACHE) < 100000:
            _FACTOR_CACHE[e] = hit
    return list(hit[0]), list(hit[1])


def _step(state: _State, unknowns: Sequence[str], unknown_set) -> Tuple[str, List[_State]]:
    """One reduction; returns (kind, children)."""
    # normalise and deduplicate
    eqs, seen = [], set()
    for e in state.eqs:
        if not e:
            continue
        if _split_params(e, unknown_set):
            # constant or parameter-only: impossible for generic parameters
            return "dead", []
        n = _normalise(e)
        if n not in seen:
            seen.add(n)
            eqs.append(n)
    eqs.sort(key=_eq_key)
    state.eqs = eqs
    if not eqs:
        return "done", [state]

    for e in eqs:
        cand = _linear_candidate(e, unknowns)
        if cand:
            u, c, rest = cand
            _apply(state, u, -rest / c)
            return "reduced", [state]

    for e in eqs:
        if len(e.terms) == 1:
            (mono, _), = e.terms.items()
            us = [v for v, _ in mono if v in unknown_set]
            ps = Poly({tuple((v, k) for v, k in mono if v not in unknown_set): 1})
            if ps.variables():
                state.assumptions.append(ps)
            if len(us) == 1:
                _apply(state, us[0], Poly.zero())
                return "reduced", [state]
            children = []
            for u in us:
                child = _State(dict(state.assign), list(state.eqs), list(state.assumptions))
                _apply(child, u, Poly.zero())
                children.append(child)
            return "split", children

    best = None
    for e in eqs:
        params_only, factors = _factors(e, unknown_set)
        if len(factors) == 1 and factors[0] != e:
            state.assumptions.extend(params_only)
            state.eqs = [factors[0] if x is e else x for x in state.eqs]
            return "reduced", [state]
        if len(factors) > 1:
            rank = (len(factors), sum(len(f.terms) for f in factors), _eq_key(e))
            if best is None or rank < best[0]:
                best = (rank, e, params_only, factors)
    if best is not None:
        _, e, params_only, factors = best
        state.assumptions.extend(params_only)
        children = []
        for f in factors:
            children.append(_State(dict(state.assign), [f] + [x for x in state.eqs if x is not e],
                                   list(state.assumptions)))
        return "split", children
    return "stuck", [state]


def solve(sys: ConstraintSystem, max_branches: int = 512) -> List[SolutionBranch]:
    unknowns = list(sys.unknowns)
    unknown_set = frozenset(unknowns)
    stack = [_State({}, list(sys.equations))]
    finished: List[SolutionBranch] = []
    created = 1
    seen = set()
    while stack:
        state = stack.pop()
        kind, children = _step(state, unknowns, unknown_set)
        if kind == "dead":
            continue
        if kind == "done" or kind == "stuck":
            finished.append(_finish(state, unknowns, "solved" if kind == "done" else "unresolved"))
            continue
        if kind == "split":
            fresh = []
            for child in children:
                k = _state_key(child)
                if k not in seen:
                    seen.add(k)
                    fresh.append(child)
            if created + len(fresh) - 1 > max_branches:
                finished.append(_finish(state, unknowns, "unresolved"))
                continue
            created += max(len(fresh) - 1, 0)
            # reversed so the first factor is explored first
            stack.extend(reversed(fresh))
            continue
        stack.append(children[0])
    return _canonical(finished)


def _state_key(state: _State):
    return (tuple(sorted((k, str(v)) for k, v in state.assign.items())),
            tuple(sorted(str(e.monic()) for e in state.eqs if e)))


def _finish(state: _State, unknowns: Sequence[str], status: str) -> SolutionBranch:
    order = {u: i for i, u in enumerate(unknowns)}
    assigned = sorted(state.assign, key=order.get)
    used = set()
    for v in state.assign.values():
        used |= v.variables()
    for e in state.eqs:
        used |= e.variables()
    free = tuple(u for u in unknowns if u not in state.assign)
    assumptions = tuple(sorted(set(state.assumptions), key=str))
    return SolutionBranch(
        tuple((u, state.assign[u]) for u in assigned),
        free,
        tuple(sorted((e for e in state.eqs if e), key=str)) if status != "solved" else (),
        status,
        assumptions,
    )


def _canonical(branches: List[SolutionBranch]) -> List[SolutionBranch]:
    uniq = {}
    for b in branches:
        uniq.setdefault(b.key(), b)
    return [uniq[k] for k in sorted(uniq)]
