"""Family-membership helpers shared by the classification tests."""

import sympy as sp

from confalg.ansatz import instantiate_map

import oracle


def entry_syms(cols_a, cols_b):
    """Coefficient equations (in D and lam) of the difference of two column lists."""
    eqs = []
    for ca, cb in zip(cols_a, cols_b):
        for x, y in zip(ca.coords, cb.coords):
            diff = sp.expand(oracle.from_poly(x) - oracle.from_poly(y))
            if diff != 0:
                eqs.extend(sp.Poly(diff, oracle.D, oracle.lam).coeffs())
    return eqs


def specialises(T, branch, target_cols):
    """Is there a choice of the branch's free unknowns turning T into the target columns?"""
    eqs = entry_syms(instantiate_map(T, branch).cols, target_cols)
    if not eqs:
        return True
    free = [sp.Symbol(u) for u in branch.free]
    return bool(free) and bool(sp.solve(eqs, free, dict=True))


def in_family(cols, family_cols, family_params):
    """Does a concrete operator lie in a family with free scalar parameters?"""
    eqs = entry_syms(cols, family_cols)
    if not eqs:
        return True
    syms = [sp.Symbol(p) for p in family_params]
    return bool(syms) and bool(sp.solve(eqs, syms, dict=True))
