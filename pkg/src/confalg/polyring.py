"""Exact sparse multivariate polynomials over the rationals.

The variable universe is the four reserved indeterminates ``D`` (the
derivation), ``lam``, ``mu``, ``nu`` (lambda-type variables) together with any
declared parameter names.  Every scalar in the library is a :class:`Poly`.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Tuple, Union

__all__ = [
    "Poly",
    "ParseError",
    "PARTIAL",
    "LAMBDA",
    "MU",
    "NU",
    "LAMBDA_VARS",
    "RESERVED",
    "D",
    "LAM",
    "MU_",
    "NU_",
    "poly_add",
    "poly_mul",
    "poly_neg",
    "substitute",
    "coeff_extract",
    "parse_poly",
    "as_poly",
]

PARTIAL = "D"
LAMBDA = "lam"
MU = "mu"
NU = "nu"
LAMBDA_VARS = frozenset({LAMBDA, MU, NU})
RESERVED = frozenset({PARTIAL, LAMBDA, MU, NU})

# A monomial is a tuple of (variable, exponent) pairs sorted by variable name.
Monomial = Tuple[Tuple[str, int], ...]
Scalar = Union[int, Fraction]

_ONE: Monomial = ()


def _coef(c) -> Scalar:
    """Canonical coefficient: a plain int when integral, otherwise a Fraction."""
    if type(c) is int:
        return c
    f = c if isinstance(c, Fraction) else Fraction(c)
    return f.numerator if f.denominator == 1 else f


# products of monomials recur constantly inside bracket expansions
_MONO_CACHE: Dict[Tuple[Monomial, Monomial], Monomial] = {}
# so do the D -> D + lam style substitutions; keys are (poly, var, replacement)
_SUBS_CACHE: Dict[tuple, "Poly"] = {}


def _var_rank(name: str) -> tuple:
    # printing order: D < lam < mu < nu < parameters alphabetically
    order = {PARTIAL: 0, LAMBDA: 1, MU: 2, NU: 3}
    return (order.get(name, 4), name)


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        va, ea = a[i]
        vb, eb = b[j]
        if va == vb:
            out.append((va, ea + eb))
            i += 1
            j += 1
        elif va < vb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


class Poly:
    """Immutable polynomial with exact rational coefficients.

    Integral coefficients are stored as ``int`` and the rest as
    :class:`fractions.Fraction`.  Zero coefficients are never stored, so two
    polynomials are equal exactly when their term maps are equal.
    """

    __slots__ = ("_terms", "_hash", "_vars")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        clean: Dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                if c:
                    clean[m] = _coef(c)
        self._terms = clean
        self._hash = None
        self._vars = None

    @classmethod
    def _raw(cls, terms: Dict[Monomial, Fraction]) -> "Poly":
        # caller guarantees no zero coefficients
        p = object.__new__(cls)
        p._terms = terms
        p._hash = None
        p._vars = None
        return p

    @classmethod
    def const(cls, c: Scalar) -> "Poly":
        return cls._raw({_ONE: _coef(c)} if c else {})

    @classmethod
    def var(cls, name: str) -> "Poly":
        return cls._raw({((name, 1),): 1})

    @classmethod
    def zero(cls) -> "Poly":
        return cls._raw({})

    @classmethod
    def one(cls) -> "Poly":
        return cls._raw({_ONE: 1})

    # ------------------------------------------------------------------
    # inspection

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and _ONE in self._terms)

    def constant_value(self) -> Fraction:
        """Coefficient of the empty monomial."""
        return self._terms.get(_ONE, Fraction(0))

    def variables(self) -> frozenset:
        if self._vars is None:
            self._vars = frozenset(v for m in self._terms for v, _ in m)
        return self._vars

    def degree(self, var: str | None = None) -> int:
        """Degree in ``var`` (total degree when ``var`` is None); -1 for zero."""
        if not self._terms:
            return -1
        if var is None:
            return max(sum(e for _, e in m) for m in self._terms)
        return max(dict(m).get(var, 0) for m in self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[Tuple[Monomial, Fraction]]:
        return iter(sorted(self._terms.items(), key=lambda t: _print_key(t[0])))

    # ------------------------------------------------------------------
    # arithmetic

    def __add__(self, other) -> "Poly":
        other = as_poly(other)
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s += c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-as_poly(other))

    def __rsub__(self, other) -> "Poly":
        return as_poly(other) + (-self)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            if not other:
                return Poly.zero()
            f = _coef(other)
            return Poly._raw({m: c * f for m, c in self._terms.items()})
        other = as_poly(other)
        if not self._terms or not other._terms:
            return Poly.zero()
        if len(other._terms) == 1 and _ONE in other._terms:
            return self * other._terms[_ONE]
        if len(self._terms) == 1 and _ONE in self._terms:
            return other * self._terms[_ONE]
        out: Dict[Monomial, Fraction] = {}
        cache = _MONO_CACHE
        if len(cache) > 200_000:
            cache.clear()
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                m = cache.get((ma, mb))
                if m is None:
                    m = cache[(ma, mb)] = _mono_mul(ma, mb)
                s = out.get(m)
                out[m] = ca * cb if s is None else s + ca * cb
        return Poly._raw({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other: Scalar) -> "Poly":
        # only division by a nonzero rational is supported
        if isinstance(other, Poly):
            if not other.is_constant() or not other:
                raise ZeroDivisionError("division by a non-constant or zero polynomial")
            other = other.constant_value()
        f = Fraction(other)
        if not f:
            raise ZeroDivisionError("division by zero")
        return Poly._raw({m: _coef(c / f) for m, c in self._terms.items()})

    def __pow__(self, n: int) -> "Poly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Poly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # ------------------------------------------------------------------
    # structural operations

    def substitute(self, var: str, r) -> "Poly":
        """Replace ``var`` by the polynomial ``r`` (ring homomorphism)."""
        r = as_poly(r)
        if var not in self.variables():
            return self
        if r == Poly.var(var):
            return self
        key = (self, var, r)
        hit = _SUBS_CACHE.get(key)
        if hit is not None:
            return hit
        groups: Dict[int, Dict[Monomial, Fraction]] = {}
        for m, c in self._terms.items():
            e = 0
            rest = []
            for v, k in m:
                if v == var:
                    e = k
                else:
                    rest.append((v, k))
            groups.setdefault(e, {})[tuple(rest)] = c
        out = Poly.zero()
        powers = {0: Poly.one()}
        for e in sorted(groups):
            if e not in powers:
                top = max(powers)
                p = powers[top]
                for k in range(top + 1, e + 1):
                    p = p * r
                    powers[k] = p
            out = out + Poly._raw(groups[e]) * powers[e]
        if len(_SUBS_CACHE) > 50_000:
            _SUBS_CACHE.clear()
        _SUBS_CACHE[key] = out
        return out

    def subs(self, mapping: Mapping[str, "Poly"]) -> "Poly":
        """Simultaneous substitution of several variables."""
        mapping = {k: as_poly(v) for k, v in mapping.items() if k in self.variables()}
        if not mapping:
            return self
        out = Poly.zero()
        cache: Dict[Tuple[str, int], Poly] = {}
        for m, c in self._terms.items():
            term = Poly.const(c)
            keep = []
            for v, k in m:
                if v in mapping:
                    key = (v, k)
                    if key not in cache:
                        cache[key] = mapping[v] ** k
                    term = term * cache[key]
                else:
                    keep.append((v, k))
            out = out + term * Poly._raw({tuple(keep): 1})
        return out

    def coeff_extract(self, variables: Iterable[str]) -> Dict[Monomial, "Poly"]:
        """Split into monomials in ``variables`` with coefficients free of them."""
        vs = frozenset(variables)
        out: Dict[Monomial, Dict[Monomial, Fraction]] = {}
        for m, c in self._terms.items():
            inside = tuple((v, k) for v, k in m if v in vs)
            outside = tuple((v, k) for v, k in m if v not in vs)
            out.setdefault(inside, {})[outside] = c
        return {k: Poly._raw(v) for k, v in out.items()}

    def coefficient(self, var: str, k: int) -> "Poly":
        """Coefficient of ``var**k`` viewing the polynomial as univariate in ``var``."""
        out = {}
        for m, c in self._terms.items():
            e = dict(m).get(var, 0)
            if e == k:
                out[tuple((v, x) for v, x in m if v != var)] = c
        return Poly._raw(out)

    def univariate_coeffs(self, var: str) -> list:
        """Dense list of coefficients (as Poly) in ``var``, index = exponent."""
        deg = self.degree(var)
        return [self.coefficient(var, k) for k in range(deg + 1)]

    def leading_coefficient(self) -> Fraction:
        """Coefficient of the first term in canonical print order."""
        if not self._terms:
            return Fraction(0)
        m = min(self._terms, key=_print_key)
        return self._terms[m]

    def monic(self) -> "Poly":
        """Scale so that the leading coefficient (print order) is 1."""
        if not self._terms:
            return self
        return self / self.leading_coefficient()

    def rename(self, mapping: Mapping[str, str]) -> "Poly":
        return self.subs({k: Poly.var(v) for k, v in mapping.items()})

    # ------------------------------------------------------------------
    # printing

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for i, (m, c) in enumerate(self):
            neg = c < 0
            a = -c if neg else c
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in sorted(m, key=lambda t: _var_rank(t[0])))
            if not mono:
                body = _fmt_rational(a)
            elif a == 1:
                body = mono
            else:
                body = f"{_fmt_rational(a)}*{mono}"
            if i == 0:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f" - {body}" if neg else f" + {body}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Poly({str(self)!r})"


def _fmt_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _print_key(m: Monomial) -> tuple:
    # graded lexicographic, descending; D is the most significant variable
    total = sum(e for _, e in m)
    ranked = sorted(m, key=lambda t: _var_rank(t[0]))
    return (-total, tuple((_var_rank(v), -e) for v, e in ranked) + ((9, ""),))


def as_poly(x) -> Poly:
    if isinstance(x, Poly):
        return x
    if isinstance(x, (int, Fraction)):
        return Poly.const(x)
    if isinstance(x, str):
        return parse_poly(x, _implicit_params(x))
    raise TypeError(f"cannot convert {type(x).__name__} to Poly")


def _implicit_params(text: str) -> list:
    return [t for t in re.findall(r"[A-Za-z_][A-Za-z_0-9]*", text) if t not in RESERVED]


# ----------------------------------------------------------------------
# functional aliases


def poly_add(p: Poly, q: Poly) -> Poly:
    return as_poly(p) + as_poly(q)


def poly_mul(p: Poly, q: Poly) -> Poly:
    return as_poly(p) * as_poly(q)


def poly_neg(p: Poly) -> Poly:
    return -as_poly(p)


def substitute(p: Poly, v: str, r) -> Poly:
    return as_poly(p).substitute(v, r)


def coeff_extract(p: Poly, variables: Iterable[str]) -> Dict[Monomial, Poly]:
    return as_poly(p).coeff_extract(variables)


D = Poly.var(PARTIAL)
LAM = Poly.var(LAMBDA)
MU_ = Poly.var(MU)
NU_ = Poly.var(NU)


# ----------------------------------------------------------------------
# parsing


class ParseError(ValueError):
    """Syntax error or unknown identifier; ``pos`` is a 0-based offset."""

    def __init__(self, message: str, pos: int, text: str = ""):
        self.message = message
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}")


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<id>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*^()]))"
)


def _tokenize(text: str):
    pos = 0
    toks = []
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        start = m.start(m.lastgroup)
        kind = m.lastgroup
        toks.append((kind, m.group(kind), start))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, params: Iterable[str]):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.names = set(RESERVED) | set(params)

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg: str, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, tok[2], self.text)

    def expect(self, value: str):
        t = self.peek()
        if t[0] != "op" or t[1] != value:
            self.error(f"expected {value!r}")
        return self.take()

    def at_op(self, *values) -> bool:
        t = self.peek()
        return t[0] == "op" and t[1] in values

    def parse_expr(self) -> Poly:
        acc = self.parse_term()
        while self.at_op("+", "-"):
            op = self.take()[1]
            rhs = self.parse_term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def parse_term(self) -> Poly:
        acc = self.parse_unary()
        while self.at_op("*"):
            self.take()
            acc = acc * self.parse_unary()
        return acc

    def parse_unary(self) -> Poly:
        if self.at_op("-"):
            self.take()
            return -self.parse_unary()
        if self.at_op("+"):
            self.take()
            return self.parse_unary()
        return self.parse_power()

    def parse_power(self) -> Poly:
        base = self.parse_atom()
        if self.at_op("^"):
            self.take()
            t = self.peek()
            if t[0] != "num" or "/" in t[1]:
                self.error("exponent must be a non-negative integer literal")
            self.take()
            return base ** int(t[1])
        return base

    def parse_atom(self) -> Poly:
        t = self.peek()
        if t[0] == "num":
            self.take()
            return Poly.const(Fraction(t[1]))
        if t[0] == "id":
            if t[1] not in self.names:
                self.error(f"unknown identifier {t[1]!r}")
            self.take()
            return Poly.var(t[1])
        if self.at_op("("):
            self.take()
            inner = self.parse_expr()
            self.expect(")")
            return inner
        if t[0] == "end":
            self.error("unexpected end of input")
        self.error(f"unexpected token {t[1]!r}")


def parse_poly(text: str, params: Iterable[str] = ()) -> Poly:
    """Parse an expression such as ``"D + (1-b)*lam"``.

    Identifiers other than ``D``, ``lam``, ``mu``, ``nu`` must be declared in
    ``params``.  Implicit multiplication is rejected.
    """
    p = _Parser(text, params)
    out = p.parse_expr()
    if p.peek()[0] != "end":
        p.error(f"unexpected token {p.peek()[1]!r}")
    return out
