"""Line-oriented text formats for algebras, operators and products.

::

    algebra Wb
    params b
    basis L H
    bracket L L = (D + 2*lam) L
    bracket L H = (D + (1-b)*lam) H
    bracket H H = 0

Operators use ``map <name>`` with lines ``T <gen> = ...`` (no ``lam``);
conformal linear maps use ``dmap <name>`` with lines ``d <gen> = ...``;
products use ``product <name>`` and ``circ <gen> <gen> = ...``.  A right
hand side is ``0`` or ``(<expr>) <gen>`` terms joined by ``+``.  Blank lines
and lines starting with ``#`` are ignored.  Errors carry 1-based line and
column numbers.
"""

from __future__ import annotations

import re
from typing import Dict, List, Optional, Tuple

from .cmod import LambdaElement
from .lca import LCA, AxiomError, make_lca
from .maps import ConformalLinearMap, ModuleMap
from .plca import LambdaProduct, make_product
from .polyring import LAMBDA, PARTIAL, ParseError, Poly, parse_poly

__all__ = ["DSLError", "parse_algebra", "parse_map", "parse_dmap", "parse_product", "parse_file", "detect_kind"]

_NAME = re.compile(r"[A-Za-z_][A-Za-z_0-9]*$")
_KEYWORDS = {"algebra", "map", "dmap", "product"}


class DSLError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1, source: str = ""):
        self.message, self.line, self.column, self.source = message, line, column, source
        where = f"{source}:" if source else "line "
        super().__init__(f"{where}{line}:{column}: {message}")


class _Lines:
    def __init__(self, text: str, source: str):
        self.source = source
        self.items: List[Tuple[int, str]] = []
        for n, raw in enumerate(text.splitlines(), 1):
            line = raw.rstrip()
            if line.strip() and not line.lstrip().startswith("#"):
                self.items.append((n, line))
        self.pos = 0

    def error(self, msg, line, col=1):
        return DSLError(msg, line, col, self.source)

    def peek(self):
        return self.items[self.pos] if self.pos < len(self.items) else None

    def take(self):
        item = self.peek()
        self.pos += 1
        return item


def _words(line: str) -> List[Tuple[str, int]]:
    return [(m.group(0), m.start() + 1) for m in re.finditer(r"\S+", line)]


def _header(lines: _Lines, keyword: str) -> Tuple[str, int]:
    item = lines.take()
    if item is None:
        raise DSLError(f"empty input, expected '{keyword} <name>'", 1, 1, lines.source)
    n, line = item
    w = _words(line)
    if w[0][0] != keyword:
        raise lines.error(f"expected '{keyword} <name>'", n, w[0][1])
    if len(w) != 2:
        raise lines.error(f"'{keyword}' takes exactly one name", n, w[1][1] if len(w) > 1 else len(line) + 1)
    return w[1][0], n


def _name_list(lines: _Lines, keyword: str, optional: bool) -> Tuple[str, ...]:
    item = lines.peek()
    if item is None or _words(item[1])[0][0] != keyword:
        if optional:
            return ()
        n = item[0] if item else (lines.items[-1][0] if lines.items else 1)
        raise lines.error(f"expected '{keyword} ...' line", n)
    n, line = lines.take()
    names = []
    for word, col in _words(line)[1:]:
        if not _NAME.match(word):
            raise lines.error(f"invalid name {word!r}", n, col)
        if word in names:
            raise lines.error(f"duplicate name {word!r}", n, col)
        names.append(word)
    if not names and keyword == "basis":
        raise lines.error("basis must list at least one generator", n, len(line) + 1)
    return tuple(names)


def _check_names(lines, n, basis, params):
    reserved = {PARTIAL, "lam", "mu", "nu"}
    for nm in basis + params:
        if nm in reserved:
            raise lines.error(f"{nm!r} is reserved", n)
    clash = set(basis) & set(params)
    if clash:
        raise lines.error(f"names used both as parameters and generators: {sorted(clash)}", n)


def _split_terms(text: str, offset: int, lines: _Lines, n: int) -> List[Tuple[str, int, str, int]]:
    """``(expr) gen`` terms of a right hand side: (expr, expr column, gen, gen column)."""
    if text.strip() == "0":
        return []
    terms, depth, start = [], 0, 0
    pieces = []
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise lines.error("unbalanced ')'", n, offset + i)
        elif ch == "+" and depth == 0:
            pieces.append((start, i))
            start = i + 1
    if depth != 0:
        raise lines.error("unbalanced '('", n, offset + len(text))
    pieces.append((start, len(text)))
    for s, e in pieces:
        chunk = text[s:e]
        stripped = chunk.strip()
        col = offset + s + (len(chunk) - len(chunk.lstrip()))
        if not stripped:
            raise lines.error("empty term", n, col)
        if not stripped.startswith("("):
            raise lines.error("term must have the form '(<expr>) <generator>'", n, col)
        depth = 0
        close = None
        for i, ch in enumerate(stripped):
            depth += ch == "("
            depth -= ch == ")"
            if depth == 0:
                close = i
                break
        rest = stripped[close + 1:]
        gen = rest.strip()
        if not _NAME.match(gen or "-"):
            raise lines.error("expected a generator name after ')'", n, col + close + 1 + (len(rest) - len(rest.lstrip())))
        terms.append((stripped[1:close], col + 1, gen, col + close + 1 + (len(rest) - len(rest.lstrip()))))
    return terms


def _rhs(lines: _Lines, n: int, line: str, eq: int, basis, params, allowed) -> LambdaElement:
    text = line[eq + 1:]
    coords = [Poly.zero() for _ in basis]
    for expr, ecol, gen, gcol in _split_terms(text, eq + 2, lines, n):
        if gen not in basis:
            raise lines.error(f"unknown generator {gen!r}", n, gcol)
        try:
            p = parse_poly(expr, params)
        except ParseError as e:
            raise lines.error(e.message, n, ecol + e.pos) from None
        extra = p.variables() - set(params) - set(allowed)
        if extra:
            raise lines.error(f"variable(s) {sorted(extra)} not allowed here", n, ecol)
        coords[basis.index(gen)] = coords[basis.index(gen)] + p
    return LambdaElement(tuple(coords))


def _entry_lines(lines: _Lines, keyword: str, arity: int, basis, params, allowed):
    out: Dict[Tuple[str, ...], Tuple[LambdaElement, int]] = {}
    while lines.peek() is not None:
        n, line = lines.take()
        w = _words(line)
        if w[0][0] != keyword:
            raise lines.error(f"expected '{keyword}' line, found {w[0][0]!r}", n, w[0][1])
        eq = line.find("=")
        if eq < 0:
            raise lines.error("missing '='", n, len(line) + 1)
        lhs = _words(line[:eq])[1:]
        if len(lhs) != arity:
            raise lines.error(f"'{keyword}' needs {arity} generator name(s) before '='", n, w[0][1])
        for word, col in lhs:
            if word not in basis:
                raise lines.error(f"unknown generator {word!r}", n, col)
        key = tuple(word for word, _ in lhs)
        if key in out:
            raise lines.error(f"duplicate entry for {' '.join(key)}", n, w[0][1])
        out[key] = (_rhs(lines, n, line, eq, basis, params, allowed), n)
    return out


def parse_algebra(text: str, source: str = "") -> LCA:
    lines = _Lines(text, source)
    name, n0 = _header(lines, "algebra")
    params = _name_list(lines, "params", True)
    basis = _name_list(lines, "basis", False)
    _check_names(lines, n0, basis, params)
    entries = _entry_lines(lines, "bracket", 2, basis, params, (PARTIAL, LAMBDA))
    try:
        return make_lca(basis, params, {k: v for k, (v, _) in entries.items()}, name)
    except AxiomError as e:
        line = n0
        if e.report is not None and e.report.witnesses:
            gens = tuple(e.report.witnesses[0].generators)
            line = entries.get(gens, entries.get(gens[::-1], (None, n0)))[1]
        raise DSLError(str(e), line, 1, source) from None


def _map_like(text: str, source: str, algebra: LCA, keyword: str, line_kw: str, allowed):
    lines = _Lines(text, source)
    name, n0 = _header(lines, keyword)
    params = _name_list(lines, "params", True)
    all_params = tuple(dict.fromkeys(algebra.params + params))
    _check_names(lines, n0, algebra.basis, params)
    entries = _entry_lines(lines, line_kw, 1, algebra.basis, all_params, allowed)
    cols = []
    for b in algebra.basis:
        v = entries.get((b,))
        cols.append(v[0] if v else LambdaElement(tuple(Poly.zero() for _ in algebra.basis)))
    return name, tuple(cols), params


def parse_map(text: str, algebra: LCA, source: str = "") -> ModuleMap:
    """Missing generators map to zero."""
    name, cols, _ = _map_like(text, source, algebra, "map", "T", (PARTIAL,))
    return ModuleMap(cols, algebra.rank, name)


def parse_dmap(text: str, algebra: LCA, source: str = "") -> ConformalLinearMap:
    name, cols, _ = _map_like(text, source, algebra, "dmap", "d", (PARTIAL, LAMBDA))
    return ConformalLinearMap(cols, name)


def parse_product(text: str, algebra: Optional[LCA] = None, source: str = "") -> LambdaProduct:
    lines = _Lines(text, source)
    name, n0 = _header(lines, "product")
    params = _name_list(lines, "params", True)
    basis = _name_list(lines, "basis", False)
    _check_names(lines, n0, basis, params)
    if algebra is not None:
        if basis != algebra.basis:
            raise DSLError(f"product basis {list(basis)} differs from algebra basis {list(algebra.basis)}",
                           n0 + 1 + bool(params), 1, source)
        params = tuple(dict.fromkeys(algebra.params + params))
    entries = _entry_lines(lines, "circ", 2, basis, params, (PARTIAL, LAMBDA))
    return make_product(basis, {k: v for k, (v, _) in entries.items()}, params, name)


def detect_kind(text: str) -> str:
    for raw in text.splitlines():
        s = raw.strip()
        if s and not s.startswith("#"):
            word = s.split()[0]
            return word if word in _KEYWORDS else ""
    return ""


def parse_file(path: str, algebra: Optional[LCA] = None):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    kind = detect_kind(text)
    if kind == "algebra":
        return parse_algebra(text, path)
    if kind == "product":
        return parse_product(text, algebra, path)
    if kind in ("map", "dmap"):
        if algebra is None:
            raise DSLError(f"a {kind} file needs an algebra", 1, 1, path)
        return (parse_map if kind == "map" else parse_dmap)(text, algebra, path)
    raise DSLError("expected a file starting with 'algebra', 'map', 'dmap' or 'product'", 1, 1, path)
