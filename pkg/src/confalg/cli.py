"""Command-line front end.

Exit codes: 0 all checks pass (or a search finished with solved branches
only), 1 a check failed, 2 unresolved branches or an indeterminate series
verdict, 3 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import catalog as cat
from .ansatz import (
    classify_plca,
    classify_rb,
    generic_module_map,
    generic_product,
    instantiate_map,
    instantiate_product,
    quotient_propagate,
)
from .dsl import DSLError, parse_algebra, parse_dmap, parse_map, parse_product
from .lca import LCA, AxiomError, CheckReport, check_lca, derived_series, lower_central_series, _series_verdict
from .maps import check_derivation, check_rota_baxter, find_inner_representative
from .solver import SolutionBranch

__all__ = ["main", "RunConfig", "InputError", "run"]

COMMANDS = ("verify", "rb-verify", "plca-verify", "derivation-verify", "search-rb", "search-plca", "catalog", "series")


class InputError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(3)


@dataclass(frozen=True)
class RunConfig:
    command: str
    algebra: Optional[str] = None
    op: Optional[str] = None
    json: bool = False
    values: Tuple[Tuple[str, Fraction], ...] = ()
    weight: Fraction = Fraction(1)
    max_deg: int = 3
    max_branches: int = 512
    drop: Tuple[str, ...] = ()
    depth: int = 8
    series_kind: str = "derived"
    ids: Tuple[str, ...] = ()
    truncation: int = cat.DEFAULT_TRUNCATION
    detail: bool = False
    inner: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise InputError(f"unknown command {self.command!r}")
        if self.max_deg < 0:
            raise InputError("--max-deg must be non-negative")
        if self.max_branches < 1:
            raise InputError("--max-branches must be positive")
        if self.depth < 1:
            raise InputError("--depth must be positive")
        if self.truncation < 0:
            raise InputError("--truncation must be non-negative")
        if self.command not in ("catalog",) and not self.algebra:
            raise InputError(f"{self.command} needs an algebra file")
        if self.command in ("rb-verify", "plca-verify", "derivation-verify") and not self.op:
            raise InputError(f"{self.command} needs --op FILE")

    @property
    def value_map(self) -> Dict[str, Fraction]:
        return dict(self.values)


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise InputError(f"not a rational number: {text!r}") from None


def _parse_set(items: Sequence[str]) -> Tuple[Tuple[str, Fraction], ...]:
    out = {}
    for item in items or ():
        if "=" not in item:
            raise InputError(f"--set expects name=rational, got {item!r}")
        name, val = item.split("=", 1)
        name = name.strip()
        if not name.isidentifier():
            raise InputError(f"invalid parameter name {name!r}")
        if name in out:
            raise InputError(f"parameter {name} set twice")
        out[name] = _rational(val)
    return tuple(sorted(out.items()))


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def _load_algebra(cfg: RunConfig, extra_params=()) -> LCA:
    """The algebra with ``--set`` values substituted; ``extra_params`` are names the second file may use."""
    A = parse_algebra(_read(cfg.algebra), cfg.algebra)
    unknown = set(cfg.value_map) - set(A.params) - set(extra_params)
    if unknown:
        raise InputError(f"--set names unknown parameters {sorted(unknown)}")
    own = {k: v for k, v in cfg.value_map.items() if k in A.params}
    return A.subs(own) if own else A


def _op_text(cfg: RunConfig) -> Tuple[str, Tuple[str, ...]]:
    """Second file and the parameter names it declares."""
    text = _read(cfg.op)
    params: Tuple[str, ...] = ()
    for raw in text.splitlines():
        w = raw.split()
        if w and w[0] == "params":
            params = tuple(w[1:])
            break
    return text, params


def _emit(cfg: RunConfig, payload: dict, lines: List[str], out) -> None:
    if cfg.json:
        out.write(json.dumps(payload, indent=2, sort_keys=False) + "\n")
    else:
        out.write("\n".join(lines) + "\n")


def _report_lines(title: str, rep: CheckReport) -> List[str]:
    lines = [f"{title}: {rep.status}"]
    for w in rep.witnesses:
        lines.append(f"  {w.check} ({', '.join(w.generators)}): {w.to_json()['residual']}")
    return lines


def _require_numeric(A: LCA, what: str):
    if A.params:
        raise InputError(f"{what} needs every parameter instantiated; symbolic: {list(A.params)} (use --set)")


# ----------------------------------------------------------------------
# commands


def _cmd_verify(cfg, out):
    A = _load_algebra(cfg)
    rep = check_lca(A)
    _emit(cfg, {"algebra": A.name, "report": rep.to_json()}, _report_lines(f"{A.name} skew+jacobi", rep), out)
    return 0 if rep.ok else 1


def _op_values(cfg, obj_params):
    return {k: v for k, v in cfg.value_map.items() if k in obj_params}


def _cmd_rb(cfg, out):
    text, declared = _op_text(cfg)
    A0 = parse_algebra(_read(cfg.algebra), cfg.algebra)
    T = parse_map(text, A0, cfg.op)
    A = _load_algebra(cfg, declared)
    vals = _op_values(cfg, T.variables() - {"D"})
    if vals:
        T = T.subs(vals)
    rep = check_rota_baxter(A, T, cfg.weight)
    payload = {"algebra": A.name, "operator": T.name, "weight": str(cfg.weight), "report": rep.to_json()}
    _emit(cfg, payload, _report_lines(f"{T.name} on {A.name}, weight {cfg.weight}", rep), out)
    return 0 if rep.ok else 1


def _cmd_plca(cfg, out):
    text, declared = _op_text(cfg)
    A0 = parse_algebra(_read(cfg.algebra), cfg.algebra)
    P = parse_product(text, A0, cfg.op)
    A = _load_algebra(cfg, declared)
    vals = _op_values(cfg, P.variables() - {"D", "lam"})
    if vals:
        P = P.subs(vals)
    rep = cat.plca_report(A, P)
    _emit(cfg, {"algebra": A.name, "product": P.name, "report": rep.to_json()},
          _report_lines(f"{P.name} on {A.name}", rep), out)
    return 0 if rep.ok else 1


def _cmd_derivation(cfg, out):
    text, declared = _op_text(cfg)
    A0 = parse_algebra(_read(cfg.algebra), cfg.algebra)
    d = parse_dmap(text, A0, cfg.op)
    A = _load_algebra(cfg, declared)
    vals = _op_values(cfg, d.variables() - {"D", "lam"})
    if vals:
        d = d.subs(vals)
    rep = check_derivation(A, d)
    payload = {"algebra": A.name, "map": d.name, "report": rep.to_json()}
    lines = _report_lines(f"{d.name} on {A.name}", rep)
    if cfg.inner:
        _require_numeric(A, "--inner")
        if d.variables() - {"D", "lam"}:
            raise InputError("--inner needs every parameter of the map instantiated")
        a = find_inner_representative(A, d, cfg.max_deg) if rep.ok else None
        payload["inner"] = None if a is None else a.format(A.basis)
        lines.append("inner representative: " + ("none up to degree %d" % cfg.max_deg if a is None
                                                  else a.format(A.basis)))
    _emit(cfg, payload, lines, out)
    return 0 if rep.ok else 1


def _branch_lines(branches: Sequence[SolutionBranch], render=None) -> List[str]:
    lines = [f"{len(branches)} branch(es)"]
    for n, b in enumerate(branches, 1):
        lines.append(f"[{n}] {b.status}; free: {', '.join(b.free) or '-'}")
        if render is not None and b.status == "solved":
            shown = ["    " + x for x in render(b) if not x.endswith("= 0")]
            lines.extend(shown or ["    (all entries zero)"])
        for k, v in b.assignments:
            if str(v) != "0":
                lines.append(f"    {k} = {v}")
        for a in b.assumptions:
            lines.append(f"    assuming {a} != 0")
        for r in b.residual:
            lines.append(f"    leftover: {r} = 0")
    return lines


def _search_exit(branches) -> int:
    return 0 if all(b.status == "solved" for b in branches) else 2


def _cmd_search_rb(cfg, out):
    A = _load_algebra(cfg)
    for d in cfg.drop:
        if d not in A.basis:
            raise InputError(f"--drop names unknown generator {d!r}")
    try:
        if cfg.drop:
            branches = quotient_propagate(A, list(cfg.drop), max_deg=cfg.max_deg, weight=cfg.weight,
                                          max_branches=cfg.max_branches)
        else:
            branches = classify_rb(A, cfg.max_deg, cfg.weight, cfg.max_branches)
    except AxiomError as e:
        raise InputError(str(e)) from None
    payload = {"algebra": A.name, "max_deg": cfg.max_deg, "drop": list(cfg.drop),
               "branches": [b.to_json() for b in branches]}
    T = generic_module_map(A, cfg.max_deg)[0]
    lines = _branch_lines(branches, lambda b: instantiate_map(T, b).format(A.basis))
    _emit(cfg, payload, [f"Rota-Baxter search on {A.name}, degree <= {cfg.max_deg}"] + lines, out)
    return _search_exit(branches)


def _cmd_search_plca(cfg, out):
    A = _load_algebra(cfg)
    branches = classify_plca(A, cfg.max_deg, cfg.max_branches)
    payload = {"algebra": A.name, "max_deg": cfg.max_deg, "branches": [b.to_json() for b in branches]}
    P = generic_product(A, cfg.max_deg)[0]
    lines = _branch_lines(branches, lambda b: instantiate_product(P, b).format())
    _emit(cfg, payload, [f"post-Lie search on {A.name}, degree <= {cfg.max_deg}"] + lines, out)
    return _search_exit(branches)


def _cmd_catalog(cfg, out):
    config = cat.CatalogConfig(truncation=cfg.truncation)
    if cfg.values:
        if len(cfg.ids) != 1:
            raise InputError("--set with catalog needs exactly one --id")
        res = [cat.verify_entry(cfg.ids[0], cfg.value_map, config)]
    else:
        res = cat.verify_all(config, list(cfg.ids) if cfg.ids else None)
    lines = [f"{r.status:18s} {r.id}  {r.citation}" for r in res]
    counts = {}
    for r in res:
        counts[r.status] = counts.get(r.status, 0) + 1
    lines.append(", ".join(f"{k}: {counts[k]}" for k in sorted(counts)))
    if cfg.json:
        out.write(cat.summary_json(res, cfg.detail) + "\n")
    else:
        out.write("\n".join(lines) + "\n")
    return 1 if any(r.status == "fail" for r in res) else 0


def _cmd_series(cfg, out):
    A = _load_algebra(cfg)
    _require_numeric(A, "series")
    fn = derived_series if cfg.series_kind == "derived" else lower_central_series
    series = fn(A, cfg.depth)
    verdict = _series_verdict(series)
    word = "solvable" if cfg.series_kind == "derived" else "nilpotent"
    payload = {"algebra": A.name, "kind": cfg.series_kind, "depth": cfg.depth,
               "terms": [s.format(A.basis) for s in series], word: verdict}
    lines = [f"{cfg.series_kind} series of {A.name}"] + [f"  {n}: {s.format(A.basis)}" for n, s in enumerate(series)]
    lines.append(f"{word}: {verdict}")
    _emit(cfg, payload, lines, out)
    return {"yes": 0, "no": 0}.get(verdict, 2)


_DISPATCH = {
    "verify": _cmd_verify,
    "rb-verify": _cmd_rb,
    "plca-verify": _cmd_plca,
    "derivation-verify": _cmd_derivation,
    "search-rb": _cmd_search_rb,
    "search-plca": _cmd_search_plca,
    "catalog": _cmd_catalog,
    "series": _cmd_series,
}


def run(cfg: RunConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        return _DISPATCH[cfg.command](cfg, out)
    except (InputError, DSLError, cat.CatalogError) as e:
        err.write(f"error: {e}\n")
        return 3
    except AxiomError as e:
        # malformed input data, e.g. an inconsistent bracket table
        err.write(f"error: {e}\n")
        return 3


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="confalg", description="Lie conformal algebras, Rota-Baxter operators and post-Lie products")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, algebra=True):
        if algebra:
            sp.add_argument("algebra", help="algebra DSL file")
        sp.add_argument("--json", action="store_true", help="JSON output")
        sp.add_argument("--set", action="append", default=[], metavar="NAME=RATIONAL",
                        help="instantiate a parameter")

    sp = sub.add_parser("verify", help="skew-symmetry and Jacobi checks")
    common(sp)
    for name, label in (("rb-verify", "Rota-Baxter map file"), ("plca-verify", "product file"),
                        ("derivation-verify", "dmap file")):
        sp = sub.add_parser(name, help=f"check a {label}")
        common(sp)
        sp.add_argument("--op", required=True, help=label)
        if name == "rb-verify":
            sp.add_argument("--weight", default="1")
        if name == "derivation-verify":
            sp.add_argument("--inner", action="store_true", help="also look for an inner representative")
            sp.add_argument("--max-deg", type=int, default=6)
    sp = sub.add_parser("search-rb", help="classify Rota-Baxter operators up to a degree")
    common(sp)
    sp.add_argument("--max-deg", type=int, default=3)
    sp.add_argument("--max-branches", type=int, default=512)
    sp.add_argument("--weight", default="1")
    sp.add_argument("--drop", default="", help="comma separated generators spanning an ideal")
    sp = sub.add_parser("search-plca", help="classify post-Lie products up to a degree")
    common(sp)
    sp.add_argument("--max-deg", type=int, default=4)
    sp.add_argument("--max-branches", type=int, default=512)
    sp = sub.add_parser("catalog", help="verify the built-in catalog")
    common(sp, algebra=False)
    sp.add_argument("--id", action="append", default=[], help="restrict to entry ids")
    sp.add_argument("--truncation", type=int, default=cat.DEFAULT_TRUNCATION)
    sp.add_argument("--detail", action="store_true", help="include witnesses in JSON")
    sp.add_argument("--list", action="store_true", help="list entries and exit")
    sp = sub.add_parser("series", help="derived or lower central series")
    common(sp)
    sp.add_argument("--depth", type=int, default=8)
    sp.add_argument("--kind", choices=("derived", "lower"), default="derived")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    kw = dict(command=ns.command, json=ns.json, values=_parse_set(ns.set))
    if hasattr(ns, "algebra"):
        kw["algebra"] = ns.algebra
    if hasattr(ns, "op"):
        kw["op"] = ns.op
    if hasattr(ns, "weight"):
        kw["weight"] = _rational(ns.weight)
    for attr in ("max_deg", "max_branches", "depth", "truncation", "detail", "inner"):
        if hasattr(ns, attr):
            kw[attr] = getattr(ns, attr)
    if getattr(ns, "drop", ""):
        kw["drop"] = tuple(x.strip() for x in ns.drop.split(",") if x.strip())
    if hasattr(ns, "kind"):
        kw["series_kind"] = ns.kind
    if ns.command == "catalog":
        kw["ids"] = tuple(ns.id)
    return RunConfig(**kw)


def main(argv: Sequence[str] | None = None) -> int:
    ns = _build_parser().parse_args(argv)
    if ns.command == "catalog" and ns.list:
        entries = cat.list_entries()
        if ns.json:
            sys.stdout.write(json.dumps({"entries": [e.to_json() for e in entries]}, indent=2) + "\n")
        else:
            sys.stdout.write("\n".join(f"{e.id}  {e.citation}" for e in entries) + "\n")
        return 0
    try:
        cfg = config_from_args(ns)
    except InputError as e:
        sys.stderr.write(f"error: {e}\n")
        return 3
    return run(cfg)


if __name__ == "__main__":
    raise SystemExit(main())
