"""Lie conformal algebras, Rota-Baxter operators and post-Lie conformal products."""

from .ansatz import classify_derivations, classify_plca, classify_rb, quotient_propagate
from .dsl import parse_algebra, parse_dmap, parse_map, parse_product
from .lca import LCA, abelian, bq_truncated, check_lca, current, virasoro, wb
from .maps import ConformalLinearMap, ModuleMap, check_derivation, check_rota_baxter
from .plca import LambdaProduct, check_plca
from .polyring import LAM, D, Poly

__version__ = "0.1.0"

__all__ = [
    "D", "LAM", "Poly",
    "LCA", "abelian", "bq_truncated", "check_lca", "current", "virasoro", "wb",
    "ConformalLinearMap", "ModuleMap", "check_derivation", "check_rota_baxter",
    "LambdaProduct", "check_plca",
    "classify_derivations", "classify_plca", "classify_rb", "quotient_propagate",
    "parse_algebra", "parse_dmap", "parse_map", "parse_product",
]
