"""Run the degree-bounded Rota-Baxter and post-Lie searches on small algebras.

For each algebra the script prints the branch count, how many branches were
solved completely, and each solved operator with its free unknowns.  The
search is exhaustive only up to ``--max-deg``.
"""
import argparse
import time

from confalg.ansatz import classify_plca, classify_rb, generic_module_map, generic_product, instantiate_map, \
    instantiate_product
from confalg.lca import bq_truncated, virasoro, wb


def show_rb(A, deg):
    t0 = time.perf_counter()
    branches = classify_rb(A, deg)
    T, _ = generic_module_map(A, deg)
    solved = [b for b in branches if b.status == "solved"]
    print(f"{A.name}: {len(branches)} Rota-Baxter branches, {len(solved)} solved "
          f"(degree {deg}, {time.perf_counter() - t0:.1f}s)")
    for b in solved:
        S = instantiate_map(T, b)
        free = f"  free: {', '.join(b.free)}" if b.free else ""
        print("   ", "; ".join(S.format(A.basis)) + free)
    for b in branches:
        if b.status != "solved":
            print("    unresolved:", ", ".join(str(r) for r in b.residual))


def show_plca(A, deg):
    t0 = time.perf_counter()
    branches = classify_plca(A, deg)
    P, _ = generic_product(A, deg)
    print(f"{A.name}: {len(branches)} post-Lie branches (degree {deg}, {time.perf_counter() - t0:.1f}s)")
    for b in branches:
        if b.status == "solved":
            print("   ", "; ".join(instantiate_product(P, b).format()))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-deg", type=int, default=2)
    ap.add_argument("--q", default="2", help="value of q for the B(q) truncations")
    args = ap.parse_args()
    q = int(args.q)

    print("# Rota-Baxter operators of weight 1")
    for A in (virasoro(), wb(1), wb(2), wb(3), bq_truncated(0, q), bq_truncated(1, q)):
        show_rb(A, args.max_deg)
    print("\n# post-Lie products")
    show_plca(virasoro(), max(args.max_deg, 2))


if __name__ == "__main__":
    main()
