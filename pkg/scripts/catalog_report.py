"""Verify every catalog entry and print a status table.

Entries whose published form fails are listed with their first witness and
the status of the corrected form.  ``--json PATH`` also writes the detailed
report.
"""
import argparse
import time

from confalg import catalog as cat


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--json", metavar="PATH", help="write the detailed JSON report here")
    ap.add_argument("--truncation", type=int, default=3, help="rank of the B(q) truncation")
    args = ap.parse_args()

    cfg = cat.CatalogConfig(truncation=args.truncation)
    t0 = time.perf_counter()
    results = cat.verify_all(config=cfg)
    elapsed = time.perf_counter() - t0

    width = max(len(r.id) for r in results)
    counts = {}
    for r in results:
        counts[r.status] = counts.get(r.status, 0) + 1
        print(f"{r.id:<{width}}  {r.status}")
    print()
    print(", ".join(f"{k}: {v}" for k, v in sorted(counts.items())), f"({elapsed:.1f}s)")

    flagged = [r for r in results if r.status == "paper-discrepancy"]
    if flagged:
        print("\npublished forms that fail, with the first witness:")
        for r in flagged:
            w = r.report.witnesses[0].to_json()
            fixed = "passes" if r.corrected_report is not None and r.corrected_report.ok else "FAILS"
            print(f"  {r.id}: {w['check']} on {', '.join(w['generators'])} -> {w['residual']}; corrected form {fixed}")

    if args.json:
        with open(args.json, "w") as fh:
            fh.write(cat.summary_json(results, detail=True))
        print(f"\nwrote {args.json}")


if __name__ == "__main__":
    main()
