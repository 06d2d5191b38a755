"""Print both catalog tables and diff them against the checked-in goldens."""
import argparse
import sys
from pathlib import Path

from qlat.selfsim import table1_rows, table2_rows

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"


def compare(name, rows):
    golden = [line.split("\t") for line in (GOLDEN / name).read_text(encoding="utf-8").splitlines()]
    bad = [(i, r, g) for i, (r, g) in enumerate(zip(rows, golden)) if r != g]
    if len(rows) != len(golden):
        bad.append(("length", len(rows), len(golden)))
    return bad


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--s-max", type=int, default=12)
    args = ap.parse_args()
    t1, t2 = table1_rows(), table2_rows(args.s_max)
    for rows in (t1, t2):
        print("\n".join("\t".join(r) for r in rows))
        print()
    failures = compare("table1.tsv", t1) + (compare("table2.tsv", t2) if args.s_max == 12 else [])
    for f in failures:
        print("mismatch:", f, file=sys.stderr)
    print("tables match goldens" if not failures else f"{len(failures)} mismatches")
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
