"""Write tick, bi-grid and rule SVGs for every catalog case into one directory."""
import argparse
from pathlib import Path

from qlat.cli import write_atomic
from qlat.geometry import bigrid_times, cut_and_project, tile_lengths
from qlat.selfsim import catalog
from qlat.svg import render_bigrid, render_rule, render_ticks


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="figures")
    ap.add_argument("--window", type=int, default=15)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    w = (-args.window, args.window)
    for e in catalog():
        S, L = tile_lengths(e.spec)
        write_atomic(str(out / f"ticks_{e.case_id}.svg"), render_ticks(cut_and_project(e.spec, w)))
        write_atomic(str(out / f"bigrid_{e.case_id}.svg"), render_bigrid(bigrid_times(e.spec, w)))
        write_atomic(str(out / f"rule_{e.case_id}.svg"), render_rule(e.rule, S, L))
    print(f"wrote {3 * len(catalog())} files to {out}")


if __name__ == "__main__":
    main()
