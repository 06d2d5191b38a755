"""Singular lines: the two sign choices, where they differ, and how inflation swaps them."""
import argparse

from qlat.equivalence import compose_bases, decorate_points
from qlat.floorform import SingularSigns, singular_points
from qlat.geometry import singular_index, tile_lengths
from qlat.selfsim import catalog


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--window", type=int, default=12)
    args = ap.parse_args()
    w = args.window
    pm, mp = SingularSigns(1, -1), SingularSigns(-1, 1)
    for e in catalog():
        spec = e.spec.with_q0(0, 0)
        n_star = singular_index(spec)
        a = singular_points(spec, pm, (-w, w))
        b = singular_points(spec, mp, (-w, w))
        diff = [n for n, x, y in zip(a.indices, a.xs, b.xs) if x != y]
        S, L = tile_lengths(spec)
        sparse = singular_points(compose_bases(spec, e.tau), pm, (-w, w))
        pts = decorate_points(e.rule, sparse.xs, sparse.word, S, L)
        dense = {str(sg): set(singular_points(spec, sg, (-6 * w, 6 * w)).xs) for sg in (pm, mp)}
        lands = [k for k, v in dense.items() if set(pts) <= v]
        print(f"{e.case_id:>3} det={e.tau.det:+d} n*={n_star} differ at {diff}")
        print(f"    (+,-) {a.word}")
        print(f"    (-,+) {b.word}")
        print(f"    sparse (+,-) decorates to dense {lands}")


if __name__ == "__main__":
    main()
