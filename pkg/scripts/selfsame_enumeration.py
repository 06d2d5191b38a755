"""Brute-force self-same classes next to the closed-form counts."""
import argparse

from qlat.selfsim import catalog, count_selfsame, enumerate_selfsame


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--s-max", type=int, default=4)
    args = ap.parse_args()
    print("case\ts\tclasses\tvariants\tbrute_N\tformula_N\tbrute_cycles\tformula_cycles")
    for e in catalog():
        for s in range(1, args.s_max + 1):
            en, c = enumerate_selfsame(e.spec, e.tau, s), count_selfsame(e.tau, s)
            flag = "" if (en.N_s, en.cycles) == (c.N_s, c.cycles) else "\t*"
            print(f"{e.case_id}\t{s}\t{len(en.classes)}\t{en.singular_variants}\t{en.N_s}\t{c.N_s}\t{en.cycles}\t{c.cycles}{flag}")


if __name__ == "__main__":
    main()
