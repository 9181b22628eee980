"""The weight-boosting gadgets behind the almost-tiling argument.

Each gadget is a tiny host with an exact fractional hom(K)-tiling whose total
weight beats the trivial ``k`` (one copy) or ``2k`` (two copies).
"""

from fractions import Fraction

from hypertile import fractional as fr
from hypertile.kspec import KSpec


def main():
    for spec in [KSpec(1, 2, 3), KSpec(2, 2, 3), KSpec(1, 2, 4)]:
        a, b, c = spec.sizes
        print(f"K{spec.sizes}:")
        for case in fr.l1_cases(spec):
            g = fr.gadget_L1(spec, case)
            print(f"  one copy   {case:<16} w = {str(g.weight):>8}  (needs > {spec.k})  h_min = {g.hmin}")
        for case in fr.l2_cases(spec):
            for co in fr.l2_variants(spec, case):
                g = fr.gadget_L2(spec, case, co)
                bound = 2 * spec.k + Fraction(1, a * b * c * c)
                print(f"  two copies {g.case_label:<24} w = {str(g.weight):>8}  (bound {bound})  h_min = {g.hmin}")


if __name__ == "__main__":
    main()
