"""Build every lower-bound construction for small tiles and check it.

For each applicable kind we report the exact minimum degree, the predicted
value, the certificate verdict and whether a perfect tiling exists.
"""

from math import comb

from hypertile import constructions as C
from hypertile.tiler import has_perfect_tiling


def main():
    for spec, n in [((1, 1, 1), 12), ((1, 1, 2), 12), ((1, 1, 4), 12), ((2, 2, 2), 12)]:
        print(f"K{spec}, n = {n}")
        for kind in C.applicable_kinds(spec):
            inst = C.generate(kind, spec, n)
            cert = C.check_certificate(inst)
            tiled = has_perfect_tiling(inst.graph, spec).exists
            d = inst.graph.min_degree()
            print(f"  {kind.value:<17} parts {str(inst.part_sizes):<12} δ1 = {d:3d} "
                  f"(predicted {inst.predicted_min_degree:3d}, {d / comb(n - 1, 2):.3f} of C(n-1,2))  "
                  f"certificate {'ok' if cert else 'BROKEN'}  perfect tiling: {tiled}")


if __name__ == "__main__":
    main()
