"""Which barrier sets the vertex-degree threshold for each tile?

Prints the exact threshold coefficient for a handful of tiles together with
the constructions that attain it.  Note the single irrational value.
"""

from hypertile.kspec import threshold_coefficient

SPECS = [(1, 1, 1), (1, 1, 2), (1, 2, 3), (1, 3, 5), (1, 4, 7), (2, 2, 2), (2, 3, 4), (2, 3, 7), (3, 4, 5)]


def main():
    print(f"{'tile':>10}  {'type':>7}  {'coefficient':>14}  {'≈':>7}  attained by")
    for abc in SPECS:
        r = threshold_coefficient(abc)
        print(f"{str(abc):>10}  {r.spec.type_label:>7}  {str(r.coefficient):>14}  "
              f"{float(r.coefficient):7.4f}  {', '.join(r.dominant_barrier)}")


if __name__ == "__main__":
    main()
