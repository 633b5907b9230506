"""How close do geometric progressions run to the sum-product bounds?

A GP has the smallest possible product set (|AA| = 2n-1) while its sumset
grows quadratically, which makes it the canonical stress test for every
|A+A| lower bound in terms of the multiplicative doubling K.  This script
prints the exact tightness ratios along the family {2^i : i < n}.
"""

from fractions import Fraction

from sumprod import FiniteSet, evaluate, productset, sumset

IDS = ["COR-SOL", "MAIN-A", "MAIN-B", "SMALLMD", "SOLY-MAX"]


def main():
    header = "  n  |A+A|  |AA|   " + "".join(f"{i:>12s}" for i in IDS)
    print(header)
    print("-" * len(header))
    for n in (4, 8, 12, 16, 24, 32):
        A = FiniteSet([2**i for i in range(n)])
        nsum = len(sumset(A, A))
        nprod = len(productset(A, A))
        ratios = [float(evaluate(rid, A).ratio) for rid in IDS]
        print(f"{n:3d}  {nsum:5d}  {nprod:4d}   "
              + "".join(f"{r:12.4f}" for r in ratios))
    print()
    print("Ratios are lhs/rhs with the hidden constant set to 1; values")
    print("near (or below) 1 show where the bound is nearly sharp.")


if __name__ == "__main__":
    main()
