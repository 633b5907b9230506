"""Hunt for the 4-element sets where the doubling bound is tightest.

Exhaustively scans all 4-subsets of {1..14} for the minimal
|A+A| / (|A|^{3/2} K^{-1/2}) ratio, then lets a seeded hill climb try to
match it from a random start.  Both searches are deterministic.
"""

from sumprod import FiniteSet, search_extremal


def main():
    ground = FiniteSet(range(1, 15))
    ex = search_extremal("COR-SOL", 4, "exhaustive",
                         {"ground": ground, "budget": 2000})
    print(f"exhaustive minimum: {ex.set}  ratio ~ {float(ex.ratio):.5f}")
    hc = search_extremal("COR-SOL", 4, "hillclimb",
                         {"ground": ground, "budget": 60, "seed": 1,
                          "restarts": 3})
    print(f"hill climb found:   {hc.set}  ratio ~ {float(hc.ratio):.5f}")
    assert ex.ratio <= hc.ratio
    gap = float(hc.ratio / ex.ratio)
    print(f"hill climb is within a factor {gap:.4f} of the true optimum")


if __name__ == "__main__":
    main()
