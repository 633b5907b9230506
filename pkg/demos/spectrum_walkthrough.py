"""Walk through the fiber spectrum and the dyadic slice selection.

For A = {1, 2, 4, 8} every quotient lambda in A/A carries a fiber
A ∩ lambda*A; the squared fiber sizes add up to the multiplicative
energy, and the dyadic windows (tau, 2*tau] group the fibers by size.
The low-L construction then picks the heaviest qualifying window and
splits it by fiber additive energy.
"""

from sumprod import FiniteSet, dyadic_slices, energy, smallL_construction, spectrum


def main():
    A = FiniteSet([1, 2, 4, 8])
    print(f"A = {A}")
    print(f"E^x(A) = {energy(A, mode='mul')}")
    print()
    print("lambda -> |A ∩ lambda*A|")
    for lam, size in spectrum(A):
        print(f"  {str(lam):>5s} -> {size}")
    assert sum(s * s for _, s in spectrum(A)) == energy(A, mode="mul")
    print()
    for s in dyadic_slices(A):
        members = s.lambdas if s.lambdas is not None else "(empty)"
        print(f"window ({s.tau}, {2 * s.tau}]: {members}")
    print()
    rep = smallL_construction(A)
    print(f"selected tau = {rep.tau}, S_tau = {rep.S_tau}")
    print(f"low-energy half S'' = {rep.S_doubleprime}, rest S' = {rep.S_prime}")
    print(f"min E+(fiber)/tau^3 over S' = {rep.min_additive_energy_ratio}")


if __name__ == "__main__":
    main()
