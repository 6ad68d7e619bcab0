"""Compute nilpotent-filtration integrals two independent ways.

The localization sum runs over torus-fixed chains; the residue formula
eliminates one auxiliary variable per added point from a single rational
form.  The two computations share no code path past the integrand, so
exact agreement is a strong end-to-end check.
"""

from nahilb.algebra import rational_equal
from nahilb.localization import TautClass, chern_taut, integrate_localization
from nahilb.residues import integrate_residue_nilfil


def show(n, dims, P, label):
    loc = integrate_localization(n, dims, "nilfil", P)
    res = integrate_residue_nilfil(n, dims, P)
    print(f"{label}  (n={n}, layer sizes {dims})")
    print(f"  localization: {loc.value}")
    print(f"  residue:      {res.value}")
    print(f"  vdim {loc.vdim}, equal: {rational_equal(loc.value, res.value)}\n")


def main():
    one2 = TautClass(1, 0, 2)
    one3 = TautClass(1, 0, 3)
    c1 = chern_taut(1, 0, 3)

    print("Nilpotent-filtration chains in the plane:\n")
    show(2, (1, 1), one2, "point pair")
    show(2, (1, 1, 1), one3, "full flag of 3 points")
    show(2, (1, 2), one3, "point plus a length-2 step")
    show(2, (1, 2), c1, "same chain, first Chern class")


if __name__ == "__main__":
    main()
