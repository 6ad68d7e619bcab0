"""Classify small chains by the gap between two fixed ranks.

Each torus-fixed chain carries a tangent and an obstruction space whose
torus-fixed parts have ranks W_T <= W_B.  A chain contributes to the
localization sum exactly when the ranks agree, and that happens exactly
when every point of every layer is admissible: a single nonzero
coordinate of size at most 4, or two nonzero coordinates summing to at
most 3, and never three nonzero coordinates.
"""

from nahilb.partitions import (
    canonical_enumeration,
    enumerate_nested,
    is_admissible,
)
from nahilb.weights import fixed_ranks


def tour(n, dims):
    print(f"n={n}, layer sizes {dims}")
    admissible = 0
    for np_ in enumerate_nested(n, dims):
        wt, wb = fixed_ranks(canonical_enumeration(np_))
        adm = is_admissible(np_)
        admissible += adm
        assert adm == (wt == wb)
        shape = sorted(np_.layers[-1])
        flag = "enters the sum" if adm else f"drops out (gap {wb - wt})"
        print(f"  W_T={wt} W_B={wb}  {flag:22}  {shape}")
    total = admissible
    print(f"  -> {total} contributing chains\n")


def main():
    tour(2, (5,))
    tour(2, (6,))
    tour(1, (1, 1, 1, 1, 1))
    tour(1, (1,) * 6)


if __name__ == "__main__":
    main()
