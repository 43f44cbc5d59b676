"""Counting primitive necklaces and the osculants they index.

Run: python demos/counting.py
"""

import numpy as np

from osculants.combinatorics import (
    count_all,
    count_primitive,
    count_selfcomp_achiral,
    enumerate_necklaces,
    find_balanced_necklaces,
    necklace_to_string,
    squarefree_parity,
)

# primitive (d1, d2) counts for small degrees
table = np.array([[count_primitive((i, j)) for j in range(1, 9)] for i in range(1, 9)])
print("primitive counts, rows d1 = 1..8, columns d2 = 1..8")
print(table)

# the (3,3) case: 3 primitive necklaces out of 4
d = (3, 3)
print(f"\n{d}: {count_primitive(d)} primitive of {count_all(d)} total")
for nk in enumerate_necklaces(d):
    print("  ", necklace_to_string(nk))

# parity of the diagonal follows squarefreeness
print("\nd   N(d,d)  odd  squarefree")
for k in range(1, 13):
    n = count_primitive((k, k))
    print(f"{k:<3d} {n:<7d} {n % 2:<4d} {squarefree_parity(k)}")

print("\nself-complementary achiral counts N = 1..10:", [count_selfcomp_achiral(N) for N in range(1, 11)])

found = find_balanced_necklaces((9, 9))
print(f"\n(9,9) balanced necklaces: {len(found)}, e.g. {necklace_to_string(found[0])}")
