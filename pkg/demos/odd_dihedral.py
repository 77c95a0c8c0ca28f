"""Fusion in D(D_2n) for odd n: the reflection objects generate almost everything.

For n = 5 this prints what V_{y,1} (x) V_{y,1} contains, confirms the total
dimension n^2, and runs the X/X'/Y/Z rule check.
"""

import sys

import numpy as np

from drinfeld import drinfeld_double, fusion_tensor, verify_type3_pattern

n = int(sys.argv[1]) if len(sys.argv) > 1 else 5
D = drinfeld_double(f"dihedral:{n}")
N = fusion_tensor(D.group).coeffs
X = D.object("V_{y,1}")

parts = np.nonzero(N[X.index, X.index])[0]
print(f"D(D{2 * n}) has rank {D.rank}")
print(f"{X.label} (x) {X.label} =")
for c in parts:
    print(f"   {D.objects[c].label:<14} dim {D.dims[c]}")
total = sum(int(D.dims[c]) for c in parts)
print(f"dimension {total} = {n}^2: {total == n * n}")

rep = verify_type3_pattern(n)
print(f"\nX = {rep.X}, X' = {rep.X_prime}, Z = {rep.Z}, {rep.y_count} further objects Y_i")
for name, ok in rep.checks.items():
    if not name.startswith("X*V_"):
        print(f"   {name:<20} {'holds' if ok else 'FAILS'}")
print(f"   X*Y_i = X + X'       {'holds for all i' if rep.ok else 'FAILS'}")
