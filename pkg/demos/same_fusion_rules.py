"""Two non-isomorphic groups, one fusion ring; and a group whose double is not multiplicity free.

Q8 and D8 have the same character table and their doubles have isomorphic
fusion rings; the same holds for Q16 and D16. S4 shows that multiplicity
freeness is not automatic.
"""

import time

from drinfeld import max_multiplicity, ring_from_double, rings_isomorphic

for p, q in (("dicyclic:2", "dihedral:4"), ("dicyclic:4", "dihedral:8")):
    t = time.perf_counter()
    R1, R2 = ring_from_double(p), ring_from_double(q)
    phi = rings_isomorphic(R1, R2, budget=64)
    print(f"{p} vs {q}: rank {R1.rank}, {'isomorphic' if phi is not None else 'not isomorphic'}"
          f" ({time.perf_counter() - t:.1f}s)")
    if p == "dicyclic:2":
        for a in range(6):
            print(f"   {R1.labels[a]:<16} -> {R2.labels[phi[a]]}")
        print("   ...")

rep = max_multiplicity("symmetric:4")
print(f"\nD(S4): largest fusion coefficient {rep.max_multiplicity}, e.g. {' (x) '.join(rep.witness_labels[:2])} "
      f"contains {rep.witness_labels[2]} twice")
