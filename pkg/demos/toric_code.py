"""D(Z/2) is the toric code: four abelian anyons 1, e, m, em.

Prints the exact S-matrix, the fusion table, and checks that every anyon is
its own dual.
"""

from drinfeld import drinfeld_double

D = drinfeld_double("cyclic:2")
names = {"V_{1,π0}": "1", "V_{1,π1}": "e", "V_{x,π0}": "m", "V_{x,π1}": "em"}
objs = [names[o.label] for o in D.objects]

S = D.s_matrix()
print("S =")
for a, row in zip(objs, S.entries):
    print(f"  {a:>2}  " + "  ".join(f"{str(z):>4}" for z in row))

N = D.verlinde().coeffs
print("\nfusion")
for a in range(D.rank):
    print("  " + "  ".join(f"{objs[a]} x {objs[b]} = {objs[int(N[a, b].argmax())]:<2}" for b in range(D.rank)))

assert all(D.dual(o) == o for o in D.objects)
print("\nevery anyon is self-dual; D(Z/2) has rank", D.rank)
