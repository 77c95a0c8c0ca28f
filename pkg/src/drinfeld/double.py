"""Modular data of the Drinfeld double D(G): simple objects, characters, S and Verlinde.

Simple objects are pairs (K, pi) of a conjugacy class and an irreducible
character of the centralizer of its representative, ordered by class index
and then by the position of pi in the centralizer's character table.

All numeric work runs on one int64 array ``X[a, p, :]`` holding the value of
the character of object ``a`` at the commuting pair ``p = (g, x)``, in the
power basis of Q(zeta_e) with e = exp(G). Character values are algebraic
integers, so the coordinates are integers and every sum is exact.
"""

from __future__ import annotations

import math
import weakref
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache, reduce
from typing import Callable, Mapping

import numpy as np

from .chartable import CharTable, character_table
from .cyclotomic import CycNum, PowerBasis
from .group import Group, Subgroup, build_group

__all__ = [
    "SimpleObject",
    "DoubleCharacter",
    "SMatrix",
    "FusionTensor",
    "DrinfeldDouble",
    "InvariantError",
    "drinfeld_double",
    "simple_objects",
    "double_character",
    "dual",
    "dimension",
    "s_matrix",
    "verlinde_fusion",
]

# int64 products stay exact below this bound
_INT_BOUND = 1 << 62


class InvariantError(ArithmeticError):
    """An exact identity that must hold by construction did not."""


@dataclass(frozen=True)
class SimpleObject:
    index: int
    class_index: int
    irrep_index: int
    label: str

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class DoubleCharacter:
    """Values at x (x) delta_g for commuting pairs (g, x); zero off the class."""

    obj: SimpleObject
    values: Mapping[tuple[int, int], CycNum]

    def __call__(self, g: int, x: int) -> CycNum:
        return self.values.get((int(g), int(x)), CycNum.rational(0))


@dataclass(eq=False)
class SMatrix:
    objects: tuple[SimpleObject, ...]
    unit_index: int
    # entries = numer / order, coordinates in the power basis at ``conductor``
    numer: np.ndarray
    order: int
    conductor: int

    @property
    def size(self) -> int:
        return len(self.objects)

    @cached_property
    def entries(self) -> tuple[tuple[CycNum, ...], ...]:
        pb = PowerBasis(self.conductor)
        r = self.size
        return tuple(tuple(pb.to_cycnum(self.numer[a, b], self.order) for b in range(r)) for a in range(r))

    def entry(self, a: int, b: int) -> CycNum:
        return PowerBasis(self.conductor).to_cycnum(self.numer[a, b], self.order)

    object_order = property(lambda self: self.objects)


@dataclass(eq=False)
class FusionTensor:
    rank: int
    coeffs: np.ndarray  # (rank, rank, rank) int64, coeffs[a, b, c] = N_ab^c
    method: str

    def __getitem__(self, idx):
        return self.coeffs[idx]

    def __eq__(self, other):
        if not isinstance(other, FusionTensor):
            return NotImplemented
        return self.rank == other.rank and np.array_equal(self.coeffs, other.coeffs)

    def first_difference(self, other: "FusionTensor") -> tuple[int, int, int] | None:
        diff = np.argwhere(self.coeffs != other.coeffs)
        return tuple(int(i) for i in diff[0]) if len(diff) else None


class DrinfeldDouble:
    """Per-group context: classes, centralizer tables and the value array."""

    def __init__(self, G: Group, cache=None):
        self.group = G
        self.classes = G.conjugacy_classes()
        self.centralizers: list[Subgroup] = [G.centralizer(c.rep) for c in self.classes]
        self.tables: list[CharTable] = [character_table(C, cache=cache) for C in self.centralizers]
        self.exponent = G.exponent()
        self.basis = PowerBasis(self.exponent)
        objs = []
        self.class_objects: list[np.ndarray] = []
        for ci, T in enumerate(self.tables):
            start = len(objs)
            for j in range(len(T)):
                objs.append((ci, j))
            self.class_objects.append(np.arange(start, len(objs)))
        labels = _labels(self, objs)
        self.objects = tuple(SimpleObject(i, ci, j, labels[i]) for i, (ci, j) in enumerate(objs))
        self.unit_index = 0  # class of the identity is first, trivial character first

    @property
    def rank(self) -> int:
        return len(self.objects)

    @cached_property
    def dims(self) -> np.ndarray:
        return np.array([self.classes[o.class_index].size * self.tables[o.class_index].degrees[o.irrep_index]
                         for o in self.objects], dtype=np.int64)

    @cached_property
    def pair_index(self) -> np.ndarray:
        """pair_index[g, x] = position of the commuting pair (g, x), or -1."""
        G = self.group
        commute = G.mult == G.mult.T
        idx = np.full(commute.shape, -1, dtype=np.int64)
        idx[commute] = np.arange(int(commute.sum()))
        idx.setflags(write=False)
        return idx

    @cached_property
    def pairs(self) -> np.ndarray:
        return np.argwhere(self.pair_index >= 0)

    @cached_property
    def values(self) -> np.ndarray:
        """X[a, p] = chi(tau_g^-1 x tau_g) for p = (g, x), g in the class of a."""
        G = self.group
        pb = self.basis
        X = np.zeros((self.rank, len(self.pairs), pb.phi), dtype=np.int64)
        tau = G.transversal
        for ci, (c, T) in enumerate(zip(self.classes, self.tables)):
            vec = np.array([[pb.from_cycnum(v) for v in row] for row in T.values], dtype=np.int64)
            cls_of = np.full(G.order, -1, dtype=np.int64)
            for j, cc in enumerate(T.classes):
                cls_of[list(cc.members)] = j
            for g in c.members:
                t = int(tau[g])
                t_inv = int(G.inv[t])
                xs = np.nonzero(self.pair_index[g] >= 0)[0]
                ys = G.mult[G.mult[t_inv, xs], t]
                cols = cls_of[ys]
                if np.any(cols < 0):
                    raise InvariantError("transversal does not conjugate the centralizers")
                X[self.class_objects[ci][:, None], self.pair_index[g, xs][None, :]] = vec[:, cols]
        X.setflags(write=False)
        return X

    # -- objects ----------------------------------------------------------------

    def object(self, key) -> SimpleObject:
        if isinstance(key, SimpleObject):
            return key
        if isinstance(key, str):
            for o in self.objects:
                if o.label == key:
                    return o
            raise KeyError(key)
        return self.objects[int(key)]

    def character(self, a) -> DoubleCharacter:
        a = self.object(a)
        pb = self.basis
        out = {}
        row = self.values[a.index]
        for p in np.nonzero(np.any(row != 0, axis=1))[0]:
            g, x = self.pairs[p]
            out[(int(g), int(x))] = pb.to_cycnum(row[p])
        return DoubleCharacter(a, out)

    @cached_property
    def dual_permutation(self) -> np.ndarray:
        """X_{a*}(g, x) = conj X_a(g^-1, x)."""
        G = self.group
        X = self.values
        g, x = self.pairs[:, 0], self.pairs[:, 1]
        swap = self.pair_index[G.inv[g], x]
        Y = self.basis.conj(X[:, swap])
        keys = {X[a].tobytes(): a for a in range(self.rank)}
        perm = np.empty(self.rank, dtype=np.int64)
        for a in range(self.rank):
            b = keys.get(np.ascontiguousarray(Y[a]).tobytes())
            if b is None:
                raise InvariantError(f"no simple object matches the dual of {self.objects[a].label}")
            perm[a] = b
        if not np.array_equal(perm[perm], np.arange(self.rank)):
            raise InvariantError("duality is not an involution")
        return perm

    def dual(self, a) -> SimpleObject:
        return self.objects[int(self.dual_permutation[self.object(a).index])]

    def dimension(self, a) -> int:
        return int(self.dims[self.object(a).index])

    def resolve(self, g: int, chi: Callable[[int], CycNum]) -> SimpleObject:
        """The object V_{g, chi} for any g, with chi a character of C(g).

        Moves chi to the centralizer of the class representative via
        y -> chi(tau_g y tau_g^-1) and matches it against that table.
        """
        G = self.group
        ci = int(G.class_index[g])
        t = int(G.transversal[g])
        t_inv = int(G.inv[t])
        T = self.tables[ci]
        j = T.find(lambda y: chi(G.mul(t, y, t_inv)))
        return self.objects[int(self.class_objects[ci][j])]

    # -- S and Verlinde -----------------------------------------------------------

    @cached_property
    def s_numer(self) -> np.ndarray:
        """|G| S_ab = sum over commuting (g, h) of conj X_a(g, h) conj X_b(h, g)."""
        X = self.values
        pb = self.basis
        swap = self.pair_index[self.pairs[:, 1], self.pairs[:, 0]]
        A = pb.conj(X)
        B = pb.conj(X[:, swap])
        out = pb.pair_sum(A, B)
        out.setflags(write=False)
        return out

    def s_matrix(self, check: bool = True) -> SMatrix:
        n = self.group.order
        T = self.s_numer
        S = SMatrix(self.objects, self.unit_index, T, n, self.exponent)
        if check:
            check_s_matrix(self, S)
        return S

    def verlinde(self) -> FusionTensor:
        return _verlinde_numer(self.s_numer, self.group.order, self.basis, self.unit_index)


_DOUBLES: "weakref.WeakKeyDictionary[Group, DrinfeldDouble]" = weakref.WeakKeyDictionary()


def drinfeld_double(G, cache=None) -> DrinfeldDouble:
    """Memoised DrinfeldDouble for a group (or anything build_group accepts)."""
    if isinstance(G, DrinfeldDouble):
        return G
    G = _spec_group(G) if isinstance(G, str) else build_group(G)
    D = _DOUBLES.get(G)
    if D is None:
        D = DrinfeldDouble(G, cache=cache)
        _DOUBLES[G] = D
    return D


@lru_cache(maxsize=64)
def _spec_group(spec: str) -> Group:
    return build_group(spec)


def integral_tensor(raw: np.ndarray, den_by_c: np.ndarray, method: str) -> np.ndarray:
    """Divide raw[a, b, c, :] by den_by_c[c] and insist on nonnegative integers."""
    if np.any(raw[..., 1:]):
        a, b, c = (int(i) for i in np.argwhere(np.any(raw[..., 1:] != 0, axis=-1))[0])
        raise InvariantError(f"{method}: coefficient ({a},{b},{c}) is irrational")
    const = raw[..., 0]
    den = np.asarray(den_by_c, dtype=np.int64)[None, None, :]
    if np.any(const % den):
        a, b, c = (int(i) for i in np.argwhere(const % den != 0)[0])
        raise InvariantError(f"{method}: coefficient ({a},{b},{c}) = {Fraction(int(const[a, b, c]), int(den[0, 0, c]))} is not an integer")
    N = const // den
    if np.any(N < 0):
        a, b, c = (int(i) for i in np.argwhere(N < 0)[0])
        raise InvariantError(f"{method}: coefficient ({a},{b},{c}) = {N[a, b, c]} is negative")
    return N


def check_s_matrix(D: DrinfeldDouble, S: SMatrix) -> None:
    """Symmetry, unitarity, S^2 = duality permutation, positive unit row."""
    T = S.numer
    n = S.order
    pb = D.basis
    r = D.rank
    if not np.array_equal(T, T.transpose(1, 0, 2)):
        raise InvariantError("S is not symmetric")
    # (T T^dagger)_ac = sum_b T_ab conj(T_cb) = n^2 delta_ac
    TT = pb.pair_sum(T, pb.conj(T))
    eye = np.zeros_like(TT)
    eye[np.arange(r), np.arange(r), 0] = n * n
    if not np.array_equal(TT, eye):
        raise InvariantError("S is not unitary")
    T2 = pb.pair_sum(T, np.ascontiguousarray(T.transpose(1, 0, 2)))
    perm = np.zeros_like(T2)
    perm[np.arange(r), D.dual_permutation, 0] = n * n
    if not np.array_equal(T2, perm):
        raise InvariantError("S^2 is not the duality permutation")
    unit = T[S.unit_index]
    if np.any(unit[:, 1:]) or np.any(unit[:, 0] <= 0):
        raise InvariantError("unit row of S is not positive")
    if not np.array_equal(unit[:, 0], D.dims):
        raise InvariantError("unit row of S differs from dimensions / |G|")


# -- module-level operations ----------------------------------------------------


def simple_objects(G) -> tuple[SimpleObject, ...]:
    return drinfeld_double(G).objects


def double_character(G, a) -> DoubleCharacter:
    return drinfeld_double(G).character(a)


def dual(G, a) -> SimpleObject:
    return drinfeld_double(G).dual(a)


def dimension(G, a) -> int:
    return drinfeld_double(G).dimension(a)


def s_matrix(G, check: bool = True) -> SMatrix:
    return drinfeld_double(G).s_matrix(check=check)


def verlinde_fusion(S) -> FusionTensor:
    """Fusion tensor from an S-matrix (or from a group / double)."""
    if isinstance(S, SMatrix):
        return _verlinde_numer(np.asarray(S.numer), S.order, PowerBasis(S.conductor), S.unit_index)
    return drinfeld_double(S).verlinde()


def _verlinde_numer(T: np.ndarray, n: int, pb: PowerBasis, unit_index: int) -> FusionTensor:
    """N_ab^c = sum_r S_ar S_br conj(S_cr) / S_0r with S = T/n, in integers.

    S_0r = d_r/n turns this into (1/n^2) sum_r T_ar T_br conj(T_cr) / d_r;
    the 1/d_r are cleared with L = lcm(d_r).
    """
    unit = T[unit_index]
    if np.any(unit[:, 1:]) or np.any(unit[:, 0] <= 0):
        raise InvariantError("unit row of S is not positive")
    d = unit[:, 0]
    r = T.shape[0]
    L = reduce(math.lcm, (int(v) for v in d), 1)
    w = np.array([L // int(v) for v in d], dtype=np.int64)
    bound = r * pb.phi ** 2 * int(np.abs(T).max()) ** 3 * int(w.max())
    if bound >= _INT_BOUND:
        raise OverflowError("Verlinde sum may exceed the 64-bit range")
    raw = pb.triple_sum(T, T, T, w)
    N = integral_tensor(raw, np.full(r, n * n * L, dtype=np.int64), "verlinde")
    return FusionTensor(r, N, "verlinde")


# -- labels -----------------------------------------------------------------------


def _labels(D: DrinfeldDouble, objs: list[tuple[int, int]]) -> list[str]:
    G = D.group
    fam = G.family or ("",)
    special = None
    if fam[0] == "dihedral" and fam[1] >= 3:
        special = _family_char_labels(D, x_order=fam[1], dicyclic=False)
    elif fam[0] == "dicyclic" and fam[1] >= 2:
        special = _family_char_labels(D, x_order=2 * fam[1], dicyclic=True)
    out = []
    for ci, j in objs:
        rep = G.label(D.classes[ci].rep)
        name = special[ci][j] if special else f"π{j}"
        out.append(f"V_{{{rep},{name}}}")
    return out


def _root_exponent(z: CycNum, order: int) -> int | None:
    for a in range(order):
        if z == CycNum.root(order, a):
            return a
    return None


def _family_char_labels(D: DrinfeldDouble, x_order: int, dicyclic: bool) -> list[list[str]]:
    G = D.group
    x = G.elements.index((1, 0))
    y = G.elements.index((0, 1))
    n = G.family[1]
    z = G.elements.index((x_order // 2, 0)) if x_order % 2 == 0 else None
    one, minus = CycNum.rational(1), CycNum.rational(-1)
    i_unit = CycNum.root(4, 1)
    sign = lambda v: "1" if v == one else "s"  # noqa: E731
    quarter = {one: "1", i_unit: "t_i", minus: "t_{-1}", -i_unit: "t_{-i}"}
    labels = []
    for ci, (c, T) in enumerate(zip(D.classes, D.tables)):
        C = D.centralizers[ci]
        names = []
        for j in range(len(T)):
            chi = lambda g, j=j: T.value(j, g)  # noqa: E731
            deg = T.degrees[j]
            if C.order == G.order:
                if deg == 2:
                    a = _theta_index(chi(x), x_order)
                    names.append(f"χ_{a}" if a is not None else f"π{j}")
                elif dicyclic and n % 2 == 1:
                    names.append(quarter.get(chi(y), f"π{j}") if chi(y) != one else "1")
                elif x_order % 2 == 1:
                    names.append(sign(chi(y)))
                else:
                    names.append(f"({sign(chi(y))},{sign(chi(x))})")
            elif x in C and C.order == x_order:
                a = _root_exponent(chi(x), x_order)
                names.append(f"ρ_{a}" if a is not None else f"π{j}")
            elif C.order == 2:
                names.append(sign(chi(c.rep)))
            elif C.order == 4 and z is not None and z in C:
                g = c.rep
                if G.element_orders[g] == 2:
                    t = lambda v: "1" if v == one else "t"  # noqa: E731
                    names.append(f"({t(chi(g))},{t(chi(z))})")
                else:
                    names.append(quarter.get(chi(g), f"π{j}"))
            else:
                names.append(f"π{j}")
        labels.append(names)
    return labels


def _theta_index(v: CycNum, order: int) -> int | None:
    for a in range(1, (order + 1) // 2 + 1):
        if v == CycNum.root(order, a) + CycNum.root(order, -a % order):
            return a
    return None
