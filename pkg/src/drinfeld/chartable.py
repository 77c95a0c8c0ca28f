"""Irreducible character tables by Dixon's method, and class-function calculus.

The table of a (sub)group H is computed from its class multiplication
constants: the central characters are the common eigenvectors of the class-sum
matrices over a prime field F_p with p = 1 (mod exp(H)), and character values
are lifted back to Q(zeta_e) through the eigenvalue multiplicities of each
class representative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Callable, Iterator, Mapping, Sequence

import numpy as np

from .cyclotomic import CycNum
from .group import ConjClass, Group, GroupError, Subgroup

if TYPE_CHECKING:
    from .cache import TableCache

__all__ = [
    "ClassFunction",
    "CharTable",
    "CharTableError",
    "character_table",
    "admissible_primes",
    "inner_product",
    "pointwise_product",
    "restrict",
    "conjugate_twist",
    "decompose",
]

TABLE_SIZE_CAP = 10000


class CharTableError(RuntimeError):
    """Dixon's algorithm failed to produce a consistent table."""


class ClassFunction:
    """A function on the elements of a subgroup, usually a character."""

    __slots__ = ("domain", "values")

    def __init__(self, domain: Subgroup, values: Mapping[int, CycNum]):
        self.domain = domain
        self.values = dict(values)

    def __call__(self, g: int) -> CycNum:
        return self.values[int(g)]

    def degree(self) -> CycNum:
        return self.values[0]

    def __eq__(self, other):
        if not isinstance(other, ClassFunction):
            return NotImplemented
        return self.domain == other.domain and self.values == other.values

    def __hash__(self):
        return hash((self.domain, tuple(sorted(self.values.items()))))

    def __mul__(self, other: "ClassFunction") -> "ClassFunction":
        return pointwise_product(self, other)

    def __add__(self, other: "ClassFunction") -> "ClassFunction":
        _same_domain(self, other)
        return ClassFunction(self.domain, {g: v + other.values[g] for g, v in self.values.items()})

    def __sub__(self, other: "ClassFunction") -> "ClassFunction":
        _same_domain(self, other)
        return ClassFunction(self.domain, {g: v - other.values[g] for g, v in self.values.items()})

    def conjugate(self) -> "ClassFunction":
        return ClassFunction(self.domain, {g: v.conjugate() for g, v in self.values.items()})

    def is_class_function(self) -> bool:
        G = self.domain.parent
        for g, v in self.values.items():
            for h in self.domain.members:
                if self.values[G.conj(g, h)] != v:
                    return False
        return True

    def __repr__(self):
        G = self.domain.parent
        shown = ", ".join(f"{G.label(g)}: {self.values[g]!r}" for g in self.domain.members[:6])
        return f"ClassFunction({shown}{', ...' if self.domain.order > 6 else ''})"


def _same_domain(f: ClassFunction, g: ClassFunction) -> None:
    if f.domain != g.domain:
        raise ValueError("class functions live on different subgroups")


@dataclass(eq=False)
class CharTable:
    """Irreducible characters of a subgroup, values indexed [character][class]."""

    group: Subgroup
    classes: tuple[ConjClass, ...]
    conductor: int
    values: tuple[tuple[CycNum, ...], ...]
    prime: int | None = None

    def __post_init__(self):
        self._class_of = {g: i for i, c in enumerate(self.classes) for g in c.members}
        self._irr = None

    def __len__(self):
        return len(self.values)

    @property
    def degrees(self) -> list[int]:
        return [int(row[0].as_integer()) for row in self.values]

    @property
    def irreducibles(self) -> list[ClassFunction]:
        if self._irr is None:
            self._irr = [self.character(i) for i in range(len(self.values))]
        return self._irr

    def class_of(self, g: int) -> int:
        return self._class_of[int(g)]

    def value(self, i: int, g: int) -> CycNum:
        return self.values[i][self._class_of[int(g)]]

    def character(self, i: int) -> ClassFunction:
        row = self.values[i]
        return ClassFunction(self.group, {g: row[self._class_of[g]] for g in self.group.members})

    def find(self, f: ClassFunction | Callable[[int], CycNum]) -> int:
        """Index of the irreducible equal to ``f`` (checked on class representatives)."""
        for i, row in enumerate(self.values):
            if all(row[j] == f(c.rep) for j, c in enumerate(self.classes)):
                return i
        raise KeyError("class function is not an irreducible character of this table")

    def to_json(self) -> dict:
        local = self.group.local_index
        return {
            "order": self.group.order,
            "conductor": self.conductor,
            "class_reps": [local[c.rep] for c in self.classes],
            "class_sizes": [c.size for c in self.classes],
            "values": [[v.to_json() for v in row] for row in self.values],
        }

    @classmethod
    def from_json(cls, H: Subgroup, data: Mapping) -> "CharTable":
        classes = H.conjugacy_classes()
        local = H.local_index
        if [local[c.rep] for c in classes] != list(data["class_reps"]):
            raise CharTableError("cached table does not match the class ordering")
        values = tuple(tuple(CycNum.from_json(v) for v in row) for row in data["values"])
        return cls(H, classes, int(data["conductor"]), values)


# -- prime field helpers ------------------------------------------------------


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def admissible_primes(order: int, exponent: int) -> Iterator[int]:
    """Primes p = 1 (mod exponent) with p > 2 sqrt(order), increasing."""
    p = 1
    while True:
        p += exponent
        if p * p > 4 * order and _is_prime(p):
            yield p


def _primitive_root(p: int) -> int:
    factors = [q for q in range(2, p) if (p - 1) % q == 0 and _is_prime(q)]
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
            return g
    return 1  # p == 2


def _rref(A: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    A = A.copy() % p
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if len(nz) == 0:
            continue
        k = r + nz[0]
        A[[r, k]] = A[[k, r]]
        A[r] = (A[r] * pow(int(A[r, c]), -1, p)) % p
        others = np.nonzero(A[:, c])[0]
        for i in others:
            if i != r:
                A[i] = (A[i] - A[i, c] * A[r]) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def _nullspace(A: np.ndarray, p: int) -> np.ndarray:
    """Columns spanning {v : A v = 0} over F_p."""
    cols = A.shape[1]
    R, pivots = _rref(A, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for j, f in enumerate(free):
        basis[f, j] = 1
        for i, pc in enumerate(pivots):
            basis[pc, j] = (-R[i, f]) % p
    return basis


def _restricted(M: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """X with M B = B X for an M-invariant column space B."""
    MB = (M @ B) % p
    _, piv_rows = _rref(B.T.copy(), p)
    Bp = B[piv_rows]
    inv = _mat_inv(Bp, p)
    return (inv @ MB[piv_rows]) % p


def _mat_inv(A: np.ndarray, p: int) -> np.ndarray:
    n = A.shape[0]
    R, piv = _rref(np.hstack([A % p, np.eye(n, dtype=np.int64)]), p)
    if piv[:n] != list(range(n)):
        raise CharTableError("singular matrix in eigenspace restriction")
    return R[:, n:]


def _split(spaces: list[np.ndarray], M: np.ndarray, p: int) -> list[np.ndarray]:
    out = []
    for B in spaces:
        d = B.shape[1]
        if d == 1:
            out.append(B)
            continue
        X = _restricted(M, B, p)
        pieces = []
        found = 0
        for lam in range(p):
            N = _nullspace((X - lam * np.eye(d, dtype=np.int64)) % p, p)
            if N.shape[1]:
                pieces.append((B @ N) % p)
                found += N.shape[1]
                if found == d:
                    break
        if found != d:
            raise CharTableError("class matrix is not diagonalisable mod p")
        out.extend(pieces)
    return out


# -- Dixon ------------------------------------------------------------------


def _class_matrices(H: Subgroup, classes: Sequence[ConjClass]) -> list[np.ndarray]:
    """M_i[j, k] = #{(u, v) in C_i x C_j : u v = rep_k}."""
    G = H.parent
    r = len(classes)
    cls = np.full(G.order, -1, dtype=np.int64)
    for i, c in enumerate(classes):
        cls[list(c.members)] = i
    reps = np.array([c.rep for c in classes])
    mats = []
    for c in classes:
        u_inv = G.inv[np.array(c.members)]
        v = G.mult[u_inv[:, None], reps[None, :]]  # v = u^-1 rep_k
        M = np.zeros((r, r), dtype=np.int64)
        np.add.at(M, (cls[v], np.broadcast_to(np.arange(r), v.shape)), 1)
        mats.append(M)
    return mats


def _dixon(H: Subgroup, classes: tuple[ConjClass, ...], e: int, p: int) -> list[tuple[CycNum, ...]]:
    G = H.parent
    r = len(classes)
    order = H.order
    mats = _class_matrices(H, classes)
    spaces = [np.eye(r, dtype=np.int64)]
    for M in mats:
        spaces = _split(spaces, M % p, p)
        if all(B.shape[1] == 1 for B in spaces):
            break
    coeff = 1
    while any(B.shape[1] > 1 for B in spaces):
        # deterministic combinations sum_i c^i M_i, c = 1, 2, 3, ...
        combo = sum(pow(coeff, i, p) * M for i, M in enumerate(mats)) % p
        spaces = _split(spaces, combo, p)
        coeff += 1
        if coeff > p:
            raise CharTableError("eigenspaces did not split")

    sizes = np.array([c.size for c in classes])
    cls = {g: i for i, c in enumerate(classes) for g in c.members}
    inv_class = [cls[int(G.inv[c.rep])] for c in classes]
    z = pow(_primitive_root(p), (p - 1) // e, p)
    # power maps: class of rep_k^l for l = 0 .. e-1
    powers = np.zeros((r, e), dtype=np.int64)
    for k, c in enumerate(classes):
        g = 0
        for l in range(e):
            powers[k, l] = cls[g]
            g = int(G.mult[g, c.rep])
    dft = np.array([[pow(z, (-j * l) % e, p) for l in range(e)] for j in range(e)], dtype=np.int64)
    e_inv = pow(e, -1, p)
    size_inv = np.array([pow(int(s), -1, p) for s in sizes], dtype=np.int64)

    rows = []
    for B in spaces:
        w = B[:, 0] % p
        w = (w * pow(int(w[0]), -1, p)) % p
        norm = sum(int(w[k]) * int(w[inv_class[k]]) * int(size_inv[k]) for k in range(r)) % p
        d2 = (order * pow(norm, -1, p)) % p
        degree = next((d for d in range(1, math.isqrt(order) + 1) if d * d % p == d2), None)
        if degree is None:
            raise CharTableError("no admissible degree for a central character")
        chi = (w * degree % p) * size_inv % p  # chi(rep_k) mod p
        values = []
        for k in range(r):
            seq = chi[powers[k]]  # chi(rep^l)
            mult = (dft @ seq) % p * e_inv % p
            if mult.max() > degree or mult.sum() != degree:
                raise CharTableError("eigenvalue multiplicities out of range")
            values.append(CycNum.from_exponents(e, {j: int(m) for j, m in enumerate(mult) if m}))
        rows.append(tuple(values))
    return rows


def _sort_key(row: tuple[CycNum, ...], e: int):
    trivial = all(v == 1 for v in row)
    return (not trivial, int(row[0].as_integer()), tuple(tuple(v.coeffs_at(e)) for v in row))


def character_table(H: Group | Subgroup, prime: int | None = None, cache: "TableCache | None" = None) -> CharTable:
    """Exact irreducible character table of ``H``.

    Characters are ordered trivial first, then by (degree, value tuple) with
    values compared coefficient-wise at conductor exp(H) in class order.
    """
    if isinstance(H, Group):
        H = H.whole()
    if H.order > TABLE_SIZE_CAP:
        raise GroupError(f"subgroup of order {H.order} exceeds the size cap")
    key = None
    if cache is not None and prime is None:
        key = cache.key("chartable", H.local_table())
        data = cache.get(key)
        if data is not None:
            return CharTable.from_json(H, data)
    classes = H.conjugacy_classes()
    e = H.exponent()
    if prime is None:
        prime = next(admissible_primes(H.order, e))
    elif prime % e != 1 or not _is_prime(prime) or prime * prime <= 4 * H.order:
        raise ValueError(f"{prime} is not an admissible prime for this group")
    rows = _dixon(H, classes, e, prime)
    rows.sort(key=lambda row: _sort_key(row, e))
    table = CharTable(H, classes, e, tuple(rows), prime)
    if len(rows) != len(classes):
        raise CharTableError("wrong number of irreducible characters")
    if key is not None:
        cache.put(key, table.to_json())
    return table


# -- class function calculus ----------------------------------------------------


def inner_product(f: ClassFunction, g: ClassFunction, H: Subgroup) -> CycNum:
    """(1/|H|) sum_{x in H} f(x) conj(g(x))."""
    try:
        total = sum((f.values[x] * g.values[x].conjugate() for x in H.members), CycNum.rational(0))
    except KeyError as exc:
        raise ValueError("class function not defined on the whole subgroup") from exc
    return total * Fraction(1, H.order)


def pointwise_product(f: ClassFunction, g: ClassFunction) -> ClassFunction:
    _same_domain(f, g)
    return ClassFunction(f.domain, {x: v * g.values[x] for x, v in f.values.items()})


def restrict(f: ClassFunction, S: Subgroup) -> ClassFunction:
    if not S.issubset(f.domain):
        raise ValueError("restriction target is not a subgroup of the domain")
    return ClassFunction(S, {x: f.values[x] for x in S.members})


def conjugate_twist(f: ClassFunction, r: int, k: int) -> ClassFunction:
    """The function x -> f(r x r^-1) on C(k), for f on C(g_K) with r^-1 g_K r = k."""
    dom = f.domain
    G = dom.parent
    r_inv = int(G.inv[r])
    if dom.centralizes is not None:
        if G.mul(r_inv, dom.centralizes, r) != k:
            raise ValueError("r does not conjugate the class representative to k")
    target = G.centralizer(k)
    if dom.conjugated(r) != target:
        raise ValueError("r does not conjugate the domain onto C(k)")
    return ClassFunction(target, {x: f.values[G.mul(r, x, r_inv)] for x in target.members})


def decompose(f: ClassFunction, table: CharTable) -> list[Fraction]:
    """Multiplicities <f, chi_i> against each irreducible of the table."""
    out = []
    for chi in table.irreducibles:
        q = inner_product(f, chi, table.group).as_rational()
        if q is None:
            raise ValueError("inner product is not rational")
        out.append(q)
    return out
