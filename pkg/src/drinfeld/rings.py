"""Based fusion rings: axioms, isomorphism search, and the odd dihedral X-pattern."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .double import FusionTensor, drinfeld_double
from .fusion import BudgetError, fusion_tensor
from .group import Group, build_group

__all__ = [
    "FusionRing",
    "RingReport",
    "Type3Report",
    "ring_from_double",
    "group_ring",
    "verify_ring_axioms",
    "rings_isomorphic",
    "fingerprints",
    "verify_type3_pattern",
]

DEFAULT_ISO_BUDGET = 32


@dataclass(eq=False)
class FusionRing:
    rank: int
    labels: tuple[str, ...]
    unit_index: int
    dual: np.ndarray
    dims: np.ndarray
    tensor: FusionTensor

    @property
    def N(self) -> np.ndarray:
        return self.tensor.coeffs

    @classmethod
    def from_tensor(cls, N: np.ndarray, labels: Sequence[str] | None = None, dims=None,
                    unit_index: int | None = None, dual=None, method: str = "given") -> "FusionRing":
        """Fill in whatever is missing: the unit row, duals from N_ab^0, dims from N."""
        N = np.asarray(N, dtype=np.int64)
        r = N.shape[0]
        if N.shape != (r, r, r):
            raise ValueError("fusion tensor must be rank x rank x rank")
        if unit_index is None:
            eye = np.eye(r, dtype=np.int64)
            hits = [a for a in range(r) if np.array_equal(N[a], eye)]
            if not hits:
                raise ValueError("no unit object in the tensor")
            unit_index = hits[0]
        if dual is None:
            dual = np.array([int(np.argmax(N[a, :, unit_index])) for a in range(r)], dtype=np.int64)
        if dims is None:
            dims = _integer_dims(N)
        labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(r))
        return cls(r, labels, int(unit_index), np.asarray(dual, dtype=np.int64),
                   np.asarray(dims, dtype=np.int64), FusionTensor(r, N, method))


def _integer_dims(N: np.ndarray) -> np.ndarray:
    """All-ones dimensions when they are consistent (pointed rings); otherwise ask."""
    ones = np.ones(N.shape[0], dtype=np.int64)
    if np.array_equal(N @ ones, np.ones((N.shape[0], N.shape[0]), dtype=np.int64)):
        return ones
    raise ValueError("dimensions are not all 1; supply them explicitly")


def ring_from_double(G, method: str = "verlinde", budget: int = 64) -> FusionRing:
    D = drinfeld_double(G)
    T = fusion_tensor(D.group, method, budget=budget)
    return FusionRing(D.rank, tuple(o.label for o in D.objects), D.unit_index,
                      D.dual_permutation.copy(), D.dims.copy(), T)


def group_ring(G) -> FusionRing:
    """Z[G]: basis the elements, g * h = gh, all dimensions 1."""
    G = build_group(G)
    n = G.order
    N = np.zeros((n, n, n), dtype=np.int64)
    a, b = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    N[a, b, G.mult] = 1
    labels = tuple(G.label(g) for g in range(n))
    return FusionRing(n, labels, 0, G.inv.astype(np.int64).copy(), np.ones(n, dtype=np.int64),
                      FusionTensor(n, N, "group-ring"))


# -- axioms -----------------------------------------------------------------------------


@dataclass
class RingReport:
    checks: dict[str, bool] = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def record(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks[name] = bool(passed)
        if not passed:
            self.failures.append(f"{name}: {detail}" if detail else name)


def verify_ring_axioms(R: FusionRing) -> RingReport:
    N = R.N
    r = R.rank
    u = R.unit_index
    d = R.dual
    rep = RingReport()
    eye = np.eye(r, dtype=np.int64)
    rep.record("nonnegative", bool(np.all(N >= 0)))
    rep.record("unit", np.array_equal(N[u], eye) and np.array_equal(N[:, u, :], eye))
    rep.record("commutative", np.array_equal(N, N.transpose(1, 0, 2)))
    bad = None
    flat = N.reshape(r, r * r)
    for a in range(r):
        # sum_m N_ab^m N_mc^e  vs  sum_m N_bc^m N_am^e
        left = (N[a] @ flat).reshape(r, r, r)
        right = (N.reshape(r * r, r) @ N[a]).reshape(r, r, r)
        if not np.array_equal(left, right):
            b, c, e = (int(i) for i in np.argwhere(left != right)[0])
            bad = (a, b, c, e)
            break
    rep.record("associative", bad is None, f"first failure at (a,b,c,d) = {bad}")
    involution = np.array_equal(d[d], np.arange(r)) and sorted(d.tolist()) == list(range(r))
    rep.record("dual-involution", involution)
    rep.record("dual-unit", int(d[u]) == u)
    target = np.zeros((r, r), dtype=np.int64)
    if involution:
        target[np.arange(r), d] = 1
    rep.record("unit-coefficient", np.array_equal(N[:, :, u], target), "N_ab^0 != delta(a, dual b)")
    if involution:
        rep.record("dual-compatible", np.array_equal(N, N[np.ix_(d, d, d)]))
    else:
        rep.record("dual-compatible", False, "dual is not a permutation")
    dims = R.dims
    rep.record("dims-multiplicative", np.array_equal(N @ dims, np.multiply.outer(dims, dims)))
    return rep


# -- fingerprints -------------------------------------------------------------------------

def _crt_primes(count: int = 24, below: int = 1 << 26) -> tuple[int, ...]:
    # below 2^26 a row of 64 products still fits in int64
    out, n = [], below - 1
    while len(out) < count:
        if all(n % d for d in range(2, math.isqrt(n) + 1)):
            out.append(n)
        n -= 2
    return tuple(out)


_CRT_PRIMES = _crt_primes()


def _charpoly_mod(M: np.ndarray, p: int) -> list[int]:
    """Characteristic polynomial mod p via Hessenberg reduction (monic, high degree first)."""
    A = np.asarray(M, dtype=np.int64) % p
    n = A.shape[0]
    for j in range(n - 2):
        nz = np.flatnonzero(A[j + 1:, j])
        if len(nz) == 0:
            continue
        piv = j + 1 + int(nz[0])
        if piv != j + 1:
            A[[piv, j + 1]] = A[[j + 1, piv]]
            A[:, [piv, j + 1]] = A[:, [j + 1, piv]]
        inv = pow(int(A[j + 1, j]), -1, p)
        f = A[j + 2:, j] * inv % p
        if not f.any():
            continue
        A[j + 2:] = (A[j + 2:] - f[:, None] * A[j + 1][None, :]) % p
        A[:, j + 1] = (A[:, j + 1] + A[:, j + 2:] @ f) % p
    A = A.tolist()
    # recurrence for the characteristic polynomials of leading blocks
    polys = [[1]]
    for m in range(1, n + 1):
        h = A[m - 1][m - 1]
        prev = polys[-1]
        cur = [0] * (m + 1)
        for i, c in enumerate(prev):
            cur[i] = (cur[i] + c) % p
            cur[i + 1] = (cur[i + 1] - h * c) % p
        t = 1
        for i in range(m - 1, 0, -1):
            t = t * A[i][i - 1] % p
            if not t:
                break
            coef = t * A[i - 1][m - 1] % p
            base = polys[i - 1]
            shift = m + 1 - len(base)
            for k, c in enumerate(base):
                cur[k + shift] = (cur[k + shift] - coef * c) % p
        polys.append(cur)
    return polys[-1]


def _charpoly(M: np.ndarray) -> tuple[int, ...]:
    """Exact integer characteristic polynomial by CRT over word-size primes."""
    n = M.shape[0]
    rho = max(1, int(np.abs(M).sum(axis=1).max()))
    bound = 2 * (2 * rho) ** n + 1  # |c_k| <= C(n, k) rho^k < (2 rho)^n
    residues, modulus = [], 1
    for p in _CRT_PRIMES:
        residues.append((p, _charpoly_mod(M, p)))
        modulus *= p
        if modulus > bound:
            break
    else:
        raise OverflowError("characteristic polynomial needs more CRT primes")
    out = []
    for k in range(n + 1):
        x, m = 0, 1
        for p, coeffs in residues:
            t = ((coeffs[k] - x) * pow(m, -1, p)) % p
            x += m * t
            m *= p
        out.append(x - m if x > m // 2 else x)
    return tuple(out)


def fingerprints(R: FusionRing) -> list[tuple]:
    """Per object: sorted row sums, sorted column sums and char poly of N_a."""
    out = []
    for a in range(R.rank):
        M = R.N[a]
        out.append((tuple(sorted(M.sum(axis=1).tolist())), tuple(sorted(M.sum(axis=0).tolist())), _charpoly(M)))
    return out


# -- isomorphism search --------------------------------------------------------------------


def rings_isomorphic(R1: FusionRing, R2: FusionRing, prune: bool = True,
                     budget: int = DEFAULT_ISO_BUDGET) -> np.ndarray | None:
    """A bijection phi with N1[a, b, c] = N2[phi a, phi b, phi c], or None.

    Backtracking with forward checking: once a -> a' and b -> b' are fixed,
    every c may only go to c' with N2[a', b', c'] = N1[a, b, c].
    """
    r = R1.rank
    if max(R1.rank, R2.rank) > budget:
        raise BudgetError(f"rank {max(R1.rank, R2.rank)} exceeds the isomorphism budget of {budget}")
    if R2.rank != r or sorted(R1.dims.tolist()) != sorted(R2.dims.tolist()):
        return None
    N1, N2 = R1.N, R2.N
    allowed = R1.dims[:, None] == R2.dims[None, :]
    self1 = R1.dual == np.arange(r)
    self2 = R2.dual == np.arange(r)
    allowed &= self1[:, None] == self2[None, :]
    allowed[R1.unit_index, :] = False
    allowed[:, R2.unit_index] = False
    allowed[R1.unit_index, R2.unit_index] = True
    if prune:
        f1, f2 = fingerprints(R1), fingerprints(R2)
        allowed &= np.array([[x == y for y in f2] for x in f1], dtype=bool)
    if not allowed.any(axis=1).all():
        return None

    phi = np.full(r, -1, dtype=np.int64)

    def assign(dom: np.ndarray, a: int, a2: int, order: list[int]) -> np.ndarray | None:
        dom = dom.copy()
        dom[a, :] = False
        dom[:, a2] = False
        dom[a, a2] = True
        da, da2 = int(R1.dual[a]), int(R2.dual[a2])
        keep = dom[da, da2]
        dom[da, :] = False
        dom[da, da2] = keep
        if not keep:
            return None
        for b in order + [a]:
            b2 = a2 if b == a else int(phi[b])
            dom &= N1[a, b, :][:, None] == N2[a2, b2, :][None, :]
            dom &= N1[b, a, :][:, None] == N2[b2, a2, :][None, :]
        if not dom.any(axis=1).all():
            return None
        return dom

    def search(dom: np.ndarray, order: list[int]) -> bool:
        free = [a for a in range(r) if phi[a] < 0]
        if not free:
            return True
        counts = dom[free].sum(axis=1)
        a = free[int(np.argmin(counts))]
        for a2 in np.flatnonzero(dom[a]):
            a2 = int(a2)
            if a2 in phi:
                continue
            nd = assign(dom, a, a2, order)
            if nd is None:
                continue
            phi[a] = a2
            if search(nd, order + [a]):
                return True
            phi[a] = -1
        return False

    if not search(allowed, []):
        return None
    if sorted(phi.tolist()) != list(range(r)) or not np.array_equal(N2[np.ix_(phi, phi, phi)], N1):
        raise AssertionError("isomorphism search returned an invalid bijection")
    return phi.copy()


# -- odd dihedral X-pattern --------------------------------------------------------------


@dataclass
class Type3Report:
    n: int
    I: str
    Z: str
    X: str
    X_prime: str
    Y: tuple[str, ...]
    checks: dict[str, bool]
    failures: list[str]

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    @property
    def y_count(self) -> int:
        return len(self.Y)


def verify_type3_pattern(n: int | Group, method: str = "verlinde") -> Type3Report:
    """Check X X = I + sum Y, X X' = Z + sum Y, X Y_i = X + X', X Z = X' in D(D_2n), n odd."""
    G = n if isinstance(n, Group) else None
    if G is None:
        if not isinstance(n, int) or n < 3 or n % 2 == 0:
            raise ValueError("the pattern needs a dihedral group D_2n with n odd and n >= 3")
        G = build_group(("dihedral", n))
    fam = G.family or ("",)
    if fam[0] != "dihedral" or fam[1] % 2 == 0 or fam[1] < 3:
        raise ValueError("the pattern needs a dihedral group D_2n with n odd and n >= 3")
    D = drinfeld_double(G)
    N = fusion_tensor(G, method, budget=max(64, D.rank)).coeffs
    I = D.unit_index
    Z = D.object("V_{1,s}").index
    X = D.object("V_{y,1}").index
    Xp = D.object("V_{y,s}").index
    Y = [a for a in range(D.rank) if a not in (I, Z, X, Xp)]

    def indicator(idx) -> np.ndarray:
        v = np.zeros(D.rank, dtype=np.int64)
        v[list(idx)] = 1
        return v

    checks, failures = {}, []

    def check(name, got, want):
        ok = np.array_equal(got, want)
        checks[name] = ok
        if not ok:
            failures.append(name)

    check("X*X = I + sum Y", N[X, X], indicator([I] + Y))
    check("X*X' = Z + sum Y", N[X, Xp], indicator([Z] + Y))
    for y in Y:
        check(f"X*{D.objects[y].label} = X + X'", N[X, y], indicator([X, Xp]))
    check("X*Z = X'", N[X, Z], indicator([Xp]))
    lab = lambda i: D.objects[i].label  # noqa: E731
    return Type3Report(fam[1], lab(I), lab(Z), lab(X), lab(Xp), tuple(lab(y) for y in Y), checks, failures)
