"""Exact arithmetic in cyclotomic fields.

Two layers live here:

* :class:`CycNum`, an immutable exact element of Q(zeta_N) stored in the power
  basis ``1, z, ..., z^(phi(N)-1)`` modulo the N-th cyclotomic polynomial, always
  normalised to the smallest conductor that contains it.
* :class:`PowerBasis`, integer arrays of power-basis coordinates for the
  cyclotomic integers Z[zeta_N], with vectorised multiplication, conjugation and
  the weighted triple-product sums that drive the S-matrix and fusion kernels.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Mapping

import numpy as np

__all__ = [
    "CycNum",
    "PowerBasis",
    "cyclotomic_polynomial",
    "euler_phi",
    "cyc_make",
    "cyc_arith",
    "cyc_inverse",
    "cyc_conjugate",
    "cyc_as_integer",
]


def _prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def euler_phi(n: int) -> int:
    result = n
    for p in _prime_factors(n):
        result -= result // p
    return result


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_divexact(a: list[int], b: list[int]) -> list[int]:
    # b monic, exact division assumed
    a = list(a)
    q = [0] * (len(a) - len(b) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = a[i + len(b) - 1]
        q[i] = c
        if c:
            for j, y in enumerate(b):
                a[i + j] -= c * y
    assert not any(a), "inexact polynomial division"
    return q


def _mobius(n: int) -> int:
    k = 0
    for p in _prime_factors(n):
        if n % (p * p) == 0:
            return 0
        k += 1
    return -1 if k % 2 else 1


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first.

    Built as prod_{d | n} (x^d - 1)^mu(n/d).
    """
    if n < 1:
        raise ValueError("conductor must be positive")
    num = [1]
    den = [1]
    for d in range(1, n + 1):
        if n % d:
            continue
        mu = _mobius(n // d)
        if mu == 0:
            continue
        f = [-1] + [0] * (d - 1) + [1]
        if mu == 1:
            num = _poly_mul(num, f)
        else:
            den = _poly_mul(den, f)
    return tuple(_poly_divexact(num, den))


@lru_cache(maxsize=None)
def _power_rows(n: int) -> np.ndarray:
    """Row k holds the power-basis coordinates of zeta_n^k, for 0 <= k < n."""
    phi = euler_phi(n)
    cyc = cyclotomic_polynomial(n)
    rows = np.zeros((n, phi), dtype=np.int64)
    cur = [0] * phi
    if phi:
        cur[0] = 1
    for k in range(n):
        rows[k] = cur
        # multiply by x, reduce x^phi = -sum cyc[i] x^i
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for i in range(phi):
                cur[i] -= top * cyc[i]
    rows.setflags(write=False)
    return rows


def _rank_pivots(mat: list[list[Fraction]], ncols: int) -> tuple[list[int], list[list[Fraction]]]:
    """Row pivots selecting an invertible square block of a full column rank matrix,
    and the inverse of that block."""
    rows = len(mat)
    chosen: list[int] = []
    basis: list[list[Fraction]] = []  # reduced copies of chosen rows
    owners: list[int] = []
    for r in range(rows):
        v = list(mat[r])
        for b, c in zip(basis, owners):
            if v[c]:
                f = v[c] / b[c]
                v = [x - f * y for x, y in zip(v, b)]
        lead = next((i for i, x in enumerate(v) if x), None)
        if lead is None:
            continue
        chosen.append(r)
        basis.append(v)
        owners.append(lead)
        if len(chosen) == ncols:
            break
    block = [list(mat[r]) for r in chosen]
    return chosen, _invert(block)


def _invert(m: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(m)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col])
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


@lru_cache(maxsize=None)
def _subfield(m: int, n: int):
    """Embedding of Q(zeta_m) into Q(zeta_n) (m | n) with a left inverse on pivot rows."""
    rows = _power_rows(n)
    step = n // m
    phi_m = euler_phi(m)
    emb = [[Fraction(int(rows[j * step][i])) for j in range(phi_m)] for i in range(euler_phi(n))]
    pivots, inv = _rank_pivots(emb, phi_m)
    return emb, pivots, inv


def _reduce(n: int, exps: Mapping[int, Fraction]) -> list[Fraction]:
    rows = _power_rows(n)
    out = [Fraction(0)] * euler_phi(n)
    for k, q in exps.items():
        if q:
            row = rows[k % n]
            for i, c in enumerate(row):
                if c:
                    out[i] += q * int(c)
    return out


def _lift(n: int, coeffs: Iterable[Fraction], m: int) -> list[Fraction]:
    """Coordinates at conductor n of an element given at conductor m | n."""
    step = n // m
    return _reduce(n, {i * step: c for i, c in enumerate(coeffs) if c})


def _canonical(n: int, coeffs: list[Fraction]) -> tuple[int, tuple[Fraction, ...]]:
    if not any(coeffs[1:]):
        return 1, (coeffs[0] if coeffs else Fraction(0),)
    shrunk = True
    while shrunk:
        shrunk = False
        for p in _prime_factors(n):
            m = n // p
            emb, pivots, inv = _subfield(m, n)
            sub = [sum((inv[i][j] * coeffs[pivots[j]] for j in range(len(pivots))), Fraction(0)) for i in range(len(pivots))]
            back = [sum((row[j] * sub[j] for j in range(len(sub)) if row[j]), Fraction(0)) for row in emb]
            if back == coeffs:
                n, coeffs = m, sub
                shrunk = True
                break
    return n, tuple(coeffs)


class CycNum:
    """An exact element of a cyclotomic field.

    ``CycNum.root(N, k)`` is zeta_N^k. Arithmetic with ints and Fractions is
    supported; mixed conductors are merged at their lcm and the result is
    reduced back to its minimal conductor.
    """

    __slots__ = ("_n", "_c", "_hash")

    def __init__(self, conductor: int, coeffs: Iterable = (0,)):
        if conductor < 1:
            raise ValueError(f"conductor must be >= 1, got {conductor}")
        c = [Fraction(x) for x in coeffs]
        phi = euler_phi(conductor)
        if len(c) > phi:
            c = _reduce(conductor, dict(enumerate(c)))
        else:
            c = c + [Fraction(0)] * (phi - len(c))
        self._n, self._c = _canonical(conductor, c)
        self._hash = None

    @classmethod
    def root(cls, conductor: int, exponent: int = 1) -> "CycNum":
        if conductor < 1:
            raise ValueError(f"conductor must be >= 1, got {conductor}")
        return cls.from_exponents(conductor, {exponent: 1})

    @classmethod
    def from_exponents(cls, conductor: int, exps: Mapping[int, object]) -> "CycNum":
        """Sum of q_k zeta_N^k for a mapping ``{k: q_k}``."""
        return cls(conductor, _reduce(conductor, {int(k): Fraction(v) for k, v in exps.items()}))

    @classmethod
    def rational(cls, q) -> "CycNum":
        return cls(1, (Fraction(q),))

    @property
    def conductor(self) -> int:
        return self._n

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._c

    def coeffs_at(self, n: int) -> list[Fraction]:
        """Power-basis coordinates at a conductor divisible by ours."""
        if n % self._n:
            raise ValueError(f"conductor {n} is not a multiple of {self._n}")
        return _lift(n, self._c, self._n)

    # -- arithmetic -------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "CycNum | None":
        if isinstance(other, CycNum):
            return other
        if isinstance(other, (int, Rational)):
            return CycNum.rational(other)
        return None

    def _merged(self, other: "CycNum"):
        n = math.lcm(self._n, other._n)
        return n, self.coeffs_at(n), other.coeffs_at(n)

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n, a, b = self._merged(o)
        return CycNum(n, [x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return CycNum(self._n, [-x for x in self._c])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o._n == 1:
            return CycNum(self._n, [x * o._c[0] for x in self._c])
        if self._n == 1:
            return CycNum(o._n, [x * self._c[0] for x in o._c])
        n, a, b = self._merged(o)
        prod: dict[int, Fraction] = {}
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] = prod.get(i + j, 0) + x * y
        return CycNum(n, _reduce(n, prod))

    __rmul__ = __mul__

    def inverse(self) -> "CycNum":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero cyclotomic number")
        n = self._n
        if n == 1:
            return CycNum.rational(1 / self._c[0])
        phi = len(self._c)
        # columns: self * z^j
        cols = [(self * CycNum.root(n, j)).coeffs_at(n) for j in range(phi)]
        mat = [[cols[j][i] for j in range(phi)] for i in range(phi)]
        inv = _invert(mat)
        return CycNum(n, [row[0] for row in inv])

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = CycNum.rational(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> "CycNum":
        return self.galois(-1)

    def galois(self, j: int) -> "CycNum":
        """Image under zeta_N -> zeta_N^j (j coprime to the conductor)."""
        n = self._n
        if math.gcd(j, n) != 1:
            raise ValueError(f"{j} is not a unit modulo {n}")
        return CycNum(n, _reduce(n, {(i * j) % n: c for i, c in enumerate(self._c) if c}))

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return self._n == 1 and self._c[0] == 0

    def is_rational(self) -> bool:
        return self._n == 1

    def as_rational(self) -> Fraction | None:
        return self._c[0] if self._n == 1 else None

    def as_integer(self) -> int | None:
        q = self.as_rational()
        if q is None or q.denominator != 1:
            return None
        return int(q)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._n == o._n and self._c == o._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._c[0]) if self._n == 1 else hash((self._n, self._c))
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    def __complex__(self):
        z = complex(math.cos(2 * math.pi / self._n), math.sin(2 * math.pi / self._n))
        return sum((float(c) * z**i for i, c in enumerate(self._c)), 0j)

    def approx(self) -> complex:
        """Floating point value, for display only."""
        return complex(self)

    def __repr__(self):
        if self._n == 1:
            return f"CycNum({self._c[0]})"
        terms = []
        for i, c in enumerate(self._c):
            if not c:
                continue
            z = "1" if i == 0 else (f"z{self._n}" if i == 1 else f"z{self._n}^{i}")
            terms.append(f"{c}*{z}")
        return "CycNum(" + " + ".join(terms) + ")"

    def __str__(self):
        if self._n == 1:
            return str(self._c[0])
        out = ""
        for i, c in enumerate(self._c):
            if not c:
                continue
            z = "" if i == 0 else (f"z{self._n}" if i == 1 else f"z{self._n}^{i}")
            mag = abs(c)
            body = str(mag) if not z else (z if mag == 1 else f"{mag}*{z}")
            if not out:
                out = ("-" if c < 0 else "") + body
            else:
                out += (" - " if c < 0 else " + ") + body
        return out or "0"

    def to_json(self) -> dict:
        return {
            "conductor": self._n,
            "coeffs": {str(i): str(c) for i, c in enumerate(self._c) if c},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "CycNum":
        n = int(data["conductor"])
        exps = {int(k): Fraction(v) for k, v in data.get("coeffs", {}).items()}
        return cls(n, [exps.get(i, Fraction(0)) for i in range(euler_phi(n))])


def cyc_make(conductor: int, exponent: int) -> CycNum:
    return CycNum.root(conductor, exponent)


def cyc_arith(a: CycNum, b: CycNum, op: str) -> CycNum:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def cyc_inverse(a: CycNum) -> CycNum:
    return a.inverse()


def cyc_conjugate(a: CycNum) -> CycNum:
    return a.conjugate()


def cyc_as_integer(a: CycNum) -> int | None:
    return a.as_integer()


class PowerBasis:
    """Vectorised arithmetic on cyclotomic integers of Z[zeta_N].

    An element is an int64 vector of length ``phi(N)``; arrays carry the
    coordinates on their last axis. Nothing here divides, so results stay exact
    as long as they fit in 64 bits (callers check magnitudes where it matters).
    """

    def __init__(self, n: int):
        self.n = n
        self.phi = euler_phi(n)
        self.rows = _power_rows(n)
        idx = np.add.outer(np.arange(self.phi), np.arange(self.phi)) % n
        # mult[i, j] = coordinates of z^(i+j)
        self._mult = self.rows[idx].reshape(self.phi * self.phi, self.phi)
        self._conj = self.rows[(-np.arange(self.phi)) % n]  # row i = conj(z^i)

    def root(self, k) -> np.ndarray:
        return self.rows[np.asarray(k) % self.n]

    def from_multiset(self, counts: np.ndarray, conductor: int) -> np.ndarray:
        """Coordinates of sum_j counts[..., j] zeta_conductor^j (conductor | N)."""
        step = self.n // conductor
        return counts @ self.rows[(np.arange(conductor) * step) % self.n]

    def from_cycnum(self, z: CycNum) -> np.ndarray:
        c = z.coeffs_at(self.n)
        if any(x.denominator != 1 for x in c):
            raise ValueError("not a cyclotomic integer in the power basis")
        return np.array([int(x) for x in c], dtype=np.int64)

    def to_cycnum(self, v, denominator: int = 1) -> CycNum:
        return CycNum(self.n, [Fraction(int(x), denominator) for x in v])

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a, b = np.broadcast_arrays(a, b)
        outer = a[..., :, None] * b[..., None, :]
        return outer.reshape(a.shape[:-1] + (self.phi * self.phi,)) @ self._mult

    def conj(self, a: np.ndarray) -> np.ndarray:
        return a @ self._conj

    def is_rational(self, a: np.ndarray) -> np.ndarray:
        return ~np.any(a[..., 1:], axis=-1)

    def _contract(self, C: np.ndarray) -> np.ndarray:
        """(n, M, phi) -> (M * phi, n * phi) so that ``X @ out`` multiplies by C."""
        n, M, phi = C.shape
        mult3 = self._mult.reshape(phi, phi, phi)
        # R[c, m, i, t] = sum_j C[c, m, j] * coords(z^(i+j))[t]
        R = np.tensordot(C, mult3, axes=([2], [1]))
        return R.transpose(1, 2, 0, 3).reshape(M * phi, n * phi)

    def pair_sum(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """``P[a, b] = sum_m A[a, m] B[b, m]`` for (nA, M, phi) and (nB, M, phi)."""
        nA, M, phi = A.shape
        nB = B.shape[0]
        if M == 0:
            return np.zeros((nA, nB, phi), dtype=np.int64)
        BR = self._contract(B)
        return (A.reshape(nA, M * phi) @ BR).reshape(nA, nB, phi)

    def triple_sum(self, A: np.ndarray, B: np.ndarray, C: np.ndarray, weights=None, block: int = 1 << 22) -> np.ndarray:
        """``T[a, b, c] = sum_m w_m A[a, m] B[b, m] conj(C[c, m])``.

        A, B, C have shapes (nA, M, phi), (nB, M, phi), (nC, M, phi); the result
        has shape (nA, nB, nC, phi). Rows of A are processed in blocks so the
        pairwise products never exceed roughly ``block`` entries.
        """
        nA, M, phi = A.shape
        nB, nC = B.shape[0], C.shape[0]
        out = np.zeros((nA, nB, nC, phi), dtype=np.int64)
        if M == 0 or nA == 0 or nB == 0 or nC == 0:
            return out
        Cc = self.conj(C)
        if weights is not None:
            Cc = Cc * np.asarray(weights, dtype=np.int64)[None, :, None]
        CR = self._contract(Cc)
        step = max(1, block // max(1, nB * M * phi * phi))
        for lo in range(0, nA, step):
            hi = min(nA, lo + step)
            AB = self.mul(A[lo:hi, None, :, :], B[None, :, :, :]).reshape((hi - lo) * nB, M * phi)
            out[lo:hi] = (AB @ CR).reshape(hi - lo, nB, nC, phi)
        return out
