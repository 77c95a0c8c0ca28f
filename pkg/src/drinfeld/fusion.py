"""Fusion coefficients of D(G) from group data.

Per-triple routines work on exact ``CycNum`` class functions and follow the
formulas literally; they are slow but independent of the array machinery.
Whole tensors use block kernels that evaluate the same sums as
``sum_m w_m A[a, m] B[b, m] conj(C[c, m])`` over the value array of the double,
grouped by the classes (K, L, J) of the three objects.

Twisted characters on C(k) are always ``x -> chi(tau_k^-1 x tau_k)`` with
``tau_k`` from the stored class transversal (so ``tau_k g_K tau_k^-1 = k``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

from .chartable import ClassFunction, conjugate_twist, inner_product, pointwise_product, restrict
from .cyclotomic import CycNum
from .double import DrinfeldDouble, FusionTensor, InvariantError, SimpleObject, drinfeld_double, integral_tensor
from .group import Group, Subgroup, double_coset, double_cosets, subgroup_intersection

__all__ = [
    "FusionQuery",
    "OrbitSet",
    "MackeyReport",
    "MultiplicityReport",
    "BudgetError",
    "METHODS",
    "query",
    "orbit_set",
    "fusion_coeff_flat",
    "fusion_coeff_orbit",
    "fusion_coeff_direct",
    "normal_centralizer_shortcut",
    "mackey_coset_check",
    "fusion_tensor",
    "multiplicity_report",
    "max_multiplicity",
    "double_inner_product",
]

METHODS = ("verlinde", "character", "orbit", "direct")
DEFAULT_BUDGET = 64


class BudgetError(ValueError):
    """Rank of the double exceeds the configured budget."""


@dataclass(frozen=True)
class FusionQuery:
    a: SimpleObject
    b: SimpleObject
    c: SimpleObject
    group: Group

    @property
    def double(self) -> DrinfeldDouble:
        return drinfeld_double(self.group)


def query(G, a, b, c) -> FusionQuery:
    """Build a query from object indices, labels or SimpleObjects."""
    D = drinfeld_double(G)
    return FusionQuery(D.object(a), D.object(b), D.object(c), D.group)


@dataclass(frozen=True)
class OrbitSet:
    pairs: tuple[tuple[int, int], ...]
    orbit_sizes: tuple[int, ...]
    stabilizer_orders: tuple[int, ...]

    def __len__(self):
        return len(self.pairs)


# -- shared helpers ------------------------------------------------------------------


def _parts(q: FusionQuery):
    D = q.double
    G = D.group
    K, L, J = (D.classes[o.class_index] for o in (q.a, q.b, q.c))
    return D, G, K, L, J


def _solutions(G: Group, K, L, gJ: int) -> list[tuple[int, int]]:
    out = []
    for k in K.members:
        l = G.mul(G.inv[k], gJ)
        if l in L:
            out.append((k, l))
    return out


def _memo(D: DrinfeldDouble) -> dict:
    memo = D.__dict__.get("_fusion_memo")
    if memo is None:
        memo = D.__dict__["_fusion_memo"] = {}
    return memo


def _base_character(D: DrinfeldDouble, o: SimpleObject) -> ClassFunction:
    return D.tables[o.class_index].irreducibles[o.irrep_index]


def _twisted(D: DrinfeldDouble, o: SimpleObject, k: int) -> ClassFunction:
    memo = _memo(D)
    key = ("twist", o.index, k)
    if key not in memo:
        G = D.group
        r = int(G.inv[G.transversal[k]])  # r^-1 g_K r = k
        memo[key] = conjugate_twist(_base_character(D, o), r, k)
    return memo[key]


def _centralizer(D: DrinfeldDouble, g: int) -> Subgroup:
    memo = _memo(D)
    key = ("cent", g)
    if key not in memo:
        memo[key] = D.group.centralizer(g)
    return memo[key]


def _double_character(D: DrinfeldDouble, o: SimpleObject):
    memo = _memo(D)
    key = ("char", o.index)
    if key not in memo:
        memo[key] = D.character(o)
    return memo[key]


def _as_count(total: CycNum, what: str) -> int:
    n = total.as_integer()
    if n is None or n < 0:
        raise InvariantError(f"{what}: fusion sum evaluated to {total!r}")
    return n


# -- per-triple formulas ---------------------------------------------------------------


def orbit_set(q: FusionQuery) -> OrbitSet:
    """C(g_J)-orbit representatives of the solutions of kl = g_J in K x L."""
    D, G, K, L, J = _parts(q)
    gJ = J.rep
    H = _centralizer(D, gJ)
    seen: set[int] = set()
    pairs, sizes, stabs = [], [], []
    for k, l in _solutions(G, K, L, gJ):
        if k in seen:
            continue
        orbit = {G.conj(k, h) for h in H.members}
        seen |= orbit
        stab = subgroup_intersection(_centralizer(D, k), _centralizer(D, l))
        if len(orbit) * stab.order != H.order:
            raise InvariantError("orbit size times stabilizer order differs from |C(g_J)|")
        pairs.append((k, l))
        sizes.append(len(orbit))
        stabs.append(stab.order)
    return OrbitSet(tuple(pairs), tuple(sizes), tuple(stabs))


def fusion_coeff_flat(q: FusionQuery) -> int:
    """(|J|/|G|) sum over kl = g_J and x in C(k) n C(l) of chi^(k) psi^(l) conj(phi)."""
    D, G, K, L, J = _parts(q)
    gJ = J.rep
    phi = _base_character(D, q.c)
    total = CycNum.rational(0)
    for k, l in _solutions(G, K, L, gJ):
        chi_k = _twisted(D, q.a, k)
        psi_l = _twisted(D, q.b, l)
        for x in subgroup_intersection(chi_k.domain, psi_l.domain).members:
            total = total + chi_k(x) * psi_l(x) * phi(x).conjugate()
    return _as_count(total * Fraction(J.size, G.order), "flat")


def _orbit_term(D: DrinfeldDouble, q: FusionQuery, k: int, l: int) -> CycNum:
    chi_k = _twisted(D, q.a, k)
    psi_l = _twisted(D, q.b, l)
    Q = subgroup_intersection(chi_k.domain, psi_l.domain)
    prod = pointwise_product(restrict(chi_k, Q), restrict(psi_l, Q))
    return inner_product(prod, restrict(_base_character(D, q.c), Q), Q)


def fusion_coeff_orbit(q: FusionQuery) -> int:
    """Sum over orbit representatives of <chi^(k) psi^(l), phi> on C(k) n C(l)."""
    D = q.double
    total = CycNum.rational(0)
    for k, l in orbit_set(q).pairs:
        total = total + _orbit_term(D, q, k, l)
    return _as_count(total, "orbit")


def normal_centralizer_shortcut(q: FusionQuery) -> int:
    """(|Q||J|/|G|) sum over kl = g_J of <chi^(k) psi^(l), phi>_Q, Q = C(g_K) n C(g_L).

    Only valid when both centralizers are normal, in which case C(k) = C(g_K)
    for every k in K and likewise for L.
    """
    D, G, K, L, J = _parts(q)
    H2, H3 = D.centralizers[q.a.class_index], D.centralizers[q.b.class_index]
    if not (H2.is_normal() and H3.is_normal()):
        raise ValueError("normal-centralizer formula needs C(g_K) and C(g_L) normal")
    sols = _solutions(G, K, L, J.rep)
    if not sols:
        return 0
    # any solution gives Q = C(k) n C(l) inside C(kl) = C(g_J)
    Q = subgroup_intersection(H2, H3)
    phi = restrict(_base_character(D, q.c), Q)
    total = CycNum.rational(0)
    for k, l in sols:
        prod = pointwise_product(restrict(_twisted(D, q.a, k), Q), restrict(_twisted(D, q.b, l), Q))
        total = total + inner_product(prod, phi, Q)
    return _as_count(total * Fraction(Q.order * J.size, G.order), "normal-centralizer")


def double_inner_product(G, alpha, beta) -> CycNum:
    """(1/|G|) sum over commuting (g, x) of alpha(g, x) conj(beta(g, x))."""
    D = drinfeld_double(G)
    total = CycNum.rational(0)
    for key, v in alpha.values.items():
        w = beta.values.get(key)
        if w is not None:
            total = total + v * w.conjugate()
    return total * Fraction(1, D.group.order)


def fusion_coeff_direct(q: FusionQuery) -> int:
    """Pair the coproduct character of a (x) b with the character of c.

    (a (x) b)(x, g) = sum_{g1 g2 = g} a(x, g1) b(x, g2), evaluated only where
    the character of c is nonzero.
    """
    D = q.double
    G = D.group
    alpha, beta, gamma = (_double_character(D, o) for o in (q.a, q.b, q.c))
    by_x: dict[int, list[tuple[int, CycNum]]] = {}
    for (g2, x), v in beta.values.items():
        by_x.setdefault(x, []).append((g2, v))
    total = CycNum.rational(0)
    for (g1, x), va in alpha.values.items():
        for g2, vb in by_x.get(x, ()):
            vc = gamma.values.get((G.mul(g1, g2), x))
            if vc is not None:
                total = total + va * vb * vc.conjugate()
    return _as_count(total * Fraction(1, G.order), "direct")


@dataclass(frozen=True)
class MackeyReport:
    orbit_count: int
    coset_count: int
    solution_count: int
    well_defined: bool
    injective: bool
    cosets_valid: bool
    mackey_sum: int
    orbit_sum: int

    @property
    def ok(self) -> bool:
        return (self.well_defined and self.injective and self.cosets_valid
                and self.orbit_count == self.coset_count and self.mackey_sum == self.orbit_sum)


def mackey_coset_check(q: FusionQuery) -> MackeyReport:
    """Match solution orbits with double cosets of C(g_L) \\ G / C(g_K).

    With right coset representatives t_k (t_k^-1 g_K t_k = k) and left ones
    s_l (s_l g_L s_l^-1 = l), the pair (k, l) goes to the double coset of
    s_l^-1 t_k^-1. From the stored transversal, t_k = tau_k^-1 and s_l = tau_l,
    so the element is tau_l^-1 tau_k. Raises on any mismatch.
    """
    D, G, K, L, J = _parts(q)
    H2, H3 = D.centralizers[q.a.class_index], D.centralizers[q.b.class_index]
    tau = G.transversal
    sols = _solutions(G, K, L, J.rep)
    orbits = orbit_set(q)
    H1 = _centralizer(D, J.rep)
    orbit_of: dict[int, int] = {}
    for i, (k, _) in enumerate(orbits.pairs):
        for h in H1.members:
            orbit_of[G.conj(k, h)] = i
    coset_of: dict[int, int] = {}
    valid_reps = set(double_cosets(H3, H2))
    cosets_valid = True
    for k, l in sols:
        s = G.mul(G.inv[tau[l]], tau[k])
        rep = min(double_coset(H3, s, H2))
        cosets_valid &= rep in valid_reps
        coset_of[k] = rep
    well_defined = all(len({coset_of[k] for k, _ in sols if orbit_of[k] == i}) == 1 for i in range(len(orbits)))
    by_coset: dict[int, set[int]] = {}
    for k, _ in sols:
        by_coset.setdefault(coset_of[k], set()).add(orbit_of[k])
    injective = all(len(v) == 1 for v in by_coset.values())
    # the Mackey form: chi_2 twisted by t_k, chi_3 twisted by s_l^-1
    total = CycNum.rational(0)
    phi = _base_character(D, q.c)
    for k, l in orbits.pairs:
        t_k = int(G.inv[tau[k]])
        s_l = int(tau[l])
        chi2 = conjugate_twist(_base_character(D, q.a), t_k, k)
        chi3 = conjugate_twist(_base_character(D, q.b), int(G.inv[s_l]), l)
        Q = subgroup_intersection(chi2.domain, chi3.domain)
        prod = pointwise_product(restrict(chi2, Q), restrict(chi3, Q))
        total = total + inner_product(prod, restrict(phi, Q), Q)
    report = MackeyReport(
        orbit_count=len(orbits),
        coset_count=len(by_coset),
        solution_count=len(sols),
        well_defined=well_defined,
        injective=injective,
        cosets_valid=cosets_valid,
        mackey_sum=_as_count(total, "mackey"),
        orbit_sum=fusion_coeff_orbit(q),
    )
    if not report.ok:
        raise InvariantError(f"double-coset check failed: {report}")
    return report


# -- block kernels ----------------------------------------------------------------------


def _flat_entries(D: DrinfeldDouble, ci: int):
    """(k, x) with x in C(g_J), k in C(x); l = k^-1 g_J; weight |J|."""
    G = D.group
    gJ = D.classes[ci].rep
    P = D.pairs
    sel = P[D.pair_index[gJ, P[:, 1]] >= 0]
    k, x = sel[:, 0], sel[:, 1]
    l = G.mult[G.inv[k], gJ]
    pa = D.pair_index[k, x]
    pb = D.pair_index[l, x]
    pc = D.pair_index[gJ, x]
    w = np.full(len(pa), D.classes[ci].size, dtype=np.int64)
    return pa, pb, pc, w, G.order


def _orbit_entries(D: DrinfeldDouble, ci: int):
    """Orbit representatives (k, l) under C(g_J); x in C(k) n C(l); weight [C(g_J) : C(k) n C(l)]."""
    G = D.group
    gJ = D.classes[ci].rep
    H = np.array(G.centralizer(gJ).members)
    canon = G.conj_table[H].min(axis=0)
    reps = np.nonzero(canon == np.arange(G.order))[0]
    pa, pb, pc, w = [], [], [], []
    for k in reps:
        l = G.mult[G.inv[k], gJ]
        xs = np.nonzero((D.pair_index[k] >= 0) & (D.pair_index[l] >= 0))[0]
        pa.append(D.pair_index[k, xs])
        pb.append(D.pair_index[l, xs])
        pc.append(D.pair_index[gJ, xs])
        w.append(np.full(len(xs), len(H) // len(xs), dtype=np.int64))
    cat = lambda parts: np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)  # noqa: E731
    return cat(pa), cat(pb), cat(pc), cat(w), len(H)


def _direct_entries(D: DrinfeldDouble):
    """(g1, g2, x) up to simultaneous conjugation, with orbit-size weights.

    x runs over class representatives (weight |class|), then (g1, g2) over
    C(x)-orbits of pairs in C(x)^2.
    """
    G = D.group
    n = G.order
    pa, pb, pc, w = [], [], [], []
    for c in D.classes:
        x = c.rep
        H = np.array(G.centralizer(x).members)
        conj = G.conj_table[np.ix_(H, H)]  # conj[h, g] for h, g in H
        codes = conj[:, :, None] * n + conj[:, None, :]  # (h, g1, g2)
        canon = codes.min(axis=0)
        flat = canon.ravel()
        uniq, counts = np.unique(flat, return_counts=True)
        g1, g2 = uniq // n, uniq % n
        pa.append(D.pair_index[g1, x])
        pb.append(D.pair_index[g2, x])
        pc.append(D.pair_index[G.mult[g1, g2], x])
        w.append(counts.astype(np.int64) * c.size)
    return np.concatenate(pa), np.concatenate(pb), np.concatenate(pc), np.concatenate(w), n


def _accumulate(D: DrinfeldDouble, pa, pb, pc, w, c_objects: np.ndarray) -> np.ndarray:
    """raw[a, b, c'] for all a, b and c = c_objects[c'], grouped by (K, L)."""
    X = D.values
    basis = D.basis
    cls = D.group.class_index[D.pairs[:, 0]]
    out = np.zeros((D.rank, D.rank, len(c_objects), basis.phi), dtype=np.int64)
    ka, kb = cls[pa], cls[pb]
    key = ka * len(D.classes) + kb
    order = np.argsort(key, kind="stable")
    key = key[order]
    starts = np.flatnonzero(np.r_[True, key[1:] != key[:-1]])
    ends = np.r_[starts[1:], len(key)]
    Xc = X[c_objects]
    for s, e in zip(starts, ends):
        idx = order[s:e]
        oa = D.class_objects[int(ka[idx[0]])]
        ob = D.class_objects[int(kb[idx[0]])]
        block = basis.triple_sum(X[oa][:, pa[idx]], X[ob][:, pb[idx]], Xc[:, pc[idx]], w[idx])
        out[oa[:, None], ob[None, :]] += block
    return out


def _class_blocks(D: DrinfeldDouble, method: str) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Yield (c objects, N[:, :, c objects]) one class J at a time."""
    if method == "direct":
        pa, pb, pc, w, den = _direct_entries(D)
        cls = D.group.class_index[D.pairs[pc, 0]]
    for ci in range(len(D.classes)):
        objs = D.class_objects[ci]
        if method == "character":
            a, b, c, wt, den = _flat_entries(D, ci)
        elif method == "orbit":
            a, b, c, wt, den = _orbit_entries(D, ci)
        elif method == "direct":
            m = cls == ci
            a, b, c, wt = pa[m], pb[m], pc[m], w[m]
        else:
            raise ValueError(f"unknown method {method!r}")
        raw = _accumulate(D, a, b, c, wt, objs)
        yield objs, integral_tensor(raw, np.full(len(objs), den, dtype=np.int64), method)


def fusion_tensor(G, method: str = "verlinde", budget: int = DEFAULT_BUDGET) -> FusionTensor:
    """Full tensor N[a, b, c] by one of ``METHODS``."""
    D = drinfeld_double(G)
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
    if budget < 1:
        raise ValueError("budget must be positive")
    if D.rank > budget:
        raise BudgetError(f"rank {D.rank} exceeds the budget of {budget}")
    if method == "verlinde":
        return D.verlinde()
    N = np.zeros((D.rank,) * 3, dtype=np.int64)
    for objs, block in _class_blocks(D, method):
        N[:, :, objs] = block
    return FusionTensor(D.rank, N, method)


@dataclass(frozen=True)
class MultiplicityReport:
    max_multiplicity: int
    witness: tuple[int, int, int] | None  # a triple with N > 1, if any
    witness_labels: tuple[str, str, str] | None = None

    @property
    def multiplicity_free(self) -> bool:
        return self.max_multiplicity <= 1


def multiplicity_report(T: FusionTensor, labels=None) -> MultiplicityReport:
    N = T.coeffs
    top = int(N.max()) if N.size else 0
    if top <= 1:
        return MultiplicityReport(top, None)
    w = tuple(int(i) for i in np.unravel_index(int(np.argmax(N)), N.shape))
    names = tuple(labels[i] for i in w) if labels is not None else None
    return MultiplicityReport(top, w, names)


def max_multiplicity(G, method: str = "character") -> MultiplicityReport:
    """Streaming scan one class at a time, without holding the whole tensor."""
    D = drinfeld_double(G)
    if method not in ("character", "orbit", "direct"):
        raise ValueError("streaming scan needs a class-blocked method")
    best, witness = 0, None
    for objs, block in _class_blocks(D, method):
        top = int(block.max())
        if top > best:
            best = top
            if top > 1:
                a, b, c = np.unravel_index(int(np.argmax(block)), block.shape)
                witness = (int(a), int(b), int(objs[c]))
    labels = tuple(D.objects[i].label for i in witness) if witness else None
    return MultiplicityReport(best, witness, labels)
