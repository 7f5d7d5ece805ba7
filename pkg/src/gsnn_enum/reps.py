"""Signed permutation representations of a finite group.

A signed perm-rep of degree n stores, per group element g, a permutation
``perm[g]`` and a sign vector ``signs[g]`` with

    rho(g) e_i = signs[g][i] * e_{perm[g][i]}        (0-indexed)

so ``signs`` is the right sign factor (rho = pi zeta) and the left factor is
obtained by scattering it through ``perm``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InternalInconsistency, NotIrreducible
from .groups import (
    FiniteGroup,
    Subgroup,
    SubgroupPairClass,
    Transversal,
    check_pair,
    pair_class_of,
)


@dataclass(frozen=True, eq=False)
class SignedPermRep:
    group: FiniteGroup = field(repr=False)
    perm: np.ndarray  # (|G|, n) int
    signs: np.ndarray  # (|G|, n) int in {-1, +1}
    source_pair: Optional[tuple[Subgroup, Subgroup]] = field(default=None, repr=False)

    @property
    def degree(self) -> int:
        return self.perm.shape[1]

    def __eq__(self, other):
        if not isinstance(other, SignedPermRep):
            return NotImplemented
        return np.array_equal(self.perm, other.perm) and np.array_equal(self.signs, other.signs)

    __hash__ = None

    def matrix(self, g: int) -> np.ndarray:
        n = self.degree
        out = np.zeros((n, n), dtype=int)
        out[self.perm[g], np.arange(n)] = self.signs[g]
        return out

    def compose(self, a: int, b: int) -> tuple[np.ndarray, np.ndarray]:
        """Image of rho(a) rho(b) as (perm, signs)."""
        pb, sb = self.perm[b], self.signs[b]
        return self.perm[a][pb], sb * self.signs[a][pb]

    def is_homomorphism(self) -> bool:
        G = self.group
        n = self.degree
        if not (np.array_equal(self.perm[0], np.arange(n)) and np.all(self.signs[0] == 1)):
            return False
        for a in range(G.order):
            for b in range(G.order):
                p, s = self.compose(a, b)
                ab = G.mul(a, b)
                if not (np.array_equal(p, self.perm[ab]) and np.array_equal(s, self.signs[ab])):
                    return False
        return True

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "images": [
                {"perm": [int(x) + 1 for x in self.perm[g]], "signs": [int(x) for x in self.signs[g]]}
                for g in range(self.group.order)
            ],
        }

    @classmethod
    def from_json(cls, data: dict, group: FiniteGroup) -> "SignedPermRep":
        imgs = data["images"]
        if len(imgs) != group.order:
            raise ValueError("image count does not match group order")
        perm = np.array([[p - 1 for p in im["perm"]] for im in imgs], dtype=np.int64).reshape(group.order, -1)
        signs = np.array([im["signs"] for im in imgs], dtype=np.int64).reshape(group.order, -1)
        if perm.shape[1] != data["degree"]:
            raise ValueError("degree mismatch")
        return cls(group, perm, signs)

    @classmethod
    def from_matrices(cls, group: FiniteGroup, mats) -> "SignedPermRep":
        n = mats[0].shape[0]
        perm = np.zeros((group.order, n), dtype=np.int64)
        signs = np.zeros((group.order, n), dtype=np.int64)
        for g, m in enumerate(mats):
            for i in range(n):
                (j,) = np.flatnonzero(m[:, i])
                perm[g, i] = j
                signs[g, i] = int(np.sign(m[j, i]))
        return cls(group, perm, signs)


@dataclass(frozen=True)
class RepFactorization:
    pi: np.ndarray  # (|G|, n) permutation
    zeta_left: np.ndarray  # (|G|, n) signs, rho = diag(zeta_left) pi
    zeta_right: np.ndarray  # (|G|, n) signs, rho = pi diag(zeta_right)


def build_rho(G: FiniteGroup, H: Subgroup, K: Subgroup, T: Transversal) -> SignedPermRep:
    """rho_HK(g) e_i = +-e_j according to which half of g_j H contains g g_i."""
    check_pair(H, K)
    if T.reps[0] not in K:
        raise InternalInconsistency("g_1 must lie in K")
    n = len(T)
    perm = np.empty((G.order, n), dtype=np.int64)
    signs = np.empty((G.order, n), dtype=np.int64)
    for g in range(G.order):
        for i, gi in enumerate(T.reps):
            j, s = T.locate(G.mul(g, gi))
            perm[g, i] = j
            signs[g, i] = s
    rho = SignedPermRep(G, perm, signs, (H, K))
    if not rho.is_homomorphism():
        raise InternalInconsistency("coset construction did not give a homomorphism")
    return rho


def factor_rho(rho: SignedPermRep) -> RepFactorization:
    zl = np.empty_like(rho.signs)
    rows = np.arange(rho.group.order)[:, None]
    zl[rows, rho.perm] = rho.signs
    fac = RepFactorization(rho.perm.copy(), zl, rho.signs.copy())
    # recomposition check: diag(zl) pi == pi diag(zr) == rho
    for g in range(rho.group.order):
        n = rho.degree
        pm = np.zeros((n, n), dtype=int)
        pm[fac.pi[g], np.arange(n)] = 1
        m = rho.matrix(g)
        if not (np.array_equal(np.diag(zl[g]) @ pm, m) and np.array_equal(pm @ np.diag(fac.zeta_right[g]), m)):
            raise InternalInconsistency("factorisation does not recompose")
    return fac


def is_irreducible(rho: SignedPermRep) -> bool:
    """The +-orbit of e_1 reaches every axis."""
    return len(set(rho.perm[:, 0].tolist())) == rho.degree


def recover_pair(rho: SignedPermRep) -> tuple[Subgroup, Subgroup, np.ndarray]:
    """(H, K, z) with rho = diag(z) rho_HK diag(z).

    H stabilises the axis of e_1, K fixes e_1 itself, z_i = +1 iff some
    element sends e_1 to +e_i.
    """
    if not is_irreducible(rho):
        raise NotIrreducible("representation is not irreducible")
    G = rho.group
    col, sgn = rho.perm[:, 0], rho.signs[:, 0]
    H = G.subgroup(np.flatnonzero(col == 0).tolist())
    K = G.subgroup(np.flatnonzero((col == 0) & (sgn == 1)).tolist())
    z = -np.ones(rho.degree, dtype=np.int64)
    z[col[sgn == 1]] = 1
    return H, K, z


def recovered_transversal(rho: SignedPermRep) -> Transversal:
    """Transversal g_i with diag(z) rho(g_i) diag(z) e_1 = e_i."""
    H, K, z = recover_pair(rho)
    col, sgn = rho.perm[:, 0], rho.signs[:, 0]
    reps = []
    for i in range(rho.degree):
        reps.append(int(np.flatnonzero((col == i) & (sgn == z[i]))[0]))
    flip = None
    if H.order != K.order:
        flip = min(h for h in H.members if h not in K)
    return Transversal(rho.group, H, K, tuple(reps), flip)


def conjugate_by_signs(rho: SignedPermRep, z) -> SignedPermRep:
    """diag(z) rho(.) diag(z)"""
    z = np.asarray(z, dtype=np.int64)
    signs = z[rho.perm] * rho.signs * z[None, :]
    return SignedPermRep(rho.group, rho.perm.copy(), signs, rho.source_pair)


def conjugate(rho: SignedPermRep, a_perm, a_signs) -> SignedPermRep:
    """A^-1 rho(.) A for the signed permutation A e_i = a_signs[i] e_{a_perm[i]}."""
    n = rho.degree
    A = np.zeros((n, n), dtype=int)
    A[np.asarray(a_perm), np.arange(n)] = np.asarray(a_signs)
    mats = [A.T @ rho.matrix(g) @ A for g in range(rho.group.order)]
    return SignedPermRep.from_matrices(rho.group, mats)


def rep_type(rho: SignedPermRep) -> int:
    H, K, _ = recover_pair(rho)
    return H.order // K.order


def conjugacy_class_id(rho: SignedPermRep) -> SubgroupPairClass:
    H, K, _ = recover_pair(rho)
    return pair_class_of(rho.group, H, K)


def direct_sum(*reps: SignedPermRep) -> SignedPermRep:
    G = reps[0].group
    perms, signs = [], []
    off = 0
    for r in reps:
        perms.append(r.perm + off)
        signs.append(r.signs)
        off += r.degree
    return SignedPermRep(G, np.concatenate(perms, axis=1), np.concatenate(signs, axis=1))


def orbit_decompose(rho: SignedPermRep) -> list[SignedPermRep]:
    """Split into irreducible restrictions on the +-orbits of the axes.

    Blocks come in order of their least axis; axes inside a block keep
    their relative order.
    """
    n = rho.degree
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in range(rho.group.order):
        for i in range(n):
            a, b = find(i), find(int(rho.perm[g, i]))
            if a != b:
                parent[max(a, b)] = min(a, b)
    orbits: dict[int, list[int]] = {}
    for i in range(n):
        orbits.setdefault(find(i), []).append(i)
    blocks = []
    for root in sorted(orbits):
        axes = orbits[root]
        relabel = {a: k for k, a in enumerate(axes)}
        p = np.vectorize(relabel.get, otypes=[np.int64])(rho.perm[:, axes])
        blocks.append(SignedPermRep(rho.group, p, rho.signs[:, axes].copy()))
    return blocks
