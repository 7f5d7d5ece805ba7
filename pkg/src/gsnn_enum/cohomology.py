"""First cohomology over F2 of G with coefficients in the permutation module M_H.

Cocycles are stored as 0/1 arrays of shape (|G|, n). Classes are labelled
by the subgroup K (K = H is the zero class); the addition law on labels is
the set formula K = (K1 & K2) | ((H - K1) & (H - K2)).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .groups import (
    FiniteGroup,
    Subgroup,
    index2_subgroups,
    pair_class_of,
    transversal,
)
from .reps import SignedPermRep, build_rho, factor_rho, recover_pair


@dataclass(frozen=True, eq=False)
class Cocycle:
    H: Subgroup = field(repr=False)
    pi: np.ndarray = field(repr=False)  # (|G|, n) permutation pi_H
    values: np.ndarray = field(repr=False)  # (|G|, n) over F2

    @property
    def degree(self) -> int:
        return self.values.shape[1]

    def act(self, g: int, v: np.ndarray) -> np.ndarray:
        """pi_H(g) v"""
        out = np.empty_like(v)
        out[self.pi[g]] = v
        return out

    def satisfies_cocycle_condition(self) -> bool:
        G = self.H.parent
        for a in range(G.order):
            for b in range(G.order):
                lhs = self.values[G.mul(a, b)]
                rhs = (self.values[a] + self.act(a, self.values[b])) % 2
                if not np.array_equal(lhs, rhs):
                    return False
        return True

    def __add__(self, other: "Cocycle") -> "Cocycle":
        return Cocycle(self.H, self.pi, (self.values + other.values) % 2)


def cocycle_of(rho: SignedPermRep, H: Subgroup | None = None) -> Cocycle:
    """Cocycle (1 - zeta_left(g)) / 2 of a signed perm-rep."""
    fac = factor_rho(rho)
    if H is None:
        H = rho.source_pair[0] if rho.source_pair else recover_pair(rho)[0]
    return Cocycle(H, fac.pi, ((1 - fac.zeta_left) // 2).astype(np.int64))


def coboundary(pi: np.ndarray, m: np.ndarray) -> np.ndarray:
    """g -> m + pi(g) m over F2"""
    out = np.empty((pi.shape[0], m.size), dtype=np.int64)
    for g in range(pi.shape[0]):
        moved = np.empty_like(m)
        moved[pi[g]] = m
        out[g] = (m + moved) % 2
    return out


def is_coboundary(c: Cocycle) -> bool:
    """Solve m + pi(g) m = c(g) for all g over F2 by Gaussian elimination."""
    n = c.degree
    rows = []  # bitmask equations: coefficient bits 0..n-1, rhs bit n
    for g in range(c.pi.shape[0]):
        for i in range(n):
            # coordinate j = pi(g)[i] of m + pi(g) m is m[j] + m[i]
            j = int(c.pi[g, i])
            mask = (1 << j) ^ (1 << i)
            rhs = int(c.values[g, j])
            rows.append(mask | (rhs << n))
    return _f2_consistent(rows, n)


def _f2_consistent(rows: list[int], n: int) -> bool:
    pivots: dict[int, int] = {}
    for r in rows:
        for bit in range(n):
            if not (r >> bit) & 1:
                continue
            if bit in pivots:
                r ^= pivots[bit]
            else:
                pivots[bit] = r
                break
        else:
            if r >> n & 1:
                return False
    return True


def cohomologous(a: Cocycle, b: Cocycle) -> bool:
    return is_coboundary(a + b)


@dataclass(frozen=True)
class CohomologyClass:
    H: Subgroup
    K: Subgroup
    representative: Cocycle = field(compare=False, repr=False)

    @property
    def is_zero(self) -> bool:
        return self.K == self.H


def is_zero_class(c: CohomologyClass) -> bool:
    return c.is_zero


@dataclass(frozen=True)
class CohomologyGroup:
    H: Subgroup
    classes: tuple[CohomologyClass, ...]
    addition: np.ndarray  # (k, k) class indices

    @property
    def order(self) -> int:
        return len(self.classes)

    def index_of(self, K: Subgroup) -> int:
        for i, c in enumerate(self.classes):
            if c.K == K:
                return i
        raise KeyError(K.members)

    def check_axioms(self) -> bool:
        k = self.order
        add = self.addition
        if self.classes[0].K != self.H:
            return False
        for a in range(k):
            if add[a, 0] != a or add[a, a] != 0:
                return False
            for b in range(k):
                if add[a, b] != add[b, a]:
                    return False
                for c in range(k):
                    if add[add[a, b], c] != add[a, add[b, c]]:
                        return False
        return True

    def to_json(self) -> dict:
        G = self.H.parent
        return {
            "H": G.subgroup_id(self.H),
            "classes": [{"K": G.subgroup_id(c.K), "is_zero": c.is_zero} for c in self.classes],
            "addition": self.addition.tolist(),
        }


def add_labels(H: Subgroup, K1: Subgroup, K2: Subgroup) -> Subgroup:
    G = H.parent
    h = set(H.members)
    k1, k2 = set(K1.members), set(K2.members)
    k = (k1 & k2) | ((h - k1) & (h - k2))
    return G.subgroup(k)


def cohomology_group(G: FiniteGroup, H: Subgroup) -> CohomologyGroup:
    """H^1(G, M_H): one class per K <= H with |H:K| <= 2, zero class first."""
    Ks = [H] + index2_subgroups(H)
    classes = []
    for K in Ks:
        rho = build_rho(G, H, K, transversal(G, H, K))
        classes.append(CohomologyClass(H, K, cocycle_of(rho, H)))
    pos = {K.members: i for i, K in enumerate(Ks)}
    k = len(Ks)
    add = np.empty((k, k), dtype=np.int64)
    for a in range(k):
        for b in range(k):
            add[a, b] = pos[add_labels(H, Ks[a], Ks[b]).members]
    grp = CohomologyGroup(H, tuple(classes), add)
    if not grp.check_axioms():
        raise ArithmeticError("cohomology addition table violates group axioms")
    return grp


def aut_orbits(G: FiniteGroup, H: Subgroup) -> list[list[int]]:
    """Partition of the class indices of H^1(G, M_H) into aut(M_H)-orbits.

    Two labels K, K' share an orbit iff (H, K') lies in the G-class of (H, K).
    """
    grp = cohomology_group(G, H)
    orbits: dict[int, list[int]] = {}
    order: list[int] = []
    for i, c in enumerate(grp.classes):
        pc = pair_class_of(G, H, c.K)
        key = id(pc)
        if key not in orbits:
            orbits[key] = []
            order.append(key)
        orbits[key].append(i)
    return [orbits[k] for k in order]


def cohomology_dot(rho: SignedPermRep, title: str = "rho") -> str:
    """Cayley-style illustration of the class of ``rho``.

    Nodes are hidden neurons; each generator contributes one arc colour; an
    arc i -> j is dashed when the generator reverses orientation (cocycle
    entry 1 at j).
    """
    G = rho.group
    palette = ["red", "blue", "darkgreen", "orange", "purple", "brown"]
    lines = [f'digraph "{title}" {{', "  node [shape=circle];"]
    for i in range(rho.degree):
        lines.append(f'  n{i} [label="{i + 1}"];')
    for k, g in enumerate(G.generators):
        color = palette[k % len(palette)]
        for i in range(rho.degree):
            j = int(rho.perm[g, i])
            style = "dashed" if rho.signs[g, i] < 0 else "solid"
            lines.append(f"  n{i} -> n{j} [color={color}, style={style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
