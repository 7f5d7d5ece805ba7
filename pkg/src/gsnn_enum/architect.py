"""Admissibility, canonical parameter families and enumeration of irreducible
G-invariant shallow ReLU architectures.

An architecture is built from a pair class (H, K) with tau = |H:K| - 1. Its
first weight vector w ranges over ran(P_K - tau P_H); the remaining rows are
g_i w for a transversal g_1..g_n of G/H. The pair is admissible when that
space is nonzero and its projector is stabilised by exactly K.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import linalg
from .cohomology import CohomologyClass, cocycle_of
from .errors import UnsupportedMode, ZeroOutputScale, ZeroWeight
from .groups import (
    FiniteGroup,
    Subgroup,
    SubgroupPairClass,
    Transversal,
    check_pair,
    index2_subgroups,
    pair_class_of,
    pair_classes,
    stabilizer_of_matrix,
    subgroup_classes,
    transversal,
)
from .linalg import SubspaceBasis
from .reps import SignedPermRep, build_rho

log = logging.getLogger(__name__)

SCHEMA = 1


@dataclass(frozen=True)
class Admissibility:
    ok: bool
    stabilizer: Subgroup
    weight_space: SubspaceBasis = field(repr=False)


def weight_space(G: FiniteGroup, H: Subgroup, K: Subgroup) -> SubspaceBasis:
    """ran(P_K - tau P_H)"""
    check_pair(H, K)
    PK = linalg.projector(K)
    if H.order == K.order:
        return linalg.range_basis(PK, G.tol)
    return linalg.range_basis(PK - linalg.projector(H), G.tol)


def admissible(G: FiniteGroup, H: Subgroup, K: Subgroup) -> Admissibility:
    """Test st_G(projector onto ran(P_K - tau P_H)) == K.

    A zero weight space is rejected outright: the family needs a unit w.
    """
    V = weight_space(G, H, K)
    st = stabilizer_of_matrix(G, linalg.projector_onto(V, G.tol))
    return Admissibility(V.dim > 0 and st == K, st, V)


@dataclass(frozen=True)
class ConstraintPattern:
    """n x m grid; each cell is None (forced zero) or (color_id, sign)."""

    cells: tuple[tuple[Optional[tuple[int, int]], ...], ...]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.cells), len(self.cells[0]) if self.cells else 0

    @property
    def n_colors(self) -> int:
        ids = {c[0] for row in self.cells for c in row if c is not None}
        return len(ids)

    def to_json(self) -> dict:
        n, m = self.shape
        return {
            "rows": n,
            "cols": m,
            "colors": self.n_colors,
            "cells": [[None if c is None else list(c) for c in row] for row in self.cells],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ConstraintPattern":
        return cls(tuple(tuple(None if c is None else (int(c[0]), int(c[1])) for c in row) for row in data["cells"]))


@dataclass(eq=False)
class ArchitectureSpec:
    name: str
    pair_class: SubgroupPairClass
    rep: SignedPermRep = field(repr=False)
    tau: int
    hidden: int
    weight_space: SubspaceBasis = field(repr=False)
    transversal: Transversal = field(repr=False)
    cohomology: CohomologyClass = field(repr=False)
    constraint_pattern: Optional[ConstraintPattern] = field(default=None, repr=False)

    @property
    def group(self) -> FiniteGroup:
        return self.rep.group

    @property
    def H(self) -> Subgroup:
        return self.pair_class.H

    @property
    def K(self) -> Subgroup:
        return self.pair_class.K

    @property
    def type(self) -> int:
        return self.tau + 1

    def weight_matrix(self, w: np.ndarray) -> np.ndarray:
        """Rows g_i w."""
        G = self.group
        return np.stack([G.matrix(g) @ w for g in self.transversal.reps])


def _build(G: FiniteGroup, pc: SubgroupPairClass, V: SubspaceBasis, name: str) -> ArchitectureSpec:
    H, K = pc.H, pc.K
    T = transversal(G, H, K)
    rho = build_rho(G, H, K, T)
    arch = ArchitectureSpec(
        name=name,
        pair_class=pc,
        rep=rho,
        tau=pc.index - 1,
        hidden=len(T),
        weight_space=V,
        transversal=T,
        cohomology=CohomologyClass(H, K, cocycle_of(rho, H)),
    )
    if G.exact:
        arch.constraint_pattern = constraint_pattern(arch)
    return arch


def _intrinsic_names(admitted: list[SubgroupPairClass]) -> dict:
    h_order = sorted({pc.h_class for pc in admitted})
    names = {}
    for i, hc in enumerate(h_order):
        row = [pc for pc in admitted if pc.h_class == hc]
        twisted = sorted((pc for pc in row if pc.index == 2), key=lambda p: (p.k_class, p.K.members))
        for pc in row:
            if pc.index == 1:
                names[(pc.H.members, pc.K.members)] = f"{i}.0"
        for j, pc in enumerate(twisted, start=1):
            names[(pc.H.members, pc.K.members)] = f"{i}.{j}"
    return names


def _name_key(name: str):
    i, j = name.split(".")
    return int(i), int(j)


def enumerate_architectures(G: FiniteGroup, naming_reference: FiniteGroup | None = None) -> list[ArchitectureSpec]:
    """All irreducible architectures of G, one per admissible pair class.

    Names are "i.j": i ranks the H-classes that admit an architecture, j = 0
    is the untwisted K = H and j >= 1 ranks the admissible twisted K. When a
    naming reference with the same multiplication table is given (defaults
    to ``G.naming_reference``), names are copied from its architectures.
    """
    key = ("architectures", id(naming_reference))
    if key in G._cache:
        return G._cache[key]
    admitted, spaces = [], {}
    for pc in pair_classes(G):
        adm = admissible(G, pc.H, pc.K)
        if adm.ok:
            admitted.append(pc)
            spaces[(pc.H.members, pc.K.members)] = adm.weight_space
    names = _intrinsic_names(admitted)
    ref = naming_reference if naming_reference is not None else G.naming_reference
    if ref is not None:
        if not ref.same_table(G):
            raise ValueError("naming reference has a different multiplication table")
        ref_names = {(a.H.members, a.K.members): a.name for a in enumerate_architectures(ref)}
        if all(k in ref_names for k in names):
            names = {k: ref_names[k] for k in names}
        else:
            log.warning("naming reference lacks some architectures of %s; using intrinsic names", G.name)
    archs = [_build(G, pc, spaces[(pc.H.members, pc.K.members)], names[(pc.H.members, pc.K.members)]) for pc in admitted]
    archs.sort(key=lambda a: _name_key(a.name))
    G._cache[key] = archs
    return archs


@dataclass(frozen=True)
class TypeCounts:
    """Admissible / total counts for types 1 and 2 under two ways of counting."""

    by_class: dict  # type -> (admissible, total); one entry per class of H and each K <= H of index <= 2
    by_pair_class: dict  # type -> (admissible, total); one entry per G-class of pairs

    def ratio(self, t: int, per_pair_class: bool = False) -> str:
        adm, tot = (self.by_pair_class if per_pair_class else self.by_class)[t]
        return f"{adm}/{tot}"


def type_counts(G: FiniteGroup) -> TypeCounts:
    """Counts of admissible pairs among signed perm-rep classes.

    ``by_class`` ranges over one H per conjugacy class and every K <= H with
    |H:K| <= 2, i.e. over the elements of H^1(G, M_H); ``by_pair_class``
    ranges over G-conjugacy classes of pairs. They differ only when the
    normalizer of H permutes its index-2 subgroups.
    """
    by_class = {1: [0, 0], 2: [0, 0]}
    for cls in subgroup_classes(G):
        H = cls[0]
        for K in [H] + index2_subgroups(H):
            t = H.order // K.order
            by_class[t][1] += 1
            by_class[t][0] += admissible(G, H, K).ok
    by_pair = {1: [0, 0], 2: [0, 0]}
    for pc in pair_classes(G):
        by_pair[pc.index][1] += 1
        by_pair[pc.index][0] += admissible(G, pc.H, pc.K).ok
    return TypeCounts({t: tuple(v) for t, v in by_class.items()}, {t: tuple(v) for t, v in by_pair.items()})


def find(archs: list[ArchitectureSpec], name: str) -> ArchitectureSpec:
    for a in archs:
        if a.name == name:
            return a
    raise KeyError(name)


def constraint_pattern(arch: ArchitectureSpec) -> ConstraintPattern:
    """Group cells of W_* by the linear functional they carry over the family.

    Cell (i, j) of W = sum_k t_k B_k has the coefficient vector
    (B_1[i,j], ..., B_d[i,j]); equal vectors share a colour, opposite ones
    share it with sign -1, zero vectors are forced-zero cells.
    """
    if not arch.group.exact:
        raise UnsupportedMode("constraint patterns need an exact (permutation) group")
    basis = arch.weight_space.vectors
    blocks = np.stack([arch.weight_matrix(v) for v in basis], axis=-1)  # (n, m, d)
    colors: dict[tuple, int] = {}
    rows = []
    for i in range(blocks.shape[0]):
        row = []
        for j in range(blocks.shape[1]):
            f = tuple(blocks[i, j])
            if all(x == 0 for x in f):
                row.append(None)
                continue
            neg = tuple(-x for x in f)
            if f in colors:
                row.append((colors[f], 1))
            elif neg in colors:
                row.append((colors[neg], -1))
            else:
                colors[f] = len(colors)
                row.append((colors[f], 1))
        rows.append(tuple(row))
    return ConstraintPattern(tuple(rows))


# --- instances ---------------------------------------------------------------


@dataclass
class SNNInstance:
    """f(x) = a . relu(W x + b) + c . x + d

    Arrays are float64, or object arrays of Fractions for exact instances.
    """

    W: np.ndarray
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: object = 0.0

    @property
    def exact(self) -> bool:
        return all(linalg.is_exact(x) for x in (self.W, self.a, self.b, self.c))

    def as_float(self) -> "SNNInstance":
        return SNNInstance(
            linalg.to_float(self.W), linalg.to_float(self.a), linalg.to_float(self.b), linalg.to_float(self.c), float(self.d)
        )


def _scalar(x, exact: bool):
    return Fraction(x) if exact else float(x)


def sample_instance(
    arch: ArchitectureSpec,
    a=1,
    b=0,
    c=None,
    d=0,
    w_coeffs=None,
    unit_normalize: bool = True,
) -> SNNInstance:
    """Member of the architecture's canonical family.

    W row i = g_i w, a_* = a 1, b_* = b 1 for untwisted and 0 for twisted
    architectures, c_* = -tau/2 W^T a_* + P_G c. The instance is exact when
    the group is exact, ``unit_normalize`` is off and the scalars are
    rational.
    """
    if a == 0:
        raise ZeroOutputScale("output scale a must be nonzero")
    G = arch.group
    exact = G.exact and not unit_normalize and all(
        isinstance(x, (int, Fraction)) for x in [a, b, d] + list(w_coeffs if w_coeffs is not None else [])
    )
    basis = arch.weight_space.vectors
    coeffs = np.zeros(basis.shape[0], dtype=object if exact else float)
    if w_coeffs is None:
        coeffs[0] = 1
    else:
        if len(w_coeffs) != basis.shape[0]:
            raise ValueError(f"expected {basis.shape[0]} weight coefficients")
        coeffs[:] = [_scalar(x, exact) for x in w_coeffs]
    if exact:
        coeffs = linalg.exact_array(coeffs)
        w = coeffs @ basis
    else:
        w = coeffs @ linalg.to_float(basis)
    if all(x == 0 for x in w):
        raise ZeroWeight("weight vector is zero")
    if unit_normalize:
        w = w / np.linalg.norm(w)
    n, m = arch.hidden, G.dim
    mats = [G.matrix(g) if exact else linalg.to_float(G.matrix(g)) for g in arch.transversal.reps]
    W = np.stack([M @ w for M in mats])
    ones = linalg.exact_array(np.ones(n, dtype=int)) if exact else np.ones(n)
    a_vec = ones * _scalar(a, exact)
    b_vec = ones * (_scalar(b, exact) if arch.tau == 0 else _scalar(0, exact))
    PG = linalg.projector(G.whole)
    if c is None:
        c_sup = linalg.zeros(m, exact)
    else:
        c_sup = linalg.exact_array(c) if exact else np.asarray(c, dtype=float)
    if not exact:
        PG = linalg.to_float(PG)
    c_vec = PG @ c_sup - _scalar(Fraction(arch.tau, 2), exact) * (W.T @ a_vec)
    return SNNInstance(W, a_vec, b_vec, c_vec, _scalar(d, exact))


def orthogonality_check(G: FiniteGroup, H: Subgroup, archs: list[ArchitectureSpec] | None = None):
    """Pairwise orthogonality of weight spaces of the admissible K for H.

    Returns (names, matrix) where matrix[p][q] is True when every basis
    vector of architecture p is orthogonal to every one of q (diagonal True).
    """
    archs = enumerate_architectures(G) if archs is None else archs
    hc = pair_class_of(G, H, H).h_class
    row = [a for a in archs if a.pair_class.h_class == hc]
    k = len(row)
    out = np.ones((k, k), dtype=bool)
    for p in range(k):
        for q in range(k):
            if p == q:
                continue
            ip = linalg.inner_products(row[p].weight_space, row[q].weight_space)
            if linalg.is_exact(ip):
                out[p, q] = all(x == 0 for x in ip.flat)
            else:
                out[p, q] = bool(np.max(np.abs(ip), initial=0.0) <= G.tol.ortho)
    return [a.name for a in row], out


# --- serialisation -------------------------------------------------------------


def _num(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x.numerator)
    return float(x)


def _parse_num(x):
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, int):
        return Fraction(x)
    return float(x)


def architecture_to_json(arch: ArchitectureSpec) -> dict:
    G = arch.group
    return {
        "schema": SCHEMA,
        "group": G.name,
        "name": arch.name,
        "H": G.subgroup_id(arch.H),
        "K": G.subgroup_id(arch.K),
        "H_members": list(arch.H.members),
        "K_members": list(arch.K.members),
        "H_order": arch.H.order,
        "K_order": arch.K.order,
        "type": arch.type,
        "hidden": arch.hidden,
        "transversal": list(arch.transversal.reps),
        "weight_space_basis": [[_num(x) for x in v] for v in arch.weight_space.vectors],
        "pattern": arch.constraint_pattern.to_json() if arch.constraint_pattern else None,
        "cohomology": {
            "ring": G.subgroup_id(arch.H),
            "class": G.subgroup_id(arch.K),
            "is_zero": arch.cohomology.is_zero,
        },
        "rep": arch.rep.to_json(),
    }


def architecture_from_json(data: dict, G: FiniteGroup) -> ArchitectureSpec:
    """Rebuild an architecture of ``G`` from its JSON record and cross-check it."""
    if data.get("schema") != SCHEMA:
        raise ValueError(f"unsupported schema {data.get('schema')!r}")
    H = G.subgroup(data["H_members"])
    K = G.subgroup(data["K_members"])
    adm = admissible(G, H, K)
    if not adm.ok:
        raise ValueError(f"pair in record {data['name']} is not admissible")
    pc = pair_class_of(G, H, K)
    arch = _build(G, pc, adm.weight_space, data["name"])
    stored = SignedPermRep.from_json(data["rep"], G)
    if stored != arch.rep:
        raise ValueError("stored representation does not match the rebuilt one")
    basis = np.array([[_parse_num(x) for x in v] for v in data["weight_space_basis"]], dtype=object)
    if G.exact:
        if basis.size and not np.all(basis == arch.weight_space.vectors):
            raise ValueError("stored weight space does not match")
    return arch
