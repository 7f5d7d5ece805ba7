"""Finite orthogonal matrix groups, their subgroups and subgroup pairs.

Elements are indexed ``0..|G|-1`` in breadth-first closure order with the
identity at index 0. All group-theoretic queries work on those indices via
the multiplication table; matrices are only consulted for stabilizers and
projectors.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from . import linalg
from .config import DEFAULT_MAX_ORDER, DEFAULT_TOL, EXACT, FLOAT, Tolerances
from .errors import (
    InternalInconsistency,
    InvalidPair,
    NonOrthogonalGenerator,
    OrderBoundExceeded,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class GroupElement:
    """An orthogonal matrix, optionally remembering its permutation image.

    ``perm_image[j] = i`` means the matrix sends e_j to e_i (0-indexed).
    """

    matrix: np.ndarray
    perm_image: Optional[tuple[int, ...]] = None

    @classmethod
    def from_perm(cls, image: Sequence[int], exact: bool = True) -> "GroupElement":
        image = tuple(int(i) for i in image)
        m = len(image)
        if sorted(image) != list(range(m)):
            raise ValueError(f"not a permutation: {image}")
        mat = np.zeros((m, m), dtype=int)
        for j, i in enumerate(image):
            mat[i, j] = 1
        mat = linalg.exact_array(mat) if exact else mat.astype(float)
        return cls(mat, image)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


class FiniteGroup:
    """A closed finite group of m x m orthogonal matrices."""

    def __init__(
        self,
        elements: list[GroupElement],
        mult_table: np.ndarray,
        inverse_table: np.ndarray,
        tol: Tolerances = DEFAULT_TOL,
        generators: Sequence[int] = (),
        name: str | None = None,
    ):
        self.elements = list(elements)
        self.mult_table = mult_table
        self.inverse_table = inverse_table
        self.tol = tol
        self.generators = tuple(generators)
        self.name = name or f"G{len(elements)}"
        # group with identical multiplication table whose architecture
        # names should be reused (e.g. a rotation rep named after its
        # permutation twin)
        self.naming_reference: FiniteGroup | None = None
        self._cache: dict = {}

    def __repr__(self):
        return f"FiniteGroup({self.name!r}, order={self.order}, dim={self.dim}, mode={self.mode})"

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def dim(self) -> int:
        return self.elements[0].dim

    @property
    def exact(self) -> bool:
        return linalg.is_exact(self.elements[0].matrix)

    @property
    def mode(self) -> str:
        return EXACT if self.exact else FLOAT

    def matrix(self, i: int) -> np.ndarray:
        return self.elements[i].matrix

    def mul(self, i: int, j: int) -> int:
        return int(self.mult_table[i, j])

    def inv(self, i: int) -> int:
        return int(self.inverse_table[i])

    def conj(self, x: int, g: int) -> int:
        """g^-1 x g"""
        return self.mul(self.mul(self.inv(g), x), g)

    def index_of(self, mat: np.ndarray) -> int | None:
        return _find(self.elements, mat, self.tol)

    @property
    def whole(self) -> "Subgroup":
        return Subgroup(self, tuple(range(self.order)))

    @property
    def trivial(self) -> "Subgroup":
        return Subgroup(self, (0,))

    # cached lattice data
    @property
    def subgroups(self) -> list["Subgroup"]:
        if "subgroups" not in self._cache:
            self._cache["subgroups"] = enumerate_subgroups(self)
        return self._cache["subgroups"]

    def subgroup_id(self, s: "Subgroup") -> int:
        ids = self._cache.get("subgroup_ids")
        if ids is None:
            ids = {x.members: k for k, x in enumerate(self.subgroups)}
            self._cache["subgroup_ids"] = ids
        return ids[s.members]

    def subgroup(self, members: Iterable[int]) -> "Subgroup":
        return self.subgroups[self.subgroup_id(Subgroup(self, tuple(sorted(members))))]

    def same_table(self, other: "FiniteGroup") -> bool:
        return self.order == other.order and bool(np.array_equal(self.mult_table, other.mult_table))


def _find(elements: list[GroupElement], mat: np.ndarray, tol: Tolerances) -> int | None:
    for k, e in enumerate(elements):
        if linalg.mat_equal(e.matrix, mat, tol):
            return k
    return None


class _Index:
    """Element lookup: hashing in exact mode, stacked eps search in float mode."""

    def __init__(self, exact: bool, tol: Tolerances):
        self.exact = exact
        self.tol = tol
        self.keys: dict = {}
        self.stack: list[np.ndarray] = []

    def add(self, mat: np.ndarray):
        if self.exact:
            self.keys[linalg.exact_key(mat)] = len(self.keys)
        else:
            self.stack.append(np.asarray(mat, dtype=float))

    def find(self, mat: np.ndarray) -> int | None:
        if self.exact:
            return self.keys.get(linalg.exact_key(mat))
        if not self.stack:
            return None
        arr = np.asarray(self.stack)
        gaps = np.abs(arr - np.asarray(mat, dtype=float)).max(axis=(1, 2))
        k = int(np.argmin(gaps))
        return k if gaps[k] <= self.tol.equal else None


def close_generators(
    gens: Sequence[GroupElement | np.ndarray],
    max_order: int = DEFAULT_MAX_ORDER,
    *,
    dim: int | None = None,
    exact: bool | None = None,
    tol: Tolerances = DEFAULT_TOL,
    name: str | None = None,
) -> FiniteGroup:
    """Close a generator list under multiplication.

    Elements are produced breadth-first: each known element, in order, is
    multiplied on the right by every generator in the given order. An empty
    generator list needs ``dim`` and yields the trivial group.
    """
    gens = [g if isinstance(g, GroupElement) else GroupElement(np.asarray(g)) for g in gens]
    if not gens:
        if dim is None:
            raise ValueError("dim is required when no generators are given")
        exact = True if exact is None else exact
        m = dim
    else:
        m = gens[0].dim
        if exact is None:
            exact = all(linalg.is_exact(g.matrix) for g in gens)
    conv = []
    for g in gens:
        if g.dim != m:
            raise ValueError("generators have different dimensions")
        mat = g.matrix
        if exact and not linalg.is_exact(mat):
            mat = linalg.exact_array(mat)
        elif not exact:
            mat = linalg.to_float(mat)
        if not linalg.is_orthogonal(mat, tol):
            raise NonOrthogonalGenerator(f"generator is not orthogonal:\n{mat}")
        conv.append(GroupElement(mat, g.perm_image))

    ident = linalg.identity(m, exact)
    elements = [GroupElement(ident, tuple(range(m)))]
    index = _Index(exact, tol)
    index.add(ident)
    gen_idx: list[int] = []
    for g in conv:
        k = index.find(g.matrix)
        if k is None:
            k = len(elements)
            elements.append(g)
            index.add(g.matrix)
        gen_idx.append(k)

    queue = deque(range(len(elements)))
    seen = set(queue)
    while queue:
        i = queue.popleft()
        for g in conv:
            prod = elements[i].matrix @ g.matrix
            k = index.find(prod)
            if k is None:
                if len(elements) >= max_order:
                    raise OrderBoundExceeded(f"closure exceeds max order {max_order}")
                k = len(elements)
                pimg = None
                if elements[i].perm_image is not None and g.perm_image is not None:
                    pimg = tuple(elements[i].perm_image[j] for j in g.perm_image)
                elements.append(GroupElement(prod, pimg))
                index.add(prod)
            if k not in seen:
                seen.add(k)
                queue.append(k)

    n = len(elements)
    table = np.empty((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            k = index.find(elements[i].matrix @ elements[j].matrix)
            if k is None:
                raise InternalInconsistency("closure is not closed under multiplication")
            table[i, j] = k
    inverse = np.array([int(np.flatnonzero(table[i] == 0)[0]) for i in range(n)], dtype=np.int64)
    return FiniteGroup(elements, table, inverse, tol, generators=gen_idx, name=name)


# --- subgroups ---------------------------------------------------------------


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup = field(compare=False, hash=False, repr=False)
    members: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.members)

    def __contains__(self, g: int) -> bool:
        return g in self._set

    @property
    def _set(self) -> frozenset:
        # frozen dataclass: cache through object.__setattr__
        s = self.__dict__.get("_mset")
        if s is None:
            s = frozenset(self.members)
            object.__setattr__(self, "_mset", s)
        return s

    def issubset(self, other: "Subgroup") -> bool:
        return self._set <= other._set

    def conjugate(self, g: int) -> "Subgroup":
        """g^-1 S g"""
        G = self.parent
        return Subgroup(G, tuple(sorted(G.conj(x, g) for x in self.members)))

    def sort_key(self):
        return (self.order, self.members)

    def is_closed(self) -> bool:
        G = self.parent
        s = self._set
        if 0 not in s:
            return False
        return all(G.mul(a, b) in s for a in self.members for b in self.members) and all(
            G.inv(a) in s for a in self.members
        )

    def generated_by(self) -> list[int]:
        """A small generating set (greedy)."""
        G = self.parent
        gens: list[int] = []
        cur = frozenset([0])
        for x in self.members:
            if x not in cur:
                gens.append(x)
                cur = closure(G, gens)
        return gens


def closure(G: FiniteGroup, gens: Iterable[int]) -> frozenset:
    gens = list(gens)
    out = {0}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = G.mul(x, g)
            if y not in out:
                out.add(y)
                queue.append(y)
    return frozenset(out)


def enumerate_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """All subgroups, each exactly once, sorted by (order, member tuple).

    Layered extension: start from the cyclic subgroups, then repeatedly join
    every known subgroup with one outside cyclic generator until no new
    subgroup appears.
    """
    cyc_of = [closure(G, [g]) for g in range(G.order)]
    cyclic = set(cyc_of)
    known = set(cyclic)
    frontier = set(cyclic)
    # joining with one generator per cyclic subgroup suffices
    first_gen: dict = {}
    for g, c in enumerate(cyc_of):
        first_gen.setdefault(c, g)
    ext = sorted(g for c, g in first_gen.items() if len(c) > 1)
    while frontier:
        nxt = set()
        for s in frontier:
            for g in ext:
                if g in s:
                    continue
                t = closure(G, list(s) + [g])
                if t not in known:
                    known.add(t)
                    nxt.add(t)
        frontier = nxt
    subs = [Subgroup(G, tuple(sorted(s))) for s in known]
    subs.sort(key=Subgroup.sort_key)
    return subs


def subgroups_of(H: Subgroup) -> list[Subgroup]:
    return [s for s in H.parent.subgroups if s.issubset(H)]


def index2_subgroups(H: Subgroup) -> list[Subgroup]:
    """All K <= H with |H:K| = 2."""
    if H.order % 2:
        return []
    return [s for s in subgroups_of(H) if 2 * s.order == H.order]


def subgroup_classes(G: FiniteGroup) -> list[list[Subgroup]]:
    """Conjugacy classes of subgroups.

    Ordered by (order, class size, least member tuple in the class); members
    of a class are sorted by member tuple.
    """
    if "subgroup_classes" in G._cache:
        return G._cache["subgroup_classes"]
    seen: set = set()
    classes = []
    for s in G.subgroups:
        if s.members in seen:
            continue
        cls = {s.conjugate(g).members for g in range(G.order)}
        seen |= cls
        classes.append([G.subgroup(c) for c in sorted(cls)])
    classes.sort(key=lambda c: (c[0].order, len(c), c[0].members))
    G._cache["subgroup_classes"] = classes
    return classes


def subgroup_class_index(G: FiniteGroup, s: Subgroup) -> int:
    lookup = G._cache.get("subgroup_class_of")
    if lookup is None:
        lookup = {}
        for k, cls in enumerate(subgroup_classes(G)):
            for t in cls:
                lookup[t.members] = k
        G._cache["subgroup_class_of"] = lookup
    return lookup[s.members]


def normalizer(H: Subgroup) -> Subgroup:
    G = H.parent
    return Subgroup(G, tuple(g for g in range(G.order) if H.conjugate(g) == H))


# --- subgroup pairs ----------------------------------------------------------


@dataclass(frozen=True)
class SubgroupPairClass:
    """G-conjugacy class of a pair K <= H with |H:K| <= 2.

    ``H``/``K`` hold the lexicographically least pair of the class.
    """

    H: Subgroup
    K: Subgroup
    class_members: tuple[tuple[Subgroup, Subgroup], ...] = field(compare=False, repr=False)
    index: int = 1
    h_class: int = 0
    k_class: int = 0

    @property
    def type(self) -> int:
        return self.index

    def contains(self, H: Subgroup, K: Subgroup) -> bool:
        return any(h == H and k == K for h, k in self.class_members)

    def label(self) -> str:
        return f"(H={list(self.H.members)}, K={list(self.K.members)})"


def _pair_key(p):
    return (p[0].members, p[1].members)


def pair_classes(G: FiniteGroup) -> list[SubgroupPairClass]:
    """Partition of all pairs K <= H <= G with |H:K| <= 2 into G-classes.

    Classes are ordered by (class of H, index, class of K, K members).
    """
    if "pair_classes" in G._cache:
        return G._cache["pair_classes"]
    seen: set = set()
    out = []
    for H in G.subgroups:
        for K in [H] + index2_subgroups(H):
            if (H.members, K.members) in seen:
                continue
            orbit = {}
            for g in range(G.order):
                Hg, Kg = H.conjugate(g), K.conjugate(g)
                orbit[(Hg.members, Kg.members)] = (G.subgroup(Hg.members), G.subgroup(Kg.members))
            seen |= set(orbit)
            members = tuple(sorted(orbit.values(), key=_pair_key))
            rh, rk = members[0]
            out.append(
                SubgroupPairClass(
                    H=rh,
                    K=rk,
                    class_members=members,
                    index=rh.order // rk.order,
                    h_class=subgroup_class_index(G, rh),
                    k_class=subgroup_class_index(G, rk),
                )
            )
    out.sort(key=lambda c: (c.h_class, c.index, c.k_class, c.K.members))
    G._cache["pair_classes"] = out
    return out


def pair_class_of(G: FiniteGroup, H: Subgroup, K: Subgroup) -> SubgroupPairClass:
    lookup = G._cache.get("pair_class_of")
    if lookup is None:
        lookup = {}
        for c in pair_classes(G):
            for h, k in c.class_members:
                lookup[(h.members, k.members)] = c
        G._cache["pair_class_of"] = lookup
    try:
        return lookup[(H.members, K.members)]
    except KeyError:
        raise InvalidPair(f"no pair class for H={H.members}, K={K.members}") from None


def check_pair(H: Subgroup, K: Subgroup):
    if not K.issubset(H):
        raise InvalidPair("K is not a subgroup of H")
    if H.order % K.order or H.order // K.order > 2:
        raise InvalidPair(f"|H:K| = {H.order / K.order} exceeds 2")


@dataclass(frozen=True)
class Transversal:
    """Coset representatives g_1..g_n of G/H, g_1 the identity.

    ``h_flip`` is an element of H \\ K (type 2) used for g_{-i} = g_i h_flip.
    """

    group: FiniteGroup = field(repr=False, compare=False)
    H: Subgroup
    K: Subgroup
    reps: tuple[int, ...]
    h_flip: Optional[int] = None

    def __len__(self):
        return len(self.reps)

    def locate(self, x: int) -> tuple[int, int]:
        """(i, sign) with x in g_i K (sign +1) or g_i h K (sign -1)."""
        G = self.group
        for i, gi in enumerate(self.reps):
            y = G.mul(G.inv(gi), x)
            if y in self.H:
                return i, (1 if y in self.K else -1)
        raise InternalInconsistency(f"element {x} lies in no coset of the transversal")


def transversal(G: FiniteGroup, H: Subgroup, K: Subgroup) -> Transversal:
    """Greedy left transversal of G/H in element order, starting at the identity."""
    check_pair(H, K)
    covered: set = set()
    reps = []
    for g in range(G.order):
        if g in covered:
            continue
        reps.append(g)
        covered |= {G.mul(g, h) for h in H.members}
    flip = None
    if H.order != K.order:
        flip = min(h for h in H.members if h not in K)
    return Transversal(G, H, K, tuple(reps), flip)


def stabilizer_of_matrix(G: FiniteGroup, P: np.ndarray) -> Subgroup:
    """{g in G : g P = P}"""
    members = tuple(i for i in range(G.order) if linalg.mat_equal(G.matrix(i) @ P, P, G.tol))
    s = Subgroup(G, members)
    if not s.is_closed():
        raise InternalInconsistency("stabilizer is not closed; tolerance too loose?")
    return s
