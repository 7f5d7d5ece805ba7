"""Exact rational and eps-tolerant float matrix algebra.

Matrices are numpy arrays. Exact matrices use ``dtype=object`` holding
:class:`fractions.Fraction` entries; float matrices are ``float64``. Every
function dispatches on that dtype, so callers never pass a mode flag.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .errors import DimensionMismatch


def is_exact(a: np.ndarray) -> bool:
    return a.dtype == object


def exact_array(data) -> np.ndarray:
    """Convert nested numbers to an object array of Fractions."""
    arr = np.array(data, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, x in np.ndenumerate(arr):
        out[idx] = Fraction(x)
    return out


def to_float(a: np.ndarray) -> np.ndarray:
    return np.asarray(a, dtype=float)


def identity(m: int, exact: bool) -> np.ndarray:
    if exact:
        return exact_array(np.eye(m, dtype=int))
    return np.eye(m)


def zeros(shape, exact: bool) -> np.ndarray:
    if exact:
        return exact_array(np.zeros(shape, dtype=int))
    return np.zeros(shape)


def mat_equal(a: np.ndarray, b: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> bool:
    if a.shape != b.shape:
        return False
    if is_exact(a) and is_exact(b):
        return bool(np.all(a == b))
    return bool(np.max(np.abs(to_float(a) - to_float(b)), initial=0.0) <= tol.equal)


def is_orthogonal(a: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> bool:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    return mat_equal(a.T @ a, identity(a.shape[0], is_exact(a)), tol)


def exact_key(a: np.ndarray) -> tuple:
    """Hashable key of an exact matrix."""
    return tuple(a.flat)


def projector(subgroup) -> np.ndarray:
    """Average of the member matrices of ``subgroup``.

    This is the orthogonal projector onto the subspace fixed pointwise by
    the subgroup. In exact mode denominators divide the subgroup order.
    """
    mats = [subgroup.parent.matrix(i) for i in subgroup.members]
    total = mats[0].copy()
    for m in mats[1:]:
        total = total + m
    if is_exact(total):
        return total * Fraction(1, len(mats))
    return total / len(mats)


# --- exact elimination -----------------------------------------------------


def _integer_rows(a: np.ndarray) -> list[list[int]]:
    rows = []
    for r in a:
        fr = [Fraction(x) for x in r]
        scale = lcm(*(f.denominator for f in fr)) if fr else 1
        rows.append([int(f * scale) for f in fr])
    return rows


def _content_reduce(row: list[int]) -> list[int]:
    g = 0
    for x in row:
        g = gcd(g, x)
    if g > 1:
        return [x // g for x in row]
    return row


def rref(a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of an exact matrix.

    Elimination runs on integer rows (cross-multiplication followed by
    content reduction), so no intermediate fractions are formed. Only the
    final pivot normalisation introduces denominators.
    """
    nrows, ncols = a.shape
    rows = _integer_rows(a)
    pivots: list[int] = []
    pr = 0
    for c in range(ncols):
        if pr == nrows:
            break
        sel = next((r for r in range(pr, nrows) if rows[r][c] != 0), None)
        if sel is None:
            continue
        rows[pr], rows[sel] = rows[sel], rows[pr]
        p = _content_reduce(rows[pr])
        rows[pr] = p
        for r in range(nrows):
            if r == pr or rows[r][c] == 0:
                continue
            x, y = p[c], rows[r][c]
            rows[r] = _content_reduce([x * u - y * v for u, v in zip(rows[r], p)])
        pivots.append(c)
        pr += 1
    out = np.empty((nrows, ncols), dtype=object)
    for r in range(nrows):
        if r < len(pivots):
            piv = rows[r][pivots[r]]
            out[r] = [Fraction(x, piv) for x in rows[r]]
        else:
            out[r] = [Fraction(0)] * ncols
    return out, pivots


def rank(a: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> int:
    if a.size == 0:
        return 0
    if is_exact(a):
        return len(rref(a)[1])
    return int(np.linalg.matrix_rank(to_float(a), tol=tol.rank))


def inverse_exact(a: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    aug = np.concatenate([a, identity(n, True)], axis=1)
    r, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise np.linalg.LinAlgError("singular matrix")
    return r[:, n:]


# --- subspaces ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SubspaceBasis:
    """Basis of a subspace of R^ambient_dim, one vector per row.

    Exact bases are in reduced row echelon form, which is unique per
    subspace, so ``==`` is syntactic. Float bases are orthonormal and ``==``
    compares the induced projectors.
    """

    ambient_dim: int
    vectors: np.ndarray  # shape (dim, ambient_dim)

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    @property
    def exact(self) -> bool:
        return is_exact(self.vectors)

    def __eq__(self, other):
        if not isinstance(other, SubspaceBasis):
            return NotImplemented
        if self.ambient_dim != other.ambient_dim or self.dim != other.dim:
            return False
        if self.exact and other.exact:
            return bool(np.all(self.vectors == other.vectors))
        return mat_equal(projector_onto(self), projector_onto(other))

    __hash__ = None


def range_basis(p: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> SubspaceBasis:
    """Basis of the column space of ``p``."""
    m = p.shape[0]
    if is_exact(p):
        r, piv = rref(p.T.copy())
        return SubspaceBasis(m, r[: len(piv)].copy())
    if p.size == 0:
        return SubspaceBasis(m, np.zeros((0, m)))
    u, s, _ = np.linalg.svd(to_float(p))
    k = int(np.sum(s > tol.rank))
    vecs = u[:, :k].T.copy()
    # deterministic orientation: first significant entry positive
    for i in range(k):
        nz = np.flatnonzero(np.abs(vecs[i]) > tol.rank)
        if nz.size and vecs[i, nz[0]] < 0:
            vecs[i] = -vecs[i]
    return SubspaceBasis(m, vecs)


def span(vectors, ambient_dim: int, tol: Tolerances = DEFAULT_TOL) -> SubspaceBasis:
    """Canonical basis of the span of the given row vectors."""
    vecs = np.asarray(vectors)
    if vecs.size == 0:
        exact = vecs.dtype == object
        return SubspaceBasis(ambient_dim, zeros((0, ambient_dim), exact))
    return range_basis(vecs.T, tol)


def _check_dims(a: SubspaceBasis, b: SubspaceBasis):
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatch(f"ambient dims {a.ambient_dim} != {b.ambient_dim}")


def subspace_leq(a: SubspaceBasis, b: SubspaceBasis, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True iff span(a) is contained in span(b)."""
    _check_dims(a, b)
    if a.dim == 0:
        return True
    if b.dim == 0:
        return False
    if a.exact and b.exact:
        stacked = np.concatenate([b.vectors, a.vectors], axis=0)
        return rank(stacked) == b.dim
    pb = to_float(projector_onto(b, tol))
    av = to_float(a.vectors)
    return bool(np.max(np.abs(av - av @ pb)) <= tol.rank)


def projector_onto(v: SubspaceBasis, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthogonal projector whose range is exactly span(v)."""
    m = v.ambient_dim
    if v.dim == 0:
        return zeros((m, m), v.exact)
    b = v.vectors
    if v.exact:
        return b.T @ inverse_exact(b @ b.T) @ b
    bf = to_float(b)
    return bf.T @ np.linalg.pinv(bf @ bf.T, rcond=tol.rank) @ bf


def inner_products(a: SubspaceBasis, b: SubspaceBasis) -> np.ndarray:
    """Matrix of inner products between the two bases."""
    _check_dims(a, b)
    if a.exact and b.exact:
        return a.vectors @ b.vectors.T
    return to_float(a.vectors) @ to_float(b.vectors).T
