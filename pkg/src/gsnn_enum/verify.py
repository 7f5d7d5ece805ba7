"""Evaluation, canonical forms and empirical invariance checks for shallow
ReLU networks f(x) = a . relu(W x + b) + c . x + d.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key

import numpy as np

from . import linalg
from .architect import ArchitectureSpec, SNNInstance
from .config import DEFAULT_TOL, Tolerances
from .errors import DimensionMismatch


def relu(v: np.ndarray) -> np.ndarray:
    if linalg.is_exact(v):
        return np.array([x if x > 0 else Fraction(0) for x in v], dtype=object)
    return np.maximum(v, 0.0)


def eval_snn(inst: SNNInstance, x) -> object:
    x = np.asarray(x)
    if x.dtype != object:
        x = x.astype(float)
    n, m = inst.W.shape
    if x.shape != (m,) or inst.a.shape != (n,) or inst.b.shape != (n,) or inst.c.shape != (m,):
        raise DimensionMismatch(f"W is {n}x{m}, got x{x.shape}, a{inst.a.shape}, b{inst.b.shape}, c{inst.c.shape}")
    if inst.exact and x.dtype == object:
        return inst.a @ relu(inst.W @ x + inst.b) + inst.c @ x + inst.d
    f = inst.as_float()
    x = linalg.to_float(x)
    return float(f.a @ relu(f.W @ x + f.b) + f.c @ x + f.d)


def eval_batch(inst: SNNInstance, X: np.ndarray) -> np.ndarray:
    """f at every column of the m x k matrix X."""
    if X.shape[0] != inst.W.shape[1]:
        raise DimensionMismatch(f"inputs have dimension {X.shape[0]}, expected {inst.W.shape[1]}")
    if not (inst.exact and linalg.is_exact(X)):
        inst, X = inst.as_float(), linalg.to_float(X)
    Z = inst.W @ X + inst.b[:, None]
    if linalg.is_exact(Z):
        Z = np.where(Z > 0, Z, Fraction(0))
    else:
        Z = np.maximum(Z, 0.0)
    return inst.a @ Z + inst.c @ X + inst.d


@dataclass(frozen=True, eq=False)
class CanonicalForm:
    W: np.ndarray
    b: np.ndarray
    a: np.ndarray
    c: np.ndarray
    d: float

    @property
    def n_star(self) -> int:
        return self.W.shape[0]

    def to_instance(self) -> SNNInstance:
        return SNNInstance(self.W.copy(), self.a.copy(), self.b.copy(), self.c.copy(), self.d)

    def allclose(self, other: "CanonicalForm", atol: float = 1e-9) -> bool:
        if self.W.shape != other.W.shape:
            return False
        pairs = [(self.W, other.W), (self.b, other.b), (self.a, other.a), (self.c, other.c)]
        return all(np.allclose(x, y, rtol=0, atol=atol) for x, y in pairs) and abs(self.d - other.d) <= atol

    def to_json(self) -> dict:
        return {
            "n_star": self.n_star,
            "W": self.W.tolist(),
            "b": self.b.tolist(),
            "a": self.a.tolist(),
            "c": self.c.tolist(),
            "d": float(self.d),
        }


def _lex_cmp(tol: float):
    def cmp(u, v):
        for x, y in zip(u, v):
            if abs(x - y) > tol:
                return -1 if x < y else 1
        return 0

    return cmp


def canonicalize(inst: SNNInstance, tol: Tolerances = DEFAULT_TOL) -> CanonicalForm:
    """Unique representative of ``inst`` modulo row permutations, positive
    row rescaling and sign flips absorbed by the affine part.

    Works in float64; exact instances are converted first.
    """
    f = inst.as_float()
    W, a, b = f.W.copy(), f.a.copy(), f.b.copy()
    c, d = f.c.copy(), float(f.d)
    rows_w, rows_b, rows_a = [], [], []
    for i in range(W.shape[0]):
        if abs(a[i]) <= tol.equal:
            continue
        norm = np.linalg.norm(W[i])
        if norm <= tol.equal:
            # constant neuron
            d += a[i] * max(b[i], 0.0)
            continue
        w, bi, ai = W[i] / norm, b[i] / norm, a[i] * norm
        nz = np.flatnonzero(np.abs(w) > tol.equal)
        if w[nz[0]] < 0:
            # relu(u) = relu(-u) + u
            c += ai * w
            d += ai * bi
            w, bi = -w, -bi
        rows_w.append(w)
        rows_b.append(bi)
        rows_a.append(ai)
    # merge parallel rows of [W|b]
    merged: list[list] = []
    for w, bi, ai in zip(rows_w, rows_b, rows_a):
        aug = np.append(w, bi)
        for row in merged:
            other = np.append(row[0], row[1])
            cos = aug @ other / (np.linalg.norm(aug) * np.linalg.norm(other))
            if cos >= 1 - tol.parallel:
                row[2] += ai
                break
        else:
            merged.append([w, bi, ai])
    merged = [r for r in merged if abs(r[2]) > tol.equal]
    key = cmp_to_key(_lex_cmp(tol.equal))
    merged.sort(key=lambda r: key(np.append(r[0], r[1])))
    m = W.shape[1]
    if merged:
        Wc = np.stack([r[0] for r in merged])
        bc = np.array([r[1] for r in merged])
        ac = np.array([r[2] for r in merged])
    else:
        Wc, bc, ac = np.zeros((0, m)), np.zeros(0), np.zeros(0)
    return CanonicalForm(Wc, bc, ac, c, d)


def random_inputs(m: int, trials: int, seed: int, exact: bool = False) -> list[np.ndarray]:
    """Standard normal draws; exact draws are rounded to multiples of 1/1024."""
    rng = np.random.default_rng(seed)
    xs = rng.standard_normal((trials, m))
    if not exact:
        return list(xs)
    return [linalg.exact_array([Fraction(int(round(v * 1024)), 1024) for v in x]) for x in xs]


def _scaled_ints(arr) -> tuple[np.ndarray, int]:
    """(N, D) with arr == N / D, N an object array of Python ints."""
    arr = np.asarray(arr, dtype=object)
    D = math.lcm(*(Fraction(x).denominator for x in arr.flat)) if arr.size else 1
    N = np.array([int(Fraction(x) * D) for x in arr.flat], dtype=object).reshape(arr.shape)
    return N, D


def _exact_evaluator(inst: SNNInstance):
    """f on integer input columns Xn / Dx, in scaled integer arithmetic.

    Same values as eval_batch, with far fewer Fraction objects.
    """
    Wn, Dw = _scaled_ints(inst.W)
    bn, Db = _scaled_ints(inst.b)
    an, Da = _scaled_ints(inst.a)
    cn, Dc = _scaled_ints(inst.c)
    d = Fraction(inst.d)

    def values(Xn: np.ndarray, Dx: int) -> list[Fraction]:
        L = math.lcm(Dw * Dx, Db)
        Z = (L // (Dw * Dx)) * (Wn @ Xn) + (L // Db) * bn[:, None]
        Z = np.where(Z > 0, Z, 0)
        S = math.lcm(Da * L, Dc * Dx)
        num = (S // (Da * L)) * (an @ Z) + (S // (Dc * Dx)) * (cn @ Xn)
        return [Fraction(int(v), S) + d for v in num]

    return values


def invariance_report(arch: ArchitectureSpec, inst: SNNInstance, trials: int = 100, seed: int = 0):
    """max |f(g x) - f(x)| over seeded random x and all g.

    Exact groups with exact instances are evaluated in rational arithmetic,
    so a correct instance gives exactly 0.
    """
    G = arch.group
    exact = G.exact and inst.exact
    gap = Fraction(0) if exact else 0.0
    # all group matrices stacked: row block g holds the matrix of g
    stack = np.concatenate([G.matrix(g) for g in range(G.order)], axis=0)
    m = G.dim
    if exact:
        Sn, Ds = _scaled_ints(stack)
        values = _exact_evaluator(inst)
    else:
        stack = linalg.to_float(stack)
    for x in random_inputs(m, trials, seed, exact):
        if exact:
            xn, Dx = _scaled_ints(x)
            vals = values((Sn @ xn).reshape(G.order, m).T, Ds * Dx)
        else:
            vals = eval_batch(inst, (stack @ x).reshape(G.order, m).T)
        gap = max(gap, max(abs(v - vals[0]) for v in vals))
    return gap


def relation_check(arch: ArchitectureSpec, inst: SNNInstance, tol: Tolerances = DEFAULT_TOL) -> bool:
    """rho(g) W = W g, pi(g) a = a, rho(g) b = b and g c = c + (I - g) W^T a / 2 for all g."""
    G, rho = arch.group, arch.rep
    exact = inst.exact and G.exact
    W, a, b, c = (inst.W, inst.a, inst.b, inst.c) if exact else (
        linalg.to_float(inst.W), linalg.to_float(inst.a), linalg.to_float(inst.b), linalg.to_float(inst.c)
    )
    I = linalg.identity(G.dim, exact)
    half = Fraction(1, 2) if exact else 0.5
    for g in range(G.order):
        M = G.matrix(g) if exact else linalg.to_float(G.matrix(g))
        R = rho.matrix(g)
        P = np.abs(R)
        checks = [
            (R @ W, W @ M),
            (P @ a, a),
            (R @ b, b),
            (M @ c, c + half * ((I - M) @ (W.T @ a))),
        ]
        for lhs, rhs in checks:
            if not linalg.mat_equal(np.atleast_2d(lhs), np.atleast_2d(rhs), tol):
                return False
    return True


def relu_identity_check(samples) -> bool:
    """relu(x) - relu(z x) == H(-z) x for z in {-1, 1}."""
    for x, z in samples:
        if z not in (-1, 1):
            raise ValueError("z must be +-1")
        lhs = max(x, 0) - max(z * x, 0)
        rhs = x if z < 0 else 0
        if lhs != rhs:
            return False
    return True
