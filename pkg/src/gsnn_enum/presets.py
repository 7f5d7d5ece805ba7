"""Named group constructions and the JSON group-spec format.

Permutations are written 1-indexed as image lists ``[i_1, ..., i_n]``
meaning e_j -> e_{i_j}. Cyclic groups are generated by ``[2, ..., n, 1]``;
dihedral groups add the reversal ``[n, ..., 1]``; direct products act by
direct sum on concatenated coordinates.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .config import DEFAULT_MAX_ORDER, DEFAULT_TOL, Tolerances
from .errors import GroupSpecError
from .groups import FiniteGroup, GroupElement, close_generators
from .linalg import exact_array, identity


def perm(image_1idx, exact: bool = True) -> GroupElement:
    return GroupElement.from_perm([i - 1 for i in image_1idx], exact=exact)


def cycle_image(n: int) -> list[int]:
    return [i % n + 1 for i in range(1, n + 1)]


def reversal_image(n: int) -> list[int]:
    return list(range(n, 0, -1))


def cyclic_perm(n: int, **kw) -> FiniteGroup:
    kw.setdefault("name", f"C{n}")
    exact = kw.pop("exact", True)
    return close_generators([perm(cycle_image(n), exact)], **kw)


def dihedral_perm(n: int, **kw) -> FiniteGroup:
    kw.setdefault("name", f"D{n}")
    exact = kw.pop("exact", True)
    return close_generators([perm(cycle_image(n), exact), perm(reversal_image(n), exact)], **kw)


def trivial(m: int = 1, **kw) -> FiniteGroup:
    kw.setdefault("name", "{e}")
    return close_generators([], dim=m, **kw)


Q8_GENERATORS = (
    [3, 4, 2, 1, 7, 8, 6, 5],
    [5, 6, 8, 7, 2, 1, 3, 4],
    [7, 8, 5, 6, 4, 3, 2, 1],
)


def quaternion_perm(**kw) -> FiniteGroup:
    kw.setdefault("name", "Q8")
    exact = kw.pop("exact", True)
    return close_generators([perm(g, exact) for g in Q8_GENERATORS], **kw)


def _embed(mat: np.ndarray, offset: int, total: int, exact: bool) -> np.ndarray:
    out = identity(total, exact)
    k = mat.shape[0]
    out[offset : offset + k, offset : offset + k] = mat
    return out


def direct_product(factors: list[FiniteGroup], **kw) -> FiniteGroup:
    """Direct sum action of the factors' generators on concatenated coordinates."""
    kw.setdefault("name", "x".join(f.name for f in factors))
    total = sum(f.dim for f in factors)
    exact = all(f.exact for f in factors)
    gens = []
    off = 0
    for f in factors:
        for g in f.generators:
            gens.append(GroupElement(_embed(f.matrix(g), off, total, exact)))
        off += f.dim
    return close_generators(gens, dim=total, exact=exact, **kw)


def rotation_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def reflection_matrix(axis_deg: float) -> np.ndarray:
    """Reflection about the line through the origin at ``axis_deg`` degrees."""
    phi = math.radians(2 * axis_deg)
    return np.array([[math.cos(phi), math.sin(phi)], [math.sin(phi), -math.cos(phi)]])


def rotation2d(n: int, **kw) -> FiniteGroup:
    kw.setdefault("name", f"C{n}-rot")
    kw.pop("exact", None)
    return close_generators([rotation_matrix(2 * math.pi / n)], exact=False, **kw)


def dihedral2d(n: int, axis_deg: float = 0.0, **kw) -> FiniteGroup:
    """Rotation by 360/n degrees plus a reflection, generated in that order.

    The generator order matches :func:`dihedral_perm`, so both groups get the
    same element indexing and multiplication table; the permutation twin is
    attached as the naming reference.
    """
    kw.setdefault("name", f"D{n}-rot")
    kw.pop("exact", None)
    G = close_generators(
        [rotation_matrix(2 * math.pi / n), reflection_matrix(axis_deg)], exact=False, **kw
    )
    ref = dihedral_perm(n, max_order=kw.get("max_order", DEFAULT_MAX_ORDER))
    if ref.same_table(G):
        G.naming_reference = ref
    return G


# every group of order <= 8 up to isomorphism, one permutation action each
REFERENCE_GROUPS = (
    "C2", "C3", "C4", "C5", "C6", "C7", "C8",
    "{e}", "C2^2", "C2^3", "C2xC4", "D3", "D4", "Q8",
)  # fmt: skip

PRESET_SPECS: dict[str, dict] = {
    "{e}": {"kind": "trivial", "dim": 1},
    "trivial": {"kind": "trivial", "dim": 1},
    "C2^2": {"kind": "product", "factors": [{"kind": "cyclic-perm", "n": 2}] * 2},
    "C2^3": {"kind": "product", "factors": [{"kind": "cyclic-perm", "n": 2}] * 3},
    "C2xC4": {
        "kind": "product",
        "factors": [{"kind": "cyclic-perm", "n": 2}, {"kind": "cyclic-perm", "n": 4}],
    },
    "Q8": {"kind": "quaternion-perm"},
    "C6-rot": {"kind": "rotation2d", "n": 6},
    "D6-rot": {"kind": "dihedral2d", "n": 6, "axis_deg": 15},
}
for _n in range(2, 13):
    PRESET_SPECS[f"C{_n}"] = {"kind": "cyclic-perm", "n": _n}
    if _n >= 3:
        PRESET_SPECS[f"D{_n}"] = {"kind": "dihedral-perm", "n": _n}


def group_from_spec(
    spec: dict | str,
    max_order: int = DEFAULT_MAX_ORDER,
    tol: Tolerances = DEFAULT_TOL,
    exact: bool | None = None,
) -> FiniteGroup:
    """Build a group from a spec dict, a preset name, or inline JSON text.

    ``exact=False`` forces float arithmetic on a permutation group; rotation
    kinds are always float.
    """
    if isinstance(spec, str):
        text = spec.strip()
        if text in PRESET_SPECS:
            G = group_from_spec(PRESET_SPECS[text], max_order, tol, exact)
            G.name = text
            return G
        if text.startswith("{"):
            try:
                spec = json.loads(text)
            except json.JSONDecodeError as exc:
                raise GroupSpecError(f"bad inline group spec: {exc}") from exc
        else:
            raise GroupSpecError(f"unknown group preset {text!r}")
    if not isinstance(spec, dict) or "kind" not in spec:
        raise GroupSpecError("group spec must be an object with a 'kind' field")
    kind = spec["kind"]
    ex = True if exact is None else exact
    kw = dict(max_order=max_order, tol=tol)
    if "name" in spec:
        kw["name"] = spec["name"]
    try:
        if kind == "cyclic-perm":
            return cyclic_perm(int(spec["n"]), exact=ex, **kw)
        if kind == "dihedral-perm":
            return dihedral_perm(int(spec["n"]), exact=ex, **kw)
        if kind == "quaternion-perm":
            return quaternion_perm(exact=ex, **kw)
        if kind == "trivial":
            return trivial(int(spec.get("dim", 1)), exact=ex, **kw)
        if kind == "product":
            factors = [group_from_spec(f, max_order, tol, exact) for f in spec["factors"]]
            if not factors:
                raise GroupSpecError("product needs at least one factor")
            return direct_product(factors, **kw)
        if kind == "rotation2d":
            return rotation2d(int(spec["n"]), **kw)
        if kind == "dihedral2d":
            return dihedral2d(int(spec["n"]), float(spec.get("axis_deg", 0.0)), **kw)
        if kind == "generators":
            if "perms" in spec:
                gens = [perm(p, ex) for p in spec["perms"]]
                dim = spec.get("dim") or (len(spec["perms"][0]) if spec["perms"] else None)
            elif "matrices" in spec:
                mats = [np.array(m, dtype=float) for m in spec["matrices"]]
                if ex and all(np.all(m == np.round(m)) for m in mats):
                    mats = [exact_array(m.astype(int)) for m in mats]
                gens = [GroupElement(m) for m in mats]
                dim = spec.get("dim") or (mats[0].shape[0] if mats else None)
            else:
                raise GroupSpecError("generators spec needs 'perms' or 'matrices'")
            return close_generators(gens, dim=dim, exact=ex if not gens else None, **kw)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, GroupSpecError):
            raise
        raise GroupSpecError(f"bad {kind!r} spec: {exc}") from exc
    raise GroupSpecError(f"unknown group kind {kind!r}")


def load_group_file(path: str | Path, **kw) -> FiniteGroup:
    with open(path) as fh:
        return group_from_spec(json.load(fh), **kw)
