import json
from fractions import Fraction

import numpy as np
import pytest

from gsnn_enum import linalg, presets
from gsnn_enum.architect import (
    ConstraintPattern,
    admissible,
    architecture_from_json,
    architecture_to_json,
    constraint_pattern,
    enumerate_architectures,
    find,
    orthogonality_check,
    sample_instance,
    type_counts,
    weight_space,
)
from gsnn_enum.errors import UnsupportedMode, ZeroOutputScale, ZeroWeight
from gsnn_enum.groups import closure, pair_classes
from gsnn_enum.linalg import projector

import oracles

GROUPS = ["{e}", "C2", "C6", "D3", "D4", "D6", "Q8", "C2^2", "C6-rot", "D6-rot"]


def as_float(x):
    return np.asarray(x, dtype=float)


def test_c2sq_diagonal_pair_rejected(group):
    G = group("C2^2")
    # the element swapping both coordinate pairs
    ab = next(g for g in range(G.order) if np.all(as_float(G.matrix(g)).diagonal() == 0))
    H = G.subgroup([0, ab])
    res = admissible(G, H, H)
    assert not res.ok
    assert res.stabilizer == G.whole


def test_c6_all_admissible(group):
    G = group("C6")
    assert all(admissible(G, pc.H, pc.K).ok for pc in pair_classes(G))


@pytest.mark.parametrize("name", GROUPS)
def test_whole_group_stabilizes_its_projector(group, name):
    G = group(name)
    res = admissible(G, G.whole, G.whole)
    assert res.stabilizer == G.whole
    # a zero fixed space (rotation groups) leaves no weight vector to use
    assert res.ok == (res.weight_space.dim > 0)


@pytest.mark.parametrize("name", ["C6", "D6"])
def test_admissibility_against_float_oracle(group, name):
    # recompute st_G of the projector onto ran(P_K - tau P_H) in plain floats
    G = group(name)
    mats = [as_float(G.matrix(g)) for g in range(G.order)]
    for pc in pair_classes(G):
        PK = oracles.fixed_projector([mats[k] for k in pc.K.members])
        PH = oracles.fixed_projector([mats[h] for h in pc.H.members])
        M = PK if pc.index == 1 else PK - PH
        u, s, _ = np.linalg.svd(M)
        B = u[:, s > 1e-9]
        P = B @ B.T
        st = {g for g in range(G.order) if np.allclose(mats[g] @ P, P)}
        expect = B.shape[1] > 0 and st == set(pc.K.members)
        assert admissible(G, pc.H, pc.K).ok == expect


@pytest.mark.parametrize(
    "name,count,types",
    [("C6", 6, (4, 2)), ("D6", 14, (7, 7)), ("C6-rot", 2, (1, 1)), ("D6-rot", 6, (3, 3)), ("{e}", 1, (1, 0))],
)
def test_counts(group, name, count, types):
    archs = enumerate_architectures(group(name))
    assert len(archs) == count
    assert (sum(a.type == 1 for a in archs), sum(a.type == 2 for a in archs)) == types


def test_c6_hidden_sizes(group):
    archs = enumerate_architectures(group("C6"))
    assert [a.hidden for a in archs] == [6, 3, 3, 2, 1, 1]
    assert [a.name for a in archs] == ["0.0", "1.0", "1.1", "2.0", "3.0", "3.1"]


def test_d6_rot_names(group):
    names = [a.name for a in enumerate_architectures(group("D6-rot"))]
    assert names == ["0.0", "1.1", "2.0", "3.0", "4.2", "4.3"]


@pytest.mark.parametrize("name", GROUPS)
def test_architecture_invariants(group, name):
    G = group(name)
    for arch in enumerate_architectures(G):
        assert arch.hidden * arch.H.order == G.order
        assert arch.tau == arch.H.order // arch.K.order - 1
        j = int(arch.name.split(".")[1])
        assert (j == 0) == (arch.type == 1)
        V = arch.weight_space
        assert V.dim > 0
        for v in V.vectors:
            for h in arch.H.members:
                sign = 1 if h in arch.K else -1
                assert linalg.mat_equal(np.atleast_2d(G.matrix(h) @ v), np.atleast_2d(sign * v), G.tol)
        P = linalg.projector_onto(V, G.tol)
        st = [g for g in range(G.order) if linalg.mat_equal(G.matrix(g) @ P, P, G.tol)]
        assert tuple(st) == arch.K.members


def test_names_deterministic(group):
    from gsnn_enum.presets import group_from_spec

    a = [x.name for x in enumerate_architectures(group_from_spec("D6"))]
    b = [x.name for x in enumerate_architectures(group_from_spec("D6"))]
    assert a == b


def test_pattern_c6_circulant(group):
    arch = find(enumerate_architectures(group("C6")), "0.0")
    pat = constraint_pattern(arch)
    assert pat.shape == (6, 6)
    assert pat.n_colors == 6
    assert all(c is not None and c[1] == 1 for row in pat.cells for c in row)
    ids = [[c[0] for c in row] for row in pat.cells]
    for i in range(6):
        for j in range(6):
            assert ids[i][j] == ids[(i + 1) % 6][(j + 1) % 6] or ids[i][j] == ids[(i - 1) % 6][(j - 1) % 6]


def test_pattern_c6_alternating(group):
    arch = find(enumerate_architectures(group("C6")), "3.1")
    pat = constraint_pattern(arch)
    assert pat.shape == (1, 6)
    (row,) = pat.cells
    assert len({c[0] for c in row}) == 1
    assert [c[1] for c in row] == [1, -1, 1, -1, 1, -1]


def test_pattern_trivial(group):
    pat = constraint_pattern(enumerate_architectures(group("{e}"))[0])
    assert pat.shape == (1, 1) and pat.n_colors == 1


def test_pattern_float_unsupported(group):
    with pytest.raises(UnsupportedMode):
        constraint_pattern(enumerate_architectures(group("C6-rot"))[0])


@pytest.mark.parametrize("name", ["C6", "D6", "Q8"])
def test_pattern_semantics(group, name):
    # colours predict equalities across random members of the family
    rng = np.random.default_rng(0)
    for arch in enumerate_architectures(group(name)):
        pat = arch.constraint_pattern
        samples = []
        for _ in range(3):
            coeffs = [int(x) for x in rng.integers(-9, 10, size=arch.weight_space.dim)]
            if not any(coeffs):
                coeffs[0] = 1
            samples.append(sample_instance(arch, w_coeffs=coeffs, unit_normalize=False).W)
        n, m = pat.shape
        for i in range(n):
            for j in range(m):
                c = pat.cells[i][j]
                if c is None:
                    assert all(W[i, j] == 0 for W in samples)
                    continue
                for k in range(n):
                    for l in range(m):
                        d = pat.cells[k][l]
                        if d is not None and d[0] == c[0]:
                            s = c[1] * d[1]
                            assert all(W[i, j] == s * W[k, l] for W in samples)
        data = json.loads(json.dumps(pat.to_json()))
        assert ConstraintPattern.from_json(data) == pat


def test_type2_bias_forced_zero(group):
    arch = next(a for a in enumerate_architectures(group("C6-rot")) if a.type == 2)
    coeffs = arch.weight_space.vectors @ np.array([1.0, 0.0])
    inst = sample_instance(arch, a=1, b=0.5, c=[0, 0], d=0, w_coeffs=list(coeffs))
    assert np.allclose(inst.W[0], [1.0, 0.0])
    assert np.all(inst.b == 0)


def test_type1_bias_kept(group):
    arch = find(enumerate_architectures(group("C6")), "1.0")
    inst = sample_instance(arch, a=2, b=Fraction(3, 2), unit_normalize=False)
    assert all(x == Fraction(3, 2) for x in inst.b)


def test_zero_scale_and_weight(group):
    arch = enumerate_architectures(group("C6"))[0]
    with pytest.raises(ZeroOutputScale):
        sample_instance(arch, a=0)
    with pytest.raises(ZeroWeight):
        sample_instance(arch, w_coeffs=[0] * arch.weight_space.dim)


@pytest.mark.parametrize("name", GROUPS)
def test_canonical_family_identities(group, name):
    G = group(name)
    PG = as_float(projector(G.whole))
    for arch in enumerate_architectures(G):
        inst = sample_instance(arch, a=1.5, b=0.3, c=np.ones(G.dim), d=0.2)
        W = as_float(inst.W)
        assert np.allclose(np.linalg.norm(W, axis=1), 1.0)
        for i, g in enumerate(arch.transversal.reps):
            assert np.allclose(W[i], as_float(G.matrix(g)) @ W[0])
        if arch.type == 2:
            assert np.allclose(PG @ W[0], 0)
        else:
            s = W.T @ np.ones(arch.hidden)
            assert np.allclose(PG @ s, s)


def test_orthogonality_c6(group):
    G = group("C6")
    H = find(enumerate_architectures(G), "1.0").H
    names, ok = orthogonality_check(G, H)
    assert names == ["1.0", "1.1"]
    assert ok.all()


def test_orthogonality_d6_rot(group):
    G = group("D6-rot")
    H = find(enumerate_architectures(G), "4.2").H
    names, ok = orthogonality_check(G, H)
    assert names == ["4.2", "4.3"] and ok.all()


def test_orthogonality_single(group):
    G = group("C6")
    names, ok = orthogonality_check(G, G.trivial)
    assert names == ["0.0"] and ok.all()


@pytest.mark.parametrize("name", ["C6", "D6", "D6-rot"])
def test_json_round_trip(group, name):
    G = group(name)
    for arch in enumerate_architectures(G):
        data = json.loads(json.dumps(architecture_to_json(arch), sort_keys=True))
        assert data["schema"] == 1
        back = architecture_from_json(data, G)
        assert back.name == arch.name and back.rep == arch.rep
        assert back.weight_space == arch.weight_space


def test_weight_space_dims(group):
    G = group("C6")
    assert weight_space(G, G.trivial, G.trivial).dim == 6
    assert weight_space(G, G.whole, G.whole).dim == 1


def test_type_counts_conventions(group):
    c = type_counts(group("D4"))
    assert c.ratio(1) == "5/8" and c.ratio(2) == "7/13"
    assert c.ratio(2, per_pair_class=True) == "5/11"


def _d6_subgroup(G, *words):
    r = G.index_of(presets.perm([2, 3, 4, 5, 6, 1]).matrix)
    t = G.index_of(presets.perm([6, 5, 4, 3, 2, 1]).matrix)
    gens = []
    for w in words:
        x = 0
        for ch in w:
            x = G.mul(x, r if ch == "r" else t)
        gens.append(x)
    return G.subgroup(sorted(closure(G, gens)))


def test_d6_names_match_generator_table(group):
    G = group("D6")
    archs = enumerate_architectures(G)
    S = lambda *w: _d6_subgroup(G, *w)
    H = {0: S(), 1: S("rrr"), 2: S("t"), 3: S("rrrt"), 4: S("rrr", "t"), 5: S("rr", "rt"), 6: G.whole}
    K = {
        "0.0": S(), "1.0": S("rrr"), "1.1": S(), "2.0": S("t"), "2.1": S(), "3.0": S("rrrt"), "3.1": S(),
        "4.0": H[4], "4.1": S("rrr"), "4.2": S("t"), "4.3": S("rrrt"), "5.0": H[5], "6.0": G.whole,
        "6.1": S("rr", "rt"),
    }  # fmt: skip
    for name, k in K.items():
        a = find(archs, name)
        assert a.pair_class.contains(H[int(name[0])], k), name


def test_d6_edge_reflection_index2_has_no_weights(group):
    # <r^2, t> is transitive on the coordinates, so its fixed space equals that of G
    G = group("D6")
    K = _d6_subgroup(G, "rr", "t")
    assert K.order == 6
    res = admissible(G, G.whole, K)
    assert res.weight_space.dim == 0 and not res.ok
