import json

import numpy as np
import pytest

from gsnn_enum.errors import NotIrreducible
from gsnn_enum.groups import index2_subgroups, pair_class_of, pair_classes, transversal
from gsnn_enum.reps import (
    SignedPermRep,
    build_rho,
    conjugacy_class_id,
    conjugate,
    conjugate_by_signs,
    direct_sum,
    factor_rho,
    is_irreducible,
    orbit_decompose,
    recover_pair,
    recovered_transversal,
    rep_type,
)

import oracles

SMALL = ["C2", "C4", "C6", "D3", "D4", "D6", "Q8", "C2^2", "C2xC4"]


def rho_of(G, H, K):
    return build_rho(G, H, K, transversal(G, H, K))


def mats(rho):
    return [rho.matrix(g) for g in range(rho.group.order)]


@pytest.mark.parametrize("name", SMALL)
def test_build_rho_is_irreducible_homomorphism(group, name):
    G = group(name)
    for pc in pair_classes(G):
        rho = rho_of(G, pc.H, pc.K)
        assert rho.is_homomorphism()
        assert rho.degree * pc.H.order == G.order
        assert oracles.pm_orbit_irreducible(mats(rho))
        assert rep_type(rho) == pc.index


@pytest.mark.parametrize("name", SMALL)
def test_recover_pair_round_trip(group, name):
    G = group(name)
    for pc in pair_classes(G):
        rho = rho_of(G, pc.H, pc.K)
        H, K, z = recover_pair(rho)
        assert (H, K) == (pc.H, pc.K)
        assert np.all(z == 1)
        assert recovered_transversal(rho).reps == transversal(G, pc.H, pc.K).reps


def test_factorization(group):
    G = group("D6")
    for pc in pair_classes(G):
        rho = rho_of(G, pc.H, pc.K)
        fac = factor_rho(rho)
        for g in range(G.order):
            n = rho.degree
            pm = np.zeros((n, n), dtype=int)
            pm[fac.pi[g], np.arange(n)] = 1
            assert np.array_equal(np.diag(fac.zeta_left[g]) @ pm, rho.matrix(g))
            assert np.array_equal(pm @ np.diag(fac.zeta_right[g]), rho.matrix(g))


@pytest.mark.parametrize("name", ["C6", "D4", "D6"])
def test_conjugated_copies_share_class(group, name):
    G = group(name)
    rng = np.random.default_rng(3)
    for pc in pair_classes(G):
        rho = rho_of(G, pc.H, pc.K)
        n = rho.degree
        for _ in range(3):
            p = rng.permutation(n)
            s = rng.choice([-1, 1], size=n)
            other = conjugate(rho, p, s)
            assert other.is_homomorphism()
            assert conjugacy_class_id(other) is pc


def test_sign_conjugation_recovers_signs(group):
    G = group("C6")
    pc = pair_classes(G)[-1]
    rho = rho_of(G, pc.H, pc.K)
    z = np.array([1, -1, 1, -1, -1, 1][: rho.degree])
    twisted = conjugate_by_signs(rho, z)
    H, K, z2 = recover_pair(twisted)
    assert (H, K) == (pc.H, pc.K)
    assert conjugate_by_signs(twisted, z2) == rho


def test_conjugate_pairs_give_conjugate_reps(group):
    # pairs in one G-class give PZ(n)-conjugate reps; distinct classes do not
    G = group("D4")
    for pc in pair_classes(G):
        if rho_of(G, pc.H, pc.K).degree > 4:
            continue
        base = mats(rho_of(G, pc.H, pc.K))
        for H, K in pc.class_members:
            assert oracles.reps_conjugate(base, mats(rho_of(G, H, K)))
    small = [pc for pc in pair_classes(G) if pc.H.order == 4]
    for i, a in enumerate(small):
        for b in small[i + 1 :]:
            assert not oracles.reps_conjugate(mats(rho_of(G, a.H, a.K)), mats(rho_of(G, b.H, b.K)))


def test_d4_klein_subgroups_merge_two_cohomology_labels(group):
    # in D4 each Klein four-subgroup has three index-2 subgroups but only two pair classes
    G = group("D4")
    kleins = [H for H in G.subgroups if H.order == 4 and all(G.mul(x, x) == 0 for x in H.members)]
    assert len(kleins) == 2
    for H in kleins:
        Ks = index2_subgroups(H)
        assert len(Ks) == 3
        by_class = {}
        for K in Ks:
            by_class.setdefault(id(pair_class_of(G, H, K)), []).append(K)
        assert sorted(len(v) for v in by_class.values()) == [1, 2]
        (K1, K2) = next(v for v in by_class.values() if len(v) == 2)
        assert oracles.reps_conjugate(mats(rho_of(G, H, K1)), mats(rho_of(G, H, K2)))


def test_not_irreducible(group):
    G = group("C2")
    pc = pair_classes(G)[0]
    rho = rho_of(G, pc.H, pc.K)
    both = direct_sum(rho, rho)
    assert not is_irreducible(both)
    with pytest.raises(NotIrreducible):
        recover_pair(both)


def test_orbit_decompose(group):
    G = group("C6")
    pcs = pair_classes(G)
    parts = [rho_of(G, pc.H, pc.K) for pc in pcs[1:4]]
    blocks = orbit_decompose(direct_sum(*parts))
    assert blocks == parts


def test_json_round_trip(group):
    G = group("D6")
    for pc in pair_classes(G):
        rho = rho_of(G, pc.H, pc.K)
        data = json.loads(json.dumps(rho.to_json()))
        assert SignedPermRep.from_json(data, G) == rho
        assert SignedPermRep.from_matrices(G, mats(rho)) == rho
