import itertools

import numpy as np
import pytest

from gsnn_enum.cohomology import (
    add_labels,
    aut_orbits,
    coboundary,
    cocycle_of,
    cohomologous,
    cohomology_dot,
    cohomology_group,
    is_coboundary,
)
from gsnn_enum.groups import index2_subgroups, pair_class_of, pair_classes, subgroup_classes, transversal
from gsnn_enum.reps import build_rho

GROUPS = ["C2", "C4", "C6", "D3", "D4", "D6", "Q8", "C2^2", "C2^3", "C2xC4"]


def cocycle(G, H, K):
    return cocycle_of(build_rho(G, H, K, transversal(G, H, K)), H)


def brute_coboundary(c):
    n = c.degree
    for bits in itertools.product((0, 1), repeat=n):
        if np.array_equal(coboundary(c.pi, np.array(bits)), c.values):
            return True
    return False


@pytest.mark.parametrize("name", GROUPS)
def test_cocycle_condition(group, name):
    G = group(name)
    for pc in pair_classes(G):
        assert cocycle(G, pc.H, pc.K).satisfies_cocycle_condition()


@pytest.mark.parametrize("name", GROUPS)
def test_h1_order(group, name):
    G = group(name)
    for H in G.subgroups:
        grp = cohomology_group(G, H)
        assert grp.order == 1 + len(index2_subgroups(H))
        assert grp.check_axioms()


@pytest.mark.parametrize("name", ["C4", "C6", "D3", "D4", "D6", "C2^2"])
def test_coboundary_matches_brute_force(group, name):
    G = group(name)
    for pc in pair_classes(G):
        if G.order // pc.H.order > 8:
            continue
        c = cocycle(G, pc.H, pc.K)
        assert is_coboundary(c) == brute_coboundary(c) == (pc.index == 1)


@pytest.mark.parametrize("name", ["C6", "D4", "D6", "Q8", "C2^2"])
def test_addition_law_matches_cocycle_sum(group, name):
    G = group(name)
    for cls in subgroup_classes(G):
        H = cls[0]
        Ks = [H] + index2_subgroups(H)
        for K1 in Ks:
            for K2 in Ks:
                lhs = cocycle(G, H, K1) + cocycle(G, H, K2)
                rhs = cocycle(G, H, add_labels(H, K1, K2))
                assert cohomologous(lhs, rhs)
                assert cohomologous(cocycle(G, H, K1), cocycle(G, H, K2)) == (K1 == K2)


def test_d6_h4_ring_is_klein(group):
    G = group("D6")
    H = G.subgroup([0, 2, 6, 11])
    grp = cohomology_group(G, H)
    assert grp.order == 4
    assert all(grp.addition[a, a] == 0 for a in range(4))


def test_type_one_iff_zero_class(group):
    G = group("D6")
    for pc in pair_classes(G):
        grp = cohomology_group(G, pc.H)
        cls = grp.classes[grp.index_of(pc.K)]
        assert cls.is_zero == (pc.index == 1)


def test_aut_orbits(group):
    G = group("D4")
    for cls in subgroup_classes(G):
        H = cls[0]
        orbits = aut_orbits(G, H)
        assert sorted(i for o in orbits for i in o) == list(range(cohomology_group(G, H).order))
        assert len(orbits) == sum(1 for pc in pair_classes(G) if pc.H == H)


def test_dot(group):
    G = group("C6")
    pc = pair_classes(G)[-1]
    dot = cohomology_dot(build_rho(G, pc.H, pc.K, transversal(G, pc.H, pc.K)), "C6 3.1")
    assert dot.startswith('digraph "C6 3.1"')
    assert "dashed" in dot
    assert dot.count("->") == len(G.generators) * (G.order // pc.H.order)
    assert pair_class_of(G, pc.H, pc.K) is pc
