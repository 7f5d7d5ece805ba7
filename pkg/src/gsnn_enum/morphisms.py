"""Relations between architectures of one group: asymptotic-inclusion
candidates, topological tunnelling pairs and achievable hidden widths."""

from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from . import linalg
from .architect import ArchitectureSpec, SCHEMA
from .groups import subgroup_classes

CANDIDATE = "candidate"


def tunnel_edges(archs: list[ArchitectureSpec]) -> list[tuple[str, str]]:
    """Unordered pairs sharing the H-class with different K."""
    out = []
    for i, a in enumerate(archs):
        for b in archs[i + 1 :]:
            if a.pair_class.h_class == b.pair_class.h_class and a.pair_class is not b.pair_class:
                out.append((a.name, b.name))
    return out


def _moved_space(arch: ArchitectureSpec, g: int) -> linalg.SubspaceBasis:
    G = arch.group
    M = G.matrix(g)
    vecs = [M @ v for v in arch.weight_space.vectors]
    return linalg.span(vecs, G.dim, G.tol)


def includes(a: ArchitectureSpec, b: ArchitectureSpec) -> bool:
    """Sufficient test for a -> b: some g has gH_b g^-1 <= H_a, gK_b g^-1 <= K_a
    and weight_space(a) <= g weight_space(b)."""
    if a is b or a.pair_class is b.pair_class:
        return False
    G = a.group
    for g in range(G.order):
        gi = G.inv(g)
        # Subgroup.conjugate(x) is x^-1 S x, so conjugate(g^-1) is g S g^-1
        if not b.H.conjugate(gi).issubset(a.H) or not b.K.conjugate(gi).issubset(a.K):
            continue
        if linalg.subspace_leq(a.weight_space, _moved_space(b, g), G.tol):
            return True
    return False


def inclusion_candidates(archs: list[ArchitectureSpec]) -> list[tuple[str, str]]:
    return [(a.name, b.name) for a in archs for b in archs if includes(a, b)]


def layers(archs: list[ArchitectureSpec]) -> dict[str, int]:
    """Layer of each node: height of its H-class among the H-classes present,
    ordered by containment up to conjugacy."""
    if not archs:
        return {}
    G = archs[0].group
    classes = subgroup_classes(G)
    present = sorted({a.pair_class.h_class for a in archs})

    def below(p: int, q: int) -> bool:
        # some conjugate of class p sits strictly inside the representative of q
        rep_q = classes[q][0]
        return p != q and any(s.issubset(rep_q) for s in classes[p])

    height: dict[int, int] = {}
    for q in sorted(present, key=lambda c: classes[c][0].order):
        height[q] = max((height[p] + 1 for p in height if below(p, q)), default=0)
    return {a.name: height[a.pair_class.h_class] for a in archs}


def width_semigroup(sizes, max_width: int) -> set[int]:
    """Widths sum_i c_i n_i + 2 e with c_i >= 0 and e in {0, 1}, up to max_width."""
    reach = np.zeros(max_width + 1, dtype=bool)
    reach[0] = True
    for n in sorted(set(int(s) for s in sizes)):
        if n <= 0:
            continue
        for w in range(n, max_width + 1):
            reach[w] |= reach[w - n]
    out = set(np.flatnonzero(reach).tolist())
    return out | {w + 2 for w in out if w + 2 <= max_width}


@dataclass
class MorphismGraph:
    group: str
    nodes: list[str]
    hidden: dict[str, int]
    types: dict[str, int]
    inclusion_edges: list[tuple[str, str]]
    tunnel_edges: list[tuple[str, str]]
    layers: dict[str, int]
    reduced_edges: list[tuple[str, str]] = field(default_factory=list)

    @property
    def n_layers(self) -> int:
        return len(set(self.layers.values()))

    def is_dag(self) -> bool:
        g = nx.DiGraph(self.inclusion_edges)
        g.add_nodes_from(self.nodes)
        return nx.is_directed_acyclic_graph(g)

    def to_dot(self) -> str:
        lines = [f'digraph "{self.group}" {{', "  rankdir=BT;", "  node [shape=box];"]
        for n in self.nodes:
            lines.append(f'  "{n}" [label="{n}\\nn={self.hidden[n]} type {self.types[n]}"];')
        for lay in sorted(set(self.layers.values())):
            members = " ".join(f'"{n}";' for n in self.nodes if self.layers[n] == lay)
            lines.append(f"  {{ rank=same; {members} }}")
        for a, b in self.reduced_edges:
            lines.append(f'  "{a}" -> "{b}" [color=black, label="{CANDIDATE}"];')
        for a, b in self.tunnel_edges:
            lines.append(f'  "{a}" -> "{b}" [color=red, dir=both, penwidth=2];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "group": self.group,
            "nodes": [
                {"name": n, "hidden": self.hidden[n], "type": self.types[n], "layer": self.layers[n]} for n in self.nodes
            ],
            "inclusion_edges": [{"from": a, "to": b, "kind": CANDIDATE} for a, b in self.inclusion_edges],
            "reduced_inclusion_edges": [{"from": a, "to": b, "kind": CANDIDATE} for a, b in self.reduced_edges],
            "tunnel_edges": [sorted([a, b]) for a, b in self.tunnel_edges],
        }

    @classmethod
    def from_json(cls, data: dict) -> "MorphismGraph":
        if data.get("schema") != SCHEMA:
            raise ValueError(f"unsupported schema {data.get('schema')!r}")
        nodes = [n["name"] for n in data["nodes"]]
        return cls(
            group=data["group"],
            nodes=nodes,
            hidden={n["name"]: n["hidden"] for n in data["nodes"]},
            types={n["name"]: n["type"] for n in data["nodes"]},
            inclusion_edges=[(e["from"], e["to"]) for e in data["inclusion_edges"]],
            tunnel_edges=[tuple(e) for e in data["tunnel_edges"]],
            layers={n["name"]: n["layer"] for n in data["nodes"]},
            reduced_edges=[(e["from"], e["to"]) for e in data["reduced_inclusion_edges"]],
        )


def morphism_graph(archs: list[ArchitectureSpec]) -> MorphismGraph:
    names = [a.name for a in archs]
    inc = inclusion_candidates(archs)
    dag = nx.DiGraph()
    dag.add_nodes_from(names)
    dag.add_edges_from(inc)
    reduced = nx.transitive_reduction(dag) if nx.is_directed_acyclic_graph(dag) else dag
    order = {n: i for i, n in enumerate(names)}
    red = sorted(reduced.edges(), key=lambda e: (order[e[0]], order[e[1]]))
    return MorphismGraph(
        group=archs[0].group.name if archs else "",
        nodes=names,
        hidden={a.name: a.hidden for a in archs},
        types={a.name: a.type for a in archs},
        inclusion_edges=inc,
        tunnel_edges=tunnel_edges(archs),
        layers=layers(archs),
        reduced_edges=red,
    )
