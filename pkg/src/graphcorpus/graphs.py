"""Graph value type, validation, canonical hashing, and seeded generators.

Edges are tuples (u, v) or (u, v, weight); undirected edges are stored with
u < v. Generators draw from random.Random(seed) in a fixed documented order,
so a (parameters, seed) pair always yields the same graph.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field

from .errors import GraphInvalidError, InvalidSpecError


@dataclass
class Graph:
    num_nodes: int
    directed: bool
    edges: list[tuple] = field(default_factory=list)
    node_weights: list[int] | None = None

    @property
    def weighted(self) -> bool:
        return any(len(e) == 3 for e in self.edges)

    def edge_pairs(self) -> list[tuple[int, int]]:
        """Edge endpoints without weights, in storage order."""
        return [(e[0], e[1]) for e in self.edges]

    def edge_key_set(self) -> set[tuple[int, int]]:
        """Set of endpoint pairs; undirected pairs normalized to u < v."""
        if self.directed:
            return {(e[0], e[1]) for e in self.edges}
        return {(min(e[0], e[1]), max(e[0], e[1])) for e in self.edges}

    def has_edge(self, u: int, v: int) -> bool:
        if self.directed:
            return (u, v) in self.edge_key_set()
        return (min(u, v), max(u, v)) in self.edge_key_set()

    def weight_map(self) -> dict[tuple[int, int], int]:
        """Endpoint pair -> weight (undirected keys normalized to u < v)."""
        out: dict[tuple[int, int], int] = {}
        for e in self.edges:
            w = e[2] if len(e) == 3 else 1
            key = (e[0], e[1]) if self.directed else (min(e[0], e[1]), max(e[0], e[1]))
            out[key] = w
        return out

    def adjacency(self) -> list[list[int]]:
        """Out-neighbor lists (both directions for undirected graphs)."""
        adj: list[list[int]] = [[] for _ in range(self.num_nodes)]
        for u, v in self.edge_pairs():
            adj[u].append(v)
            if not self.directed:
                adj[v].append(u)
        return adj


def validate_graph(g: Graph) -> None:
    """Raise GraphInvalidError unless g satisfies every structural invariant."""
    if g.num_nodes < 1:
        raise GraphInvalidError(f"num_nodes must be >= 1, got {g.num_nodes}")
    arities = {len(e) for e in g.edges}
    if arities - {2, 3}:
        raise GraphInvalidError(f"edges must be (u,v) or (u,v,w) tuples, got arities {sorted(arities)}")
    if len(arities) > 1:
        raise GraphInvalidError("mixed weighted and unweighted edges")
    seen: set[tuple[int, int]] = set()
    for e in g.edges:
        u, v = e[0], e[1]
        if not (0 <= u < g.num_nodes and 0 <= v < g.num_nodes):
            raise GraphInvalidError(f"edge ({u},{v}) references a node outside [0,{g.num_nodes - 1}]")
        if u == v:
            raise GraphInvalidError(f"self loop at node {u}")
        if not g.directed and u > v:
            raise GraphInvalidError(f"undirected edge ({u},{v}) not stored with u < v")
        if (u, v) in seen:
            raise GraphInvalidError(f"duplicate edge ({u},{v})")
        seen.add((u, v))
        if len(e) == 3 and (not isinstance(e[2], int) or e[2] < 1):
            raise GraphInvalidError(f"edge ({u},{v}) weight must be a positive int, got {e[2]!r}")
    if g.node_weights is not None:
        if len(g.node_weights) != g.num_nodes:
            raise GraphInvalidError(
                f"node_weights has {len(g.node_weights)} entries for {g.num_nodes} nodes"
            )
        for i, w in enumerate(g.node_weights):
            if not isinstance(w, int) or w < 1:
                raise GraphInvalidError(f"node {i} weight must be a positive int, got {w!r}")


def canonical_key(g: Graph) -> str:
    """Content digest of the labeled graph; equal graphs hash equal.

    Edge order and undirected orientation do not affect the key.
    """
    if g.directed:
        edges = sorted(tuple(e) for e in g.edges)
    else:
        edges = sorted((min(e[0], e[1]), max(e[0], e[1])) + tuple(e[2:]) for e in g.edges)
    payload = repr((g.num_nodes, g.directed, edges, tuple(g.node_weights or ())))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def _check_er_params(num_nodes: int, p: float) -> None:
    if num_nodes <= 0:
        raise InvalidSpecError(f"num_nodes must be positive, got {num_nodes}")
    if not (0.0 <= p <= 1.0):
        raise InvalidSpecError(f"edge probability must be in [0,1], got {p}")


def generate_er(num_nodes: int, p: float, *, directed: bool = False, seed: int = 0) -> Graph:
    """Erdos-Renyi G(n, p) with one Bernoulli draw per node pair.

    Undirected: pairs (u, v) with u < v in lexicographic order. Directed:
    ordered pairs (u, v), u != v, in lexicographic order.
    """
    _check_er_params(num_nodes, p)
    rng = random.Random(seed)
    edges: list[tuple] = []
    if directed:
        for u in range(num_nodes):
            for v in range(num_nodes):
                if u != v and rng.random() < p:
                    edges.append((u, v))
    else:
        for u in range(num_nodes):
            for v in range(u + 1, num_nodes):
                if rng.random() < p:
                    edges.append((u, v))
    return Graph(num_nodes=num_nodes, directed=directed, edges=edges)


def generate_dag(num_nodes: int, p: float, *, seed: int = 0) -> Graph:
    """Random DAG: ER draws oriented along a hidden random node order.

    Each unordered pair {u, v} gets an edge with probability p, directed from
    the earlier to the later node in a seeded random permutation, so the
    result is acyclic by construction.
    """
    _check_er_params(num_nodes, p)
    rng = random.Random(seed)
    order = list(range(num_nodes))
    rng.shuffle(order)
    rank = {node: i for i, node in enumerate(order)}
    edges: list[tuple] = []
    for u in range(num_nodes):
        for v in range(u + 1, num_nodes):
            if rng.random() < p:
                edges.append((u, v) if rank[u] < rank[v] else (v, u))
    return Graph(num_nodes=num_nodes, directed=True, edges=edges)


def assign_edge_weights(g: Graph, lo: int, hi: int, *, seed: int = 0) -> Graph:
    """Copy of g with integer weights uniform in [lo, hi], one draw per edge
    in storage order."""
    if not (1 <= lo <= hi):
        raise InvalidSpecError(f"weight range [{lo},{hi}] must satisfy 1 <= lo <= hi")
    rng = random.Random(seed)
    edges = [(e[0], e[1], rng.randint(lo, hi)) for e in g.edges]
    return Graph(g.num_nodes, g.directed, edges, list(g.node_weights) if g.node_weights else None)


def assign_node_weights(g: Graph, lo: int, hi: int, *, seed: int = 0) -> Graph:
    """Copy of g with node weights uniform in [lo, hi], one draw per node."""
    if not (1 <= lo <= hi):
        raise InvalidSpecError(f"weight range [{lo},{hi}] must satisfy 1 <= lo <= hi")
    rng = random.Random(seed)
    weights = [rng.randint(lo, hi) for _ in range(g.num_nodes)]
    return Graph(g.num_nodes, g.directed, [tuple(e) for e in g.edges], weights)


def connected_components(g: Graph) -> list[list[int]]:
    """Components ignoring direction, each sorted, ordered by smallest member."""
    parent = list(range(g.num_nodes))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in g.edge_pairs():
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    groups: dict[int, list[int]] = {}
    for node in range(g.num_nodes):
        groups.setdefault(find(node), []).append(node)
    return sorted((sorted(m) for m in groups.values()), key=lambda m: m[0])
