"""Exact solvers for the nine graph tasks.

Every solver returns an Answer whose witness, when present, passes the
grader's independent validity check. hamilton_path may return None (unknown)
when its search budget runs out; callers regenerate such instances.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .errors import GraphKindError, InvalidQueryError
from .graphs import Graph
from .tasks import get_task

HAMILTON_DP_LIMIT = 15
HAMILTON_BUDGET = 10_000_000


@dataclass
class Answer:
    kind: str                # yes_no | numeric | sequence | none_exists
    value: object = None     # bool | int | list[int] | None
    witness: object = None


def _check_node(g: Graph, node: int, label: str) -> None:
    if not (0 <= node < g.num_nodes):
        raise InvalidQueryError(f"{label}={node} outside [0,{g.num_nodes - 1}]")


def _require_undirected(g: Graph, task: str) -> None:
    if g.directed:
        raise GraphKindError(f"{task} expects an undirected graph")


def _require_directed(g: Graph, task: str) -> None:
    if not g.directed:
        raise GraphKindError(f"{task} expects a directed graph")


def has_cycle(g: Graph) -> Answer:
    """Cycle = closed walk over >= 3 distinct nodes. Witness: the node list."""
    _require_undirected(g, "cycle")
    adj = g.adjacency()
    color = [0] * g.num_nodes          # 0 unseen, 1 on stack, 2 done
    parent = [-1] * g.num_nodes
    for root in range(g.num_nodes):
        if color[root]:
            continue
        stack = [(root, -1, iter(adj[root]))]
        color[root] = 1
        while stack:
            node, par, it = stack[-1]
            advanced = False
            for nxt in it:
                if nxt == par:
                    continue
                if color[nxt] == 1:
                    cycle = [node]
                    walk = node
                    while walk != nxt:
                        walk = parent[walk]
                        cycle.append(walk)
                    cycle.reverse()
                    return Answer("yes_no", True, witness=cycle)
                if color[nxt] == 0:
                    color[nxt] = 1
                    parent[nxt] = node
                    stack.append((nxt, node, iter(adj[nxt])))
                    advanced = True
                    break
            if not advanced:
                color[node] = 2
                stack.pop()
    return Answer("yes_no", False)


def is_connected(g: Graph, u: int, v: int) -> Answer:
    """Path existence between u and v. Witness: one path as a node list."""
    _require_undirected(g, "connect")
    _check_node(g, u, "u")
    _check_node(g, v, "v")
    if u == v:
        return Answer("yes_no", True, witness=[u])
    adj = g.adjacency()
    parent = {u: -1}
    frontier = [u]
    while frontier:
        nxt_frontier = []
        for node in frontier:
            for nxt in adj[node]:
                if nxt in parent:
                    continue
                parent[nxt] = node
                if nxt == v:
                    path = [v]
                    while path[-1] != u:
                        path.append(parent[path[-1]])
                    path.reverse()
                    return Answer("yes_no", True, witness=path)
                nxt_frontier.append(nxt)
        frontier = nxt_frontier
    return Answer("yes_no", False)


def is_bipartite(g: Graph) -> Answer:
    """2-colorability ignoring edge direction.

    Witness: (side0, side1) sorted node lists when yes, an odd cycle when no.
    """
    # direction is irrelevant to 2-colorability
    adj: list[list[int]] = [[] for _ in range(g.num_nodes)]
    for u, v in g.edge_pairs():
        adj[u].append(v)
        adj[v].append(u)
    color = [-1] * g.num_nodes
    parent = [-1] * g.num_nodes
    for root in range(g.num_nodes):
        if color[root] != -1:
            continue
        color[root] = 0
        frontier = [root]
        while frontier:
            nxt_frontier = []
            for node in frontier:
                for nxt in adj[node]:
                    if color[nxt] == -1:
                        color[nxt] = color[node] ^ 1
                        parent[nxt] = node
                        nxt_frontier.append(nxt)
                    elif color[nxt] == color[node] and nxt != node:
                        up_a = [node]
                        while up_a[-1] != -1:
                            up_a.append(parent[up_a[-1]])
                        up_a.pop()
                        ancestors = {x: i for i, x in enumerate(up_a)}
                        walk = nxt
                        up_b = []
                        while walk not in ancestors:
                            up_b.append(walk)
                            walk = parent[walk]
                        cycle = up_a[: ancestors[walk] + 1]
                        cycle.extend(reversed(up_b))
                        return Answer("yes_no", False, witness=cycle)
            frontier = nxt_frontier
    side0 = sorted(i for i in range(g.num_nodes) if color[i] == 0)
    side1 = sorted(i for i in range(g.num_nodes) if color[i] == 1)
    return Answer("yes_no", True, witness=(side0, side1))


def topo_sort(g: Graph) -> Answer:
    """Lexicographically smallest topological order; none_exists on a cycle."""
    _require_directed(g, "topology")
    indeg = [0] * g.num_nodes
    adj = g.adjacency()
    for _, v in g.edge_pairs():
        indeg[v] += 1
    ready = [i for i in range(g.num_nodes) if indeg[i] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        node = heapq.heappop(ready)
        order.append(node)
        for nxt in adj[node]:
            indeg[nxt] -= 1
            if indeg[nxt] == 0:
                heapq.heappush(ready, nxt)
    if len(order) < g.num_nodes:
        return Answer("none_exists")
    return Answer("sequence", order)


def shortest_path(g: Graph, u: int, v: int) -> Answer:
    """Dijkstra over positive integer weights. Witness: one optimal path."""
    _require_undirected(g, "shortest")
    _check_node(g, u, "u")
    _check_node(g, v, "v")
    if u == v:
        return Answer("numeric", 0, witness=[u])
    weights = g.weight_map()
    adj: list[list[tuple[int, int]]] = [[] for _ in range(g.num_nodes)]
    for (a, b), w in sorted(weights.items()):
        adj[a].append((b, w))
        adj[b].append((a, w))
    dist = {u: 0}
    parent = {u: -1}
    done: set[int] = set()
    heap = [(0, u)]
    while heap:
        d, node = heapq.heappop(heap)
        if node in done:
            continue
        done.add(node)
        if node == v:
            path = [v]
            while path[-1] != u:
                path.append(parent[path[-1]])
            path.reverse()
            return Answer("numeric", d, witness=path)
        for nxt, w in adj[node]:
            nd = d + w
            if nxt not in dist or nd < dist[nxt]:
                dist[nxt] = nd
                parent[nxt] = node
                heapq.heappush(heap, (nd, nxt))
    return Answer("none_exists")


def max_triangle_sum(g: Graph) -> Answer:
    """Maximum node-weight sum over triangles. Witness: the best triple."""
    _require_undirected(g, "triangle")
    if g.node_weights is None:
        raise GraphKindError("triangle expects node weights")
    nw = g.node_weights
    neighbor_sets: list[set[int]] = [set() for _ in range(g.num_nodes)]
    for a, b in g.edge_pairs():
        neighbor_sets[a].add(b)
        neighbor_sets[b].add(a)
    best_sum = -1
    best_triple: tuple[int, int, int] | None = None
    for a, b in sorted(g.edge_key_set()):
        for c in sorted(neighbor_sets[a] & neighbor_sets[b]):
            total = nw[a] + nw[b] + nw[c]
            triple = tuple(sorted((a, b, c)))
            if total > best_sum or (total == best_sum and triple < best_triple):
                best_sum = total
                best_triple = triple
    if best_triple is None:
        return Answer("none_exists")
    return Answer("numeric", best_sum, witness=list(best_triple))


def max_flow(g: Graph, s: int, t: int) -> Answer:
    """Dinic's algorithm on integer capacities.

    Witness: sorted source side of a minimum cut (its capacity equals the
    flow value by max-flow/min-cut).
    """
    _require_directed(g, "flow")
    _check_node(g, s, "s")
    _check_node(g, t, "t")
    if s == t:
        raise InvalidQueryError("flow query needs distinct source and sink")
    n = g.num_nodes
    to: list[int] = []
    cap: list[int] = []
    head: list[list[int]] = [[] for _ in range(n)]

    def add_edge(a: int, b: int, c: int) -> None:
        head[a].append(len(to))
        to.append(b)
        cap.append(c)
        head[b].append(len(to))
        to.append(a)
        cap.append(0)

    for e in g.edges:
        add_edge(e[0], e[1], e[2] if len(e) == 3 else 1)

    total = 0
    while True:
        level = [-1] * n
        level[s] = 0
        frontier = [s]
        while frontier:
            nxt_frontier = []
            for node in frontier:
                for idx in head[node]:
                    if cap[idx] > 0 and level[to[idx]] == -1:
                        level[to[idx]] = level[node] + 1
                        nxt_frontier.append(to[idx])
            frontier = nxt_frontier
        if level[t] == -1:
            break
        it = [0] * n

        def augment(node: int, limit: int) -> int:
            if node == t:
                return limit
            while it[node] < len(head[node]):
                idx = head[node][it[node]]
                nxt = to[idx]
                if cap[idx] > 0 and level[nxt] == level[node] + 1:
                    pushed = augment(nxt, min(limit, cap[idx]))
                    if pushed:
                        cap[idx] -= pushed
                        cap[idx ^ 1] += pushed
                        return pushed
                it[node] += 1
            return 0

        while True:
            pushed = augment(s, 1 << 60)
            if not pushed:
                break
            total += pushed

    reachable = {s}
    frontier = [s]
    while frontier:
        nxt_frontier = []
        for node in frontier:
            for idx in head[node]:
                if cap[idx] > 0 and to[idx] not in reachable:
                    reachable.add(to[idx])
                    nxt_frontier.append(to[idx])
        frontier = nxt_frontier
    return Answer("numeric", total, witness=sorted(reachable))


def _hamilton_dp(g: Graph) -> Answer:
    n = g.num_nodes
    if n == 1:
        return Answer("yes_no", True, witness=[0])
    adj_bits = [0] * n
    for a, b in g.edge_pairs():
        adj_bits[a] |= 1 << b
        adj_bits[b] |= 1 << a
    full = (1 << n) - 1
    ends = [0] * (1 << n)    # ends[mask] = bitmask of feasible path endpoints
    for v in range(n):
        ends[1 << v] = 1 << v
    for mask in range(1, 1 << n):
        em = ends[mask]
        if not em:
            continue
        for last in range(n):
            if not (em >> last) & 1:
                continue
            nxts = adj_bits[last] & ~mask
            while nxts:
                low = nxts & -nxts
                ends[mask | low] |= low
                nxts ^= low
    if not ends[full]:
        return Answer("yes_no", False)
    # Walk the DP backwards to recover one path.
    mask = full
    last = (ends[full] & -ends[full]).bit_length() - 1
    path = [last]
    while mask != (1 << last):
        prev_mask = mask ^ (1 << last)
        prevs = ends[prev_mask] & adj_bits[last]
        prev = (prevs & -prevs).bit_length() - 1
        mask = prev_mask
        last = prev
        path.append(last)
    path.reverse()
    return Answer("yes_no", True, witness=path)


def _hamilton_backtrack(g: Graph, budget: int) -> Answer | None:
    n = g.num_nodes
    adj_sets: list[set[int]] = [set() for _ in range(n)]
    for a, b in g.edge_pairs():
        adj_sets[a].add(b)
        adj_sets[b].add(a)
    degree = [len(s) for s in adj_sets]
    if n >= 2 and sum(1 for d in degree if d <= 1) > 2:
        return Answer("yes_no", False)
    # Low-degree nodes can only be path endpoints, so start there.
    starts = sorted(range(n), key=lambda v: (degree[v], v))
    order_key = lambda v: (degree[v], v)
    expansions = 0
    for start in starts:
        visited = [False] * n
        visited[start] = True
        path = [start]
        iters = [iter(sorted(adj_sets[start], key=order_key))]
        while iters:
            expansions += 1
            if expansions > budget:
                return None
            moved = False
            for nxt in iters[-1]:
                if not visited[nxt]:
                    visited[nxt] = True
                    path.append(nxt)
                    if len(path) == n:
                        return Answer("yes_no", True, witness=list(path))
                    iters.append(iter(sorted(adj_sets[nxt], key=order_key)))
                    moved = True
                    break
            if not moved:
                iters.pop()
                visited[path.pop()] = False
    return Answer("yes_no", False)


def hamilton_path(g: Graph, *, budget: int = HAMILTON_BUDGET,
                  dp_limit: int = HAMILTON_DP_LIMIT) -> Answer | None:
    """Hamiltonian path existence; None means the search budget ran out.

    Exact DP up to dp_limit nodes, degree-pruned backtracking beyond. A yes
    answer always carries the path as its witness.
    """
    _require_undirected(g, "hamilton")
    n = g.num_nodes
    if n >= 2:
        comp_seen = {0}
        frontier = [0]
        adj = g.adjacency()
        while frontier:
            nxt_frontier = []
            for node in frontier:
                for nxt in adj[node]:
                    if nxt not in comp_seen:
                        comp_seen.add(nxt)
                        nxt_frontier.append(nxt)
            frontier = nxt_frontier
        if len(comp_seen) < n:
            return Answer("yes_no", False)
    if n <= dp_limit:
        return _hamilton_dp(g)
    return _hamilton_backtrack(g, budget)


def find_subgraph(g: Graph, pattern: Graph) -> Answer:
    """Non-induced monomorphism: injective node map preserving pattern edges.

    Extra host edges are allowed. Witness: {pattern node: host node}.
    """
    _require_directed(g, "subgraph")
    if not pattern.directed:
        raise GraphKindError("subgraph pattern must be directed")
    if pattern.num_nodes > g.num_nodes:
        raise InvalidQueryError(
            f"pattern has {pattern.num_nodes} nodes but host has {g.num_nodes}"
        )
    k = pattern.num_nodes
    p_out: list[set[int]] = [set() for _ in range(k)]
    p_in: list[set[int]] = [set() for _ in range(k)]
    for a, b in pattern.edge_pairs():
        p_out[a].add(b)
        p_in[b].add(a)
    host_edges = g.edge_key_set()
    h_out = [0] * g.num_nodes
    h_in = [0] * g.num_nodes
    for a, b in host_edges:
        h_out[a] += 1
        h_in[b] += 1

    # Most-constrained-first: order pattern nodes by connectivity to the
    # already-ordered prefix, then by total degree.
    remaining = set(range(k))
    order: list[int] = []
    while remaining:
        def score(v: int) -> tuple[int, int, int]:
            placed = set(order)
            linked = len((p_out[v] | p_in[v]) & placed)
            return (linked, len(p_out[v]) + len(p_in[v]), -v)
        pick = max(remaining, key=score)
        order.append(pick)
        remaining.discard(pick)

    assign: dict[int, int] = {}
    used = [False] * g.num_nodes

    def backtrack(depth: int) -> bool:
        if depth == k:
            return True
        pv = order[depth]
        for hv in range(g.num_nodes):
            if used[hv]:
                continue
            if h_out[hv] < len(p_out[pv]) or h_in[hv] < len(p_in[pv]):
                continue
            ok = True
            for pn in p_out[pv]:
                if pn in assign and (hv, assign[pn]) not in host_edges:
                    ok = False
                    break
            if ok:
                for pn in p_in[pv]:
                    if pn in assign and (assign[pn], hv) not in host_edges:
                        ok = False
                        break
            if ok:
                assign[pv] = hv
                used[hv] = True
                if backtrack(depth + 1):
                    return True
                used[hv] = False
                del assign[pv]
        return False

    if backtrack(0):
        return Answer("yes_no", True, witness=dict(sorted(assign.items())))
    return Answer("yes_no", False)


def solve(task: str, g: Graph, query: dict | None = None, *,
          hamilton_budget: int = HAMILTON_BUDGET,
          hamilton_dp_limit: int = HAMILTON_DP_LIMIT) -> Answer | None:
    """Dispatch to the task's solver; query fields depend on the task."""
    get_task(task)
    query = query or {}
    if task == "cycle":
        return has_cycle(g)
    if task == "connect":
        return is_connected(g, query["u"], query["v"])
    if task == "bipartite":
        return is_bipartite(g)
    if task == "topology":
        return topo_sort(g)
    if task == "shortest":
        return shortest_path(g, query["u"], query["v"])
    if task == "triangle":
        return max_triangle_sum(g)
    if task == "flow":
        return max_flow(g, query["s"], query["t"])
    if task == "hamilton":
        return hamilton_path(g, budget=hamilton_budget, dp_limit=hamilton_dp_limit)
    return find_subgraph(g, query["pattern"])
