"""Problem type, text rendering, prompt assembly, and parsing.

Each task renders its graph with a fixed tuple style (some tasks use
"(u,v)", some "(u->v)", weighted variants add ",k", triangle spaces its
tuples) and a fixed question sentence; the parser accepts optional
whitespace everywhere and inverts the rendering exactly.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

from .errors import InvalidSpecError, ParseError
from .graphs import Graph, validate_graph
from .solvers import Answer
from .tasks import get_task


@dataclass
class Problem:
    id: str
    task: str
    graph: Graph
    query: dict
    answer: Answer | None = None
    tier: dict | None = None     # {"n": int, "p": float, "difficulty": str}
    seed: int | None = None
    text: str = ""


@dataclass(frozen=True)
class TaskTemplate:
    header: str
    lead_in: str
    exemplars: tuple[tuple[str, str], ...]   # (question, answer) pairs


def _letter(i: int) -> str:
    if not (0 <= i < 26):
        raise InvalidSpecError(f"pattern node {i} cannot be lettered (supports a..z)")
    return chr(ord("a") + i)


def _edge_str(task: str, e: tuple) -> str:
    u, v = e[0], e[1]
    if task == "shortest":
        return f"({u},{v},{e[2]})"
    if task == "flow":
        return f"({u}->{v},{e[2]})"
    if task == "triangle":
        return f"({u}, {v})"
    if task in ("bipartite", "topology"):
        return f"({u}->{v})"
    if task == "subgraph":
        return f"({_letter(u)}->{_letter(v)})"
    return f"({u},{v})"


def _edge_section(task: str, g: Graph, host: bool = True) -> str:
    kind = task if not (task == "subgraph" and host) else "subgraph_host"
    if kind == "subgraph_host":
        parts = [f"({e[0]}->{e[1]})" for e in g.edges]
    else:
        parts = [_edge_str(task, e) for e in g.edges]
    if not parts:
        return "there are no edges in the graph"
    return "the edges are: " + " ".join(parts)


def render_problem(task: str, g: Graph, query: dict | None = None) -> str:
    """Graph preamble plus the task's question sentence."""
    info = get_task(task)
    query = query or {}
    last = g.num_nodes - 1
    if task == "subgraph":
        pattern: Graph = query["pattern"]
        head = (
            f"The nodes of graph G are numbered from 0 to {last}, and "
            f"{_edge_section(task, g, host=True)}. "
            f"The nodes of subgraph G' are numbered from a to "
            f"{_letter(pattern.num_nodes - 1)}, and "
            f"{_edge_section(task, pattern, host=False)}."
        )
        question = "Is subgraph G' present within graph G as a direct substructure?"
        return f"{head} {question}"
    if task == "triangle":
        weights = " ".join(f"[{i}, {w}]" for i, w in enumerate(g.node_weights or []))
        head = (
            f"The nodes are numbered from 0 to {last}, weights of nodes are: "
            f"{weights}, and {_edge_section(task, g)}."
        )
        question = "What is the maximum sum of the weights of three interconnected nodes?"
        return f"{head} {question}"
    if task == "shortest":
        head = (
            f"In an undirected graph, the nodes are numbered from 0 to {last}, "
            f"and {_edge_section(task, g)}."
        )
        question = (
            f"Give the weight of the shortest path from node {query['u']} "
            f"to node {query['v']}."
        )
        return f"{head} {question}"
    head = f"The nodes are numbered from 0 to {last}, and {_edge_section(task, g)}."
    if task == "cycle":
        question = "Is there a cycle in this graph?"
    elif task == "connect":
        question = f"Is there a path between node {query['u']} and node {query['v']}?"
    elif task == "bipartite":
        question = "Is this graph bipartite?"
    elif task == "topology":
        question = "Give one topology sorting path of this graph."
    elif task == "flow":
        question = f"What is the maximum flow from node {query['s']} to node {query['t']}?"
    else:
        question = "Is there a Hamiltonian path in this graph?"
    return f"{head} {question}"


ALPACA_PREFIX = (
    "Below is an instruction that describes a task.\n"
    "Write a response that appropriately completes the request.\n\n"
    "### Instruction:\n"
)


def wrap_instruction(question: str) -> str:
    """Wrap a rendered problem in the instruction-following input format."""
    if "### Instruction:" in question or "### Response:" in question:
        raise InvalidSpecError("question text already contains instruction markers")
    return f"{ALPACA_PREFIX}{question}\n\n### Response:"


def estimate_tokens(text: str) -> int:
    """Cheap length gate: about four characters per token."""
    return math.ceil(len(text) / 4)


# ---------------------------------------------------------------------------
# Chain-of-thought prompt templates. Headers and the exemplars of connect,
# shortest, flow, triangle, hamilton, and subgraph are frozen interface
# strings (including their original typos); cycle, bipartite, and topology
# exemplars are authored here in the same voice and verified against the
# solvers in the test suite.
# ---------------------------------------------------------------------------

TEMPLATES: dict[str, TaskTemplate] = {
    "cycle": TaskTemplate(
        header=(
            "Determine whether or not there is a cycle in an undirected graph. "
            "Begin with '###' to give your final conclusion.\n"
            "In an undirected graph, (i,j) means that node i and node j are "
            "connected with an undirected edge.\n"
            "Given a graph, you need to output Yes or No step by step, "
            "indicating whether there is a cycle in the graph."
        ),
        lead_in="Below are examples:",
        exemplars=(
            (
                "The nodes are numbered from 0 to 4, and the edges are: "
                "(0,1) (1,2) (2,3) (0,3) (3,4). Is there a cycle in this graph?",
                "Starting from node 0, we can go to node 1, then from node 1 to "
                "node 2, then from node 2 to node 3. Node 3 connects back to "
                "node 0, which we have already visited. The walk 0-1-2-3-0 "
                "visits four distinct nodes and returns to its start, so it "
                "forms a cycle. ### Yes.",
            ),
            (
                "The nodes are numbered from 0 to 4, and the edges are: "
                "(0,1) (0,2) (1,3) (1,4). Is there a cycle in this graph?",
                "The graph has 5 nodes and 4 edges. Starting from node 0 we "
                "can reach node 1 and node 2; from node 1 we can reach node 3 "
                "and node 4. Every node is reached exactly once and no edge "
                "leads back to an already visited node, so the graph is a "
                "tree. A tree never contains a cycle. ### No.",
            ),
        ),
    ),
    "connect": TaskTemplate(
        header=(
            "Determine if there is a path between two nodes in the graph.\n"
            "Note that (i,j) means that node i and node j are connected with "
            "an undirected edge.\n"
            "Given a graph and a pair of nodes, you need to output Yes or No "
            "step by step, indicating whether the node i and node j are "
            "connected."
        ),
        lead_in="Below are several examples:",
        exemplars=(
            (
                "The nodes are numbered from 0 to 5, and the edges are: "
                "(0,1) (1,2) (3,4) (4,5). Is there a path between node 1 and "
                "node 4?",
                "Node 1 is in the connected block consisted of node 0, node 1, "
                "and node 2.\nNode 4 is in the connected block consisting of "
                "node 3, node 4, and node 5. Node 1 and node 4 are not in the "
                "same connected block, so the answer is no. ### No.",
            ),
            (
                "The nodes are numbered from 0 to 5, and the edges are: "
                "(0,1) (0,2) (1,5) (1,2) (1,3) (2,5). Is there a path between "
                "node 2 and node 3?",
                "Node 2 is connected to node 1, node 1 is connected to node 3. "
                "We can follow the path: [2->1->3], so the answer is yes. "
                "### Yes.",
            ),
        ),
    ),
    "bipartite": TaskTemplate(
        header=(
            "Determine whether or not a graph is bipartite.\n"
            "In a directed graph, (i->j) means that node i and node j are "
            "connected with an directed edge from node i to node j.\n"
            "Given a graph, you need to output 'Yes' or 'No' step by step, "
            "indicating whether the graph is bipartite."
        ),
        lead_in="Below are examples:",
        exemplars=(
            (
                "The nodes are numbered from 0 to 3, and the edges are: "
                "(0->2) (0->3) (1->2) (1->3). Is this graph bipartite?",
                "Ignoring edge directions, nodes 0 and 1 only connect to "
                "nodes 2 and 3. We can put node 0 and node 1 in one group and "
                "node 2 and node 3 in the other group; every edge joins a "
                "node from the first group with a node from the second group. "
                "No edge stays inside a single group, so the graph is "
                "bipartite. ### Yes.",
            ),
            (
                "The nodes are numbered from 0 to 2, and the edges are: "
                "(0->1) (1->2) (2->0). Is this graph bipartite?",
                "Ignoring edge directions, nodes 0, 1, and 2 form a triangle: "
                "0-1, 1-2, and 2-0. A triangle is a cycle of odd length 3, and "
                "a graph containing an odd cycle cannot be split into two "
                "groups without an edge inside one group. Therefore the graph "
                "is not bipartite. ### No.",
            ),
        ),
    ),
    "topology": TaskTemplate(
        header=(
            "Find one of the topology sorting paths of the given graph.\n"
            "In a directed graph, (i->j) means that node i and node j are "
            "connected with a directed edge from node i to node j.\n"
            "Given a graph, you need to output one of the topology sorting "
            "paths of the graph."
        ),
        lead_in="Below are several examples:",
        exemplars=(
            (
                "The nodes are numbered from 0 to 3, and the edges are: "
                "(0->1) (0->2) (1->3) (2->3). Give one topology sorting path "
                "of this graph.",
                "We look for nodes with no incoming edges first. Node 0 has "
                "no incoming edge, so it comes first. Removing node 0 leaves "
                "node 1 and node 2 with no incoming edges; we take node 1 and "
                "then node 2. Node 3 depends on node 1 and node 2, so it "
                "comes last. One valid topology sorting path is [0, 1, 2, 3]. "
                "### [0, 1, 2, 3].",
            ),
            (
                "The nodes are numbered from 0 to 4, and the edges are: "
                "(1->0) (1->2) (2->0) (3->2) (3->4) (4->0). Give one topology "
                "sorting path of this graph.",
                "Node 1 and node 3 have no incoming edges. We pick node 1 "
                "first, then node 3. With those removed, node 2 has no "
                "remaining incoming edges, so it comes next, followed by "
                "node 4. Node 0 receives edges from node 1, node 2, and "
                "node 4, so it must come last. One valid topology sorting "
                "path is [1, 3, 2, 4, 0]. ### [1, 3, 2, 4, 0].",
            ),
        ),
    ),
    "shortest": TaskTemplate(
        header=(
            "Find the shortest path between two nodes in an undirected graph.\n"
            "In an undirected graph, (i,j,k) means that node i and node j are "
            "connected with an undirected edge with weight k.\n"
            "Given a graph and a pair of nodes, you need to output the "
            "shortest path between the two nodes."
        ),
        lead_in="Below are several examples:",
        exemplars=(
            (
                "In an undirected graph, the nodes are numbered from 0 to 6, "
                "and the edges are: (0,1,1) (1,2,2) (0,2,4) (0,4,2) (2,6,2) "
                "(4,6,4) (4,3,5) (6,5,3) (3,5,4). Give the weight of the "
                "shortest path from node 0 to node 5.",
                "All the paths from node 0 to node 5 are:\n"
                "0,2,6,5 with a total weight of <<4 + 2 + 3 = 9>>,\n"
                "0,1,2,6,5 with a total weight of <<1 + 2 + 2 + 3 = 8>>,\n"
                "0,4,6,5 with a total weight of <<2 + 4 + 3 = 9>>,\n"
                "0,4,3,5 with a total weight of <<2 + 5 + 4 = 11>>.\n"
                "The weight of path 0,1,2,6,5 is the smallest, so the shortest "
                "path from node 0 to node 5 is [0,1,2,6,5] with a total weight "
                "of 8. ### 8.",
            ),
            (
                "In an undirected graph, the nodes are numbered from 0 to 4, "
                "and the edges are: (0,3,2) (0,4,1) (0,2,1) (4,1,2) (2,1,1) "
                "(3,2,4) (2,4,1) (3,4,2). Give the weight of the shortest path "
                "from node 3 to node 1.",
                "All the paths from node 3 to node 1 are:\n"
                "3,2,1 with a total weight of <<4 + 1 = 5>>,\n"
                "3,2,4,1 with a total weight of <<4 + 1 + 2 = 7>>,\n"
                "3,4,1 with a total weight of <<2 + 2 = 4>>,\n"
                "3,4,2,1 with a total weight of <<2 + 1 + 1 = 4>>,\n"
                "3,0,4,1 with a total weight of <<2 + 1 + 2 = 5>>,\n"
                "3,0,2,1 with a total weight of <<2 + 1 + 1 = 4>>,\n"
                "3,4,2,4,1 with a total weight of <<2 + 1 + 1 + 2 = 6>>.\n"
                "The weight of path 3,4,1 is the smallest, so the shortest "
                "path from node 3 to node 1 is [3,4,1] with a total weight of "
                "4. ### 4.",
            ),
        ),
    ),
    "triangle": TaskTemplate(
        header=(
            "Find the maximum sum of the weights of three interconnected "
            "nodes.\n"
            "In an undirected graph, [i, k] means that node i has the weight "
            "k. (i,j) means that node i and node j are connected with an "
            "undirected edge.\n"
            "Given a graph, you need to output the maximum sum of the weights "
            "of three interconnected nodes."
        ),
        lead_in="Below are several examples:",
        exemplars=(
            (
                "The nodes are numbered from 0 to 4, weights of nodes are: "
                "[0, 2] [1, 9] [2, 6] [3, 10] [4, 4], and the edges are: "
                "(0, 1) (0, 3) (1, 3) (2, 4) (3, 4). What is the maximum sum "
                "of the weights of three interconnected nodes?",
                "The nodes and their weights are as follows: Node 0 with "
                "weight 2, Node 1 with weight 9, Node 2 with weight 6, Node 3 "
                "with weight 10, and Node 4 with weight 4.\n"
                "Upon examining the connections between these nodes, it "
                "becomes evident that only Nodes 0, 1, and 3 form a fully "
                "interconnected set, with each node directly connected to the "
                "other two. The sum of their weights is <<2 (Node 0) + 9 "
                "(Node 1) + 10 (Node 3) = 21>>.\n"
                "Therefore, the maximum sum of the weights of three "
                "interconnected nodes in this graph is 21. ### 21.",
            ),
            (
                "The nodes are numbered from 0 to 4, weights of nodes are: "
                "[0, 9] [1, 3] [2, 5] [3, 9] [4, 4], and the edges are: "
                "(0, 4) (0, 1) (1, 4) (2, 3). What is the maximum sum of the "
                "weights of three interconnected nodes?",
                "The graph comprises nodes 0 to 4, each with respective "
                "weights of 9, 3, 5, 9, and 4.\n"
                "Analyzing the graph's edges reveals that Nodes 0, 1, and 4 "
                "are the only trio of connected nodes, linked through the "
                "edges (0, 4), (0, 1), and (1, 4).\n"
                "By adding their weights: <<9 (Node 0) + 3 (Node 1) + 4 "
                "(Node 4) = 16>>. There are no other groups of three "
                "interconnected nodes in this graph.\n"
                "Therefore, the maximum sum of the weights of three connected "
                "nodes in this graph is determined to be 16. ### 16.",
            ),
        ),
    ),
    "flow": TaskTemplate(
        header=(
            "Find the maximum flow between two nodes in a directed graph.\n"
            "In a directed graph, (i->j,k) means that node i and node j are "
            "connected with an directed edge from node i to node j with "
            "weight k.\n"
            "Given a graph and a pair of nodes, you need to output the "
            "maximum flow between the two nodes."
        ),
        lead_in="Below are examples:",
        exemplars=(
            (
                "The nodes are numbered from 0 to 8, and the edges are: "
                "(0->2,3) (0->1,9) (0->5,4) (0->3,1) (1->2,7) (1->3,4) "
                "(1->5,7) (1->4,5) (2->3,2) (2->5,3) (2->8,2) (2->7,6) "
                "(3->5,8) (3->8,4) (3->4,9) (4->7,4) (4->5,6) (4->6,1) "
                "(5->6,2) (6->7,6). What is the maximum flow from node 0 to "
                "node 2?",
                "Initially, we can direct a flow of 3 units straight from "
                "node 0 to node 2 through the edge (0->2).\n"
                "Further examination reveals that an additional flow can be "
                "routed through node 1: the edge (0->1) can carry up to 9 "
                "units, and from node 1 to node 2, we can direct 7 units, as "
                "limited by the edge (1->2).\n"
                "Summing these flows, we find that a direct flow of 3 units "
                "and an indirect flow of 7 units via node 1 give us a total "
                "maximum flow of 10 units from node 0 to node 2.\n"
                "This calculation takes into account the various paths and "
                "their capacities, ensuring that the flow through any edge "
                "does not exceed its capacity.\n"
                "Hence, in this graph, the maximum flow from node 0 to node 2 "
                "is 10 units. ### 10.",
            ),
            (
                "The nodes are numbered from 0 to 7, and the edges are: "
                "(0->3,1) (0->6,5) (0->1,8) (0->5,4) (1->7,1) (1->6,2) "
                "(1->2,7) (2->4,5) (2->5,3) (2->3,7) (2->7,4) (3->6,7) "
                "(3->5,3) (3->7,7) (4->7,7) (5->7,7) (5->6,1) (6->7,2). What "
                "is the maximum flow from node 2 to node 6?",
                "The graph contains edges like (2->3,7) and (3->6,7), which "
                "are crucial for determining the flow.\n"
                "Firstly, there is no direct path from node 2 to node 6, so "
                "we explore indirect routes.\n"
                "One such path is through node 3, where node 2 can send a "
                "maximum of 7 units to node 3, which in turn can forward up "
                "to 7 units to node 6.\n"
                "Another route is via node 5; node 2 can send 3 units to "
                "node 5, but due to the limited capacity of 1 unit on the "
                "edge from node 5 to node 6, only 1 unit can reach node 6 "
                "through this path.\n"
                "There's also a path from node 2 to node 7 with a capacity of "
                "4 units, but it doesn't lead to node 6.\n"
                "Thus, by summing the feasible flows, we find that the "
                "maximum flow from node 2 to node 6 is 8 units. ### 8.",
            ),
        ),
    ),
    "hamilton": TaskTemplate(
        header=(
            "Determine whether or not there is a Hamiltonian path in an "
            "undirected graph.\n"
            "In an undirected graph, (i,j) means that node i and node j are "
            "connected with an undirected edge.\n"
            "Given a graph, you need to output 'Yes' or 'No', indicating "
            "whether there is a Hamiltonian path in the graph."
        ),
        lead_in="Below are several examples:",
        exemplars=(
            (
                "The nodes are numbered from 0 to 5, and the edges are: "
                "(0, 3) (0, 2) (0, 1) (0, 5) (1, 4) (1, 3) (1, 2) (3, 5) "
                "(4, 5). Is there a Hamiltonian path in this graph?",
                "To determine if a Hamiltonian path exists in an undirected "
                "graph, we need to check if there's a path that visits each "
                "node exactly once.\n"
                "Starting at Node 0, we can go to Node 1 (which connects to "
                "Nodes 2, 3, 4).\n"
                "From Node 1, moving to Node 4 seems a strategic choice "
                "because Node 4 only connects back to Node 1 and to Node 5. "
                "After reaching Node 4, we must go to Node 5.\n"
                "From Node 5, we can go to Node 3, as Node 3 connects to "
                "Nodes 0 and 1 (which we've visited) and to Node 5.\n"
                "Finally, from Node 3, we can go to Node 2.\n"
                "So, one possible Hamiltonian path is: [0,1,4,5,3,2].\n"
                "Therefore, there is a Hamiltonian path in this graph. "
                "### Yes, [0,1,4,5,3,2].",
            ),
            (
                "The nodes are numbered from 0 to 5, and the edges are: "
                "(0,2) (0,1) (4,5) (4,3) (4,2) (5,3) (1,4) (2,5). Is there a "
                "Hamiltonian path in this graph?",
                "To determine if a Hamiltonian path exists in an undirected "
                "graph, we need to check if there's a path that visits each "
                "node exactly once.\n"
                "We can start at node 0. As node 0 is connected with ndoe 2, "
                "and node 2 is not visited, we can then visit node 2.\n"
                "As node 2 is connected with ndoe 5, and node 5 is not "
                "visited, we can then visit node 5.\n"
                "As node 5 is connected with ndoe 3, and node 3 is not "
                "visited, we can then visit node 3.\n"
                "As node 3 is connected with ndoe 4, and node 4 is not "
                "visited, we can then visit node 4.\n"
                "As node 4 is connected with ndoe 1, and node 1 is not "
                "visited, we can then visit node 1.\n"
                "So, one possible Hamiltonian path is: [0,2,5,3,4,1].\n"
                "Therefore, there is a Hamiltonian path in this graph. "
                "### Yes, [0,2,5,3,4,1].",
            ),
        ),
    ),
    "subgraph": TaskTemplate(
        header=(
            "Determine if a smaller graph is present as an exact match within "
            "a larger graph.\n"
            "In a directed graph, (i->j) means that node i and node j are "
            "connected with a directed edge from node i to node j.\n"
            "Given a graph G and a subgraph G', you need to output Yes or No, "
            "indicating whether subgraph G' is present within the directed "
            "graph G."
        ),
        lead_in="Below are examples:",
        exemplars=(
            (
                "The nodes of graph G are numbered from 0 to 7, and the edges "
                "are: (0->4) (0->5) (0->2) (0->3) (0->1) (0->7) (1->6) (1->5) "
                "(1->4) (1->7) (1->3) (2->7) (2->5) (2->6) (2->3) (3->4) "
                "(3->6) (3->7) (3->5) (4->7) (4->6) (4->5) (5->6) (5->7) "
                "(6->7). The nodes of subgraph G' are numbered from a to e, "
                "and the edges are: (a->b) (b->c) (b->e) (b->d) (c->e) "
                "(c->d). Is subgraph G' present within graph G as a direct "
                "substructure?",
                "To determine if subgraph G' is present within graph G, let's "
                "briefly analyze both graphs:\n"
                "Subgraph G' has the following edges: (a->b), (b->c), (b->e), "
                "(b->d), (c->e), (c->d). The key node here is 'b', which has "
                "outgoing edges to three different nodes: 'c', 'e', and 'd'. "
                "Additionally, 'c' has outgoing edges to both 'e' and 'd'.\n"
                "Now let's find a node in graph G with similar outgoing "
                "edges:\n"
                "Node 0 has outgoing edges to many nodes but is not a match "
                "since no single node has outgoing edges to three other nodes "
                "that also interconnect as required.\n"
                "Node 1 has outgoing edges to '6', '5', '4', and '7' but none "
                "of these nodes have the required interconnections to match "
                "'c', 'e', and 'd'.\n"
                "Node 2 has outgoing edges to '7', '5', '6', and '3', but "
                "again, no suitable interconnections.\n"
                "Node 3 has outgoing edges to '4', '6', '7', and '5'. This "
                "resembles 'b' in G', but there must be interconnections "
                "between the nodes it points to, matching (c->e), (c->d).\n"
                "Node 4 has outgoing edges to '7', '6', and '5'. If node 4 is "
                "'b', then nodes '7', '6', and '5' could be 'c', 'e', and "
                "'d'. Since '7', '6', and '5' are all interconnected, node 4 "
                "and its connected nodes match the structure of G'.\n"
                "Thus, the sequence (4->7), (7->6), (7->5), (6->7), (5->7) in "
                "G corresponds to the sequence (b->c), (c->e), (c->d), "
                "(e->d), (d->e) in G', which means subgraph G' is present as "
                "a direct substructure in graph G. ### Yes.",
            ),
            (
                "The nodes of graph G are numbered from 0 to 9, and the edges "
                "are: (0->6) (0->2) (1->2) (1->7) (1->3) (3->4) (3->8) (3->9) "
                "(4->9). The nodes of subgraph G' are numbered from a to d, "
                "and the edges are: (a->d) (a->c) (a->b) (b->d) (b->c) "
                "(c->d). Is subgraph G' present within graph G as a direct "
                "substructure?",
                "To find if subgraph G' is present in graph G, we look for a "
                "node with out-degree of 3 (like 'a' in G'), and among those "
                "outgoing connections, we need two nodes with an out-degree "
                "of at least 2 (like 'b' and 'c' in G'), which are also "
                "connected to each other and to the third node (like 'd' in "
                "G').\n"
                "Examining graph G:\n"
                "Node 0 has out-degree 2, not enough to match 'a'.\n"
                "Node 1 has out-degree 3, so it could be 'a', with nodes 2, 7, "
                "and 3 potentially being 'b', 'c', and 'd'.\n"
                "Node 3 has out-degree 3, so it could be 'a', with nodes 4, 8, "
                "and 9 potentially being 'b', 'c', and 'd'.\n"
                "Now we must check the connections between the potential 'b', "
                "'c', and 'd' nodes:\n"
                "For node 1 as 'a', nodes 2, 7, and 3 do not have the required "
                "mutual connections.\n"
                "For node 3 as 'a', nodes 4, 8, and 9 do not have the required "
                "mutual connections either, since there's no edge from 4 to 8 "
                "or 9 to 8.\n"
                "None of the nodes satisfy the conditions of subgraph G' "
                "fully. ### No.",
            ),
        ),
    ),
}

ZERO_SHOT_SUFFIX = "Let's think step by step"


def build_cot_prompt(task: str, text: str, shots: int = 2,
                     templates: dict[str, TaskTemplate] | None = None) -> str:
    """Chain-of-thought prompt: task header, optional exemplars, the problem.

    shots=0 yields the zero-shot form ending with the step-by-step nudge;
    shots=k prepends the first k exemplars. Override `templates` to swap in
    custom headers or exemplar banks (e.g. 4/5-shot variants).
    """
    get_task(task)
    template = (templates or TEMPLATES)[task]
    if shots < 0:
        raise InvalidSpecError(f"shots must be >= 0, got {shots}")
    if shots == 0:
        return f"{template.header}\n\nQ: {text}\nA: {ZERO_SHOT_SUFFIX}"
    if shots > len(template.exemplars):
        raise InvalidSpecError(
            f"{task} template has {len(template.exemplars)} exemplars, "
            f"requested {shots}"
        )
    parts = [f"{template.header}\n{template.lead_in}"]
    for q, a in template.exemplars[:shots]:
        parts.append(f"Q: {q}\nA: {a}")
    parts.append(f"Q: {text}\nA:")
    return "\n\n".join(parts)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

_QUESTION_PATTERNS: list[tuple[str, re.Pattern]] = [
    ("cycle", re.compile(r"Is there a cycle in this graph\?")),
    ("connect", re.compile(r"Is there a path between node (\d+) and node (\d+)\?")),
    ("bipartite", re.compile(r"Is this graph bipartite\?")),
    ("topology", re.compile(r"Give one topology sorting path of this graph\.")),
    ("shortest", re.compile(
        r"Give the weight of the shortest path from node (\d+) to node (\d+)\.")),
    ("triangle", re.compile(
        r"What is the maximum sum of the weights of three interconnected nodes\?")),
    ("flow", re.compile(r"What is the maximum flow from node (\d+) to node (\d+)\?")),
    ("hamilton", re.compile(r"Is there a Hamiltonian path in this graph\?")),
    ("subgraph", re.compile(
        r"Is subgraph G' present within graph G as a direct substructure\?")),
]

_NUM_EDGE = re.compile(r"\(\s*(\d+)\s*(->|,)\s*(\d+)\s*(?:,\s*(\d+)\s*)?\)")
_LETTER_EDGE = re.compile(r"\(\s*([a-z])\s*->\s*([a-z])\s*\)")
_NODE_WEIGHT = re.compile(r"\[\s*(\d+)\s*,\s*(\d+)\s*\]")
_NUM_NODES = re.compile(r"numbered from 0 to (\d+)")
_NO_EDGES = re.compile(r"there are no edges in the graph")


def _scan_span(text: str, start: int, end: int, token: re.Pattern) -> list[re.Match]:
    """Collect token matches in text[start:end]; anything else is an error."""
    matches = []
    pos = start
    while pos < end:
        if text[pos].isspace():
            pos += 1
            continue
        m = token.match(text, pos)
        if m is None or m.end() > end:
            raise ParseError(f"malformed tuple near {text[pos:pos + 16]!r}", offset=pos)
        matches.append(m)
        pos = m.end()
    return matches


def _parse_numeric_edges(text: str, start: int, end: int, task: str,
                         num_nodes: int, directed: bool, weighted: bool) -> list[tuple]:
    edges: list[tuple] = []
    seen: dict[tuple[int, int], tuple] = {}
    for m in _scan_span(text, start, end, _NUM_EDGE):
        u, sep, v = int(m.group(1)), m.group(2), int(m.group(3))
        w = m.group(4)
        if directed and sep != "->":
            raise ParseError(f"{task} edges must use (i->j) form", offset=m.start())
        if not directed and sep != ",":
            raise ParseError(f"{task} edges must use (i,j) form", offset=m.start())
        if weighted and w is None:
            raise ParseError(f"{task} edges need a weight", offset=m.start())
        if not weighted and w is not None:
            raise ParseError(f"{task} edges are unweighted", offset=m.start())
        if u >= num_nodes or v >= num_nodes:
            raise ParseError(
                f"edge ({u},{v}) references a node outside [0,{num_nodes - 1}]",
                offset=m.start(),
            )
        if u == v:
            raise ParseError(f"self loop at node {u}", offset=m.start())
        key = (u, v) if directed else (min(u, v), max(u, v))
        edge = key + ((int(w),) if w is not None else ())
        if key in seen:
            if seen[key] != edge:
                raise ParseError(
                    f"edge ({u},{v}) repeated with a different weight", offset=m.start()
                )
            continue
        seen[key] = edge
        edges.append(edge)
    return edges


def _find_num_nodes(text: str, search_from: int = 0) -> tuple[int, re.Match]:
    m = _NUM_NODES.search(text, search_from)
    if m is None:
        raise ParseError("missing node count declaration", offset=search_from)
    return int(m.group(1)) + 1, m


def _edge_span(text: str, from_pos: int, until: int) -> tuple[int, int] | None:
    """Span of the edge list after from_pos, ending at the '.' before `until`.

    Returns None when the no-edges form is used instead.
    """
    no_edges = _NO_EDGES.search(text, from_pos, until)
    if no_edges:
        return None
    marker = "the edges are:"
    idx = text.find(marker, from_pos, until)
    if idx < 0:
        raise ParseError("missing edge list", offset=from_pos)
    start = idx + len(marker)
    stop = text.rfind(".", start, until)
    if stop < 0:
        raise ParseError("edge list is not terminated", offset=start)
    return start, stop


def parse_problem(text: str) -> Problem:
    """Invert render_problem; the result carries no answer or tier."""
    task = None
    qmatch = None
    for name, pattern in _QUESTION_PATTERNS:
        m = pattern.search(text)
        if m:
            task, qmatch = name, m
            break
    if task is None:
        raise ParseError("unknown task phrasing", offset=0)
    info = get_task(task)

    if task == "subgraph":
        host_n, host_decl = _find_num_nodes(text)
        pat_marker = "The nodes of subgraph G'"
        pat_idx = text.find(pat_marker)
        if pat_idx < 0:
            raise ParseError("missing subgraph declaration", offset=0)
        span = _edge_span(text, host_decl.end(), pat_idx)
        host_edges: list[tuple] = []
        if span:
            host_edges = _parse_numeric_edges(
                text, span[0], span[1], task, host_n, directed=True, weighted=False)
        lm = re.search(r"numbered from a to ([a-z])", text[pat_idx:])
        if lm is None:
            raise ParseError("missing pattern node range", offset=pat_idx)
        pat_n = ord(lm.group(1)) - ord("a") + 1
        pspan = _edge_span(text, pat_idx + lm.end(), qmatch.start())
        pat_edges: list[tuple] = []
        if pspan:
            seen: set[tuple[int, int]] = set()
            for m in _scan_span(text, pspan[0], pspan[1], _LETTER_EDGE):
                u = ord(m.group(1)) - ord("a")
                v = ord(m.group(2)) - ord("a")
                if u >= pat_n or v >= pat_n:
                    raise ParseError(
                        f"pattern edge ({m.group(1)}->{m.group(2)}) outside "
                        f"declared range", offset=m.start())
                if u == v:
                    raise ParseError(f"self loop at pattern node {m.group(1)}",
                                     offset=m.start())
                if (u, v) not in seen:
                    seen.add((u, v))
                    pat_edges.append((u, v))
        host = Graph(host_n, True, host_edges)
        pattern_graph = Graph(pat_n, True, pat_edges)
        validate_graph(host)
        validate_graph(pattern_graph)
        if pattern_graph.num_nodes > host.num_nodes:
            raise ParseError("pattern larger than host graph", offset=pat_idx)
        return Problem(id="", task=task, graph=host,
                       query={"pattern": pattern_graph}, text=text)

    num_nodes, decl = _find_num_nodes(text)
    node_weights = None
    if task == "triangle":
        wm = re.search(r"weights of nodes are:(.*?), and ", text, re.DOTALL)
        if wm is None:
            raise ParseError("missing node weight list", offset=decl.end())
        weights_by_node: dict[int, int] = {}
        for m in _scan_span(text, wm.start(1), wm.end(1), _NODE_WEIGHT):
            node, w = int(m.group(1)), int(m.group(2))
            if node >= num_nodes:
                raise ParseError(f"weight for unknown node {node}", offset=m.start())
            if node in weights_by_node:
                raise ParseError(f"duplicate weight for node {node}", offset=m.start())
            weights_by_node[node] = w
        if sorted(weights_by_node) != list(range(num_nodes)):
            raise ParseError("node weight list does not cover every node",
                             offset=wm.start(1))
        node_weights = [weights_by_node[i] for i in range(num_nodes)]

    span = _edge_span(text, decl.end(), qmatch.start())
    edges: list[tuple] = []
    if span:
        edges = _parse_numeric_edges(
            text, span[0], span[1], task, num_nodes,
            directed=info.directed, weighted=info.edge_weighted)
    g = Graph(num_nodes, info.directed, edges, node_weights)
    validate_graph(g)

    query: dict = {}
    if task in ("connect", "shortest"):
        u, v = int(qmatch.group(1)), int(qmatch.group(2))
        if u >= num_nodes or v >= num_nodes:
            raise ParseError("query references a node outside the graph",
                             offset=qmatch.start())
        query = {"u": u, "v": v}
    elif task == "flow":
        s, t = int(qmatch.group(1)), int(qmatch.group(2))
        if s >= num_nodes or t >= num_nodes:
            raise ParseError("query references a node outside the graph",
                             offset=qmatch.start())
        query = {"s": s, "t": t}
    return Problem(id="", task=task, graph=g, query=query, text=text)
