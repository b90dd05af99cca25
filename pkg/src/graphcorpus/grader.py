"""Answer extraction, grading, and the advisory step audit.

Extraction reads the text after the LAST "###" marker, falling back to the
last "The answer is" clause. Grading compares against the stored ground
truth; order-free answers (topological sorts) are re-validated against the
graph rather than compared to the solver's own output. The step audit flags
claimed edges or nodes that do not exist in the graph; it never changes a
verdict.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .graphs import Graph
from .solvers import Answer
from .tasks import get_task
from .textgen import Problem


@dataclass
class ExtractionFailure:
    reason: str


@dataclass
class Violation:
    sentence: int
    kind: str        # missing-edge | unknown-node | wrong-weight
    detail: str


@dataclass
class Verdict:
    correct: bool
    extracted: Answer | ExtractionFailure
    reason: str | None = None
    violations: list[Violation] = field(default_factory=list)


_YES_NO = re.compile(r"\b(yes|no)\b", re.IGNORECASE)
_INT = re.compile(r"-?\d+")
_BRACKET_SEQ = re.compile(r"\[\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*\]")
_BARE_SEQ = re.compile(r"(-?\d+(?:\s*,\s*-?\d+)+)")
_ANSWER_IS = re.compile(r"the answer is", re.IGNORECASE)


def _tail(text: str) -> str | None:
    idx = text.rfind("###")
    if idx >= 0:
        return text[idx + 3:]
    last = None
    for m in _ANSWER_IS.finditer(text):
        last = m
    if last is not None:
        return text[last.end():]
    return None


def _parse_sequence(tail: str) -> list[int] | None:
    m = _BRACKET_SEQ.search(tail)
    if m is None:
        m = _BARE_SEQ.search(tail)
        if m is None:
            return None
    return [int(x) for x in m.group(1).split(",")]


def extract_answer(text: str, task: str) -> Answer | ExtractionFailure:
    """Pull the final answer for the task out of a reasoning text."""
    info = get_task(task)
    tail = _tail(text)
    if tail is None:
        return ExtractionFailure("no '###' marker or 'The answer is' clause")
    if info.answer_kind == "yes_no":
        m = _YES_NO.search(tail)
        if m is None:
            return ExtractionFailure("no Yes/No after the answer marker")
        value = m.group(1).lower() == "yes"
        witness = None
        if task == "hamilton" and value:
            seq = _parse_sequence(tail[m.end():])
            if seq is not None:
                witness = seq
        return Answer("yes_no", value, witness=witness)
    if info.answer_kind == "numeric":
        m = _INT.search(tail)
        if m is None:
            return ExtractionFailure("no integer after the answer marker")
        value = int(m.group(0))
        witness = None
        if task == "shortest":
            seq = _parse_sequence(tail)
            if seq is not None and len(seq) > 1:
                witness = seq
        return Answer("numeric", value, witness=witness)
    seq = _parse_sequence(tail)
    if seq is None:
        return ExtractionFailure("no node sequence after the answer marker")
    return Answer("sequence", seq)


# ---------------------------------------------------------------------------
# Witness validation helpers (shared by grading and the solver tests)
# ---------------------------------------------------------------------------

def is_valid_path(g: Graph, nodes: list[int]) -> bool:
    """True when consecutive nodes are joined by edges and ids are in range."""
    if not nodes:
        return False
    if any(not (0 <= x < g.num_nodes) for x in nodes):
        return False
    keys = g.edge_key_set()
    for a, b in zip(nodes, nodes[1:]):
        key = (a, b) if g.directed else (min(a, b), max(a, b))
        if key not in keys:
            return False
    return True


def is_hamilton_path(g: Graph, nodes: list[int]) -> bool:
    return sorted(nodes) == list(range(g.num_nodes)) and is_valid_path(g, nodes)


def is_topo_order(g: Graph, nodes: list[int]) -> bool:
    """True when nodes is a permutation respecting every directed edge."""
    if sorted(nodes) != list(range(g.num_nodes)):
        return False
    pos = {x: i for i, x in enumerate(nodes)}
    return all(pos[u] < pos[v] for u, v in g.edge_pairs())


def path_weight(g: Graph, nodes: list[int]) -> int:
    wm = g.weight_map()
    total = 0
    for a, b in zip(nodes, nodes[1:]):
        key = (a, b) if g.directed else (min(a, b), max(a, b))
        total += wm[key]
    return total


def is_valid_cycle(g: Graph, nodes: list[int]) -> bool:
    """At least three distinct nodes forming a closed loop."""
    if len(nodes) < 3 or len(set(nodes)) != len(nodes):
        return False
    return is_valid_path(g, list(nodes) + [nodes[0]])


def check_witness(problem: Problem, answer: Answer) -> bool:
    """Validate a solver witness against the graph (used by the test suite)."""
    g = problem.graph
    task = problem.task
    w = answer.witness
    if task == "cycle":
        return (not answer.value) or is_valid_cycle(g, list(w))
    if task == "connect":
        if not answer.value:
            return True
        u, v = problem.query["u"], problem.query["v"]
        return bool(w) and w[0] == u and w[-1] == v and (
            len(w) == 1 or is_valid_path(g, list(w)))
    if task == "bipartite":
        if answer.value:
            side0, side1 = w
            split = set(side0) | set(side1)
            if split != set(range(g.num_nodes)) or set(side0) & set(side1):
                return False
            return all(
                (u in set(side0)) != (v in set(side0)) for u, v in g.edge_pairs())
        return len(w) % 2 == 1 and is_valid_cycle(
            Graph(g.num_nodes, False,
                  sorted({(min(u, v), max(u, v)) for u, v in g.edge_pairs()})),
            list(w))
    if task == "topology":
        return answer.kind == "none_exists" or is_topo_order(g, list(answer.value))
    if task == "shortest":
        if answer.kind == "none_exists":
            return True
        u, v = problem.query["u"], problem.query["v"]
        return (bool(w) and w[0] == u and w[-1] == v
                and (len(w) == 1 or is_valid_path(g, list(w)))
                and path_weight(g, list(w)) == answer.value)
    if task == "triangle":
        if answer.kind == "none_exists":
            return True
        a, b, c = w
        nw = g.node_weights or []
        return (g.has_edge(a, b) and g.has_edge(a, c) and g.has_edge(b, c)
                and nw[a] + nw[b] + nw[c] == answer.value)
    if task == "flow":
        s, t = problem.query["s"], problem.query["t"]
        side = set(w)
        if s not in side or t in side:
            return False
        cut = sum(e[2] if len(e) == 3 else 1
                  for e in g.edges if e[0] in side and e[1] not in side)
        return cut == answer.value
    if task == "hamilton":
        return (not answer.value) or is_hamilton_path(g, list(w))
    # subgraph
    if not answer.value:
        return True
    pattern: Graph = problem.query["pattern"]
    mapping = dict(w)
    if sorted(mapping) != list(range(pattern.num_nodes)):
        return False
    if len(set(mapping.values())) != len(mapping):
        return False
    host_keys = g.edge_key_set()
    return all((mapping[a], mapping[b]) in host_keys for a, b in pattern.edge_pairs())


def grade(problem: Problem, extracted: Answer | ExtractionFailure, *,
          validate_witness: bool = True) -> Verdict:
    """Compare an extracted answer with the problem's ground truth."""
    if isinstance(extracted, ExtractionFailure):
        return Verdict(False, extracted, reason=f"extraction: {extracted.reason}")
    truth = problem.answer
    if truth is None:
        return Verdict(False, extracted, reason="problem has no ground truth")
    task = problem.task
    info = get_task(task)
    if info.answer_kind == "yes_no":
        if bool(extracted.value) != bool(truth.value):
            return Verdict(False, extracted, reason="wrong yes/no answer")
        if (task == "hamilton" and truth.value and validate_witness
                and extracted.witness is not None
                and not is_hamilton_path(problem.graph, list(extracted.witness))):
            return Verdict(False, extracted, reason="claimed path is not Hamiltonian")
        return Verdict(True, extracted)
    if info.answer_kind == "numeric":
        if truth.kind == "none_exists":
            return Verdict(False, extracted, reason="no answer exists")
        if extracted.value != truth.value:
            return Verdict(False, extracted, reason="wrong value")
        if (task == "shortest" and validate_witness
                and extracted.witness is not None):
            w = list(extracted.witness)
            u, v = problem.query["u"], problem.query["v"]
            ok = (w[0] == u and w[-1] == v and is_valid_path(problem.graph, w)
                  and path_weight(problem.graph, w) == truth.value)
            if not ok:
                return Verdict(False, extracted, reason="claimed path is not optimal")
        return Verdict(True, extracted)
    # sequence: any valid order counts, not just the solver's
    if truth.kind == "none_exists":
        return Verdict(False, extracted, reason="no valid order exists")
    if is_topo_order(problem.graph, list(extracted.value)):
        return Verdict(True, extracted)
    return Verdict(False, extracted, reason="sequence violates the graph order")


# ---------------------------------------------------------------------------
# Step audit
# ---------------------------------------------------------------------------

_SENTENCE = re.compile(r"[^.\n]+(?:\.|\n|$)")
_CLAIM_TUPLE = re.compile(r"\(\s*(\d+)\s*(->|,)\s*(\d+)\s*(?:,\s*(\d+)\s*)?\)")
_CLAIM_CHAIN = re.compile(r"\[\s*\d+(?:\s*->\s*\d+)+\s*\]")
_CLAIM_PROSE = re.compile(r"node (\d+) is connected to node (\d+)", re.IGNORECASE)
_CHAIN_NODE = re.compile(r"\d+")


def _linked(g: Graph, u: int, v: int, keys: set[tuple[int, int]]) -> bool:
    """Adjacency in either orientation; loose claims ignore direction."""
    return (u, v) in keys or (v, u) in keys


def audit_steps(problem: Problem, reasoning: str) -> list[Violation]:
    """Flag hallucinated edges and out-of-range nodes in a reasoning text.

    Tuple claims like (u,v) or (u->v,k) are checked for existence (and
    weight, when the graph is weighted and the claim carries one); arrow
    chains like [a->b->c] and prose claims like "node a is connected to
    node b" are checked as adjacency, ignoring direction. Advisory only.
    """
    g = problem.graph
    keys = g.edge_key_set()
    weights = g.weight_map()
    n = g.num_nodes
    out: list[Violation] = []
    for s_idx, sm in enumerate(_SENTENCE.finditer(reasoning)):
        sentence = sm.group(0)
        for m in _CLAIM_TUPLE.finditer(sentence):
            u, sep, v = int(m.group(1)), m.group(2), int(m.group(3))
            w = m.group(4)
            if u >= n or v >= n:
                out.append(Violation(s_idx, "unknown-node",
                                     f"claimed edge ({u},{v}) uses a node outside the graph"))
                continue
            if sep == "->" and g.directed:
                exists = (u, v) in keys
                key = (u, v)
            else:
                exists = _linked(g, u, v, keys)
                key = (u, v) if g.directed else (min(u, v), max(u, v))
            if not exists:
                out.append(Violation(s_idx, "missing-edge",
                                     f"claimed edge ({u},{v}) is not in the graph"))
            elif w is not None and g.weighted and key in weights \
                    and weights[key] != int(w):
                out.append(Violation(s_idx, "wrong-weight",
                                     f"edge ({u},{v}) has weight {weights[key]}, not {w}"))
        for m in _CLAIM_CHAIN.finditer(sentence):
            nodes = [int(x) for x in _CHAIN_NODE.findall(m.group(0))]
            for a, b in zip(nodes, nodes[1:]):
                if a >= n or b >= n:
                    out.append(Violation(s_idx, "unknown-node",
                                         f"chain step {a}->{b} uses a node outside the graph"))
                elif not _linked(g, a, b, keys):
                    out.append(Violation(s_idx, "missing-edge",
                                         f"chain step {a}->{b} is not an edge"))
        for m in _CLAIM_PROSE.finditer(sentence):
            u, v = int(m.group(1)), int(m.group(2))
            if u >= n or v >= n:
                out.append(Violation(s_idx, "unknown-node",
                                     f"claim about node {max(u, v)} outside the graph"))
            elif not _linked(g, u, v, keys):
                out.append(Violation(s_idx, "missing-edge",
                                     f"node {u} and node {v} are not adjacent"))
    return out


def judge(problem: Problem, text: str, *, audit: bool = False,
          validate_witness: bool = True) -> Verdict:
    """Extract, grade, and optionally audit one reasoning text."""
    extracted = extract_answer(text, problem.task)
    verdict = grade(problem, extracted, validate_witness=validate_witness)
    if audit:
        verdict.violations = audit_steps(problem, text)
    return verdict
