"""Record schemas and corpus assembly.

All files are JSONL with a leading "schema" field per record:

  problems-v1     graph problems with ground truth
  paths-v1        sampled reasoning paths, keyed by problem id
  sft-v1          instruction/output training rows
  dpo-v1          instruction/chosen/rejected preference rows
  predictions-v1  model outputs keyed by problem id

Assembly re-checks everything it writes: an SFT row whose output grades
incorrect, or a DPO row whose sides grade the same way, is a RecordError,
not a warning.
"""

from __future__ import annotations

import json
from typing import Any, Iterable

from .errors import RecordError, SchemaError
from .graphs import Graph, canonical_key, validate_graph
from .selector import build_dpo_pair
from .solvers import Answer
from .textgen import Problem
from .grader import judge

PROBLEMS_SCHEMA = "problems-v1"
PATHS_SCHEMA = "paths-v1"
SFT_SCHEMA = "sft-v1"
DPO_SCHEMA = "dpo-v1"
PREDICTIONS_SCHEMA = "predictions-v1"


def _plain(value: Any) -> Any:
    """Tuples to lists, recursively, so records survive a JSON round trip."""
    if isinstance(value, tuple):
        return [_plain(v) for v in value]
    if isinstance(value, list):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    return value


def graph_to_dict(g: Graph) -> dict:
    out: dict[str, Any] = {
        "num_nodes": g.num_nodes,
        "directed": g.directed,
        "edges": [list(e) for e in g.edges],
    }
    if g.node_weights is not None:
        out["node_weights"] = list(g.node_weights)
    return out


def graph_from_dict(d: dict) -> Graph:
    g = Graph(d["num_nodes"], d["directed"],
              [tuple(e) for e in d["edges"]],
              node_weights=list(d["node_weights"]) if d.get("node_weights")
              is not None else None)
    validate_graph(g)
    return g


def _query_to_dict(task: str, query: dict) -> dict:
    if task == "subgraph":
        return {"pattern": graph_to_dict(query["pattern"])}
    return dict(query)


def _query_from_dict(task: str, d: dict) -> dict:
    if task == "subgraph":
        return {"pattern": graph_from_dict(d["pattern"])}
    return {k: v for k, v in d.items()}


def _witness_to_json(task: str, witness: Any) -> Any:
    if witness is None:
        return None
    if task == "subgraph" and isinstance(witness, dict):
        return [[int(k), int(v)] for k, v in sorted(witness.items())]
    return _plain(witness)


def _answer_to_dict(task: str, a: Answer) -> dict:
    return {"kind": a.kind, "value": _plain(a.value),
            "witness": _witness_to_json(task, a.witness)}


def _answer_from_dict(d: dict) -> Answer:
    return Answer(d["kind"], d["value"], witness=d.get("witness"))


def problem_to_record(p: Problem) -> dict:
    if p.answer is None:
        raise RecordError(f"{p.id}: problem has no ground truth answer")
    return {
        "schema": PROBLEMS_SCHEMA,
        "id": p.id,
        "task": p.task,
        "graph": graph_to_dict(p.graph),
        "query": _query_to_dict(p.task, p.query),
        "answer": _answer_to_dict(p.task, p.answer),
        "tier": dict(p.tier) if p.tier else None,
        "seed": p.seed,
        "text": p.text,
    }


def record_to_problem(rec: dict) -> Problem:
    task = rec["task"]
    witness = rec["answer"].get("witness")
    if task == "subgraph" and isinstance(witness, list):
        rec = dict(rec)
        rec["answer"] = dict(rec["answer"])
        rec["answer"]["witness"] = {int(k): int(v) for k, v in witness}
    return Problem(
        id=rec["id"],
        task=task,
        graph=graph_from_dict(rec["graph"]),
        query=_query_from_dict(task, rec["query"]),
        answer=_answer_from_dict(rec["answer"]),
        tier=rec.get("tier"),
        seed=rec.get("seed"),
        text=rec["text"],
    )


def problem_signature(p: Problem) -> tuple:
    """Structural identity: task, graph, and query (patterns canonicalized)."""
    query = p.query
    if p.task == "subgraph":
        query = {"pattern": canonical_key(query["pattern"])}
    return (p.task, canonical_key(p.graph),
            tuple(sorted(query.items())))


# ---------------------------------------------------------------------------
# JSONL files
# ---------------------------------------------------------------------------

def write_jsonl(path: str, records: Iterable[dict]) -> int:
    count = 0
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
            count += 1
    return count


def read_jsonl(path: str, schema: str | None = None) -> list[dict]:
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except ValueError as exc:
                raise SchemaError(f"{path}: {exc}", line=lineno) from exc
            if not isinstance(rec, dict):
                raise SchemaError(f"{path}: record is not an object", line=lineno)
            if schema is not None and rec.get("schema") != schema:
                raise SchemaError(
                    f"{path}: expected schema {schema!r}, got "
                    f"{rec.get('schema')!r}", line=lineno)
            out.append(rec)
    return out


def write_problems(path: str, problems: Iterable[Problem]) -> int:
    return write_jsonl(path, (problem_to_record(p) for p in problems))


def read_problems(path: str) -> list[Problem]:
    return [record_to_problem(rec) for rec in read_jsonl(path, PROBLEMS_SCHEMA)]


# ---------------------------------------------------------------------------
# Corpus assembly
# ---------------------------------------------------------------------------

def assemble_sft(problems: list[Problem],
                 selected: dict[str, list[str]]) -> list[dict]:
    """Build SFT rows from selected paths, re-grading every output."""
    by_id = {p.id: p for p in problems}
    rows = []
    for pid in selected:
        if pid not in by_id:
            raise RecordError(f"{pid}: selected paths reference no known problem")
    for pid in sorted(selected, key=lambda x: (by_id[x].task, x)):
        problem = by_id[pid]
        for k, text in enumerate(selected[pid]):
            verdict = judge(problem, text)
            if not verdict.correct:
                raise RecordError(
                    f"{pid}: selected path {k} grades incorrect "
                    f"({verdict.reason})")
            rows.append({
                "schema": SFT_SCHEMA,
                "id": f"{pid}#{k}",
                "task": problem.task,
                "instruction": problem.text,
                "output": text,
                "meta": {"source_id": pid, "path_index": k},
            })
    return rows


def assemble_dpo(problems: list[Problem],
                 paths: dict[str, list[str]], *,
                 beta: float | None = None) -> list[dict]:
    """Build DPO rows: grade each path, pair best correct with the hardest
    wrong one, and skip problems where either side is empty. beta is carried
    in meta for the training consumer."""
    by_id = {p.id: p for p in problems}
    rows = []
    for pid in paths:
        if pid not in by_id:
            raise RecordError(f"{pid}: paths reference no known problem")
    for pid in sorted(paths, key=lambda x: (by_id[x].task, x)):
        problem = by_id[pid]
        texts = paths[pid]
        flags = [judge(problem, t).correct for t in texts]
        pair = build_dpo_pair(texts, flags)
        if pair is None:
            continue
        chosen, rejected = pair
        if not flags[chosen] or flags[rejected]:
            raise RecordError(f"{pid}: preference pair sides grade the same way")
        meta = {"num_correct": sum(flags),
                "num_incorrect": len(flags) - sum(flags)}
        if beta is not None:
            meta["beta"] = beta
        rows.append({
            "schema": DPO_SCHEMA,
            "id": pid,
            "task": problem.task,
            "instruction": problem.text,
            "chosen": texts[chosen],
            "rejected": texts[rejected],
            "meta": meta,
        })
    return rows


# ---------------------------------------------------------------------------
# Stats
# ---------------------------------------------------------------------------

def compute_stats(problems: list[Problem],
                  sft_rows: list[dict] | None = None) -> dict:
    from .tasks import TASK_ORDER
    per: dict[str, dict] = {
        t: {"problems": 0, "nodes": 0, "edges": 0, "paths": 0}
        for t in TASK_ORDER}
    for p in problems:
        if p.task not in per:
            raise RecordError(f"{p.id}: unknown task {p.task!r}")
        row = per[p.task]
        row["problems"] += 1
        row["nodes"] += p.graph.num_nodes
        row["edges"] += len(p.graph.edges)
    for rec in sft_rows or []:
        task = rec.get("task")
        if task in per:
            per[task]["paths"] += 1
    tasks = {}
    for t, row in per.items():
        n = row["problems"]
        tasks[t] = {
            "problems": n,
            "avg_nodes": row["nodes"] / n if n else 0.0,
            "avg_edges": row["edges"] / n if n else 0.0,
            "paths": row["paths"],
        }
    return {
        "tasks": tasks,
        "total_problems": sum(r["problems"] for r in per.values()),
        "total_paths": sum(r["paths"] for r in per.values()),
    }


def format_stats(stats: dict) -> str:
    header = f"{'task':<10}{'problems':>10}{'avg nodes':>12}{'avg edges':>12}{'paths':>8}"
    lines = [header, "-" * len(header)]
    for t, row in stats["tasks"].items():
        lines.append(f"{t:<10}{row['problems']:>10}{row['avg_nodes']:>12.1f}"
                     f"{row['avg_edges']:>12.1f}{row['paths']:>8}")
    lines.append("-" * len(header))
    lines.append(f"{'sum':<10}{stats['total_problems']:>10}{'':>12}{'':>12}"
                 f"{stats['total_paths']:>8}")
    return "\n".join(lines)
