"""Command line entry points.

Stages are file to file: generate writes problems, annotate samples
reasoning paths, select distills them into SFT rows, dpo builds preference
pairs, evaluate grades predictions, stats and audit inspect what the other
stages produced. Flags override config-file values, which override defaults.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import fields

from .config import PipelineConfig, apply_overrides, load_config
from .corpus import (PATHS_SCHEMA, PREDICTIONS_SCHEMA, SFT_SCHEMA,
                     assemble_dpo, assemble_sft, compute_stats, format_stats,
                     read_jsonl, read_problems, write_jsonl, write_problems)
from .errors import GraphCorpusError, InvalidSpecError, RecordError
from .evaluate import evaluate, format_report, run_eval
from .generate import generate_corpus
from .grader import audit_steps, judge
from .graphs import canonical_key
from .sampler import (Cache, HttpBackend, StubBackend, get_profile,
                      prompt_sha, sample)
from .selector import select_diverse
from .textgen import build_cot_prompt, wrap_instruction


def _config_from(args: argparse.Namespace) -> PipelineConfig:
    cfg = load_config(getattr(args, "config", None))
    known = {f.name for f in fields(PipelineConfig)}
    overrides = {k: getattr(args, k) for k in known if hasattr(args, k)}
    return apply_overrides(cfg, overrides)


def _make_backend(cfg: PipelineConfig, problems):
    if cfg.backend == "stub":
        return StubBackend(problems, error_rate=cfg.stub_error_rate,
                           seed=cfg.seed)
    if cfg.backend == "http":
        if not cfg.base_url or not cfg.model:
            raise InvalidSpecError("http backend needs --base-url and --model")
        key = cfg.api_key or os.environ.get("GRAPHCORPUS_API_KEY")
        return HttpBackend(cfg.base_url, cfg.model, api_key=key)
    raise InvalidSpecError(f"unknown backend: {cfg.backend}")


def _load_paths(path: str) -> dict[str, list[str]]:
    out: dict[str, list[str]] = {}
    for rec in read_jsonl(path, PATHS_SCHEMA):
        out.setdefault(rec["id"], []).extend(rec["texts"])
    return out


def _open_cache(cfg: PipelineConfig) -> Cache | None:
    return Cache(cfg.cache) if cfg.cache else None


def cmd_generate(args: argparse.Namespace) -> int:
    cfg = _config_from(args)
    dedupe: set[str] = set()
    if args.dedupe_against:
        for p in read_problems(args.dedupe_against):
            dedupe.add(canonical_key(p.graph))
    problems = generate_corpus(
        cfg.tasks, cfg.resolved_count(), seed=cfg.seed, split=cfg.split,
        dedupe_keys=dedupe, token_budget=cfg.token_budget,
        max_attempts=cfg.max_attempts,
        rejection_attempts=cfg.rejection_attempts,
        hamilton_budget=cfg.hamilton_budget,
        hamilton_dp_limit=cfg.hamilton_dp_limit)
    n = write_problems(args.out, problems)
    print(f"wrote {n} problems to {args.out}")
    return 0


def cmd_annotate(args: argparse.Namespace) -> int:
    cfg = _config_from(args)
    problems = read_problems(args.problems)
    profile = get_profile(cfg.profile or "initial")
    backend = _make_backend(cfg, problems)
    prompts = [build_cot_prompt(p.task, p.text, shots=cfg.shots)
               for p in problems]
    texts = sample(prompts, profile, backend, cache=_open_cache(cfg),
                   jobs=cfg.jobs, max_requests=cfg.max_requests)
    records = [{"schema": PATHS_SCHEMA, "id": p.id,
                "prompt_sha": prompt_sha(prompts[i]), "texts": texts[i]}
               for i, p in enumerate(problems)]
    write_jsonl(args.out, records)
    total = sum(len(r["texts"]) for r in records)
    print(f"wrote {total} paths for {len(records)} problems to {args.out}")
    return 0


def cmd_select(args: argparse.Namespace) -> int:
    cfg = _config_from(args)
    problems = read_problems(args.problems)
    by_id = {p.id: p for p in problems}
    paths = _load_paths(args.paths)
    selected: dict[str, list[str]] = {}
    dropped = 0
    for pid, texts in paths.items():
        problem = by_id.get(pid)
        if problem is None:
            raise RecordError(f"{pid}: paths reference no known problem")
        correct = [t for t in texts if judge(problem, t).correct]
        if not correct:
            dropped += 1
            continue
        picked = select_diverse(correct, cap=cfg.cap, seed=cfg.seed)
        selected[pid] = [correct[i] for i in picked]
    rows = assemble_sft(problems, selected)
    write_jsonl(args.out, rows)
    print(f"wrote {len(rows)} training rows for {len(selected)} problems "
          f"to {args.out} ({dropped} problems had no correct path)")
    return 0


def cmd_dpo(args: argparse.Namespace) -> int:
    cfg = _config_from(args)
    problems = read_problems(args.problems)
    if args.paths:
        paths = _load_paths(args.paths)
    else:
        profile = get_profile(cfg.profile or "dpo")
        backend = _make_backend(cfg, problems)
        prompts = [wrap_instruction(p.text) for p in problems]
        texts = sample(prompts, profile, backend, cache=_open_cache(cfg),
                       jobs=cfg.jobs, max_requests=cfg.max_requests)
        paths = {p.id: texts[i] for i, p in enumerate(problems)}
    rows = assemble_dpo(problems, paths, beta=cfg.beta)
    write_jsonl(args.out, rows)
    print(f"wrote {len(rows)} preference pairs to {args.out} "
          f"({len(paths) - len(rows)} problems skipped)")
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    cfg = _config_from(args)
    problems = read_problems(args.problems)
    if args.predictions:
        preds = {rec["id"]: rec["text"]
                 for rec in read_jsonl(args.predictions, PREDICTIONS_SCHEMA)}
        report = evaluate(problems, preds)
    else:
        backend = _make_backend(cfg, problems)
        report = run_eval(problems, backend,
                          profile=get_profile(cfg.profile or "eval"),
                          repeats=cfg.repeats, jobs=cfg.jobs,
                          cache=_open_cache(cfg))
    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, "report.json"), "w",
              encoding="utf-8") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")
    text = format_report(report)
    with open(os.path.join(args.out, "report.txt"), "w",
              encoding="utf-8") as fh:
        fh.write(text + "\n")
    print(text)
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    problems = read_problems(args.problems)
    sft = read_jsonl(args.sft, SFT_SCHEMA) if args.sft else None
    stats = compute_stats(problems, sft)
    print(format_stats(stats))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(stats, fh, indent=2)
            fh.write("\n")
    return 0


def cmd_audit(args: argparse.Namespace) -> int:
    problems = read_problems(args.problems)
    by_id = {p.id: p for p in problems}
    paths = _load_paths(args.paths)
    rows = []
    audited = 0
    for pid in sorted(paths):
        problem = by_id.get(pid)
        if problem is None:
            raise RecordError(f"{pid}: paths reference no known problem")
        for k, text in enumerate(paths[pid]):
            audited += 1
            for v in audit_steps(problem, text):
                rows.append({"schema": "audit-v1", "id": pid, "path_index": k,
                             "sentence": v.sentence, "kind": v.kind,
                             "detail": v.detail})
    if args.out:
        write_jsonl(args.out, rows)
    else:
        for r in rows:
            print(f"{r['id']}#{r['path_index']} sentence {r['sentence']}: "
                  f"{r['kind']}: {r['detail']}")
    print(f"{len(rows)} violations across {audited} paths")
    return 0


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="JSON config file")
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--jobs", type=int, default=None)


def _add_backend(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--backend", choices=("stub", "http"), default=None)
    sub.add_argument("--stub-error-rate", type=float, default=None)
    sub.add_argument("--profile", default=None)
    sub.add_argument("--cache", default=None)
    sub.add_argument("--max-requests", type=int, default=None)
    sub.add_argument("--base-url", default=None)
    sub.add_argument("--model", default=None)
    sub.add_argument("--api-key", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphcorpus",
        description="Synthesize, annotate, and grade graph reasoning corpora.")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("generate", help="generate balanced problem sets")
    _add_common(p)
    p.add_argument("--tasks", help="comma separated task names")
    p.add_argument("--count", type=int, default=None, help="problems per task")
    p.add_argument("--split", default=None, choices=("train", "test"))
    p.add_argument("--dedupe-against", help="problems file whose graphs to avoid")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = subs.add_parser("annotate", help="sample reasoning paths for problems")
    _add_common(p)
    _add_backend(p)
    p.add_argument("--problems", required=True)
    p.add_argument("--shots", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_annotate)

    p = subs.add_parser("select", help="distill correct paths into SFT rows")
    _add_common(p)
    p.add_argument("--problems", required=True)
    p.add_argument("--paths", required=True)
    p.add_argument("--cap", type=int, default=None, help="paths kept per problem")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_select)

    p = subs.add_parser("dpo", help="build preference pairs")
    _add_common(p)
    _add_backend(p)
    p.add_argument("--problems", required=True)
    p.add_argument("--paths", help="reuse sampled paths instead of a backend")
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_dpo)

    p = subs.add_parser("evaluate", help="grade predictions or a live backend")
    _add_common(p)
    _add_backend(p)
    p.add_argument("--problems", required=True)
    p.add_argument("--predictions", help="predictions file; omit to sample")
    p.add_argument("--repeats", type=int, default=None)
    p.add_argument("--out", required=True, help="report directory")
    p.set_defaults(func=cmd_evaluate)

    p = subs.add_parser("stats", help="summarize a problems file")
    p.add_argument("--problems", required=True)
    p.add_argument("--sft", help="count paths from an SFT file")
    p.add_argument("--out", help="also write stats as JSON")
    p.set_defaults(func=cmd_stats)

    p = subs.add_parser("audit", help="flag hallucinated steps in paths")
    p.add_argument("--problems", required=True)
    p.add_argument("--paths", required=True)
    p.add_argument("--out", help="write violations as JSONL")
    p.set_defaults(func=cmd_audit)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except GraphCorpusError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
