"""Pipeline configuration.

A config is a flat JSON object; every key matches a PipelineConfig field.
Command line flags override file values, which override the defaults here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields

from .errors import InvalidSpecError
from .tasks import TASK_ORDER

DEFAULT_COUNTS = {"train": 3000, "test": 400}


@dataclass
class PipelineConfig:
    seed: int = 0
    tasks: list[str] = field(default_factory=lambda: list(TASK_ORDER))
    split: str = "train"
    count: int | None = None          # None: DEFAULT_COUNTS[split]
    token_budget: int = 4096
    max_attempts: int = 600
    rejection_attempts: int = 12
    hamilton_budget: int = 100_000
    hamilton_dp_limit: int = 12
    shots: int = 2
    cap: int = 5
    beta: float = 0.1
    jobs: int = 1
    repeats: int = 1
    profile: str | None = None
    backend: str = "stub"
    stub_error_rate: float = 0.0
    base_url: str | None = None
    model: str | None = None
    api_key: str | None = None
    max_requests: int | None = None
    cache: str | None = None

    def resolved_count(self) -> int:
        if self.count is not None:
            return self.count
        return DEFAULT_COUNTS.get(self.split, DEFAULT_COUNTS["train"])


def load_config(path: str | None) -> PipelineConfig:
    cfg = PipelineConfig()
    if path is None:
        return cfg
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except ValueError as exc:
            raise InvalidSpecError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise InvalidSpecError(f"{path}: config must be a JSON object")
    return apply_overrides(cfg, data)


def apply_overrides(cfg: PipelineConfig, overrides: dict) -> PipelineConfig:
    """Set known fields, rejecting unknown keys; None values are skipped."""
    known = {f.name for f in fields(PipelineConfig)}
    for key, value in overrides.items():
        if key not in known:
            raise InvalidSpecError(f"unknown config key: {key}")
        if value is None:
            continue
        if key == "tasks" and isinstance(value, str):
            value = [t.strip() for t in value.split(",") if t.strip()]
        setattr(cfg, key, value)
    return cfg
