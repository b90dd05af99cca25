"""Registry of the nine graph tasks and their generation envelopes."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidSpecError


@dataclass(frozen=True)
class TaskInfo:
    name: str
    difficulty: str          # easy | medium | hard
    directed: bool
    edge_weighted: bool
    node_weighted: bool
    node_range: tuple[int, int]
    answer_kind: str         # yes_no | numeric | sequence


_TASKS = [
    TaskInfo("cycle", "easy", False, False, False, (2, 100), "yes_no"),
    TaskInfo("connect", "easy", False, False, False, (2, 100), "yes_no"),
    TaskInfo("bipartite", "easy", True, False, False, (2, 100), "yes_no"),
    TaskInfo("topology", "easy", True, False, False, (2, 50), "sequence"),
    TaskInfo("shortest", "medium", False, True, False, (2, 100), "numeric"),
    TaskInfo("triangle", "medium", False, False, True, (2, 25), "numeric"),
    TaskInfo("flow", "medium", True, True, False, (2, 50), "numeric"),
    TaskInfo("hamilton", "hard", False, False, False, (2, 50), "yes_no"),
    TaskInfo("subgraph", "hard", True, False, False, (2, 30), "yes_no"),
]

TASKS: dict[str, TaskInfo] = {t.name: t for t in _TASKS}
TASK_ORDER: list[str] = [t.name for t in _TASKS]

DIFFICULTY_GROUPS: dict[str, list[str]] = {
    "easy": [t.name for t in _TASKS if t.difficulty == "easy"],
    "medium": [t.name for t in _TASKS if t.difficulty == "medium"],
    "hard": [t.name for t in _TASKS if t.difficulty == "hard"],
}

# Density cycles for the five tiers; directed ER at p has roughly twice the
# edges of undirected ER at p, so directed tasks use a halved cycle to keep
# large tiers inside the rendered-length budget.
DENSITIES: tuple[float, ...] = (0.15, 0.3, 0.5)
DENSITIES_DIRECTED: tuple[float, ...] = (0.075, 0.15, 0.25)

NUM_TIERS = 5


def get_task(name: str) -> TaskInfo:
    try:
        return TASKS[name]
    except KeyError:
        raise InvalidSpecError(f"unknown task {name!r}; expected one of {TASK_ORDER}") from None


@dataclass(frozen=True)
class Tier:
    lo: int
    hi: int
    p: float


def build_tiers(task: TaskInfo, densities: tuple[float, ...] | None = None) -> list[Tier]:
    """Five (node-band, density) combinations for a task.

    The node range splits into five contiguous bands; densities cycle across
    bands in order. Pass `densities` to override the default cycle.
    """
    if densities is None:
        densities = DENSITIES_DIRECTED if task.directed else DENSITIES
    if not densities or any(not (0.0 < p <= 1.0) for p in densities):
        raise InvalidSpecError(f"densities must be probabilities in (0,1], got {densities}")
    lo, hi = task.node_range
    span = hi - lo + 1
    bounds = [lo + (i * span) // NUM_TIERS for i in range(NUM_TIERS + 1)]
    tiers = []
    for i in range(NUM_TIERS):
        band_lo, band_hi = bounds[i], bounds[i + 1] - 1
        tiers.append(Tier(band_lo, band_hi, densities[i % len(densities)]))
    return tiers
