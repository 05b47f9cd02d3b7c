"""Travel-scenario gate schedules.

A schedule is an ordered list of stages, each a set of disjoint mode
pairs that receive identical two-mode-squeezing gates.  Gates within a
stage commute (disjoint pairs); stages in general do not, so stage order
is semantically significant and preserved everywhere.

Two families are generated here:

* ladder_schedule(p, r): modes 1..p-1 for an odd prime p, three stages
  pairing the modes whose labels sum to p, p-2 and p+2, in that order.
  The union of the stage pairs is a 2 x (p-1)/2 ladder graph.
* lattice_schedule(rows, cols, r): modes on a grid, the grid edges
  partitioned into stages by a deterministic greedy proper edge coloring
  (edges sorted lexicographically by (row, col, direction), horizontal
  before vertical).  The original publication never states its exact
  lattice gate order, so the stage order is configurable; the default is
  the color order, and every report records which order was used.

Custom schedules come from a JSON config (see parse_scenario_config).
Mode labels are 1-based throughout.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .gaussian import Symplectic, apply_symplectic, tms_symplectic, vacuum_state

__all__ = [
    "ALT_LATTICE_STAGE_ORDER",
    "ConfigError",
    "Schedule",
    "ScenarioConfig",
    "Stage",
    "build_schedule",
    "ladder_schedule",
    "lattice_schedule",
    "parse_scenario_config",
    "run_schedule",
    "schedule_symplectic",
    "schedule_union_adjacency",
]

CONFIG_SCHEMA_VERSION = 1

# Stage order for the 4-stage lattice coloring under which the
# high-squeezing state disconnects into two-mode pairs like the ladder
# does (the default color order does not; see the decisions ledger).
# It swaps the last two color classes.
ALT_LATTICE_STAGE_ORDER = (0, 1, 3, 2)


class ConfigError(ValueError):
    """Scenario configuration is malformed or inconsistent."""


@dataclass(frozen=True)
class Stage:
    """One travel segment: disjoint mode pairs squeezed by a common r."""

    pairs: tuple
    r: float

    def __post_init__(self):
        pairs = []
        seen = set()
        for pair in self.pairs:
            i, j = pair
            if not (isinstance(i, int) and isinstance(j, int)) or i < 1 or j < 1:
                raise ValueError(f"mode indices must be positive integers, got {pair}")
            if i == j:
                raise ValueError(f"pair {pair} repeats a mode")
            i, j = min(i, j), max(i, j)
            if i in seen or j in seen:
                raise ValueError(f"mode {i if i in seen else j} appears twice in one stage")
            seen.update((i, j))
            pairs.append((i, j))
        object.__setattr__(self, "pairs", tuple(pairs))
        object.__setattr__(self, "r", float(self.r))

    @property
    def modes(self):
        """Set of modes touched by this stage."""
        return {k for pair in self.pairs for k in pair}


@dataclass(frozen=True)
class Schedule:
    """Ordered stages acting on n modes."""

    n: int
    stages: tuple

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError("mode count must be a positive integer")
        stages = tuple(self.stages)
        for stage in stages:
            high = max(stage.modes, default=0)
            if high > self.n:
                raise ValueError(f"mode {high} exceeds mode count {self.n}")
        object.__setattr__(self, "stages", stages)

    @property
    def gate_count(self):
        return sum(len(stage.pairs) for stage in self.stages)


@dataclass(frozen=True)
class ScenarioConfig:
    """Parsed scenario description.

    kind is one of ladder, lattice, custom.  The ladder takes an odd
    prime p >= 5; the lattice takes rows, cols >= 2 plus an optional
    stage_order permutation; custom takes explicit stages.  The p', p''
    stage families of the original proposal are expressible as custom
    stages, since their numeric values were never published.
    """

    kind: str
    r: float
    p: int = None
    rows: int = None
    cols: int = None
    stages: tuple = None
    stage_order: tuple = None


def _is_odd_prime(p):
    if p < 3 or p % 2 == 0:
        return False
    k = 3
    while k * k <= p:
        if p % k == 0:
            return False
        k += 2
    return True


def ladder_schedule(p, r):
    """Three-stage ladder scenario on p-1 modes for an odd prime p >= 5.

    Stage sums are (p, p-2, p+2) in the published order: stage s pairs
    every k with s-k whenever both labels lie in 1..p-1.
    """
    if not isinstance(p, int) or not _is_odd_prime(p) or p < 5:
        raise ValueError(f"p must be an odd prime >= 5, got {p}")
    n = p - 1
    stages = []
    for s in (p, p - 2, p + 2):
        pairs = tuple((k, s - k) for k in range(1, n + 1) if k < s - k <= n)
        stages.append(Stage(pairs, r))
    return Schedule(n, tuple(stages))


def _grid_edges(rows, cols):
    """Grid edges on 1-based modes i*cols + j + 1, sorted lexicographically
    by (row, col, direction) with horizontal before vertical."""
    edges = []
    for i in range(rows):
        for j in range(cols):
            u = i * cols + j + 1
            if j + 1 < cols:
                edges.append((u, u + 1))
            if i + 1 < rows:
                edges.append((u, u + cols))
    return edges


def _greedy_coloring(edges):
    """Assign each edge the smallest color unused at both endpoints."""
    node_colors = {}
    classes = []
    for edge in edges:
        used = node_colors.get(edge[0], set()) | node_colors.get(edge[1], set())
        color = 0
        while color in used:
            color += 1
        if color == len(classes):
            classes.append([])
        classes[color].append(edge)
        node_colors.setdefault(edge[0], set()).add(color)
        node_colors.setdefault(edge[1], set()).add(color)
    return classes


def lattice_schedule(rows, cols, r, stage_order=None):
    """Staged edge-coloring scenario covering the rows x cols grid.

    Stages are the greedy color classes in color order by default.
    stage_order, a permutation of the class indices, reorders them; the
    order used must be recorded alongside any results because the
    original gate order is an open question.
    """
    if not isinstance(rows, int) or not isinstance(cols, int) or rows < 2 or cols < 2:
        raise ValueError(f"rows and cols must be integers >= 2, got {rows} x {cols}")
    classes = _greedy_coloring(_grid_edges(rows, cols))
    if stage_order is not None:
        order = tuple(stage_order)
        if sorted(order) != list(range(len(classes))):
            raise ValueError(
                f"stage_order must be a permutation of 0..{len(classes) - 1}, "
                f"got {order}"
            )
        classes = [classes[k] for k in order]
    stages = tuple(Stage(tuple(cls), r) for cls in classes)
    return Schedule(rows * cols, stages)


def parse_scenario_config(text):
    """Parse and validate a JSON scenario config.

    Canonical schema (schema_version 1):

        {"schema_version": 1, "kind": "ladder", "p": 17, "r": 4.15}
        {"schema_version": 1, "kind": "lattice", "rows": 4, "cols": 4,
         "r": 0.15, "stage_order": [0, 1, 3, 2]}
        {"schema_version": 1, "kind": "custom", "r": 1.0,
         "stages": [[[1, 2], [3, 4]], [[2, 3]]]}

    Custom stages share the top-level r; the mode count is the largest
    index mentioned.
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    version = raw.get("schema_version")
    if version != CONFIG_SCHEMA_VERSION:
        raise ConfigError(
            f"unsupported schema_version {version!r}, expected {CONFIG_SCHEMA_VERSION}"
        )
    kind = raw.get("kind")
    if kind not in ("ladder", "lattice", "custom"):
        raise ConfigError(f"kind must be ladder, lattice or custom, got {kind!r}")
    r = raw.get("r")
    if not isinstance(r, (int, float)) or isinstance(r, bool):
        raise ConfigError(f"r must be a number, got {r!r}")

    p = rows = cols = stages = stage_order = None
    if kind == "ladder":
        p = raw.get("p")
        if not isinstance(p, int) or not _is_odd_prime(p) or p < 5:
            raise ConfigError(f"ladder requires an odd prime p >= 5, got {p!r}")
    elif kind == "lattice":
        rows, cols = raw.get("rows"), raw.get("cols")
        if not isinstance(rows, int) or not isinstance(cols, int) \
                or rows < 2 or cols < 2:
            raise ConfigError(
                f"lattice requires integer rows, cols >= 2, got {rows!r} x {cols!r}"
            )
        if "stage_order" in raw:
            order = raw["stage_order"]
            if not isinstance(order, list) or not all(isinstance(k, int) for k in order):
                raise ConfigError(f"stage_order must be a list of integers, got {order!r}")
            stage_order = tuple(order)
    else:
        raw_stages = raw.get("stages")
        if not isinstance(raw_stages, list) or not raw_stages:
            raise ConfigError("custom config has no gates, stages must be a "
                              "nonempty list")
        parsed = []
        for idx, raw_stage in enumerate(raw_stages):
            if not isinstance(raw_stage, list) or not raw_stage:
                raise ConfigError(f"stage {idx} must be a nonempty list of pairs")
            pairs = []
            for pair in raw_stage:
                if (not isinstance(pair, list) or len(pair) != 2
                        or not all(isinstance(k, int) for k in pair)):
                    raise ConfigError(f"stage {idx} has a malformed pair {pair!r}")
                pairs.append(tuple(pair))
            try:
                parsed.append(Stage(tuple(pairs), float(r)))
            except ValueError as exc:
                raise ConfigError(f"stage {idx}: {exc}") from exc
        stages = tuple(parsed)

    return ScenarioConfig(kind=kind, r=float(r), p=p, rows=rows, cols=cols,
                          stages=stages, stage_order=stage_order)


def build_schedule(config):
    """Turn a validated ScenarioConfig into a Schedule."""
    if config.kind == "ladder":
        return ladder_schedule(config.p, config.r)
    if config.kind == "lattice":
        try:
            return lattice_schedule(config.rows, config.cols, config.r,
                                    stage_order=config.stage_order)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    n = max(k for stage in config.stages for k in stage.modes)
    return Schedule(n, config.stages)


def schedule_symplectic(schedule):
    """Total symplectic of the schedule, later stages composed on the left."""
    total = Symplectic.identity(schedule.n)
    for stage in schedule.stages:
        for i, j in stage.pairs:
            total = tms_symplectic(schedule.n, i, j, stage.r) @ total
    return total


def run_schedule(schedule):
    """Evolve the vacuum through the schedule stage by stage.

    Each stage is applied as one Moebius update, which keeps every
    update conditioned like a single gate (condition number about
    exp(2r)) no matter how large the accumulated graph matrix grows.
    """
    z = vacuum_state(schedule.n)
    for stage in schedule.stages:
        stage_s = Symplectic.identity(schedule.n)
        for i, j in stage.pairs:
            stage_s = tms_symplectic(schedule.n, i, j, stage.r) @ stage_s
        z = apply_symplectic(stage_s, z)
    return z


def schedule_union_adjacency(schedule):
    """Weight-1 adjacency of the union of all stage pairs.

    This is the scenario's intended target graph in the scenario's own
    mode labeling, the reference for shape comparisons.
    """
    a = np.zeros((schedule.n, schedule.n))
    for stage in schedule.stages:
        for i, j in stage.pairs:
            a[i - 1, j - 1] = a[j - 1, i - 1] = 1.0
    return a
