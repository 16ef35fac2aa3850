"""Wire formats: instance and solution files (JSON), generator grid configs
and solver configs (key-value text). See docs/FORMATS.md for the grammar.

Parsing has two modes. Strict mode rejects unknown keys and any structural
irregularity with FormatError; lenient mode (the default) downgrades unknown
keys to warnings but still rejects structural damage. Emission is
deterministic: the same object always serializes to the same bytes.
"""

from __future__ import annotations

import itertools
import json
import warnings
from typing import Any, Mapping, Optional

from .generate import GeneratorParams
from .model import Direction, Instance, Objective, Schedule, Step
from .solve import SolverConfig

_INSTANCE_KEYS = ("name", "starts", "targets", "obstacles")
_SOLUTION_KEYS = ("instance", "steps")


class FormatError(ValueError):
    """Structurally invalid file content."""


def _check_unknown_keys(obj: Mapping[str, Any], allowed, what: str, strict: bool):
    unknown = sorted(set(obj) - set(allowed))
    if not unknown:
        return
    message = f"{what}: unknown key(s) {', '.join(map(repr, unknown))}"
    if strict:
        raise FormatError(message)
    warnings.warn(message, stacklevel=3)


def _as_coord(value, what: str) -> tuple[int, int]:
    if (not isinstance(value, (list, tuple)) or len(value) != 2
            or any(isinstance(c, bool) or not isinstance(c, int) for c in value)):
        raise FormatError(f"{what}: expected [x, y] with integer coordinates, got {value!r}")
    return (value[0], value[1])


def _coord_list(value, what: str) -> list[tuple[int, int]]:
    if not isinstance(value, list):
        raise FormatError(f"{what}: expected a list of [x, y] pairs")
    return [_as_coord(v, what) for v in value]


def parse_instance(text: str, strict: bool = False) -> Instance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise FormatError(f"instance file is not valid JSON: {err}") from None
    if not isinstance(data, dict):
        raise FormatError("instance file must be a JSON object")
    _check_unknown_keys(data, _INSTANCE_KEYS, "instance file", strict)
    for key in _INSTANCE_KEYS:
        if key not in data:
            raise FormatError(f"instance file: missing key {key!r}")
    if not isinstance(data["name"], str):
        raise FormatError("instance file: name must be a string")
    try:
        return Instance(
            name=data["name"],
            starts=tuple(_coord_list(data["starts"], "starts")),
            targets=tuple(_coord_list(data["targets"], "targets")),
            obstacles=frozenset(_coord_list(data["obstacles"], "obstacles")),
        )
    except ValueError as err:
        raise FormatError(f"instance file: {err}") from None


def _coord_array(pixels) -> str:
    return "[" + ", ".join(f"[{p.x}, {p.y}]" for p in pixels) + "]"


def emit_instance(instance: Instance) -> str:
    # hand-rolled layout keeps each coordinate list on one line
    return (
        "{\n"
        f'  "name": {json.dumps(instance.name)},\n'
        f'  "starts": {_coord_array(instance.starts)},\n'
        f'  "targets": {_coord_array(instance.targets)},\n'
        f'  "obstacles": {_coord_array(sorted(instance.obstacles))}\n'
        "}\n"
    )


def parse_solution(text: str, n_robots: int, strict: bool = False) -> Schedule:
    """Parse a solution file for an instance with ``n_robots`` robots. Robots
    absent from a step wait during that step."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise FormatError(f"solution file is not valid JSON: {err}") from None
    if not isinstance(data, dict):
        raise FormatError("solution file must be a JSON object")
    _check_unknown_keys(data, _SOLUTION_KEYS, "solution file", strict)
    for key in _SOLUTION_KEYS:
        if key not in data:
            raise FormatError(f"solution file: missing key {key!r}")
    if not isinstance(data["instance"], str):
        raise FormatError("solution file: instance must be a string")
    if not isinstance(data["steps"], list):
        raise FormatError("solution file: steps must be a list")
    steps = []
    for idx, raw in enumerate(data["steps"]):
        if not isinstance(raw, dict):
            raise FormatError(f"solution file: step {idx} must be an object")
        moves = [Direction.WAIT] * n_robots
        for key, letter in raw.items():
            if not isinstance(key, str) or not key.isdigit() or str(int(key)) != key:
                raise FormatError(
                    f"solution file: step {idx}: robot index {key!r} is not a "
                    f"canonical decimal string")
            robot = int(key)
            if robot >= n_robots:
                raise FormatError(
                    f"solution file: step {idx}: robot index {robot} out of range "
                    f"(instance has {n_robots} robots)")
            if not isinstance(letter, str):
                raise FormatError(f"solution file: step {idx}: move must be a string")
            try:
                moves[robot] = Direction.from_letter(letter)
            except ValueError as err:
                raise FormatError(f"solution file: step {idx}: {err}") from None
        steps.append(Step(tuple(moves)))
    return Schedule(instance_name=data["instance"], steps=tuple(steps))


def emit_solution(schedule: Schedule) -> str:
    lines = ["{", f'  "instance": {json.dumps(schedule.instance_name)},']
    if not schedule.steps:
        lines.append('  "steps": []')
    else:
        lines.append('  "steps": [')
        for si, step in enumerate(schedule.steps):
            moving = [(i, m.letter) for i, m in enumerate(step.moves) if m.is_move]
            body = ", ".join(f'"{i}": "{letter}"' for i, letter in moving)
            comma = "," if si + 1 < len(schedule.steps) else ""
            lines.append("    {" + body + "}" + comma)
        lines.append("  ]")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# key-value config files


def _parse_kv_lines(text: str, what: str) -> dict[str, list[str]]:
    out: dict[str, list[str]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise FormatError(f"{what} line {lineno}: expected 'key = value ...'")
        key, _, rest = line.partition("=")
        key = key.strip()
        values = rest.split()
        if not key or not values:
            raise FormatError(f"{what} line {lineno}: empty key or value list")
        if key in out:
            raise FormatError(f"{what} line {lineno}: duplicate key {key!r}")
        out[key] = values
    return out


_GRID_FIELDS = {
    "map_width": int,
    "map_height": int,
    "density": float,
    "start_distribution": str,
    "target_distribution": str,
    "obstacle_count": int,
    "obstacle_size_mean": float,
    "obstacle_size_stddev": float,
    "cluster_count": int,
    "cluster_size_mean": float,
    "cluster_size_stddev": float,
    "seed": int,
}


def parse_generator_grid(text: str, strict: bool = False,
                         default_seed: int = 0) -> list[GeneratorParams]:
    """Expand a generator config into the Cartesian product of its value
    lists. Every GeneratorParams field accepts a list of values; ``seed``
    participates in the product like any other field and defaults to a single
    seed when omitted. Expansion order follows the field order of
    GeneratorParams, last field varying fastest."""
    raw = _parse_kv_lines(text, "generator config")
    unknown = sorted(set(raw) - set(_GRID_FIELDS))
    if unknown:
        message = f"generator config: unknown key(s) {', '.join(map(repr, unknown))}"
        if strict:
            raise FormatError(message)
        warnings.warn(message, stacklevel=2)
        for key in unknown:
            del raw[key]
    if "map_width" not in raw or "map_height" not in raw or "density" not in raw:
        raise FormatError("generator config: map_width, map_height and density are required")
    grids = []
    for field_name in _GRID_FIELDS:
        if field_name in raw:
            caster = _GRID_FIELDS[field_name]
            try:
                grids.append([(field_name, caster(v)) for v in raw[field_name]])
            except ValueError:
                raise FormatError(
                    f"generator config: bad {caster.__name__} value for "
                    f"{field_name!r}") from None
        elif field_name == "seed":
            grids.append([("seed", default_seed)])
    combos = []
    for combo in itertools.product(*grids):
        try:
            combos.append(GeneratorParams(**dict(combo)))
        except ValueError as err:
            raise FormatError(f"generator config: {err}") from None
    return combos


_SOLVER_FIELDS = ("objective", "time_limit", "restarts", "horizon_factor",
                  "anneal_initial_temp", "anneal_cooling", "anneal_iterations",
                  "k_replan", "seed")


def parse_solver_config(text: str, strict: bool = False) -> SolverConfig:
    """Single-valued key-value solver config. time_limit and
    anneal_initial_temp accept "none"/"auto" for their None defaults."""
    raw = _parse_kv_lines(text, "solver config")
    unknown = sorted(set(raw) - set(_SOLVER_FIELDS))
    if unknown:
        message = f"solver config: unknown key(s) {', '.join(map(repr, unknown))}"
        if strict:
            raise FormatError(message)
        warnings.warn(message, stacklevel=2)
        for key in unknown:
            del raw[key]
    kwargs: dict[str, Any] = {}
    try:
        for key, values in raw.items():
            if len(values) != 1:
                raise FormatError(f"solver config: {key!r} takes a single value")
            value = values[0]
            if key == "objective":
                kwargs[key] = parse_objective(value)
            elif key in ("time_limit", "anneal_initial_temp"):
                kwargs[key] = None if value.lower() in ("none", "auto") else float(value)
            elif key in ("horizon_factor", "anneal_cooling"):
                kwargs[key] = float(value)
            else:
                kwargs[key] = int(value)
        return SolverConfig(**kwargs)
    except ValueError as err:
        raise FormatError(f"solver config: {err}") from None


def parse_objective(value: str) -> Objective:
    try:
        return Objective(value.lower())
    except ValueError:
        raise FormatError(f"objective must be 'max' or 'sum', got {value!r}") from None
