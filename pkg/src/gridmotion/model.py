"""Core domain types: pixels, directions, instances, configurations, schedules.

Everything in this module is an immutable value, and every function is pure.
Motion legality is deliberately *not* checked here; ``apply_step`` performs a
plain translation so that callers (the validator, the renderer) can also step
through illegal schedules. See :mod:`gridmotion.validate` for the rules.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, NamedTuple, Sequence


class Pixel(NamedTuple):
    """Unit grid cell addressed by integer coordinates. Negatives are allowed;
    the workspace is unbounded."""

    x: int
    y: int

    def translated(self, direction: "Direction") -> "Pixel":
        dx, dy = direction.value
        return Pixel(self.x + dx, self.y + dy)


class Direction(Enum):
    """One robot action per unit of time: a unit move along an axis, or WAIT.

    The enum value is the (dx, dy) displacement, so ``Direction((0, 1))`` is a
    valid lookup. NORTH is +y, EAST is +x.
    """

    NORTH = (0, 1)
    SOUTH = (0, -1)
    EAST = (1, 0)
    WEST = (-1, 0)
    WAIT = (0, 0)

    @property
    def dx(self) -> int:
        return self.value[0]

    @property
    def dy(self) -> int:
        return self.value[1]

    @property
    def is_move(self) -> bool:
        return self is not Direction.WAIT

    @property
    def opposite(self) -> "Direction":
        return _OPPOSITE[self]

    @property
    def letter(self) -> str | None:
        """Single-letter wire encoding; WAIT has none (it is encoded by omission)."""
        return _LETTER.get(self)

    @classmethod
    def from_letter(cls, letter: str) -> "Direction":
        try:
            return _FROM_LETTER[letter]
        except KeyError:
            raise ValueError(f"unknown direction letter: {letter!r}") from None

    @classmethod
    def between(cls, a: Sequence[int], b: Sequence[int]) -> "Direction":
        """Direction of the unit (or zero) displacement from ``a`` to ``b``."""
        try:
            return cls((b[0] - a[0], b[1] - a[1]))
        except ValueError:
            raise ValueError(f"{tuple(a)} -> {tuple(b)} is not a unit or zero step") from None


_OPPOSITE = {
    Direction.NORTH: Direction.SOUTH,
    Direction.SOUTH: Direction.NORTH,
    Direction.EAST: Direction.WEST,
    Direction.WEST: Direction.EAST,
    Direction.WAIT: Direction.WAIT,
}
_LETTER = {
    Direction.NORTH: "N",
    Direction.SOUTH: "S",
    Direction.EAST: "E",
    Direction.WEST: "W",
}
_FROM_LETTER = {v: k for k, v in _LETTER.items()}


def _as_pixels(points: Iterable[Sequence[int]]) -> tuple[Pixel, ...]:
    return tuple(Pixel(int(p[0]), int(p[1])) for p in points)


@dataclass(frozen=True)
class Instance:
    """A planning problem: n labeled robots with start and target pixels, plus
    a finite obstacle set. Robot i goes from ``starts[i]`` to ``targets[i]``.

    Starts are pairwise distinct, targets are pairwise distinct, and neither
    may sit on an obstacle. A robot may pass through another robot's target
    pixel mid-schedule; targets only constrain the final configuration.
    """

    name: str
    starts: tuple[Pixel, ...]
    targets: tuple[Pixel, ...]
    obstacles: frozenset[Pixel]

    def __post_init__(self):
        if not isinstance(self.name, str):
            raise ValueError("instance name must be a string")
        object.__setattr__(self, "starts", _as_pixels(self.starts))
        object.__setattr__(self, "targets", _as_pixels(self.targets))
        object.__setattr__(self, "obstacles", frozenset(_as_pixels(self.obstacles)))
        if len(self.starts) != len(self.targets):
            raise ValueError("starts and targets must have equal length")
        if not self.starts:
            raise ValueError("instance needs at least one robot")
        if len(set(self.starts)) != len(self.starts):
            raise ValueError("start pixels must be pairwise distinct")
        if len(set(self.targets)) != len(self.targets):
            raise ValueError("target pixels must be pairwise distinct")
        for label, pts in (("start", self.starts), ("target", self.targets)):
            for p in pts:
                if p in self.obstacles:
                    raise ValueError(f"{label} pixel {tuple(p)} lies on an obstacle")

    @property
    def n_robots(self) -> int:
        return len(self.starts)


@dataclass(frozen=True)
class Configuration:
    """Positions of all robots at one instant, indexed by robot."""

    positions: tuple[Pixel, ...]

    def __post_init__(self):
        object.__setattr__(self, "positions", _as_pixels(self.positions))
        if len(set(self.positions)) != len(self.positions):
            raise ValueError("configuration positions must be pairwise distinct")

    def __len__(self) -> int:
        return len(self.positions)

    def __getitem__(self, i: int) -> Pixel:
        return self.positions[i]

    def __iter__(self) -> Iterator[Pixel]:
        return iter(self.positions)


@dataclass(frozen=True)
class Step:
    """One synchronous time unit: a direction (possibly WAIT) per robot."""

    moves: tuple[Direction, ...]

    def __post_init__(self):
        object.__setattr__(self, "moves", tuple(self.moves))
        for m in self.moves:
            if not isinstance(m, Direction):
                raise ValueError(f"step entries must be Direction, got {m!r}")

    def __len__(self) -> int:
        return len(self.moves)

    def __getitem__(self, i: int) -> Direction:
        return self.moves[i]

    def __iter__(self) -> Iterator[Direction]:
        return iter(self.moves)


@dataclass(frozen=True)
class Schedule:
    """A sequence of steps for one instance, referenced by name.

    Steps all have the same width. Trailing all-WAIT steps are legal; they do
    not change the objectives (see :func:`schedule_objectives`).
    """

    instance_name: str
    steps: tuple[Step, ...]

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        widths = {len(s) for s in self.steps}
        if len(widths) > 1:
            raise ValueError("all steps of a schedule must have the same width")

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def width(self) -> int | None:
        """Number of robots per step, or None for an empty schedule."""
        return len(self.steps[0]) if self.steps else None


class Objective(Enum):
    """Optimization target: makespan (MAX) or total number of moves (SUM)."""

    MAX = "max"
    SUM = "sum"


def apply_step(config: Configuration, step: Step) -> Configuration:
    """Translate every robot by its move. No legality checking on purpose."""
    if len(config) != len(step):
        raise ValueError(f"step width {len(step)} != configuration size {len(config)}")
    return Configuration(tuple(p.translated(m) for p, m in zip(config.positions, step.moves)))


def schedule_objectives(schedule: Schedule) -> tuple[int, int]:
    """Return (makespan, total_distance).

    makespan is the number of steps after trimming trailing all-WAIT steps,
    i.e. the time at which the last robot stops moving. total_distance counts
    every non-WAIT move of every robot. An empty schedule scores (0, 0).
    """
    makespan = 0
    total = 0
    for idx, step in enumerate(schedule.steps):
        active = sum(1 for m in step.moves if m.is_move)
        total += active
        if active:
            makespan = idx + 1
    return makespan, total
