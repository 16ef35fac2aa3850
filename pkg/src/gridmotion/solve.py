"""Heuristic schedule construction: prioritized space-time planning with
restarts, followed by simulated-annealing improvement over k-robot replans.

An initial feasible schedule is built by planning robots one at a time
against a reservation table. The single-robot search lifts the step rules
into space-time: a move into a pixel that is occupied at departure time is
legal only when the committed occupant leaves it in the same direction at the
same time (chain moves behind committed paths), and a robot being planned
must vacate a pixel in the direction of any committed robot entering it.
A robot cannot recruit not-yet-planned robots to move in concert; their start
pixels are treated as occupied, with unknown departure, at time 0.

Local search then repeatedly erases ``k_replan`` robots, replans them in
random order, and accepts the result by a simulated-annealing criterion
(improvements always, worsenings with probability exp(-delta/T), geometric
cooling on acceptance). Robot choice is biased toward makespan-critical
robots for MAX and toward robots with the most moves above their individual
lower bound for SUM.

Every schedule returned by :func:`solve` is validated in-process first; the
solver reports an explicit failure rather than emitting an invalid schedule.
With ``time_limit`` unset, results are deterministic for a fixed seed.
"""

from __future__ import annotations

import heapq
import itertools
import math
import random
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .model import Direction, Instance, Objective, Pixel, Schedule, Step
from .validate import (
    UnreachableTargetError,
    ValidationReport,
    lower_bounds,
    search_window,
    validate_schedule,
)

_HORIZON_GROWTH = 1.5
_HORIZON_CAP_FACTOR = 10
_CRITICAL_WEIGHT = 4.0   # sampling weight of makespan-critical robots (MAX)
_AUTO_TEMP_FACTOR = 0.1  # initial temperature as a fraction of the start value

_MOVES = (Direction.NORTH, Direction.SOUTH, Direction.EAST, Direction.WEST)


@dataclass
class SolverConfig:
    """Solver knobs. ``anneal_initial_temp`` None means 10% of the first
    feasible objective value. ``time_limit`` None disables the wall clock and
    makes the run deterministic; the iteration caps still bound the work."""

    objective: Objective = Objective.MAX
    time_limit: Optional[float] = None
    restarts: int = 4
    horizon_factor: float = 2.0
    anneal_initial_temp: Optional[float] = None
    anneal_cooling: float = 0.995
    anneal_iterations: int = 100_000
    k_replan: int = 2
    seed: int = 0

    def __post_init__(self):
        if isinstance(self.objective, str):
            self.objective = Objective(self.objective)
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.horizon_factor < 1.0:
            raise ValueError("horizon_factor must be >= 1")
        if not (0.0 < self.anneal_cooling <= 1.0):
            raise ValueError("anneal_cooling must be in (0, 1]")
        if self.anneal_iterations < 0:
            raise ValueError("anneal_iterations must be >= 0")
        if self.k_replan < 1:
            raise ValueError("k_replan must be >= 1")
        if self.time_limit is not None and self.time_limit <= 0:
            raise ValueError("time_limit must be positive or None")


@dataclass(frozen=True)
class TelemetryRecord:
    time: float
    objective: int
    phase: str


@dataclass
class SolveResult:
    """Outcome of a solver run. ``schedule`` is None exactly when no feasible
    schedule was found; such a failure is explicit, never a bogus schedule."""

    objective: Objective
    schedule: Optional[Schedule]
    value: Optional[int]
    report: Optional[ValidationReport]
    telemetry: list[TelemetryRecord]
    failure_reason: Optional[str] = None

    @property
    def success(self) -> bool:
        return self.schedule is not None


class ReservationTable:
    """Space-time bookkeeping of committed robot paths.

    A path is the pixel sequence a robot occupies at integer times 0..T; from
    T on the robot rests on its final pixel (open-ended "parked" reservation).
    ``static_at_zero`` holds start pixels of robots that are not planned yet:
    they occupy those pixels at time 0 and their departure is unknown, so no
    one may move into them at time 1.
    """

    def __init__(self, horizon: int):
        self.horizon = horizon
        self.vertex: dict = {}      # (pixel, t) -> robot
        self.edge_from: dict = {}   # (pixel, t) -> pixel the occupant moves to at t+1
        self.edge_into: dict = {}   # (pixel, t) -> pixel the robot arriving at t+1 comes from
        self.parked: dict = {}      # pixel -> (robot, arrival time)
        self.static_at_zero: set = set()
        self._times: dict = {}      # pixel -> set of reserved times

    def add_path(self, robot: int, path: Sequence[Pixel]) -> None:
        for t, p in enumerate(path):
            key = (p, t)
            if key in self.vertex:
                raise ValueError(f"pixel {tuple(p)} already reserved at t={t}")
            self.vertex[key] = robot
            self._times.setdefault(p, set()).add(t)
        for t in range(len(path) - 1):
            a, b = path[t], path[t + 1]
            if a != b:
                self.edge_from[(a, t)] = b
                self.edge_into[(b, t)] = a
        end = path[-1]
        if end in self.parked:
            raise ValueError(f"pixel {tuple(end)} already parked on")
        self.parked[end] = (robot, len(path) - 1)

    def remove_path(self, robot: int, path: Sequence[Pixel]) -> None:
        for t, p in enumerate(path):
            del self.vertex[(p, t)]
            times = self._times[p]
            times.discard(t)
            if not times:
                del self._times[p]
        for t in range(len(path) - 1):
            a, b = path[t], path[t + 1]
            if a != b:
                del self.edge_from[(a, t)]
                del self.edge_into[(b, t)]
        del self.parked[path[-1]]

    def blocked_at(self, pixel, t: int) -> bool:
        if (pixel, t) in self.vertex:
            return True
        rec = self.parked.get(pixel)
        if rec is not None and t >= rec[1]:
            return True
        return t == 0 and pixel in self.static_at_zero

    def last_visit(self, pixel) -> float:
        """Last time any committed robot occupies the pixel; -1 when never,
        +inf for parked pixels."""
        if pixel in self.parked:
            return math.inf
        times = self._times.get(pixel)
        return max(times) if times else -1


def distance_map(obstacles: frozenset, window: tuple[int, int, int, int],
                 target: Pixel) -> dict:
    """True grid distances to ``target`` for every free pixel of the window."""
    x0, y0, x1, y1 = window
    dist = {(target.x, target.y): 0}
    queue = deque(((target.x, target.y),))
    while queue:
        p = queue.popleft()
        d = dist[p] + 1
        px, py = p
        for q in ((px, py + 1), (px, py - 1), (px + 1, py), (px - 1, py)):
            if (x0 <= q[0] <= x1 and y0 <= q[1] <= y1
                    and q not in dist and q not in obstacles):
                dist[q] = d
                queue.append(q)
    return dist


def plan_single(instance: Instance, robot: int, table: ReservationTable,
                objective: Objective, horizon: Optional[int] = None,
                window: Optional[tuple[int, int, int, int]] = None,
                dist_map: Optional[dict] = None) -> Optional[list[Pixel]]:
    """Cheapest space-time path for one robot against committed reservations.

    Path cost is (arrival, moves) for MAX and (moves, arrival) for SUM,
    compared lexicographically. Returns the pixel sequence occupied at times
    0..T, or None when no path reaches the target within the horizon. The
    robot may end only at a time after which no committed path visits the
    target again, because arrival parks it there forever.
    """
    start = instance.starts[robot]
    target = instance.targets[robot]
    if window is None:
        window = search_window(instance)
    if horizon is None:
        horizon = table.horizon
    if table.blocked_at(start, 0):
        raise ValueError(f"start of robot {robot} is reserved at time 0")
    if dist_map is None:
        dist_map = distance_map(instance.obstacles, window, target)
    x0, y0, x1, y1 = window
    obstacles = instance.obstacles
    vertex = table.vertex
    edge_from = table.edge_from
    edge_into = table.edge_into
    parked = table.parked
    static0 = table.static_at_zero
    sum_objective = objective is Objective.SUM

    h0 = dist_map.get((start.x, start.y))
    if h0 is None:
        return None
    goal_free_from = table.last_visit(target) + 1
    if goal_free_from > horizon:
        return None

    start_state = (start.x, start.y, 0)
    best = {start_state: 0}   # state -> fewest moves so far (time is in the state)
    parent: dict = {}
    counter = itertools.count()
    f2 = h0 if sum_objective else h0
    heap = [(h0, f2, next(counter), start.x, start.y, 0, 0)]
    while heap:
        f1, _, _, px, py, t, moves_in = heapq.heappop(heap)
        state = (px, py, t)
        if best.get(state, -1) != moves_in:
            continue   # stale heap entry
        if px == target.x and py == target.y and t >= goal_free_from:
            path = [Pixel(px, py)]
            s = state
            while s in parent:
                s = parent[s]
                path.append(Pixel(s[0], s[1]))
            path.reverse()
            return path
        nt = t + 1
        if nt > horizon:
            continue
        p = (px, py)
        incoming = edge_into.get((p, t))
        for d in _MOVES:
            dx, dy = d.value
            qx, qy = px + dx, py + dy
            if qx < x0 or qx > x1 or qy < y0 or qy > y1:
                continue
            q = (qx, qy)
            if q in obstacles:
                continue
            if (q, nt) in vertex:
                continue
            rec = parked.get(q)
            if rec is not None and nt >= rec[1]:
                continue
            # R3 against committed paths: entering an occupied pixel requires
            # the occupant to leave it with the same displacement now
            if (q, t) in vertex:
                if edge_from.get((q, t)) != (qx + dx, qy + dy):
                    continue
            elif (rec is not None and t >= rec[1]) or (t == 0 and q in static0):
                continue   # parked or unplanned occupant never departs
            # and symmetrically: if a committed robot enters our pixel now,
            # we must vacate it in that robot's direction
            if incoming is not None and (px - incoming[0], py - incoming[1]) != (dx, dy):
                continue
            h = dist_map.get(q)
            if h is None:
                continue
            nmoves = moves_in + 1
            nstate = (qx, qy, nt)
            old = best.get(nstate)
            if old is not None and old <= nmoves:
                continue
            best[nstate] = nmoves
            parent[nstate] = state
            if sum_objective:
                key = (nmoves + h, nt + h)
            else:
                key = (nt + h, nmoves + h)
            heapq.heappush(heap, (key[0], key[1], next(counter), qx, qy, nt, nmoves))
        # waiting in place
        if not table.blocked_at(p, nt) and incoming is None:
            nstate = (px, py, nt)
            old = best.get(nstate)
            if old is None or old > moves_in:
                best[nstate] = moves_in
                parent[nstate] = state
                h = dist_map[p]
                if sum_objective:
                    key = (moves_in + h, nt + h)
                else:
                    key = (nt + h, moves_in + h)
                heapq.heappush(heap, (key[0], key[1], next(counter), px, py, nt, moves_in))
    return None


def _initial_horizon(lb_makespan: int, n_robots: int, horizon_factor: float) -> int:
    return max(math.ceil(horizon_factor * lb_makespan), lb_makespan + n_robots)


def _horizon_cap(lb_makespan: int, n_robots: int) -> int:
    return _HORIZON_CAP_FACTOR * lb_makespan + n_robots


class _SolveContext:
    """Shared immutable data for one solver run: window, lower bounds and a
    cache of per-robot distance maps."""

    def __init__(self, instance: Instance):
        self.instance = instance
        self.window = search_window(instance)
        self.lb_makespan, self.lb_total, self.per_robot = lower_bounds(instance)
        self._dist_maps: dict[int, dict] = {}

    def dist_map(self, robot: int) -> dict:
        dm = self._dist_maps.get(robot)
        if dm is None:
            dm = distance_map(self.instance.obstacles, self.window,
                              self.instance.targets[robot])
            self._dist_maps[robot] = dm
        return dm


def _plan_order(ctx: _SolveContext, order: Sequence[int], objective: Objective,
                horizon: int) -> tuple[Optional[tuple[dict, ReservationTable]], Optional[int]]:
    """Plan all robots in the given priority order at a fixed horizon.

    Returns ((paths, table), None) on success, (None, failed robot) when some
    robot finds no path against the commitments made before it."""
    instance = ctx.instance
    table = ReservationTable(horizon)
    table.static_at_zero = set(instance.starts)
    paths: dict[int, list[Pixel]] = {}
    for robot in order:
        table.static_at_zero.discard(instance.starts[robot])
        path = plan_single(instance, robot, table, objective, horizon,
                           ctx.window, ctx.dist_map(robot))
        if path is None:
            return None, robot
        table.add_path(robot, path)
        paths[robot] = path
    return (paths, table), None


def prioritized_plan(instance: Instance, order: Sequence[int],
                     config: Optional[SolverConfig] = None) -> Optional[Schedule]:
    """Plan robots one at a time in the given order, growing the horizon
    geometrically on failure up to a cap. Returns None when no horizon in the
    ladder admits a full plan (the caller may retry with another order)."""
    config = config or SolverConfig()
    if sorted(order) != list(range(instance.n_robots)):
        raise ValueError("order must be a permutation of all robot indices")
    ctx = _SolveContext(instance)
    planned, _ = _plan_with_growth(ctx, order, config)
    if planned is None:
        return None
    return paths_to_schedule(instance, planned[0])


def _plan_with_growth(ctx: _SolveContext, order: Sequence[int],
                      config: SolverConfig
                      ) -> tuple[Optional[tuple[dict, ReservationTable]], Optional[int]]:
    n = ctx.instance.n_robots
    horizon = _initial_horizon(ctx.lb_makespan, n, config.horizon_factor)
    cap = max(_horizon_cap(ctx.lb_makespan, n), horizon)
    failed = None
    while True:
        planned, failed = _plan_order(ctx, order, config.objective, horizon)
        if planned is not None:
            return planned, None
        if horizon >= cap:
            return None, failed
        horizon = min(cap, math.ceil(horizon * _HORIZON_GROWTH))


def paths_to_schedule(instance: Instance, paths: dict[int, Sequence[Pixel]]) -> Schedule:
    """Assemble per-robot paths (positions at times 0..T_i) into a schedule,
    padding finished robots with WAIT and trimming trailing all-WAIT steps."""
    n = instance.n_robots
    length = max(len(paths[i]) for i in range(n)) - 1
    steps = []
    for t in range(length):
        moves = []
        for i in range(n):
            path = paths[i]
            if t + 1 < len(path):
                moves.append(Direction.between(path[t], path[t + 1]))
            else:
                moves.append(Direction.WAIT)
        steps.append(Step(tuple(moves)))
    while steps and all(not m.is_move for m in steps[-1].moves):
        steps.pop()
    return Schedule(instance_name=instance.name, steps=tuple(steps))


def _path_stats(path: Sequence[Pixel]) -> tuple[int, int]:
    """(moves, last active time) of one path."""
    moves = 0
    last = 0
    for t in range(1, len(path)):
        if path[t] != path[t - 1]:
            moves += 1
            last = t
    return moves, last


def _value_from_stats(stats: dict[int, tuple[int, int]], objective: Objective) -> int:
    if objective is Objective.MAX:
        return max((s[1] for s in stats.values()), default=0)
    return sum(s[0] for s in stats.values())


def _pick_robots(rng: random.Random, stats: dict[int, tuple[int, int]],
                 per_robot_lb: Sequence[int], objective: Objective,
                 k: int, current_value: int) -> list[int]:
    indices = sorted(stats)
    if objective is Objective.MAX:
        weights = [
            _CRITICAL_WEIGHT if stats[i][1] == current_value else 1.0
            for i in indices
        ]
    else:
        weights = [1.0 + max(0, stats[i][0] - per_robot_lb[i]) for i in indices]
    chosen: list[int] = []
    pool = list(indices)
    w = list(weights)
    for _ in range(min(k, len(pool))):
        total = sum(w)
        r = rng.random() * total
        acc = 0.0
        pick = len(pool) - 1
        for j, wj in enumerate(w):
            acc += wj
            if r < acc:
                pick = j
                break
        chosen.append(pool.pop(pick))
        w.pop(pick)
    return chosen


def solve(instance: Instance, config: Optional[SolverConfig] = None) -> SolveResult:
    """Best-effort schedule for the configured objective.

    Restarts run prioritized planning over several priority orders (first by
    descending individual lower bound, then seeded random permutations), then
    simulated annealing improves the best plan by replanning small robot
    subsets. The incumbent is returned when the time limit expires; telemetry
    records every improvement, so the objective column is non-increasing.
    """
    config = config or SolverConfig()
    objective = config.objective
    rng = random.Random(config.seed)
    t_start = time.monotonic()
    deadline = t_start + config.time_limit if config.time_limit is not None else None
    telemetry: list[TelemetryRecord] = []

    def out_of_time() -> bool:
        return deadline is not None and time.monotonic() >= deadline

    try:
        ctx = _SolveContext(instance)
    except UnreachableTargetError as err:
        return SolveResult(objective, None, None, None, [],
                           failure_reason=f"instance infeasible: {err}")
    n = instance.n_robots
    lb_value = ctx.lb_makespan if objective is Objective.MAX else ctx.lb_total

    best_paths: Optional[dict] = None
    best_value: Optional[int] = None
    best_horizon = 0

    base_order = sorted(range(n), key=lambda i: (-ctx.per_robot[i], i))
    for attempt in range(config.restarts):
        if attempt > 0 and out_of_time():
            break
        order = list(base_order)
        if attempt > 0:
            rng.shuffle(order)
        # When a robot cannot plan against earlier commitments (its target has
        # been walled in by parked robots, say), lift it to the front and try
        # again. Each robot is lifted at most once per restart so alternating
        # failures cannot loop forever.
        lifted: set[int] = set()
        while True:
            planned, failed = _plan_with_growth(ctx, order, config)
            if planned is not None or failed is None or failed in lifted:
                break
            if out_of_time():
                break
            lifted.add(failed)
            order.remove(failed)
            order.insert(0, failed)
        if planned is None:
            continue
        paths, table = planned
        stats = {i: _path_stats(paths[i]) for i in paths}
        value = _value_from_stats(stats, objective)
        if best_value is None or value < best_value:
            best_paths, best_value, best_horizon = paths, value, table.horizon
            telemetry.append(TelemetryRecord(time.monotonic() - t_start, value, "restart"))
        if best_value == lb_value:
            break

    if best_paths is None:
        return SolveResult(objective, None, None, None, telemetry,
                           failure_reason="no feasible schedule within restart and horizon limits")

    if best_value > lb_value and config.anneal_iterations > 0 and not out_of_time():
        best_paths, best_value = _anneal(ctx, config, rng, best_paths, best_value,
                                         best_horizon, lb_value, telemetry,
                                         t_start, deadline)

    schedule = paths_to_schedule(instance, best_paths)
    report = validate_schedule(instance, schedule)
    if not report.feasible:
        raise RuntimeError(
            f"internal error: solver assembled an invalid schedule "
            f"({report.first_violation})")
    value = report.makespan if objective is Objective.MAX else report.total_distance
    telemetry.append(TelemetryRecord(time.monotonic() - t_start, value, "final"))
    return SolveResult(objective, schedule, value, report, telemetry)


def _anneal(ctx: _SolveContext, config: SolverConfig, rng: random.Random,
            start_paths: dict, start_value: int, horizon: int, lb_value: int,
            telemetry: list[TelemetryRecord], t_start: float,
            deadline: Optional[float]) -> tuple[dict, int]:
    instance = ctx.instance
    objective = config.objective
    table = ReservationTable(horizon)
    current = dict(start_paths)
    for i, path in current.items():
        table.add_path(i, path)
    stats = {i: _path_stats(p) for i, p in current.items()}
    cur_value = start_value
    best_paths = dict(current)
    best_value = cur_value

    temp = config.anneal_initial_temp
    if temp is None:
        temp = _AUTO_TEMP_FACTOR * start_value
    if temp <= 0:
        return best_paths, best_value

    for _ in range(config.anneal_iterations):
        if deadline is not None and time.monotonic() >= deadline:
            break
        chosen = _pick_robots(rng, stats, ctx.per_robot, objective,
                              config.k_replan, cur_value)
        old_paths = {i: current[i] for i in chosen}
        old_stats = {i: stats[i] for i in chosen}
        for i in chosen:
            table.remove_path(i, current[i])
        replan_order = list(chosen)
        rng.shuffle(replan_order)
        table.static_at_zero = {instance.starts[i] for i in replan_order}
        new_paths: dict[int, list[Pixel]] = {}
        ok = True
        for i in replan_order:
            table.static_at_zero.discard(instance.starts[i])
            path = plan_single(instance, i, table, objective, horizon,
                               ctx.window, ctx.dist_map(i))
            if path is None:
                ok = False
                break
            table.add_path(i, path)
            new_paths[i] = path
        table.static_at_zero = set()
        if not ok:
            for i in new_paths:
                table.remove_path(i, new_paths[i])
            for i in chosen:
                table.add_path(i, old_paths[i])
            continue
        for i in chosen:
            current[i] = new_paths[i]
            stats[i] = _path_stats(new_paths[i])
        new_value = _value_from_stats(stats, objective)
        delta = new_value - cur_value
        if delta <= 0 or rng.random() < math.exp(-delta / temp):
            cur_value = new_value
            temp *= config.anneal_cooling
            if cur_value < best_value:
                best_value = cur_value
                best_paths = dict(current)
                telemetry.append(TelemetryRecord(time.monotonic() - t_start,
                                                 best_value, "anneal"))
                if best_value == lb_value:
                    break
        else:
            for i in chosen:
                table.remove_path(i, current[i])
            for i in chosen:
                table.add_path(i, old_paths[i])
                current[i] = old_paths[i]
                stats[i] = old_stats[i]
    return best_paths, best_value


def joint_bfs_oracle(instance: Instance,
                     window: Optional[tuple[int, int, int, int]] = None
                     ) -> tuple[int, Schedule]:
    """Exhaustive breadth-first search over joint configurations inside a
    small window; returns the optimal makespan and one optimal schedule.

    The window defaults to the bounding box of the instance content inflated
    by 1. Guarded to n <= 4 robots and window area <= 36 because the state
    space grows as area^n. Intended for tests and cross-checks only.
    """
    n = instance.n_robots
    if window is None:
        xs = [p.x for p in instance.starts] + [p.x for p in instance.targets] \
            + [p.x for p in instance.obstacles]
        ys = [p.y for p in instance.starts] + [p.y for p in instance.targets] \
            + [p.y for p in instance.obstacles]
        window = (min(xs) - 1, min(ys) - 1, max(xs) + 1, max(ys) + 1)
    x0, y0, x1, y1 = window
    area = (x1 - x0 + 1) * (y1 - y0 + 1)
    if n > 4:
        raise ValueError(f"joint search supports at most 4 robots, got {n}")
    if area > 36:
        raise ValueError(f"joint search window area {area} exceeds 36")
    free = {
        (x, y)
        for x in range(x0, x1 + 1)
        for y in range(y0, y1 + 1)
        if (x, y) not in instance.obstacles
    }
    start = tuple((p.x, p.y) for p in instance.starts)
    goal = tuple((p.x, p.y) for p in instance.targets)
    for label, cfg in (("start", start), ("target", goal)):
        for p in cfg:
            if p not in free:
                raise ValueError(f"{label} {p} outside the search window")

    moves_from = {
        p: tuple(
            (d, (p[0] + d.value[0], p[1] + d.value[1]))
            for d in (Direction.NORTH, Direction.SOUTH, Direction.EAST,
                      Direction.WEST, Direction.WAIT)
            if (p[0] + d.value[0], p[1] + d.value[1]) in free
        )
        for p in free
    }

    def successors(config):
        occupant = {p: i for i, p in enumerate(config)}
        moves: list = [None] * n
        dests: list = [None] * n
        out = []

        def rec(k: int):
            if k == n:
                out.append((tuple(moves), tuple(dests)))
                return
            for d, q in moves_from[config[k]]:
                ok = True
                for j in range(k):
                    if dests[j] == q:
                        ok = False
                        break
                    if q == config[j] and moves[j] is not d:
                        ok = False
                        break
                    if dests[j] == config[k] and moves[j] is not d:
                        ok = False
                        break
                if not ok:
                    continue
                # entering a pixel whose occupant has not chosen yet is fine;
                # the occupant's own loop enforces the shared-direction rule
                moves[k] = d
                dests[k] = q
                rec(k + 1)
            moves[k] = None
            dests[k] = None

        rec(0)
        return out

    if start == goal:
        return 0, Schedule(instance_name=instance.name, steps=())
    parents: dict = {start: None}
    queue = deque((start,))
    while queue:
        config = queue.popleft()
        for moves, dests in successors(config):
            if dests in parents:
                continue
            parents[dests] = (config, moves)
            if dests == goal:
                steps = []
                node = dests
                while parents[node] is not None:
                    prev, mv = parents[node]
                    steps.append(Step(mv))
                    node = prev
                steps.reverse()
                return len(steps), Schedule(instance_name=instance.name,
                                            steps=tuple(steps))
            queue.append(dests)
    raise RuntimeError("no joint path to the targets inside the window")
