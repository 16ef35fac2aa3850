"""Static SVG rendering of instances and schedules.

A render shows one frame per sampled time step: obstacles dark, robots as
green squares, targets as red outlines. Infeasible schedules render too; the
robots involved in the first violation get a red cross marker in the frame
where the violation occurs. Output bytes are deterministic.
"""

from __future__ import annotations

from typing import Optional

from .model import Configuration, Instance, Schedule
from .validate import RULE_TARGET, Violation

_CELL = 16
_PAD = 8
_LABEL_H = 16
_FRAMES_PER_ROW = 5

_COLOR_OBSTACLE = "#333333"
_COLOR_ROBOT = "#2e8b57"
_COLOR_TARGET = "#cc2222"
_COLOR_MARK = "#ff0000"
_COLOR_GRIDBG = "#f4f4f4"


def _configs_along(instance: Instance, schedule: Optional[Schedule]):
    config = Configuration(instance.starts)
    out = [config]
    if schedule is not None:
        for step in schedule.steps:
            positions = tuple(p.translated(m) for p, m in zip(config.positions, step.moves))
            config = object.__new__(Configuration)
            object.__setattr__(config, "positions", positions)
            out.append(config)
    return out


def render_svg(instance: Instance, schedule: Optional[Schedule] = None,
               frame_every: int = 1, violation: Optional[Violation] = None) -> str:
    """Render the instance (and optionally every ``frame_every``-th step of a
    schedule) to an SVG string."""
    if frame_every < 1:
        raise ValueError("frame_every must be >= 1")
    configs = _configs_along(instance, schedule)
    last = len(configs) - 1
    times = sorted({*range(0, last + 1, frame_every), last})
    if violation is not None:
        times = sorted({*times, min(violation.step, last)})

    xs = [p.x for c in configs for p in c.positions]
    ys = [p.y for c in configs for p in c.positions]
    xs += [p.x for p in instance.obstacles] + [p.x for p in instance.targets]
    ys += [p.y for p in instance.obstacles] + [p.y for p in instance.targets]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    grid_w = (x1 - x0 + 1) * _CELL
    grid_h = (y1 - y0 + 1) * _CELL
    frame_w = grid_w + _PAD
    frame_h = grid_h + _LABEL_H + _PAD

    def cell_rect(p, fill, extra=""):
        sx = (p.x - x0) * _CELL
        sy = (y1 - p.y) * _CELL   # svg y grows downward
        return (f'<rect x="{sx}" y="{sy}" width="{_CELL}" height="{_CELL}" '
                f'{extra}fill="{fill}"/>')

    cols = min(len(times), _FRAMES_PER_ROW)
    rows = (len(times) + cols - 1) // cols
    total_w = cols * frame_w + _PAD
    total_h = rows * frame_h + _PAD

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{total_w}" '
        f'height="{total_h}" viewBox="0 0 {total_w} {total_h}">',
        f'<rect width="{total_w}" height="{total_h}" fill="#ffffff"/>',
    ]
    marked = set()
    if violation is not None:
        marked = set(violation.robots)
    for k, t in enumerate(times):
        ox = _PAD + (k % cols) * frame_w
        oy = _PAD + (k // cols) * frame_h
        parts.append(f'<g transform="translate({ox},{oy})">')
        parts.append(f'<text x="0" y="{_LABEL_H - 5}" font-family="monospace" '
                     f'font-size="11" fill="#000000">t={t}</text>')
        parts.append(f'<g transform="translate(0,{_LABEL_H})">')
        parts.append(f'<rect x="0" y="0" width="{grid_w}" height="{grid_h}" '
                     f'fill="{_COLOR_GRIDBG}"/>')
        for p in sorted(instance.obstacles):
            parts.append(cell_rect(p, _COLOR_OBSTACLE))
        for p in instance.targets:
            sx = (p.x - x0) * _CELL
            sy = (y1 - p.y) * _CELL
            parts.append(f'<rect x="{sx + 1.5}" y="{sy + 1.5}" width="{_CELL - 3}" '
                         f'height="{_CELL - 3}" fill="none" stroke="{_COLOR_TARGET}" '
                         f'stroke-width="1.5"/>')
        for p in configs[t].positions:
            parts.append(cell_rect(p, _COLOR_ROBOT, 'opacity="0.9" '))
        if violation is not None and (
                t == min(violation.step, last)
                or (violation.rule == RULE_TARGET and t == last)):
            for i in marked:
                p = configs[t].positions[i]
                sx = (p.x - x0) * _CELL
                sy = (y1 - p.y) * _CELL
                parts.append(f'<line x1="{sx}" y1="{sy}" x2="{sx + _CELL}" '
                             f'y2="{sy + _CELL}" stroke="{_COLOR_MARK}" stroke-width="2"/>')
                parts.append(f'<line x1="{sx + _CELL}" y1="{sy}" x2="{sx}" '
                             f'y2="{sy + _CELL}" stroke="{_COLOR_MARK}" stroke-width="2"/>')
        parts.append('</g>')
        parts.append('</g>')
    parts.append('</svg>')
    return "\n".join(parts) + "\n"
