"""Arena description and its plain-text file format.

A scenario file holds one ``key=value`` pair per line. List-valued keys
(``wall``, ``obstacle``) repeat; everything else appears at most once.
Blank lines and ``#`` comments are allowed, unknown keys are errors.

    arena_width=800
    arena_height=600
    wall=0,0,800,0
    obstacle=400,300,50
    goal=650,300,30
    box_start=150,300
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import FormatError
from .geometry import point_segment_distance_sq

DEFAULT_BOX_SIDE = 40.0
DEFAULT_SENSOR_RADIUS = 150.0
DEFAULT_MAX_STEPS = 300

Wall = tuple[float, float, float, float]          # x1, y1, x2, y2
Obstacle = tuple[float, float, float]             # cx, cy, radius
Goal = tuple[float, float, float]                 # cx, cy, radius


@dataclass(frozen=True)
class Scenario:
    """Static world geometry plus the episode step budget.

    Invariants (checked on construction):
      * the box start point keeps at least ``box_side`` clearance from every
        wall segment and every obstacle surface,
      * ``sensor_radius > box_side``,
      * ``max_steps >= 1``.
    """

    arena_width: float
    arena_height: float
    goal: Goal
    box_start: tuple[float, float]
    walls: tuple[Wall, ...] = ()
    obstacles: tuple[Obstacle, ...] = ()
    box_heading_start: float = 0.0
    box_side: float = DEFAULT_BOX_SIDE
    sensor_radius: float = DEFAULT_SENSOR_RADIUS
    max_steps: int = DEFAULT_MAX_STEPS

    def __post_init__(self):
        if self.arena_width <= 0 or self.arena_height <= 0:
            raise ValueError("arena dimensions must be positive")
        if self.box_side <= 0:
            raise ValueError("box_side must be positive")
        if self.goal[2] <= 0:
            raise ValueError("goal radius must be positive")
        if self.sensor_radius <= self.box_side:
            raise ValueError("sensor_radius must exceed box_side")
        if self.max_steps < 1:
            raise ValueError("max_steps must be at least 1")
        for cx, cy, r in self.obstacles:
            if r <= 0:
                raise ValueError("obstacle radius must be positive")
        sx, sy = self.box_start
        for x1, y1, x2, y2 in self.walls:
            if math.sqrt(point_segment_distance_sq(sx, sy, x1, y1, x2, y2)) < self.box_side:
                raise ValueError(
                    f"box_start closer than box_side to wall ({x1},{y1})-({x2},{y2})"
                )
        for cx, cy, r in self.obstacles:
            if math.hypot(cx - sx, cy - sy) - r < self.box_side:
                raise ValueError(
                    f"box_start closer than box_side to obstacle at ({cx},{cy})"
                )


def default_scenario() -> Scenario:
    """800x600 bordered arena: one central obstacle, goal on the right."""
    return Scenario(
        arena_width=800.0,
        arena_height=600.0,
        walls=(
            (0.0, 0.0, 800.0, 0.0),
            (800.0, 0.0, 800.0, 600.0),
            (800.0, 600.0, 0.0, 600.0),
            (0.0, 600.0, 0.0, 0.0),
        ),
        obstacles=((400.0, 300.0, 50.0),),
        goal=(650.0, 300.0, 30.0),
        box_start=(150.0, 300.0),
        box_heading_start=0.0,
    )


_SCALAR_KEYS = {
    "arena_width": float,
    "arena_height": float,
    "box_heading_start": float,
    "box_side": float,
    "sensor_radius": float,
    "max_steps": int,
}
_TUPLE_KEYS = {"goal": 3, "box_start": 2}
_LIST_KEYS = {"wall": 4, "obstacle": 3}
_REQUIRED = ("arena_width", "arena_height", "goal", "box_start")


def parse_scenario(text: str, source: str = "<string>") -> Scenario:
    scalars: dict = {}
    tuples: dict = {}
    lists: dict = {"wall": [], "obstacle": []}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise FormatError(source, line_no, f"expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        try:
            if key in _SCALAR_KEYS:
                if key in scalars:
                    raise FormatError(source, line_no, f"duplicate key {key!r}")
                scalars[key] = _SCALAR_KEYS[key](value)
            elif key in _TUPLE_KEYS:
                if key in tuples:
                    raise FormatError(source, line_no, f"duplicate key {key!r}")
                parts = tuple(float(p) for p in value.split(","))
                if len(parts) != _TUPLE_KEYS[key]:
                    raise FormatError(
                        source, line_no, f"{key} needs {_TUPLE_KEYS[key]} values"
                    )
                tuples[key] = parts
            elif key in _LIST_KEYS:
                parts = tuple(float(p) for p in value.split(","))
                if len(parts) != _LIST_KEYS[key]:
                    raise FormatError(
                        source, line_no, f"{key} needs {_LIST_KEYS[key]} values"
                    )
                lists[key].append(parts)
            else:
                raise FormatError(source, line_no, f"unknown key {key!r}")
        except ValueError as exc:
            if isinstance(exc, FormatError):
                raise
            raise FormatError(source, line_no, f"bad value for {key!r}: {value!r}") from exc
    for key in _REQUIRED:
        if key not in scalars and key not in tuples:
            raise FormatError(source, 0, f"missing required key {key!r}")
    return Scenario(
        arena_width=scalars["arena_width"],
        arena_height=scalars["arena_height"],
        goal=tuples["goal"],
        box_start=tuples["box_start"],
        walls=tuple(lists["wall"]),
        obstacles=tuple(lists["obstacle"]),
        box_heading_start=scalars.get("box_heading_start", 0.0),
        box_side=scalars.get("box_side", DEFAULT_BOX_SIDE),
        sensor_radius=scalars.get("sensor_radius", DEFAULT_SENSOR_RADIUS),
        max_steps=scalars.get("max_steps", DEFAULT_MAX_STEPS),
    )


def load_scenario(path) -> Scenario:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_scenario(fh.read(), source=str(path))


def format_scenario(sc: Scenario) -> str:
    lines = [
        f"arena_width={sc.arena_width!r}",
        f"arena_height={sc.arena_height!r}",
    ]
    lines += [f"wall={x1!r},{y1!r},{x2!r},{y2!r}" for x1, y1, x2, y2 in sc.walls]
    lines += [f"obstacle={cx!r},{cy!r},{r!r}" for cx, cy, r in sc.obstacles]
    gx, gy, gr = sc.goal
    sx, sy = sc.box_start
    lines += [
        f"goal={gx!r},{gy!r},{gr!r}",
        f"box_start={sx!r},{sy!r}",
        f"box_heading_start={sc.box_heading_start!r}",
        f"box_side={sc.box_side!r}",
        f"sensor_radius={sc.sensor_radius!r}",
        f"max_steps={sc.max_steps}",
    ]
    return "\n".join(lines) + "\n"


def write_scenario(sc: Scenario, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_scenario(sc))
