"""States, parameters and the evolution operator on S^1 x S^1.

The reduced operator acts on ``(x, y)``, the frequencies of female and
male type 1::

    x' = (b - a) x y + a x + (1 - b) y
    y' = (beta - alpha) x y + alpha x + (1 - beta) y

All arithmetic is float64. Functions here are pure.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Union

import numpy as np

__all__ = [
    "ConsistencyError",
    "ParamSet",
    "State2",
    "State4",
    "Converged",
    "Cycle",
    "MaxIterReached",
    "Trajectory",
    "apply",
    "step2",
    "step4",
    "lift",
    "project",
    "iterate",
    "CLAMP_TOL",
    "DEFAULT_TOL",
    "DEFAULT_MAX_ITER",
    "CONVERGENCE_RUN",
    "CYCLE_WINDOW",
    "CYCLE_TOL",
]

CLAMP_TOL = 1e-12
DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 1_000_000
CONVERGENCE_RUN = 5
CYCLE_WINDOW = 8
CYCLE_TOL = 1e-12
# a period-p match only counts as a cycle if the state still moves at least
# this many times more per step than it drifts per period
_CYCLE_MOTION_RATIO = 1e4


class ConsistencyError(ArithmeticError):
    """Raised when a state leaves the unit square by more than rounding noise."""


def _unit(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name}={value!r} is outside [0, 1]")
    return value


@dataclass(frozen=True)
class ParamSet:
    """Heredity parameters ``(a, b, alpha, beta)``, each in [0, 1]."""

    a: float
    b: float
    alpha: float
    beta: float

    def __post_init__(self):
        for name in ("a", "b", "alpha", "beta"):
            object.__setattr__(self, name, _unit(name, getattr(self, name)))

    def astuple(self) -> tuple[float, float, float, float]:
        return (self.a, self.b, self.alpha, self.beta)


@dataclass(frozen=True)
class State2:
    """Reduced state: ``x`` female type-1 frequency, ``y`` male type-1 frequency."""

    x: float
    y: float

    def __post_init__(self):
        object.__setattr__(self, "x", _unit("x", self.x))
        object.__setattr__(self, "y", _unit("y", self.y))

    def astuple(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass(frozen=True)
class State4:
    """Full state ``(x1, x2; y1, y2)`` on the product of two 1-simplices."""

    x1: float
    x2: float
    y1: float
    y2: float

    def __post_init__(self):
        vals = [float(v) for v in (self.x1, self.x2, self.y1, self.y2)]
        if min(vals) < 0.0:
            raise ValueError(f"negative coordinate in {vals}")
        if abs(vals[0] + vals[1] - 1.0) > 1e-12 or abs(vals[2] + vals[3] - 1.0) > 1e-12:
            raise ValueError(f"marginals of {vals} do not sum to 1")
        for name, v in zip(("x1", "x2", "y1", "y2"), vals):
            object.__setattr__(self, name, v)

    def astuple(self) -> tuple[float, float, float, float]:
        return (self.x1, self.x2, self.y1, self.y2)


def _clamp(v: float) -> float:
    if v < 0.0:
        if v < -CLAMP_TOL:
            raise ConsistencyError(f"coordinate {v!r} below 0 beyond rounding")
        return 0.0
    if v > 1.0:
        if v > 1.0 + CLAMP_TOL:
            raise ConsistencyError(f"coordinate {v!r} above 1 beyond rounding")
        return 1.0
    return v


def apply(p: ParamSet, x, y):
    """Raw operator on floats or numpy arrays, without clamping."""
    a, b, alpha, beta = p.a, p.b, p.alpha, p.beta
    xy = x * y
    return (
        (b - a) * xy + a * x + (1.0 - b) * y,
        (beta - alpha) * xy + alpha * x + (1.0 - beta) * y,
    )


def step2(p: ParamSet, s: State2) -> State2:
    """One application of the reduced operator."""
    nx, ny = apply(p, s.x, s.y)
    return State2(_clamp(nx), _clamp(ny))


def step4(p: ParamSet, s: State4) -> State4:
    """One application of the four-coordinate operator."""
    a, b, alpha, beta = p.astuple()
    x1, x2, y1, y2 = s.astuple()
    nx1 = x1 * y1 + a * x1 * y2 + (1 - b) * x2 * y1
    nx2 = x2 * y2 + b * x2 * y1 + (1 - a) * x1 * y2
    ny1 = x1 * y1 + alpha * x1 * y2 + (1 - beta) * x2 * y1
    ny2 = x2 * y2 + beta * x2 * y1 + (1 - alpha) * x1 * y2
    nx1, nx2, ny1, ny2 = (_clamp(v) for v in (nx1, nx2, ny1, ny2))
    # renormalize only when the marginal drift is larger than the State4 check allows
    sx, sy = nx1 + nx2, ny1 + ny2
    if abs(sx - 1.0) > 1e-12:
        nx1, nx2 = nx1 / sx, nx2 / sx
    if abs(sy - 1.0) > 1e-12:
        ny1, ny2 = ny1 / sy, ny2 / sy
    return State4(nx1, nx2, ny1, ny2)


def lift(s: State2) -> State4:
    return State4(s.x, 1.0 - s.x, s.y, 1.0 - s.y)


def project(s: State4) -> State2:
    return State2(s.x1, s.y1)


@dataclass(frozen=True)
class Converged:
    limit: State2
    steps: int
    name = "converged"


@dataclass(frozen=True)
class Cycle:
    period: int
    states: tuple[State2, ...]
    name = "cycle"


@dataclass(frozen=True)
class MaxIterReached:
    last: State2
    name = "max-iter"


Outcome = Union[Converged, Cycle, MaxIterReached]


@dataclass(frozen=True)
class Trajectory:
    """Iterates of ``s0`` under the operator together with how the run ended.

    ``states`` holds every computed iterate starting with ``initial`` when the
    run was made with ``keep_states=True``; otherwise only the final window.
    """

    initial: State2
    states: tuple[State2, ...]
    outcome: Outcome
    n_iter: int = field(default=0)

    @property
    def last(self) -> State2:
        return self.states[-1]


def _dist(u: tuple[float, float], v: tuple[float, float]) -> float:
    return max(abs(u[0] - v[0]), abs(u[1] - v[1]))


def iterate(
    p: ParamSet,
    s0: State2,
    max_iter: int = DEFAULT_MAX_ITER,
    tol: float = DEFAULT_TOL,
    keep_states: bool = True,
) -> Trajectory:
    """Iterate the operator from ``s0`` until convergence, a short cycle or ``max_iter``.

    Convergence means ``CONVERGENCE_RUN`` consecutive steps each moving less
    than ``tol`` in the sup norm; the reported limit is the last iterate and
    ``steps`` is the index at which that quiet run began. A cycle of period
    2..``CYCLE_WINDOW`` is reported when the current state matches one of the
    recent states to ``CYCLE_TOL`` while still moving appreciably per step.

    Parameters
    ----------
    p : ParamSet
    s0 : State2
    max_iter : int
        Maximum number of operator applications, at least 1.
    tol : float
        Step-size threshold for convergence, positive.
    keep_states : bool
        Store every iterate. Turn off for large sweeps.
    """
    if int(max_iter) != max_iter or max_iter < 1:
        raise ValueError(f"max_iter must be a positive integer, got {max_iter!r}")
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol!r}")

    a, b, alpha, beta = p.astuple()
    cx, cy = b - a, beta - alpha
    x, y = s0.x, s0.y
    history = [(x, y)] if keep_states else None
    window: deque[tuple[float, float]] = deque([(x, y)], maxlen=CYCLE_WINDOW + 1)
    quiet = 0
    outcome: Outcome | None = None
    n = 0
    while n < max_iter:
        xy = x * y
        nx = _clamp(cx * xy + a * x + (1.0 - b) * y)
        ny = _clamp(cy * xy + alpha * x + (1.0 - beta) * y)
        n += 1
        move = max(abs(nx - x), abs(ny - y))
        x, y = nx, ny
        if history is not None:
            history.append((x, y))
        window.append((x, y))
        if move < tol:
            quiet += 1
            if quiet >= CONVERGENCE_RUN:
                outcome = Converged(State2(x, y), n - CONVERGENCE_RUN)
                break
            continue
        quiet = 0
        recent = list(window)
        for period in range(2, min(CYCLE_WINDOW, len(recent) - 1) + 1):
            drift = _dist(recent[-1], recent[-1 - period])
            if drift < CYCLE_TOL and move >= _CYCLE_MOTION_RATIO * drift:
                orbit = tuple(State2(*s) for s in recent[-period:])
                outcome = Cycle(period, orbit)
                break
        if outcome is not None:
            break
    if outcome is None:
        outcome = MaxIterReached(State2(x, y))
    states = history if history is not None else list(window)
    return Trajectory(s0, tuple(State2(*s) for s in states), outcome, n)
