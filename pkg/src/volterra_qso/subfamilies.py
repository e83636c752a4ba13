"""The regular subfamilies: detection, closed-form limits and their checks.

Five parameter subfamilies have every trajectory converging to a fixed
point, with limits available in closed form:

* ``Linear``      a = b, alpha = beta: a linear map fixing the diagonal
* ``YInvariant``  alpha = beta = 0, a != b: y is frozen, x is affine in itself
* ``XInvariant``  a = b = 1, alpha != beta: the mirror image of the above
* ``Corner``      b = 1, alpha = 0: both coordinates shrink towards (0, 0)
* ``Diagonal``    a = alpha, b = beta: one step lands on the diagonal, where
  the map is conjugate to a logistic map
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .core import (
    DEFAULT_MAX_ITER,
    DEFAULT_TOL,
    Converged,
    Cycle,
    MaxIterReached,
    ParamSet,
    State2,
    Trajectory,
    apply,
    iterate,
)

__all__ = [
    "HypothesisViolated",
    "DegenerateDenominator",
    "DegenerateConjugacy",
    "Subfamily",
    "SubfamilyTag",
    "ClosedFormLimit",
    "detect_subfamily",
    "linear_limit",
    "linear_aux_sequences",
    "lyapunov_check",
    "y_invariant_limit",
    "y_invariant_iterate_formula",
    "x_invariant_limit",
    "corner_limit",
    "corner_monotone",
    "diagonal_restriction",
    "conjugacy_map",
    "logistic",
    "conjugacy_defect",
    "diagonal_limit",
    "closed_form_limit",
    "sample_params",
    "sample_start",
    "regularity_sweep",
    "REGULAR_FAMILIES",
]


class HypothesisViolated(ValueError):
    """The parameters or the initial point fall outside a result's hypotheses."""


class DegenerateDenominator(HypothesisViolated, ZeroDivisionError):
    pass


class DegenerateConjugacy(HypothesisViolated, ZeroDivisionError):
    pass


class Subfamily(str, enum.Enum):
    IDENTITY = "Identity"
    INVOLUTION = "Involution"
    LINEAR = "Linear"
    Y_INVARIANT = "YInvariant"
    X_INVARIANT = "XInvariant"
    CORNER = "Corner"
    DIAGONAL = "Diagonal"
    GENERAL = "General"


REGULAR_FAMILIES = (
    Subfamily.LINEAR,
    Subfamily.Y_INVARIANT,
    Subfamily.X_INVARIANT,
    Subfamily.CORNER,
    Subfamily.DIAGONAL,
)


@dataclass(frozen=True)
class SubfamilyTag:
    tag: Subfamily
    parameters: ParamSet


@dataclass(frozen=True)
class ClosedFormLimit:
    limit: State2
    formula_id: str
    valid: bool = True


def _unit(v: float) -> float:
    # closed forms can overshoot [0, 1] by an ulp
    return min(max(float(v), 0.0), 1.0)


def detect_subfamily(p: ParamSet) -> SubfamilyTag:
    """Most specific subfamily containing ``p``.

    Parameters are compared with exact float equality: an operator that is
    merely close to a subfamily is ``General``. Overlaps are resolved as
    Identity > Involution > Corner > Linear > YInvariant > XInvariant >
    Diagonal.
    """
    a, b, alpha, beta = p.astuple()
    if a == b == 1.0 and alpha == beta == 0.0:
        tag = Subfamily.IDENTITY
    elif a == b == 0.0 and alpha == beta == 1.0:
        tag = Subfamily.INVOLUTION
    elif b == 1.0 and alpha == 0.0:
        tag = Subfamily.CORNER
    elif a == b and alpha == beta:
        tag = Subfamily.LINEAR
    elif alpha == beta == 0.0:
        tag = Subfamily.Y_INVARIANT
    elif a == b == 1.0:
        tag = Subfamily.X_INVARIANT
    elif a == alpha and b == beta:
        tag = Subfamily.DIAGONAL
    else:
        tag = Subfamily.GENERAL
    return SubfamilyTag(tag, p)


def _require_linear(p: ParamSet):
    if not (p.a == p.b and p.alpha == p.beta):
        raise HypothesisViolated(f"{p} does not have a=b and alpha=beta")
    if p.a == 1.0 and p.alpha == 0.0:
        raise DegenerateDenominator("a=1, alpha=0 is the identity operator")
    if p.a == 0.0 and p.alpha == 1.0:
        raise HypothesisViolated("a=0, alpha=1 is the involution; trajectories have period 2")


def linear_limit(p: ParamSet, s0: State2) -> ClosedFormLimit:
    """Limit of the linear operator: a fixed weighted mean of ``x0`` and ``y0``."""
    _require_linear(p)
    a, alpha = p.a, p.alpha
    w = 1.0 - a + alpha
    v = _unit((alpha * s0.x + (1.0 - a) * s0.y) / w)
    return ClosedFormLimit(State2(v, v), "linear-weighted-mean")


def linear_aux_sequences(p: ParamSet, s0: State2, n: int) -> tuple[float, float]:
    """Closed-form difference ``x_n - y_n`` and sum ``x_n + y_n`` for the linear operator.

    The difference decays geometrically with ratio ``a - alpha``; the sum solves
    a two-step recurrence whose characteristic roots are 1 and ``a - alpha``.
    """
    _require_linear(p)
    a, alpha = p.a, p.alpha
    r = (a - alpha) ** n
    w = 1.0 - a + alpha
    xi = r * (s0.x - s0.y)
    eta = ((2 * alpha + (1 - a - alpha) * r) * s0.x
           + (2 * (1 - a) - (1 - a - alpha) * r) * s0.y) / w
    return xi, eta


def lyapunov_check(p: ParamSet, trajectory: Union[Trajectory, Sequence[State2]],
                   slack: float = 1e-14) -> bool:
    """Check the difference/sum Lyapunov functions along a linear trajectory.

    With ``phi = x - y`` and ``psi = x + y``: ``|phi|`` never grows; below the
    diagonal ``phi`` does not increase and ``psi`` does not decrease, above it
    ``phi`` does not decrease and ``psi`` does not increase. ``slack`` absorbs
    rounding on the diagonal.
    """
    if not (p.a == p.b and p.alpha == p.beta) or p.a == p.alpha:
        raise HypothesisViolated(f"{p} is not linear with a != alpha")
    states = trajectory.states if isinstance(trajectory, Trajectory) else trajectory
    for s, t in zip(states, states[1:]):
        phi, psi = s.x - s.y, s.x + s.y
        phi1, psi1 = t.x - t.y, t.x + t.y
        if abs(phi1) > abs(phi) + slack:
            return False
        if phi > 0 and (phi1 > phi + slack or psi1 < psi - slack):
            return False
        if phi < 0 and (phi1 < phi - slack or psi1 > psi + slack):
            return False
        if phi == 0 and (abs(phi1) > slack or abs(psi1 - psi) > slack):
            return False
    return True


def _y_ratio(p: ParamSet, y0: float) -> float:
    return (p.b - p.a) * y0 + p.a


def y_invariant_limit(p: ParamSet, s0: State2) -> ClosedFormLimit:
    """Limit when the male frequency is frozen (``alpha = beta = 0``, ``a != b``)."""
    if not (p.alpha == p.beta == 0.0 and p.a != p.b):
        raise HypothesisViolated(f"{p} does not have alpha=beta=0, a!=b")
    r = _y_ratio(p, s0.y)
    if abs(r) >= 1.0:
        raise HypothesisViolated(f"ratio (b-a)y0+a = {r!r} is not inside (-1, 1)")
    x = (1.0 - p.b) * s0.y / (1.0 - p.a - (p.b - p.a) * s0.y)
    return ClosedFormLimit(State2(_unit(x), s0.y), "y-invariant-geometric")


def y_invariant_iterate_formula(p: ParamSet, s0: State2, n: int) -> float:
    """``x_n`` in closed form when ``alpha = beta = 0``."""
    if not p.alpha == p.beta == 0.0:
        raise HypothesisViolated(f"{p} does not have alpha=beta=0")
    r = _y_ratio(p, s0.y)
    geometric = float(n) if r == 1.0 else (1.0 - r ** n) / (1.0 - r)
    return r ** n * s0.x + (1.0 - p.b) * s0.y * geometric


def x_invariant_limit(p: ParamSet, s0: State2) -> ClosedFormLimit:
    """Limit when the female frequency is frozen (``a = b = 1``, ``alpha != beta``)."""
    if not (p.a == p.b == 1.0 and p.alpha != p.beta):
        raise HypothesisViolated(f"{p} does not have a=b=1, alpha!=beta")
    r = (p.beta - p.alpha) * s0.x + 1.0 - p.beta
    if abs(r) >= 1.0:
        raise HypothesisViolated(f"ratio (beta-alpha)x0+1-beta = {r!r} is not inside (-1, 1)")
    y = p.alpha * s0.x / (p.beta - (p.beta - p.alpha) * s0.x)
    return ClosedFormLimit(State2(s0.x, _unit(y)), "x-invariant-geometric")


def corner_limit(p: ParamSet, s0: State2) -> State2:
    """Limit for ``b = 1, alpha = 0``.

    Generically (``a < 1``, ``beta > 0``) every start except ``(1, 1)`` goes to
    the origin. When ``beta = 0`` the y coordinate is frozen and when ``a = 1``
    the x coordinate is, so the limit lands on a fixed segment instead.
    """
    if not (p.b == 1.0 and p.alpha == 0.0):
        raise HypothesisViolated(f"{p} does not have b=1, alpha=0")
    if p.a == 1.0 and p.beta == 0.0:
        raise HypothesisViolated("a=1, beta=0 is the identity operator")
    if s0.x == 1.0 and s0.y == 1.0:
        raise HypothesisViolated("(1, 1) is fixed and excluded")
    if p.beta == 0.0:
        # x' = x((1-a) y0 + a); the factor is 1 only on y0 = 1
        return State2(s0.x, 1.0) if s0.y == 1.0 else State2(0.0, s0.y)
    if p.a == 1.0:
        # y' = y(1 - beta (1 - x0))
        return State2(1.0, s0.y) if s0.x == 1.0 else State2(s0.x, 0.0)
    return State2(0.0, 0.0)


def corner_monotone(p: ParamSet, s0: State2, floor: float = 1e-14,
                    max_iter: int = DEFAULT_MAX_ITER) -> bool:
    """Both coordinates strictly decrease until they drop below ``floor``."""
    x, y = s0.x, s0.y
    for _ in range(max_iter):
        if x < floor and y < floor:
            return True
        nx, ny = apply(p, x, y)
        if (x >= floor and not nx < x) or (y >= floor and not ny < y):
            return False
        x, y = nx, ny
    return False


def _require_diagonal(p: ParamSet):
    if not (p.a == p.alpha and p.b == p.beta):
        raise HypothesisViolated(f"{p} does not have a=alpha, b=beta")


def diagonal_restriction(p: ParamSet, x: float) -> float:
    """The operator on the invariant diagonal: ``f(x) = (b - a) x^2 + (1 + a - b) x``."""
    _require_diagonal(p)
    return (p.b - p.a) * x * x + (1.0 + p.a - p.b) * x


def conjugacy_map(p: ParamSet, x: float) -> float:
    """Linear change of variable taking the diagonal map to the logistic map."""
    return (p.a - p.b) / (1.0 + p.a - p.b) * x


def logistic(mu: float, x: float) -> float:
    return mu * x * (1.0 - x)


def conjugacy_defect(p: ParamSet, x: float) -> float:
    """``|phi(f(x)) - F_mu(phi(x))|`` with ``mu = 1 + a - b``; zero up to rounding."""
    _require_diagonal(p)
    if p.a == p.b:
        raise HypothesisViolated("a=b makes the conjugacy identically zero")
    mu = 1.0 + p.a - p.b
    if mu == 0.0:
        raise DegenerateConjugacy("a=0, b=1 gives mu=0; f(x)=x^2")
    return abs(conjugacy_map(p, diagonal_restriction(p, x)) - logistic(mu, conjugacy_map(p, x)))


def diagonal_limit(p: ParamSet, s0: State2) -> State2:
    """Limit for ``a = alpha, b = beta`` with ``a != b``.

    For ``a < b`` the logistic parameter ``mu = 1 + a - b`` is at most 1 and
    everything but ``(1, 1)`` goes to the origin; for ``a > b`` it lies in
    (1, 2] and everything but ``(0, 0)`` goes to ``(1, 1)``.
    """
    _require_diagonal(p)
    if p.a == p.b:
        raise HypothesisViolated("a=b is handled by the linear subfamily")
    if p.a < p.b:
        if s0.astuple() == (1.0, 1.0):
            raise HypothesisViolated("(1, 1) is fixed and excluded")
        return State2(0.0, 0.0)
    if s0.astuple() == (0.0, 0.0):
        raise HypothesisViolated("(0, 0) is fixed and excluded")
    return State2(1.0, 1.0)


def closed_form_limit(p: ParamSet, s0: State2) -> Optional[ClosedFormLimit]:
    """Closed-form limit of the trajectory of ``s0`` if ``p`` is in a regular subfamily.

    Returns ``None`` for general operators and for the involution, whose
    off-diagonal trajectories have period 2. A result with ``valid=False``
    means the start sits outside the hypotheses of the formula.
    """
    tag = detect_subfamily(p).tag
    try:
        if tag is Subfamily.IDENTITY:
            return ClosedFormLimit(s0, "identity")
        if tag is Subfamily.LINEAR:
            return linear_limit(p, s0)
        if tag is Subfamily.Y_INVARIANT:
            return y_invariant_limit(p, s0)
        if tag is Subfamily.X_INVARIANT:
            return x_invariant_limit(p, s0)
        if tag is Subfamily.CORNER:
            if s0.astuple() == (1.0, 1.0):
                return ClosedFormLimit(s0, "fixed-corner")
            return ClosedFormLimit(corner_limit(p, s0), "corner-origin")
        if tag is Subfamily.DIAGONAL:
            if s0.astuple() in ((0.0, 0.0), (1.0, 1.0)):
                return ClosedFormLimit(s0, "fixed-corner")
            return ClosedFormLimit(diagonal_limit(p, s0), "diagonal-logistic")
    except HypothesisViolated:
        return ClosedFormLimit(s0, tag.value.lower(), valid=False)
    return None


def sample_params(tag: Subfamily, rng: np.random.Generator) -> ParamSet:
    """Random non-degenerate member of one of the regular subfamilies."""
    while True:
        u, v = (float(t) for t in rng.uniform(0.0, 1.0, 2))
        if tag is Subfamily.LINEAR:
            p = ParamSet(u, u, v, v)
        elif tag is Subfamily.Y_INVARIANT:
            p = ParamSet(u, v, 0.0, 0.0)
        elif tag is Subfamily.X_INVARIANT:
            p = ParamSet(1.0, 1.0, u, v)
        elif tag is Subfamily.CORNER:
            p = ParamSet(u, 1.0, 0.0, v)
        elif tag is Subfamily.DIAGONAL:
            p = ParamSet(u, v, u, v)
        else:
            raise ValueError(f"no sampler for {tag}")
        if detect_subfamily(p).tag is tag:
            return p


def sample_start(rng: np.random.Generator) -> State2:
    x, y = rng.uniform(0.0, 1.0, 2)
    return State2(float(x), float(y))


def regularity_sweep(p: ParamSet, starts: Iterable[State2],
                     max_iter: int = DEFAULT_MAX_ITER, tol: float = DEFAULT_TOL) -> dict:
    """Iterate from each start and count outcomes by kind."""
    counts = {Converged.name: 0, Cycle.name: 0, MaxIterReached.name: 0}
    for s0 in starts:
        traj = iterate(p, s0, max_iter=max_iter, tol=tol, keep_states=False)
        counts[traj.outcome.name] += 1
    return counts
