"""Fixed-point locus, Jacobians, eigenvalues and stability classes."""
from __future__ import annotations

import cmath
import enum
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .core import ParamSet, State2, _clamp, apply, step2

__all__ = [
    "DenominatorVanishes",
    "LocusKind",
    "StabilityClass",
    "FixedPointSet",
    "StabilityReport",
    "HYPERBOLICITY_TOL",
    "CONTINUUM_TOL",
    "DENOM_TOL",
    "WITNESS_TOL",
    "x_tilde",
    "continuum_condition",
    "fixed_point_set",
    "jacobian",
    "eigenvalues",
    "classify",
    "stability_at",
    "corner_eigenvalues_closed_form",
    "continuum_eigenvalues_closed_form",
    "curve_stability_sweep",
    "grid_fixed_points",
]

HYPERBOLICITY_TOL = 1e-9
CONTINUUM_TOL = 1e-12
DENOM_TOL = 1e-12
WITNESS_TOL = 1e-12
_GRID = tuple(i / 10 for i in range(11))


class DenominatorVanishes(ZeroDivisionError):
    pass


class LocusKind(str, enum.Enum):
    ISOLATED_PAIR = "IsolatedPair"
    CURVE_CONTINUUM = "CurveContinuum"
    SEGMENT_X0 = "SegmentX0"
    CURVE_AB1 = "CurveAB1"
    SEGMENT_Y = "SegmentY"


class StabilityClass(str, enum.Enum):
    ATTRACTING = "Attracting"
    REPELLING = "Repelling"
    SADDLE = "Saddle"
    NON_HYPERBOLIC = "NonHyperbolic"


@dataclass(frozen=True)
class FixedPointSet:
    """Description of the whole fixed-point locus of one operator.

    ``curve`` maps a free coordinate in [0, 1] to a point of the main
    one-parameter family, when there is one. ``info`` carries flags such as
    ``every_point_fixed``, ``period_two``, extra fixed segments and grid
    values skipped because a denominator vanished.
    """

    kind: LocusKind
    witnesses: tuple[State2, ...]
    curve: Optional[Callable[[float], State2]] = field(default=None, compare=False)
    info: dict = field(default_factory=dict, compare=False)

    def __contains__(self, s) -> bool:
        return any(w == s for w in self.witnesses)


@dataclass(frozen=True)
class StabilityReport:
    point: State2
    jacobian: np.ndarray = field(compare=False)
    eigenvalues: tuple[complex, complex]
    magnitudes: tuple[float, float]
    stability: StabilityClass
    info: dict = field(default_factory=dict, compare=False)


def x_tilde(p: ParamSet, y: float) -> float:
    """First coordinate of the continuum fixed point with second coordinate ``y``."""
    denom = 1.0 + (p.a - p.b) * y - p.a
    if abs(denom) < DENOM_TOL:
        raise DenominatorVanishes(f"1 + (a - b) y - a = {denom!r} at y={y!r}")
    # denom = (1-a)(1-y) + (1-b)y bounds the numerator, so only rounding can leave [0, 1]
    return _clamp((1.0 - p.b) * y / denom)


def continuum_condition(p: ParamSet) -> bool:
    return abs(p.alpha * (1.0 - p.b) - p.beta * (1.0 - p.a)) < CONTINUUM_TOL


def _residual(p: ParamSet, s: State2) -> float:
    nx, ny = apply(p, s.x, s.y)
    return max(abs(nx - s.x), abs(ny - s.y))


def _verified(p: ParamSet, points) -> tuple[State2, ...]:
    out = []
    for x, y in points:
        s = State2(min(max(x, 0.0), 1.0), min(max(y, 0.0), 1.0))
        r = _residual(p, s)
        if r >= WITNESS_TOL:
            raise AssertionError(f"witness {s} has residual {r:.3e}")
        if s not in out:
            out.append(s)
    return tuple(out)


def _with_corners(points):
    return [(0.0, 0.0), *points, (1.0, 1.0)]


def _ab1_curve(p: ParamSet) -> tuple[Callable[[float], float], str]:
    """Fixed curve for a = b = 1, choosing the sign of the denominator that works.

    Two forms of this curve circulate, differing in the sign in front of
    beta; the one with a vanishing residual on an interior probe is kept.
    """
    def plus(x):
        return p.alpha * x / ((p.alpha - p.beta) * x + p.beta)

    def minus(x):
        return p.alpha * x / ((p.alpha - p.beta) * x - p.beta)

    for label, g in (("+beta", plus), ("-beta", minus)):
        ok = True
        for x in (0.25, 0.5, 0.75):
            try:
                y = g(x)
            except ZeroDivisionError:
                ok = False
                break
            if not 0.0 <= y <= 1.0 or _residual(p, State2(x, y)) >= WITNESS_TOL:
                ok = False
                break
        if ok:
            return g, label
    raise AssertionError(f"no variant of the a=b=1 curve is fixed for {p}")


def fixed_point_set(p: ParamSet) -> FixedPointSet:
    """Enumerate the fixed-point locus.

    Branches are tried in a fixed order because several of them overlap:
    identity, involution, ``a=1, alpha=0``, ``a=b=1``, the continuum
    condition, and finally the generic isolated pair ``{(0,0), (1,1)}``.
    Every returned witness has been checked to be fixed to ``WITNESS_TOL``.
    """
    a, b, alpha, beta = p.astuple()

    if (a, b, alpha, beta) == (1.0, 1.0, 0.0, 0.0):
        pts = [(x, y) for y in _GRID for x in _GRID]
        return FixedPointSet(LocusKind.CURVE_CONTINUUM, _verified(p, pts),
                             curve=lambda y: State2(y, y),
                             info={"every_point_fixed": True})

    if (a, b, alpha, beta) == (0.0, 0.0, 1.0, 1.0):
        # the swap map: the diagonal is fixed, everything else has period 2
        pts = _with_corners((y, y) for y in _GRID)
        return FixedPointSet(LocusKind.CURVE_CONTINUUM, _verified(p, pts),
                             curve=lambda y: State2(y, y),
                             info={"period_two": True})

    if a == 1.0 and alpha == 0.0:
        # x' - x = (1-b) y (1-x) and y' - y = beta y (x-1): the line x=1 is fixed as well
        pts = [(x, 0.0) for x in _GRID] + [(1.0, y) for y in _GRID]
        info = {"segments": ["y=0", "x=1"]}
        return FixedPointSet(LocusKind.SEGMENT_X0, _verified(p, _with_corners(pts)),
                             curve=lambda x: State2(x, 0.0), info=info)

    if a == 1.0 and b == 1.0:
        if beta == 0.0:
            # alpha > 0 here: y (alpha x) = alpha x, so x = 0 is free and y = 1 otherwise
            pts = [(0.0, y) for y in _GRID] + [(x, 1.0) for x in _GRID]
            return FixedPointSet(LocusKind.SEGMENT_Y, _verified(p, _with_corners(pts)),
                                 curve=lambda y: State2(0.0, y),
                                 info={"segments": ["x=0", "y=1"]})
        g, label = _ab1_curve(p)
        pts = [(x, g(x)) for x in _GRID]
        return FixedPointSet(LocusKind.CURVE_AB1, _verified(p, _with_corners(pts)),
                             curve=lambda x: State2(x, g(x)),
                             info={"curve_sign": label})

    if continuum_condition(p):
        pts, skipped = [], []
        for y in _GRID:
            try:
                pts.append((x_tilde(p, y), y))
            except DenominatorVanishes:
                skipped.append(y)
        info = {"skipped_y": skipped}
        if skipped:
            # only y=1 with b=1 reaches here; the numerator vanishes too and x is free
            extra = [(x, y) for y in skipped for x in _GRID
                     if _residual(p, State2(x, y)) < WITNESS_TOL]
            if extra:
                pts += extra
                info["segments"] = [f"y={y!r}" for y in skipped]

        def curve(y: float) -> State2:
            return State2(x_tilde(p, y), y)

        return FixedPointSet(LocusKind.CURVE_CONTINUUM, _verified(p, _with_corners(pts)),
                             curve=curve, info=info)

    return FixedPointSet(LocusKind.ISOLATED_PAIR, _verified(p, [(0.0, 0.0), (1.0, 1.0)]))


def jacobian(p: ParamSet, s: State2) -> np.ndarray:
    a, b, alpha, beta = p.astuple()
    x, y = s.x, s.y
    return np.array([
        [(b - a) * y + a, (b - a) * x + (1.0 - b)],
        [(beta - alpha) * y + alpha, (beta - alpha) * x + (1.0 - beta)],
    ])


def _quadratic_roots(tr: float, det: float) -> tuple[complex, complex]:
    disc = tr * tr - 4.0 * det
    if disc >= 0.0:
        sq = math.sqrt(disc)
        big = 0.5 * (tr + math.copysign(sq, tr))
        small = det / big if big != 0.0 else 0.0
        roots = (complex(big), complex(small))
    else:
        im = 0.5 * math.sqrt(-disc)
        roots = (complex(0.5 * tr, im), complex(0.5 * tr, -im))
    return tuple(sorted(roots, key=lambda z: (-abs(z), -z.real, -z.imag)))


def eigenvalues(J) -> tuple[complex, complex]:
    """Eigenvalues of a real 2x2 matrix from its trace and determinant.

    The larger root comes from the non-cancelling branch of the quadratic
    formula and the other one is ``det / larger``. Sorted by descending
    magnitude, then descending real part.
    """
    J = np.asarray(J, dtype=float)
    tr = float(J[0, 0] + J[1, 1])
    det = float(J[0, 0] * J[1, 1] - J[0, 1] * J[1, 0])
    return _quadratic_roots(tr, det)


def classify(magnitudes, h: float = HYPERBOLICITY_TOL) -> StabilityClass:
    lo, hi = 1.0 - h, 1.0 + h
    mags = list(magnitudes)
    if any(lo <= m <= hi for m in mags):
        return StabilityClass.NON_HYPERBOLIC
    if all(m < lo for m in mags):
        return StabilityClass.ATTRACTING
    if all(m > hi for m in mags):
        return StabilityClass.REPELLING
    return StabilityClass.SADDLE


def corner_eigenvalues_closed_form(p: ParamSet, corner: State2) -> tuple[complex, complex]:
    """Closed-form eigenvalues at ``(0,0)`` or ``(1,1)``, same ordering as :func:`eigenvalues`."""
    a, b, alpha, beta = p.astuple()
    if corner.astuple() == (0.0, 0.0):
        centre, disc = 1 + a - beta, (beta - 1 + a) ** 2 + 4 * alpha * (1 - b)
    elif corner.astuple() == (1.0, 1.0):
        centre, disc = 1 - alpha + b, (alpha + b - 1) ** 2 + 4 * beta * (1 - a)
    else:
        raise ValueError(f"{corner} is not a corner fixed point")
    # disc is a sum of non-negative terms, so the roots are real
    sq = math.sqrt(disc)
    roots = (complex((centre + sq) / 2), complex((centre - sq) / 2))
    return tuple(sorted(roots, key=lambda z: (-abs(z), -z.real, -z.imag)))


def continuum_eigenvalues_closed_form(p: ParamSet, y: float) -> tuple[complex, complex]:
    """Closed-form eigenvalues at ``(x_tilde(y), y)`` on the continuum curve.

    Only used to cross-check the Jacobian route.
    """
    a, b, alpha, beta = p.astuple()
    xt = x_tilde(p, y)
    g1 = (b - a) * (1 - beta) + (alpha - beta) * (1 - b)
    g2 = a * (beta - alpha) + alpha * (a - b)
    centre = (b - a) * y + (beta - alpha) * xt + 1 + a - beta
    disc = ((a - b) * y + (alpha - beta) * xt + beta - a - 1) ** 2 - 4 * (
        g1 * y + g2 * xt + a * (1 - beta) + alpha * (b - 1))
    sq = cmath.sqrt(disc)
    roots = ((centre + sq) / 2, (centre - sq) / 2)
    return tuple(sorted(roots, key=lambda z: (-abs(z), -z.real, -z.imag)))


def _case_iv_closed_form(p: ParamSet, s: State2) -> Optional[tuple[float, float]]:
    a, b, alpha, beta = p.astuple()
    if a == 1.0 and alpha == 0.0 and s.y == 0.0:
        return (1 + (s.x - 1) * beta, 1.0)
    if a == 1.0 and b == 1.0:
        if s.x == 0.0 and beta == 0.0:
            return (1.0, 1.0)
        return (1.0, 1 - beta + (beta - alpha) * s.x)
    return None


def stability_at(p: ParamSet, s: State2) -> StabilityReport:
    """Jacobian, eigenvalues and stability class at a fixed point ``s``.

    Warns (does not fail) if ``s`` is not fixed to 1e-9. On the a=1 loci the
    eigenvalues are compared with their closed forms and the largest
    deviation is stored in ``info['closed_form_error']``.
    """
    r = _residual(p, s)
    if r >= 1e-9:
        warnings.warn(f"{s} is not a fixed point of {p} (residual {r:.3e})",
                      RuntimeWarning, stacklevel=2)
    J = jacobian(p, s)
    lam = eigenvalues(J)
    mags = (abs(lam[0]), abs(lam[1]))
    info = {"residual": r}
    closed = _case_iv_closed_form(p, s)
    if closed is not None:
        want = sorted(closed, key=lambda v: (-abs(v), -v))
        info["closed_form"] = tuple(want)
        info["closed_form_error"] = max(abs(lam[0] - want[0]), abs(lam[1] - want[1]))
    return StabilityReport(s, J, lam, mags, classify(mags), info)


def curve_stability_sweep(p: ParamSet, n: int = 11) -> list[StabilityReport]:
    """Stability reports along the main family of the locus, sampled uniformly."""
    fps = fixed_point_set(p)
    if fps.curve is None:
        return [stability_at(p, w) for w in fps.witnesses]
    reports = []
    for t in np.linspace(0.0, 1.0, n):
        try:
            s = fps.curve(float(t))
        except (ZeroDivisionError, ValueError):
            continue
        reports.append(stability_at(p, s))
    return reports


def grid_fixed_points(p: ParamSet, n: int = 101, tol: float = 1e-9) -> np.ndarray:
    """Points of an ``n x n`` grid on the unit square whose residual is below ``tol``."""
    g = np.linspace(0.0, 1.0, n)
    X, Y = np.meshgrid(g, g, indexing="ij")
    nx, ny = apply(p, X, Y)
    res = np.maximum(np.abs(nx - X), np.abs(ny - Y))
    mask = res < tol
    return np.column_stack([X[mask], Y[mask]])
