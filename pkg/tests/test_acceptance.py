"""Acceptance gate. Each test carries a ``criterion`` marker; a per-criterion
PASS/FAIL summary is printed at the end of the run (see conftest.py)."""
import time

import numpy as np
import pytest

from volterra_qso.core import Converged, Cycle, MaxIterReached, ParamSet, State2, apply, iterate, step2
from volterra_qso.fixed_points import (
    DenominatorVanishes,
    continuum_condition,
    corner_eigenvalues_closed_form,
    eigenvalues,
    grid_fixed_points,
    jacobian,
    x_tilde,
)
from volterra_qso.subfamilies import (
    REGULAR_FAMILIES,
    Subfamily,
    conjugacy_defect,
    corner_limit,
    diagonal_limit,
    linear_limit,
    sample_params,
    sample_start,
    x_invariant_limit,
    y_invariant_limit,
)
from volterra_qso.table import PUBLISHED_TABLE, table_rows

ORIGIN, ONE = State2(0.0, 0.0), State2(1.0, 1.0)
ORACLE_TOL = 1e-13
AGREE = 1e-8


def criterion(n, text):
    return pytest.mark.criterion(n, text)


def central_difference(p, s, h=1e-6):
    J = np.empty((2, 2))
    for j, (dx, dy) in enumerate(((h, 0.0), (0.0, h))):
        J[:, j] = (np.array(apply(p, s.x + dx, s.y + dy))
                   - np.array(apply(p, s.x - dx, s.y - dy))) / (2 * h)
    return J


def sup(u: State2, v: State2) -> float:
    return max(abs(u.x - v.x), abs(u.y - v.y))


def converge(p, s0, keep_states=False):
    traj = iterate(p, s0, max_iter=1_000_000, tol=ORACLE_TOL, keep_states=keep_states)
    assert isinstance(traj.outcome, Converged), traj.outcome
    return traj


# 1 ---------------------------------------------------------------------------

@criterion(1, "published (0,0) eigenvalue magnitudes reproduced within 0.001")
@pytest.mark.parametrize("row", range(len(PUBLISHED_TABLE)), ids=lambda i: f"row{i + 1}")
def test_table_origin_magnitudes(row):
    params, printed, _, _ = PUBLISHED_TABLE[row]
    mags = [abs(z) for z in eigenvalues(jacobian(ParamSet(*params), ORIGIN))]
    print(f"row {row + 1}: recomputed {mags[0]:.4f}, {mags[1]:.4f}; printed {printed}")
    assert abs(mags[0] - printed[0]) <= 1e-3 and abs(mags[1] - printed[1]) <= 1e-3


# 2 ---------------------------------------------------------------------------

@criterion(2, "(1,1) magnitudes: Jacobian matches finite differences and closed form; discrepancies flagged")
def test_table_one_consistency():
    for r in table_rows():
        p = ParamSet(*r["params"])
        J = jacobian(p, ONE)
        assert np.abs(J - central_difference(p, ONE)).max() < 1e-6
        lam = eigenvalues(J)
        closed = corner_eigenvalues_closed_form(p, ONE)
        assert max(abs(u - v) for u, v in zip(lam, closed)) < 1e-12
        assert r["one"] == tuple(abs(z) for z in lam)
        flagged = not r["matches_one"]
        differs = max(abs(d) for d in r["one_diff"]) > 1e-3
        assert flagged == differs


# 3 ---------------------------------------------------------------------------

def _continuum_params(rng):
    while True:
        a, b, alpha = rng.uniform(0, 1, 3)
        beta = alpha * (1 - b) / (1 - a)
        if beta <= 1.0:
            p = ParamSet(a, b, alpha, beta)
            if continuum_condition(p):
                return p


@criterion(3, "fixed-point locus: corners exact, continuum grid fixed to 1e-12, isolation to 1e-9; < 30 s")
def test_fixed_point_locus_suite():
    start = time.perf_counter()
    rng = np.random.default_rng(3)
    for _ in range(1000):
        p = ParamSet(*rng.uniform(0, 1, 4))
        assert step2(p, ORIGIN) == ORIGIN and step2(p, ONE) == ONE
    for _ in range(1000):
        p = _continuum_params(rng)
        for y in np.linspace(0, 1, 11):
            try:
                s = State2(x_tilde(p, float(y)), float(y))
            except DenominatorVanishes:
                continue
            assert sup(step2(p, s), s) < 1e-12
    n = 0
    while n < 1000:
        p = ParamSet(*rng.uniform(0, 1, 4))
        if continuum_condition(p):
            continue
        pts = grid_fixed_points(p, 101, 1e-9)
        near_corner = np.minimum(np.abs(pts).max(axis=1), np.abs(pts - 1).max(axis=1)) < 1e-6
        assert near_corner.all()
        n += 1
    assert time.perf_counter() - start < 30


# 4 ---------------------------------------------------------------------------

@criterion(4, "linear closed-form limit vs iteration within 1e-8 (500 draws) and spot value 0.6")
def test_linear_closed_form():
    p = ParamSet(0.8, 0.8, 0.3, 0.3)
    lim = converge(p, State2(1.0, 0.0)).outcome.limit
    assert abs(lim.x - 0.6) < AGREE and abs(lim.y - 0.6) < AGREE
    assert sup(linear_limit(p, State2(1.0, 0.0)).limit, State2(0.6, 0.6)) < 1e-15
    rng = np.random.default_rng(4)
    for _ in range(500):
        p = sample_params(Subfamily.LINEAR, rng)
        s0 = sample_start(rng)
        assert sup(converge(p, s0).outcome.limit, linear_limit(p, s0).limit) < AGREE


# 5 ---------------------------------------------------------------------------

@criterion(5, "frozen-coordinate closed forms within 1e-8 (500 draws each), frozen coordinate exact")
def test_frozen_coordinate_closed_forms():
    rng = np.random.default_rng(5)
    for _ in range(500):
        p = sample_params(Subfamily.Y_INVARIANT, rng)
        s0 = sample_start(rng)
        traj = converge(p, s0, keep_states=True)
        assert all(s.y == s0.y for s in traj.states)
        assert sup(traj.outcome.limit, y_invariant_limit(p, s0).limit) < AGREE
    for _ in range(500):
        p = sample_params(Subfamily.X_INVARIANT, rng)
        s0 = sample_start(rng)
        traj = converge(p, s0, keep_states=True)
        assert all(s.x == s0.x for s in traj.states)
        assert sup(traj.outcome.limit, x_invariant_limit(p, s0).limit) < AGREE


# 6 ---------------------------------------------------------------------------

@criterion(6, "corner family: interior starts go to (0,0) with strictly decreasing coordinates; < 60 s")
def test_corner_family():
    start = time.perf_counter()
    rng = np.random.default_rng(6)
    done = 0
    while done < 500:
        p = sample_params(Subfamily.CORNER, rng)
        s0 = sample_start(rng)
        if 0.0 in s0.astuple():
            continue
        done += 1
        traj = converge(p, s0, keep_states=True)
        assert sup(traj.outcome.limit, ORIGIN) < AGREE
        assert corner_limit(p, s0) == ORIGIN
        for s, t in zip(traj.states, traj.states[1:]):
            if s.x >= 1e-14:
                assert t.x < s.x
            if s.y >= 1e-14:
                assert t.y < s.y
    assert time.perf_counter() - start < 60


# 7 ---------------------------------------------------------------------------

@criterion(7, "logistic conjugacy defect < 1e-12 on a 1001-point grid, 100 diagonal draws")
def test_conjugacy():
    rng = np.random.default_rng(7)
    grid = np.linspace(0, 1, 1001)
    done = 0
    while done < 100:
        p = sample_params(Subfamily.DIAGONAL, rng)
        if abs(1 + p.a - p.b) <= 1e-3:
            continue
        assert max(conjugacy_defect(p, float(x)) for x in grid) < 1e-12
        done += 1


# 8 ---------------------------------------------------------------------------

@criterion(8, "diagonal family: a<=b -> (0,0), a>b -> (1,1) (500 each); one-step absorption exact")
def test_diagonal_family():
    rng = np.random.default_rng(8)
    counts = {"low": 0, "high": 0}
    while min(counts.values()) < 500:
        p = sample_params(Subfamily.DIAGONAL, rng)
        key = "low" if p.a <= p.b else "high"
        if counts[key] >= 500:
            continue
        s0 = sample_start(rng)
        if s0 in (ORIGIN, ONE):
            continue
        s1 = step2(p, s0)
        assert s1.x == s1.y
        want = ORIGIN if key == "low" else ONE
        assert diagonal_limit(p, s0) == want
        assert sup(converge(p, s0).outcome.limit, want) < AGREE
        counts[key] += 1


# 9 ---------------------------------------------------------------------------

@criterion(9, "Jacobian vs central differences within 1e-6 at 1000 random points")
def test_jacobian_finite_differences():
    rng = np.random.default_rng(9)
    for _ in range(1000):
        p = ParamSet(*rng.uniform(0, 1, 4))
        s = State2(*rng.uniform(0, 1, 2))
        assert np.abs(jacobian(p, s) - central_difference(p, s)).max() < 1e-6


# 10 --------------------------------------------------------------------------

@criterion(10, "regularity: 1000 seeded trajectories per subfamily all converge; no max-iter outcomes")
@pytest.mark.parametrize("tag", REGULAR_FAMILIES, ids=lambda t: t.value)
def test_regularity(tag):
    rng = np.random.default_rng(10 + REGULAR_FAMILIES.index(tag))
    for _ in range(1000):
        p = sample_params(tag, rng)
        traj = iterate(p, sample_start(rng), keep_states=False)
        assert isinstance(traj.outcome, Converged), (p, traj.outcome)


@criterion(10, "regularity: 1000 seeded trajectories per subfamily all converge; no max-iter outcomes")
def test_regularity_exempt_cases():
    rng = np.random.default_rng(99)
    for _ in range(1000):
        s0 = sample_start(rng)
        out = iterate(ParamSet(1, 1, 0, 0), s0, keep_states=False).outcome
        assert out == Converged(s0, 0)
        out = iterate(ParamSet(0, 0, 1, 1), s0, keep_states=False).outcome
        assert not isinstance(out, MaxIterReached)
        if s0.x != s0.y:
            assert isinstance(out, Cycle) and out.period == 2
