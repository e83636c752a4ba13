"""Command-line front end.

Subcommands ``step``, ``trajectory``, ``fixed-points``, ``portrait`` and
``subfamily`` share the parameter flags ``--a --b --alpha --beta``. Machine
output is JSON lines (default) or CSV with shortest round-trip floats.

Exit status: 0 on success, 2 on usage errors, 1 on internal-consistency
failures.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import (
    DEFAULT_MAX_ITER,
    DEFAULT_TOL,
    ConsistencyError,
    Converged,
    Cycle,
    ParamSet,
    State2,
    iterate,
    step2,
)
from .fixed_points import (
    continuum_condition,
    fixed_point_set,
    stability_at,
)
from .subfamilies import (
    HypothesisViolated,
    Subfamily,
    closed_form_limit,
    conjugacy_defect,
    detect_subfamily,
    lyapunov_check,
    regularity_sweep,
    sample_start,
)
from .table import table_rows

PORTRAIT_FIELDS = ["x0", "y0", "outcome", "x_lim", "y_lim", "steps", "subfamily"]
TRAJECTORY_FIELDS = ["n", "x", "y", "outcome", "period", "steps"]


@dataclass(frozen=True)
class RunConfig:
    params: ParamSet
    initial: Optional[State2] = None
    grid: Optional[tuple[int, int]] = None
    max_iter: int = DEFAULT_MAX_ITER
    tol: float = DEFAULT_TOL
    seed: Optional[int] = None
    format: str = "jsonl"
    output: Optional[str] = None

    def __post_init__(self):
        if self.grid is not None and min(self.grid) < 2:
            raise ValueError("grid sizes must be at least 2")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.format not in ("jsonl", "csv"):
            raise ValueError(f"unknown format {self.format!r}")


def fmt(v: float) -> str:
    """Shortest decimal string that round-trips to the same float."""
    s = repr(float(v))
    return s[:-2] if s.endswith(".0") else s


class Writer:
    """Emit flat records as JSON lines or CSV rows with a fixed header."""

    def __init__(self, stream, fmt_name: str, fields: list[str]):
        self.stream = stream
        self.fmt = fmt_name
        self.fields = fields
        if fmt_name == "csv":
            self._csv = csv.writer(stream, lineterminator="\n")
            self._csv.writerow(fields)

    def write(self, record: dict):
        if self.fmt == "jsonl":
            self.stream.write(json.dumps(record) + "\n")
        else:
            row = []
            for k in self.fields:
                v = record.get(k)
                if v is None:
                    row.append("")
                elif isinstance(v, float):
                    row.append(fmt(v))
                else:
                    row.append(str(v))
            self._csv.writerow(row)


def _outcome_record(traj) -> dict:
    out = traj.outcome
    rec = {"outcome": out.name}
    if isinstance(out, Converged):
        rec.update(steps=out.steps, x=out.limit.x, y=out.limit.y)
    elif isinstance(out, Cycle):
        rec.update(period=out.period, steps=traj.n_iter, x=traj.last.x, y=traj.last.y)
    else:
        rec.update(steps=traj.n_iter, x=out.last.x, y=out.last.y)
    return rec


def portrait_records(cfg: RunConfig) -> list[dict]:
    """One record per start of a uniform grid, row-major from (0, 0)."""
    p = cfg.params
    nx, ny = cfg.grid
    tag = detect_subfamily(p).tag.value
    records = []
    for x0 in np.linspace(0.0, 1.0, nx):
        for y0 in np.linspace(0.0, 1.0, ny):
            s0 = State2(float(x0), float(y0))
            traj = iterate(p, s0, max_iter=cfg.max_iter, tol=cfg.tol, keep_states=False)
            out = traj.outcome
            conv = isinstance(out, Converged)
            records.append({
                "x0": s0.x, "y0": s0.y, "outcome": out.name,
                "x_lim": out.limit.x if conv else None,
                "y_lim": out.limit.y if conv else None,
                "steps": out.steps if conv else traj.n_iter,
                "subfamily": tag,
            })
    return records


def cmd_step(cfg: RunConfig, out) -> int:
    s = step2(cfg.params, cfg.initial)
    out.write(f"{fmt(s.x)} {fmt(s.y)}\n")
    return 0


def cmd_trajectory(cfg: RunConfig, out) -> int:
    traj = iterate(cfg.params, cfg.initial, max_iter=cfg.max_iter, tol=cfg.tol)
    w = Writer(out, cfg.format, TRAJECTORY_FIELDS)
    for n, s in enumerate(traj.states):
        w.write({"n": n, "x": s.x, "y": s.y})
    w.write(_outcome_record(traj))
    return 0


def _stability_record(p: ParamSet, s: State2) -> dict:
    rep = stability_at(p, s)
    return {
        "record": "stability", "x": s.x, "y": s.y,
        "lambda1_re": rep.eigenvalues[0].real, "lambda1_im": rep.eigenvalues[0].imag,
        "lambda2_re": rep.eigenvalues[1].real, "lambda2_im": rep.eigenvalues[1].imag,
        "abs1": rep.magnitudes[0], "abs2": rep.magnitudes[1],
        "class": rep.stability.value,
    }


FIXED_POINT_FIELDS = ["record", "kind", "x", "y", "residual", "lambda1_re", "lambda1_im",
                      "lambda2_re", "lambda2_im", "abs1", "abs2", "class", "info"]


def cmd_fixed_points(cfg: RunConfig, out, paper_table: bool = False) -> int:
    if paper_table:
        out.write(render_paper_table())
        return 0
    p = cfg.params
    fps = fixed_point_set(p)
    w = Writer(out, cfg.format, FIXED_POINT_FIELDS)
    info = {k: v for k, v in fps.info.items()}
    w.write({"record": "locus", "kind": fps.kind.value,
             "info": json.dumps(info, sort_keys=True)})
    for s in fps.witnesses:
        nxt = step2(p, s)
        res = max(abs(nxt.x - s.x), abs(nxt.y - s.y))
        w.write({"record": "witness", "kind": fps.kind.value, "x": s.x, "y": s.y,
                 "residual": res})
    for corner in (State2(0.0, 0.0), State2(1.0, 1.0)):
        w.write(_stability_record(p, corner))
    return 0


def render_paper_table() -> str:
    """Recomputed eigenvalue magnitudes for the published example rows, 3 decimals."""
    lines = ["params | (0,0) recomputed | (0,0) printed | diff | "
             "(1,1) recomputed | (1,1) printed | diff | types recomputed | types printed | flag"]
    for r in table_rows():
        def pair(v):
            return f"({v[0]:.3f}, {v[1]:.3f})"

        def diff(v):
            return f"({v[0]:+.3f}, {v[1]:+.3f})"

        flag = "ok" if r["matches_origin"] and r["matches_one"] else "DISCREPANCY"
        lines.append(
            " | ".join([
                "(" + ", ".join(fmt(v) for v in r["params"]) + ")",
                pair(r["origin"]), pair(r["origin_printed"]), diff(r["origin_diff"]),
                pair(r["one"]), pair(r["one_printed"]), diff(r["one_diff"]),
                f"{r['types'][0]}, {r['types'][1]}",
                f"{r['types_printed'][0]}, {r['types_printed'][1]}",
                flag,
            ]))
    return "\n".join(lines) + "\n"


def cmd_portrait(cfg: RunConfig, out) -> int:
    w = Writer(out, cfg.format, PORTRAIT_FIELDS)
    for rec in portrait_records(cfg):
        w.write(rec)
    return 0


def subfamily_report(cfg: RunConfig) -> dict:
    p = cfg.params
    tag = detect_subfamily(p).tag
    rng = np.random.default_rng(cfg.seed if cfg.seed is not None else 0)
    starts = [cfg.initial] if cfg.initial is not None else []
    starts += [sample_start(rng) for _ in range(20)]
    report: dict = {"subfamily": tag.value, "params": list(p.astuple()),
                    "continuum_condition": continuum_condition(p)}

    limits = []
    for s0 in starts:
        cf = closed_form_limit(p, s0)
        traj = iterate(p, s0, max_iter=cfg.max_iter, tol=cfg.tol, keep_states=False)
        rec = {"x0": s0.x, "y0": s0.y, "outcome": traj.outcome.name}
        if isinstance(traj.outcome, Converged):
            rec["iterated"] = list(traj.outcome.limit.astuple())
        if cf is not None:
            rec.update(formula=cf.formula_id, closed_form=list(cf.limit.astuple()),
                       valid=cf.valid)
            if cf.valid and "iterated" in rec:
                rec["agreement"] = max(abs(u - v) for u, v in zip(rec["iterated"], rec["closed_form"]))
        limits.append(rec)
    report["limits"] = limits

    if tag is Subfamily.LINEAR and p.a != p.alpha:
        report["lyapunov"] = all(lyapunov_check(p, iterate(p, s0, max_iter=200, tol=cfg.tol))
                                 for s0 in starts)
    if tag is Subfamily.DIAGONAL:
        mu = 1.0 + p.a - p.b
        report["mu"] = mu
        try:
            report["conjugacy_defect_max"] = max(conjugacy_defect(p, float(x))
                                                 for x in np.linspace(0.0, 1.0, 1001))
        except HypothesisViolated as exc:
            report["conjugacy_defect_max"] = None
            report["conjugacy_note"] = str(exc)

    counts = regularity_sweep(p, starts, max_iter=cfg.max_iter, tol=cfg.tol)
    report["sweep"] = counts
    if tag is Subfamily.GENERAL:
        verdict = "empirical only"
    elif counts["converged"] == len(starts):
        verdict = "regular"
    elif tag is Subfamily.INVOLUTION:
        verdict = "period-2"
    else:
        verdict = "not regular on sample"
    report["verdict"] = verdict
    return report


def cmd_subfamily(cfg: RunConfig, out) -> int:
    report = subfamily_report(cfg)
    if cfg.format == "jsonl":
        out.write(json.dumps(report) + "\n")
    else:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["key", "value"])
        for k, v in report.items():
            w.writerow([k, fmt(v) if isinstance(v, float) else json.dumps(v)])
    return 0


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    for name in ("a", "b", "alpha", "beta"):
        shared.add_argument(f"--{name}", type=float, default=None)
    shared.add_argument("--x0", type=float)
    shared.add_argument("--y0", type=float)
    shared.add_argument("--nx", type=int)
    shared.add_argument("--ny", type=int)
    shared.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER)
    shared.add_argument("--tol", type=float, default=DEFAULT_TOL)
    shared.add_argument("--seed", type=int)
    shared.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")
    shared.add_argument("--output", metavar="PATH")

    parser = argparse.ArgumentParser(
        prog="volterra-qso",
        description="Dynamics of Volterra quadratic stochastic operators of a two-sex population.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("step", parents=[shared], help="apply the operator once")
    sub.add_parser("trajectory", parents=[shared], help="iterate until an outcome")
    fp = sub.add_parser("fixed-points", parents=[shared], help="fixed-point locus and corner stability")
    fp.add_argument("--paper-table", action="store_true",
                    help="recompute the published example table")
    sub.add_parser("portrait", parents=[shared], help="outcomes over a grid of starts")
    sub.add_parser("subfamily", parents=[shared], help="subfamily analysis")
    return parser


def _config(parser, args) -> RunConfig:
    needs_params = not (args.command == "fixed-points" and args.paper_table)
    if needs_params:
        missing = [n for n in ("a", "b", "alpha", "beta") if getattr(args, n) is None]
        if missing:
            parser.error(f"{args.command} requires --" + ", --".join(missing))
    if args.command in ("step", "trajectory") and (args.x0 is None or args.y0 is None):
        parser.error(f"{args.command} requires --x0 and --y0")
    if args.command == "portrait" and (args.nx is None or args.ny is None):
        parser.error("portrait requires --nx and --ny")
    try:
        params = ParamSet(args.a, args.b, args.alpha, args.beta) if needs_params else ParamSet(0, 0, 0, 0)
        initial = State2(args.x0, args.y0) if args.x0 is not None and args.y0 is not None else None
        grid = (args.nx, args.ny) if args.nx is not None and args.ny is not None else None
        return RunConfig(params, initial, grid, args.max_iter, args.tol, args.seed,
                         args.format, args.output)
    except ValueError as exc:
        parser.error(str(exc))


COMMANDS = {
    "step": cmd_step,
    "trajectory": cmd_trajectory,
    "portrait": cmd_portrait,
    "subfamily": cmd_subfamily,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = _config(parser, args)
    buf = io.StringIO()
    try:
        if args.command == "fixed-points":
            code = cmd_fixed_points(cfg, buf, paper_table=args.paper_table)
        else:
            code = COMMANDS[args.command](cfg, buf)
    except ConsistencyError as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return 1
    if cfg.output:
        with open(cfg.output, "w", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return code


if __name__ == "__main__":
    sys.exit(main())
