"""Published example parameter sets with their printed eigenvalue magnitudes.

The printed ``(1,1)`` magnitudes do not agree with the Jacobian at ``(1,1)``
for several rows; ``table_rows`` recomputes everything and reports the
differences rather than trusting either column.
"""
from __future__ import annotations

from .core import ParamSet, State2
from .fixed_points import stability_at

# (a, b, alpha, beta), |lambda| at (0,0), |lambda| at (1,1), printed types
PUBLISHED_TABLE = (
    ((0.67, 0.97, 0.896, 0.908), (0.713, 0.0487), (0.836, 0.238), ("Attracting", "Attracting")),
    ((0.173, 0.718, 0.027, 0.927), (0.224, 0.022), (1.210, 1.210), ("Attracting", "Repelling")),
    ((0.487, 0.329, 0.0017, 0.0675), (0.935, 0.484), (1.521, 0.193), ("Attracting", "Saddle")),
    ((0.345, 0.6244, 0.829, 0.185), (1.185, 0.025), (0.777, 0.0185), ("Saddle", "Attracting")),
    ((0.422, 0.786, 0.584, 0.024), (1.148, 0.025), (1.422, 0.220), ("Saddle", "Saddle")),
)

PRINTED_PRECISION = 1e-3


def table_rows() -> list[dict]:
    rows = []
    for params, origin_printed, one_printed, types_printed in PUBLISHED_TABLE:
        p = ParamSet(*params)
        r0 = stability_at(p, State2(0.0, 0.0))
        r1 = stability_at(p, State2(1.0, 1.0))
        d0 = tuple(u - v for u, v in zip(r0.magnitudes, origin_printed))
        d1 = tuple(u - v for u, v in zip(r1.magnitudes, one_printed))
        rows.append({
            "params": params,
            "origin": r0.magnitudes,
            "origin_printed": origin_printed,
            "origin_diff": d0,
            "matches_origin": max(abs(d) for d in d0) <= PRINTED_PRECISION,
            "one": r1.magnitudes,
            "one_printed": one_printed,
            "one_diff": d1,
            "matches_one": max(abs(d) for d in d1) <= PRINTED_PRECISION,
            "types": (r0.stability.value, r1.stability.value),
            "types_printed": types_printed,
            "reports": (r0, r1),
        })
    return rows
