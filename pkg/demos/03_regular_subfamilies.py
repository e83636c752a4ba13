"""
The five regular subfamilies
============================

For each subfamily, compare the closed-form limit with plain iteration.
"""

import numpy as np

from volterra_qso import State2, iterate
from volterra_qso.subfamilies import (
    REGULAR_FAMILIES,
    closed_form_limit,
    conjugacy_defect,
    sample_params,
    sample_start,
)

rng = np.random.default_rng(0)

# %%
for tag in REGULAR_FAMILIES:
    worst = 0.0
    for _ in range(200):
        p = sample_params(tag, rng)
        s0 = sample_start(rng)
        lim = iterate(p, s0, tol=1e-13, keep_states=False).outcome.limit
        cf = closed_form_limit(p, s0).limit
        worst = max(worst, abs(lim.x - cf.x), abs(lim.y - cf.y))
    print(f"{tag.value:11s} max |iterated - closed form| = {worst:.2e}")

# %%
# On the diagonal the operator is a quadratic map, linearly conjugate to
# the logistic map with mu = 1 + a - b.
from volterra_qso import ParamSet

p = ParamSet(0.7, 0.3, 0.7, 0.3)
print("mu =", 1 + p.a - p.b)
print("max conjugacy defect:", max(conjugacy_defect(p, x) for x in np.linspace(0, 1, 1001)))
print("limit from (0.1, 0.9):", iterate(p, State2(0.1, 0.9)).outcome.limit)
