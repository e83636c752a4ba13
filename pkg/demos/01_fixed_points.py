"""
Fixed points and their stability
================================

Every operator in the family fixes (0, 0) and (1, 1). Depending on the
parameters there may also be a whole curve or segment of fixed points.
"""

# %%
# The generic case: only the two corners are fixed.
from volterra_qso import ParamSet, State2, fixed_point_set, stability_at

p = ParamSet(0.487, 0.329, 0.0017, 0.0675)
fps = fixed_point_set(p)
print(fps.kind.value, [w.astuple() for w in fps.witnesses])

for corner in (State2(0, 0), State2(1, 1)):
    rep = stability_at(p, corner)
    print(corner.astuple(), [round(m, 4) for m in rep.magnitudes], rep.stability.value)

# %%
# When alpha (1 - b) = beta (1 - a) there is a continuum of fixed points.
# Here a = b and alpha = beta, so the curve is the diagonal.
q = ParamSet(0.5, 0.5, 0.2, 0.2)
fps = fixed_point_set(q)
print(fps.kind.value, len(fps.witnesses), "witnesses")

# %%
# A less symmetric continuum: pick a, b, alpha and solve for beta.
a, b, alpha = 0.3, 0.6, 0.5
r = ParamSet(a, b, alpha, alpha * (1 - b) / (1 - a))
for w in fixed_point_set(r).witnesses:
    rep = stability_at(r, w)
    print(f"({w.x:.3f}, {w.y:.3f})  |lambda| = ({rep.magnitudes[0]:.3f}, {rep.magnitudes[1]:.3f})"
          f"  {rep.stability.value}")

# %%
# The published example table, recomputed. The (0,0) column agrees except
# for a misplaced decimal in the last row; the (1,1) column does not match
# the Jacobian at (1,1) and is flagged.
from volterra_qso.cli import render_paper_table

print(render_paper_table())
