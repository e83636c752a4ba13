"""
Trajectories, convergence and cycles
====================================

``iterate`` runs the operator until the step size stays below ``tol`` for
five consecutive steps, until a short cycle repeats, or until ``max_iter``.
"""

from volterra_qso import ParamSet, State2, iterate

# %%
# The swap operator exchanges x and y, so off-diagonal points have period 2.
traj = iterate(ParamSet(0, 0, 1, 1), State2(0.3, 0.7))
print(traj.outcome)

# %%
# A general operator: follow one trajectory to its limit.
p = ParamSet(0.4, 0.9, 0.1, 0.2)
traj = iterate(p, State2(0.8, 0.6))
print(traj.outcome.name, traj.outcome.limit, "after", traj.n_iter, "steps")
for n in (0, 1, 2, 5, 10, 50):
    if n < len(traj.states):
        s = traj.states[n]
        print(f"n={n:3d}  x={s.x:.6f}  y={s.y:.6f}")

# %%
# The same step in the four-coordinate form agrees with the reduced map.
from volterra_qso import lift, project, step2, step4

s = State2(0.8, 0.6)
print(step2(p, s), project(step4(p, lift(s))))
