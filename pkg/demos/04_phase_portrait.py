"""
Phase portrait of limits
========================

Iterate from a grid of starts and colour each start by where it ends up.
The same records are available from ``volterra-qso portrait`` as CSV or
JSON lines. Plotting needs matplotlib.
"""

import numpy as np

from volterra_qso import ParamSet
from volterra_qso.cli import RunConfig, portrait_records

# a=b=1 freezes x; y tends to alpha x / (beta - (beta - alpha) x)
cfg = RunConfig(ParamSet(1, 1, 0.2, 0.8), grid=(21, 21))
records = portrait_records(cfg)
x0 = np.array([r["x0"] for r in records])
y0 = np.array([r["y0"] for r in records])
ylim = np.array([r["y_lim"] for r in records])
print(f"{len(records)} starts, outcomes: {sorted({r['outcome'] for r in records})}")

# %%
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

fig, ax = plt.subplots(figsize=(4, 4))
sc = ax.scatter(x0, y0, c=ylim, cmap="viridis", s=18)
fig.colorbar(sc, ax=ax, label="limit of y")
ax.set_xlabel("x0")
ax.set_ylabel("y0")
fig.savefig("portrait.png", dpi=120, bbox_inches="tight")
print("wrote portrait.png")
