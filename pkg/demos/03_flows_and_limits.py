"""Flows of symmetries on windows, the Miura image and the continuous limit."""

import math
from fractions import Fraction as F

import numpy as np

from lskdv import (
    LatticeWindow,
    catalog_get,
    commuting_flow_residual,
    integrate_flow,
    invariance_drift,
    limit_order,
)
from lskdv.battery import FLOW_PARAMS
from lskdv.hierarchy import miura_flow_constant
from lskdv.lattice import U
from lskdv.sampling import generator, random_field, random_onshell_window

p = FLOW_PARAMS  # beta0 < 0: boundary perturbations decay as the window grows
w = random_onshell_window(p, generator(3), (0, 8), (0, 8), U, magnitude=F(1, 5))
ch = lambda name: catalog_get(name, p).characteristic

# %% symmetries keep a solution on-shell; G0n does not
for name in ("S1n", "MIXED", "G0n"):
    print(f"{name:6s} drift after eps=0.1: {invariance_drift(p, ch(name), w, 0.1, 1e-3):.2e}")

# %% RK4: halving h divides the drift by about 16
d = [invariance_drift(p, ch("S1n"), w, 0.1, h) for h in (0.02, 0.01)]
print("drift ratio under h-halving:", d[0] / d[1])

# %% commuting and non-commuting pairs
print("S1n vs S2n:", commuting_flow_residual(ch("S1n"), ch("S2n"), w, 0.05, 1e-3, p))
xw = LatticeWindow((0, 0), generator(4).uniform(-1, 1, (5, 5)))
print("X0 vs X1:", commuting_flow_residual(ch("X0"), ch("X1"), xw, 0.1, 1e-3),
      "predicted", 0.1 * (math.exp(0.1) - 1))

# %% the X2 flow is the Mobius map x / (1 - eps x)
out = integrate_flow(ch("X2"), xw, 0.1, 1e-3)
print("X2 vs Mobius:", np.max(np.abs(out.values - xw.values / (1 - 0.1 * xw.values))))

# %% Miura image of the S1n flow: d a/d eps over a_k (a_{k+1} - a_{k-1})
pm = catalog_get("S1n").params
ratios = {miura_flow_constant(pm, random_field(generator(s), (-3, 4), (0, 1), U), 0, 0)
          for s in range(5)}
print("Miura flow constant(s):", ratios)

# %% the quad equation along sampled differential-difference solutions
for seed in ("linear", "sine", "tanh"):
    rep = limit_order(1.0, (0.1, 0.05, 0.025), seed)
    print(f"{seed:6s} residuals {['%.2e' % r for r in rep.residuals]} orders {rep.orders}")
