"""Solving plaquettes, growing windows and checking consistency around a cube."""

from fractions import Fraction as F

from lskdv import CubeData, QuadParams, cac_check, eval_quad, solve_corner
from lskdv.lattice import U, factor_degenerate, gauge_from_u, plaquette_residuals
from lskdv.sampling import generator, random_onshell_window

# %% one plaquette, solved exactly for its upper corner
p = QuadParams(F(2), F(1))
x11 = solve_corner(p, F(0), F(1), F(3), None)
print("x11 =", x11, " Q =", eval_quad(p, F(0), F(1), F(3), x11))

# %% a 6x6 window grown from random boundary data is on-shell everywhere
pg = QuadParams.from_alphas(F(4), F(1), F(1))
w = random_onshell_window(pg, generator(0), (0, 6), (0, 6), U)
print("beta0 =", pg.beta0)
res = plaquette_residuals(pg, gauge_from_u(pg, w))
print("max |Q| in the X picture:", max(abs(r) for r in res.flat))

# %% the far corner of a cube comes out the same from all three faces
rep = cac_check(CubeData(F(0), F(1), F(3), F(-2), (F(2), F(1), F(5))))
print("x123 candidates:", [str(c) for c in rep.candidates], "agree:", rep.agree)

# %% equal parameters: Q factorizes into two discrete wave equations
print("Q(0,1,2,3) with alpha=1:", eval_quad(QuadParams(F(1), F(1)), 0, 1, 2, 3),
      "= (x00-x11)(x10-x01) =", factor_degenerate(0, 1, 2, 3))
