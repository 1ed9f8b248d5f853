"""Point symmetries, the generalized-symmetry catalog and master-symmetry brackets."""

from fractions import Fraction as F

from lskdv import (
    QuadParams,
    catalog_get,
    combine_with_swap,
    master_bracket_constant,
    on_shell_residual,
    point_symmetry_basis,
    structure_constants,
)
from lskdv.hierarchy import onshell_samples
from lskdv.sampling import generator

# %% polynomial point symmetries up to degree 2: the nullspace is {1, x, x^2}
p = QuadParams(F(2), F(1))
basis = point_symmetry_basis(p, 2)
print("dimension", basis.dimension, "site independent", basis.site_independent)
print("polynomial coefficients:", [[str(c) for c in v] for v in basis.polynomials])
table = structure_constants(basis.characteristics(p))
fmt = lambda v: "(" + ", ".join(map(str, v)) + ")"
print("[X0,X1] =", fmt(table[0, 1]), " [X1,X2] =", fmt(table[1, 2]), " [X0,X2] =", fmt(table[0, 2]))

# %% equal alphas: many more solutions, flagged as degenerate
print("alpha1 == alpha2 gives dimension", point_symmetry_basis(QuadParams(F(3), F(3)), 2).dimension)

# %% on-shell residuals of the catalog on random exact solutions
pg = QuadParams.from_alphas(F(4), F(1), F(1))
rng = generator(1)
for name in ("S1n", "S2n", "S1m", "S2m", "MIXED", "G0n", "M1n"):
    ch = catalog_get(name, pg).characteristic
    res = [on_shell_residual(ch, pg, w, n, m) for w, n, m in onshell_samples(pg, rng, ch, 5)]
    print(f"{name:6s} zero residuals: {sum(r == 0 for r in res)}/5")

# %% brackets: M1n raises S1n to 16 S2n; G0n commutes with the isospectral flows
g = lambda name: catalog_get(name, pg)
print("[M1n,S1n] / S2n =", master_bracket_constant(g("M1n"), g("S1n"), g("S2n")).constant)
print("[G0n,S1n] zero:", master_bracket_constant(g("G0n"), g("S1n"), g("S1n")).zero_bracket)

# %% M1n and its n<->m image combine into the mixed symmetry
res = combine_with_swap(g("M1n"))
print("combination a, b =", res.a, res.b, "->", res.entry.name)
