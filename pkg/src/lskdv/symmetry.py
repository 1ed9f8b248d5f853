"""Evolutionary characteristics, prolongation and the Lie point symmetries.

A :class:`Characteristic` is the right-hand side of a flow ``du/deps = F``.
Its evaluator has the signature ``func(n, m, u)`` where ``u(dn, dm)`` returns
the field at ``(n + dn, m + dm)``. The same evaluator runs on rationals,
floats, dual numbers and numpy arrays (the integrator passes whole shifted
slices with array-valued ``n`` and ``m``), so catalog formulas are written once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .errors import DegenerateParameters
from .lattice import CORNERS, X, quad_function, solve_corner
from .linalg import nullspace, solve_exact
from .numerics import derivative, safe_div, seed
from .sampling import generator, random_rational

__all__ = [
    "Characteristic",
    "point_characteristic",
    "prolong_residual",
    "on_shell_residual",
    "quad_partials_dual",
    "stencil_box",
    "PointSymmetryBasis",
    "point_symmetry_basis",
    "structure_constants",
    "mobius_apply",
    "bracket",
    "linear_combination",
    "partial",
]


@dataclass(frozen=True)
class Characteristic:
    """Evolutionary vector field entry ``F_{n,m}`` on a finite stencil."""

    name: str
    stencil: tuple
    func: Callable = field(repr=False, compare=False)
    params: object = None
    picture: str = X

    def __call__(self, fld, n, m):
        return self.func(n, m, lambda dn, dm: fld[n + dn, m + dm])

    @property
    def radius(self):
        return (
            max(abs(dn) for dn, _ in self.stencil),
            max(abs(dm) for _, dm in self.stencil),
        )


def point_characteristic(coeffs, name=None, params=None):
    """``sum_k coeffs[k] * x**k`` acting at a single site."""
    coeffs = tuple(coeffs)

    def func(n, m, u):
        x = u(0, 0)
        total = 0
        for k, c in enumerate(coeffs):
            if c != 0:
                total = total + c * x**k
        return total

    label = name or "+".join(f"{c}*x^{k}" for k, c in enumerate(coeffs) if c != 0) or "0"
    return Characteristic(label, ((0, 0),), func, params, X)


def partial(func, n, m, u, offset):
    """d func(n, m, u) / d u(offset), by seeding one dual variable."""
    x = seed(u(*offset))

    def seeded(dn, dm):
        return x if (dn, dm) == offset else u(dn, dm)

    return derivative(func(n, m, seeded), x)


def _minkowski(a, b):
    return tuple(sorted({(p[0] + q[0], p[1] + q[1]) for p in a for q in b}))


def bracket(f, g):
    """Evolutionary bracket ``[f, g] = D_f g - D_g f``.

    ``(D_f g)_site = sum_k dg_site/du_{site+k} * f_{site+k}``. The result is a
    new characteristic on the Minkowski sum of the two stencils, evaluated on
    demand (no simplification).
    """
    if f.picture != g.picture:
        raise ValueError("bracket of characteristics in different pictures")
    offsets = tuple(sorted(set(f.stencil) | set(g.stencil)))
    f_st, g_st = set(f.stencil), set(g.stencil)

    def func(n, m, u):
        total = 0
        for k in offsets:
            def shifted(dn, dm, k=k):
                return u(dn + k[0], dm + k[1])

            if k in g_st:
                dg = partial(g.func, n, m, u, k)
                total = total + dg * f.func(n + k[0], m + k[1], shifted)
            if k in f_st:
                df = partial(f.func, n, m, u, k)
                total = total - df * g.func(n + k[0], m + k[1], shifted)
        return total

    return Characteristic(
        f"[{f.name},{g.name}]", _minkowski(f.stencil, g.stencil), func, f.params or g.params,
        f.picture,
    )


def linear_combination(terms, name):
    """Characteristic ``sum c_i * F_i`` for ``terms = [(c_i, F_i), ...]``."""
    pictures = {ch.picture for _, ch in terms}
    if len(pictures) != 1:
        raise ValueError("cannot combine characteristics from different pictures")
    stencil = tuple(sorted(set().union(*(ch.stencil for _, ch in terms))))

    def func(n, m, u):
        total = 0
        for c, ch in terms:
            total = total + c * ch.func(n, m, u)
        return total

    return Characteristic(name, stencil, func, terms[0][1].params, pictures.pop())


def quad_partials_dual(params, vals, picture=X):
    """dQ/d(corner) for the four corners by dual seeding."""
    q = quad_function(picture)
    out = []
    for i in range(4):
        x = seed(vals[i])
        args = list(vals)
        args[i] = x
        out.append(derivative(q(params, *args), x))
    return out


def prolong_residual(char, params, fld, n=0, m=0):
    """``sum_corners F(corner) * dQ/d(corner)`` on the plaquette rooted at (n, m).

    ``fld`` is anything indexable by ``(n, m)`` that covers the stencil of
    ``char`` around all four corners; its ``picture`` attribute (X if absent)
    selects the form of Q.
    """
    picture = getattr(fld, "picture", X)
    corners = [(n + i, m + j) for i, j in CORNERS]
    vals = [fld[c] for c in corners]
    dq = quad_partials_dual(params, vals, picture)
    total = 0
    for c, d in zip(corners, dq):
        total = total + char(fld, *c) * d
    return total


class _Override:
    """Read-through view of a field with one cell replaced."""

    def __init__(self, fld, cell, value):
        self.fld, self.cell, self.value = fld, cell, value
        self.picture = getattr(fld, "picture", X)

    def __getitem__(self, nm):
        return self.value if tuple(nm) == self.cell else self.fld[nm]


def on_shell_residual(char, params, fld, n=0, m=0):
    """Prolonged residual with ``x[n+1, m+1]`` eliminated through Q = 0.

    Any stencil context the characteristic needs beyond the plaquette must
    itself be on-shell (windows from :func:`~lskdv.lattice.evolve_quadrant`).
    """
    picture = getattr(fld, "picture", X)
    x11 = solve_corner(
        params, fld[n, m], fld[n + 1, m], fld[n, m + 1], None, (1, 1), picture, cell=(n, m)
    )
    return prolong_residual(char, params, _Override(fld, (n + 1, m + 1), x11), n, m)


def stencil_box(char):
    """Half-open offset ranges, relative to a plaquette root, that
    :func:`prolong_residual` reads."""
    ns = [i + dn for i, _ in CORNERS for dn, _ in char.stencil]
    ms = [j + dm for _, j in CORNERS for _, dm in char.stencil]
    return (min(ns), max(ns) + 1), (min(ms), max(ms) + 1)


@dataclass
class PointSymmetryBasis:
    """Nullspace of the sampled determining equations."""

    gamma_max: int
    sites: list
    vectors: list  # one dict site -> coefficient tuple per basis vector
    site_independent: bool
    degenerate: bool
    certified: bool
    samples: int

    @property
    def dimension(self):
        return len(self.vectors)

    @property
    def polynomials(self):
        """Site-independent coefficient tuples, or None."""
        if not self.site_independent:
            return None
        first = self.sites[0]
        return [v[first] for v in self.vectors]

    def characteristics(self, params=None):
        if not self.site_independent:
            raise ValueError("basis is site dependent; no global characteristics")
        return [
            point_characteristic(c, name=f"X{i}", params=params)
            for i, c in enumerate(self.polynomials)
        ]


def _random_onshell_plaquette(params, rng, bound):
    while True:
        x00, x10, x01 = (random_rational(rng, bound) for _ in range(3))
        try:
            x11 = solve_corner(params, x00, x10, x01, None)
        except Exception:
            continue
        return [x00, x10, x01, x11]


def point_symmetry_basis(params, gamma_max=2, sites=((0, 0), (1, 0), (0, 1)), seed=0,
                         bound=50, extra=6, verify=8):
    """Polynomial point symmetries ``Phi_{n,m}(x) = sum_k Phi^(k)_{n,m} x^k``.

    Unknowns are the coefficients at every site touched by the plaquettes
    rooted at ``sites``. Each random on-shell plaquette gives one linear
    equation; the exact nullspace is then re-verified at fresh points and
    enlarged sampling is used until verification succeeds. Site independence
    of the result is reported, not assumed.
    """
    rng = generator(seed)
    deg = gamma_max + 1
    cells = sorted({(n + i, m + j) for n, m in sites for i, j in CORNERS})
    col = {(c, k): idx for idx, (c, k) in enumerate((c, k) for c in cells for k in range(deg))}
    ncols = len(col)

    def row_for(root, vals):
        r = [Fraction(0)] * ncols
        dq = quad_partials_dual(params, vals)
        for (i, j), x, d in zip(CORNERS, vals, dq):
            c = (root[0] + i, root[1] + j)
            for k in range(deg):
                r[col[c, k]] += x**k * d
        return r

    rows = []
    per_site = 4 * deg + extra
    while True:
        for root in sites:
            for _ in range(per_site):
                rows.append(row_for(root, _random_onshell_plaquette(params, rng, bound)))
        basis = nullspace(rows, ncols)
        ok = True
        for root in sites:
            for _ in range(verify):
                r = row_for(root, _random_onshell_plaquette(params, rng, bound))
                if any(sum(a * b for a, b in zip(r, v)) != 0 for v in basis):
                    ok = False
                    rows.append(r)
        if ok:
            break
    vectors = [{c: tuple(v[col[c, k]] for k in range(deg)) for c in cells} for v in basis]
    independent = all(len(set(vec.values())) == 1 for vec in vectors)
    return PointSymmetryBasis(
        gamma_max, cells, vectors, independent, params.degenerate, True, len(rows)
    )


def require_nondegenerate(params):
    if params.degenerate:
        raise DegenerateParameters(
            f"alpha1 == alpha2 == {params.alpha1}: the quad equation factorizes "
            "and the point algebra is infinite dimensional"
        )


def structure_constants(basis, samples=None, seed=0, bound=50):
    """Commutator table of point characteristics in their own span.

    Returns ``{(i, j): [c_0, ..., c_{r-1}]}`` with ``[X_i, X_j] = sum c_l X_l``,
    fitted exactly from evaluations at random single-site fields and checked
    at extra points.
    """
    rng = generator(seed)
    r = len(basis)
    npts = samples or (r + 4)
    pts = [{(0, 0): random_rational(rng, bound)} for _ in range(npts)]
    design = [[b(p, 0, 0) for b in basis] for p in pts]
    table = {}
    for i in range(r):
        for j in range(r):
            if i == j:
                table[i, j] = [Fraction(0)] * r
                continue
            br = bracket(basis[i], basis[j])
            rhs = [br(p, 0, 0) for p in pts]
            table[i, j] = solve_exact(design, rhs)
    return table


def mobius_apply(eps0, eps1, eps2, x):
    """Group action ``(eps0 + x) e^eps1 / (1 - eps2 (eps0 + x) e^eps1)``.

    Exact for rational input when ``eps1 == 0``; otherwise evaluated in floats.
    """
    if eps1 == 0:
        y = eps0 + x
    else:
        y = (float(eps0) + float(x)) * math.exp(float(eps1))
        eps2 = float(eps2)
    return safe_div(y, 1 - eps2 * y, "1 - eps2*(eps0 + x)*exp(eps1)", where=x)
