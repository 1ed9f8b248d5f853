"""Seeded random inputs: rationals, parameter sets and on-shell windows."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .errors import PoleError, SingularCorner
from .lattice import U, X, LatticeWindow, QuadParams, evolve_quadrant, gauge_from_u

DEFAULT_BOUND = 100


def generator(seed):
    """numpy Generator from an int seed, a SeedSequence or an existing Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def spawn(seed, count):
    """Independent child generators of one seed (deterministic)."""
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    return [np.random.default_rng(s) for s in ss.spawn(count)]


def random_rational(rng, bound=DEFAULT_BOUND, nonzero=False):
    """p/q with |p| <= bound and 1 <= q <= bound."""
    while True:
        p = int(rng.integers(-bound, bound + 1))
        if nonzero and p == 0:
            continue
        return Fraction(p, int(rng.integers(1, bound + 1)))


def random_params(rng, bound=12, sign=None):
    """Parameters with rational beta0: alpha1 = s^2, alpha2 = t^2, s != t."""
    while True:
        s = random_rational(rng, bound, nonzero=True)
        t = random_rational(rng, bound, nonzero=True)
        if s * s == t * t:
            continue
        a0 = random_rational(rng, bound, nonzero=True)
        sg = sign if sign is not None else (1 if rng.integers(2) else -1)
        return QuadParams.from_alphas(s * s, t * t, a0, sg)


def random_field(rng, n_range, m_range, picture=U, bound=DEFAULT_BOUND):
    """Window of independent random rationals (generally off-shell)."""
    return LatticeWindow.from_function(
        lambda n, m: random_rational(rng, bound), n_range, m_range, picture
    )


def random_onshell_window(
    params, rng, n_range, m_range, picture=U, bound=DEFAULT_BOUND, magnitude=None, tries=50
):
    """Exactly on-shell rational window grown from random boundary data.

    Boundary data are drawn in the U picture. With ``magnitude`` they are
    small perturbations (at most ``magnitude`` in size) of the constant
    solution, which keeps the window well conditioned for float flows. X
    picture windows without gauge constants use raw random boundary data.
    """
    n0, n1 = n_range
    m0, m1 = m_range
    use_gauge = picture == U or params.has_gauge
    for _ in range(tries):
        if magnitude is None:
            draw = lambda: random_rational(rng, bound)
        else:
            draw = lambda: Fraction(int(rng.integers(-bound, bound + 1)), bound) * magnitude
        row0 = [draw() for _ in range(n1 - n0)]
        col0 = [row0[0]] + [draw() for _ in range(m1 - m0 - 1)]
        try:
            if not use_gauge:
                return evolve_quadrant(params, row0, col0, origin=(n0, m0), picture=X)
            w = evolve_quadrant(params, row0, col0, origin=(n0, m0), picture=U)
            return w if picture == U else gauge_from_u(params, w)
        except (SingularCorner, PoleError):
            continue
    raise SingularCorner("no nonsingular boundary data found", cell=(n0, m0))
