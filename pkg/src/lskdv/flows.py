"""Flow integration of characteristics on windows and continuous-limit checks.

Flows are integrated with classical fixed-step RK4 over the whole window. At
every right-hand-side evaluation the current window is padded with on-shell
ghost cells (:func:`~lskdv.lattice.extend_on_shell`), so cells near the edge
see neighbours that solve the quad equation instead of frozen values. The
result is cropped once by the stencil radius.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CoreEmpty, DegenerateParameters, PoleError
from .lattice import QuadParams, LatticeWindow, extend_on_shell, plaquette_residuals

GHOST = "ghost"
FROZEN = "frozen"


@dataclass(frozen=True)
class FlowRun:
    name: str
    h: float
    eps: float
    steps: int
    before: LatticeWindow
    after: LatticeWindow
    drift: float | None

    @property
    def core(self):
        return self.after.n_range, self.after.m_range

    def to_record(self):
        return {
            "name": self.name,
            "h": self.h,
            "eps": self.eps,
            "steps": self.steps,
            "core": [list(self.after.n_range), list(self.after.m_range)],
            "drift": self.drift,
        }


def _step_count(eps, h):
    if h <= 0:
        raise ValueError("step h must be positive")
    steps = max(1, int(round(abs(eps) / h)))
    return steps, eps / steps


def _rhs_factory(char, params, window, boundary):
    rn, rm = char.radius
    n0, m0 = window.origin
    N, M = window.extent
    nn, mm = np.meshgrid(np.arange(n0, n0 + N), np.arange(m0, m0 + M), indexing="ij")
    if (rn or rm) and boundary == GHOST and params is None:
        raise ValueError("ghost boundaries need the quad parameters")

    def rhs(values):
        if rn == 0 and rm == 0:
            return np.asarray(char.func(nn, mm, lambda dn, dm: values), dtype=float) + 0 * values
        if boundary == GHOST:
            ext = extend_on_shell(params, LatticeWindow((n0, m0), values, window.picture), rn, rm)
            v = ext.values

            def u(dn, dm):
                return v[rn + dn : rn + dn + N, rm + dm : rm + dm + M]

            return np.asarray(char.func(nn, mm, u), dtype=float)
        # frozen: only cells whose whole stencil lies inside move
        out = np.zeros_like(values)
        core = values[rn : N - rn, rm : M - rm]
        if core.size == 0:
            return out

        def u(dn, dm):
            return values[rn + dn : N - rn + dn, rm + dm : M - rm + dm]

        out[rn : N - rn, rm : M - rm] = char.func(
            nn[rn : N - rn, rm : M - rm], mm[rn : N - rn, rm : M - rm], u
        )
        return out

    return rhs


def integrate_flow(char, window, eps, h, params=None, boundary=GHOST):
    """RK4 solution of ``du/deps = F[u]`` at every site; returns the eroded core."""
    return flow_run(char, window, eps, h, params, boundary).after


def flow_run(char, window, eps, h, params=None, boundary=GHOST, measure=False):
    if char.picture != window.picture:
        raise ValueError(f"{char.name} lives in the {char.picture} picture, window in "
                         f"{window.picture}")
    rn, rm = char.radius
    N, M = window.extent
    if N - 2 * rn < 1 or M - 2 * rm < 1:
        raise CoreEmpty(f"{N}x{M} window leaves no core for stencil radius {(rn, rm)}")
    fparams = params.to_float() if params is not None else None
    w = window.to_float()
    rhs = _rhs_factory(char, fparams, w, boundary)
    steps, dt = _step_count(eps, h)
    y = np.array(w.values, dtype=float)
    for k in range(steps):
        try:
            k1 = rhs(y)
            k2 = rhs(y + 0.5 * dt * k1)
            k3 = rhs(y + 0.5 * dt * k2)
            k4 = rhs(y + dt * k3)
        except PoleError as exc:
            raise PoleError(exc.what, where=f"step {k} of {char.name}") from None
        y = y + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    n0, m0 = w.origin
    out = LatticeWindow(w.origin, y, w.picture).crop(
        (n0 + rn, n0 + N - rn), (m0 + rm, m0 + M - rm)
    )
    drift = None
    if measure:
        drift = max_residual(fparams, out)
    return FlowRun(char.name, float(h), float(eps), steps, w, out, drift)


def max_residual(params, window):
    r = plaquette_residuals(params, window)
    return float(np.max(np.abs(np.asarray(r, dtype=float)))) if r.size else 0.0


def invariance_drift(params, char, window, eps, h, boundary=GHOST):
    """Max |Q| over the core plaquettes after flowing an on-shell window."""
    return flow_run(char, window, eps, h, params, boundary, measure=True).drift


def commuting_flow_residual(char1, char2, window, eps, h, params=None, boundary=GHOST, halo=4):
    """Max-norm of ``flow1(flow2(w)) - flow2(flow1(w))`` on the doubly-eroded core.

    With quad parameters and a nonzero ``halo`` the window is first padded
    by ``halo`` on-shell cells along every axis a stencil reaches, so the
    reported core sits away from the truncation edge of the flowed region.
    """
    rn = max(char1.radius[0], char2.radius[0])
    rm = max(char1.radius[1], char2.radius[1])
    r1, r2 = char1.radius, char2.radius
    target_n = (window.n_range[0] + r1[0] + r2[0], window.n_range[1] - r1[0] - r2[0])
    target_m = (window.m_range[0] + r1[1] + r2[1], window.m_range[1] - r1[1] - r2[1])
    if target_n[1] <= target_n[0] or target_m[1] <= target_m[0]:
        raise CoreEmpty("flows leave no common core")
    work = window.to_float()
    if params is not None and halo and (rn or rm):
        work = extend_on_shell(params.to_float(), work, halo if rn else 0, halo if rm else 0)
    a = integrate_flow(char1, integrate_flow(char2, work, eps, h, params, boundary),
                       eps, h, params, boundary)
    b = integrate_flow(char2, integrate_flow(char1, work, eps, h, params, boundary),
                       eps, h, params, boundary)
    diff = a.crop(target_n, target_m).values - b.crop(target_n, target_m).values
    return float(np.max(np.abs(diff)))


# -- the differential-difference equation and the continuous limit ---------


def semi_discrete_rhs(p, x):
    """``2 (x[k+1] - x[k])(x[k-1] - x[k]) / (p (x[k-1] - x[k+1]))`` on interior sites."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    lo, mid, hi = x[:-2], x[1:-1], x[2:]
    den = p * (lo - hi)
    if np.any(den == 0):
        k = int(np.argmax(den == 0)) + 1
        raise PoleError("x[k-1] - x[k+1]", where=f"k={k}")
    out[1:-1] = 2 * (hi - mid) * (lo - mid) / den
    return out


def semi_discrete_integrate(p, x0, tau, h, samples=None):
    """RK4 for the differential-difference equation with frozen end sites.

    Returns the profile at ``tau``, or with ``samples`` (a list of step
    indices) the stacked profiles after those many steps.
    """
    steps, dt = _step_count(tau, h)
    y = np.array(x0, dtype=float)
    keep = {} if samples is None else {int(s): None for s in samples}
    if 0 in keep:
        keep[0] = y.copy()
    for k in range(1, steps + 1):
        k1 = semi_discrete_rhs(p, y)
        k2 = semi_discrete_rhs(p, y + 0.5 * dt * k1)
        k3 = semi_discrete_rhs(p, y + 0.5 * dt * k2)
        k4 = semi_discrete_rhs(p, y + dt * k3)
        y = y + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if k in keep:
            keep[k] = y.copy()
    if samples is None:
        return y
    return np.array([keep[int(s)] for s in samples])


SEED_PROFILES = {
    "linear": lambda k: k,
    "sine": lambda k: k + 0.3 * np.sin(0.4 * k),
    "tanh": lambda k: 1.5 * k + np.tanh(0.3 * k),
}


@dataclass(frozen=True)
class LimitReport:
    q: float
    deltas: tuple
    residuals: tuple
    orders: tuple
    degenerate: bool
    seed: str

    @property
    def min_order(self):
        return min(self.orders) if self.orders else float("nan")

    def to_record(self):
        return {
            "q": self.q,
            "seed": self.seed,
            "deltas": list(self.deltas),
            "residuals": list(self.residuals),
            "orders": list(self.orders),
            "degenerate": self.degenerate,
        }


def limit_residual(q, delta, profile, half_width=30, rows=3, substeps=20):
    """Max |Q| of ``x[n, m] = xt[n + m](delta * m)`` built from the
    differential-difference solution with ``p = q + delta``."""
    p = q + delta
    ks = np.arange(-half_width, half_width + 1)
    x0 = np.array([profile(k) for k in ks], dtype=float)
    traj = semi_discrete_integrate(
        p, x0, delta * rows, delta / substeps, samples=[substeps * j for j in range(rows + 1)]
    )
    params = QuadParams(q * q, p * p)
    # plaquettes rooted at (n, m) with n + m within a few sites of the centre
    centre = half_width
    worst = 0.0
    for m in range(rows):
        for n in range(-3 - m, 4 - m):
            k = centre + n + m
            x00, x10 = traj[m][k], traj[m][k + 1]
            x01, x11 = traj[m + 1][k + 1], traj[m + 1][k + 2]
            r = params.alpha1 * (x00 - x01) * (x10 - x11) - params.alpha2 * (x00 - x10) * (
                x01 - x11
            )
            worst = max(worst, abs(float(r)))
    return worst


def limit_order(q_base, deltas, seed="linear", **kwargs):
    """Empirical order of the quad residual of sampled semi-discrete solutions.

    ``orders[i] = log2(res[i] / res[i+1]) / log2(delta[i] / delta[i+1])``.
    A zero delta makes alpha1 == alpha2 and is flagged as degenerate.
    """
    profile = SEED_PROFILES[seed] if isinstance(seed, str) else seed
    name = seed if isinstance(seed, str) else getattr(seed, "__name__", "custom")
    deltas = tuple(float(d) for d in deltas)
    if any(d == 0 for d in deltas):
        return LimitReport(float(q_base), deltas, (), (), True, name)
    res = tuple(limit_residual(q_base, d, profile, **kwargs) for d in deltas)
    orders = []
    for (d1, r1), (d2, r2) in zip(zip(deltas, res), zip(deltas[1:], res[1:])):
        if r1 == 0 or r2 == 0:
            orders.append(float("inf"))
        else:
            orders.append(math.log(r1 / r2) / math.log(d1 / d2))
    return LimitReport(float(q_base), deltas, res, tuple(orders), False, name)


def require_distinct(q, p):
    if q == p:
        raise DegenerateParameters("p == q gives alpha1 == alpha2")
