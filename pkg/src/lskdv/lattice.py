"""Lattice fields, the lattice Schwarzian KdV quad equation and its solutions.

Two pictures of the dependent variable are supported. In the X picture the
field is ``x[n, m]`` and the quad equation is

    Q = alpha1 (x00 - x01)(x10 - x11) - alpha2 (x00 - x10)(x01 - x11).

In the U picture ``x = u + alpha0*n + beta0*m`` with
``alpha1*beta0**2 == alpha2*alpha0**2``, so that constant ``u`` solves the
shifted equation. Windows are dense 2D arrays indexed by absolute ``(n, m)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import ConstraintViolated, LSKdVError, MixedKindError, SingularCorner
from .numerics import (
    FLOAT,
    RATIONAL,
    as_rational,
    check_kinds,
    exact_sqrt,
    format_scalar,
    kind_of,
    parse_scalar,
)

__all__ = [
    "X",
    "U",
    "CORNERS",
    "QuadParams",
    "LatticeWindow",
    "eval_quad",
    "eval_quad_u",
    "quad_function",
    "quad_partials",
    "solve_corner",
    "evolve_quadrant",
    "gauge_to_u",
    "gauge_from_u",
    "factor_degenerate",
    "plaquette_residuals",
    "extend_on_shell",
]

X = "X"
U = "U"
CORNERS = ((0, 0), (1, 0), (0, 1), (1, 1))

# free-corner coefficient of Q in the X picture, for error messages
_COEFF_TEXT = {
    (0, 0): "alpha1*(x10-x11) - alpha2*(x01-x11)",
    (1, 0): "alpha1*(x00-x01) + alpha2*(x01-x11)",
    (0, 1): "-alpha1*(x10-x11) - alpha2*(x00-x10)",
    (1, 1): "alpha2*(x00-x10) - alpha1*(x00-x01)",
}


@dataclass(frozen=True)
class QuadParams:
    """Constants of one lattice Schwarzian KdV instance.

    ``alpha0``/``beta0`` are only needed in the U picture; build them with
    :meth:`from_alphas` to have the gauge constraint satisfied by construction.
    """

    alpha1: object
    alpha2: object
    alpha0: object = None
    beta0: object = None

    def __post_init__(self):
        if self.alpha1 == 0 or self.alpha2 == 0:
            raise ValueError("alpha1 and alpha2 must be nonzero")
        check_kinds(self.alpha1, self.alpha2, self.alpha0, self.beta0)

    @classmethod
    def from_alphas(cls, alpha1, alpha2, alpha0=1, sign=1, kind=None):
        """Derive ``beta0 = sign*alpha0*sqrt(alpha2/alpha1)``.

        Exact when the ratio is a rational square; otherwise the float kind
        must be requested explicitly.
        """
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if kind is None:
            kind = check_kinds(alpha1, alpha2, alpha0) or RATIONAL
        if kind == FLOAT:
            a1, a2, a0 = float(alpha1), float(alpha2), float(alpha0)
            if a2 / a1 < 0:
                raise ConstraintViolated("alpha2/alpha1 < 0 admits no real beta0")
            return cls(a1, a2, a0, sign * a0 * float(np.sqrt(a2 / a1)))
        a1, a2, a0 = as_rational(alpha1), as_rational(alpha2), as_rational(alpha0)
        root = exact_sqrt(a2 / a1)
        if root is None:
            raise ConstraintViolated(
                f"alpha2/alpha1 = {a2 / a1} is not a rational square; use kind='float'"
            )
        return cls(a1, a2, a0, sign * a0 * root)

    @property
    def degenerate(self):
        return self.alpha1 == self.alpha2

    @property
    def kind(self):
        return kind_of(self.alpha1) or kind_of(self.alpha2) or RATIONAL

    @property
    def has_gauge(self):
        return self.alpha0 is not None and self.beta0 is not None

    def constraint_residual(self):
        return self.alpha1 * self.beta0**2 - self.alpha2 * self.alpha0**2

    def check_constraint(self, rtol=1e-12):
        if not self.has_gauge:
            raise ConstraintViolated("alpha0/beta0 not set")
        r = self.constraint_residual()
        if self.kind == FLOAT:
            scale = abs(self.alpha2 * self.alpha0**2) + abs(self.alpha1 * self.beta0**2)
            ok = abs(r) <= rtol * max(scale, 1e-300)
        else:
            ok = r == 0
        if not ok:
            raise ConstraintViolated(
                f"alpha1*beta0^2 - alpha2*alpha0^2 = {r} (alpha1={self.alpha1}, "
                f"alpha2={self.alpha2}, alpha0={self.alpha0}, beta0={self.beta0})"
            )

    def swapped(self):
        """Image under n <-> m: alpha1 <-> alpha2 and alpha0 <-> beta0."""
        return QuadParams(self.alpha2, self.alpha1, self.beta0, self.alpha0)

    def to_float(self):
        f = lambda v: None if v is None else float(v)
        return QuadParams(f(self.alpha1), f(self.alpha2), f(self.alpha0), f(self.beta0))

    def to_record(self):
        rec = {"alpha1": format_scalar(self.alpha1), "alpha2": format_scalar(self.alpha2)}
        if self.has_gauge:
            rec["alpha0"] = format_scalar(self.alpha0)
            rec["beta0"] = format_scalar(self.beta0)
        return rec


def eval_quad(params, x00, x10, x01, x11):
    """Residual of the quad equation on one plaquette (X picture)."""
    return params.alpha1 * (x00 - x01) * (x10 - x11) - params.alpha2 * (x00 - x10) * (x01 - x11)


def eval_quad_u(params, u00, u10, u01, u11):
    """Residual of the gauge-shifted quad equation (U picture)."""
    a0, b0 = params.alpha0, params.beta0
    return params.alpha1 * (u00 - u01 - b0) * (u10 - u11 - b0) - params.alpha2 * (
        u00 - u10 - a0
    ) * (u01 - u11 - a0)


def quad_function(picture):
    if picture == X:
        return eval_quad
    if picture == U:
        return eval_quad_u
    raise ValueError(f"unknown picture {picture!r}")


def quad_partials(params, x00, x10, x01, x11, picture=X):
    """Exact partial derivatives of Q with respect to the four corners.

    Q is affine in every corner, so each partial is a finite difference with
    unit step; no rounding is involved for rational inputs.
    """
    q = quad_function(picture)
    vals = [x00, x10, x01, x11]
    base = q(params, *vals)
    out = []
    for i in range(4):
        shifted = list(vals)
        shifted[i] = shifted[i] + 1
        out.append(q(params, *shifted) - base)
    return out


def _shift_to_x(params, vals, picture):
    if picture == X:
        return list(vals)
    a0, b0 = params.alpha0, params.beta0
    return [None if v is None else v + a0 * i + b0 * j for v, (i, j) in zip(vals, CORNERS)]


def solve_corner(params, x00, x10, x01, x11, free=(1, 1), picture=X, cell=None):
    """Value of the ``free`` corner that puts the plaquette on-shell.

    The argument for the free corner is ignored (pass None). Exact for
    rational input. Raises :class:`SingularCorner` when the free corner drops
    out of Q.
    """
    if free not in CORNERS:
        raise ValueError(f"free corner must be one of {CORNERS}")
    idx = CORNERS.index(free)
    vals = _shift_to_x(params, [x00, x10, x01, x11], picture)
    a1, a2 = params.alpha1, params.alpha2
    y00, y10, y01, y11 = vals
    if idx == 0:
        coeff = a1 * (y10 - y11) - a2 * (y01 - y11)
    elif idx == 1:
        coeff = a1 * (y00 - y01) + a2 * (y01 - y11)
    elif idx == 2:
        coeff = -a1 * (y10 - y11) - a2 * (y00 - y10)
    else:
        coeff = a2 * (y00 - y10) - a1 * (y00 - y01)
    if coeff == 0:
        raise SingularCorner(_COEFF_TEXT[free], cell=cell)
    # Newton step from the parallelogram guess; exact because Q is affine
    opp = vals[3 - idx]
    adj = [vals[k] for k in range(4) if k not in (idx, 3 - idx)]
    guess = adj[0] + adj[1] - opp
    vals[idx] = guess
    t = guess - eval_quad(params, *vals) / coeff
    if picture == U:
        i, j = free
        t = t - params.alpha0 * i - params.beta0 * j
    return t


def _as_array(values):
    kind = check_kinds(*values)
    if kind == FLOAT:
        return np.asarray(values, dtype=float), FLOAT
    arr = np.empty(len(values), dtype=object)
    for i, v in enumerate(values):
        arr[i] = as_rational(v) if v is not None else None
    return arr, RATIONAL


@dataclass(frozen=True)
class LatticeWindow:
    """Finite rectangle of field values, indexed by absolute ``(n, m)``.

    ``values[i, j]`` holds the field at ``(origin[0] + i, origin[1] + j)``.
    Rational windows use object arrays of Fractions (None marks a hole);
    float windows use float64 arrays (NaN marks a hole).
    """

    origin: tuple
    values: np.ndarray
    picture: str = X
    kind: str = field(default=None)

    def __post_init__(self):
        if self.picture not in (X, U):
            raise ValueError(f"unknown picture {self.picture!r}")
        vals = np.array(self.values, copy=True)
        if vals.dtype.kind in "iub":
            vals = vals.astype(object)
        if vals.ndim != 2:
            raise ValueError("window values must be 2D")
        if vals.dtype.kind == "f":
            kind = FLOAT
        else:
            vals = vals.astype(object)
            kinds = {kind_of(v) for v in vals.flat if v is not None}
            kinds.discard(None)
            if FLOAT in kinds:
                if RATIONAL in kinds:
                    raise MixedKindError("window mixes rational and float cells")
                vals = np.array(
                    [[np.nan if v is None else float(v) for v in row] for row in vals]
                )
                kind = FLOAT
            else:
                for idx, v in np.ndenumerate(vals):
                    if v is not None and not isinstance(v, Fraction):
                        vals[idx] = as_rational(v)
                kind = RATIONAL
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "origin", (int(self.origin[0]), int(self.origin[1])))
        object.__setattr__(self, "kind", kind)

    @classmethod
    def from_function(cls, func, n_range, m_range, picture=X):
        """Build a window by evaluating ``func(n, m)`` on half-open ranges."""
        n0, n1 = n_range
        m0, m1 = m_range
        vals = np.empty((n1 - n0, m1 - m0), dtype=object)
        for i in range(n1 - n0):
            for j in range(m1 - m0):
                vals[i, j] = func(n0 + i, m0 + j)
        return cls((n0, m0), vals, picture)

    @property
    def extent(self):
        return self.values.shape

    @property
    def n_range(self):
        return self.origin[0], self.origin[0] + self.values.shape[0]

    @property
    def m_range(self):
        return self.origin[1], self.origin[1] + self.values.shape[1]

    def __contains__(self, nm):
        n, m = nm
        i, j = n - self.origin[0], m - self.origin[1]
        if not (0 <= i < self.values.shape[0] and 0 <= j < self.values.shape[1]):
            return False
        v = self.values[i, j]
        return not (v is None or (self.kind == FLOAT and np.isnan(v)))

    def __getitem__(self, nm):
        n, m = nm
        i, j = n - self.origin[0], m - self.origin[1]
        if not (0 <= i < self.values.shape[0] and 0 <= j < self.values.shape[1]):
            raise IndexError(f"({n}, {m}) outside window {self.n_range} x {self.m_range}")
        v = self.values[i, j]
        if v is None or (self.kind == FLOAT and np.isnan(v)):
            raise IndexError(f"({n}, {m}) is a hole")
        return v

    def cells(self):
        n0, m0 = self.origin
        for i in range(self.values.shape[0]):
            for j in range(self.values.shape[1]):
                yield n0 + i, m0 + j

    def map(self, func):
        """Apply ``func(value)`` cell-wise."""
        out = np.empty(self.values.shape, dtype=object)
        for idx, v in np.ndenumerate(self.values):
            out[idx] = func(v)
        return LatticeWindow(self.origin, out, self.picture)

    def to_float(self):
        if self.kind == FLOAT:
            return self
        arr = np.array(
            [[np.nan if v is None else float(v) for v in row] for row in self.values], dtype=float
        )
        return LatticeWindow(self.origin, arr, self.picture)

    def crop(self, n_range, m_range):
        """Sub-window on half-open absolute ranges."""
        i0, i1 = n_range[0] - self.origin[0], n_range[1] - self.origin[0]
        j0, j1 = m_range[0] - self.origin[1], m_range[1] - self.origin[1]
        if i0 < 0 or j0 < 0 or i1 > self.values.shape[0] or j1 > self.values.shape[1]:
            raise IndexError("crop exceeds window")
        return LatticeWindow((n_range[0], m_range[0]), self.values[i0:i1, j0:j1], self.picture)

    def transposed(self):
        """Window of the field ``(n, m) -> value at (m, n)``."""
        return LatticeWindow((self.origin[1], self.origin[0]), self.values.T, self.picture)

    def with_values(self, values):
        return LatticeWindow(self.origin, values, self.picture)

    def to_record(self):
        return {
            "origin": list(self.origin),
            "extent": list(self.extent),
            "picture": self.picture,
            "cells": [None if v is None else format_scalar(v) for v in self.values.flat],
        }

    @classmethod
    def from_record(cls, rec):
        kind = FLOAT
        cells = rec["cells"]
        if all(c is None or (isinstance(c, str) and "/" in c) for c in cells):
            kind = RATIONAL
        vals = [None if c is None else parse_scalar(c, kind) for c in cells]
        arr = np.empty(len(vals), dtype=object)
        arr[:] = vals
        return cls(tuple(rec["origin"]), arr.reshape(rec["extent"]), rec["picture"])


def evolve_quadrant(params, row0, col0, origin=(0, 0), picture=X):
    """Fill a quadrant from ``row0 = x[n, 0]`` and ``col0 = x[0, m]``.

    ``row0[0]`` and ``col0[0]`` both give the corner value and must agree.
    Every interior plaquette is solved for its upper corner; rational input
    gives an exactly on-shell window.
    """
    if row0[0] != col0[0]:
        raise ValueError("row0[0] and col0[0] must be the same corner value")
    if picture == U:
        params.check_constraint()
    N, M = len(row0), len(col0)
    _, kind = _as_array(list(row0) + list(col0))
    if kind != params.kind:
        raise MixedKindError(f"{params.kind} parameters with {kind} boundary data")
    vals = np.empty((N, M), dtype=float if kind == FLOAT else object)
    conv = float if kind == FLOAT else as_rational
    for i in range(N):
        vals[i, 0] = conv(row0[i])
    for j in range(M):
        vals[0, j] = conv(col0[j])
    n0, m0 = origin
    for i in range(1, N):
        for j in range(1, M):
            vals[i, j] = solve_corner(
                params,
                vals[i - 1, j - 1],
                vals[i, j - 1],
                vals[i - 1, j],
                None,
                free=(1, 1),
                picture=picture,
                cell=(n0 + i - 1, m0 + j - 1),
            )
    return LatticeWindow(origin, vals, picture)


def _require_same_kind(params, window):
    if window.kind != params.kind:
        raise MixedKindError(f"{params.kind} parameters with a {window.kind} window")


def _gauge(params, window, sign):
    params.check_constraint()
    _require_same_kind(params, window)
    n0, m0 = window.origin
    out = np.empty(window.extent, dtype=window.values.dtype)
    for (i, j), v in np.ndenumerate(window.values):
        if v is None:
            out[i, j] = None
            continue
        out[i, j] = v + sign * (params.alpha0 * (n0 + i) + params.beta0 * (m0 + j))
    return out


def gauge_to_u(params, window):
    """``u = x - beta0*m - alpha0*n``."""
    if window.picture != X:
        raise ValueError("gauge_to_u expects an X-picture window")
    return LatticeWindow(window.origin, _gauge(params, window, -1), U)


def gauge_from_u(params, window):
    """Inverse of :func:`gauge_to_u`."""
    if window.picture != U:
        raise ValueError("gauge_from_u expects a U-picture window")
    return LatticeWindow(window.origin, _gauge(params, window, 1), X)


def factor_degenerate(x00, x10, x01, x11):
    """``(x00 - x11)(x10 - x01)``; equals Q/alpha when alpha1 == alpha2."""
    return (x00 - x11) * (x10 - x01)


def plaquette_residuals(params, window):
    """Q at every plaquette whose four corners lie in the window.

    Returns an array indexed like the plaquette roots.
    """
    q = quad_function(window.picture)
    v = window.values
    if v.shape[0] < 2 or v.shape[1] < 2:
        return np.empty((0, 0), dtype=v.dtype)
    return q(params, v[:-1, :-1], v[1:, :-1], v[:-1, 1:], v[1:, 1:])


def _ghost_upward(params, v, picture):
    """Fill direction along m for the right ghost column.

    Linearized about a field with mean steps ``dn`` and ``dm``, a ghost cell
    depends on its predecessor in the column with factor ``B/A`` (upward) or
    ``A/B`` (downward), where ``A = alpha1*dm - alpha2*dn`` and
    ``B = alpha1*dm + alpha2*dn``. The direction with the smaller factor is
    used; the left column uses the opposite one.
    """
    dn = float(np.median(np.asarray(v[1:, :] - v[:-1, :], dtype=float)))
    dm = float(np.median(np.asarray(v[:, 1:] - v[:, :-1], dtype=float))) if v.shape[1] > 1 else 0.0
    if picture == U:
        dn += float(params.alpha0)
        dm += float(params.beta0)
    a1, a2 = float(params.alpha1), float(params.alpha2)
    return abs(a1 * dm + a2 * dn) <= abs(a1 * dm - a2 * dn)


def _extend_axis0(params, v, pad, picture, n_origin, m_origin):
    """Append ``pad`` on-shell columns on both sides along n."""
    for _ in range(pad):
        if v.shape[0] < 2:
            raise LSKdVError("need at least two columns to extend along n")
        rows = v.shape[1]
        right = np.empty(rows, dtype=v.dtype)
        left = np.empty(rows, dtype=v.dtype)
        n_hi = n_origin + v.shape[0] - 1
        n_lo = n_origin - 1
        if _ghost_upward(params, v, picture):
            right[0] = 2 * v[-1, 0] - v[-2, 0]
            left[-1] = 2 * v[0, -1] - v[1, -1]
            for j in range(rows - 1):
                right[j + 1] = solve_corner(
                    params, v[-1, j], right[j], v[-1, j + 1], None, (1, 1), picture,
                    cell=(n_hi, m_origin + j),
                )
            for j in range(rows - 1, 0, -1):
                left[j - 1] = solve_corner(
                    params, None, v[0, j - 1], left[j], v[0, j], (0, 0), picture,
                    cell=(n_lo, m_origin + j - 1),
                )
        else:
            right[-1] = 2 * v[-1, -1] - v[-2, -1]
            left[0] = 2 * v[0, 0] - v[1, 0]
            for j in range(rows - 1, 0, -1):
                right[j - 1] = solve_corner(
                    params, v[-1, j - 1], None, v[-1, j], right[j], (1, 0), picture,
                    cell=(n_hi, m_origin + j - 1),
                )
            for j in range(rows - 1):
                left[j + 1] = solve_corner(
                    params, left[j], v[0, j], None, v[0, j + 1], (0, 1), picture,
                    cell=(n_lo, m_origin + j),
                )
        v = np.concatenate([left[None, :], v, right[None, :]], axis=0)
        n_origin -= 1
    return v, n_origin


def extend_on_shell(params, window, pad_n, pad_m):
    """Grow a window by on-shell ghost cells.

    Each new column (row) is seeded by linear extrapolation at one end and
    completed by corner solves, marching in the direction in which errors
    are damped, so every plaquette touching a ghost cell satisfies the quad
    equation. Used by the flow integrator in
    place of frozen boundaries.
    """
    _require_same_kind(params, window)
    v = np.array(window.values, copy=True)
    n0, m0 = window.origin
    v, n0 = _extend_axis0(params, v, pad_n, window.picture, n0, m0)
    if pad_m:
        # extending along m is extending along n for the transposed field
        # with swapped parameters; Q only changes sign under that swap
        vt, m0 = _extend_axis0(params.swapped(), v.T.copy(), pad_m, window.picture, m0, n0)
        v = vt.T
    return LatticeWindow((n0, m0), v, window.picture)
