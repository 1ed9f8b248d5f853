"""Matrix Lax pair, its scalar three-point forms and the U-picture potentials.

The matrices are

    L = [[1, x00 - x10], [lam*alpha1/(x00 - x10), 1]]
    M = [[1, x00 - x01], [lam*alpha2/(x00 - x01), 1]]

acting as ``Psi[n+1] = L Psi[n]`` and ``Psi[m+1] = M Psi[m]``. Windows in the U
picture are shifted back to x before building the matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

from .lattice import U
from .numerics import format_scalar, safe_div

N_SHIFT = "n"
M_SHIFT = "m"


def _x(params, window, n, m):
    v = window[n, m]
    if window.picture == U:
        v = v + params.alpha0 * n + params.beta0 * m
    return v


def _step(direction):
    if direction == N_SHIFT:
        return 1, 0
    if direction == M_SHIFT:
        return 0, 1
    raise ValueError(f"direction must be 'n' or 'm', got {direction!r}")


def _alpha(params, direction):
    return params.alpha1 if direction == N_SHIFT else params.alpha2


@dataclass(frozen=True)
class LaxMatrix:
    entries: tuple  # ((a, b), (c, d))
    site: tuple
    direction: str
    lam: object

    def __matmul__(self, other):
        return matmul(self.entries, other.entries if isinstance(other, LaxMatrix) else other)

    def apply(self, vec):
        (a, b), (c, d) = self.entries
        return (a * vec[0] + b * vec[1], c * vec[0] + d * vec[1])

    def to_record(self):
        return {
            "site": list(self.site),
            "direction": self.direction,
            "lambda": format_scalar(self.lam),
            "entries": [[format_scalar(v) for v in row] for row in self.entries],
        }


def matmul(a, b):
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(2)), 0) for j in range(2)) for i in range(2)
    )


def _lax(params, window, n, m, lam, direction):
    dn, dm = _step(direction)
    diff = _x(params, window, n, m) - _x(params, window, n + dn, m + dm)
    lower = safe_div(lam * _alpha(params, direction), diff,
                     f"x[{n},{m}] - x[{n + dn},{m + dm}]", where=(n, m))
    return LaxMatrix(((1, diff), (lower, 1)), (n, m), direction, lam)


def lax_L(params, window, n, m, lam):
    return _lax(params, window, n, m, lam, N_SHIFT)


def lax_M(params, window, n, m, lam):
    return _lax(params, window, n, m, lam, M_SHIFT)


def compat_residual(params, window, n, m, lam):
    """``L[n, m+1] M[n, m] - M[n+1, m] L[n, m]`` as a 2x2 tuple."""
    left = lax_L(params, window, n, m + 1, lam) @ lax_M(params, window, n, m, lam)
    right = lax_M(params, window, n + 1, m, lam) @ lax_L(params, window, n, m, lam)
    return tuple(tuple(l - r for l, r in zip(lr, rr)) for lr, rr in zip(left, right))


def is_zero_matrix(mat):
    return all(v == 0 for row in mat for v in row)


@dataclass(frozen=True)
class Potentials:
    v_n: object
    v_m: object


def _potential(w, c, what):
    return safe_div(w(2) - 2 * w(1) + w(0), w(1) - w(0) + c, what)


def potential_n(params, window, n, m):
    return _potential(lambda k: window[n + k, m], params.alpha0, "u[n+1] - u[n] + alpha0")


def potential_m(params, window, n, m):
    return _potential(lambda k: window[n, m + k], params.beta0, "u[m+1] - u[m] + beta0")


def potentials(params, window, n, m):
    """Both potentials at (n, m) of a U-picture window."""
    if window.picture != U:
        raise ValueError("potentials are defined on U-picture windows")
    return Potentials(potential_n(params, window, n, m), potential_m(params, window, n, m))


def propagate(params, window, n, m, lam, psi0, steps=2, direction=N_SHIFT):
    """Vectors ``Psi`` at ``steps + 1`` consecutive sites from ``psi0``."""
    dn, dm = _step(direction)
    out = [tuple(psi0)]
    for s in range(steps):
        mat = _lax(params, window, n + s * dn, m + s * dm, lam, direction)
        out.append(mat.apply(out[-1]))
    return out


def scalar_recursion_residual(params, window, n, m, psi, lam, direction=N_SHIFT):
    """Residual of the three-point equation for ``psi`` at three consecutive sites.

    X picture: ``(x0 - x1) psi2 + (x2 - x0) psi1 + (1 - lam*alpha)(x1 - x2) psi0``.
    U picture: ``psi2 - (2 + v) psi1 + (1 + v)(1 - lam*alpha) psi0`` with the
    potential ``v`` of that direction; it equals the X residual divided by
    ``x0 - x1``.
    """
    dn, dm = _step(direction)
    alpha = _alpha(params, direction)
    psi0, psi1, psi2 = psi
    spectral = 1 - lam * alpha
    if window.picture == U:
        v = (potential_n if direction == N_SHIFT else potential_m)(params, window, n, m)
        return psi2 - (2 + v) * psi1 + (1 + v) * spectral * psi0
    x0, x1, x2 = (_x(params, window, n + k * dn, m + k * dm) for k in range(3))
    return (x0 - x1) * psi2 + (x2 - x0) * psi1 + spectral * (x1 - x2) * psi0
