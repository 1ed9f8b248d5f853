"""Consistency of the quad equation around a cube."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import SingularCorner
from .lattice import QuadParams, solve_corner
from .numerics import FLOAT, check_kinds, format_scalar


@dataclass(frozen=True)
class CubeData:
    """Base vertex ``x``, its three neighbours and one parameter per direction."""

    x: object
    x1: object
    x2: object
    x3: object
    alphas: tuple

    def __post_init__(self):
        if len(self.alphas) != 3 or any(a == 0 for a in self.alphas):
            raise ValueError("need three nonzero lattice parameters")
        check_kinds(self.x, self.x1, self.x2, self.x3, *self.alphas)

    def face_params(self, i, j):
        """Parameters of the face spanned by directions i < j (1-based)."""
        return QuadParams(self.alphas[i - 1], self.alphas[j - 1])


@dataclass(frozen=True)
class CubeReport:
    data: CubeData
    x12: object
    x13: object
    x23: object
    candidates: tuple  # x123 from faces (1,2), (1,3), (2,3) on the far side
    agree: bool
    spread: object

    def to_record(self):
        return {
            "inputs": [format_scalar(v) for v in (self.data.x, self.data.x1, self.data.x2,
                                                  self.data.x3)],
            "alphas": [format_scalar(a) for a in self.data.alphas],
            "x12": format_scalar(self.x12),
            "x13": format_scalar(self.x13),
            "x23": format_scalar(self.x23),
            "x123": [format_scalar(c) for c in self.candidates],
            "agree": self.agree,
            "spread": format_scalar(self.spread),
        }


def _solve(params, a, b, c, face):
    try:
        return solve_corner(params, a, b, c, None)
    except SingularCorner as exc:
        raise SingularCorner(exc.expression, cell=exc.cell, face=face) from None


def cac_check(data, rtol=1e-12):
    """Solve the three near faces, then the far corner three ways.

    Face (i, j) carries the equation with ``(alpha_i, alpha_j)`` in the slots
    ``(alpha1, alpha2)`` and corners ``(x, x_i, x_j, x_ij)``. Rational data
    must agree exactly; float data within ``rtol`` relative to the scale.
    """
    d = data
    x12 = _solve(d.face_params(1, 2), d.x, d.x1, d.x2, "(1,2)")
    x13 = _solve(d.face_params(1, 3), d.x, d.x1, d.x3, "(1,3)")
    x23 = _solve(d.face_params(2, 3), d.x, d.x2, d.x3, "(2,3)")
    c12 = _solve(d.face_params(1, 2), d.x3, x13, x23, "(1,2)+e3")
    c13 = _solve(d.face_params(1, 3), d.x2, x12, x23, "(1,3)+e2")
    c23 = _solve(d.face_params(2, 3), d.x1, x12, x13, "(2,3)+e1")
    cands = (c12, c13, c23)
    spread = max(cands) - min(cands)
    if check_kinds(*cands) == FLOAT:
        scale = max(1.0, *(abs(c) for c in cands))
        agree = spread <= rtol * scale
    else:
        agree = spread == 0
    return CubeReport(d, x12, x13, x23, cands, agree, spread)
