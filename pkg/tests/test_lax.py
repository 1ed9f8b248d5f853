from fractions import Fraction

import pytest
from hypothesis import given, settings

from conftest import quad_params, rationals
from lskdv.errors import PoleError, SingularCorner
from lskdv.lattice import U, LatticeWindow, QuadParams, gauge_from_u, solve_corner
from lskdv.lax import (
    M_SHIFT,
    N_SHIFT,
    compat_residual,
    is_zero_matrix,
    lax_L,
    potential_n,
    potentials,
    propagate,
    scalar_recursion_residual,
)
from lskdv.sampling import generator, random_onshell_window

F = Fraction
P21 = QuadParams(F(2), F(1))


def plaquette(x00, x10, x01, x11):
    return LatticeWindow((0, 0), [[F(x00), F(x01)], [F(x10), F(x11)]])


def test_lax_L_template():
    w = plaquette(0, 1, 0, 0)
    assert lax_L(P21, w, 0, 0, F(1)).entries == ((1, -1), (-2, 1))


def test_on_shell_plaquette_gives_zero_matrix():
    assert is_zero_matrix(compat_residual(P21, plaquette(0, 1, 3, F(3, 5)), 0, 0, F(5, 7)))


def test_zero_spectral_parameter_off_shell():
    assert is_zero_matrix(compat_residual(P21, plaquette(0, 1, 2, 3), 0, 0, 0))


def test_off_shell_residual_is_nonzero():
    assert not is_zero_matrix(compat_residual(P21, plaquette(0, 1, 2, 3), 0, 0, F(1)))


@settings(max_examples=40)
@given(quad_params(gauge=False), rationals, rationals)
def test_compatibility_on_shell(params, a, lam):
    x00, x10, x01 = a, a + 1, a - F(2, 3)
    try:
        x11 = solve_corner(params, x00, x10, x01, None)
    except SingularCorner:
        return
    if x11 in (x10, x01):
        return
    assert is_zero_matrix(compat_residual(params, plaquette(x00, x10, x01, x11), 0, 0, lam))


def test_potential_example():
    p = QuadParams.from_alphas(F(4), F(1), F(1))
    w = LatticeWindow((0, 0), [[F(0)], [F(1)], [F(3)]], U)
    assert potential_n(p, w, 0, 0) == F(1, 2)


def test_potentials_vanish_on_linear_fields():
    p = QuadParams.from_alphas(F(4), F(1), F(1))
    w = LatticeWindow.from_function(lambda n, m: F(3 * n + 5), (0, 3), (0, 3), U)
    v = potentials(p, w, 0, 0)
    assert v.v_n == 0 and v.v_m == 0


def test_potential_pole():
    p = QuadParams.from_alphas(F(4), F(1), F(1))
    w = LatticeWindow((0, 0), [[F(0)], [F(-1)], [F(3)]], U)
    with pytest.raises(PoleError):
        potential_n(p, w, 0, 0)


def _onshell_x(seed=5):
    p = QuadParams.from_alphas(F(4), F(1), F(1))
    w = random_onshell_window(p, generator(seed), (0, 4), (0, 4), U)
    return p, w


@pytest.mark.parametrize("direction", [N_SHIFT, M_SHIFT])
@pytest.mark.parametrize("lam", [F(2, 7), F(1, 4), F(1)])
def test_propagated_first_component_solves_scalar_recursion(direction, lam):
    p, w = _onshell_x()
    wx = gauge_from_u(p, w)
    psi = [v[0] for v in propagate(p, wx, 0, 0, lam, (F(3), F(-2)), 2, direction)]
    assert scalar_recursion_residual(p, wx, 0, 0, psi, lam, direction) == 0
    assert scalar_recursion_residual(p, w, 0, 0, psi, lam, direction) == 0


def test_special_spectral_value_keeps_residual_zero():
    p, w = _onshell_x(6)
    wx = gauge_from_u(p, w)
    lam = 1 / p.alpha1
    psi = [v[0] for v in propagate(p, wx, 0, 0, lam, (F(1), F(5)))]
    assert scalar_recursion_residual(p, wx, 0, 0, psi, lam) == 0


def test_unrelated_psi_fails_recursion():
    p, w = _onshell_x()
    assert scalar_recursion_residual(p, gauge_from_u(p, w), 0, 0, (F(1), F(2), F(7)), F(1)) != 0


def test_u_residual_is_x_residual_over_first_difference():
    p, w = _onshell_x(8)
    wx = gauge_from_u(p, w)
    psi, lam = (F(1), F(2), F(7)), F(3, 4)
    d = wx[0, 0] - wx[1, 0]
    assert scalar_recursion_residual(p, w, 0, 0, psi, lam) * d == scalar_recursion_residual(
        p, wx, 0, 0, psi, lam)


def test_weight_on_highest_shift_form_is_not_satisfied():
    # (1 + v) psi2 - (2 + v) psi1 + (1 - lam*alpha1) psi0 is not implied by the system
    p, w = _onshell_x()
    wx = gauge_from_u(p, w)
    lam = F(2, 7)
    psi = [v[0] for v in propagate(p, wx, 0, 0, lam, (F(3), F(-2)))]
    v = potential_n(p, w, 0, 0)
    assert v != 0
    assert (1 + v) * psi[2] - (2 + v) * psi[1] + (1 - lam * p.alpha1) * psi[0] != 0
