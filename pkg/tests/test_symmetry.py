from fractions import Fraction

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import quad_params, rationals
from lskdv.errors import DegenerateParameters, PoleError
from lskdv.hierarchy import catalog_get
from lskdv.lattice import U, X, LatticeWindow, QuadParams, eval_quad, plaquette_residuals
from lskdv.sampling import generator, random_onshell_window
from lskdv.symmetry import (
    bracket,
    mobius_apply,
    on_shell_residual,
    point_characteristic,
    point_symmetry_basis,
    prolong_residual,
    require_nondegenerate,
    structure_constants,
)

F = Fraction
P21 = QuadParams(F(2), F(1))
X0, X1, X2 = (point_characteristic([0] * k + [1], name=f"X{k}") for k in range(3))


def plaquette(vals):
    x00, x10, x01, x11 = vals
    return LatticeWindow((0, 0), [[x00, x01], [x10, x11]], X)


@given(st.lists(rationals, min_size=4, max_size=4))
def test_scaling_prolongation_is_twice_q(vals):
    assert prolong_residual(X1, P21, plaquette(vals)) == 2 * eval_quad(P21, *vals)


@given(st.lists(rationals, min_size=4, max_size=4))
def test_quadratic_prolongation_is_sum_times_q(vals):
    assert prolong_residual(X2, P21, plaquette(vals)) == sum(vals) * eval_quad(P21, *vals)


@given(st.lists(rationals, min_size=4, max_size=4))
def test_translation_prolongation_vanishes(vals):
    assert prolong_residual(X0, P21, plaquette(vals)) == 0


def test_x2_on_shell():
    w = random_onshell_window(P21, generator(2), (0, 2), (0, 2), X)
    assert on_shell_residual(X2, P21, w) == 0


def test_g0n_is_not_a_symmetry():
    p = QuadParams.from_alphas(F(4), F(1), F(1))
    ch = catalog_get("G0n", p).characteristic

    w = random_onshell_window(p, generator(9), (-1, 3), (-1, 3), U)
    assert on_shell_residual(ch, p, w, 0, 0) != 0


def test_point_basis_dimension_three():
    basis = point_symmetry_basis(P21, 2)
    assert basis.dimension == 3 and basis.site_independent and not basis.degenerate
    assert basis.polynomials == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]


def test_point_basis_degree_one():
    basis = point_symmetry_basis(P21, 1)
    assert basis.dimension == 2 and basis.polynomials == [(1, 0), (0, 1)]


def test_point_basis_degree_three_stays_three():
    assert point_symmetry_basis(P21, 3).dimension == 3


def test_degenerate_alphas_are_flagged():
    p = QuadParams(F(3), F(3))
    basis = point_symmetry_basis(p, 2)
    assert basis.degenerate and basis.dimension > 3
    with pytest.raises(DegenerateParameters):
        require_nondegenerate(p)


@settings(max_examples=10, deadline=None)
@given(quad_params(gauge=False))
def test_random_alphas_give_sl2(params):
    basis = point_symmetry_basis(params, 2, seed=1)
    assert basis.polynomials == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]


def test_structure_constants():
    t = structure_constants([X0, X1, X2])
    assert t[0, 1] == [1, 0, 0]
    assert t[0, 2] == [0, 2, 0]
    assert t[1, 2] == [0, 0, 1]
    assert t[1, 0] == [-1, 0, 0]


def test_bracket_of_translation_and_scaling():
    b = bracket(X0, X1)
    assert b({(0, 0): F(17, 3)}, 0, 0) == 1


def test_bracket_antisymmetry_on_lattice_fields():
    p = QuadParams.from_alphas(F(4), F(1), F(1))
    s1, m1 = (catalog_get(n, p).characteristic for n in ("S1n", "M1n"))
    w = LatticeWindow.from_function(lambda n, m: F(n * n + 3 * m, 7), (-3, 4), (-3, 4), "U")
    assert bracket(s1, m1)(w, 1, 0) == -bracket(m1, s1)(w, 1, 0)


def test_mobius_example():
    assert mobius_apply(0, 0, F(1, 2), 1) == 2


def test_mobius_pole():
    with pytest.raises(PoleError):
        mobius_apply(0, 0, F(1, 2), 2)


def test_mobius_float_branch():

    assert mobius_apply(0.5, 0.2, 0.0, 1.0) == pytest.approx(1.5 * math.exp(0.2))


@settings(max_examples=30)
@given(rationals, rationals)
def test_mobius_maps_solutions_to_solutions(e0, e2):
    w = random_onshell_window(P21, generator(4), (0, 3), (0, 3), X)
    try:
        img = w.map(lambda x: mobius_apply(e0, 0, e2, x))
    except PoleError:
        return

    assert all(r == 0 for r in plaquette_residuals(P21, img).flat)
