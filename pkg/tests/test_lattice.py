from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import quad_params, rationals
from lskdv.errors import ConstraintViolated, MixedKindError, SingularCorner
from lskdv.lattice import (
    CORNERS,
    U,
    X,
    LatticeWindow,
    QuadParams,
    eval_quad,
    eval_quad_u,
    evolve_quadrant,
    extend_on_shell,
    factor_degenerate,
    gauge_from_u,
    gauge_to_u,
    plaquette_residuals,
    solve_corner,
)
from lskdv.sampling import generator, random_onshell_window

F = Fraction
P21 = QuadParams(F(2), F(1))


def test_eval_quad_examples():
    assert eval_quad(P21, 0, 1, 3, F(3, 5)) == 0
    assert eval_quad(QuadParams(F(1), F(1)), 0, 1, 2, 3) == 3


def test_solve_corner_example():
    assert solve_corner(P21, F(0), F(1), F(3), None) == F(3, 5)


@settings(max_examples=50)
@given(quad_params(gauge=False), rationals, rationals, rationals)
def test_every_corner_solve_inverts(params, a, b, c):
    try:
        d = solve_corner(params, a, b, c, None)
    except SingularCorner:
        return
    vals = [a, b, c, d]
    assert eval_quad(params, *vals) == 0
    for k, free in enumerate(CORNERS):
        args = list(vals)
        args[k] = None
        try:
            assert solve_corner(params, *args, free) == vals[k]
        except SingularCorner:
            pass


def test_singular_corner_names_the_coefficient():
    with pytest.raises(SingularCorner) as info:
        solve_corner(P21, F(1), F(1), F(1), None, cell=(4, 5))
    assert info.value.cell == (4, 5)
    assert "alpha" in info.value.expression


def test_evolve_quadrant_is_on_shell():
    rng = generator(7)
    w = random_onshell_window(P21, rng, (0, 6), (0, 6), X)
    assert w.extent == (6, 6)
    assert all(r == 0 for r in plaquette_residuals(P21, w).flat)


def test_evolve_quadrant_rejects_mismatched_corner():
    with pytest.raises(ValueError):
        evolve_quadrant(P21, [F(0), F(1)], [F(2), F(3)])


def test_evolve_quadrant_rejects_mixed_kinds():
    with pytest.raises(MixedKindError):
        evolve_quadrant(P21, [0.0, 1.0], [0.0, 2.0])


def test_gauge_constants():
    p = QuadParams.from_alphas(F(4), F(1), F(1))
    assert p.beta0 == F(1, 2)
    assert QuadParams.from_alphas(F(4), F(1), F(1), sign=-1).beta0 == F(-1, 2)
    p.check_constraint()
    with pytest.raises(ConstraintViolated):
        QuadParams.from_alphas(F(2), F(1), F(1))
    pf = QuadParams.from_alphas(2.0, 1.0, 1.0, kind="float")
    pf.check_constraint()
    with pytest.raises(ConstraintViolated):
        QuadParams(F(4), F(1), F(1), F(1)).check_constraint()


def test_constant_u_is_a_solution():
    p = QuadParams.from_alphas(F(4), F(1), F(1))
    c = F(7, 3)
    assert eval_quad_u(p, c, c, c, c) == 0
    x = lambda n, m: c + n + F(m, 2)
    assert eval_quad(p, x(0, 0), x(1, 0), x(0, 1), x(1, 1)) == 0


@given(quad_params())
def test_u_and_x_quads_agree(params):
    rng = generator(1)
    w = random_onshell_window(params, rng, (-1, 3), (2, 5), U)
    wx = gauge_from_u(params, w)
    assert all(r == 0 for r in plaquette_residuals(params, wx).flat)
    assert gauge_to_u(params, wx).values.tolist() == w.values.tolist()


def test_degenerate_factorization_example():
    assert factor_degenerate(0, 1, 2, 3) == 3
    assert eval_quad(QuadParams(F(1), F(1)), 0, 1, 2, 3) == 1 * factor_degenerate(0, 1, 2, 3)


@given(st.lists(rationals, min_size=4, max_size=4), rationals.filter(bool))
def test_degenerate_factorization(xs, a):
    assert eval_quad(QuadParams(a, a), *xs) == a * factor_degenerate(*xs)


def test_window_indexing_and_records():
    w = LatticeWindow.from_function(lambda n, m: F(n * 10 + m), (2, 5), (-1, 1))
    assert w[3, 0] == 30
    assert w.n_range == (2, 5) and w.m_range == (-1, 1)
    assert LatticeWindow.from_record(w.to_record()).values.tolist() == w.values.tolist()
    t = w.transposed()
    assert t[0, 3] == 30
    c = w.crop((3, 4), (0, 1))
    assert c.values.tolist() == [[F(30)]]


@pytest.mark.parametrize("pad", [(2, 0), (0, 2), (1, 3)])
def test_extend_on_shell_is_exact_for_rationals(pad):
    p = QuadParams.from_alphas(F(4), F(1), F(1), sign=-1)
    w = random_onshell_window(p, generator(3), (0, 4), (0, 4), U, magnitude=F(1, 5))
    ext = extend_on_shell(p, w, *pad)
    assert ext.extent == (4 + 2 * pad[0], 4 + 2 * pad[1])
    assert all(r == 0 for r in plaquette_residuals(p, ext).flat)
    assert ext.crop(w.n_range, w.m_range).values.tolist() == w.values.tolist()


def test_extend_on_shell_float():
    p = QuadParams.from_alphas(F(4), F(1), F(1), sign=-1)
    w = random_onshell_window(p, generator(4), (0, 6), (0, 6), U, magnitude=F(1, 5)).to_float()
    ext = extend_on_shell(p.to_float(), w, 2, 2)
    assert np.max(np.abs(plaquette_residuals(p.to_float(), ext))) < 1e-12
