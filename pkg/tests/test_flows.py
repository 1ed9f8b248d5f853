import math
from fractions import Fraction

import numpy as np
import pytest

from lskdv.battery import FLOW_PARAMS
from lskdv.errors import CoreEmpty, DegenerateParameters, PoleError
from lskdv.flows import (
    FROZEN,
    commuting_flow_residual,
    flow_run,
    integrate_flow,
    invariance_drift,
    limit_order,
    limit_residual,
    require_distinct,
    semi_discrete_integrate,
    semi_discrete_rhs,
    SEED_PROFILES,
)
from lskdv.hierarchy import catalog_get
from lskdv.lattice import U, LatticeWindow, QuadParams
from lskdv.sampling import generator, random_onshell_window

F = Fraction


def char(name, params=FLOW_PARAMS):
    return catalog_get(name, params).characteristic


@pytest.fixture(scope="module")
def window():
    return random_onshell_window(FLOW_PARAMS, generator(21), (0, 8), (0, 8), U,
                                 magnitude=F(1, 5))


def test_s1n_moves_constant_field_rigidly():
    p = QuadParams.from_alphas(F(4), F(1), F(1))
    w = LatticeWindow.from_function(lambda n, m: F(3, 2), (0, 6), (0, 4), U)
    out = integrate_flow(char("S1n", p), w, 0.5, 1e-2, p)
    assert out.extent == (4, 4)
    assert np.allclose(out.values, 0.5, atol=1e-12, rtol=0)


def test_scaling_flow_is_exponential():
    w = LatticeWindow((0, 0), generator(1).uniform(-2, 2, (4, 4)))
    out = integrate_flow(char("X1"), w, 1.0, 1e-3)
    assert np.allclose(out.values, w.values * math.e, rtol=1e-12, atol=0)


def test_translation_flow_adds_eps():
    w = LatticeWindow((0, 0), generator(1).uniform(-2, 2, (3, 3)))
    out = integrate_flow(char("X0"), w, 0.3, 1e-2)
    assert np.allclose(out.values, w.values + 0.3, atol=1e-14)


@pytest.mark.parametrize("name", ["S1n", "MIXED", "S1m", "S2n"])
def test_symmetry_flows_keep_solutions(window, name):
    assert invariance_drift(FLOW_PARAMS, char(name), window, 0.1, 1e-3) <= 1e-8


def test_g0n_flow_leaves_solutions(window):
    assert invariance_drift(FLOW_PARAMS, char("G0n"), window, 0.1, 1e-3) >= 1e-4


def test_drift_shrinks_like_fourth_order(window):
    d1 = invariance_drift(FLOW_PARAMS, char("S1n"), window, 0.1, 0.02)
    d2 = invariance_drift(FLOW_PARAMS, char("S1n"), window, 0.1, 0.01)
    assert 8 <= d1 / d2 <= 32


def test_frozen_boundary_is_worse_than_ghost(window):
    ghost = invariance_drift(FLOW_PARAMS, char("S1n"), window, 0.1, 1e-2)
    frozen = invariance_drift(FLOW_PARAMS, char("S1n"), window, 0.1, 1e-2, FROZEN)
    assert frozen > 1e3 * ghost


def test_flow_is_deterministic(window):
    a = flow_run(char("MIXED"), window, 0.05, 1e-2, FLOW_PARAMS, measure=True)
    b = flow_run(char("MIXED"), window, 0.05, 1e-2, FLOW_PARAMS, measure=True)
    assert np.array_equal(a.after.values, b.after.values) and a.drift == b.drift
    assert a.steps == 5 and a.core == ((1, 7), (1, 7))


def test_small_window_has_no_core():
    w = LatticeWindow.from_function(lambda n, m: F(n), (0, 2), (0, 3), U)
    with pytest.raises(CoreEmpty):
        integrate_flow(char("S1n"), w, 0.1, 1e-2, FLOW_PARAMS)


def test_picture_mismatch_is_rejected():
    w = LatticeWindow.from_function(lambda n, m: F(n), (0, 4), (0, 4))
    with pytest.raises(ValueError):
        integrate_flow(char("S1n"), w, 0.1, 1e-2, FLOW_PARAMS)


def test_isospectral_flows_commute(window):
    r = commuting_flow_residual(char("S1n"), char("S2n"), window, 0.05, 1e-3, FLOW_PARAMS)
    assert r <= 1e-7


def test_translation_and_scaling_do_not_commute():
    w = LatticeWindow((0, 0), generator(2).uniform(-1, 1, (5, 5)))
    eps = 0.1
    r = commuting_flow_residual(char("X0"), char("X1"), w, eps, 1e-3)
    assert abs(r - eps * (math.exp(eps) - 1)) <= 1e-6


def test_quadratic_flow_is_the_mobius_map():
    w = LatticeWindow((0, 0), generator(3).uniform(-1, 1, (4, 4)))
    out = integrate_flow(char("X2"), w, 0.1, 1e-3)
    assert np.allclose(out.values, w.values / (1 - 0.1 * w.values), atol=1e-10, rtol=0)


# -- differential-difference equation and the continuous limit --------------


def test_linear_profile_drifts_uniformly():
    p, tau = 1.5, 0.5
    ks = np.arange(-60, 61)
    out = semi_discrete_integrate(p, ks.astype(float), tau, 1e-2)
    centre = slice(50, 71)
    assert np.allclose(out[centre], ks[centre] + tau / p, atol=1e-10, rtol=0)


def test_reversal_with_opposite_p():
    p, tau = 1.2, 0.3
    ks = np.arange(-40, 41)
    f = SEED_PROFILES["sine"]
    a = semi_discrete_integrate(p, f(ks), tau, 1e-2)
    b = semi_discrete_integrate(-p, f(-ks), tau, 1e-2)
    centre = slice(30, 51)
    assert np.allclose(a[centre], b[::-1][centre], atol=1e-12)


def test_semi_discrete_pole():
    with pytest.raises(PoleError):
        semi_discrete_rhs(1.0, [0.0, 1.0, 0.0])


@pytest.mark.parametrize("seed", ["linear", "sine", "tanh"])
def test_limit_order_at_least_one(seed):
    rep = limit_order(1.0, (0.1, 0.05, 0.025), seed)
    assert not rep.degenerate
    assert rep.residuals[0] > rep.residuals[1] > rep.residuals[2]
    assert rep.min_order >= 1


def test_limit_residual_shrinks():
    prof = SEED_PROFILES["tanh"]
    assert limit_residual(1.0, 0.02, prof) < limit_residual(1.0, 0.04, prof)


def test_zero_delta_is_degenerate():
    assert limit_order(1.0, (0.1, 0.0)).degenerate
    with pytest.raises(DegenerateParameters):
        require_distinct(1.0, 1.0)
