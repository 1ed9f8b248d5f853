from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import nonzero_rationals, rationals
from lskdv.errors import MixedKindError, PoleError, ZeroDenominator
from lskdv.linalg import nullspace, rref, solve_exact
from lskdv.numerics import (
    Dual,
    check_kinds,
    derivative,
    dual_partial,
    exact_sqrt,
    format_scalar,
    parse_scalar,
    rational_normalize,
    safe_div,
    seed,
)


def test_dual_polynomial_derivative_is_exact():
    assert dual_partial(lambda x: x**3 - 2 * x + 1, Fraction(1, 3)) == Fraction(1, 3) - 2


def test_dual_quotient_rule():
    f = lambda x: (x + 1) / (x * x + 2)
    x = Fraction(2, 5)
    want = ((x * x + 2) - (x + 1) * 2 * x) / (x * x + 2) ** 2
    assert dual_partial(f, x) == want


def test_nested_duals_keep_partials_separate():
    x, y = seed(Fraction(2)), seed(Fraction(3))
    r = x * x * y
    assert derivative(r, y).value == 4  # d/dy = x^2, still carrying d/dx
    assert derivative(derivative(r, y), x) == 4  # d2/dxdy = 2x


def test_dual_division_by_zero_is_a_pole():
    with pytest.raises(PoleError):
        Dual(Fraction(1), 1) / Dual(Fraction(0), 1)


def test_constant_result_has_zero_derivative():
    x = seed(Fraction(5))
    assert derivative(Fraction(7), x) == 0


def test_mixed_kinds_are_rejected():
    with pytest.raises(MixedKindError):
        check_kinds(Fraction(1, 2), 0.5)
    with pytest.raises(MixedKindError):
        Dual(Fraction(1), 1) + 0.5
    assert check_kinds(1, Fraction(1, 3)) == "rational"
    assert check_kinds(1, 2.0) == "float"


def test_safe_div_names_the_vanishing_expression():
    with pytest.raises(PoleError) as info:
        safe_div(1, Fraction(0), "u[+1] - u[-1]", where=(2, 3))
    assert "u[+1] - u[-1]" in str(info.value) and info.value.where == (2, 3)
    assert safe_div(np.ones(2), np.array([2.0, 4.0]), "d").tolist() == [0.5, 0.25]


def test_rational_normalize():
    assert rational_normalize(4, -6) == Fraction(-2, 3)
    with pytest.raises(ZeroDenominator):
        rational_normalize(1, 0)


@given(rationals)
def test_format_parse_roundtrip(q):
    text = format_scalar(q)
    assert "/" in text and parse_scalar(text) == q


def test_parse_scalar_kinds():
    assert parse_scalar("3/5") == Fraction(3, 5)
    assert parse_scalar("3/4", "float") == 0.75
    with pytest.raises(MixedKindError):
        parse_scalar(0.1)


@given(nonzero_rationals)
def test_exact_sqrt_of_squares(q):
    assert exact_sqrt(q * q) == abs(q)


def test_exact_sqrt_irrational():
    assert exact_sqrt(Fraction(1, 2)) is None
    assert exact_sqrt(Fraction(-4)) is None


def test_rref_and_nullspace():
    rows = [[1, 2, 3], [2, 4, 6], [1, 0, 1]]
    red, piv = rref(rows)
    assert piv == [0, 1]
    basis = nullspace(rows)
    assert len(basis) == 1
    assert all(sum(Fraction(a) * b for a, b in zip(r, basis[0])) == 0 for r in rows)


@given(st.lists(st.lists(rationals, min_size=3, max_size=3), min_size=1, max_size=4))
def test_nullspace_vectors_are_annihilated(rows):
    for v in nullspace(rows, 3):
        assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)


def test_solve_exact():
    assert solve_exact([[1, 1], [1, -1]], [3, 1]) == [2, 1]
    with pytest.raises(ValueError):
        solve_exact([[1, 1], [1, 1]], [1, 2])
