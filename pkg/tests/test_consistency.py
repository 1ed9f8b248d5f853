from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import nonzero_rationals, rationals
from lskdv.consistency import CubeData, cac_check
from lskdv.errors import SingularCorner

F = Fraction


def test_cube_example():
    rep = cac_check(CubeData(F(0), F(1), F(3), F(-2), (F(2), F(1), F(5))))
    assert rep.agree and rep.spread == 0
    assert rep.candidates[0] == rep.candidates[1] == rep.candidates[2]


@settings(max_examples=60)
@given(st.lists(rationals, min_size=4, max_size=4, unique=True),
       st.lists(nonzero_rationals, min_size=3, max_size=3, unique=True))
def test_three_way_agreement(xs, alphas):
    try:
        rep = cac_check(CubeData(*xs, tuple(alphas)))
    except SingularCorner:
        return
    assert rep.agree and rep.spread == 0


def test_float_cube_agrees_within_tolerance():
    rep = cac_check(CubeData(0.0, 1.0, 3.0, -2.0, (2.0, 1.0, 5.0)))
    assert rep.agree and rep.spread < 1e-12


def test_singular_face_is_labelled():
    # x1 == x2 with equal alphas kills the (1,2) corner coefficient
    with pytest.raises(SingularCorner) as info:
        cac_check(CubeData(F(0), F(1), F(1), F(2), (F(1), F(1), F(3))))
    assert info.value.face == "(1,2)"


def test_record_is_serializable():
    rec = cac_check(CubeData(F(0), F(1), F(3), F(-2), (F(2), F(1), F(5)))).to_record()
    assert rec["agree"] is True and len(rec["x123"]) == 3 and rec["spread"] == "0/1"
