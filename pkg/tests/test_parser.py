from fractions import Fraction

import pytest

from lplab_py.core.algebra import ExactScalar, GroupVector, ScalarMode, VectorTuple
from lplab_py.core.errors import ConfigError, GroupSpecSyntaxError, ScalarModeError
from lplab_py.core.groups import GroupSpec
from lplab_py.core.parser import (
    parse_element,
    parse_group,
    parse_int_list,
    parse_number_list,
    parse_scalar,
    parse_vector,
    vector_from_mapping,
)


@pytest.mark.parametrize("text, expected", [
    ("Z", GroupSpec.free_abelian(1)),
    ("Z^3", GroupSpec.free_abelian(3)),
    ("F2", GroupSpec.free(2)),
    ("F_3", GroupSpec.free(3)),
    ("C6", GroupSpec.cyclic(6)),
    (" Z^2  x C3 ", GroupSpec.product(GroupSpec.free_abelian(2), GroupSpec.cyclic(3))),
])
def test_parse_group(text, expected):
    assert parse_group(text) == expected


@pytest.mark.parametrize("text, position", [
    ("Z x Y", 4),
    ("Q", 0),
    ("Z x", 3),
    ("ZC2", 1),
])
def test_parse_group_reports_position(text, position):
    with pytest.raises(GroupSpecSyntaxError) as info:
        parse_group(text)
    assert info.value.position == position


def test_group_syntax_error_is_a_config_error():
    with pytest.raises(ConfigError):
        parse_group("F0")


def test_parse_elements():
    F2 = GroupSpec.free(2)
    assert parse_element(F2, "e") == ()
    assert parse_element(F2, "a b^-1") == (1, -2)
    assert parse_element(F2, "a a^-1 b") == (2,)
    assert parse_element(F2, "b^3") == (2, 2, 2)
    Z2 = GroupSpec.free_abelian(2)
    assert parse_element(Z2, "1,0") == (1, 0)
    assert parse_element(Z2, "(-2, 5)") == (-2, 5)
    assert parse_element(GroupSpec.cyclic(6), "8") == 2
    G = GroupSpec.product(GroupSpec.free_abelian(1), GroupSpec.cyclic(3))
    assert parse_element(G, "2; 1") == ((2,), 1)


def test_parse_element_errors():
    with pytest.raises(GroupSpecSyntaxError):
        parse_element(GroupSpec.free(2), "c")
    with pytest.raises(GroupSpecSyntaxError):
        parse_element(GroupSpec.free_abelian(2), "1")
    with pytest.raises(GroupSpecSyntaxError):
        parse_element(GroupSpec.cyclic(4), "x")


def test_parse_scalars():
    assert parse_scalar("2i") == ExactScalar(0, 2)
    assert parse_scalar("i") == ExactScalar(0, 1)
    assert parse_scalar("-1/2") == ExactScalar(Fraction(-1, 2))
    assert parse_scalar("3/5+4/5i") == ExactScalar(Fraction(3, 5), Fraction(4, 5))
    assert parse_scalar("1-i") == ExactScalar(1, -1)
    assert parse_scalar("0.6+0.8i") == complex(0.6, 0.8)
    assert parse_scalar("1", ScalarMode.FLOAT) == complex(1, 0)


def test_decimal_scalar_in_exact_mode():
    with pytest.raises(ScalarModeError):
        parse_scalar("0.5", ScalarMode.EXACT)


def test_parse_vector():
    Z = GroupSpec.free_abelian(1)
    v = parse_vector(Z, "[0] - 2*[1] + (1/2+i)*[3]")
    assert v.mode == ScalarMode.EXACT
    assert v[(0,)] == 1
    assert v[(1,)] == -2
    assert v[(3,)] == ExactScalar(Fraction(1, 2), 1)
    assert parse_vector(Z, "0").is_zero()


def test_parse_vector_accumulates_duplicates():
    Z = GroupSpec.free_abelian(1)
    assert parse_vector(Z, "[1] + [1] - [0]") == GroupVector.from_terms(Z, {(1,): 2, (0,): -1})
    assert parse_vector(Z, "[1] - [1]").is_zero()


def test_parse_vector_float_mode():
    v = parse_vector(GroupSpec.free(2), "0.5*[a] - [b^-1]")
    assert v.mode == ScalarMode.FLOAT
    assert v[(1,)] == 0.5


def test_parse_vector_requires_signs_between_terms():
    with pytest.raises(GroupSpecSyntaxError):
        parse_vector(GroupSpec.free_abelian(1), "[0] [1]")


def test_vector_documents():
    Z2 = GroupSpec.free_abelian(2)
    v = vector_from_mapping({"group": "Z^2", "terms": {"0,0": 1, "1,0": -1}})
    assert v == GroupVector.from_terms(Z2, {(0, 0): 1, (1, 0): -1})
    t = vector_from_mapping({"group": "Z^2", "components": ["[0,0]", "[0,1] - [0,0]"]})
    assert isinstance(t, VectorTuple)
    assert len(t) == 2
    with pytest.raises(ConfigError):
        vector_from_mapping({"vector": "[0]"})
    with pytest.raises(ConfigError):
        vector_from_mapping({"group": "Z"})


def test_number_lists():
    assert parse_number_list("0, 1") == [0.0, 1.0]
    assert parse_int_list("4,8,16") == [4, 8, 16]
    assert parse_int_list("1..6") == [1, 2, 3, 4, 5, 6]
    with pytest.raises(ConfigError):
        parse_int_list("1,x")
