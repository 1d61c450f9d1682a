import pytest
from hypothesis import given, strategies as st

from lplab_py.core.errors import ConfigError, GroupMismatchError, ResourceLimitError
from lplab_py.core.groups import GeneratingSet, GroupKind, GroupSpec, subgroup_contains

from conftest import free_words, lattice_points


@given(free_words(), free_words(), free_words())
def test_free_group_associative(x, y, z):
    F2 = GroupSpec.free(2)
    assert F2.mul(F2.mul(x, y), z) == F2.mul(x, F2.mul(y, z))


@given(free_words(), free_words())
def test_free_group_inverse_of_product(x, y):
    F2 = GroupSpec.free(2)
    assert F2.mul(x, F2.inv(x)) == ()
    assert F2.inv(F2.mul(x, y)) == F2.mul(F2.inv(y), F2.inv(x))


@given(lattice_points(), lattice_points())
def test_lattice_is_abelian(x, y):
    Z2 = GroupSpec.free_abelian(2)
    assert Z2.mul(x, y) == Z2.mul(y, x)
    assert Z2.mul(x, Z2.inv(x)) == (0, 0)


@given(free_words(max_size=8))
def test_words_stay_reduced(x):
    assert all(x[i] != -x[i + 1] for i in range(len(x) - 1))


def test_mul_cancels_at_the_junction():
    F2 = GroupSpec.free(2)
    assert F2.mul((1, 2), (-2, -1)) == ()
    assert F2.mul((1, 2), (-2, 1)) == (1, 1)


def test_cyclic_group_arithmetic():
    C6 = GroupSpec.cyclic(6)
    assert C6.mul(4, 5) == 3
    assert C6.inv(2) == 4
    assert C6.element_order(2) == 3
    assert C6.element_order(1) == 6
    assert not C6.is_infinite()
    assert C6.order() == 6


def test_product_group():
    G = GroupSpec.product(GroupSpec.free_abelian(1), GroupSpec.cyclic(3))
    assert G.name == "Z x C3"
    assert G.identity() == ((0,), 0)
    assert G.mul(((1,), 2), ((2,), 2)) == ((3,), 1)
    assert G.has_infinite_order(((1,), 0))
    assert not G.has_infinite_order(((0,), 1))
    assert G.element_order(((0,), 1)) == 3
    assert G.order() is None


def test_product_needs_two_factors():
    with pytest.raises(ConfigError):
        GroupSpec.product(GroupSpec.free(2))


@pytest.mark.parametrize("k", range(-5, 6))
def test_cyclic_log_in_free_group(k):
    F2 = GroupSpec.free(2)
    g = (1, 2)
    assert F2.cyclic_log(g, F2.power(g, k)) == k
    conj = (1, 2, -1)
    assert F2.cyclic_log(conj, F2.power(conj, k)) == k


def test_cyclic_log_rejects_outside_elements():
    F2 = GroupSpec.free(2)
    assert F2.cyclic_log((1,), (2,)) is None
    assert F2.cyclic_log((1, 2), (2, 1)) is None
    Z2 = GroupSpec.free_abelian(2)
    assert Z2.cyclic_log((2, 0), (6, 0)) == 3
    assert Z2.cyclic_log((2, 0), (5, 0)) is None
    assert Z2.cyclic_log((2, 0), (6, 1)) is None
    assert GroupSpec.cyclic(6).cyclic_log(2, 4) == 2
    assert GroupSpec.cyclic(6).cyclic_log(2, 3) is None


def test_word_length_standard():
    assert GroupSpec.free_abelian(2).word_length((3, -4)) == 7
    assert GroupSpec.free(2).word_length((1, 2, -1)) == 3
    assert GroupSpec.cyclic(6).word_length(4) == 2
    G = GroupSpec.product(GroupSpec.free_abelian(1), GroupSpec.cyclic(5))
    assert G.word_length(((-2,), 3)) == 4


def test_word_length_custom_generators():
    Z = GroupSpec.free_abelian(1)
    gens = GeneratingSet.from_elements(Z, [(1,), (-1,), (2,), (-2,)])
    assert Z.word_length((5,), gens) == 3
    assert Z.word_length((-4,), gens) == 2
    assert Z.word_length((0,), gens) == 0


def test_word_length_ungenerated_target():
    Z2 = GroupSpec.free_abelian(2)
    gens = GeneratingSet.from_elements(Z2, [(2, 0), (-2, 0), (0, 1), (0, -1)])
    with pytest.raises(ConfigError):
        Z2.word_length((1, 0), gens)
    skew = GeneratingSet.from_elements(Z2, [(2, 1), (-2, -1), (0, 2), (0, -2)])
    assert subgroup_contains(Z2, skew, (4, 0))
    assert subgroup_contains(Z2, skew, (2, 3))
    assert not subgroup_contains(Z2, skew, (0, 1))
    assert Z2.word_length((4, 0), skew) == 3
    with pytest.raises(ConfigError):
        Z2.word_length((0, 1), skew)

    C6 = GroupSpec.cyclic(6)
    evens = GeneratingSet.from_elements(C6, [2, 4])
    assert subgroup_contains(C6, evens, 4)
    with pytest.raises(ConfigError):
        C6.word_length(3, evens)


def test_word_length_search_is_capped_on_free_groups(monkeypatch):
    monkeypatch.setenv("LPLAB_MAX_VERTICES", "50")
    F2 = GroupSpec.free(2)
    squares = GeneratingSet.from_elements(F2, [(1, 1), (-1, -1), (2,), (-2,)])
    assert subgroup_contains(F2, squares, (1,)) is None
    with pytest.raises(ResourceLimitError):
        F2.word_length((1,), squares)


def test_standard_generator_order():
    assert GroupSpec.free_abelian(2).standard_generators().elements == ((1, 0), (-1, 0), (0, 1), (0, -1))
    assert GroupSpec.free(2).standard_generators().elements == ((1,), (-1,), (2,), (-2,))
    assert GroupSpec.cyclic(6).standard_generators().elements == (1, 5)
    assert GroupSpec.cyclic(2).standard_generators().elements == (1,)
    assert GroupSpec.cyclic(1).standard_generators().elements == ()


def test_generating_set_validation():
    Z = GroupSpec.free_abelian(1)
    with pytest.raises(ConfigError):
        GeneratingSet.from_elements(Z, [(1,), (1,), (-1,)])
    with pytest.raises(ConfigError):
        GeneratingSet.from_elements(Z, [(0,), (1,), (-1,)])
    with pytest.raises(ConfigError):
        GeneratingSet.from_elements(Z, [(1,), (2,), (-1,)])


def test_membership_checks():
    F2 = GroupSpec.free(2)
    assert F2.contains((1, 2))
    assert not F2.contains((1, -1))
    assert not F2.contains((3,))
    with pytest.raises(GroupMismatchError):
        F2.check((0, 0))
    with pytest.raises(GroupMismatchError):
        GroupSpec.free_abelian(2).check((1,))


def test_format_element():
    F5 = GroupSpec.free(5)
    assert F5.format_element(()) == "e"
    assert F5.format_element((1, -2)) == "a b^-1"
    assert F5.format_element((5,)) == "f"
    assert GroupSpec.free_abelian(2).format_element((1, -3)) == "1,-3"


def test_names_and_kinds():
    assert GroupSpec.free_abelian(1).name == "Z"
    assert GroupSpec.free_abelian(3).name == "Z^3"
    assert GroupSpec.free(2).kind == GroupKind.FREE
    assert str(GroupSpec.cyclic(4)) == "C4"


@given(st.integers(0, 2 ** 32 - 1))
def test_random_elements_belong_to_group(seed):
    import numpy as np
    rng = np.random.default_rng(seed)
    for group in (GroupSpec.free(3), GroupSpec.free_abelian(2), GroupSpec.cyclic(7)):
        assert group.contains(group.random_element(rng, 5))
