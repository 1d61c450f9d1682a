from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lplab_py.core.algebra import (
    I,
    ONE,
    AveragingSpec,
    ExactScalar,
    GroupRingMatrix,
    GroupVector,
    PolynomialOverC,
    ScalarMode,
    VectorTuple,
    YoungForm,
    averaging_element,
    convolve,
    distinct_average,
    factor_witness,
    gr_matrix_apply,
    inverse_residual,
    linear_factor,
    mixed_norm,
    neumann_inverse,
    one_norm,
    p_norm,
    sup_norm,
    young_check,
)
from lplab_py.core.cyclic import CyclicVector
from lplab_py.core.errors import ConfigError, GroupMismatchError, ResourceLimitError, ScalarModeError
from lplab_py.core.experiments import random_vector
from lplab_py.core.groups import GroupSpec

from conftest import free_words

F2 = GroupSpec.free(2)


@st.composite
def f2_vectors(draw, max_size=4):
    terms = draw(st.dictionaries(free_words(max_size=3), st.integers(-3, 3), max_size=max_size))
    return GroupVector.from_terms(F2, terms)


def test_exact_scalar_arithmetic():
    assert I * I == -1
    omega = ExactScalar(Fraction(3, 5), Fraction(4, 5))
    assert omega * omega.conjugate() == 1
    assert omega.abs2() == 1
    assert (ONE / omega) == omega.conjugate()
    assert ExactScalar(1, 2) - ExactScalar(1, 2) == 0
    assert not ExactScalar(0)
    assert complex(ExactScalar(Fraction(1, 2), -1)) == complex(0.5, -1)


def test_exact_scalar_refuses_floats():
    with pytest.raises(ScalarModeError):
        ExactScalar(0.5)
    with pytest.raises(ScalarModeError):
        ONE + 0.5


def test_modes_do_not_mix():
    Z = GroupSpec.free_abelian(1)
    exact = GroupVector.delta(Z)
    floating = GroupVector.delta(Z, mode=ScalarMode.FLOAT)
    with pytest.raises(ScalarModeError):
        exact + floating
    assert exact.to_float() == floating


def test_convolution_in_free_group_is_not_commutative():
    a = GroupVector.delta(F2, (1,))
    b = GroupVector.delta(F2, (2,))
    assert convolve(a, b) == GroupVector.delta(F2, (1, 2))
    assert convolve(a, b) != convolve(b, a)


@given(f2_vectors(), f2_vectors(), f2_vectors())
def test_convolution_is_associative(a, b, c):
    assert convolve(convolve(a, b), c) == convolve(a, convolve(b, c))


@given(f2_vectors(), f2_vectors())
def test_convolution_distributes(a, b):
    c = GroupVector.delta(F2, (1, -2), 2)
    assert convolve(a + b, c) == convolve(a, c) + convolve(b, c)


@given(f2_vectors(), st.lists(free_words(max_size=2), min_size=1, max_size=3))
def test_delta_shifts_preserve_norms(v, words):
    for w in words:
        shifted = convolve(GroupVector.delta(F2, w), v)
        assert one_norm(shifted) == pytest.approx(one_norm(v))
        assert p_norm(shifted, 2) == pytest.approx(p_norm(v, 2))


def test_norms():
    Z = GroupSpec.free_abelian(1)
    v = GroupVector.from_terms(Z, {(0,): 3, (1,): -4})
    assert one_norm(v) == 7
    assert p_norm(v, 2) == pytest.approx(5)
    assert sup_norm(v) == 4
    t = VectorTuple.of(v, GroupVector.delta(Z))
    assert p_norm(t, 2) == pytest.approx(np.sqrt(26))
    assert mixed_norm(t, 2) == pytest.approx(np.sqrt(50))
    with pytest.raises(ConfigError):
        p_norm(v, 0.5)
    with pytest.raises(ConfigError):
        p_norm(v, 1.0)
    with pytest.raises(ConfigError):
        mixed_norm(t, 1.0)
    with pytest.raises(ConfigError):
        young_check(GroupVector.delta(Z), GroupVector.delta(Z), 1.0)


def _log_grid(count=20, top=10_000):
    return sorted({int(round(x)) for x in np.logspace(0, np.log10(top), count)})


@pytest.mark.parametrize("p", [1.25, 1.5, 2.0, 3.0])
def test_averaging_norm_law(p):
    Z2 = GroupSpec.free_abelian(2)
    for n in _log_grid():
        spec = AveragingSpec(Z2, (1, 0), 1, n)
        assert CyclicVector.averaging(n, 1).p_norm(p) == pytest.approx(spec.norm_law(p), rel=1e-12)
    for n in (1, 7, 64, 300):
        spec = AveragingSpec(F2, (1, 2), -1, n)
        assert p_norm(averaging_element(spec), p) == pytest.approx(n ** ((1 - p) / p), rel=1e-12)


def test_averaging_element_coefficients():
    Z = GroupSpec.free_abelian(1)
    x = averaging_element(AveragingSpec(Z, (1,), I, 4))
    # (1/n) omega^-k at g^k
    assert x[(1,)] == ExactScalar(0, Fraction(-1, 4))
    assert x[(2,)] == ExactScalar(Fraction(-1, 4))
    assert x[(4,)] == ExactScalar(Fraction(1, 4))
    assert x.coefficient_sum() == 0


def test_averaging_spec_validation():
    with pytest.raises(ConfigError):
        AveragingSpec(GroupSpec.cyclic(6), 1)
    with pytest.raises(ConfigError):
        AveragingSpec(GroupSpec.free_abelian(1), (1,), 2)
    with pytest.raises(ConfigError):
        AveragingSpec(GroupSpec.free_abelian(1), (1,), 1, 0)
    with pytest.raises(ConfigError):
        AveragingSpec(GroupSpec.free_abelian(1), (0,), 1)


def test_non_gaussian_exact_omega_is_capped():
    spec = AveragingSpec(GroupSpec.free_abelian(1), (1,), ExactScalar(Fraction(3, 5), Fraction(4, 5)), 2001)
    with pytest.raises(ResourceLimitError):
        averaging_element(spec)


@pytest.mark.parametrize("omega", [1, -1, I, -I, ExactScalar(Fraction(3, 5), Fraction(4, 5))])
@pytest.mark.parametrize("n", [1, 2, 5, 17])
def test_factor_witness(omega, n):
    for group, g in ((F2, (1, 2)), (GroupSpec.free_abelian(2), (1, -1))):
        spec = AveragingSpec(group, g, omega, n)
        d = factor_witness(spec)
        lhs = convolve(linear_factor(group, g, omega), d)
        assert lhs == GroupVector.delta(group) - averaging_element(spec)
        assert len(d) <= n


@pytest.mark.parametrize("omega", [1, -1, I])
def test_factor_witness_up_to_64(omega):
    for group, g in ((GroupSpec.free_abelian(1), (1,)), (F2, (1, 2))):
        delta = GroupVector.delta(group)
        factor = linear_factor(group, g, omega)
        for n in range(1, 65):
            spec = AveragingSpec(group, g, omega, n)
            assert convolve(factor, factor_witness(spec)) == delta - averaging_element(spec)


def test_factor_witness_needs_exact_mode():
    spec = AveragingSpec(F2, (1,), complex(0, 1), 3)
    with pytest.raises(ScalarModeError):
        factor_witness(spec)


@pytest.mark.parametrize("omega", [2, Fraction(1, 2), ExactScalar(0, 2), ExactScalar(0, Fraction(1, 2))])
def test_neumann_residual(omega):
    Z = GroupSpec.free_abelian(1)
    u = neumann_inverse(Z, (1,), omega, 30)
    assert len(u) == 31
    assert inverse_residual(Z, (1,), omega, u) == 2.0 ** -31


def test_neumann_in_free_group_float_mode():
    u = neumann_inverse(F2, (1, 2), 3.0, 20)
    assert inverse_residual(F2, (1, 2), 3.0, u) == pytest.approx(3.0 ** -21)


def test_neumann_rejects_unit_omega():
    Z = GroupSpec.free_abelian(1)
    with pytest.raises(ConfigError):
        neumann_inverse(Z, (1,), 1, 10)
    with pytest.raises(ConfigError):
        neumann_inverse(Z, (1,), I, 10)
    with pytest.raises(ConfigError):
        neumann_inverse(Z, (1,), 2, -1)


@pytest.mark.parametrize("p", [1.5, 2.0, 4.0])
def test_distinct_average_norm_law(p):
    elements = [(1,), (2,), (1, 1), (-1, 2), ()]
    x = distinct_average(F2, elements, [1, -1, I, -I, 1])
    assert p_norm(x, p) == pytest.approx(len(elements) ** ((1 - p) / p))
    with pytest.raises(ConfigError):
        distinct_average(F2, [(1,), (1,)])
    with pytest.raises(ConfigError):
        distinct_average(F2, [(1,)], [2])


@pytest.mark.parametrize("group", [GroupSpec.free_abelian(2), F2], ids=["Z2", "F2"])
def test_young_scalar_form(group):
    rng = np.random.default_rng(7)
    for trial in range(1000):
        p = (1.25, 2.0, 3.0)[trial % 3]
        alpha = random_vector(group, rng, 4, 3, ScalarMode.EXACT)
        beta = random_vector(group, rng, 4, 3, ScalarMode.EXACT)
        assert young_check(alpha, beta, p).holds


@pytest.mark.parametrize("form", [YoungForm.L1_ON_TUPLE, YoungForm.LP_ON_TUPLE])
def test_young_tuple_forms(form):
    rng = np.random.default_rng(11)
    for group in (GroupSpec.free_abelian(2), F2):
        for trial in range(50):
            alpha = random_vector(group, rng, 4, 3, ScalarMode.EXACT)
            beta = VectorTuple.of(*(random_vector(group, rng, 3, 3, ScalarMode.EXACT) for _ in range(3)))
            check = young_check(alpha, beta, 1.5 + trial % 3, form)
            assert check.holds
            assert check.slack >= -1e-9


def test_young_equality_for_deltas():
    check = young_check(GroupVector.delta(F2, (1,)), GroupVector.delta(F2, (2,)), 2.0)
    assert check.lhs == pytest.approx(check.rhs)


def test_young_form_mismatch():
    v = GroupVector.delta(F2)
    with pytest.raises(ConfigError):
        young_check(v, v, 2.0, YoungForm.LP_ON_TUPLE)


def test_matrix_products_and_involution():
    Z2 = GroupSpec.free_abelian(2)
    a = GroupVector.from_terms(Z2, {(1, 0): 1, (0, 0): -1})
    b = GroupVector.from_terms(Z2, {(0, 1): 1, (0, 0): -1})
    d0 = GroupRingMatrix.from_rows([[a, b]])
    d1 = GroupRingMatrix.from_rows([[b], [-a]])
    assert (d0 @ d1).is_zero()
    assert (d1.involution_transpose() @ d0.involution_transpose()).is_zero()
    assert d0.involution_transpose().shape == (2, 1)
    assert d0.involution_transpose().involution_transpose() == d0
    assert (d1 @ d0).nonzero_positions() == [(1, 1), (1, 2), (2, 1), (2, 2)]


def test_row_and_column_actions():
    Z = GroupSpec.free_abelian(1)
    m = GroupRingMatrix.from_rows([[linear_factor(Z, (1,), 1)]])
    f = VectorTuple.of(GroupVector.delta(Z, (3,)))
    assert m.act_on_row(f)[0] == GroupVector.from_terms(Z, {(4,): 1, (3,): -1})
    assert m.apply(f)[0] == m.act_on_row(f)[0]
    assert GroupRingMatrix.identity(Z, 2).apply(VectorTuple.of(f[0], f[0])) == VectorTuple.of(f[0], f[0])



def test_gr_matrix_apply():
    Z = GroupSpec.free_abelian(1)
    window = GroupVector.from_terms(Z, {(k,): 1 for k in range(6)})
    m = GroupRingMatrix.from_rows([[linear_factor(Z, (1,), 1)]])
    assert gr_matrix_apply(m, VectorTuple.of(window))[0] == GroupVector.from_terms(Z, {(6,): 1, (0,): -1})

    Z2 = GroupSpec.free_abelian(2)
    column = GroupRingMatrix.from_rows([[linear_factor(Z2, (1, 0), 1)], [linear_factor(Z2, (0, 1), 1)]])
    out = gr_matrix_apply(column, VectorTuple.of(GroupVector.delta(Z2)))
    assert out[0] == GroupVector.from_terms(Z2, {(1, 0): 1, (0, 0): -1})
    assert out[1] == GroupVector.from_terms(Z2, {(0, 1): 1, (0, 0): -1})
    with pytest.raises(GroupMismatchError):
        gr_matrix_apply(column, VectorTuple.of(GroupVector.delta(Z2), GroupVector.delta(Z2)))


def test_polynomial_division():
    poly = PolynomialOverC.from_coeffs([-1, 0, 1])
    quotient, remainder = poly.divide_linear(1)
    assert quotient == PolynomialOverC.from_coeffs([1, 1])
    assert remainder == 0
    _, remainder = poly.divide_linear(2)
    assert remainder == 3
    assert PolynomialOverC.linear(1) * quotient == poly
    assert poly.evaluate(I) == -2
