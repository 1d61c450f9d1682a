import math

import numpy as np
import pytest

from lplab_py.core.algebra import (
    AveragingSpec,
    ExactScalar,
    GroupVector,
    ScalarMode,
    VectorTuple,
)
from lplab_py.core.cohomology import (
    ComplexSpec,
    Window,
    WindowPolicy,
    builtin_complex,
    compose_check,
    composed_density,
    density_experiment,
    distance_to_image,
    invariant_vectors,
    recipe_n,
    smallest_singular_value,
    truncate,
)
from lplab_py.core.errors import ConfigError, GroupMismatchError
from lplab_py.core.graph import ball
from lplab_py.core.groups import GroupSpec
from lplab_py.core.parser import parse_vector

Z = GroupSpec.free_abelian(1)
Z2 = GroupSpec.free_abelian(2)
F2 = GroupSpec.free(2)


@pytest.mark.parametrize("name", ["Z", "Z2", "Z^2", "F2", "F3"])
def test_builtin_complexes_compose_to_zero(name):
    spec = builtin_complex(name)
    check = compose_check(spec)
    assert check.passed
    assert check.residual_support == []
    for entry in spec.differentials[0].rows[0]:
        assert entry.coefficient_sum() == 0


def test_homology_side_composes_to_zero():
    star = builtin_complex("Z2").homology_side()
    assert (star[1] @ star[0]).is_zero()


def test_custom_complex_from_document():
    doc = {
        "name": "koszul",
        "group": "Z^2",
        "ranks": [1, 2, 1],
        "differentials": [
            [["[1,0] - [0,0]", "[0,1] - [0,0]"]],
            [["[0,1] - [0,0]"], ["-[1,0] + [0,0]"]],
        ],
    }
    assert compose_check(ComplexSpec.from_dict(doc)).passed
    doc["differentials"][1] = [["[0,1] - [0,0]"], ["[1,0] - [0,0]"]]
    broken = compose_check(ComplexSpec.from_dict(doc))
    assert not broken.passed
    assert broken.residual_support == [(1, 1)]


def test_complex_validation():
    d0 = builtin_complex("Z").differentials[0]
    with pytest.raises(ConfigError):
        ComplexSpec(Z, (2, 1), (d0,))
    with pytest.raises(ConfigError):
        ComplexSpec(Z, (1, 2), (d0,))
    not_augmented = {"group": "Z", "ranks": [1, 1], "differentials": [[["[1] + [0]"]]]}
    with pytest.raises(ConfigError):
        ComplexSpec.from_dict(not_augmented)
    with pytest.raises(ConfigError):
        builtin_complex("Q")


@pytest.mark.parametrize("radius", [1, 2, 4])
def test_truncation_shapes(radius):
    d0 = builtin_complex("Z2").differentials[0]
    b = ball(Z2, radius=radius)
    size = 2 * radius ** 2 + 2 * radius + 1
    bigger = 2 * (radius + 1) ** 2 + 2 * (radius + 1) + 1
    assert truncate(d0, b, WindowPolicy.CLIP).shape == (2 * size, size)
    assert truncate(d0, b, WindowPolicy.EXTEND).shape == (2 * bigger, size)


def test_extend_reproduces_the_exact_image():
    d0 = builtin_complex("Z2").differentials[0]
    b = ball(Z2, radius=2)
    op = truncate(d0, b, WindowPolicy.EXTEND)
    f = parse_vector(Z2, "[0,0] - 2*[1,1] + 3*[-2,0] + [0,-1]")
    u = np.zeros(op.shape[1])
    for x, c in f.coeffs.items():
        u[op.column(0, x)] = float(c.re)
    image = d0.act_on_row(VectorTuple.of(f))
    assert np.allclose(op.apply(u), op.encode_target(image))


def test_clip_drops_outside_outputs():
    d0 = builtin_complex("Z").differentials[0]
    op = truncate(d0, Window.interval(0, 3), WindowPolicy.CLIP)
    dense = op.dense()
    assert dense.shape == (4, 4)
    assert np.array_equal(np.diag(dense), -np.ones(4))
    assert np.array_equal(np.diag(dense, -1), np.ones(3))


@pytest.mark.parametrize("radius", [2, 4, 8])
def test_sigma_min_on_the_line(radius):
    d0 = builtin_complex("Z").differentials[0]
    op = truncate(d0, ball(Z, radius=radius), WindowPolicy.CLIP)
    n = 2 * radius + 1
    assert smallest_singular_value(op) == pytest.approx(2 * math.sin(math.pi / (2 * (2 * n + 1))), rel=1e-9)


def test_sigma_min_decreases_with_the_window():
    d0 = builtin_complex("Z").differentials[0]
    values = [smallest_singular_value(truncate(d0, ball(Z, radius=r), WindowPolicy.EXTEND)) for r in (2, 4, 8, 16)]
    assert all(b < a for a, b in zip(values, values[1:]))


def test_sigma_min_is_zero_for_wide_operators():
    d1 = builtin_complex("Z2").differentials[1]
    op = truncate(d1, ball(Z2, radius=2), WindowPolicy.CLIP)
    assert op.shape[0] < op.shape[1]
    assert smallest_singular_value(op) == 0.0


@pytest.mark.parametrize("p", [1.5, 2.0])
def test_distance_to_image_decays(p):
    d0 = builtin_complex("Z").differentials[0]
    distances = []
    for n in (10, 100, 1000):
        op = truncate(d0, Window.interval(0, n), WindowPolicy.EXTEND)
        result = distance_to_image(op, GroupVector.delta(Z), p)
        assert result.converged
        assert result.distance <= n ** ((1 - p) / p)
        assert result.distance == pytest.approx((n + 2) ** ((1 - p) / p), rel=1e-6)
        distances.append(result.distance)
    assert distances[0] > distances[1] > distances[2]


def test_distance_target_outside_window():
    d0 = builtin_complex("Z").differentials[0]
    op = truncate(d0, Window.interval(0, 4), WindowPolicy.EXTEND)
    with pytest.raises(GroupMismatchError):
        distance_to_image(op, GroupVector.delta(Z, (-3,)), 2.0)


def test_recipe():
    assert recipe_n(5e-4, 2.0) == 4000001
    assert recipe_n(2.0, 2.0) == 1
    n = recipe_n(1e-2, 3.0)
    assert n ** (-2 / 3) < 1e-2 <= (n - 1) ** (-2 / 3)
    with pytest.raises(ConfigError):
        recipe_n(0.1, 1.0)


def test_density_on_the_line():
    report = density_experiment(GroupVector.delta(Z), AveragingSpec(Z, (1,)), 1e-3, 2.0)
    assert report.n == 4000001
    assert report.within_epsilon
    assert report.achieved == pytest.approx(report.n ** -0.5)
    assert report.witness.verified
    row = report.to_row()
    assert row["verified"] is True
    assert row["provenance"] == "exact"


def test_density_in_free_group():
    b = parse_vector(F2, "[e] - 2*[b]")
    report = density_experiment(b, AveragingSpec(F2, (2,), -1), 0.1, 2.0)
    assert report.n == 3601
    assert report.within_epsilon
    assert report.witness.verified


def test_density_of_a_tuple():
    t = VectorTuple.of(parse_vector(Z2, "[0,0] - [1,0]"), parse_vector(Z2, "[0,1]"))
    report = density_experiment(t, AveragingSpec(Z2, (1, 1), ExactScalar(0, 1)), 0.05, 3.0)
    assert report.within_epsilon
    assert report.witness.verified


def test_density_with_non_gaussian_omega():
    from fractions import Fraction
    omega = ExactScalar(Fraction(3, 5), Fraction(4, 5))
    report = density_experiment(GroupVector.delta(Z), AveragingSpec(Z, (1,), omega), 0.5, 2.0)
    assert report.n == 17
    assert report.within_epsilon
    assert report.witness.verified


def test_density_float_mode_is_not_certified():
    b = GroupVector.delta(Z, mode=ScalarMode.FLOAT)
    report = density_experiment(b, AveragingSpec(Z, (1,), complex(0.6, 0.8)), 0.1, 2.0)
    assert report.within_epsilon
    assert not report.witness.verified
    assert report.to_row()["provenance"] == "float"


def test_density_forced_n():
    report = density_experiment(GroupVector.delta(Z), AveragingSpec(Z, (1,)), 1e-3, 2.0, n=100)
    assert report.n == 100
    assert not report.within_epsilon


def test_composed_density():
    specs = [AveragingSpec(Z, (1,), 1), AveragingSpec(Z, (1,), -1)]
    report = composed_density(GroupVector.delta(Z), specs, 1e-2, 2.0)
    assert report.within_epsilon
    assert report.verified
    assert [s.n for s in report.stages] == [40001, 640001]
    assert report.stages[1].lipschitz == pytest.approx(2.0)


def test_composed_density_needs_one_generator():
    specs = [AveragingSpec(F2, (1,)), AveragingSpec(F2, (2,))]
    with pytest.raises(ConfigError):
        composed_density(GroupVector.delta(F2), specs, 0.1, 2.0)


@pytest.mark.parametrize("group, radius, decay", [
    (Z, 3, 0),
    (F2, 2, 0),
    (GroupSpec.cyclic(6), 3, 1),
    (GroupSpec.product(Z, GroupSpec.cyclic(3)), 2, 0),
])
def test_invariant_vectors(group, radius, decay):
    report = invariant_vectors(ball(group, radius=radius))
    assert report.dimension == 1
    assert report.decay_dimension == decay
    assert report.certified
