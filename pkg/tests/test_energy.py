import numpy as np
import pytest

from lplab_py.core.energy import (
    DirichletProblem,
    EnergyScope,
    GraphFunction,
    SolverMethod,
    SolverTolerances,
    dirichlet_sum,
    bdp_norm,
    dp_norm,
    energy_gradient,
    energy_gradient_full,
    gradient_power,
    harmonic_extension,
    p_laplacian,
    p_laplacian_array,
    solve_dirichlet,
    tent_energy,
    tent_function,
)
from lplab_py.core.errors import ConfigError, FrontierVertexError, IllPosedProblemError
from lplab_py.core.graph import ball
from lplab_py.core.groups import GroupSpec


def _random_problem(group, radius, p, seed, **kwargs):
    b = ball(group, radius=radius)
    rng = np.random.default_rng(seed)
    frontier = [b.vertices[i] for i in b.frontier_indices]
    return DirichletProblem(b, {x: float(rng.uniform(-1, 1)) for x in frontier}, p, **kwargs)


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_dirichlet_on_the_line_is_linear(p):
    b = ball(GroupSpec.free_abelian(1), radius=16)
    problem = DirichletProblem.from_frontier_values(b, [0.0, 1.0], p)
    f, report = solve_dirichlet(problem)
    exact = np.array([(v[0] + 16) / 32 for v in b.vertices])
    assert np.max(np.abs(f.values - exact)) <= 1e-6
    assert report.residual <= 1e-8
    assert report.converged
    assert 0.0 <= f.values.min() and f.values.max() <= 1.0


@pytest.mark.parametrize("group, radius", [
    (GroupSpec.free(2), 3),
    (GroupSpec.free_abelian(2), 4),
])
def test_dirichlet_random_boundary(group, radius):
    problem = _random_problem(group, radius, 3.0, seed=5)
    f, report = solve_dirichlet(problem)
    assert report.converged
    lo, hi = report.boundary_range
    assert lo - 1e-9 <= f.values.min() and f.values.max() <= hi + 1e-9
    assert np.max(np.abs(p_laplacian_array(f, 3.0))) <= 1e-8
    trace = np.array(report.energy_trace)
    assert np.all(np.diff(trace) <= 1e-12 * max(1.0, trace[0]))


@pytest.mark.parametrize("radius", [2, 3, 4])
def test_free_group_branch_boundary_has_bounded_energy(radius):
    b = ball(GroupSpec.free(2), radius=radius)
    frontier = [b.vertices[i] for i in b.frontier_indices]
    values = {x: 1.0 if x[0] == 1 else -1.0 if x[0] == -1 else 0.0 for x in frontier}
    f, report = solve_dirichlet(DirichletProblem(b, values, 2.0))
    assert report.converged
    # the step function on the a and a^-1 branches has energy 4 at every radius
    assert report.energy <= 4.0 + 1e-9
    assert f.values.max() > 0 > f.values.min()


def test_p2_solution_is_the_harmonic_extension():
    problem = _random_problem(GroupSpec.free_abelian(2), 3, 2.0, seed=1)
    f, _ = solve_dirichlet(problem)
    expected = harmonic_extension(problem.ball, problem.boundary_array())
    assert np.allclose(f.values, expected, atol=1e-9)


def test_gradient_method_decreases_energy():
    problem = _random_problem(GroupSpec.free_abelian(2), 2, 3.0, seed=9,
                              tolerances=SolverTolerances(1e-8, 200), method=SolverMethod.GRADIENT)
    f, report = solve_dirichlet(problem)
    trace = np.array(report.energy_trace)
    assert trace[-1] <= trace[0]
    assert np.all(np.diff(trace) <= 1e-12 * max(1.0, trace[0]))
    assert report.method == "gradient"


def test_max_principle_is_reported_without_convergence():
    problem = _random_problem(GroupSpec.free(2), 3, 4.0, seed=5,
                              tolerances=SolverTolerances(1e-12, 1), method=SolverMethod.GRADIENT)
    _, report = solve_dirichlet(problem)
    assert report.iterations <= 1
    assert isinstance(report.max_principle, bool)
    assert report.to_dict()["max_principle"] == report.max_principle

    _, report = solve_dirichlet(_random_problem(GroupSpec.free(2), 3, 3.0, seed=5))
    assert report.converged
    assert report.max_principle is True

    leaf = ball(GroupSpec.free(2), radius=0)
    _, report = solve_dirichlet(DirichletProblem.from_frontier_values(leaf, [2.0], 3.0))
    assert report.max_principle is True


def test_energy_gradient_matches_finite_differences():
    b = ball(GroupSpec.free(2), radius=6)
    rng = np.random.default_rng(3)
    values = rng.standard_normal(len(b))
    p, h = 3.0, 1e-6
    grad = energy_gradient_full(b, values, p)

    def energy(v):
        return dirichlet_sum(GraphFunction(b, v), p)

    for i in rng.choice(len(b), size=40, replace=False):
        up, down = values.copy(), values.copy()
        up[i] += h
        down[i] -= h
        numeric = (energy(up) - energy(down)) / (2 * h)
        assert numeric == pytest.approx(grad[i], rel=1e-5, abs=1e-6)



def test_energy_gradient_on_free_values():
    problem = _random_problem(GroupSpec.free_abelian(2), 3, 3.0, seed=5)
    b = problem.ball
    assert not energy_gradient(GraphFunction.constant(b, 2.0), problem).any()
    f = GraphFunction(b, np.random.default_rng(6).standard_normal(len(b)))
    grad = energy_gradient(f, problem)
    assert grad.shape == (len(b.interior_indices),)
    np.testing.assert_allclose(grad, -2 * problem.p * p_laplacian_array(f, problem.p), rtol=1e-12, atol=1e-12)

    quadratic = DirichletProblem(b, problem.boundary_values, 2.0)
    grad = energy_gradient(f, quadratic)
    table = b.neighbor_table[b.interior_indices]
    laplacian = (f.values[b.interior_indices][:, None] - f.values[table]).sum(axis=1)
    np.testing.assert_allclose(grad, 4 * laplacian, rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
@pytest.mark.parametrize("n", [1, 10, 100])
def test_tent_energy_closed_form(n, p):
    f = tent_function(GroupSpec.free_abelian(1), n)
    assert dirichlet_sum(f, p) == pytest.approx(4 * n ** (1 - p), rel=1e-12)
    assert tent_energy(n, p) == pytest.approx(4 * n ** (1 - p), rel=1e-12)


def test_tent_needs_a_lattice():
    with pytest.raises(ConfigError):
        tent_function(GroupSpec.free(2), 3)


def test_local_quantities():
    b = ball(GroupSpec.free_abelian(1), radius=3)
    f = GraphFunction.from_callable(b, lambda x: float(x[0] ** 2))
    # (x+1)^2 - x^2 and (x-1)^2 - x^2 at x = 1
    assert gradient_power(f, (1,), 2.0) == pytest.approx(3 ** 2 + 1)
    assert p_laplacian(f, (1,), 2.0) == pytest.approx(2.0)
    assert p_laplacian(GraphFunction.from_callable(b, lambda x: float(x[0])), (0,), 3.0) == 0.0
    with pytest.raises(FrontierVertexError):
        p_laplacian(f, (3,), 2.0)
    with pytest.raises(FrontierVertexError):
        gradient_power(f, (3,), 2.0)
    assert gradient_power(f, (3,), 2.0, exclude_outside=True) == pytest.approx(25)


def test_energy_scopes():
    b = ball(GroupSpec.free_abelian(1), radius=2)
    f = GraphFunction.delta(b, (2,))
    # pairs (1,2) and (2,1) inside the ball; only (1,2) starts at an interior vertex
    assert dirichlet_sum(f, 2.0) == 2.0
    assert dirichlet_sum(f, 2.0, EnergyScope.INTERIOR) == 1.0
    assert dp_norm(GraphFunction.constant(b, -3.0), 2.0) == pytest.approx(3.0)


def test_dp_and_bdp_norms():
    b = ball(GroupSpec.free_abelian(1), radius=3)
    one = GraphFunction.constant(b, 1.0)
    assert dp_norm(one, 2.0) == pytest.approx(1.0)
    assert bdp_norm(one, 2.0) == pytest.approx(1.0)
    delta = GraphFunction.delta(b, (0,))
    assert dp_norm(delta, 2.0) == pytest.approx(5 ** 0.5)
    assert bdp_norm(delta, 2.0) == pytest.approx(3.0)


def test_boundary_must_cover_frontier():
    b = ball(GroupSpec.free_abelian(1), radius=2)
    with pytest.raises(ConfigError):
        DirichletProblem(b, {(2,): 1.0}, 2.0)
    with pytest.raises(ConfigError):
        DirichletProblem(b, {(2,): 1.0, (-2,): 0.0, (0,): 0.5}, 2.0)
    with pytest.raises(ConfigError):
        DirichletProblem(b, {(2,): 1.0, (-2,): 0.0}, 1.0)


def test_problem_without_frontier_is_ill_posed():
    b = ball(GroupSpec.cyclic(6), radius=5)
    problem = DirichletProblem(b, {}, 2.0)
    with pytest.raises(IllPosedProblemError):
        solve_dirichlet(problem)


def test_problem_from_document():
    problem = DirichletProblem.from_dict(
        {"group": "Z", "radius": 4, "p": 2, "boundary": {"-4": 0, "4": 2}, "method": "gradient"})
    assert problem.method == SolverMethod.GRADIENT
    assert problem.boundary_values == {(-4,): 0.0, (4,): 2.0}
    stretched = DirichletProblem.from_dict({"group": "Z^2", "radius": 2, "p": 3, "boundary": [0, 1]})
    assert set(stretched.boundary_values.values()) == {0.0, 1.0}
