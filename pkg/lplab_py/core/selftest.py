"""
@ai-metadata {
    "domain": "selftest",
    "description": "Quick invariant suites per module, run by every subcommand's --selftest flag",
    "dependencies": ["groups.py", "graph.py", "algebra.py", "cyclic.py", "energy.py", "cohomology.py", "invariance.py", "experiments.py"]
}
"""

import logging
import math
import time
import traceback
from typing import Callable, Dict, List, Tuple

import numpy as np

from lplab_py.core.algebra import (
    AveragingSpec,
    GroupVector,
    I,
    VectorTuple,
    factor_witness,
    inverse_residual,
    neumann_inverse,
    ScalarMode,
    p_norm,
    young_check,
)
from lplab_py.core.cohomology import (
    WindowPolicy,
    builtin_complex,
    compose_check,
    density_experiment,
    invariant_vectors,
    smallest_singular_value,
    truncate,
)
from lplab_py.core.cyclic import CyclicVector
from lplab_py.core.energy import (
    DirichletProblem,
    GraphFunction,
    dirichlet_sum,
    energy_gradient_full,
    solve_dirichlet,
    tent_energy,
    tent_function,
)
from lplab_py.core.experiments import ExperimentReport, random_vector, sphere_counts
from lplab_py.core.graph import ball
from lplab_py.core.groups import GeneratingSet, GroupSpec
from lplab_py.core.invariance import diff_decompose, sobolev_ratio, theta, translate
from lplab_py.core.parser import parse_vector

logger = logging.getLogger(__name__)

Check = Tuple[str, Callable[[], Tuple[bool, str]]]


# -- group-model ------------------------------------------------------------

def _group_axioms() -> Tuple[bool, str]:
    rng = np.random.default_rng(0)
    for group in (GroupSpec.free_abelian(2), GroupSpec.free(2), GroupSpec.cyclic(6),
                  GroupSpec.product(GroupSpec.free_abelian(1), GroupSpec.cyclic(3))):
        for _ in range(50):
            x, y, z = (group.random_element(rng, 4) for _ in range(3))
            if group.mul(group.mul(x, y), z) != group.mul(x, group.mul(y, z)):
                return False, f"associativity fails in {group.name}"
            if group.mul(x, group.inv(x)) != group.identity():
                return False, f"inverse fails in {group.name}"
    return True, "associativity and inverses on 200 random triples"


def _ball_sizes() -> Tuple[bool, str]:
    for group, radius in ((GroupSpec.free_abelian(1), 5), (GroupSpec.free_abelian(2), 4),
                          (GroupSpec.free(2), 4), (GroupSpec.cyclic(6), 4)):
        size = len(ball(group, None, radius))
        if size != sum(sphere_counts(group, radius)):
            return False, f"|B_{radius}| in {group.name} is {size}"
    return True, "ball sizes match closed forms"


def _bfs_agrees() -> Tuple[bool, str]:
    group = GroupSpec.free(2)
    b = ball(group, None, 4)
    custom = GeneratingSet.from_elements(group, list(group.standard_generators().elements))
    for v in b.vertices[:60]:
        if group.word_length(v) != b.length_of(v) or group.word_length(v, custom) != b.length_of(v):
            return False, f"length of {group.format_element(v)} disagrees"
    return True, "normal-form length equals BFS depth on the F2 ball"


# -- group-algebra ----------------------------------------------------------

def _norm_law() -> Tuple[bool, str]:
    for p in (1.25, 1.5, 2.0, 3.0):
        for n in (1, 7, 100, 1000):
            norm = CyclicVector.averaging(n, 1).p_norm(p)
            law = n ** ((1.0 - p) / p)
            if abs(norm - law) > 1e-12 * law:
                return False, f"||x_{n}||_{p} = {norm!r}, law {law!r}"
    return True, "norm law within 1e-12 relative"


def _factor_witness() -> Tuple[bool, str]:
    group = GroupSpec.free_abelian(1)
    for omega in (1, -1, I):
        for n in (1, 5, 16):
            factor_witness(AveragingSpec(group, (1,), omega, n))
    return True, "exact witnesses for omega in {1, -1, i}"


def _neumann() -> Tuple[bool, str]:
    group = GroupSpec.free_abelian(1)
    residual = inverse_residual(group, (1,), 2, neumann_inverse(group, (1,), 2, 30))
    return abs(residual - 2.0 ** -31) <= 1e-15 * 2.0 ** -31, f"residual {residual!r}"


def _young() -> Tuple[bool, str]:
    rng = np.random.default_rng(1)
    group = GroupSpec.free(2)
    for _ in range(30):
        alpha = random_vector(group, rng, 4, 3, ScalarMode.FLOAT)
        beta = random_vector(group, rng, 4, 3, ScalarMode.FLOAT)
        if not young_check(alpha, beta, 1.5).holds:
            return False, "scalar Young bound violated"
    return True, "30 random pairs on F2"


def _density() -> Tuple[bool, str]:
    group = GroupSpec.free_abelian(1)
    report = density_experiment(GroupVector.delta(group), AveragingSpec(group, (1,)), 1e-2, 2.0)
    return report.within_epsilon and report.witness.verified, f"n={report.n} error {report.achieved:.3e}"


# -- dirichlet-energy -------------------------------------------------------

def _linear_solution() -> Tuple[bool, str]:
    b = ball(GroupSpec.free_abelian(1), None, 8)
    f, report = solve_dirichlet(DirichletProblem.from_frontier_values(b, [0.0, 1.0], 3.0))
    xs = np.array([v[0] for v in b.vertices], dtype=np.float64)
    error = float(np.max(np.abs(f.values - (xs + 8) / 16)))
    return report.converged and error <= 1e-6, f"sup error {error:.2e}"


def _gradient() -> Tuple[bool, str]:
    b = ball(GroupSpec.free(2), None, 3)
    rng = np.random.default_rng(2)
    values = rng.standard_normal(len(b))
    grad = energy_gradient_full(b, values, 3.0)
    h = 1e-6
    worst = 0.0
    for i in rng.choice(len(b), size=10, replace=False):
        up, down = values.copy(), values.copy()
        up[i] += h
        down[i] -= h
        fd = (dirichlet_sum(GraphFunction(b, up), 3.0) - dirichlet_sum(GraphFunction(b, down), 3.0)) / (2 * h)
        worst = max(worst, abs(fd - grad[i]) / max(1.0, abs(grad[i])))
    return worst <= 1e-5, f"worst relative error {worst:.2e}"


def _tent() -> Tuple[bool, str]:
    group = GroupSpec.free_abelian(1)
    for n in (1, 10):
        energy = dirichlet_sum(tent_function(group, n), 2.0)
        if abs(energy - tent_energy(n, 2.0)) > 1e-12:
            return False, f"tent energy {energy} at n={n}"
    return True, "I_2(tent_n) = 4/n"


# -- cohomology-lab ---------------------------------------------------------

def _compose() -> Tuple[bool, str]:
    for name in ("Z", "Z2", "F2", "F3"):
        if not compose_check(builtin_complex(name)).passed:
            return False, f"{name} fails d d = 0"
    return True, "built-in complexes compose to zero"


def _sigma_decreasing() -> Tuple[bool, str]:
    d0 = builtin_complex("Z").differentials[0]
    values = [smallest_singular_value(truncate(d0, ball(d0.group, None, n), WindowPolicy.CLIP)) for n in (2, 4, 8)]
    return all(a > b for a, b in zip(values, values[1:])), "sigma_min " + ", ".join(f"{v:.4f}" for v in values)


def _dual_maps() -> Tuple[bool, str]:
    spec = builtin_complex("Z2")
    f = VectorTuple.of(parse_vector(spec.group, "[0,0] - 2*[1,1] + (1/2+i)*[0,-1]"))
    out = spec.differentials[1].act_on_row(spec.differentials[0].act_on_row(f))
    return out.is_zero(), "f d_0 d_1 = 0"


def _invariants() -> Tuple[bool, str]:
    infinite = invariant_vectors(ball(GroupSpec.free(2), None, 2))
    finite = invariant_vectors(ball(GroupSpec.cyclic(6), None, 3))
    ok = (infinite.dimension, infinite.decay_dimension, finite.dimension, finite.decay_dimension) == (1, 0, 1, 1)
    return ok, f"F2: {infinite.dimension}/{infinite.decay_dimension}, C6: {finite.dimension}/{finite.decay_dimension}"


# -- invariance -------------------------------------------------------------

def _translation() -> Tuple[bool, str]:
    group = GroupSpec.free(2)
    f = parse_vector(group, "[a] - 2*[a b] + (1/2)*[b^-1]")
    h = (1, 2)
    ok = abs(p_norm(translate(f, h), 2.5) - p_norm(f, 2.5)) <= 1e-12
    return ok, "translation preserves the 2.5-norm"


def _diff() -> Tuple[bool, str]:
    group = GroupSpec.free_abelian(1)
    f = parse_vector(group, "[2] - 2*[1] + [0]")
    decomposition = diff_decompose(f)
    return decomposition.reconstruct() == f and len(decomposition.terms) == 2, "two-term exact decomposition"


def _theta_identity() -> Tuple[bool, str]:
    group = GroupSpec.free_abelian(2)
    rng = np.random.default_rng(3)
    for _ in range(10):
        f = random_vector(group, rng, 6, 3, ScalarMode.FLOAT)
        real = GroupVector.from_terms(group, [(x, complex(c).real) for x, c in f.items()], ScalarMode.FLOAT)
        b = ball(group, None, real.support_radius() + 1)
        values = np.zeros(len(b))
        for x, c in real.items():
            values[b.index_of(x)] = complex(c).real
        expected = dirichlet_sum(GraphFunction(b, values), 2.5)
        got = theta(real).energy(2.5)
        if abs(got - expected) > 1e-9 * max(1.0, expected):
            return False, f"theta energy {got} vs {expected}"
    return True, "energy identity on 10 random vectors"


def _sobolev_bound() -> Tuple[bool, str]:
    result = sobolev_ratio(GroupSpec.free(2), None, 2, 2.0, starts=3, max_iters=300)
    ceiling = 2 * 4
    floor = 2 * (4 - 2 * math.sqrt(3))
    return floor - 1e-9 <= result.value <= ceiling, f"lambda(2) = {result.value:.4f}"


SUITES: Dict[str, List[Check]] = {
    "group-model": [("group_axioms", _group_axioms), ("ball_sizes", _ball_sizes), ("bfs_lengths", _bfs_agrees)],
    "group-algebra": [("norm_law", _norm_law), ("factor_witness", _factor_witness), ("neumann", _neumann),
                      ("young", _young), ("density", _density)],
    "dirichlet-energy": [("linear_solution", _linear_solution), ("gradient", _gradient), ("tent", _tent)],
    "cohomology-lab": [("compose", _compose), ("sigma_decreasing", _sigma_decreasing), ("dual_maps", _dual_maps),
                       ("invariant_vectors", _invariants)],
    "invariance": [("translation", _translation), ("diff", _diff), ("theta_identity", _theta_identity),
                   ("sobolev_bound", _sobolev_bound), ("tent", _tent)],
}

SUITE_FOR_EXPERIMENT: Dict[str, str] = {
    "ball": "group-model",
    "averaging": "group-algebra",
    "young": "group-algebra",
    "witness": "group-algebra",
    "neumann": "group-algebra",
    "density": "group-algebra",
    "dirichlet": "dirichlet-energy",
    "cohomology": "cohomology-lab",
    "amenability": "invariance",
    "tilf-diff": "invariance",
    "tent": "invariance",
}


def run_selftest(experiment: str) -> ExperimentReport:
    """Run the invariant suite behind an experiment; a failing or raising check gives passed = False."""
    suite = SUITE_FOR_EXPERIMENT[experiment]
    start = time.perf_counter()
    rows = []
    for name, check in SUITES[suite]:
        try:
            passed, detail = check()
        except Exception as exc:
            logger.debug("selftest %s raised:\n%s", name, traceback.format_exc())
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        rows.append({"check": name, "passed": bool(passed), "detail": detail})
    rows.sort(key=lambda row: row["check"])
    return ExperimentReport(f"{experiment}:selftest", {"suite": suite}, rows, time.perf_counter() - start)
