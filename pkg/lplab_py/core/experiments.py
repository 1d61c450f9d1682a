"""
@ai-metadata {
    "domain": "experiments",
    "description": "Experiment configs with flag > file > default precedence, the run dispatcher, grid fan-out and reproducible reports",
    "dependencies": ["schema.py", "parser.py", "algebra.py", "cyclic.py", "energy.py", "cohomology.py", "invariance.py"],
    "invariants": [
        "Rows are sorted by their primary parameter, independent of completion order",
        "Equal configs give equal reports apart from wall_time",
        "Reports round-trip through to_dict/from_dict"
    ]
}
"""

import json
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import partial
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from lplab_py import __version__
from lplab_py.core.algebra import (
    AveragingSpec,
    ExactScalar,
    GroupRingMatrix,
    GroupVector,
    ScalarMode,
    VectorTuple,
    factor_witness,
    gaussian_unit_index,
    inverse_residual,
    neumann_inverse,
    young_check,
    YoungForm,
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
    smallest_singular_value,
    truncate,
)
from lplab_py.core.cyclic import CyclicVector, averaging_factorization
from lplab_py.core.energy import (
    DirichletProblem,
    SolverMethod,
    SolverTolerances,
    p_laplacian_array,
    solve_dirichlet,
)
from lplab_py.core.errors import ConfigError, InvariantViolationError
from lplab_py.core.graph import ball
from lplab_py.core.groups import GeneratingSet, GroupElement, GroupKind, GroupSpec
from lplab_py.core.invariance import (
    approximate_by_diff,
    diff_decompose,
    free_group_ratio_floor,
    sobolev_sweep,
    tent_report,
)
from lplab_py.core.parser import (
    parse_element,
    parse_elements,
    parse_group,
    parse_scalar,
    vector_from_mapping,
)
from lplab_py.core.schema import experiment_names, get_schema, load_document, validate_config
from lplab_py.utils.file_utils import rows_to_csv, write_csv, write_json

logger = logging.getLogger(__name__)

WORKERS_ENV = "LPLAB_WORKERS"

DEFAULTS: Dict[str, Dict[str, Any]] = {
    "ball": {"group": "Z", "radii": [0, 1, 2, 3, 4]},
    "averaging": {"group": "Z", "omega": 1, "p": 2.0, "ns": [1, 2, 4, 8, 16]},
    "young": {"group": "Z^2", "p": 2.0, "trials": 100, "max_support": 5, "max_length": 3,
              "tuple_size": 2, "mode": "exact"},
    "witness": {"group": "Z", "omega": 1, "ns": [1, 2, 4, 8, 16, 32, 64]},
    "neumann": {"group": "Z", "omega": 2, "truncations": [10, 20, 30]},
    "density": {"group": "Z", "omega": 1, "p": 2.0, "epsilon": 1e-3},
    "dirichlet": {"group": "Z", "radius": 16, "p": 3.0, "boundary": [0, 1]},
    "cohomology": {"complex": "Z2", "experiment": "compose", "windows": [2, 4, 8], "degree": 0, "p": 2.0},
    "amenability": {"group": "Z", "p": 2.0, "radii": [8, 16, 32], "starts": 8, "max_iters": 20000},
    "tilf-diff": {"group": "Z", "epsilon": 0.1, "p": 2.0},
    "tent": {"group": "Z", "p": 2.0, "ns": [1, 10, 100]},
}

# a higher layer that sets either key replaces both in the lower layers
_PAIRED_KEYS = (("n", "ns"), ("radius", "radii"), ("window", "windows"), ("truncation", "truncations"))

_PRIMARY_KEYS: Dict[str, Tuple[str, ...]] = {
    "ball": ("R",),
    "averaging": ("n",),
    "young": ("form",),
    "witness": ("n",),
    "neumann": ("K",),
    "density": ("stage", "n"),
    "dirichlet": ("R",),
    "cohomology": ("check", "N", "n", "R"),
    "amenability": ("R",),
    "tilf-diff": ("term", "n"),
    "tent": ("n",),
}

_ECHO_EXCLUDED = ("output", "verbose", "workers", "format")


# -- configuration ----------------------------------------------------------

@dataclass
class ExperimentConfig:
    """A validated experiment configuration."""
    experiment: str
    values: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.experiment not in DEFAULTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}; expected one of {', '.join(experiment_names())}")
        validate_config(self.experiment, self.values, source=f"{self.experiment} config")
        p = self.values.get("p")
        if p is not None and not p > 1:
            raise ConfigError(f"p must be > 1, got {p}")

    @classmethod
    def resolve(cls, experiment: str, flags: Optional[Mapping[str, Any]] = None,
                file_values: Optional[Mapping[str, Any]] = None) -> "ExperimentConfig":
        """
        Merge defaults, a config file and explicit flags, highest last.

        Args:
            experiment: Experiment name.
            flags: Values given explicitly on the command line.
            file_values: Values read from a config file.

        Returns:
            The validated config.
        """
        if experiment not in DEFAULTS:
            raise ConfigError(f"unknown experiment {experiment!r}")
        merged: Dict[str, Any] = {}
        for layer in (DEFAULTS[experiment], dict(file_values or {}), dict(flags or {})):
            for single, plural in _PAIRED_KEYS:
                if single in layer or plural in layer:
                    merged.pop(single, None)
                    merged.pop(plural, None)
            merged.update(layer)
        merged.setdefault("seed", 0)
        merged.setdefault("format", "json")
        return cls(experiment, merged)

    @classmethod
    def from_file(cls, experiment: str, file_path: str) -> "ExperimentConfig":
        return cls.resolve(experiment, file_values=load_document(file_path, f"config:{experiment}"))

    def get(self, key: str, default: Any = None) -> Any:
        return self.values.get(key, default)

    def grid(self, single: str, plural: str) -> List[Any]:
        if single in self.values:
            return [self.values[single]]
        return list(self.values.get(plural, []))

    @property
    def seed(self) -> int:
        return int(self.values.get("seed", 0))

    @property
    def format(self) -> str:
        return self.values.get("format", "json")

    @property
    def workers(self) -> int:
        if "workers" in self.values:
            return int(self.values["workers"])
        raw = os.environ.get(WORKERS_ENV, "1")
        try:
            workers = int(raw)
        except ValueError as exc:
            raise ConfigError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from exc
        if workers < 1:
            raise ConfigError(f"{WORKERS_ENV} must be >= 1, got {workers}")
        return workers

    def params(self) -> Dict[str, Any]:
        return {k: v for k, v in sorted(self.values.items()) if k not in _ECHO_EXCLUDED}


# -- reports ----------------------------------------------------------------

def to_plain(value: Any) -> Any:
    """Convert results into JSON-ready values."""
    if isinstance(value, dict):
        return {str(k): to_plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_plain(v) for v in value.tolist()]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (ExactScalar, Fraction, complex)):
        return str(value)
    return value


@dataclass
class ExperimentReport:
    experiment: str
    params: Dict[str, Any]
    rows: List[Dict[str, Any]]
    wall_time: float = 0.0
    version: str = __version__

    def to_dict(self, include_timing: bool = True) -> Dict[str, Any]:
        data = {
            "experiment": self.experiment,
            "params": self.params,
            "rows": self.rows,
            "wall_time": self.wall_time if include_timing else 0.0,
            "version": self.version,
        }
        return to_plain(data)

    def to_json(self, include_timing: bool = True) -> str:
        return json.dumps(self.to_dict(include_timing), indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        return rows_to_csv(self.rows)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ExperimentReport":
        get_schema("report").require_valid(dict(data), source="report")
        return cls(data["experiment"], dict(data["params"]), [dict(r) for r in data["rows"]],
                   float(data["wall_time"]), data["version"])

    @classmethod
    def from_json(cls, text: str) -> "ExperimentReport":
        return cls.from_dict(json.loads(text))

    @property
    def non_converged(self) -> bool:
        return any(row.get("converged") is False for row in self.rows)

    @property
    def failed_checks(self) -> bool:
        return any(row.get("passed") is False for row in self.rows)

    def write(self, file_path: str, fmt: str = "json") -> None:
        if fmt == "csv":
            write_csv(file_path, self.rows)
        else:
            write_json(file_path, self.to_dict())


def _row_sort_key(experiment: str) -> Callable[[Dict[str, Any]], Tuple]:
    keys = _PRIMARY_KEYS.get(experiment, ())

    def key(row: Dict[str, Any]) -> Tuple:
        return tuple((0, row[k]) if row.get(k) is not None else (1, 0) for k in keys)
    return key


def fan_out(fn: Callable[[Any], Any], items: Sequence[Any], workers: int) -> List[Any]:
    """Map fn over items, in a process pool when more than one worker is allowed."""
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))


def run(config: ExperimentConfig) -> ExperimentReport:
    """Dispatch a config to its experiment and collect sorted rows."""
    start = time.perf_counter()
    runner = RUNNERS[config.experiment]
    logger.debug("running %s with %s", config.experiment, config.params())
    rows = [to_plain(row) for row in runner(config)]
    rows.sort(key=_row_sort_key(config.experiment))
    report = ExperimentReport(config.experiment, to_plain(config.params()), rows, time.perf_counter() - start)
    if config.get("output"):
        report.write(config.get("output"), config.format)
    return report


# -- shared decoding --------------------------------------------------------

def _group(config: ExperimentConfig) -> GroupSpec:
    return parse_group(str(config.get("group", "Z")))


def _gens(config: ExperimentConfig, group: GroupSpec) -> Optional[GeneratingSet]:
    texts = config.get("generators")
    if not texts:
        return None
    return GeneratingSet.from_elements(group, parse_elements(group, texts))


def _generator(config: ExperimentConfig, group: GroupSpec) -> GroupElement:
    if config.get("g") is not None:
        return parse_element(group, str(config.get("g")))
    return group.standard_generators().elements[0]


def _omega(value: Any):
    return parse_scalar(value if not isinstance(value, str) else value.strip())


def _target(config: ExperimentConfig, group: GroupSpec, mode: ScalarMode = ScalarMode.EXACT):
    path = config.get("target")
    if not path:
        return GroupVector.delta(group, mode=mode)
    return vector_from_mapping(load_document(path, "vector"), group)


def _provenance(mode: ScalarMode) -> str:
    return "exact" if mode == ScalarMode.EXACT else "float"


# -- group-model ------------------------------------------------------------

def sphere_counts(group: GroupSpec, radius: int) -> List[int]:
    """|S_r| for r = 0..radius under the standard generators."""
    if group.kind == GroupKind.FREE_ABELIAN:
        d = group.rank
        balls = [sum(2 ** i * math.comb(d, i) * math.comb(r, i) for i in range(d + 1)) for r in range(radius + 1)]
        return [balls[0]] + [balls[r] - balls[r - 1] for r in range(1, radius + 1)]
    if group.kind == GroupKind.FREE:
        k = group.rank
        return [1] + [2 * k * (2 * k - 1) ** (r - 1) for r in range(1, radius + 1)]
    if group.kind == GroupKind.CYCLIC:
        m = group.rank
        counts = [0] * (radius + 1)
        for x in range(m):
            r = min(x, m - x)
            if r <= radius:
                counts[r] += 1
        return counts
    counts = [1] + [0] * radius
    for factor in group.factors:
        counts = np.convolve(counts, sphere_counts(factor, radius))[: radius + 1].tolist()
    return [int(c) for c in counts]


def _ball_row(group: GroupSpec, gens: Optional[GeneratingSet], radius: int) -> Dict[str, Any]:
    b = ball(group, gens, radius)
    closed = sum(sphere_counts(group, radius)) if gens is None or gens.standard else None
    return {"R": radius, "size": len(b), "sphere": len(b.sphere(radius)), "closed_form": closed,
            "provenance": "exact"}


def _run_ball(config: ExperimentConfig) -> List[Dict[str, Any]]:
    group = _group(config)
    gens = _gens(config, group)
    return fan_out(partial(_ball_row, group, gens), config.grid("radius", "radii"), config.workers)


# -- group-algebra ----------------------------------------------------------

def _averaging_row(spec: AveragingSpec, p: float) -> Dict[str, Any]:
    norm = CyclicVector.averaging(spec.n, spec.omega).p_norm(p)
    law = spec.norm_law(p)
    return {"n": spec.n, "p": p, "omega": str(spec.omega), "norm": norm, "law": law,
            "rel_error": abs(norm - law) / law, "provenance": "float"}


def _run_averaging(config: ExperimentConfig) -> List[Dict[str, Any]]:
    group = _group(config)
    base = AveragingSpec(group, _generator(config, group), _omega(config.get("omega", 1)))
    specs = [base.with_n(int(n)) for n in config.grid("n", "ns")]
    return fan_out(partial(_averaging_row, p=float(config.get("p"))), specs, config.workers)


def random_vector(group: GroupSpec, rng: np.random.Generator, max_support: int, max_length: int,
                  mode: ScalarMode) -> GroupVector:
    """A random sparse vector with small rational (Exact) or Gaussian (Float) coefficients."""
    terms = []
    for _ in range(int(rng.integers(1, max_support + 1))):
        x = group.random_element(rng, max_length)
        if mode == ScalarMode.EXACT:
            re = Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 5)))
            im = Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 5)))
            terms.append((x, ExactScalar(re, im)))
        else:
            terms.append((x, complex(rng.standard_normal(), rng.standard_normal())))
    return GroupVector.from_terms(group, terms, mode)


def _run_young(config: ExperimentConfig) -> List[Dict[str, Any]]:
    group = _group(config)
    p = float(config.get("p"))
    mode = ScalarMode(config.get("mode", "exact"))
    rng = np.random.default_rng(config.seed)
    trials = int(config.get("trials"))
    support, length = int(config.get("max_support")), int(config.get("max_length"))
    size = int(config.get("tuple_size"))
    slacks: Dict[YoungForm, List[float]] = {form: [] for form in YoungForm}
    for _ in range(trials):
        alpha = random_vector(group, rng, support, length, mode)
        beta = random_vector(group, rng, support, length, mode)
        slacks[YoungForm.SCALAR].append(young_check(alpha, beta, p).slack)
        tup = VectorTuple(group, tuple(random_vector(group, rng, support, length, mode) for _ in range(size)), mode)
        slacks[YoungForm.L1_ON_TUPLE].append(young_check(alpha, tup, p, YoungForm.L1_ON_TUPLE).slack)
        slacks[YoungForm.LP_ON_TUPLE].append(young_check(alpha, tup, p, YoungForm.LP_ON_TUPLE).slack)
    rows = []
    for form, values in slacks.items():
        rows.append({"form": form.value, "p": p, "trials": trials, "min_slack": min(values),
                     "violations": sum(1 for s in values if s < -1e-9), "provenance": "float"})
    return rows


def _witness_row(group: GroupSpec, g: GroupElement, omega: Any, n: int) -> Dict[str, Any]:
    mode = ScalarMode.EXACT if isinstance(omega, ExactScalar) else ScalarMode.FLOAT
    if mode == ScalarMode.EXACT and gaussian_unit_index(omega) is None:
        d = factor_witness(AveragingSpec(group, g, omega, n))
        return {"n": n, "omega": str(omega), "support": len(d), "residual": 0.0, "verified": True,
                "provenance": "exact"}
    x, d = averaging_factorization(n, omega)
    gap = CyclicVector.linear_factor(omega) * d - (CyclicVector.one(x.mode) - x)
    residual = gap.one_norm()
    verified = gap.is_zero() if mode == ScalarMode.EXACT else residual <= 1e-12 * n
    if mode == ScalarMode.EXACT and not verified:
        raise InvariantViolationError(f"(g - omega) d differs from 1 - x_n at n={n}")
    return {"n": n, "omega": str(omega), "support": int(np.count_nonzero(d.moduli())), "residual": residual,
            "verified": bool(verified), "provenance": _provenance(mode)}


def _run_witness(config: ExperimentConfig) -> List[Dict[str, Any]]:
    group = _group(config)
    spec = AveragingSpec(group, _generator(config, group), _omega(config.get("omega", 1)))
    ns = [int(n) for n in config.grid("n", "ns")]
    return fan_out(partial(_witness_row, group, spec.g, spec.omega), ns, config.workers)


def _neumann_row(group: GroupSpec, g: GroupElement, omega: Any, truncation: int) -> Dict[str, Any]:
    u = neumann_inverse(group, g, omega, truncation)
    residual = inverse_residual(group, g, omega, u)
    modulus = abs(omega)
    expected = modulus ** -(truncation + 1) if modulus > 1 else modulus ** (truncation + 1)
    return {"K": truncation, "omega": str(omega), "residual": residual, "expected": expected,
            "rel_error": abs(residual - expected) / expected, "provenance": _provenance(u.mode)}


def _run_neumann(config: ExperimentConfig) -> List[Dict[str, Any]]:
    group = _group(config)
    g = _generator(config, group)
    omega = _omega(config.get("omega"))
    ks = [int(k) for k in config.grid("truncation", "truncations")]
    return fan_out(partial(_neumann_row, group, g, omega), ks, config.workers)


def _run_density(config: ExperimentConfig) -> List[Dict[str, Any]]:
    group = _group(config)
    g = _generator(config, group)
    p, epsilon = float(config.get("p")), float(config.get("epsilon"))
    if config.get("omegas"):
        specs = [AveragingSpec(group, g, _omega(w)) for w in config.get("omegas")]
        mode = specs[0].mode
        b = _target(config, group, mode)
        report = composed_density(b, specs, epsilon, p)
        return [{"stage": k, "omega": str(stage.omega), "n": stage.n, "tolerance": stage.tolerance,
                 "lipschitz": stage.lipschitz, "norm_xn": stage.norm_xn, "verified": stage.verified,
                 "achieved": report.achieved, "within_epsilon": report.within_epsilon,
                 "provenance": "exact" if stage.verified else "float"}
                for k, stage in enumerate(report.stages, start=1)]
    spec = AveragingSpec(group, g, _omega(config.get("omega", 1)))
    b = _target(config, group, spec.mode)
    n = config.get("n")
    report = density_experiment(b, spec, epsilon, p, int(n) if n is not None else None)
    return [report.to_row()]


# -- dirichlet-energy -------------------------------------------------------

def build_problem(config: ExperimentConfig) -> DirichletProblem:
    """The Dirichlet problem named by a problem file or by inline settings."""
    if config.get("problem"):
        data = load_document(config.get("problem"), "problem")
        return DirichletProblem.from_dict(data)
    group = _group(config)
    b = ball(group, _gens(config, group), int(config.get("radius")))
    tolerances = SolverTolerances(
        residual_tol=float(config.get("residual_tol", SolverTolerances.residual_tol)),
        max_iters=int(config.get("max_iters", SolverTolerances.max_iters)),
    )
    method = SolverMethod(config.get("method", SolverMethod.NEWTON.value))
    p = float(config.get("p"))
    boundary = config.get("boundary")
    if isinstance(boundary, Mapping):
        values = {parse_element(group, str(k)): float(v) for k, v in boundary.items()}
        return DirichletProblem(b, values, p, tolerances, method)
    return DirichletProblem.from_frontier_values(b, [float(v) for v in boundary], p,
                                                 tolerances=tolerances, method=method)


def _run_dirichlet(config: ExperimentConfig) -> List[Dict[str, Any]]:
    problem = build_problem(config)
    f, report = solve_dirichlet(problem)
    b = problem.ball
    row = {"R": b.radius, "p": problem.p, "vertices": len(b), "energy": report.energy,
           "residual": report.residual, "iterations": report.iterations, "converged": report.converged,
           "method": report.method,
           "max_principle": report.max_principle,
           "linear_sup_error": None, "provenance": "float"}
    if b.group.kind == GroupKind.FREE_ABELIAN and b.group.rank == 1 and b.radius > 0:
        R = b.radius
        left, right = f((-R,)), f((R,))
        xs = np.array([v[0] for v in b.vertices], dtype=np.float64)
        linear = left + (right - left) * (xs + R) / (2 * R)
        row["linear_sup_error"] = float(np.max(np.abs(f.values - linear)))
    if config.get("solution"):
        write_json(config.get("solution"), {"solution": f.to_dict(), "report": report.to_dict()})
    if config.get("residuals"):
        residuals = p_laplacian_array(f, problem.p)
        vertices = [b.group.format_element(b.vertices[i]) for i in b.interior_indices]
        write_csv(config.get("residuals"), [{"vertex": v, "residual": float(r)} for v, r in zip(vertices, residuals)],
                  ["vertex", "residual"])
    return [row]


# -- cohomology-lab ---------------------------------------------------------

def load_complex(name: str) -> ComplexSpec:
    """A built-in complex (Z, Z2, F<k>) or a complex document."""
    if os.path.exists(name):
        return ComplexSpec.from_dict(load_document(name, "complex"))
    return builtin_complex(name)


def _support_rows(check: str, spec: ComplexSpec, pairs: Sequence[Tuple[int, List[Tuple[int, int]]]]) -> Dict[str, Any]:
    support, failed = [], []
    for degree, positions in pairs:
        if positions:
            failed.append(degree)
        support.extend([list(pos) for pos in positions])
    return {"check": check, "complex": spec.name, "pass": not support, "residual_support": support,
            "failed_degrees": failed, "provenance": "exact"}


def _sigma_row(matrix: GroupRingMatrix, policy: WindowPolicy, radius: int) -> Dict[str, Any]:
    op = truncate(matrix, ball(matrix.group, None, radius), policy)
    rows, cols = op.shape
    return {"check": "sigma", "N": radius, "rows": rows, "cols": cols, "policy": policy.value,
            "sigma_min": smallest_singular_value(op), "provenance": "float"}


def _distance_window(group: GroupSpec, n: int) -> Window:
    # Z windows start at the identity, matching the support of the averaging elements
    if group.kind == GroupKind.FREE_ABELIAN and group.rank == 1:
        return Window.interval(0, n)
    return Window.from_ball(ball(group, None, n))


def _distance_row(matrix: GroupRingMatrix, target, policy: WindowPolicy, p: float, max_iters: int,
                  bound_law: bool, n: int) -> Dict[str, Any]:
    op = truncate(matrix, _distance_window(matrix.group, n), policy)
    result = distance_to_image(op, target, p, max_iters=max_iters)
    bound = float(n) ** ((1.0 - p) / p) if bound_law and n > 0 else None
    return {"check": "distance", "n": n, "p": p, "policy": policy.value, "distance": result.distance,
            "bound": bound, "converged": result.converged, "iterations": result.iterations,
            "provenance": "float"}


def _invariant_row(group: GroupSpec, gens: Optional[GeneratingSet], radius: int) -> Dict[str, Any]:
    report = invariant_vectors(ball(group, gens, radius))
    return {"check": "invariant", "R": radius, "components": report.components, "dimension": report.dimension,
            "decay_dimension": report.decay_dimension, "certified": report.certified,
            "finite_group": group.order() is not None, "provenance": "exact"}


def _run_cohomology(config: ExperimentConfig) -> List[Dict[str, Any]]:
    experiment = config.get("check") or config.get("experiment", "compose")
    windows = [int(w) for w in config.grid("window", "windows")]
    if experiment == "invariant":
        group = _group(config) if config.get("group") else load_complex(config.get("complex")).group
        return fan_out(partial(_invariant_row, group, _gens(config, group)), windows, config.workers)

    spec = load_complex(config.get("complex"))
    if experiment == "compose":
        pairs = [(r.degree, r.support) for r in compose_check(spec).residuals]
        return [_support_rows("compose", spec, pairs)]
    if experiment == "homology":
        star = spec.homology_side()
        pairs = [(n, (star[n + 1] @ star[n]).nonzero_positions()) for n in range(spec.length - 1)]
        return [_support_rows("homology", spec, pairs)]

    degree = int(config.get("degree", 0))
    if degree >= spec.length:
        raise ConfigError(f"complex {spec.name} has no differential d_{degree}")
    matrix = spec.differentials[degree]
    if experiment == "sigma":
        policy = WindowPolicy(config.get("policy", WindowPolicy.CLIP.value))
        return fan_out(partial(_sigma_row, matrix, policy), windows, config.workers)

    policy = WindowPolicy(config.get("policy", WindowPolicy.EXTEND.value))
    p = float(config.get("p"))
    out_rank = spec.ranks[degree + 1]
    if config.get("target"):
        target = vector_from_mapping(load_document(config.get("target"), "vector"), spec.group)
    else:
        delta = GroupVector.delta(spec.group)
        zero = GroupVector.zero(spec.group)
        target = VectorTuple(spec.group, (delta,) + (zero,) * (out_rank - 1))
    bound_law = spec.name == "Z" and not config.get("target")
    runner = partial(_distance_row, matrix, target, policy, p, int(config.get("max_iters", 500)), bound_law)
    return fan_out(runner, windows, config.workers)


# -- invariance -------------------------------------------------------------

def _run_amenability(config: ExperimentConfig) -> List[Dict[str, Any]]:
    group = _group(config)
    gens = _gens(config, group)
    p = float(config.get("p"))
    results = sobolev_sweep(group, gens, [int(r) for r in config.get("radii")], p,
                            int(config.get("starts")), config.seed, int(config.get("max_iters")))
    by_radius = {r.radius: r.value for r in results}
    floor = free_group_ratio_floor(group.rank) if group.kind == GroupKind.FREE and gens is None else None
    halving = group.kind == GroupKind.FREE_ABELIAN and group.rank == 1
    rows = []
    for result in results:
        row = result.to_row()
        row["floor"] = floor
        row["above_floor"] = None if floor is None else result.value >= floor * (1 - 1e-9)
        doubled = by_radius.get(2 * result.radius)
        row["halves"] = doubled <= result.value / 2 if halving and doubled is not None else None
        row["provenance"] = "float"
        rows.append(row)
    if config.get("achievers"):
        write_json(config.get("achievers"), {str(r.radius): r.achiever.to_dict() for r in results})
    return rows


def _run_tilf_diff(config: ExperimentConfig) -> List[Dict[str, Any]]:
    group = _group(config)
    target = _target(config, group)
    if isinstance(target, VectorTuple):
        raise ConfigError("tilf-diff takes a single vector, not a tuple")
    if target.mode == ScalarMode.EXACT and target.coefficient_sum() == 0:
        decomposition = diff_decompose(target)
        return [{"term": k, "h": group.format_element(t.h), "coefficient": str(t.coefficient),
                 "provenance": "exact"} for k, t in enumerate(decomposition.terms, start=1)]
    spec = AveragingSpec(group, _generator(config, group), 1)
    epsilon, p = float(config.get("epsilon")), float(config.get("p"))
    approximation = approximate_by_diff(target, spec, epsilon, p)
    return [{"n": approximation.n, "epsilon": epsilon, "p": p, "error": approximation.error,
             "within_epsilon": approximation.error < epsilon, "verified": approximation.density.witness.verified,
             "provenance": _provenance(target.mode)}]


def _tent_row(p: float, d: int, n: int) -> Dict[str, Any]:
    row = tent_report(n, p, d).to_row()
    row["provenance"] = "float"
    return row


def _run_tent(config: ExperimentConfig) -> List[Dict[str, Any]]:
    group = _group(config)
    if group.kind != GroupKind.FREE_ABELIAN:
        raise ConfigError(f"tent functions live on Z^d, not {group.name}")
    ns = [int(n) for n in config.grid("n", "ns")]
    return fan_out(partial(_tent_row, float(config.get("p")), group.rank), ns, config.workers)


RUNNERS: Dict[str, Callable[[ExperimentConfig], List[Dict[str, Any]]]] = {
    "ball": _run_ball,
    "averaging": _run_averaging,
    "young": _run_young,
    "witness": _run_witness,
    "neumann": _run_neumann,
    "density": _run_density,
    "dirichlet": _run_dirichlet,
    "cohomology": _run_cohomology,
    "amenability": _run_amenability,
    "tilf-diff": _run_tilf_diff,
    "tent": _run_tent,
}

