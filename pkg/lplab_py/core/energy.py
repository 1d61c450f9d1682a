"""
@ai-metadata {
    "domain": "dirichlet-energy",
    "description": "Functions on Cayley balls, p-Dirichlet sums, the p-Laplacian, Armijo descent and the Dirichlet-problem solver",
    "dependencies": ["graph.py", "groups.py", "errors.py"],
    "invariants": [
        "The energy trace of an accepted descent run is non-increasing",
        "Converged solutions stay within [min, max] of their boundary data",
        "Boundary values are never modified by the solver"
    ]
}
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import spsolve

from lplab_py.core.errors import (
    ConfigError,
    FrontierVertexError,
    GroupMismatchError,
    IllPosedProblemError,
    InvariantViolationError,
)
from lplab_py.core.graph import CayleyBall, ball
from lplab_py.core.groups import GeneratingSet, GroupElement, GroupKind, GroupSpec

logger = logging.getLogger(__name__)

ARMIJO_C1 = 1e-4
ARMIJO_RHO = 0.5
MIN_STEP = 1e-20
JITTER_SCALE = 1e-14
WEIGHT_FLOOR = 1e-12
MAX_PRINCIPLE_SLACK = 1e-9


class EnergyScope(str, Enum):
    """Which ordered pairs (v, vs) enter a Dirichlet sum."""
    INTERIOR = "interior"   # v interior, every neighbour counted
    BALL = "ball"           # both endpoints in the ball


class SolverMethod(str, Enum):
    NEWTON = "newton"
    GRADIENT = "gradient"


def phi_p(t: np.ndarray, p: float) -> np.ndarray:
    """sign(t)|t|^(p-1), zero at zero."""
    return np.sign(t) * np.abs(t) ** (p - 1.0)


def _check_p(p: float) -> None:
    if not p > 1:
        raise ConfigError(f"p must be > 1, got {p}")


@dataclass(frozen=True, eq=False)
class GraphFunction:
    """A real function on the vertices of a Cayley ball."""
    ball: CayleyBall
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        if values.shape != (len(self.ball),):
            raise ConfigError(f"expected {len(self.ball)} values, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ConfigError("function values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_callable(cls, ball: CayleyBall, fn: Callable[[GroupElement], float]) -> "GraphFunction":
        return cls(ball, np.array([fn(v) for v in ball.vertices], dtype=np.float64))

    @classmethod
    def constant(cls, ball: CayleyBall, c: float) -> "GraphFunction":
        return cls(ball, np.full(len(ball), float(c)))

    @classmethod
    def delta(cls, ball: CayleyBall, x: GroupElement) -> "GraphFunction":
        values = np.zeros(len(ball))
        values[ball.index_of(x)] = 1.0
        return cls(ball, values)

    def __call__(self, x: GroupElement) -> float:
        return float(self.values[self.ball.index_of(x)])

    def __sub__(self, other: "GraphFunction") -> "GraphFunction":
        return GraphFunction(self.ball, self.values - other.values)

    def to_dict(self) -> Dict[str, Any]:
        group = self.ball.group
        return {
            "group": group.name,
            "radius": self.ball.radius,
            "values": {group.format_element(v): float(x) for v, x in zip(self.ball.vertices, self.values)},
        }


# -- local quantities -------------------------------------------------------

def gradient_power(f: GraphFunction, x: GroupElement, p: float, exclude_outside: bool = False) -> float:
    """|Df|^p(x) = sum_s |f(x) - f(xs)|^p."""
    i = f.ball.index_of(x)
    row = f.ball.neighbor_table[i]
    if not exclude_outside and np.any(row < 0):
        raise FrontierVertexError(
            f"{f.ball.group.format_element(x)} has neighbours outside the ball; pass exclude_outside=True")
    inside = row[row >= 0]
    return float(np.sum(np.abs(f.values[i] - f.values[inside]) ** p))


def p_laplacian(f: GraphFunction, x: GroupElement, p: float) -> float:
    """(Delta_p f)(x) = sum_s phi_p(f(xs) - f(x)) at an interior vertex."""
    i = f.ball.require_interior(x)
    row = f.ball.neighbor_table[i]
    return float(np.sum(phi_p(f.values[row] - f.values[i], p)))


def p_laplacian_array(f: GraphFunction, p: float) -> np.ndarray:
    """Delta_p f at every interior vertex, in interior_indices order."""
    interior = f.ball.interior_indices
    table = f.ball.neighbor_table[interior]
    diffs = f.values[table] - f.values[interior][:, None]
    return phi_p(diffs, p).sum(axis=1)


def dirichlet_sum(f: GraphFunction, p: float, scope: EnergyScope = EnergyScope.BALL) -> float:
    """I_p(f): sum over ordered pairs (v, vs) selected by scope."""
    if scope == EnergyScope.BALL:
        src, dst = f.ball.edge_arrays
        return float(np.sum(np.abs(f.values[src] - f.values[dst]) ** p))
    interior = f.ball.interior_indices
    table = f.ball.neighbor_table[interior]
    return float(np.sum(np.abs(f.values[interior][:, None] - f.values[table]) ** p))


def dp_norm(f: GraphFunction, p: float, scope: EnergyScope = EnergyScope.BALL) -> float:
    """(I_p(f) + |f(e)|^p)^(1/p)."""
    at_identity = abs(f(f.ball.group.identity()))
    return (dirichlet_sum(f, p, scope) + at_identity ** p) ** (1.0 / p)


def bdp_norm(f: GraphFunction, p: float, scope: EnergyScope = EnergyScope.BALL) -> float:
    """I_p(f)^(1/p) + sup |f|."""
    return dirichlet_sum(f, p, scope) ** (1.0 / p) + float(np.max(np.abs(f.values)))


def energy_gradient_full(ball: CayleyBall, values: np.ndarray, p: float) -> np.ndarray:
    """Gradient of the BALL-scope sum at every vertex: 2p sum_s phi_p(f(v) - f(vs))."""
    src, dst = ball.edge_arrays
    weights = phi_p(values[src] - values[dst], p)
    return 2.0 * p * np.bincount(src, weights=weights, minlength=len(ball))


def energy_gradient(f: GraphFunction, problem: "DirichletProblem") -> np.ndarray:
    """Gradient of the energy in the free (interior) values, in interior_indices order."""
    if f.ball is not problem.ball and (f.ball.group != problem.ball.group or len(f.ball) != len(problem.ball)):
        raise GroupMismatchError("function and problem live on different balls")
    return energy_gradient_full(f.ball, f.values, problem.p)[f.ball.interior_indices]


# -- descent ----------------------------------------------------------------

@dataclass
class DescentResult:
    x: np.ndarray
    value: float
    iterations: int
    converged: bool
    history: List[float] = field(default_factory=list)
    stationarity: float = math.inf


def armijo_descent(
    objective: Callable[[np.ndarray], float],
    gradient: Callable[[np.ndarray], np.ndarray],
    x0: np.ndarray,
    stationarity: Callable[[np.ndarray, np.ndarray], float],
    tol: float,
    max_iters: int,
    direction: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None,
    project: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    rel_decrease_tol: float = 0.0,
    seed: int = 0,
) -> DescentResult:
    """
    Backtracking line-search descent with the Armijo sufficient-decrease rule.

    Args:
        objective: Function to minimize.
        gradient: Its gradient.
        x0: Starting point.
        stationarity: Measure compared against tol; receives (x, gradient).
        tol: Convergence tolerance for the stationarity measure.
        max_iters: Iteration cap.
        direction: Search direction builder (x, gradient) -> d; steepest descent when None.
        project: Optional map applied to every trial point.
        rel_decrease_tol: Also stop (converged) when one step lowers the objective by less than this fraction.
        seed: Seed for the single jitter applied on a stalled line search.

    Returns:
        The final point with its objective history.
    """
    rng = np.random.default_rng(seed)
    x = np.array(x0, dtype=np.float64)
    value = objective(x)
    history = [value]
    jittered = False
    step_hint = 1.0
    g = gradient(x)
    measure = stationarity(x, g)
    for iteration in range(max_iters):
        if measure <= tol:
            return DescentResult(x, value, iteration, True, history, measure)
        d = direction(x, g) if direction is not None else -g
        slope = float(np.dot(g, d))
        if not np.all(np.isfinite(d)) or slope >= 0:
            d = -g
            slope = -float(np.dot(g, g))
        t = 1.0 if direction is not None else step_hint
        accepted = False
        while t >= MIN_STEP:
            trial = x + t * d
            if project is not None:
                trial = project(trial)
            trial_value = objective(trial)
            if trial_value <= value + ARMIJO_C1 * t * slope:
                accepted = True
                break
            t *= ARMIJO_RHO
        if not accepted:
            if jittered:
                logger.debug("line search stalled twice at iteration %d", iteration)
                return DescentResult(x, value, iteration, measure <= tol, history, measure)
            jittered = True
            x = x + JITTER_SCALE * max(1.0, float(np.max(np.abs(x)))) * rng.standard_normal(x.shape)
            if project is not None:
                x = project(x)
            value = objective(x)
            g = gradient(x)
            measure = stationarity(x, g)
            continue
        decrease = value - trial_value
        x, value = trial, trial_value
        history.append(value)
        step_hint = min(t * 2.0, 1e6)
        g = gradient(x)
        measure = stationarity(x, g)
        if rel_decrease_tol and decrease <= rel_decrease_tol * abs(value):
            return DescentResult(x, value, iteration + 1, True, history, measure)
    return DescentResult(x, value, max_iters, measure <= tol, history, measure)


# -- Dirichlet problem ------------------------------------------------------

@dataclass(frozen=True)
class SolverTolerances:
    residual_tol: float = 1e-8
    max_iters: int = 100_000

    def __post_init__(self):
        if not self.residual_tol > 0:
            raise ConfigError("residual_tol must be positive")
        if self.max_iters < 1:
            raise ConfigError("max_iters must be positive")


@dataclass(frozen=True, eq=False)
class DirichletProblem:
    """Minimize I_p over functions on the ball with fixed frontier values."""
    ball: CayleyBall
    boundary_values: Mapping[GroupElement, float]
    p: float = 2.0
    tolerances: SolverTolerances = field(default_factory=SolverTolerances)
    method: SolverMethod = SolverMethod.NEWTON

    def __post_init__(self):
        _check_p(self.p)
        frontier = {self.ball.vertices[i] for i in self.ball.frontier_indices}
        given = set(self.boundary_values)
        if given != frontier:
            missing, extra = frontier - given, given - frontier
            group = self.ball.group
            parts = []
            if missing:
                parts.append("missing " + ", ".join(sorted(group.format_element(x) for x in missing)[:5]))
            if extra:
                parts.append("not on the frontier: " + ", ".join(sorted(group.format_element(x) for x in extra)[:5]))
            raise ConfigError("boundary values must cover exactly the frontier (" + "; ".join(parts) + ")")
        for x, value in self.boundary_values.items():
            if not math.isfinite(value):
                raise ConfigError(f"boundary value at {self.ball.group.format_element(x)} is not finite")

    @classmethod
    def from_frontier_values(cls, ball: CayleyBall, values: Sequence[float], p: float = 2.0,
                             **kwargs) -> "DirichletProblem":
        """
        Assign values along the frontier in canonical element order.

        A shorter list is stretched over the frontier, so "0,1" on the ball of radius R in Z
        puts 0 at -R and 1 at R.
        """
        frontier = sorted((ball.vertices[i] for i in ball.frontier_indices), key=ball.group.sort_key)
        if not values:
            raise ConfigError("no boundary values given")
        if len(values) == len(frontier):
            assigned = list(values)
        elif len(values) < len(frontier):
            positions = np.linspace(0, len(values) - 1, len(frontier)) if len(frontier) > 1 else [0]
            assigned = [values[int(round(pos))] for pos in positions]
        else:
            raise ConfigError(f"{len(values)} boundary values for {len(frontier)} frontier vertices")
        return cls(ball, {x: float(v) for x, v in zip(frontier, assigned)}, p, **kwargs)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "DirichletProblem":
        """Decode a validated problem document."""
        from lplab_py.core.parser import parse_element, parse_group

        group = parse_group(data["group"])
        gens = None
        if data.get("generators"):
            gens = GeneratingSet.from_elements(group, [parse_element(group, s) for s in data["generators"]])
        b = ball(group, gens, int(data["radius"]))
        tolerances = SolverTolerances(
            residual_tol=float(data.get("residual_tol", SolverTolerances.residual_tol)),
            max_iters=int(data.get("max_iters", SolverTolerances.max_iters)),
        )
        method = SolverMethod(data.get("method", SolverMethod.NEWTON.value))
        boundary = data["boundary"]
        if isinstance(boundary, Mapping):
            values = {parse_element(group, str(k)): float(v) for k, v in boundary.items()}
            return cls(b, values, float(data["p"]), tolerances, method)
        return cls.from_frontier_values(b, [float(v) for v in boundary], float(data["p"]),
                                        tolerances=tolerances, method=method)

    def boundary_array(self) -> np.ndarray:
        values = np.zeros(len(self.ball))
        for x, v in self.boundary_values.items():
            values[self.ball.index_of(x)] = v
        return values


@dataclass
class EnergyReport:
    energy: float
    gradient_powers: np.ndarray
    residual: float
    iterations: int
    converged: bool
    method: str
    energy_trace: Tuple[float, ...] = ()
    boundary_range: Tuple[float, float] = (0.0, 0.0)
    max_principle: bool = True

    def to_dict(self) -> Dict[str, Any]:
        return {
            "energy": self.energy,
            "residual": self.residual,
            "iterations": self.iterations,
            "converged": self.converged,
            "method": self.method,
            "energy_trace": list(self.energy_trace),
            "max_principle": self.max_principle,
        }


def check_well_posed(b: CayleyBall) -> None:
    """Every component of the interior subgraph must touch the frontier."""
    interior = b.interior_indices
    if interior.size == 0:
        return
    if b.frontier_indices.size == 0:
        raise IllPosedProblemError("the ball has no frontier; the interior cannot be pinned")
    G = b.to_networkx()
    sub = G.subgraph(interior.tolist())
    frontier = set(b.frontier_indices.tolist())
    for component in nx.connected_components(sub):
        if not any(frontier.intersection(G.neighbors(v)) for v in component):
            sample = b.group.format_element(b.vertices[next(iter(component))])
            raise IllPosedProblemError(f"interior component containing {sample} has no boundary contact")


def _weighted_laplacian(b: CayleyBall, weights: np.ndarray) -> sp.csr_matrix:
    """sum over ordered pairs of w (e_a - e_b)(e_a - e_b)^T."""
    src, dst = b.edge_arrays
    n = len(b)
    W = sp.coo_matrix((weights, (src, dst)), shape=(n, n)).tocsr()
    degree = np.asarray(W.sum(axis=1)).ravel() + np.asarray(W.sum(axis=0)).ravel()
    return (sp.diags(degree) - W - W.T).tocsr()


def harmonic_extension(b: CayleyBall, boundary: np.ndarray) -> np.ndarray:
    """The p = 2 minimizer: solve the Laplacian on the interior."""
    values = boundary.copy()
    interior = b.interior_indices
    if interior.size == 0:
        return values
    L = _weighted_laplacian(b, np.ones(len(b.edge_arrays[0])))
    free = interior
    fixed = b.frontier_indices
    A = L[free][:, free].tocsc()
    rhs = -(L[free][:, fixed] @ boundary[fixed])
    values[free] = np.atleast_1d(spsolve(A, rhs))
    return values


def solve_dirichlet(problem: DirichletProblem) -> Tuple[GraphFunction, EnergyReport]:
    """
    Minimize the BALL-scope p-Dirichlet sum with the frontier held fixed.

    Starts from the p = 2 harmonic extension, then runs Armijo descent with
    reweighted-Laplacian (Newton) directions or plain gradients.
    """
    b, p = problem.ball, problem.p
    check_well_posed(b)
    boundary = problem.boundary_array()
    lo, hi = (float(min(problem.boundary_values.values())), float(max(problem.boundary_values.values()))) \
        if problem.boundary_values else (0.0, 0.0)
    free = b.interior_indices
    src, dst = b.edge_arrays

    if free.size == 0:
        f = GraphFunction(b, boundary)
        energy = dirichlet_sum(f, p)
        return f, EnergyReport(energy, _gradient_powers(f, p), 0.0, 0, True, problem.method.value,
                               (energy,), (lo, hi))

    start = harmonic_extension(b, boundary)
    full = boundary.copy()

    def expand(y: np.ndarray) -> np.ndarray:
        full[free] = y
        return full

    def objective(y: np.ndarray) -> float:
        v = expand(y)
        return float(np.sum(np.abs(v[src] - v[dst]) ** p))

    def gradient(y: np.ndarray) -> np.ndarray:
        return energy_gradient_full(b, expand(y), p)[free]

    def stationarity(_y: np.ndarray, g: np.ndarray) -> float:
        return float(np.max(np.abs(g))) / (2.0 * p)

    def newton_direction(y: np.ndarray, g: np.ndarray) -> np.ndarray:
        v = expand(y)
        weights = np.maximum(np.abs(v[src] - v[dst]), WEIGHT_FLOOR) ** (p - 2.0)
        H = p * (p - 1.0) * _weighted_laplacian(b, weights)[free][:, free]
        shift = WEIGHT_FLOOR * (1.0 + float(H.diagonal().max()))
        return np.atleast_1d(spsolve((H + shift * sp.identity(free.size)).tocsc(), -g))

    direction = newton_direction if problem.method == SolverMethod.NEWTON else None
    result = armijo_descent(
        objective, gradient, start[free], stationarity,
        tol=problem.tolerances.residual_tol,
        max_iters=problem.tolerances.max_iters,
        direction=direction,
    )
    values = boundary.copy()
    values[free] = result.x
    f = GraphFunction(b, values)
    residual = float(np.max(np.abs(p_laplacian_array(f, p))))
    converged = residual <= problem.tolerances.residual_tol
    if not converged:
        logger.warning("Dirichlet solve stopped after %d iterations with residual %.3e",
                       result.iterations, residual)
    within_range = bool(values.min() >= lo - MAX_PRINCIPLE_SLACK and values.max() <= hi + MAX_PRINCIPLE_SLACK)
    if converged and not within_range:
        raise InvariantViolationError(
            f"solution leaves the boundary range [{lo}, {hi}]: [{values.min()}, {values.max()}]")
    report = EnergyReport(
        energy=dirichlet_sum(f, p),
        gradient_powers=_gradient_powers(f, p),
        residual=residual,
        iterations=result.iterations,
        converged=converged,
        method=problem.method.value,
        energy_trace=tuple(result.history),
        boundary_range=(lo, hi),
        max_principle=within_range,
    )
    return f, report


def _gradient_powers(f: GraphFunction, p: float) -> np.ndarray:
    """|Df|^p at every vertex, counting in-ball neighbours only."""
    src, dst = f.ball.edge_arrays
    return np.bincount(src, weights=np.abs(f.values[src] - f.values[dst]) ** p, minlength=len(f.ball))


def tent_function(group: GroupSpec, n: int, radius: Optional[int] = None) -> GraphFunction:
    """max(0, 1 - |x|_1 / n) on the ball of the given radius (default n) in Z^d."""
    if group.kind != GroupKind.FREE_ABELIAN:
        raise ConfigError(f"tent functions live on Z^d, not {group.name}")
    if n < 1:
        raise ConfigError(f"n must be positive, got {n}")
    b = ball(group, None, n if radius is None else radius)
    return GraphFunction(b, np.maximum(0.0, 1.0 - b.length_array / n))


def tent_energy(n: int, p: float, d: int = 1) -> float:
    """I_p of the tent on Z^d; 4 n^(1-p) for d = 1."""
    _check_p(p)
    if d == 1:
        return 4.0 * n ** (1.0 - p)
    return dirichlet_sum(tent_function(GroupSpec.free_abelian(d), n), p)
