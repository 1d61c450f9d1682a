"""
@ai-metadata {
    "domain": "invariance",
    "description": "Left translations, Diff spans, the difference embedding theta and the Sobolev-ratio amenability probe",
    "dependencies": ["algebra.py", "cohomology.py", "energy.py", "graph.py", "groups.py", "errors.py"],
    "invariants": [
        "Translation permutes coefficients, so every l^p norm is preserved",
        "Diff decompositions reconstruct their target exactly in Exact mode",
        "||theta(f)||_p^p equals the Dirichlet sum of f on matching windows",
        "A Sobolev sweep with warm starts is non-increasing in the radius"
    ]
}
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.sparse.linalg import eigsh

from lplab_py.core.algebra import (
    AveragingSpec,
    GroupVector,
    ScalarMode,
    VectorTuple,
)
from lplab_py.core.cohomology import DensityReport, density_experiment
from lplab_py.core.cyclic import CyclicVector
from lplab_py.core.energy import (
    EnergyScope,
    GraphFunction,
    armijo_descent,
    dirichlet_sum,
    dp_norm,
    energy_gradient_full,
    phi_p,
    tent_energy,
    tent_function,
)
from lplab_py.core.errors import (
    ConfigError,
    InvariantViolationError,
    NotInDiffSpanError,
    ScalarModeError,
)
from lplab_py.core.graph import CayleyBall, ball
from lplab_py.core.groups import GeneratingSet, GroupElement, GroupSpec

logger = logging.getLogger(__name__)

DEFAULT_STARTS = 8
DEFAULT_SOBOLEV_ITERS = 20_000
SOBOLEV_REL_DECREASE = 1e-12
SOBOLEV_TOL = 1e-9
DENSE_EIGEN_CAP = 2000


# -- translations -----------------------------------------------------------

@dataclass(frozen=True)
class TranslationAction:
    """f -> f_h with f_h(x) = f(hx)."""
    group: GroupSpec
    h: GroupElement
    side: str = "left"

    def __post_init__(self):
        self.group.check(self.h)
        if self.side != "left":
            raise ConfigError("only left translations are supported")

    def __call__(self, f: Union[GroupVector, GraphFunction]) -> Union[GroupVector, GraphFunction]:
        return translate(f, self.h)

    def then(self, other: "TranslationAction") -> "TranslationAction":
        """The action f -> (f_h)_k, which is f_{hk}."""
        return TranslationAction(self.group, self.group.mul(self.h, other.h))


def translate(f: Union[GroupVector, GraphFunction], h: GroupElement) -> Union[GroupVector, GraphFunction]:
    """
    Left translate: f_h(x) = f(hx).

    A GraphFunction keeps its ball; the translate must not move any nonzero
    value outside it.
    """
    if isinstance(f, GroupVector):
        group = f.group
        group.check(h)
        h_inv = group.inv(h)
        return GroupVector(group, {group.mul(h_inv, y): c for y, c in f.coeffs.items()}, f.mode)

    b = f.ball
    b.group.check(h)
    h_inv = b.group.inv(h)
    values = np.zeros(len(b))
    for i in np.flatnonzero(f.values):
        target = b.get_index(b.group.mul(h_inv, b.vertices[i]))
        if target is None:
            raise ConfigError(
                f"translating by {b.group.format_element(h)} moves "
                f"{b.group.format_element(b.vertices[i])} outside the radius-{b.radius} ball")
        values[target] = f.values[i]
    return GraphFunction(b, values)


# -- Diff spans -------------------------------------------------------------

@dataclass(frozen=True)
class DiffTerm:
    h: GroupElement
    coefficient: Any


@dataclass
class DiffDecomposition:
    """f = sum_i c_i (f0_{h_i} - f0) with base function f0."""
    base: GroupVector
    terms: List[DiffTerm] = field(default_factory=list)

    def reconstruct(self) -> GroupVector:
        total = GroupVector.zero(self.base.group, self.base.mode)
        for term in self.terms:
            total = total + (translate(self.base, term.h) - self.base).scale(term.coefficient)
        return total

    def to_dict(self) -> Dict[str, Any]:
        group = self.base.group
        return {
            "base": self.base.format(),
            "terms": [{"h": group.format_element(t.h), "coefficient": str(t.coefficient)} for t in self.terms],
        }


def diff_decompose(f: GroupVector) -> DiffDecomposition:
    """
    Write a zero-sum vector as sum_x c_x ((delta_e)_{x^-1} - delta_e).

    Raises:
        NotInDiffSpanError: The coefficients do not sum to zero.
    """
    if f.mode != ScalarMode.EXACT:
        raise ScalarModeError("exact Diff decompositions need Exact coefficients")
    total = f.coefficient_sum()
    if total != 0:
        raise NotInDiffSpanError(
            f"coefficient sum is {total}, so f is not exactly in the Diff span; use approximate_by_diff")
    group = f.group
    e = group.identity()
    base = GroupVector.delta(group)
    terms = [DiffTerm(group.inv(x), c) for x, c in f.items() if x != e]
    decomposition = DiffDecomposition(base, terms)
    if decomposition.reconstruct() != f:
        raise InvariantViolationError("Diff decomposition does not reconstruct its target")
    return decomposition


@dataclass
class DiffApproximation:
    """(1 - x_n) f, which lies in (g - 1) CG, with error ||x_n f||_p."""
    target: GroupVector
    density: DensityReport

    @property
    def n(self) -> int:
        return self.density.n

    @property
    def error(self) -> float:
        return self.density.achieved

    def approximant(self, cap: int = 1_000_000) -> GroupVector:
        witness = self.density.witness
        x = CyclicVector.averaging(self.n, 1)
        parts = [e - e.left_multiply(x if e.mode == ScalarMode.EXACT else x.to_float())
                 for e in witness.expansions]
        total = parts[0].to_group_vector(cap)
        for part in parts[1:]:
            total = total + part.to_group_vector(cap)
        return total


def approximate_by_diff(f: GroupVector, spec: AveragingSpec, epsilon: float, p: float) -> DiffApproximation:
    """Approximate f within epsilon by an element of (g - 1) CG, inside the closure of Diff."""
    if not epsilon > 0:
        raise ConfigError(f"epsilon must be positive, got {epsilon}")
    if spec.omega != 1:
        raise ConfigError("Diff approximation uses omega = 1")
    report = density_experiment(f, spec, epsilon, p)
    logger.info("Diff approximation: n=%d error %.3e", report.n, report.achieved)
    return DiffApproximation(f, report)


# -- theta ------------------------------------------------------------------

@dataclass
class ThetaResult:
    """Component s is x -> f(x) - f(xs); truncated marks components cut at a ball frontier."""
    generators: Tuple[GroupElement, ...]
    components: VectorTuple
    truncated: bool = False

    def energy(self, p: float) -> float:
        return float(np.sum(self.components.moduli() ** p))


def theta(f: Union[GroupVector, GraphFunction], gens: Optional[GeneratingSet] = None) -> ThetaResult:
    """The difference embedding f -> (f - f(. s))_s; its kernel is the constants."""
    if isinstance(f, GroupVector):
        group = f.group
        gens = gens or group.standard_generators()
        parts = []
        for s in gens:
            s_inv = group.inv(s)
            shifted = GroupVector(group, {group.mul(y, s_inv): c for y, c in f.coeffs.items()}, f.mode)
            parts.append(f - shifted)
        return ThetaResult(tuple(gens), VectorTuple(group, tuple(parts), f.mode))

    b = f.ball
    if gens is not None and gens != b.gens:
        raise ConfigError("theta of a ball function uses the ball's generating set")
    table = b.neighbor_table
    parts = []
    for k, s in enumerate(b.gens):
        inside = table[:, k] >= 0
        idx = np.flatnonzero(inside)
        diffs = f.values[idx] - f.values[table[idx, k]]
        terms = [(b.vertices[i], complex(d)) for i, d in zip(idx, diffs) if d != 0]
        parts.append(GroupVector.from_terms(b.group, terms, ScalarMode.FLOAT))
    truncated = bool((table < 0).any())
    return ThetaResult(tuple(b.gens), VectorTuple(b.group, tuple(parts), ScalarMode.FLOAT), truncated)


def vector_energy(f: GroupVector, p: float, gens: Optional[GeneratingSet] = None) -> float:
    """Full Dirichlet sum of a real finitely supported vector, read off a ball one step past its support."""
    if any(complex(c).imag != 0 for c in f.coeffs.values()):
        raise ConfigError("vector_energy takes real coefficients; use theta(f).energy(p)")
    group = f.group
    gens = gens or group.standard_generators()
    b = ball(group, gens, f.support_radius(gens) + 1)
    values = np.zeros(len(b))
    for x, c in f.coeffs.items():
        values[b.index_of(x)] = complex(c).real
    return dirichlet_sum(GraphFunction(b, values), p, EnergyScope.BALL)


# -- Sobolev ratio ----------------------------------------------------------

@dataclass
class SobolevResult:
    radius: int
    p: float
    value: float
    achiever: GraphFunction
    converged: bool
    start_index: int
    iterations: int
    start_values: List[float] = field(default_factory=list)

    def to_row(self) -> Dict[str, Any]:
        return {
            "R": self.radius,
            "p": self.p,
            "lambda": self.value,
            "converged": self.converged,
            "start": self.start_index,
            "iterations": self.iterations,
        }


def _dirichlet_laplacian(b: CayleyBall, free: np.ndarray) -> sp.csr_matrix:
    """|S| I - A on the free vertices, all of whose neighbours lie in the ball."""
    position = -np.ones(len(b), dtype=np.int64)
    position[free] = np.arange(len(free))
    table = b.neighbor_table[free]
    rows = np.repeat(np.arange(len(free)), table.shape[1])
    cols = position[table.ravel()]
    keep = cols >= 0
    adjacency = sp.coo_matrix((np.ones(int(keep.sum())), (rows[keep], cols[keep])),
                              shape=(len(free), len(free))).tocsr()
    return (table.shape[1] * sp.identity(len(free), format="csr") - adjacency).tocsr()


def _spectral_start(b: CayleyBall, free: np.ndarray) -> np.ndarray:
    L = _dirichlet_laplacian(b, free)
    if len(free) <= DENSE_EIGEN_CAP:
        _, vectors = scipy.linalg.eigh(L.toarray(), subset_by_index=[0, 0])
    else:
        _, vectors = eigsh(L.tocsc(), k=1, sigma=-1e-3, which="LM")
    return np.abs(vectors[:, 0])


def _ratio_descent(b: CayleyBall, free: np.ndarray, start: np.ndarray, p: float, max_iters: int,
                   seed: int):
    values = np.zeros(len(b))

    def embed(y: np.ndarray) -> np.ndarray:
        values[:] = 0.0
        values[free] = y
        return values

    def project(y: np.ndarray) -> np.ndarray:
        y = np.maximum(y, 0.0)
        norm = float(np.sum(y ** p)) ** (1.0 / p)
        return y / norm if norm > 0 else np.full_like(y, len(y) ** (-1.0 / p))

    def energy(y: np.ndarray) -> float:
        src, dst = b.edge_arrays
        full = embed(y)
        return float(np.sum(np.abs(full[src] - full[dst]) ** p))

    def objective(y: np.ndarray) -> float:
        return energy(y) / float(np.sum(np.abs(y) ** p))

    def gradient(y: np.ndarray) -> np.ndarray:
        mass = float(np.sum(np.abs(y) ** p))
        grad_energy = energy_gradient_full(b, embed(y), p)[free]
        return grad_energy / mass - energy(y) * p * phi_p(y, p) / mass ** 2

    def stationarity(y: np.ndarray, g: np.ndarray) -> float:
        active = np.where(y > 0, np.abs(g), np.maximum(-g, 0.0))
        return float(np.max(active)) / max(1.0, objective(y)) if active.size else 0.0

    return armijo_descent(objective, gradient, project(start), stationarity, SOBOLEV_TOL, max_iters,
                          project=project, rel_decrease_tol=SOBOLEV_REL_DECREASE, seed=seed)


def sobolev_ratio(group: GroupSpec, gens: Optional[GeneratingSet], radius: int, p: float,
                  starts: int = DEFAULT_STARTS, seed: int = 0, max_iters: int = DEFAULT_SOBOLEV_ITERS,
                  warm_start: Optional[GraphFunction] = None) -> SobolevResult:
    """
    lambda(R) = min I_p(f) / ||f||_p^p over f supported in the radius-R ball.

    Each start runs a projected, normalized Armijo descent over nonnegative
    functions; the smallest value wins, ties going to the lower start index.

    Args:
        group: The group.
        gens: Generating set; standard when None.
        radius: R >= 1.
        p: Exponent > 1.
        starts: Number of starts (>= 2): spectral, warm start or delta_e,
            distance profile, then seeded random starts.
        seed: Seed for the random starts.
        max_iters: Descent iteration cap per start.
        warm_start: A previous achiever, zero-padded onto the new ball.

    Returns:
        The minimum with its achiever, normalized to unit l^p norm.
    """
    if radius < 1:
        raise ConfigError(f"radius must be >= 1, got {radius}")
    if not p > 1:
        raise ConfigError(f"p must be > 1, got {p}")
    if starts < 2:
        raise ConfigError("sobolev_ratio needs at least two starts")
    b = ball(group, gens, radius + 1)
    free = np.flatnonzero(b.length_array <= radius)

    initial: List[np.ndarray] = [_spectral_start(b, free)]
    warm = np.zeros(len(free))
    if warm_start is not None:
        for v, value in zip(warm_start.ball.vertices, warm_start.values):
            if value:
                index = b.get_index(v)
                if index is None or b.length_array[index] > radius:
                    raise ConfigError("warm start is supported outside the radius-R ball")
                warm[np.searchsorted(free, index)] = value
    else:
        warm[np.searchsorted(free, b.index_of(group.identity()))] = 1.0
    initial.append(warm)
    if starts > 2:
        initial.append((radius + 1 - b.length_array[free]).astype(np.float64))
    for child in np.random.SeedSequence(seed).spawn(max(0, starts - 3)):
        initial.append(np.random.default_rng(child).random(len(free)))

    with ThreadPoolExecutor(max_workers=min(len(initial), 8)) as pool:
        results = list(pool.map(lambda item: _ratio_descent(b, free, item[1], p, max_iters, seed + item[0]),
                                enumerate(initial)))
    values = [r.value for r in results]
    best = min(range(len(results)), key=lambda k: (values[k], k))
    winner = results[best]
    achiever = np.zeros(len(b))
    achiever[free] = winner.x
    logger.debug("lambda(R=%d, p=%s) = %.6g from start %d", radius, p, winner.value, best)
    if not winner.converged:
        logger.warning("Sobolev descent at R=%d did not converge (best %.6g)", radius, winner.value)
    return SobolevResult(radius, p, winner.value, GraphFunction(b, achiever), winner.converged, best,
                         winner.iterations, values)


def sobolev_sweep(group: GroupSpec, gens: Optional[GeneratingSet], radii: Sequence[int], p: float,
                  starts: int = DEFAULT_STARTS, seed: int = 0,
                  max_iters: int = DEFAULT_SOBOLEV_ITERS) -> List[SobolevResult]:
    """lambda over increasing radii, each warm-started from the previous achiever."""
    out: List[SobolevResult] = []
    previous: Optional[GraphFunction] = None
    for radius in sorted(set(radii)):
        result = sobolev_ratio(group, gens, radius, p, starts, seed, max_iters, previous)
        if out and result.value > out[-1].value * (1 + 1e-9) + 1e-15:
            raise InvariantViolationError(
                f"lambda increased from {out[-1].value:.6g} at R={out[-1].radius} to {result.value:.6g} at R={radius}")
        out.append(result)
        previous = result.achiever
    return out


def free_group_ratio_floor(k: int) -> float:
    """Lower bound on the ratio for any finitely supported function on F_k: 2(2k - 2 sqrt(2k - 1))."""
    return 2.0 * (2 * k - 2.0 * math.sqrt(2 * k - 1))


# -- tents ------------------------------------------------------------------

@dataclass
class TentReport:
    n: int
    p: float
    d: int
    energy: float
    closed_form: Optional[float]
    dp_distance: float

    def to_row(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "p": self.p,
            "d": self.d,
            "energy": self.energy,
            "closed_form": self.closed_form,
            "dp_distance": self.dp_distance,
        }


def tent_report(n: int, p: float, d: int = 1) -> TentReport:
    """Energy of the tent f_n and ||1 - f_n||_{D_p} on its window."""
    group = GroupSpec.free_abelian(d)
    f = tent_function(group, n)
    energy = dirichlet_sum(f, p)
    closed = tent_energy(n, p) if d == 1 else None
    distance = dp_norm(GraphFunction.constant(f.ball, 1.0) - f, p)
    return TentReport(n, p, d, energy, closed, distance)

