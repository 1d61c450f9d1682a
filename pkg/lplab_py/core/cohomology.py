"""
@ai-metadata {
    "domain": "cohomology-lab",
    "description": "Free chain complexes over CG, composition checks, window truncations of cochain maps, singular values, distances to images, density experiments and invariant vectors",
    "dependencies": ["algebra.py", "cyclic.py", "graph.py", "energy.py", "groups.py", "errors.py"],
    "invariants": [
        "Built-in complexes satisfy d_n d_{n+1} == 0 exactly",
        "The extend policy reproduces exact images of window-supported inputs",
        "Density witnesses satisfy (g - omega)(d b) == (1 - x_n) b exactly before a report is returned"
    ]
}
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.sparse.linalg import lsqr, spsolve

from lplab_py.core.algebra import (
    AveragingSpec,
    ExactScalar,
    GroupRingMatrix,
    GroupVector,
    ScalarMode,
    VectorTuple,
    one_norm,
)
from lplab_py.core.cyclic import CosetExpansion, CyclicVector, averaging_factorization
from lplab_py.core.energy import armijo_descent, phi_p
from lplab_py.core.errors import (
    ConfigError,
    GroupMismatchError,
    InvariantViolationError,
    ResourceLimitError,
    ScalarModeError,
)
from lplab_py.core.graph import CayleyBall, ball
from lplab_py.core.groups import GeneratingSet, GroupElement, GroupSpec

logger = logging.getLogger(__name__)

DENSE_CAP = 40_000_000
DENSE_LSTSQ_COLUMNS = 2500
RANK_CERTIFY_CAP = 3000


# -- complexes --------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ComplexSpec:
    """A free complex (CG)^{e_0} <- (CG)^{e_1} <- ... with d_n of shape e_n x e_{n+1}."""
    group: GroupSpec
    ranks: Tuple[int, ...]
    differentials: Tuple[GroupRingMatrix, ...]
    name: str = "custom"

    def __post_init__(self):
        if len(self.ranks) < 2 or self.ranks[0] != 1:
            raise ConfigError("a complex needs e_0 = 1 and at least one differential")
        if len(self.differentials) != len(self.ranks) - 1:
            raise ConfigError(f"{len(self.ranks)} ranks need {len(self.ranks) - 1} differentials")
        for n, d in enumerate(self.differentials):
            if d.group != self.group:
                raise GroupMismatchError(f"d_{n} is over {d.group.name}, not {self.group.name}")
            if d.mode != ScalarMode.EXACT:
                raise ScalarModeError("complexes are stored exactly")
            if d.shape != (self.ranks[n], self.ranks[n + 1]):
                raise ConfigError(f"d_{n} has shape {d.shape}, expected {(self.ranks[n], self.ranks[n + 1])}")
        for j, entry in enumerate(self.differentials[0].rows[0]):
            if entry.coefficient_sum() != 0:
                raise ConfigError(f"d_0 entry {j + 1} does not lie in the augmentation ideal")

    @property
    def length(self) -> int:
        return len(self.differentials)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ComplexSpec":
        """Decode a validated complex document."""
        from lplab_py.core.parser import parse_group, parse_vector

        group = parse_group(data["group"])
        matrices = []
        for rows in data["differentials"]:
            if not rows:
                raise ConfigError("empty differential")
            parsed = [[parse_vector(group, str(t), ScalarMode.EXACT) for t in row] for row in rows]
            matrices.append(GroupRingMatrix(group, tuple(tuple(r) for r in parsed)))
        return cls(group, tuple(int(r) for r in data["ranks"]), tuple(matrices), data.get("name", "custom"))

    def homology_side(self) -> Tuple[GroupRingMatrix, ...]:
        """The differentials d_n^* acting on the opposite side."""
        return tuple(d.involution_transpose() for d in self.differentials)


def _gen_minus_one(group: GroupSpec, s: GroupElement) -> GroupVector:
    return GroupVector.from_terms(group, [(s, 1), (group.identity(), -1)])


def builtin_complex(kind: str) -> ComplexSpec:
    """The Koszul-type complexes for Z and Z^2 and the tree resolution for F_k."""
    from lplab_py.core.parser import parse_group

    key = kind.strip()
    if key == "Z":
        group = GroupSpec.free_abelian(1)
        d0 = GroupRingMatrix(group, ((_gen_minus_one(group, (1,)),),))
        return ComplexSpec(group, (1, 1), (d0,), "Z")
    if key in ("Z2", "Z^2"):
        group = GroupSpec.free_abelian(2)
        a, b = (1, 0), (0, 1)
        am1, bm1 = _gen_minus_one(group, a), _gen_minus_one(group, b)
        d0 = GroupRingMatrix(group, ((am1, bm1),))
        d1 = GroupRingMatrix(group, ((bm1,), (-am1,)))
        return ComplexSpec(group, (1, 2, 1), (d0, d1), "Z2")
    if key.startswith("F"):
        group = parse_group(key)
        if group.kind.value != "free":
            raise ConfigError(f"unknown built-in complex {kind!r}")
        row = tuple(_gen_minus_one(group, (i,)) for i in range(1, group.rank + 1))
        return ComplexSpec(group, (1, group.rank), (GroupRingMatrix(group, (row,)),), key)
    raise ConfigError(f"unknown built-in complex {kind!r}; expected Z, Z2 or F<k>")


@dataclass
class ComposeResidual:
    degree: int
    support: List[Tuple[int, int]]

    @property
    def passed(self) -> bool:
        return not self.support


@dataclass
class ComposeCheck:
    residuals: List[ComposeResidual] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.residuals)

    @property
    def residual_support(self) -> List[Tuple[int, int]]:
        return [pos for r in self.residuals for pos in r.support]


def compose_check(spec: ComplexSpec) -> ComposeCheck:
    """Exact check of d_n d_{n+1} == 0 for every consecutive pair."""
    check = ComposeCheck()
    for n in range(spec.length - 1):
        product = spec.differentials[n] @ spec.differentials[n + 1]
        check.residuals.append(ComposeResidual(n, product.nonzero_positions()))
    return check


# -- windows and truncation -------------------------------------------------

class WindowPolicy(str, Enum):
    CLIP = "clip"
    EXTEND = "extend"


@dataclass(frozen=True, eq=False)
class Window:
    """A finite ordered set of group elements; optionally the ball it came from."""
    group: GroupSpec
    elements: Tuple[GroupElement, ...]
    ball: Optional[CayleyBall] = None

    @classmethod
    def from_ball(cls, b: CayleyBall) -> "Window":
        return cls(b.group, b.vertices, b)

    @classmethod
    def from_elements(cls, group: GroupSpec, elements: Sequence[GroupElement]) -> "Window":
        group.check(*elements)
        seen: Dict[GroupElement, None] = {}
        for x in elements:
            seen.setdefault(x, None)
        return cls(group, tuple(seen))

    @classmethod
    def interval(cls, lo: int, hi: int) -> "Window":
        """{lo, ..., hi} in Z."""
        return cls.from_elements(GroupSpec.free_abelian(1), [(k,) for k in range(lo, hi + 1)])

    @cached_property
    def index(self) -> Dict[GroupElement, int]:
        return {x: i for i, x in enumerate(self.elements)}

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x: GroupElement) -> bool:
        return x in self.index


@dataclass(frozen=True, eq=False)
class TruncatedOperator:
    """
    Finite matrix of the cochain map f -> f M restricted to window-supported inputs.

    Column (i, v) is the coordinate of f_i at v; row (j, w) the coordinate of (f M)_j at w.
    """
    source: Window
    target: Window
    in_rank: int
    out_rank: int
    matrix: sp.csr_matrix
    policy: WindowPolicy

    @property
    def shape(self) -> Tuple[int, int]:
        return self.matrix.shape

    def column(self, component: int, x: GroupElement) -> int:
        return component * len(self.source) + self.source.index[x]

    def row(self, component: int, x: GroupElement) -> int:
        return component * len(self.target) + self.target.index[x]

    def dense(self) -> np.ndarray:
        rows, cols = self.shape
        if rows * cols > DENSE_CAP:
            raise ResourceLimitError(f"dense {rows}x{cols} operator exceeds the cap")
        return self.matrix.toarray()

    def apply(self, u: np.ndarray) -> np.ndarray:
        return self.matrix @ u

    def encode_target(self, v: Union[GroupVector, VectorTuple]) -> np.ndarray:
        """Coordinates of a target-supported tuple."""
        parts = v.components if isinstance(v, VectorTuple) else (v,)
        if len(parts) != self.out_rank:
            raise GroupMismatchError(f"target has {len(parts)} components, operator outputs {self.out_rank}")
        complex_entries = any(v_.mode == ScalarMode.FLOAT or any(
            isinstance(c, ExactScalar) and c.im != 0 for c in v_.coeffs.values()) for v_ in parts)
        out = np.zeros(self.shape[0], dtype=complex if complex_entries else float)
        for j, part in enumerate(parts):
            for x, c in part.coeffs.items():
                if x not in self.target:
                    raise GroupMismatchError(
                        f"target coefficient at {self.target.group.format_element(x)} lies outside the window")
                out[self.row(j, x)] = complex(c) if complex_entries else float(complex(c).real)
        return out


def truncate(matrix: GroupRingMatrix, window: Union[Window, CayleyBall],
             policy: WindowPolicy = WindowPolicy.CLIP) -> TruncatedOperator:
    """
    Restrict the cochain map f -> f M to inputs supported on the window.

    clip keeps outputs on the window itself; extend grows the output window
    until every image is represented exactly (the ball of radius R + support
    radius for ball windows, the reachable set otherwise).
    """
    if isinstance(window, CayleyBall):
        window = Window.from_ball(window)
    group = matrix.group
    if window.group != group:
        raise GroupMismatchError(f"window in {window.group.name}, matrix over {group.name}")
    r, c = matrix.shape
    policy = WindowPolicy(policy)

    if policy == WindowPolicy.CLIP:
        target = window
    elif window.ball is not None:
        b = window.ball
        target = Window.from_ball(ball(group, b.gens, b.radius + matrix.support_radius(b.gens)))
    else:
        reach = set(window.elements)
        for row in matrix.rows:
            for entry in row:
                for h in entry.coeffs:
                    reach.update(group.mul(v, h) for v in window.elements)
        target = Window.from_elements(group, sorted(reach, key=group.sort_key))

    n_src, n_tgt = len(window), len(target)
    if (r * n_src) * (c * n_tgt) > DENSE_CAP * 10:
        raise ResourceLimitError(f"truncated operator of shape {c * n_tgt}x{r * n_src} exceeds the cap")
    is_complex = any(isinstance(v, ExactScalar) and v.im != 0 or isinstance(v, complex) and v.imag != 0
                     for row in matrix.rows for e in row for v in e.coeffs.values())
    data, rows_idx, cols_idx = [], [], []
    for i in range(r):
        for j in range(c):
            entry = matrix.rows[i][j]
            for h, coeff in entry.coeffs.items():
                value = complex(coeff) if is_complex else float(complex(coeff).real)
                for v in window.elements:
                    w = group.mul(v, h)
                    t = target.index.get(w)
                    if t is None:
                        continue
                    data.append(value)
                    rows_idx.append(j * n_tgt + t)
                    cols_idx.append(i * n_src + window.index[v])
    A = sp.coo_matrix((np.array(data, dtype=complex if is_complex else float), (rows_idx, cols_idx)),
                      shape=(c * n_tgt, r * n_src)).tocsr()
    A.sum_duplicates()
    return TruncatedOperator(window, target, r, c, A, policy)


def smallest_singular_value(op: TruncatedOperator) -> float:
    """sigma_min of the truncated operator; 0 when it has more columns than rows."""
    rows, cols = op.shape
    if rows < cols:
        return 0.0
    values = scipy.linalg.svdvals(op.dense())
    return float(values.min()) if values.size else 0.0


# -- distance to image ------------------------------------------------------

@dataclass
class DistanceResult:
    distance: float
    witness: np.ndarray
    iterations: int
    converged: bool
    p: float


def distance_to_image(op: TruncatedOperator, target: Union[np.ndarray, GroupVector, VectorTuple], p: float = 2.0,
                      tol: float = 1e-10, max_iters: int = 500) -> DistanceResult:
    """
    min_u ||T u - v||_p.

    p = 2 is a least-squares solve; other p start from it and run
    reweighted Newton steps under an Armijo line search.
    """
    if not p > 1:
        raise ConfigError(f"p must be > 1, got {p}")
    v = target if isinstance(target, np.ndarray) else op.encode_target(target)
    if v.shape != (op.shape[0],):
        raise GroupMismatchError(f"target has {v.shape[0]} coordinates, operator has {op.shape[0]} rows")
    A = op.matrix
    if np.iscomplexobj(v) or np.iscomplexobj(A.data):
        if p != 2:
            raise ConfigError("complex targets are supported for p = 2 only")
    u0 = _least_squares(op, v)
    if p == 2:
        residual = A @ u0 - v
        return DistanceResult(float(np.linalg.norm(residual)), u0, 1, True, p)

    def objective(u: np.ndarray) -> float:
        return float(np.sum(np.abs(A @ u - v) ** p))

    def gradient(u: np.ndarray) -> np.ndarray:
        return p * (A.T @ phi_p(A @ u - v, p))

    def stationarity(u: np.ndarray, g: np.ndarray) -> float:
        return float(np.max(np.abs(g))) / max(1.0, objective(u)) if g.size else 0.0

    def newton(u: np.ndarray, g: np.ndarray) -> np.ndarray:
        r = A @ u - v
        w = np.maximum(np.abs(r), 1e-12) ** (p - 2.0)
        H = p * (p - 1.0) * (A.T @ sp.diags(w) @ A)
        shift = 1e-12 * (1.0 + float(H.diagonal().max()))
        return np.atleast_1d(spsolve((H + shift * sp.identity(A.shape[1])).tocsc(), -g))

    result = armijo_descent(objective, gradient, u0, stationarity, tol, max_iters, direction=newton,
                            rel_decrease_tol=1e-15)
    return DistanceResult(result.value ** (1.0 / p), result.x, result.iterations, result.converged, p)


def _least_squares(op: TruncatedOperator, v: np.ndarray) -> np.ndarray:
    A = op.matrix
    if A.shape[1] <= DENSE_LSTSQ_COLUMNS:
        u, *_ = scipy.linalg.lstsq(op.dense(), v, lapack_driver="gelsy")
        return u
    return lsqr(A, v, atol=1e-14, btol=1e-14, iter_lim=20 * A.shape[1])[0]


# -- density experiments ----------------------------------------------------

def recipe_n(target: float, p: float) -> int:
    """Smallest n with n^((1-p)/p) < target."""
    if not p > 1:
        raise ConfigError(f"the recipe needs p > 1, got {p}")
    if not target > 0:
        raise ConfigError("target tolerance must be positive")
    exponent = (1.0 - p) / p
    if target > 1:
        return 1
    n = max(1, int(math.floor(target ** (1.0 / exponent))) + 1)
    while n > 1 and (n - 1) ** exponent < target:
        n -= 1
    while n ** exponent >= target:
        n += 1
    return n


def _as_components(b: Union[GroupVector, VectorTuple]) -> Tuple[GroupVector, ...]:
    return b.components if isinstance(b, VectorTuple) else (b,)


@dataclass
class MembershipWitness:
    """d, b and d*b for the identity (g - omega)(d b) = (1 - x_n) b."""
    d: CyclicVector
    expansions: Tuple[CosetExpansion, ...]
    products: Tuple[CosetExpansion, ...]
    verified: bool


@dataclass
class DensityReport:
    n: int
    p: float
    epsilon: float
    recipe_bound: float
    norm_xn: float
    achieved: float
    mode: ScalarMode
    witness: Optional[MembershipWitness] = None

    @property
    def within_epsilon(self) -> bool:
        return self.achieved < self.epsilon

    def to_row(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "p": self.p,
            "epsilon": self.epsilon,
            "recipe_bound": self.recipe_bound,
            "norm_xn": self.norm_xn,
            "achieved": self.achieved,
            "within_epsilon": self.within_epsilon,
            "verified": bool(self.witness and self.witness.verified),
            "provenance": self.mode.value,
        }


def density_experiment(b: Union[GroupVector, VectorTuple], spec: AveragingSpec, epsilon: float, p: float,
                       n: Optional[int] = None) -> DensityReport:
    """
    Approximate b by (1 - x_n) b in l^p and certify membership in (g - omega) CG.

    The recipe picks the smallest n with ||x_n||_p < epsilon / (2 ||b||_1);
    passing n forces another choice.
    """
    if not p > 1:
        raise ConfigError(f"density needs p > 1, got {p}")
    if not epsilon > 0:
        raise ConfigError(f"epsilon must be positive, got {epsilon}")
    components = _as_components(b)
    if any(c.group != spec.group for c in components):
        raise GroupMismatchError("target and averaging element live in different groups")
    b_norm = sum(one_norm(c) for c in components)
    bound = epsilon / (2.0 * b_norm) if b_norm > 0 else math.inf
    chosen = n if n is not None else (1 if b_norm == 0 else recipe_n(bound, p))
    spec = spec.with_n(chosen)
    mode = spec.mode
    if any(c.mode != mode for c in components):
        raise ScalarModeError("target and omega use different scalar modes")

    exact_dense = mode == ScalarMode.FLOAT or spec.unit_index is not None
    if not exact_dense:
        return _density_sparse(components, spec, epsilon, p, bound)

    x, d = averaging_factorization(chosen, spec.omega)
    factor = CyclicVector.linear_factor(spec.omega)
    expansions = tuple(CosetExpansion.from_vector(c, spec.g) for c in components)
    xb = tuple(e.left_multiply(x) for e in expansions)
    db = tuple(e.left_multiply(d) for e in expansions)
    achieved = _tuple_norm(xb, p)
    verified = _verify_dense(factor, expansions, xb, db, mode)
    logger.info("density n=%d achieved %.3e (epsilon %.3e)", chosen, achieved, epsilon)
    return DensityReport(chosen, p, epsilon, bound, float(chosen) ** ((1.0 - p) / p), achieved, mode,
                         MembershipWitness(d, expansions, db, verified))


def _tuple_norm(parts: Sequence[CosetExpansion], p: float) -> float:
    from lplab_py.core.algebra import lp_of_moduli

    moduli = [e.moduli() for e in parts]
    return lp_of_moduli(np.concatenate(moduli) if moduli else np.zeros(0), p)


def _verify_dense(factor: CyclicVector, expansions, xb, db, mode: ScalarMode) -> bool:
    for e, xe, de in zip(expansions, xb, db):
        lhs = de.left_multiply(factor)
        rhs = e - xe
        if mode == ScalarMode.EXACT:
            if not (lhs - rhs).is_zero():
                raise InvariantViolationError("(g - omega)(d b) differs from (1 - x_n) b")
        else:
            gap = (lhs - rhs).moduli()
            if gap.size and float(gap.max()) > 1e-9:
                raise InvariantViolationError(f"float witness residual {float(gap.max()):.3e}")
    return mode == ScalarMode.EXACT


def _density_sparse(components, spec: AveragingSpec, epsilon: float, p: float, bound: float) -> DensityReport:
    """Exact rational omega outside the Gaussian units: sparse group-ring arithmetic."""
    from lplab_py.core.algebra import averaging_element, convolve, factor_witness, linear_factor, p_norm

    x = averaging_element(spec)
    d = factor_witness(spec)
    factor = linear_factor(spec.group, spec.g, spec.omega)
    xb = VectorTuple(spec.group, tuple(convolve(x, c) for c in components), spec.mode)
    for c in components:
        if convolve(factor, convolve(d, c)) != c - convolve(x, c):
            raise InvariantViolationError("(g - omega)(d b) differs from (1 - x_n) b")
    achieved = p_norm(xb, p)
    d_cyclic = CyclicVector.from_terms({k: d[spec.group.power(spec.g, k)] for k in range(0, spec.n)})
    expansions = tuple(CosetExpansion.from_vector(c, spec.g) for c in components)
    products = tuple(e.left_multiply(d_cyclic) for e in expansions)
    return DensityReport(spec.n, p, epsilon, bound, spec.norm_law(p), achieved, spec.mode,
                         MembershipWitness(d_cyclic, expansions, products, True))


@dataclass
class ComposedStage:
    omega: Any
    n: int
    tolerance: float
    lipschitz: float
    norm_xn: float
    verified: bool


@dataclass
class ComposedDensityReport:
    p: float
    epsilon: float
    stages: List[ComposedStage]
    achieved: float
    witness_factors: Tuple[CyclicVector, ...]

    @property
    def within_epsilon(self) -> bool:
        return self.achieved < self.epsilon

    @property
    def verified(self) -> bool:
        return all(s.verified for s in self.stages)


def composed_density(b: Union[GroupVector, VectorTuple], specs: Sequence[AveragingSpec], epsilon: float,
                     p: float) -> ComposedDensityReport:
    """
    Approximate b by prod_k (1 - x^(k)) b with every factor certified exactly.

    Stage k uses tolerance epsilon / 2^(k-1) and picks n_k with
    ||x^(k)||_p < tolerance / (2 L_k ||b||_1), where L_k bounds the l^1 norm of
    the product of the earlier factors. The total error stays below epsilon.
    """
    if not p > 1:
        raise ConfigError(f"density needs p > 1, got {p}")
    if not epsilon > 0:
        raise ConfigError(f"epsilon must be positive, got {epsilon}")
    components = _as_components(b)
    b_norm = sum(one_norm(c) for c in components)
    if not specs:
        return ComposedDensityReport(p, epsilon, [], 0.0, ())
    g = specs[0].g
    if any(s.g != g or s.group != specs[0].group for s in specs):
        raise ConfigError("composed density needs every stage to use the same g")
    stages: List[ComposedStage] = []
    factors: List[CyclicVector] = []
    product = CyclicVector.one(ScalarMode.FLOAT)
    lipschitz = 1.0
    for k, spec in enumerate(specs, start=1):
        tolerance = epsilon / 2 ** (k - 1)
        n = 1 if b_norm == 0 else recipe_n(tolerance / (2.0 * lipschitz * b_norm), p)
        x, d = averaging_factorization(n, spec.omega)
        one_minus = CyclicVector.one(x.mode) - x
        verified = CyclicVector.linear_factor(spec.omega) * d == one_minus
        if x.mode == ScalarMode.EXACT and not verified:
            raise InvariantViolationError(f"stage {k}: (g - omega) d differs from 1 - x_n")
        stages.append(ComposedStage(spec.omega, n, tolerance, lipschitz, float(n) ** ((1.0 - p) / p),
                                    verified and x.mode == ScalarMode.EXACT))
        factors.append(d)
        product = product * one_minus.to_float()
        lipschitz *= one_minus.one_norm()
    error_poly = CyclicVector.one(ScalarMode.FLOAT) - product
    parts = [CosetExpansion.from_vector(c.to_float(), g).left_multiply(error_poly) for c in components]
    achieved = _tuple_norm(parts, p)
    logger.info("composed density with %d stages achieved %.3e", len(stages), achieved)
    return ComposedDensityReport(p, epsilon, stages, achieved, tuple(factors))


# -- invariant vectors ------------------------------------------------------

@dataclass
class InvariantReport:
    radius: int
    components: int
    dimension: int
    decay_dimension: int
    certified: Optional[bool]


def invariant_vectors(b: CayleyBall) -> InvariantReport:
    """
    Dimension of functions on the ball constant along every in-ball edge,
    and of those also vanishing wherever an edge leaves the ball.
    """
    G = b.to_networkx()
    components = list(nx.connected_components(G))
    leaking = set(np.flatnonzero((b.neighbor_table < 0).any(axis=1)).tolist())
    decay = sum(1 for comp in components if not leaking.intersection(comp))
    certified = None
    if len(b) <= RANK_CERTIFY_CAP:
        src, dst = b.edge_arrays
        rows = len(src) + len(leaking)
        A = np.zeros((rows, len(b)))
        A[np.arange(len(src)), src] = 1.0
        A[np.arange(len(src)), dst] -= 1.0
        for k, v in enumerate(sorted(leaking)):
            A[len(src) + k, v] = 1.0
        edge_rank = np.linalg.matrix_rank(A[:len(src)]) if len(src) else 0
        full_rank = np.linalg.matrix_rank(A) if rows else 0
        certified = (len(b) - edge_rank == len(components)) and (len(b) - full_rank == decay)
    return InvariantReport(b.radius, len(components), len(components), decay, certified)
