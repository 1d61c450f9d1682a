"""
@ai-metadata {
    "domain": "group-algebra",
    "description": "Finitely supported vectors in CG, tuples and matrices over CG, scalar polynomials, averaging elements, factor witnesses, Neumann inverses and Young checks",
    "dependencies": ["groups.py", "errors.py"],
    "invariants": [
        "Stored coefficients are never zero",
        "Exact and Float scalars never mix silently",
        "(g - omega) * factor_witness == delta_e - x_n exactly"
    ]
}
"""

import cmath
import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from lplab_py.core.errors import (
    ConfigError,
    GroupMismatchError,
    InvariantViolationError,
    ResourceLimitError,
    ScalarModeError,
)
from lplab_py.core.groups import GeneratingSet, GroupElement, GroupSpec

logger = logging.getLogger(__name__)

UNIT_TOLERANCE = 1e-12
YOUNG_SLACK = 1e-9
# rational non-unit omegas make exact coefficients grow quickly
EXACT_NONUNIT_TERM_CAP = 2000


class ScalarMode(str, Enum):
    """Arithmetic mode of a vector: exact Gaussian rationals or IEEE-754 complex."""
    EXACT = "exact"
    FLOAT = "float"


@dataclass(frozen=True)
class ExactScalar:
    """Gaussian rational re + i*im."""
    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("re", "im"):
            value = getattr(self, name)
            if isinstance(value, (float, complex)):
                raise ScalarModeError(f"exact scalars take rationals, got {value!r}")
            object.__setattr__(self, name, Fraction(value))

    @staticmethod
    def _coerce(other: Any) -> Optional["ExactScalar"]:
        if isinstance(other, ExactScalar):
            return other
        if isinstance(other, (int, Fraction)):
            return ExactScalar(Fraction(other))
        if isinstance(other, (float, complex, np.floating, np.complexfloating)):
            raise ScalarModeError(f"cannot mix an exact scalar with float {other!r}")
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ExactScalar(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ExactScalar(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ExactScalar(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        den = o.abs2()
        if den == 0:
            raise ZeroDivisionError("division by the zero scalar")
        num = self * o.conjugate()
        return ExactScalar(num.re / den, num.im / den)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return ExactScalar(-self.re, -self.im)

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return (ExactScalar(1) / self) ** (-k)
        result, base = ExactScalar(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, ExactScalar):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __abs__(self) -> float:
        if self.im == 0:
            return float(abs(self.re))
        if self.re == 0:
            return float(abs(self.im))
        return math.hypot(float(self.re), float(self.im))

    def conjugate(self) -> "ExactScalar":
        return ExactScalar(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


Scalar = Union[ExactScalar, complex]

ZERO = ExactScalar(0)
ONE = ExactScalar(1)
I = ExactScalar(0, 1)


def mode_of(value: Any) -> ScalarMode:
    if isinstance(value, (ExactScalar, int, Fraction)):
        return ScalarMode.EXACT
    if isinstance(value, (float, complex, np.floating, np.complexfloating)):
        return ScalarMode.FLOAT
    raise ScalarModeError(f"not a scalar: {value!r}")


def as_scalar(value: Any, mode: ScalarMode, convert: bool = False) -> Scalar:
    """Coerce value into the given mode; exact-to-float needs convert=True."""
    if mode == ScalarMode.EXACT:
        if isinstance(value, ExactScalar):
            return value
        if isinstance(value, (int, Fraction)):
            return ExactScalar(Fraction(value))
        raise ScalarModeError(f"float value {value!r} in an exact expression")
    if isinstance(value, ExactScalar):
        if not convert:
            raise ScalarModeError("exact value in a float expression; convert with to_float()")
        return complex(value)
    if isinstance(value, (int, float, complex, np.number)):
        return complex(value)
    if isinstance(value, Fraction):
        return complex(float(value))
    raise ScalarModeError(f"not a scalar: {value!r}")


def scalar_zero(mode: ScalarMode) -> Scalar:
    return ZERO if mode == ScalarMode.EXACT else 0j


def scalar_one(mode: ScalarMode) -> Scalar:
    return ONE if mode == ScalarMode.EXACT else 1 + 0j


def is_unit_modulus(omega: Scalar) -> bool:
    if isinstance(omega, ExactScalar):
        return omega.abs2() == 1
    return abs(abs(omega) - 1.0) <= UNIT_TOLERANCE


def gaussian_unit_index(omega: Any) -> Optional[int]:
    """k with omega == i^k for exact omega in {1, i, -1, -i}, else None."""
    if not isinstance(omega, ExactScalar):
        return None
    for k, unit in enumerate((ONE, I, -ONE, -I)):
        if omega == unit:
            return k
    return None


def lp_of_moduli(values: np.ndarray, p: float) -> float:
    """(sum |v|^p)^(1/p) computed on the rescaled moduli."""
    if values.size == 0:
        return 0.0
    scale = float(values.max())
    if scale == 0.0:
        return 0.0
    if math.isinf(p):
        return scale
    return scale * float(np.sum((values / scale) ** p)) ** (1.0 / p)


def _check_p(p: float) -> None:
    if not p > 1:
        raise ConfigError(f"p must be > 1, got {p}")


@dataclass(frozen=True, eq=False)
class GroupVector:
    """A finitely supported function G -> C, stored as {element: nonzero coefficient}."""
    group: GroupSpec
    coeffs: Mapping[GroupElement, Scalar] = field(default_factory=dict)
    mode: ScalarMode = ScalarMode.EXACT

    @classmethod
    def from_terms(cls, group: GroupSpec, terms: Union[Mapping, Iterable[Tuple[GroupElement, Any]]],
                   mode: ScalarMode = ScalarMode.EXACT, convert: bool = False) -> "GroupVector":
        """
        Build a vector from (element, coefficient) pairs.

        Repeated elements are summed and zero coefficients dropped.

        Args:
            group: Group the support lives in.
            terms: Mapping or iterable of (element, coefficient).
            mode: Scalar mode of the stored coefficients.
            convert: Allow floats into an exact vector (rationalized) instead of raising.

        Returns:
            The vector with canonical sparse support.
        """
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: Dict[GroupElement, Scalar] = {}
        zero = scalar_zero(mode)
        for x, value in items:
            group.check(x)
            acc[x] = acc.get(x, zero) + as_scalar(value, mode, convert)
        return cls(group, {x: c for x, c in acc.items() if c != 0}, mode)

    @classmethod
    def zero(cls, group: GroupSpec, mode: ScalarMode = ScalarMode.EXACT) -> "GroupVector":
        return cls(group, {}, mode)

    @classmethod
    def delta(cls, group: GroupSpec, x: Optional[GroupElement] = None, coeff: Any = 1,
              mode: ScalarMode = ScalarMode.EXACT) -> "GroupVector":
        """
        Point mass coeff * delta_x.

        Args:
            group: Group of the vector.
            x: Support point; None means the identity.
            coeff: Coefficient at x.
            mode: Scalar mode.

        Returns:
            The one-term vector (or zero when coeff is 0).
        """
        x = group.identity() if x is None else x
        return cls.from_terms(group, [(x, coeff)], mode)

    # -- container protocol -------------------------------------------------

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, x: GroupElement) -> Scalar:
        return self.coeffs.get(x, scalar_zero(self.mode))

    def __iter__(self) -> Iterator[GroupElement]:
        return iter(self.support())

    def items(self) -> List[Tuple[GroupElement, Scalar]]:
        return [(x, self.coeffs[x]) for x in self.support()]

    def support(self) -> List[GroupElement]:
        return sorted(self.coeffs, key=self.group.sort_key)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, GroupVector):
            return NotImplemented
        return self.group == other.group and self.mode == other.mode and dict(self.coeffs) == dict(other.coeffs)

    def __hash__(self):
        return hash((self.group, self.mode, frozenset(self.coeffs.items())))

    # -- arithmetic ---------------------------------------------------------

    def _compatible(self, other: "GroupVector") -> None:
        if self.group != other.group:
            raise GroupMismatchError(f"vectors over {self.group.name} and {other.group.name}")
        if self.mode != other.mode:
            raise ScalarModeError(f"cannot combine {self.mode.value} and {other.mode.value} vectors")

    def __add__(self, other: "GroupVector") -> "GroupVector":
        if not isinstance(other, GroupVector):
            return NotImplemented
        self._compatible(other)
        acc = dict(self.coeffs)
        zero = scalar_zero(self.mode)
        for x, c in other.coeffs.items():
            value = acc.get(x, zero) + c
            if value != 0:
                acc[x] = value
            else:
                acc.pop(x, None)
        return GroupVector(self.group, acc, self.mode)

    def __neg__(self) -> "GroupVector":
        return GroupVector(self.group, {x: -c for x, c in self.coeffs.items()}, self.mode)

    def __sub__(self, other: "GroupVector") -> "GroupVector":
        if not isinstance(other, GroupVector):
            return NotImplemented
        return self + (-other)

    def scale(self, c: Any) -> "GroupVector":
        c = as_scalar(c, self.mode)
        if c == 0:
            return GroupVector.zero(self.group, self.mode)
        return GroupVector(self.group, {x: c * v for x, v in self.coeffs.items()}, self.mode)

    def __mul__(self, other):
        if isinstance(other, GroupVector):
            return convolve(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def to_float(self) -> "GroupVector":
        if self.mode == ScalarMode.FLOAT:
            return self
        return GroupVector(self.group, {x: complex(c) for x, c in self.coeffs.items()}, ScalarMode.FLOAT)

    def coefficient_sum(self) -> Scalar:
        total = scalar_zero(self.mode)
        for c in self.coeffs.values():
            total = total + c
        return total

    def moduli(self) -> np.ndarray:
        return np.array([abs(c) for c in self.coeffs.values()], dtype=float)

    def support_radius(self, gens: Optional[GeneratingSet] = None) -> int:
        return max((self.group.word_length(x, gens) for x in self.coeffs), default=0)

    def format(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(f"({c})*[{self.group.format_element(x)}]" for x, c in self.items())


def convolve(alpha: GroupVector, beta: GroupVector) -> GroupVector:
    """
    Group-ring product (alpha*beta)(z) = sum_{xy=z} alpha(x) beta(y).

    Args:
        alpha: Left factor.
        beta: Right factor, same group and scalar mode.

    Returns:
        The product, with exact arithmetic kept exact.
    """
    alpha._compatible(beta)
    group, zero = alpha.group, scalar_zero(alpha.mode)
    acc: Dict[GroupElement, Scalar] = {}
    for x, a in alpha.coeffs.items():
        for y, b in beta.coeffs.items():
            z = group.mul(x, y)
            acc[z] = acc.get(z, zero) + a * b
    return GroupVector(group, {z: c for z, c in acc.items() if c != 0}, alpha.mode)


@dataclass(frozen=True, eq=False)
class VectorTuple:
    """An element (v_1, ..., v_m) of (CG)^m."""
    group: GroupSpec
    components: Tuple[GroupVector, ...]
    mode: ScalarMode = ScalarMode.EXACT

    def __post_init__(self):
        for v in self.components:
            if v.group != self.group:
                raise GroupMismatchError(f"component over {v.group.name} in a tuple over {self.group.name}")
            if v.mode != self.mode:
                raise ScalarModeError("tuple components must share one scalar mode")

    @classmethod
    def of(cls, *components: GroupVector) -> "VectorTuple":
        if not components:
            raise ConfigError("use VectorTuple.zero for an empty tuple")
        return cls(components[0].group, tuple(components), components[0].mode)

    @classmethod
    def zero(cls, group: GroupSpec, m: int, mode: ScalarMode = ScalarMode.EXACT) -> "VectorTuple":
        return cls(group, tuple(GroupVector.zero(group, mode) for _ in range(m)), mode)

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self) -> Iterator[GroupVector]:
        return iter(self.components)

    def __getitem__(self, k: int) -> GroupVector:
        return self.components[k]

    def __eq__(self, other):
        if not isinstance(other, VectorTuple):
            return NotImplemented
        return self.group == other.group and self.components == other.components

    def _check_shape(self, other: "VectorTuple") -> None:
        if len(self) != len(other):
            raise GroupMismatchError(f"tuples of length {len(self)} and {len(other)}")

    def __add__(self, other: "VectorTuple") -> "VectorTuple":
        self._check_shape(other)
        return VectorTuple(self.group, tuple(a + b for a, b in zip(self, other)), self.mode)

    def __sub__(self, other: "VectorTuple") -> "VectorTuple":
        self._check_shape(other)
        return VectorTuple(self.group, tuple(a - b for a, b in zip(self, other)), self.mode)

    def __neg__(self) -> "VectorTuple":
        return VectorTuple(self.group, tuple(-a for a in self), self.mode)

    def scale(self, c: Any) -> "VectorTuple":
        return VectorTuple(self.group, tuple(a.scale(c) for a in self), self.mode)

    def left_multiply(self, u: GroupVector) -> "VectorTuple":
        """u * (v_1, ..., v_m) = (u v_1, ..., u v_m)."""
        return VectorTuple(self.group, tuple(convolve(u, v) for v in self), self.mode)

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self)

    def to_float(self) -> "VectorTuple":
        return VectorTuple(self.group, tuple(v.to_float() for v in self), ScalarMode.FLOAT)

    def moduli(self) -> np.ndarray:
        parts = [v.moduli() for v in self]
        return np.concatenate(parts) if parts else np.zeros(0)


GroupRingObject = Union[GroupVector, VectorTuple]


# -- norms ------------------------------------------------------------------

def one_norm(v: GroupRingObject) -> float:
    """Sum of coefficient moduli over every component."""
    return float(np.sum(v.moduli()))


def p_norm(v: GroupRingObject, p: float) -> float:
    """
    The l^p norm; for tuples (sum_k ||v_k||_p^p)^(1/p).

    Args:
        v: Vector or tuple of vectors.
        p: Exponent, strictly greater than 1 (use one_norm for p = 1).

    Returns:
        The norm as a float.
    """
    _check_p(p)
    return lp_of_moduli(v.moduli(), p)


def sup_norm(v: GroupRingObject) -> float:
    """Largest coefficient modulus, 0 for the zero vector."""
    values = v.moduli()
    return float(values.max()) if values.size else 0.0


def mixed_norm(v: VectorTuple, p: float) -> float:
    """(sum_k ||v_k||_1^p)^(1/p)."""
    _check_p(p)
    return lp_of_moduli(np.array([one_norm(c) for c in v], dtype=float), p)


# -- matrices over CG -------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GroupRingMatrix:
    """An r x c matrix with entries in CG."""
    group: GroupSpec
    rows: Tuple[Tuple[GroupVector, ...], ...]
    mode: ScalarMode = ScalarMode.EXACT

    def __post_init__(self):
        if not self.rows or not self.rows[0]:
            raise ConfigError("a group-ring matrix needs at least one row and one column")
        width = len(self.rows[0])
        for row in self.rows:
            if len(row) != width:
                raise ConfigError("ragged group-ring matrix")
            for entry in row:
                if entry.group != self.group:
                    raise GroupMismatchError(f"entry over {entry.group.name} in a matrix over {self.group.name}")
                if entry.mode != self.mode:
                    raise ScalarModeError("matrix entries must share one scalar mode")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[GroupVector]]) -> "GroupRingMatrix":
        first = rows[0][0]
        return cls(first.group, tuple(tuple(r) for r in rows), first.mode)

    @classmethod
    def identity(cls, group: GroupSpec, size: int, mode: ScalarMode = ScalarMode.EXACT) -> "GroupRingMatrix":
        return cls(group, tuple(
            tuple(GroupVector.delta(group, mode=mode) if i == j else GroupVector.zero(group, mode)
                  for j in range(size))
            for i in range(size)), mode)

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.rows), len(self.rows[0])

    def __getitem__(self, ij: Tuple[int, int]) -> GroupVector:
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, GroupRingMatrix):
            return NotImplemented
        return self.group == other.group and self.rows == other.rows

    def __neg__(self) -> "GroupRingMatrix":
        return GroupRingMatrix(self.group, tuple(tuple(-e for e in row) for row in self.rows), self.mode)

    def apply(self, t: VectorTuple) -> VectorTuple:
        """Column action (M t)_i = sum_j M_ij t_j."""
        r, c = self.shape
        if len(t) != c:
            raise GroupMismatchError(f"matrix of shape {r}x{c} applied to a tuple of length {len(t)}")
        out = []
        for row in self.rows:
            acc = GroupVector.zero(self.group, self.mode)
            for entry, component in zip(row, t):
                acc = acc + convolve(entry, component)
            out.append(acc)
        return VectorTuple(self.group, tuple(out), self.mode)

    def act_on_row(self, f: VectorTuple) -> VectorTuple:
        """Row action (f M)_j = sum_i f_i M_ij."""
        r, c = self.shape
        if len(f) != r:
            raise GroupMismatchError(f"row tuple of length {len(f)} against a {r}x{c} matrix")
        out = []
        for j in range(c):
            acc = GroupVector.zero(self.group, self.mode)
            for i in range(r):
                acc = acc + convolve(f[i], self.rows[i][j])
            out.append(acc)
        return VectorTuple(self.group, tuple(out), self.mode)

    def __matmul__(self, other: "GroupRingMatrix") -> "GroupRingMatrix":
        if self.group != other.group:
            raise GroupMismatchError(f"matrices over {self.group.name} and {other.group.name}")
        r, k = self.shape
        k2, c = other.shape
        if k != k2:
            raise GroupMismatchError(f"cannot multiply {r}x{k} by {k2}x{c}")
        rows = []
        for i in range(r):
            row = []
            for j in range(c):
                acc = GroupVector.zero(self.group, self.mode)
                for m in range(k):
                    acc = acc + convolve(self.rows[i][m], other.rows[m][j])
                row.append(acc)
            rows.append(tuple(row))
        return GroupRingMatrix(self.group, tuple(rows), self.mode)

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.rows for e in row)

    def nonzero_positions(self) -> List[Tuple[int, int]]:
        """1-based (row, column) positions of nonzero entries."""
        return [(i + 1, j + 1) for i, row in enumerate(self.rows) for j, e in enumerate(row) if not e.is_zero()]

    def involution_transpose(self) -> "GroupRingMatrix":
        """M* with (M*)_ij = (M_ji)^*, where delta_x^* = delta_{x^-1} and scalars are conjugated."""
        r, c = self.shape
        rows = []
        for j in range(c):
            row = []
            for i in range(r):
                entry = self.rows[i][j]
                row.append(GroupVector(
                    self.group,
                    {self.group.inv(x): v.conjugate() for x, v in entry.coeffs.items()},
                    self.mode))
            rows.append(tuple(row))
        return GroupRingMatrix(self.group, tuple(rows), self.mode)

    def support_radius(self, gens: Optional[GeneratingSet] = None) -> int:
        return max(e.support_radius(gens) for row in self.rows for e in row)

    def to_float(self) -> "GroupRingMatrix":
        return GroupRingMatrix(self.group, tuple(tuple(e.to_float() for e in row) for row in self.rows),
                               ScalarMode.FLOAT)


def gr_matrix_apply(matrix: GroupRingMatrix, t: VectorTuple) -> VectorTuple:
    """
    Apply a group-ring matrix to a column tuple.

    Args:
        matrix: r x c matrix over CG.
        t: Tuple of length c.

    Returns:
        The tuple M t of length r.
    """
    return matrix.apply(t)


# -- scalar polynomials -----------------------------------------------------

@dataclass(frozen=True)
class PolynomialOverC:
    """sum_i c_i t^i with trailing zeros stripped."""
    coeffs: Tuple[Scalar, ...]
    mode: ScalarMode = ScalarMode.EXACT

    @classmethod
    def from_coeffs(cls, values: Sequence[Any], mode: ScalarMode = ScalarMode.EXACT) -> "PolynomialOverC":
        coeffs = [as_scalar(v, mode) for v in values]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        return cls(tuple(coeffs), mode)

    @classmethod
    def linear(cls, omega: Scalar, mode: ScalarMode = ScalarMode.EXACT) -> "PolynomialOverC":
        """t - omega."""
        return cls.from_coeffs([-as_scalar(omega, mode), 1], mode)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def evaluate(self, t: Any) -> Scalar:
        t = as_scalar(t, self.mode)
        acc = scalar_zero(self.mode)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def divide_linear(self, omega: Any) -> Tuple["PolynomialOverC", Scalar]:
        """Horner division by (t - omega): returns (quotient, remainder)."""
        omega = as_scalar(omega, self.mode)
        if self.degree < 1:
            return PolynomialOverC((), self.mode), (self.coeffs[0] if self.coeffs else scalar_zero(self.mode))
        n = self.degree
        q = [scalar_zero(self.mode)] * n
        q[n - 1] = self.coeffs[n]
        for j in range(n - 1, 0, -1):
            q[j - 1] = self.coeffs[j] + omega * q[j]
        remainder = self.coeffs[0] + omega * q[0]
        return PolynomialOverC.from_coeffs(q, self.mode), remainder

    def __add__(self, other: "PolynomialOverC") -> "PolynomialOverC":
        n = max(len(self.coeffs), len(other.coeffs))
        zero = scalar_zero(self.mode)
        a = list(self.coeffs) + [zero] * (n - len(self.coeffs))
        b = list(other.coeffs) + [zero] * (n - len(other.coeffs))
        return PolynomialOverC.from_coeffs([x + y for x, y in zip(a, b)], self.mode)

    def __neg__(self) -> "PolynomialOverC":
        return PolynomialOverC(tuple(-c for c in self.coeffs), self.mode)

    def __sub__(self, other: "PolynomialOverC") -> "PolynomialOverC":
        return self + (-other)

    def __mul__(self, other: "PolynomialOverC") -> "PolynomialOverC":
        if not self.coeffs or not other.coeffs:
            return PolynomialOverC((), self.mode)
        zero = scalar_zero(self.mode)
        out = [zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return PolynomialOverC.from_coeffs(out, self.mode)

    def to_group_vector(self, group: GroupSpec, g: GroupElement, shift: int = 0) -> GroupVector:
        """sum_i c_i delta_{g^(i+shift)}."""
        terms = []
        x = group.power(g, shift)
        for c in self.coeffs:
            if c != 0:
                terms.append((x, c))
            x = group.mul(x, g)
        return GroupVector.from_terms(group, terms, self.mode)


# -- averaging and witnesses ------------------------------------------------

@dataclass(frozen=True)
class AveragingSpec:
    """Parameters of x_n = (1/n) sum_{k=1}^n omega^-k delta_{g^k}."""
    group: GroupSpec
    g: GroupElement
    omega: Any = 1
    n: int = 1

    def __post_init__(self):
        self.group.check(self.g)
        if not self.group.has_infinite_order(self.g):
            raise ConfigError(f"{self.group.format_element(self.g)} has finite order in {self.group.name}")
        if not isinstance(self.n, int) or self.n < 1:
            raise ConfigError(f"n must be a positive integer, got {self.n!r}")
        omega = as_scalar(self.omega, mode_of(self.omega))
        if not is_unit_modulus(omega):
            raise ConfigError(f"|omega| must be 1, got {abs(omega)}")
        object.__setattr__(self, "omega", omega)

    @property
    def mode(self) -> ScalarMode:
        return mode_of(self.omega)

    @property
    def unit_index(self) -> Optional[int]:
        return gaussian_unit_index(self.omega)

    def with_n(self, n: int) -> "AveragingSpec":
        return replace(self, n=n)

    def norm_law(self, p: float) -> float:
        """Closed form ||x_n||_p = n^((1-p)/p)."""
        return float(self.n) ** ((1.0 - p) / p)


def _omega_inverse_powers(spec: AveragingSpec, count: int) -> List[Scalar]:
    """[omega^-1, ..., omega^-count] in the averaging mode."""
    if spec.mode == ScalarMode.FLOAT:
        theta = cmath.phase(spec.omega)
        return [cmath.rect(1.0, -k * theta) for k in range(1, count + 1)]
    if spec.unit_index is None and count > EXACT_NONUNIT_TERM_CAP:
        raise ResourceLimitError(
            f"exact powers of omega={spec.omega} beyond {EXACT_NONUNIT_TERM_CAP} terms; use a Gaussian unit or Float mode")
    w = spec.omega.conjugate()
    out, acc = [], ONE
    for _ in range(count):
        acc = acc * w
        out.append(acc)
    return out


def averaging_element(spec: AveragingSpec) -> GroupVector:
    """
    x_n = (1/n) sum_{k=1..n} omega^-k delta_{g^k}.

    Args:
        spec: Group, element g, unit omega and n; the scalar mode follows omega.

    Returns:
        The averaging element, exact for rational or Gaussian-unit omega.
    """
    group, n = spec.group, spec.n
    if spec.mode == ScalarMode.FLOAT:
        theta = cmath.phase(spec.omega)
        coeffs = [cmath.rect(1.0 / n, -k * theta) for k in range(1, n + 1)]
    else:
        scale = Fraction(1, n)
        coeffs = [c * scale for c in _omega_inverse_powers(spec, n)]
    terms, x = [], group.identity()
    for c in coeffs:
        x = group.mul(x, spec.g)
        terms.append((x, c))
    return GroupVector.from_terms(group, terms, spec.mode)


def linear_factor(group: GroupSpec, g: GroupElement, omega: Any, mode: Optional[ScalarMode] = None) -> GroupVector:
    """delta_g - omega * delta_e."""
    mode = mode or mode_of(omega)
    return GroupVector.from_terms(group, [(g, 1), (group.identity(), -as_scalar(omega, mode))], mode)


def factor_witness(spec: AveragingSpec) -> GroupVector:
    """
    Certificate d with (g - omega) d == delta_e - x_n.

    The quotient comes from synthetic division of 1 - x_n by t - omega and is
    re-multiplied exactly before it is returned.

    Args:
        spec: An Exact-mode averaging spec.

    Returns:
        The witness d, supported on the identity and g, ..., g^(n-1).
    """
    if spec.mode != ScalarMode.EXACT:
        raise ScalarModeError("factor witnesses are certified in Exact mode only")
    n = spec.n
    scale = Fraction(1, n)
    # 1 - x_n as a polynomial in t = g
    poly = [ONE] + [-(c * scale) for c in _omega_inverse_powers(spec, n)]
    quotient, remainder = PolynomialOverC.from_coeffs(poly).divide_linear(spec.omega)
    if remainder != 0:
        raise InvariantViolationError(f"1 - x_n does not vanish at omega (remainder {remainder})")
    d = quotient.to_group_vector(spec.group, spec.g)
    target = GroupVector.delta(spec.group) - averaging_element(spec)
    if convolve(linear_factor(spec.group, spec.g, spec.omega), d) != target:
        raise InvariantViolationError("(g - omega) d differs from delta_e - x_n")
    logger.debug("factor witness for n=%d has support %d", n, len(d))
    return d


def neumann_inverse(group: GroupSpec, g: GroupElement, omega: Any, terms: int) -> GroupVector:
    """
    Truncated l^1 inverse of g - omega for |omega| != 1.

    Args:
        group: Ambient group.
        g: Element of infinite order.
        omega: Scalar off the unit circle.
        terms: Truncation order; the series keeps terms + 1 summands.

    Returns:
        The partial geometric series; inverse_residual measures its error.
    """
    group.check(g)
    if not group.has_infinite_order(g):
        raise ConfigError(f"{group.format_element(g)} has finite order in {group.name}")
    if terms < 0:
        raise ConfigError(f"truncation order must be non-negative, got {terms}")
    mode = mode_of(omega)
    omega = as_scalar(omega, mode)
    if is_unit_modulus(omega):
        raise ConfigError("g - omega has no l^1 inverse when |omega| = 1")
    one = scalar_one(mode)
    out = []
    if abs(omega) > 1:
        # (g - omega)^-1 = -sum_k g^k / omega^(k+1)
        inv_omega = one / omega
        coeff, x = -inv_omega, group.identity()
        for _ in range(terms + 1):
            out.append((x, coeff))
            coeff = coeff * inv_omega
            x = group.mul(x, g)
    else:
        # (g - omega)^-1 = sum_k omega^k g^-(k+1)
        g_inv = group.inv(g)
        coeff, x = one, g_inv
        for _ in range(terms + 1):
            out.append((x, coeff))
            coeff = coeff * omega
            x = group.mul(x, g_inv)
    return GroupVector.from_terms(group, out, mode)


def inverse_residual(group: GroupSpec, g: GroupElement, omega: Any, u: GroupVector) -> float:
    """||(g - omega) u - delta_e||_1."""
    product = convolve(linear_factor(group, g, omega, u.mode), u)
    return one_norm(product - GroupVector.delta(group, mode=u.mode))


def distinct_average(group: GroupSpec, elements: Sequence[GroupElement],
                     omegas: Optional[Sequence[Any]] = None,
                     mode: ScalarMode = ScalarMode.EXACT) -> GroupVector:
    """(1/n) sum_k omega_k^-1 delta_{g_k} over n distinct elements."""
    if not elements:
        raise ConfigError("need at least one element")
    if len(set(elements)) != len(elements):
        raise ConfigError("elements must be distinct")
    omegas = list(omegas) if omegas is not None else [1] * len(elements)
    if len(omegas) != len(elements):
        raise ConfigError("one omega per element")
    n = len(elements)
    one = scalar_one(mode)
    terms = []
    for x, w in zip(elements, omegas):
        w = as_scalar(w, mode)
        if not is_unit_modulus(w):
            raise ConfigError(f"|omega| must be 1, got {abs(w)}")
        coeff = (one / w) * (Fraction(1, n) if mode == ScalarMode.EXACT else 1.0 / n)
        terms.append((x, coeff))
    return GroupVector.from_terms(group, terms, mode)


# -- Young inequalities -----------------------------------------------------

class YoungForm(str, Enum):
    SCALAR = "scalar"
    L1_ON_TUPLE = "l1_on_tuple"
    LP_ON_TUPLE = "lp_on_tuple"


@dataclass(frozen=True)
class YoungCheck:
    form: YoungForm
    lhs: float
    rhs: float

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs + YOUNG_SLACK

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs


def young_check(alpha: GroupVector, beta: GroupRingObject, p: float,
                form: Optional[YoungForm] = None) -> YoungCheck:
    """
    Compare ||alpha beta||_p against the Young bound of the requested form.

    Args:
        alpha: Left factor.
        beta: Vector (scalar form) or tuple (the two tuple forms).
        p: Exponent, strictly greater than 1.
        form: Which inequality; defaults by the type of beta.

    Returns:
        A YoungCheck holding both sides.
    """
    _check_p(p)
    if isinstance(beta, GroupVector):
        form = form or YoungForm.SCALAR
        if form != YoungForm.SCALAR:
            raise ConfigError(f"{form.value} needs a tuple right-hand side")
        return YoungCheck(form, p_norm(convolve(alpha, beta), p), one_norm(alpha) * p_norm(beta, p))
    form = form or YoungForm.L1_ON_TUPLE
    lhs = p_norm(beta.left_multiply(alpha), p)
    if form == YoungForm.L1_ON_TUPLE:
        return YoungCheck(form, lhs, one_norm(alpha) * p_norm(beta, p))
    if form == YoungForm.LP_ON_TUPLE:
        return YoungCheck(form, lhs, p_norm(alpha, p) * mixed_norm(beta, p))
    raise ConfigError(f"{form.value} needs a scalar right-hand side")
