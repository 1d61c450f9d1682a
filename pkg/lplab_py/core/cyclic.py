"""
@ai-metadata {
    "domain": "group-algebra",
    "description": "Dense Laurent polynomials in one infinite-order element g, with exact integer numerators or float coefficients, and right-coset expansions of group-ring vectors",
    "dependencies": ["algebra.py", "groups.py", "errors.py"],
    "invariants": [
        "Exact numerators stay below 2^62 or the operation raises ResourceLimitError",
        "Stored arrays are trimmed: first and last coefficients are nonzero",
        "Exact fractions are reduced: gcd(numerators, denom) == 1"
    ]
}
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Any, Dict, List, Mapping, Optional, Tuple

import numpy as np
from scipy.signal import fftconvolve

from lplab_py.core.algebra import (
    ExactScalar,
    GroupVector,
    ScalarMode,
    as_scalar,
    gaussian_unit_index,
    lp_of_moduli,
    mode_of,
    scalar_zero,
)
from lplab_py.core.errors import (
    ConfigError,
    GroupMismatchError,
    InvariantViolationError,
    ResourceLimitError,
    ScalarModeError,
)
from lplab_py.core.groups import GroupElement, GroupSpec

logger = logging.getLogger(__name__)

INT_LIMIT = 2 ** 62
EXACT_CONV_CAP = 50_000_000
MAX_TERMS = 20_000_000
FFT_THRESHOLD = 64

# i^e for e = 0..3
_UNIT_RE = np.array([1, 0, -1, 0], dtype=np.int64)
_UNIT_IM = np.array([0, 1, 0, -1], dtype=np.int64)


def _guard(bound: int, what: str) -> None:
    if bound >= INT_LIMIT:
        raise ResourceLimitError(f"exact {what} would exceed the int64 range; lower n or use Float mode")


def _max_abs(arr: Optional[np.ndarray]) -> int:
    if arr is None or arr.size == 0:
        return 0
    return int(max(abs(int(arr.max())), abs(int(arr.min()))))


def _conv(x: np.ndarray, y: np.ndarray, exact: bool) -> np.ndarray:
    if exact:
        if x.size * y.size > EXACT_CONV_CAP and min(x.size, y.size) > 2:
            raise ResourceLimitError(f"exact convolution of {x.size} by {y.size} terms exceeds the cap")
        _guard(_max_abs(x) * _max_abs(y) * min(x.size, y.size), "convolution")
        return np.convolve(x, y)
    if min(x.size, y.size) > FFT_THRESHOLD:
        return fftconvolve(x, y)
    return np.convolve(x, y)


def _unit_phase(re: np.ndarray, im: Optional[np.ndarray], e: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Multiply each coefficient by i^e."""
    e = np.mod(e, 4)
    c, s = _UNIT_RE[e], _UNIT_IM[e]
    if im is None:
        return re * c, re * s
    return re * c - im * s, re * s + im * c


def _float_phase(re: np.ndarray, im: Optional[np.ndarray], angles: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    c, s = np.cos(angles), np.sin(angles)
    if im is None:
        return re * c, re * s
    return re * c - im * s, re * s + im * c


def _exact_parts(value: ExactScalar) -> Tuple[int, int, int]:
    """(a, b, r) with value == (a + i b) / r."""
    r = value.re.denominator * value.im.denominator // math.gcd(value.re.denominator, value.im.denominator)
    return int(value.re * r), int(value.im * r), r


@dataclass(frozen=True, eq=False)
class CyclicVector:
    """sum_j c_j g^j for j = lo .. lo + len - 1, with c_j = (re_j + i im_j) / denom."""
    lo: int
    re: np.ndarray
    im: Optional[np.ndarray] = None
    denom: int = 1
    mode: ScalarMode = ScalarMode.EXACT

    # -- construction -------------------------------------------------------

    @classmethod
    def build(cls, lo: int, re: np.ndarray, im: Optional[np.ndarray] = None, denom: int = 1,
              mode: ScalarMode = ScalarMode.EXACT) -> "CyclicVector":
        """Normalize and freeze the arrays."""
        dtype = np.int64 if mode == ScalarMode.EXACT else np.float64
        re = np.asarray(re, dtype=dtype)
        if im is not None:
            im = np.asarray(im, dtype=dtype)
            if not im.any():
                im = None
        nonzero = re != 0 if im is None else (re != 0) | (im != 0)
        if not nonzero.any():
            return cls.zero(mode)
        first = int(np.argmax(nonzero))
        last = len(nonzero) - int(np.argmax(nonzero[::-1]))
        re = re[first:last]
        im = im[first:last] if im is not None else None
        lo += first
        if mode == ScalarMode.EXACT:
            if denom < 0:
                re, im, denom = -re, (-im if im is not None else None), -denom
            common = int(np.gcd.reduce(np.abs(re)))
            if im is not None:
                common = math.gcd(common, int(np.gcd.reduce(np.abs(im))))
            common = math.gcd(common, denom)
            if common > 1:
                re = re // common
                im = im // common if im is not None else None
                denom //= common
        else:
            denom = 1
        re.setflags(write=False)
        if im is not None:
            im.setflags(write=False)
        return cls(lo, re, im, denom, mode)

    @classmethod
    def zero(cls, mode: ScalarMode = ScalarMode.EXACT) -> "CyclicVector":
        dtype = np.int64 if mode == ScalarMode.EXACT else np.float64
        empty = np.zeros(0, dtype=dtype)
        empty.setflags(write=False)
        return cls(0, empty, None, 1, mode)

    @classmethod
    def from_terms(cls, terms: Mapping[int, Any], mode: ScalarMode = ScalarMode.EXACT) -> "CyclicVector":
        """Build from {exponent: scalar}."""
        values = {k: as_scalar(v, mode) for k, v in terms.items() if v != 0}
        if not values:
            return cls.zero(mode)
        lo, hi = min(values), max(values)
        if hi - lo + 1 > MAX_TERMS:
            raise ResourceLimitError(f"cyclic vector spanning {hi - lo + 1} exponents exceeds {MAX_TERMS}")
        size = hi - lo + 1
        if mode == ScalarMode.FLOAT:
            re, im = np.zeros(size), np.zeros(size)
            for k, v in values.items():
                re[k - lo], im[k - lo] = v.real, v.imag
            return cls.build(lo, re, im, 1, mode)
        parts = {k: _exact_parts(v) for k, v in values.items()}
        denom = reduce(lambda a, b: a * b // math.gcd(a, b), (r for _, _, r in parts.values()), 1)
        re, im = np.zeros(size, dtype=np.int64), np.zeros(size, dtype=np.int64)
        for k, (a, b, r) in parts.items():
            f = denom // r
            _guard(max(abs(a), abs(b)) * f, "coefficient")
            re[k - lo], im[k - lo] = a * f, b * f
        return cls.build(lo, re, im, denom, mode)

    @classmethod
    def monomial(cls, k: int, coeff: Any = 1, mode: ScalarMode = ScalarMode.EXACT) -> "CyclicVector":
        return cls.from_terms({k: coeff}, mode)

    @classmethod
    def one(cls, mode: ScalarMode = ScalarMode.EXACT) -> "CyclicVector":
        return cls.monomial(0, 1, mode)

    @classmethod
    def linear_factor(cls, omega: Any) -> "CyclicVector":
        """g - omega."""
        mode = mode_of(omega)
        return cls.from_terms({0: -as_scalar(omega, mode), 1: 1}, mode)

    @classmethod
    def averaging(cls, n: int, omega: Any = 1) -> "CyclicVector":
        """x_n = (1/n) sum_{k=1}^n omega^-k g^k."""
        if n < 1:
            raise ConfigError(f"n must be positive, got {n}")
        if n > MAX_TERMS:
            raise ResourceLimitError(f"n={n} exceeds the {MAX_TERMS}-term cap")
        mode = mode_of(omega)
        k = np.arange(1, n + 1, dtype=np.int64)
        if mode == ScalarMode.FLOAT:
            theta = float(np.angle(complex(omega)))
            return cls.build(1, np.cos(k * theta) / n, -np.sin(k * theta) / n, 1, mode)
        unit = gaussian_unit_index(as_scalar(omega, mode))
        if unit is None:
            raise ConfigError(f"the dense exact engine needs a Gaussian unit omega, got {omega}")
        e = np.mod(-unit * k, 4)
        return cls.build(1, _UNIT_RE[e], _UNIT_IM[e], n, mode)

    # -- inspection ---------------------------------------------------------

    @property
    def hi(self) -> int:
        return self.lo + len(self.re) - 1

    def __len__(self) -> int:
        return len(self.re)

    def is_zero(self) -> bool:
        return self.re.size == 0

    def __eq__(self, other):
        if not isinstance(other, CyclicVector):
            return NotImplemented
        if self.mode != other.mode:
            return False
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        if (self.im is None) != (other.im is None):
            return False
        return (self.lo == other.lo and self.denom == other.denom
                and np.array_equal(self.re, other.re)
                and (self.im is None or np.array_equal(self.im, other.im)))

    __hash__ = None

    def coefficient(self, k: int) -> Any:
        j = k - self.lo
        if j < 0 or j >= len(self.re):
            return scalar_zero(self.mode)
        im = int(self.im[j]) if self.im is not None else 0
        if self.mode == ScalarMode.EXACT:
            return ExactScalar(Fraction(int(self.re[j]), self.denom), Fraction(im, self.denom))
        return complex(float(self.re[j]), float(im))

    def moduli(self) -> np.ndarray:
        re = self.re.astype(np.float64)
        values = np.abs(re) if self.im is None else np.hypot(re, self.im.astype(np.float64))
        return values / self.denom

    def one_norm(self) -> float:
        return float(np.sum(self.moduli()))

    def p_norm(self, p: float) -> float:
        if p == 1:
            return self.one_norm()
        return lp_of_moduli(self.moduli(), p)

    def sup_norm(self) -> float:
        values = self.moduli()
        return float(values.max()) if values.size else 0.0

    def to_float(self) -> "CyclicVector":
        if self.mode == ScalarMode.FLOAT:
            return self
        im = self.im / self.denom if self.im is not None else None
        return CyclicVector.build(self.lo, self.re / self.denom, im, 1, ScalarMode.FLOAT)

    # -- arithmetic ---------------------------------------------------------

    def _compatible(self, other: "CyclicVector") -> None:
        if self.mode != other.mode:
            raise ScalarModeError(f"cannot combine {self.mode.value} and {other.mode.value} cyclic vectors")

    def __neg__(self) -> "CyclicVector":
        im = -self.im if self.im is not None else None
        return CyclicVector.build(self.lo, -self.re, im, self.denom, self.mode)

    def __add__(self, other: "CyclicVector") -> "CyclicVector":
        self._compatible(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        exact = self.mode == ScalarMode.EXACT
        denom, fa, fb = 1, 1, 1
        if exact:
            denom = self.denom * other.denom // math.gcd(self.denom, other.denom)
            fa, fb = denom // self.denom, denom // other.denom
            _guard(max(_max_abs(self.re), _max_abs(self.im)) * fa
                   + max(_max_abs(other.re), _max_abs(other.im)) * fb, "sum")
        lo, hi = min(self.lo, other.lo), max(self.hi, other.hi)
        dtype = self.re.dtype
        re = np.zeros(hi - lo + 1, dtype=dtype)
        use_im = self.im is not None or other.im is not None
        im = np.zeros(hi - lo + 1, dtype=dtype) if use_im else None
        for v, f in ((self, fa), (other, fb)):
            start = v.lo - lo
            window = slice(start, start + len(v.re))
            re[window] += v.re * f if exact else v.re
            if v.im is not None:
                im[window] += v.im * f if exact else v.im
        return CyclicVector.build(lo, re, im, denom, self.mode)

    def __sub__(self, other: "CyclicVector") -> "CyclicVector":
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, CyclicVector):
            return self.scale(other)
        self._compatible(other)
        if self.is_zero() or other.is_zero():
            return CyclicVector.zero(self.mode)
        exact = self.mode == ScalarMode.EXACT
        re = _conv(self.re, other.re, exact)
        im = None
        if self.im is not None and other.im is not None:
            re = re - _conv(self.im, other.im, exact)
        if self.im is not None or other.im is not None:
            im = np.zeros_like(re)
            if other.im is not None:
                im = im + _conv(self.re, other.im, exact)
            if self.im is not None:
                im = im + _conv(self.im, other.re, exact)
        denom = 1
        if exact:
            denom = self.denom * other.denom
            _guard(denom, "denominator")
        return CyclicVector.build(self.lo + other.lo, re, im, denom, self.mode)

    def scale(self, s: Any) -> "CyclicVector":
        s = as_scalar(s, self.mode)
        if self.mode == ScalarMode.FLOAT:
            a, b = s.real, s.imag
            im = self.im if self.im is not None else np.zeros_like(self.re)
            return CyclicVector.build(self.lo, self.re * a - im * b, self.re * b + im * a, 1, self.mode)
        a, b, r = _exact_parts(s)
        _guard(max(_max_abs(self.re), _max_abs(self.im)) * (abs(a) + abs(b)), "scaling")
        im = self.im if self.im is not None else np.zeros_like(self.re)
        return CyclicVector.build(self.lo, self.re * a - im * b, self.re * b + im * a,
                                  self.denom * r, self.mode)

    def shift(self, k: int) -> "CyclicVector":
        """g^k * self."""
        if self.is_zero():
            return self
        return CyclicVector(self.lo + k, self.re, self.im, self.denom, self.mode)

    def divide_linear(self, omega: Any) -> Tuple["CyclicVector", Any]:
        """
        Divide by (g - omega).

        Writing self = g^lo * P(g), returns (Q, P(omega)) with
        (g - omega) * Q == self - g^lo * P(omega).

        Args:
            omega: A Gaussian unit in Exact mode, any complex number in Float mode.

        Returns:
            The quotient and the scalar remainder.
        """
        omega = as_scalar(omega, self.mode)
        if self.is_zero():
            return self, scalar_zero(self.mode)
        size = len(self.re)
        j = np.arange(size, dtype=np.int64)
        if self.mode == ScalarMode.EXACT:
            unit = gaussian_unit_index(omega)
            if unit is None:
                raise ConfigError(f"exact division by g - omega needs a Gaussian unit, got {omega}")
            _guard(max(_max_abs(self.re), _max_abs(self.im)) * 2 * size, "partial sums")
            w_re, w_im = _unit_phase(self.re, self.im, unit * j)
            total_re, total_im = int(w_re.sum()), int(w_im.sum())
            # S_j = sum_{i > j} w_i, then q_j = S_j * omega^-(j+1)
            s_re = total_re - np.cumsum(w_re)[:-1]
            s_im = total_im - np.cumsum(w_im)[:-1]
            q_re, q_im = _unit_phase(s_re, s_im, -unit * (j[:-1] + 1))
            remainder = ExactScalar(Fraction(total_re, self.denom), Fraction(total_im, self.denom))
            return CyclicVector.build(self.lo, q_re, q_im, self.denom, self.mode), remainder
        theta = float(np.angle(omega))
        radius = abs(omega)
        if radius == 0:
            return CyclicVector.build(self.lo, self.re[1:], self.im[1:] if self.im is not None else None,
                                      1, self.mode), self.coefficient(self.lo)
        scale_up = radius ** j
        w_re, w_im = _float_phase(self.re * scale_up, self.im * scale_up if self.im is not None else None,
                                  theta * j)
        total_re, total_im = float(w_re.sum()), float(w_im.sum())
        s_re = total_re - np.cumsum(w_re)[:-1]
        s_im = total_im - np.cumsum(w_im)[:-1]
        scale_down = radius ** -(j[:-1] + 1.0)
        q_re, q_im = _float_phase(s_re * scale_down, s_im * scale_down, -theta * (j[:-1] + 1))
        return CyclicVector.build(self.lo, q_re, q_im, 1, self.mode), complex(total_re, total_im)

    def to_group_vector(self, group: GroupSpec, g: GroupElement, right: Optional[GroupElement] = None,
                        cap: int = 1_000_000) -> GroupVector:
        """Materialize sum_j c_j g^j * right as a sparse vector."""
        if len(self.re) > cap:
            raise ResourceLimitError(f"materializing {len(self.re)} terms exceeds the cap of {cap}")
        right = group.identity() if right is None else right
        terms = []
        x = group.mul(group.power(g, self.lo), right)
        for k in range(self.lo, self.hi + 1):
            c = self.coefficient(k)
            if c != 0:
                terms.append((x, c))
            x = group.mul(g, x)
        return GroupVector.from_terms(group, terms, self.mode)


def averaging_factorization(n: int, omega: Any = 1) -> Tuple[CyclicVector, CyclicVector]:
    """(x_n, d) with (g - omega) d == 1 - x_n, checked by the division remainder."""
    x = CyclicVector.averaging(n, omega)
    one_minus = CyclicVector.one(x.mode) - x
    d, remainder = one_minus.divide_linear(omega)
    if x.mode == ScalarMode.EXACT:
        if remainder != 0:
            raise InvariantViolationError(f"1 - x_n does not vanish at omega={omega}")
    elif abs(remainder) > 1e-12 * max(n, 1):
        raise InvariantViolationError(f"1 - x_n leaves remainder {abs(remainder):.3e} at omega={omega}")
    return x, d


@dataclass(frozen=True, eq=False)
class CosetExpansion:
    """v = sum_r P_r(g) r over right-coset representatives r of <g>."""
    group: GroupSpec
    g: GroupElement
    parts: Tuple[Tuple[GroupElement, CyclicVector], ...]
    mode: ScalarMode = ScalarMode.EXACT

    @classmethod
    def from_vector(cls, v: GroupVector, g: GroupElement) -> "CosetExpansion":
        group = v.group
        group.check(g)
        reps: List[GroupElement] = []
        terms: List[Dict[int, Any]] = []
        for x, c in v.items():
            for idx, r in enumerate(reps):
                k = group.cyclic_log(g, group.mul(x, group.inv(r)))
                if k is not None:
                    terms[idx][k] = c
                    break
            else:
                reps.append(x)
                terms.append({0: c})
        parts = tuple((r, CyclicVector.from_terms(t, v.mode)) for r, t in zip(reps, terms))
        return cls(group, g, parts, v.mode)

    def is_zero(self) -> bool:
        return all(p.is_zero() for _, p in self.parts)

    def left_multiply(self, c: CyclicVector) -> "CosetExpansion":
        if c.mode != self.mode:
            raise ScalarModeError("cyclic factor and expansion use different scalar modes")
        return CosetExpansion(self.group, self.g, tuple((r, c * p) for r, p in self.parts), self.mode)

    def __add__(self, other: "CosetExpansion") -> "CosetExpansion":
        if self.group != other.group or self.g != other.g:
            raise GroupMismatchError("expansions along different cyclic subgroups")
        parts = list(self.parts)
        for r2, p2 in other.parts:
            for idx, (r, p) in enumerate(parts):
                k = self.group.cyclic_log(self.g, self.group.mul(r2, self.group.inv(r)))
                if k is not None:
                    parts[idx] = (r, p + p2.shift(k))
                    break
            else:
                parts.append((r2, p2))
        return CosetExpansion(self.group, self.g, tuple(parts), self.mode)

    def __neg__(self) -> "CosetExpansion":
        return CosetExpansion(self.group, self.g, tuple((r, -p) for r, p in self.parts), self.mode)

    def __sub__(self, other: "CosetExpansion") -> "CosetExpansion":
        return self + (-other)

    def to_float(self) -> "CosetExpansion":
        return CosetExpansion(self.group, self.g, tuple((r, p.to_float()) for r, p in self.parts),
                              ScalarMode.FLOAT)

    def moduli(self) -> np.ndarray:
        parts = [p.moduli() for _, p in self.parts]
        return np.concatenate(parts) if parts else np.zeros(0)

    def one_norm(self) -> float:
        return float(np.sum(self.moduli()))

    def p_norm(self, p: float) -> float:
        # distinct cosets have disjoint supports
        if p == 1:
            return self.one_norm()
        return lp_of_moduli(self.moduli(), p)

    def to_group_vector(self, cap: int = 1_000_000) -> GroupVector:
        total = GroupVector.zero(self.group, self.mode)
        for r, p in self.parts:
            total = total + p.to_group_vector(self.group, self.g, r, cap)
        return total
