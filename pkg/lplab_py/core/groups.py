"""
@ai-metadata {
    "domain": "group-model",
    "description": "Normal-form groups (Z^d, F_k, C_m and direct products), their elements, standard symmetric generating sets and word lengths",
    "dependencies": ["errors.py"],
    "invariants": [
        "Equal elements have identical canonical representations",
        "inv(mul(x, y)) == mul(inv(y), inv(x))",
        "Built-in generating sets are symmetric and never contain the identity"
    ]
}
"""

import math
import os
import logging
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from functools import reduce
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from lplab_py.core.errors import ConfigError, GroupMismatchError, ResourceLimitError

logger = logging.getLogger(__name__)

# Canonical element forms:
#   FREE_ABELIAN -> tuple of d ints
#   FREE         -> tuple of nonzero ints (i+1 for a_i, -(i+1) for a_i^-1), freely reduced
#   CYCLIC       -> int residue in [0, m)
#   PRODUCT      -> tuple of factor elements
GroupElement = Any

# 'e' is reserved for the identity in element strings
FREE_LETTERS = "abcdfghijklmnopqrstuvwxyz"

DEFAULT_MAX_VERTICES = 200_000


def default_vertex_cap() -> int:
    """Vertex cap for balls and BFS searches (LPLAB_MAX_VERTICES overrides)."""
    value = os.environ.get("LPLAB_MAX_VERTICES")
    if value:
        try:
            return int(value)
        except ValueError:
            raise ConfigError(f"LPLAB_MAX_VERTICES must be an integer, got {value!r}")
    return DEFAULT_MAX_VERTICES


class GroupKind(str, Enum):
    """Supported group families."""
    FREE_ABELIAN = "free_abelian"
    FREE = "free"
    CYCLIC = "cyclic"
    PRODUCT = "product"


@dataclass(frozen=True)
class GroupSpec:
    """A finitely generated group with a decidable normal form."""
    kind: GroupKind
    rank: int = 1
    factors: Tuple["GroupSpec", ...] = ()

    def __post_init__(self):
        if self.kind == GroupKind.PRODUCT:
            if len(self.factors) < 2:
                raise ConfigError("a direct product needs at least two factors")
        else:
            if self.factors:
                raise ConfigError(f"{self.kind.value} groups take no factors")
            if not isinstance(self.rank, int) or self.rank < 1:
                raise ConfigError(f"rank/order must be a positive integer, got {self.rank!r}")

    # -- construction -------------------------------------------------------

    @classmethod
    def free_abelian(cls, d: int = 1) -> "GroupSpec":
        return cls(GroupKind.FREE_ABELIAN, d)

    @classmethod
    def free(cls, k: int) -> "GroupSpec":
        """
        Free group on k letters a, b, c, ...

        Args:
            k: Rank; letter i is the integer i+1 and its inverse -(i+1).

        Returns:
            The group F_k.
        """
        if k > len(FREE_LETTERS):
            raise ConfigError(f"free groups of rank > {len(FREE_LETTERS)} are not supported")
        return cls(GroupKind.FREE, k)

    @classmethod
    def cyclic(cls, m: int) -> "GroupSpec":
        return cls(GroupKind.CYCLIC, m)

    @classmethod
    def product(cls, *factors: "GroupSpec") -> "GroupSpec":
        """Direct product; elements are tuples with one coordinate per factor."""
        return cls(GroupKind.PRODUCT, 1, tuple(factors))

    # -- descriptive --------------------------------------------------------

    @property
    def name(self) -> str:
        if self.kind == GroupKind.FREE_ABELIAN:
            return "Z" if self.rank == 1 else f"Z^{self.rank}"
        if self.kind == GroupKind.FREE:
            return f"F{self.rank}"
        if self.kind == GroupKind.CYCLIC:
            return f"C{self.rank}"
        return " x ".join(f.name for f in self.factors)

    def __str__(self) -> str:
        return self.name

    def is_infinite(self) -> bool:
        if self.kind == GroupKind.PRODUCT:
            return any(f.is_infinite() for f in self.factors)
        return self.kind in (GroupKind.FREE_ABELIAN, GroupKind.FREE)

    def order(self) -> Optional[int]:
        """Group order, or None for infinite groups."""
        if self.is_infinite():
            return None
        if self.kind == GroupKind.CYCLIC:
            return self.rank
        return math.prod(f.order() for f in self.factors)

    # -- membership ---------------------------------------------------------

    def contains(self, x: GroupElement) -> bool:
        """Whether x is a canonical (normal-form) element of this group."""
        if self.kind == GroupKind.FREE_ABELIAN:
            return (isinstance(x, tuple) and len(x) == self.rank
                    and all(isinstance(c, int) and not isinstance(c, bool) for c in x))
        if self.kind == GroupKind.FREE:
            if not isinstance(x, tuple):
                return False
            for i, letter in enumerate(x):
                if not isinstance(letter, int) or letter == 0 or abs(letter) > self.rank:
                    return False
                if i and x[i - 1] == -letter:
                    return False
            return True
        if self.kind == GroupKind.CYCLIC:
            return isinstance(x, int) and not isinstance(x, bool) and 0 <= x < self.rank
        return (isinstance(x, tuple) and len(x) == len(self.factors)
                and all(f.contains(c) for f, c in zip(self.factors, x)))

    def check(self, *elements: GroupElement) -> None:
        """
        Raise GroupMismatchError unless every element is canonical in this group.

        Args:
            *elements: Elements to validate.
        """
        for x in elements:
            if not self.contains(x):
                raise GroupMismatchError(f"{x!r} is not a canonical element of {self.name}")

    # -- arithmetic ---------------------------------------------------------

    def identity(self) -> GroupElement:
        """
        The neutral element in normal form.

        Returns:
            The zero vector, the empty word, residue 0, or the tuple of factor identities.
        """
        if self.kind == GroupKind.FREE_ABELIAN:
            return (0,) * self.rank
        if self.kind == GroupKind.FREE:
            return ()
        if self.kind == GroupKind.CYCLIC:
            return 0
        return tuple(f.identity() for f in self.factors)

    def mul(self, x: GroupElement, y: GroupElement) -> GroupElement:
        """
        Group product x*y.

        Args:
            x: Left factor, in normal form.
            y: Right factor, in normal form.

        Returns:
            The product in normal form (freely reduced on F_k).
        """
        if self.kind == GroupKind.FREE_ABELIAN:
            return tuple(a + b for a, b in zip(x, y))
        if self.kind == GroupKind.FREE:
            # x and y are reduced, so cancelling the maximal junction keeps the result reduced
            i, n, lx = 0, min(len(x), len(y)), len(x)
            while i < n and x[lx - 1 - i] == -y[i]:
                i += 1
            return x[:lx - i] + y[i:]
        if self.kind == GroupKind.CYCLIC:
            return (x + y) % self.rank
        return tuple(f.mul(a, b) for f, a, b in zip(self.factors, x, y))

    def inv(self, x: GroupElement) -> GroupElement:
        """
        Inverse of x.

        Args:
            x: Element in normal form.

        Returns:
            x^-1 in normal form.
        """
        if self.kind == GroupKind.FREE_ABELIAN:
            return tuple(-a for a in x)
        if self.kind == GroupKind.FREE:
            return tuple(-a for a in reversed(x))
        if self.kind == GroupKind.CYCLIC:
            return (-x) % self.rank
        return tuple(f.inv(a) for f, a in zip(self.factors, x))

    def power(self, x: GroupElement, k: int) -> GroupElement:
        """
        x^k for any integer k, by repeated squaring on free groups.

        Args:
            x: Element in normal form.
            k: Exponent; negative values power the inverse.

        Returns:
            x^k in normal form.
        """
        if self.kind == GroupKind.FREE_ABELIAN:
            return tuple(k * a for a in x)
        if self.kind == GroupKind.CYCLIC:
            return (k * x) % self.rank
        if self.kind == GroupKind.PRODUCT:
            return tuple(f.power(a, k) for f, a in zip(self.factors, x))
        if k < 0:
            x, k = self.inv(x), -k
        result, base = self.identity(), x
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def element_order(self, x: GroupElement) -> Optional[int]:
        """Order of x, or None when x has infinite order."""
        if self.kind in (GroupKind.FREE_ABELIAN, GroupKind.FREE):
            return 1 if x == self.identity() else None
        if self.kind == GroupKind.CYCLIC:
            return self.rank // math.gcd(x, self.rank)
        orders = [f.element_order(a) for f, a in zip(self.factors, x)]
        if any(o is None for o in orders):
            return None
        return reduce(lambda a, b: a * b // math.gcd(a, b), orders, 1)

    def has_infinite_order(self, x: GroupElement) -> bool:
        return self.element_order(x) is None

    def cyclic_log(self, g: GroupElement, z: GroupElement) -> Optional[int]:
        """
        Discrete logarithm of z to base g.

        For elements of finite order the smallest non-negative k is returned.

        Args:
            g: Base element.
            z: Element to locate in the cyclic subgroup <g>.

        Returns:
            The exponent k with g^k == z, or None when z is not in <g>.
        """
        if z == self.identity():
            return 0
        order = self.element_order(g)
        if order is not None:
            for k in range(order):
                if self.power(g, k) == z:
                    return k
            return None

        if self.kind == GroupKind.FREE_ABELIAN:
            i = next(j for j, c in enumerate(g) if c)
            k, rest = divmod(z[i], g[i])
            if rest == 0 and all(k * a == b for a, b in zip(g, z)):
                return k
            return None

        if self.kind == GroupKind.FREE:
            # g = w c w^-1 with c cyclically reduced, so |g^k| = 2|w| + |k||c|
            length, w = len(g), 0
            while length - 2 * (w + 1) >= 1 and g[w] == -g[length - 1 - w]:
                w += 1
            core = length - 2 * w
            k_abs, rest = divmod(len(z) - 2 * w, core)
            if rest or k_abs <= 0:
                return None
            for k in (k_abs, -k_abs):
                if self.power(g, k) == z:
                    return k
            return None

        # product: read k off an infinite-order coordinate, then confirm everywhere
        for f, a, b in zip(self.factors, g, z):
            if f.has_infinite_order(a):
                k = f.cyclic_log(a, b)
                if k is not None and self.power(g, k) == z:
                    return k
                return None
        return None

    # -- generators and lengths --------------------------------------------

    def standard_generators(self) -> "GeneratingSet":
        """
        The standard symmetric generating set.

        Returns:
            ±e_i on Z^d, a, a^-1, b, b^-1, ... on F_k, {1, m-1} on C_m, and the embedded factor sets on products.
        """
        return GeneratingSet(self, tuple(self._standard_elements()), standard=True)

    def _standard_elements(self) -> List[GroupElement]:
        if self.kind == GroupKind.FREE_ABELIAN:
            gens = []
            for i in range(self.rank):
                unit = tuple(1 if j == i else 0 for j in range(self.rank))
                gens.extend([unit, tuple(-c for c in unit)])
            return gens
        if self.kind == GroupKind.FREE:
            gens = []
            for i in range(1, self.rank + 1):
                gens.extend([(i,), (-i,)])
            return gens
        if self.kind == GroupKind.CYCLIC:
            if self.rank == 1:
                return []
            if self.rank == 2:
                return [1]
            return [1, self.rank - 1]
        gens = []
        identity = self.identity()
        for idx, factor in enumerate(self.factors):
            for s in factor._standard_elements():
                gens.append(identity[:idx] + (s,) + identity[idx + 1:])
        return gens

    def word_length(self, x: GroupElement, gens: Optional["GeneratingSet"] = None) -> int:
        """
        Cayley-graph distance from the identity to x.

        Standard sets read the length off the normal form; other sets use a
        breadth-first search once membership in the generated subgroup is settled.
        A target provably outside that subgroup is a ConfigError; a search that
        passes the vertex cap is a ResourceLimitError.

        Args:
            x: Target element.
            gens: Generating set; None means the standard one.

        Returns:
            The word length |x|_S.
        """
        self.check(x)
        if gens is None or gens.standard:
            return self._normal_form_length(x)
        if subgroup_contains(self, gens, x) is False:
            raise ConfigError(f"{self.format_element(x)} is not generated by the given set")
        return _bfs_length(self, gens, x)

    def _normal_form_length(self, x: GroupElement) -> int:
        if self.kind == GroupKind.FREE_ABELIAN:
            return sum(abs(c) for c in x)
        if self.kind == GroupKind.FREE:
            return len(x)
        if self.kind == GroupKind.CYCLIC:
            return min(x, self.rank - x)
        # embedded factor generators: distances add up
        return sum(f._normal_form_length(a) for f, a in zip(self.factors, x))

    # -- presentation -------------------------------------------------------

    def format_element(self, x: GroupElement) -> str:
        """
        Render x the way the CLI and result files print it.

        Args:
            x: Element in normal form.

        Returns:
            "1,-2" on Z^d, "a b^-1" (or "e") on F_k, the residue on C_m, "; "-joined factors on products.
        """
        if self.kind == GroupKind.FREE_ABELIAN:
            return ",".join(str(c) for c in x)
        if self.kind == GroupKind.FREE:
            if not x:
                return "e"
            return " ".join(FREE_LETTERS[abs(c) - 1] + ("^-1" if c < 0 else "") for c in x)
        if self.kind == GroupKind.CYCLIC:
            return str(x)
        return "; ".join(f.format_element(a) for f, a in zip(self.factors, x))

    def sort_key(self, x: GroupElement) -> Tuple:
        """Total order used for canonical listings (length-then-lexicographic for words)."""
        if self.kind == GroupKind.FREE:
            return (len(x), x)
        if self.kind == GroupKind.CYCLIC:
            return (x,)
        if self.kind == GroupKind.PRODUCT:
            return tuple(f.sort_key(a) for f, a in zip(self.factors, x))
        return x

    def random_element(self, rng: np.random.Generator, max_length: int = 4) -> GroupElement:
        """
        Draw a reproducible pseudo-random element.

        Args:
            rng: Seeded numpy generator.
            max_length: Coordinate bound on Z^d, letter count bound on F_k.

        Returns:
            An element in normal form.
        """
        if self.kind == GroupKind.FREE_ABELIAN:
            return tuple(int(c) for c in rng.integers(-max_length, max_length + 1, size=self.rank))
        if self.kind == GroupKind.FREE:
            gens = self._standard_elements()
            word = ()
            for _ in range(int(rng.integers(0, max_length + 1))):
                word = self.mul(word, gens[int(rng.integers(len(gens)))])
            return word
        if self.kind == GroupKind.CYCLIC:
            return int(rng.integers(self.rank))
        return tuple(f.random_element(rng, max_length) for f in self.factors)


@dataclass(frozen=True)
class GeneratingSet:
    """Ordered finite symmetric generating set S = S^-1."""
    group: GroupSpec
    elements: Tuple[GroupElement, ...]
    standard: bool = False
    _members: frozenset = field(default=frozenset(), init=False, repr=False, compare=False)

    def __post_init__(self):
        self.group.check(*self.elements)
        members = frozenset(self.elements)
        if len(members) != len(self.elements):
            raise ConfigError("generating set contains duplicates")
        if self.group.identity() in members:
            raise ConfigError("generating set must not contain the identity")
        for s in self.elements:
            if self.group.inv(s) not in members:
                raise ConfigError(
                    f"generating set is not symmetric: missing inverse of {self.group.format_element(s)}")
        object.__setattr__(self, "_members", members)

    @classmethod
    def from_elements(cls, group: GroupSpec, elements: Sequence[GroupElement]) -> "GeneratingSet":
        """
        Build a user-supplied generating set.

        Args:
            group: The group the elements belong to.
            elements: Symmetric list of non-identity elements, without repeats.

        Returns:
            A non-standard GeneratingSet; word lengths against it use the search.
        """
        return cls(group, tuple(elements), standard=False)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[GroupElement]:
        return iter(self.elements)

    def __contains__(self, x: GroupElement) -> bool:
        return x in self._members


def _lattice_contains(rows: List[List[int]], target: List[int]) -> bool:
    """Integer echelon reduction: is target an integer combination of rows?"""
    rows = [list(r) for r in rows if any(r)]
    basis: List[Tuple[int, List[int]]] = []
    for col in range(len(target)):
        pivot = None
        while True:
            nonzero = [r for r in rows if r[col] != 0]
            if not nonzero:
                break
            pivot = min(nonzero, key=lambda r: abs(r[col]))
            others = [r for r in nonzero if r is not pivot]
            if not others:
                break
            for r in others:
                q = r[col] // pivot[col]
                for j in range(len(r)):
                    r[j] -= q * pivot[j]
        if pivot is not None:
            rows = [r for r in rows if r is not pivot]
            basis.append((col, pivot))
    rest = list(target)
    for col, row in basis:
        if rest[col] % row[col]:
            return False
        q = rest[col] // row[col]
        rest = [a - q * b for a, b in zip(rest, row)]
    return not any(rest)


def subgroup_contains(group: GroupSpec, gens: GeneratingSet, target: GroupElement) -> Optional[bool]:
    """
    Decide whether target lies in the subgroup generated by gens.

    Args:
        group: Ambient group.
        gens: Generating set to test.
        target: Element of group.

    Returns:
        True or False for Z^d and C_m, None where membership is left to the search.
    """
    if group.kind == GroupKind.FREE_ABELIAN:
        return _lattice_contains([list(s) for s in gens], list(target))
    if group.kind == GroupKind.CYCLIC:
        return target % reduce(math.gcd, list(gens), group.rank) == 0
    return None


def _bfs_length(group: GroupSpec, gens: GeneratingSet, target: GroupElement) -> int:
    """Word length by breadth-first search, for user-supplied generating sets."""
    start = group.identity()
    if target == start:
        return 0
    cap = default_vertex_cap()
    seen: Dict[GroupElement, int] = {start: 0}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        dist = seen[v]
        for s in gens:
            w = group.mul(v, s)
            if w in seen:
                continue
            if w == target:
                return dist + 1
            seen[w] = dist + 1
            queue.append(w)
            if len(seen) > cap:
                raise ResourceLimitError(
                    f"word-length search exceeded {cap} vertices for {group.format_element(target)}")
    raise ConfigError(f"{group.format_element(target)} is not generated by the given set")
