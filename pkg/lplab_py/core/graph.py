"""
@ai-metadata {
    "domain": "group-model",
    "description": "Cayley-graph balls built by layered breadth-first search, with neighbour tables, edge arrays and networkx export",
    "dependencies": ["groups.py", "errors.py"],
    "invariants": [
        "Vertex order is deterministic: by sphere, then parent index, then generator order",
        "Interior vertices (length < R) have every neighbour inside the ball"
    ]
}
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, List, Optional, Tuple

import networkx as nx
import numpy as np

from lplab_py.core.errors import FrontierVertexError, GroupMismatchError, ResourceLimitError
from lplab_py.core.groups import GeneratingSet, GroupElement, GroupSpec, default_vertex_cap

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Neighbor:
    """The neighbour v*s of a ball vertex along generator s."""
    generator: GroupElement
    element: GroupElement
    index: Optional[int]

    @property
    def inside(self) -> bool:
        return self.index is not None


@dataclass(frozen=True, eq=False)
class CayleyBall:
    """Closed ball B_R of the Cayley graph Cay(G, S)."""
    group: GroupSpec
    gens: GeneratingSet
    radius: int
    vertices: Tuple[GroupElement, ...]
    lengths: Tuple[int, ...]
    _index: Dict[GroupElement, int] = field(default_factory=dict, repr=False)

    def __len__(self) -> int:
        return len(self.vertices)

    def __contains__(self, x: GroupElement) -> bool:
        return x in self._index

    def index_of(self, x: GroupElement) -> int:
        try:
            return self._index[x]
        except KeyError:
            raise GroupMismatchError(
                f"{self.group.format_element(x)} is not in the ball of radius {self.radius}")

    def get_index(self, x: GroupElement) -> Optional[int]:
        return self._index.get(x)

    def length_of(self, x: GroupElement) -> int:
        return self.lengths[self.index_of(x)]

    def is_interior(self, x: GroupElement) -> bool:
        return self.lengths[self.index_of(x)] < self.radius

    def sphere(self, r: int) -> List[GroupElement]:
        return [v for v, length in zip(self.vertices, self.lengths) if length == r]

    @cached_property
    def length_array(self) -> np.ndarray:
        return np.asarray(self.lengths, dtype=np.int64)

    @cached_property
    def interior_indices(self) -> np.ndarray:
        return np.flatnonzero(self.length_array < self.radius)

    @cached_property
    def frontier_indices(self) -> np.ndarray:
        return np.flatnonzero(self.length_array == self.radius)

    @cached_property
    def neighbor_table(self) -> np.ndarray:
        """Array of shape (|B|, |S|): index of v*s, or -1 when it lies outside."""
        table = np.full((len(self.vertices), len(self.gens)), -1, dtype=np.int64)
        for i, v in enumerate(self.vertices):
            for j, s in enumerate(self.gens):
                table[i, j] = self._index.get(self.group.mul(v, s), -1)
        table.setflags(write=False)
        return table

    @cached_property
    def edge_arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        """Ordered in-ball pairs (v, v*s) as parallel source/target index arrays."""
        table = self.neighbor_table
        src = np.repeat(np.arange(len(self.vertices)), len(self.gens))
        dst = table.reshape(-1)
        keep = dst >= 0
        return src[keep], dst[keep]

    def neighbors(self, x: GroupElement) -> List[Neighbor]:
        i = self.index_of(x)
        row = self.neighbor_table[i]
        result = []
        for j, s in enumerate(self.gens):
            idx = int(row[j])
            result.append(Neighbor(s, self.group.mul(x, s), idx if idx >= 0 else None))
        return result

    def require_interior(self, x: GroupElement) -> int:
        i = self.index_of(x)
        if self.lengths[i] >= self.radius:
            raise FrontierVertexError(
                f"{self.group.format_element(x)} lies on the frontier of the ball of radius {self.radius}")
        return i

    def to_dict(self) -> Dict[str, Any]:
        return {
            "group": self.group.name,
            "radius": self.radius,
            "generators": [self.group.format_element(s) for s in self.gens],
            "vertices": [
                {"element": self.group.format_element(v), "length": length}
                for v, length in zip(self.vertices, self.lengths)
            ],
        }

    def to_networkx(self) -> nx.Graph:
        """
        Convert the ball to an undirected NetworkX graph.

        Returns:
            A Graph whose nodes are vertex indices carrying element and length attributes.
        """
        G = nx.Graph()
        for i, (v, length) in enumerate(zip(self.vertices, self.lengths)):
            G.add_node(i, element=self.group.format_element(v), length=length,
                       frontier=length == self.radius)
        src, dst = self.edge_arrays
        G.add_edges_from(zip(src.tolist(), dst.tolist()))
        return G


class BallBuilder:
    """Builder for Cayley balls with a vertex cap."""

    def __init__(self, group: GroupSpec, gens: Optional[GeneratingSet] = None,
                 max_vertices: Optional[int] = None):
        """
        Initialize the builder.

        Args:
            group: The group whose Cayley graph is explored.
            gens: Symmetric generating set; the standard one when omitted.
            max_vertices: Vertex cap; LPLAB_MAX_VERTICES or the default when omitted.
        """
        if gens is not None and gens.group != group:
            raise GroupMismatchError(f"generating set belongs to {gens.group.name}, not {group.name}")
        self.group = group
        self.gens = gens or group.standard_generators()
        self.max_vertices = max_vertices or default_vertex_cap()

    def build(self, radius: int) -> CayleyBall:
        if radius < 0:
            raise GroupMismatchError(f"radius must be non-negative, got {radius}")
        identity = self.group.identity()
        vertices: List[GroupElement] = [identity]
        lengths: List[int] = [0]
        index: Dict[GroupElement, int] = {identity: 0}
        sphere = [identity]
        for r in range(1, radius + 1):
            next_sphere = []
            for v in sphere:
                for s in self.gens:
                    w = self.group.mul(v, s)
                    if w in index:
                        continue
                    index[w] = len(vertices)
                    vertices.append(w)
                    lengths.append(r)
                    next_sphere.append(w)
                    if len(vertices) > self.max_vertices:
                        raise ResourceLimitError(
                            f"ball of radius {radius} in {self.group.name} exceeds {self.max_vertices} vertices")
            if not next_sphere:
                break
            sphere = next_sphere
        logger.debug("built ball R=%d in %s with %d vertices", radius, self.group.name, len(vertices))
        return CayleyBall(self.group, self.gens, radius, tuple(vertices), tuple(lengths), index)


def ball(group: GroupSpec, gens: Optional[GeneratingSet] = None, radius: int = 0,
         max_vertices: Optional[int] = None) -> CayleyBall:
    """Build B_R(G, S)."""
    return BallBuilder(group, gens, max_vertices).build(radius)
