import networkx as nx
import pytest

from lplab_py.core.errors import GroupMismatchError, ResourceLimitError
from lplab_py.core.experiments import sphere_counts
from lplab_py.core.graph import ball
from lplab_py.core.groups import GeneratingSet, GroupSpec


@pytest.mark.parametrize("radius", range(0, 7))
def test_ball_sizes_match_closed_forms(radius):
    assert len(ball(GroupSpec.free_abelian(1), radius=radius)) == 2 * radius + 1
    assert len(ball(GroupSpec.free_abelian(2), radius=radius)) == 2 * radius ** 2 + 2 * radius + 1
    assert len(ball(GroupSpec.free(2), radius=radius)) == 2 * 3 ** radius - 1


@pytest.mark.parametrize("radius", [3, 4, 10])
def test_finite_group_ball_saturates(radius):
    assert len(ball(GroupSpec.cyclic(6), radius=radius)) == 6


def test_sphere_counts_agree_with_ball():
    groups = [GroupSpec.free_abelian(3), GroupSpec.free(3), GroupSpec.cyclic(7),
              GroupSpec.product(GroupSpec.free_abelian(1), GroupSpec.cyclic(4))]
    for group in groups:
        b = ball(group, radius=4)
        assert [len(b.sphere(r)) for r in range(5)] == sphere_counts(group, 4)


def test_custom_generating_set():
    Z = GroupSpec.free_abelian(1)
    gens = GeneratingSet.from_elements(Z, [(1,), (-1,), (2,), (-2,)])
    b = ball(Z, gens, radius=1)
    assert len(b) == 5
    b3 = ball(Z, gens, radius=3)
    assert b3.length_of((5,)) == 3
    assert (7,) not in b3


def test_interior_and_frontier():
    b = ball(GroupSpec.free_abelian(2), radius=3)
    frontier = {b.vertices[i] for i in b.frontier_indices}
    assert frontier == set(b.sphere(3))
    assert len(b.interior_indices) + len(b.frontier_indices) == len(b)
    assert b.is_interior((1, 1))
    assert not b.is_interior((0, 3))


def test_neighbor_table_marks_outside():
    b = ball(GroupSpec.free_abelian(1), radius=2)
    table = b.neighbor_table
    row = table[b.index_of((2,))]
    assert row[0] == -1
    assert row[1] == b.index_of((1,))
    inner = table[b.index_of((0,))]
    assert (inner >= 0).all()


def test_vertices_are_sorted_by_length():
    b = ball(GroupSpec.free(2), radius=4)
    lengths = [b.length_of(v) for v in b.vertices]
    assert lengths == sorted(lengths)
    assert b.vertices[0] == ()


def test_free_group_ball_is_a_tree():
    graph = ball(GroupSpec.free(2), radius=4).to_networkx()
    assert nx.is_tree(graph)
    assert graph.number_of_edges() == graph.number_of_nodes() - 1


def test_edge_arrays_are_ordered_pairs():
    b = ball(GroupSpec.free_abelian(1), radius=3)
    src, dst = b.edge_arrays
    # 6 undirected edges on the path, each in both directions
    assert len(src) == len(dst) == 12


def test_ball_is_deterministic():
    first = ball(GroupSpec.free(2), radius=3)
    second = ball(GroupSpec.free(2), radius=3)
    assert first.vertices == second.vertices
    assert first.to_dict() == second.to_dict()


def test_vertex_cap(monkeypatch):
    with pytest.raises(ResourceLimitError):
        ball(GroupSpec.free(2), radius=6, max_vertices=100)
    monkeypatch.setenv("LPLAB_MAX_VERTICES", "50")
    with pytest.raises(ResourceLimitError):
        ball(GroupSpec.free_abelian(2), radius=10)


def test_negative_radius():
    with pytest.raises(GroupMismatchError):
        ball(GroupSpec.free_abelian(1), radius=-1)


def test_require_interior():
    from lplab_py.core.errors import FrontierVertexError
    b = ball(GroupSpec.free_abelian(1), radius=2)
    assert b.require_interior((1,)) == b.index_of((1,))
    with pytest.raises(FrontierVertexError):
        b.require_interior((2,))
