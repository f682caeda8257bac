import pytest

from vfsplit.finite_groups import GroupError, make_cyclic
from vfsplit.graph_of_groups import (INFINITE, ends, fundamental_presentation, is_essential,
                                     is_essential_edge, make_graph, reduce, validate)
from vfsplit.words import make_base

from instances import ends_instances
from oracles import bfs_ends

INSTANCES = ends_instances()


@pytest.mark.parametrize("label,g", INSTANCES, ids=[x for x, _ in INSTANCES])
def test_ends_agree_with_ball_oracle(label, g):
    assert ends(g) == bfs_ends(make_base(g), radius=8, deletion=2)


def test_instance_orders_are_small():
    assert len(INSTANCES) >= 20
    for _, g in INSTANCES:
        assert sum(grp.order for _, grp in g.vertices) <= 8


def test_trivial_edge_between_nontrivial_groups_is_essential():
    g = make_graph([("P", make_cyclic(2)), ("Q", make_cyclic(3))],
                   [("e", "P", "Q", make_cyclic(1), (0,), (0,))])
    assert is_essential_edge(g, "e") and is_essential(g)
    assert ends(g) == INFINITE


def test_surjective_edge_is_inessential():
    g = make_graph([("P", make_cyclic(2)), ("Q", make_cyclic(4))],
                   [("e", "P", "Q", make_cyclic(2), (0, 1), (0, 2))])
    assert not is_essential_edge(g, "e")
    assert ends(g) == 0
    assert len(reduce(g).vertices) == 1


def test_bad_attaching_map_is_rejected():
    with pytest.raises(GroupError):
        make_graph([("P", make_cyclic(4)), ("Q", make_cyclic(4))],
                   [("e", "P", "Q", make_cyclic(2), (0, 1), (0, 3))])


def test_valid_graph_validates():
    assert validate(INSTANCES[-1][1]).ok


def test_presentation_has_stable_letters_for_loops():
    g = make_graph([("P", make_cyclic(2))],
                   [("t", "P", "P", make_cyclic(1), (0,), (0,))])
    assert ends(g) == INFINITE
    assert fundamental_presentation(g).generators
