import random

import pytest
from hypothesis import given, settings, strategies as st

from vfsplit.errors import HypothesisViolation, InputError
from vfsplit.tree import MarkedSplitting, amalgam, collapse, hnn, wedge
from vfsplit.words import SubgroupSpec, free_group

from conftest import load

F2 = free_group("ab")


def spec(*ws):
    return SubgroupSpec(F2, [F2.parse(w) for w in ws])


def test_non_generating_splitting_rejected():
    with pytest.raises(HypothesisViolation):
        amalgam(F2, spec("a^2"), spec(), spec("b"))


def test_edge_group_outside_vertex_rejected():
    with pytest.raises(HypothesisViolation):
        amalgam(F2, spec("a"), spec("b"), spec("b"))


@pytest.mark.parametrize("name", ["modular", "z4_z6", "dihedral", "triple"])
def test_ball_degrees_match_indices(name):
    t = load(name).splittings["T"]
    ball = t.expand_ball(radius=3)
    assert ball.is_tree()
    for v in ball.vertices:
        if ball.dist[v] < 3:
            assert ball.degree(v) == t.degree(v.orbit)


@pytest.mark.parametrize("name", ["modular", "z4_z6"])
def test_ball_restriction_stable(name):
    t = load(name).splittings["T"]
    small, big = t.expand_ball(radius=2), t.expand_ball(radius=3).restrict(2)
    assert small.dist == big.dist
    assert set(small.edges) == set(big.edges)


def test_infinite_local_index_is_an_error(f2):
    with pytest.raises(InputError, match="infinite local index"):
        f2.splittings["T1"].expand_ball(radius=1)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_path_of_reaches_the_translate(seed):
    t = load("f2").splittings["T2"]
    rng = random.Random(seed)
    g = F2.random_element(rng, 6)
    v = t.vertex()
    p = t.path_of(g)
    assert t.path_value(p) == F2.normal_form(g)
    assert t.distance(v, t.act(g, v)) == (len(p) - 1) // 2


def test_ellipticity(f2):
    t = f2.splittings["T1"]
    assert t.is_elliptic(spec("b.a^3.b^-1")).elliptic
    e = t.is_elliptic(spec("a", "b"))
    assert not e.elliptic and e.witness is not None
    assert t.translation_length(e.witness) > 0


def test_translation_length_conjugation_invariant(f2):
    t = f2.splittings["H"]
    g = F2.parse("a.b")
    assert t.translation_length(g) == t.translation_length(F2.conj(F2.parse("b^2.a"), g)) == 1


def test_minimal_subtree_of_hyperbolic(f2):
    t = f2.splittings["T1"]
    m = t.minimal_subtree(spec("a.b"))
    assert not m.elliptic and m.spur_free


def test_collapse_vertex_map(f3):
    t = f3.splittings["Thnn"]
    w = wedge(f3.base)
    assert w.n_edge_orbits() == 3
    c, vmap = collapse(t, ["e"])
    assert c.n_edge_orbits() == 0 and c.n_vertex_orbits() == 1
    label, g = vmap["A"]
    assert c.vgroup[label].contains_subgroup(t.vgroup["A"].conjugate(g))


def test_hnn_requires_conjugate_inside():
    with pytest.raises(HypothesisViolation):
        hnn(F2, spec("a"), spec("a"), F2.parse("b"))  # b^-1 a b is not in <a>
    t = hnn(F2, spec("a"), spec(), F2.parse("b"))
    assert t.is_minimal()


def test_marking_certificate_evaluates(f3):
    for t in f3.splittings.values():
        assert t.check()
        for x, p in zip(t.targets(), t.marking):
            assert t.path_value(p) == x


def test_hair_detected():
    t = MarkedSplitting(F2, [("A", spec("a", "b")), ("B", spec("a"))],
                        [("e", "A", "B", spec("a"), F2.identity)], "hairy")
    assert t.hairs() == ["B"]
