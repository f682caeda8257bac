import pytest

from vfsplit.core import build_core
from vfsplit.export import complex_to_dot, complex_to_json, leaf_space_to_dot
from vfsplit.fibers import check_core, leaf_space
from vfsplit.tree import wedge

from conftest import load
from oracles import heavy_square_keys

DIAGONAL = [(s, t) for s in ("z", "f2", "f3", "modular", "triple", "z4_z6", "dihedral")
            for t in sorted(load(s).splittings)]
PAIRS = [("f2", "T1", "T2"), ("triple", "T", "YXZ"), ("f3", "Tinf", "Tf"), ("f3", "Tf", "Tf2"),
         ("f2", "T1", "H")]


@pytest.fixture(scope="module")
def f2_core(f2):
    return build_core(f2.splittings["T1"], f2.splittings["T2"], max_radius=6)


@pytest.mark.parametrize("session,name", DIAGONAL)
def test_diagonal_core_is_the_quotient_graph(session, name):
    t = load(session).splittings[name]
    z = build_core(t, t)
    c = z.counts()
    assert c["sq"] == 0 and c["e1"] == 0 and c["e2"] == 0
    assert c["v"] == t.n_vertex_orbits()
    assert c["dg"] == t.n_edge_orbits()


@pytest.mark.parametrize("session,a,b", PAIRS)
def test_check_core_on_pairs(session, a, b):
    s = load(session)
    z = build_core(s.splittings[a], s.splittings[b], max_radius=6)
    rep = check_core(z)
    assert rep.ok, rep.summary()


def test_f2_pair_has_squares(f2_core):
    assert f2_core.counts()["sq"] >= 1


def test_squares_agree_with_heavy_quadrant_oracle(f2_core):
    assert heavy_square_keys(f2_core.space, 2, 1, 4) == set(f2_core.keys("sq"))


def test_wedge_against_free_product(f2):
    z = build_core(wedge(f2.base), f2.splittings["T1"], max_radius=6)
    assert check_core(z).ok


def test_leaf_spaces_are_forests(f2_core):
    for i in (1, 2):
        ls = leaf_space(f2_core, i)
        assert ls.is_forest(f2_core) is True
        assert ls.is_injective(f2_core)
        assert len(ls.edges) < len(ls.nodes) + len(ls.edges)


def test_dot_and_json_deterministic(f2):
    a = build_core(f2.splittings["T1"], f2.splittings["T2"], max_radius=6)
    b = build_core(f2.splittings["T1"], f2.splittings["T2"], max_radius=6)
    assert complex_to_dot(a) == complex_to_dot(b)
    assert complex_to_json(a) == complex_to_json(b)
    assert leaf_space_to_dot(leaf_space(a, 1)) == leaf_space_to_dot(leaf_space(b, 1))


def test_diagonal_dot_matches_quotient(f3):
    t = f3.splittings["Tinf"]
    dot = complex_to_dot(build_core(t, t))
    assert dot.count("shape=circle") == t.n_vertex_orbits()
    assert dot.count(" -- ") == t.n_edge_orbits()


def test_infinite_vertex_group_over_finite_base_is_unknown():
    # outside the exact regime: double cosets of infinite subgroups need a free base
    from vfsplit.errors import BudgetExceeded
    from vfsplit.tree import amalgam
    from vfsplit.words import SubgroupSpec
    b = load("triple").base
    s = lambda *w: SubgroupSpec(b, [b.parse(x) for x in w])  # noqa: E731
    t = amalgam(b, s("X[1]", "Y[1]"), s(), s("Z[1]"), name="XY_Z")
    with pytest.raises(BudgetExceeded):
        build_core(t, t)


@pytest.mark.parametrize("seed", [0, 1])
def test_random_pair_squares_agree_with_oracle(f2, seed):
    from instances import nielsen_splitting
    z = build_core(f2.splittings["T1"], nielsen_splitting(f2.base, seed), max_radius=6)
    assert check_core(z).ok
    assert heavy_square_keys(z.space, 2, 1, 4) == set(z.keys("sq"))
