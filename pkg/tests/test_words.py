import random

import pytest
from hypothesis import given, settings, strategies as st

from vfsplit import freegroups as fg
from vfsplit.errors import InputError
from vfsplit.words import SubgroupSpec, evaluate_expression, free_group, intersection

from conftest import load

F2 = free_group("ab")
letters = st.sampled_from([1, -1, 2, -2])
words = st.lists(letters, max_size=14).map(tuple)


@given(words)
def test_reduce_idempotent(w):
    r = fg.reduce_word(w)
    assert fg.reduce_word(r) == r
    assert all(r[i] != -r[i + 1] for i in range(len(r) - 1))


@given(words, words, words)
def test_free_mul_associative(x, y, z):
    assert fg.mul(fg.mul(x, y), z) == fg.mul(x, fg.mul(y, z))


@given(words)
def test_free_inverse(w):
    assert fg.mul(w, fg.inverse(w)) == ()


@given(st.lists(words, min_size=1, max_size=3), st.lists(st.integers(-3, 3).filter(bool), max_size=8))
def test_membership_witness_reevaluates(gens, expr):
    expr = [i for i in expr if abs(i) <= len(gens)]
    h = SubgroupSpec(F2, [F2.from_word(g) for g in gens])
    w = evaluate_expression(F2, expr, h.gens)
    m = h.membership(w)
    assert m.status == "yes"
    assert F2.normal_form(evaluate_expression(F2, m.witness, h.gens)) == F2.normal_form(w)


def test_membership_no():
    h = SubgroupSpec(F2, [F2.parse("a^2"), F2.parse("b")])
    assert h.membership(F2.parse("a")).status == "no"
    assert h.contains(F2.parse("b.a^2.b^-1"))


def test_intersection_known():
    h = SubgroupSpec(F2, [F2.parse("a^2")])
    k = SubgroupSpec(F2, [F2.parse("a^3")])
    i = intersection(F2, h, k)
    assert i.equals(SubgroupSpec(F2, [F2.parse("a^6")]))


def test_parse_format_roundtrip():
    w = F2.parse("a^2.b^-1.a")
    assert F2.parse(F2.format(w)) == w


def test_unknown_generator_named():
    with pytest.raises(InputError, match="'z'"):
        F2.parse("a.z")


@pytest.mark.parametrize("name", ["z", "f2", "modular", "z4_z6", "triple", "dihedral", "finite"])
def test_kernel_random_words(name):
    b = load(name).base
    rng = random.Random(7)
    for _ in range(200):
        w = b.random_element(rng, rng.randint(0, 10))
        n = b.normal_form(w)
        assert b.normal_form(n) == n
        assert b.is_identity(b.mul(w, b.inv(w)))
        assert b.parse(b.format(w)) == n


def test_graph_base_finite_relations():
    b = load("modular").base
    p, q = b.parse("P[1]"), b.parse("Q[1]")
    assert b.is_identity(b.power(p, 2))
    assert b.is_identity(b.power(q, 3))
    assert not b.is_identity(b.power(b.mul(p, q), 6))


@settings(max_examples=50)
@given(st.integers(0, 2**31))
def test_graph_base_associative(seed):
    b = load("z4_z6").base
    rng = random.Random(seed)
    x, y, z = (b.random_element(rng, 5) for _ in range(3))
    assert b.normal_form(b.mul(b.mul(x, y), z)) == b.normal_form(b.mul(x, b.mul(y, z)))


@settings(max_examples=40, deadline=None)
@given(st.lists(words, min_size=1, max_size=3))
def test_free_index_matches_coset_count(gens):
    from vfsplit.words import free_index
    k = SubgroupSpec(F2, [F2.parse("a"), F2.parse("b")])
    h = SubgroupSpec(F2, [F2.from_word(g) for g in gens])
    n = free_index(F2, h, k)
    if n is None:
        assert not h.graph.is_finite_index(2)
    else:
        assert n == h.graph.n_vertices and h.graph.is_finite_index(2)


def test_free_index_in_a_proper_subgroup():
    from vfsplit.words import free_index
    k = SubgroupSpec(F2, [F2.parse("a^2"), F2.parse("b")])
    assert free_index(F2, SubgroupSpec(F2, [F2.parse("a^4"), F2.parse("b"), F2.parse("a^2.b.a^-2")]), k) == 2
    assert free_index(F2, SubgroupSpec(F2, [F2.parse("b")]), k) is None
