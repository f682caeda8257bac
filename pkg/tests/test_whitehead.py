import random

import pytest
from hypothesis import given, settings, strategies as st

from vfsplit import freegroups as fg
from vfsplit.errors import InputError
from vfsplit.whitehead import find_free_splitting_rel, has_cut, is_basis, whitehead_graph


def w(s, names="abc"):
    out = []
    for tok in s.split("."):
        base, _, exp = tok.partition("^")
        k = names.index(base) + 1
        n = int(exp) if exp else 1
        out += [k if n > 0 else -k] * abs(n)
    return fg.reduce_word(out)


def conjugate_into(word, gens) -> bool:
    """Some cyclic conjugate of the word reads a closed loop in the folded graph."""
    g = fg.FoldedGraph(gens, track=False)
    c = fg.cyclic_reduction(word)[1]
    for v in range(g.n_vertices):
        end, n, _ = g.read(c, v)
        if n == len(c) and end == v:
            return True
    return not c


def assert_witness(rank, words, res):
    f1, f2 = res.factors
    assert is_basis(rank, list(f1) + list(f2))
    for x in words:
        assert conjugate_into(x, list(f1)) or conjugate_into(x, list(f2))


def random_automorphism(rank, rng, moves=4):
    imgs = [(k,) for k in range(1, rank + 1)]
    for _ in range(moves):
        i, j = rng.sample(range(rank), 2)
        imgs[i] = fg.mul(imgs[i], imgs[j] if rng.random() < 0.5 else fg.inverse(imgs[j]))
    return lambda word: fg.reduce_word([x for k in word for x in
                                        (imgs[abs(k) - 1] if k > 0 else fg.inverse(imgs[abs(k) - 1]))])


@pytest.mark.parametrize("rank,words", [(2, ["a"]), (3, ["a", "b.c"]), (3, ["a.b.c"]), (2, [])])
def test_known_splittings(rank, words):
    ws = [w(x) for x in words]
    res = find_free_splitting_rel(rank, ws)
    assert res.found and res.exact
    assert_witness(rank, ws, res)


@pytest.mark.parametrize("words", [["a^2.b^2"], ["a.b.a^-1.b^-1"], ["a^2.b^3"]])
def test_known_one_ended_rank_two(words):
    res = find_free_splitting_rel(2, [w(x) for x in words])
    assert res.status == "none" and res.exact


def test_rank_one():
    assert find_free_splitting_rel(1, [w("a")]).status == "none"
    assert find_free_splitting_rel(1, []).found


def test_rank_limit():
    with pytest.raises(InputError):
        find_free_splitting_rel(4, [])


def test_zero_bound_is_unknown():
    res = find_free_splitting_rel(2, [w("a.b.a.b.b")], bound=0)
    assert res.status == "none-within-bound" and not res.exact


def test_whitehead_graph_of_square_word():
    g = whitehead_graph(2, [w("a^2.b^2")])
    assert g.number_of_edges() == 4
    assert not has_cut(2, [w("a^2.b^2")])


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 3), st.sampled_from([2, 3]))
def test_automorphic_images_of_split_instances(seed, k, rank):
    rng = random.Random(seed)
    phi = random_automorphism(rank, rng)
    words = [phi(fg.power((1,), k))] + ([phi((2, 3))] if rank == 3 else [])
    res = find_free_splitting_rel(rank, words)
    assert res.found
    assert_witness(rank, words, res)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9), st.sampled_from(["a^2.b^2", "a.b.a^-1.b^-1"]))
def test_automorphic_images_of_rigid_instances(seed, word):
    phi = random_automorphism(2, random.Random(seed))
    res = find_free_splitting_rel(2, [phi(w(word))])
    assert not res.found
