import dataclasses

import pytest

from vfsplit.decompose import (ChainCertificate, cleave_tree, coincidence, double,
                               first_construction, one_ended_rel, rebase, relative_free_splitting,
                               second_construction, stallings_free_factor, swarup_amalgam,
                               swarup_hnn)
from vfsplit.errors import HypothesisViolation
from vfsplit.tree import amalgam
from vfsplit.whitehead import FreeSplittingResult
from vfsplit.words import SubgroupSpec


def spec(s, *w):
    b = s.base
    return SubgroupSpec(b, [b.parse(x) for x in w])


# -- chains ----------------------------------------------------------------------------------

def test_reflexive_chain_is_not_strict(f3):
    ch = ChainCertificate.reflexive(spec(f3, "a", "b"))
    assert ch.check().ok and not ch.strict


def test_chain_through_free_splitting(f3):
    g = spec(f3, "a", "b", "c")
    ch = ChainCertificate.reflexive(g).extend(f3.splittings["Tf"], "A")
    assert ch.strict and ch.check().ok
    assert ch.bottom.equals(spec(f3, "a", "b"))


def test_chain_survives_conjugation(f3):
    g = spec(f3, "a", "b", "c")
    ch = ChainCertificate.reflexive(g).extend(f3.splittings["Tf"], "B").conjugated(
        f3.base.parse("a.b"))
    assert ch.check().ok
    assert ch.bottom.equals(spec(f3, "a.b.c.b^-1.a^-1"))


def test_tampered_chain_fails(f3):
    g = spec(f3, "a", "b", "c")
    ch = ChainCertificate.reflexive(g).extend(f3.splittings["Tf"], "A")
    bad = dataclasses.replace(ch, bottom=spec(f3, "a"))
    assert not bad.check().ok


def test_infinite_edge_splitting_is_not_a_chain_step(f3):
    g = spec(f3, "a", "b", "c")
    ch = ChainCertificate.reflexive(g).extend(f3.splittings["Tinf"], "A")
    assert not ch.check().ok


# -- relative free splittings -----------------------------------------------------------------

def test_relative_free_splitting_of_vertex_group(f3):
    b = f3.base
    gb = spec(f3, "a^2.b^2", "c")
    s, res = relative_free_splitting(b, gb, [spec(f3, "a^2.b^2")], 4000)
    assert res.found and s is not None
    assert s.group.equals(gb)
    assert s.is_elliptic(spec(f3, "a^2.b^2")).elliptic


def test_no_relative_free_splitting(f3):
    s, res = relative_free_splitting(f3.base, spec(f3, "a", "b"), [spec(f3, "a^2.b^2")], 4000)
    assert s is None and res.status == "none" and res.exact


def test_rebase_round_trip(f3):
    h = spec(f3, "a^2.b^2", "c")
    rb = rebase(h)
    for w in h.gens:
        assert rb.up(rb.down(w)) == f3.base.normal_form(w)


# -- cleave ----------------------------------------------------------------------------------

@pytest.mark.parametrize("tf", [None, "Tf", "Tf2"])
def test_cleave_bookkeeping(f3, tf):
    t_f = f3.splittings[tf] if tf else None
    res = cleave_tree(f3.splittings["Tinf"], t_f=t_f)
    rep = res.check()
    assert rep.ok, rep.summary()
    dv = res.counts_after[0] - res.counts_before[0]
    de = res.counts_after[1] - res.counts_before[1]
    assert dv in (0, 1) and de in (0, 1)
    new = set(res.tree.edges) - set(f3.splittings["Tinf"].edges)
    for name in new:
        if not res.tree.edges[name].positive:
            continue
        assert name in res.edge_chains or name in res.new_edges


def test_cleave_tampered_counts_fail(f3):
    res = cleave_tree(f3.splittings["Tinf"])
    assert not dataclasses.replace(res, counts_after=(9, 9)).check().ok


# -- Swarup ----------------------------------------------------------------------------------

def test_swarup_amalgam_f3(f3):
    t = f3.splittings["Tinf"]
    res = swarup_amalgam(f3.base, t.vgroup["A"], t.vgroup["B"], t.edges["e"].group)
    assert res.c1.equals(spec(f3, "a^2.b^2"))
    assert res.side == "B"
    assert res.check().ok
    assert res.free_factor["ok"]


def test_stallings_free_factor_independent(f3):
    gb = spec(f3, "a^2.b^2", "c")
    assert stallings_free_factor(spec(f3, "a^2.b^2"), gb, [spec(f3, "c")])["ok"]
    assert not stallings_free_factor(spec(f3, "a^4.b^4"), gb, [spec(f3, "c")])["ok"]


def test_swarup_hnn(f3):
    t = f3.splittings["Thnn"]
    f = t.positive_edges()[0]
    res = swarup_hnn(f3.base, t.vgroup["A"], f.group, f.stable)
    rep = res.check()
    assert rep.ok, rep.summary()
    assert res.c1.equals(spec(f3, "a"))


def test_swarup_rejects_finite_edge(f3):
    with pytest.raises(HypothesisViolation):
        swarup_amalgam(f3.base, spec(f3, "a", "b"), spec(f3, "c"), spec(f3))


def test_first_construction_and_coincidence(f3):
    fc = first_construction(f3.splittings["Tinf"])
    assert fc.subtree.n_edge_orbits() == 1
    assert coincidence(fc.subtree) is not None
    for _, (orig, ch) in fc.chains.items():
        assert ch.check().ok


def test_second_construction_directly(f3):
    sc = second_construction(f3.splittings["Tinf"], f3.splittings["Tf2"])
    assert sc.edge_chain.check().ok and sc.edge_chain.strict
    assert sc.tree.n_edge_orbits() == 1
    old, new = sc.measure
    assert new <= old


# -- relative one-endedness -------------------------------------------------------------------

def test_double_over_primitive_is_many_ended(f2):
    g = double(f2.base, f2.base.parse("a"))
    res = one_ended_rel(g)
    assert res.status == "many-ended" and res.witness is not None
    assert res.check(g).ok


def test_double_over_square_word_is_one_ended(f2):
    g = double(f2.base, f2.base.parse("a^2.b^2"))
    res = one_ended_rel(g)
    assert res.status == "one-ended"
    assert all(r.exact for r in res.oracle.values())
    assert res.check(g).ok


def test_one_ended_unknown_on_zero_budget(f2):
    g = double(f2.base, f2.base.parse("a.b.a.b.b"))
    assert one_ended_rel(g, bound=0).status == "unknown"


def test_forged_one_ended_claim_fails(f2):
    g = double(f2.base, f2.base.parse("a"))
    res = one_ended_rel(g)
    forged = dataclasses.replace(res, status="one-ended", witness=None,
                                 oracle={v: FreeSplittingResult("none", exact=True) for v in res.oracle})
    assert not forged.check(g).ok


def test_plain_amalgam_helper(f2):
    t = amalgam(f2.base, spec(f2, "a"), spec(f2), spec(f2, "b"))
    assert t.check()
