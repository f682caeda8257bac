import dataclasses
import json

import pytest

from vfsplit.blowup import CASE_CLEAVE, CASE_FINITE, blowup_vertex, check_report
from vfsplit.errors import HypothesisViolation
from vfsplit.session import dumps
from vfsplit.verify import blowup_from_json
from vfsplit.words import SubgroupSpec


def spec(s, *w):
    b = s.base
    return SubgroupSpec(b, [b.parse(x) for x in w])


@pytest.fixture(scope="module")
def reports(f3):
    t = f3.splittings
    fam = [spec(f3, "a"), spec(f3, "c")]
    return {"Tf": blowup_vertex(t["Tinf"], t["Tf"], fam),
            "Tf2": blowup_vertex(t["Tinf"], t["Tf2"], fam)}


def test_f3_instance_verifies(reports, f3):
    r = reports["Tf"]
    assert r.case in (CASE_FINITE, CASE_CLEAVE)
    rep = check_report(r, f3.splittings["Tinf"])
    assert rep.ok, rep.summary()
    names = [n for n, _, _ in rep.checks]
    assert any(n.startswith("(i)") for n in names)
    assert any(n.startswith("(ii)") for n in names)
    assert sum(n in ("(1) every edge group is finite",) for n in names) + \
        sum(n.startswith("(a)") for n in names) == 1


def test_cleave_case_has_all_subwitnesses(reports, f3):
    r = reports["Tf2"]
    assert r.case == CASE_CLEAVE
    rep = check_report(r, f3.splittings["Tinf"])
    assert rep.ok, rep.summary()
    for tag in ("(a)", "(b)", "(c)", "(d)"):
        assert any(n.startswith(tag) for n, _, _ in rep.checks)


def test_blown_up_tree_acts_on_the_vertex_group(reports, f3):
    for r in reports.values():
        assert r.tree.group.equals(f3.splittings["Tinf"].vgroup[r.vertex])


def test_json_round_trip(reports, f3):
    for r in reports.values():
        d = json.loads(dumps(r.to_json()))
        back = blowup_from_json(f3.base, d)
        assert check_report(back).ok
        assert dumps(back.to_json()) == dumps(r.to_json())


def test_flipped_case_tag_fails(reports):
    for r in reports.values():
        other = CASE_FINITE if r.case == CASE_CLEAVE else CASE_CLEAVE
        assert not check_report(dataclasses.replace(r, case=other)).ok


def test_corrupted_vertex_witness_fails(reports, f3):
    r = reports["Tf2"]
    bad = [(v, w, f3.base.parse("c")) for v, w, _ in r.vertex_witnesses]
    assert not check_report(dataclasses.replace(r, vertex_witnesses=bad)).ok


def test_corrupted_edge_group_fails(reports, f3):
    r = reports["Tf2"]
    s = r.ge_splitting
    wrong = dataclasses.replace(r, ve_vertex="nope")
    assert not check_report(wrong).ok
    assert s is not None


def test_family_member_not_elliptic_is_rejected(f3):
    t = f3.splittings
    with pytest.raises(HypothesisViolation):
        blowup_vertex(t["Tinf"], t["Tf"], [spec(f3, "a.c")])


def test_swapped_trees_are_rejected(f3):
    t = f3.splittings
    with pytest.raises(HypothesisViolation):
        blowup_vertex(t["Tf"], t["Tinf"])
