"""Regenerate the session files under corpus/ in canonical form.

Run from the repository root: ``python3 scripts/make_corpus.py``.
"""

from __future__ import annotations

from pathlib import Path

from vfsplit.decompose import double
from vfsplit.session import Budgets, SessionFile, serialize, session_from_dict
from vfsplit.tree import MarkedSplitting, amalgam, base_splitting, hnn
from vfsplit.words import SubgroupSpec

OUT = Path(__file__).resolve().parent.parent / "corpus"


def cyc(n):
    return {"cyclic": n}


def graph_base(vertices, edges=()):
    return {"vertices": [{"name": v, "group": cyc(n)} for v, n in vertices],
            "edges": [{"name": e, "source": s, "target": t, "group": cyc(k), "attach": [a, b]}
                      for e, s, t, k, a, b in edges]}


def new(raw, name, radius=6):
    s = session_from_dict({"schema": 1, "base": raw})
    s.name = name
    s.budgets = Budgets(radius=radius)
    return s


def spec(base, *words):
    return SubgroupSpec(base, [base.parse(w) for w in words])


def z():
    s = new({"free": ["t"]}, "infinite cyclic group")
    b = s.base
    s.splittings["T"] = hnn(b, spec(b), spec(b), b.parse("t"), name="T")
    return s


def f2():
    s = new({"free": ["a", "b"]}, "free group of rank two")
    b = s.base
    s.splittings["T1"] = amalgam(b, spec(b, "a"), spec(b), spec(b, "b"), name="T1")
    s.splittings["T2"] = amalgam(b, spec(b, "a.b"), spec(b), spec(b, "b"), name="T2")
    s.splittings["H"] = hnn(b, spec(b, "a"), spec(b), b.parse("b"), name="H")
    s.families["A"] = [spec(b, "a")]
    s.graphs["double_a"] = double(b, b.parse("a"))
    s.graphs["double_a2b2"] = double(b, b.parse("a^2.b^2"))
    return s


def f3():
    s = new({"free": ["a", "b", "c"]}, "free group of rank three")
    b = s.base
    s.splittings["Tinf"] = amalgam(b, spec(b, "a", "b"), spec(b, "a^2.b^2"),
                                   spec(b, "a^2.b^2", "c"), name="Tinf")
    s.splittings["Tf"] = amalgam(b, spec(b, "a", "b"), spec(b), spec(b, "c"), name="Tf")
    s.splittings["Tf2"] = amalgam(b, spec(b, "a"), spec(b), spec(b, "b", "c"), name="Tf2")
    s.splittings["Thnn"] = hnn(b, spec(b, "a", "b^-1.a.b", "c"), spec(b, "a"), b.parse("b"),
                               name="Thnn")
    return s


def modular():
    s = new(graph_base([("P", 2), ("Q", 3)], [("e", "P", "Q", 1, [0], [0])]),
            "free product of orders two and three")
    s.splittings["T"] = base_splitting(s.base, name="T")
    return s


def triple():
    s = new(graph_base([("X", 2), ("Y", 2), ("Z", 2)],
                       [("e", "X", "Y", 1, [0], [0]), ("f", "Y", "Z", 1, [0], [0])]),
            "free product of three groups of order two")
    b = s.base
    s.splittings["T"] = base_splitting(b, name="T")
    s.splittings["YXZ"] = MarkedSplitting(
        b, [("X", spec(b, "X[1]")), ("Y", spec(b, "Y[1]")), ("Z", spec(b, "Z[1]"))],
        [("f", "Y", "X", spec(b), b.identity), ("g", "X", "Z", spec(b), b.identity)], "YXZ")
    return s


def z4_z6():
    s = new(graph_base([("P", 4), ("Q", 6)], [("e", "P", "Q", 2, [0, 2], [0, 3])]),
            "amalgam of orders four and six over order two")
    s.splittings["T"] = base_splitting(s.base, name="T")
    return s


def dihedral():
    s = new(graph_base([("P", 2), ("Q", 2)], [("e", "P", "Q", 1, [0], [0])]),
            "infinite dihedral group")
    s.splittings["T"] = base_splitting(s.base, name="T")
    return s


def finite():
    return new(graph_base([("P", 6)]), "cyclic group of order six")


SESSIONS = {"z": z, "f2": f2, "f3": f3, "modular": modular, "triple": triple,
            "z4_z6": z4_z6, "dihedral": dihedral, "finite": finite}


def main() -> None:
    OUT.mkdir(exist_ok=True)
    for name, make in SESSIONS.items():
        s: SessionFile = make()
        (OUT / f"{name}.json").write_text(serialize(s), encoding="utf-8")
        print(f"wrote corpus/{name}.json")


if __name__ == "__main__":
    main()
