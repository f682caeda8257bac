"""Re-check certificate files from their recorded witnesses.

Each artifact kind is rebuilt from JSON against the session's base and
handed to the same checker that produced it; nothing is recomputed from
the original inputs except through the recorded words.
"""

from __future__ import annotations

from .blowup import BlowupReport, check_report
from .certificates import CertificateReport
from .core import EquivSquareComplex, ProductCell, ProductSpace
from .decompose import (ChainCertificate, ChainStep, CleaveResult, OneEndedResult, SwarupResult)
from .errors import InputError
from .fibers import check_core
from .session import SessionFile, _graph, _spec, splitting_from_json
from .surgery import SurgeryTrace
from .whitehead import FreeSplittingResult


def _spl(base, d, name):
    return None if d is None else splitting_from_json(base, d, name, name)


def _word(base, s):
    return base.parse(s)


def chain_from_json(base, d: dict) -> ChainCertificate:
    steps = []
    for i, st in enumerate(d["steps"]):
        steps.append(ChainStep(_spec(base, st["group"], f"steps[{i}].group"),
                               _spl(base, st["splitting"], f"steps[{i}].splitting"),
                               st["vertex"], _word(base, st["conj"]), _word(base, st["link"])))
    return ChainCertificate(_spec(base, d["top"], "top"), _spec(base, d["bottom"], "bottom"),
                            steps, _word(base, d["tail"]))


def blowup_from_json(base, d: dict) -> BlowupReport:
    tup = lambda x: None if x is None else tuple(tuple(y) if isinstance(y, list) else y for y in x)  # noqa: E731
    r = BlowupReport(d["vertex"], _spl(base, d["tree"], "tree"), d["case"], tup(d["face"]),
                     tup(d["square"]), d["edge"], _spl(base, d["ge_splitting"], "ge_splitting"),
                     d["ve_vertex"],
                     [(e, v, _word(base, g)) for e, v, g in d["edge_witnesses"]],
                     _spl(base, d["vertex_splitting"], "vertex_splitting"),
                     [(v, w, _word(base, g)) for v, w, g in d["vertex_witnesses"]],
                     [(f, _spec(base, g, f"incident.{f}")) for f, g in d["incident"]],
                     [(n, _word(base, g), _spec(base, h, f"family[{n}]")) for n, g, h in d["family"]],
                     d.get("components", {}), _word(base, d.get("shift", "1")),
                     SurgeryTrace.from_json(d.get("trace", [])))
    return r


def swarup_from_json(base, d: dict) -> SwarupResult:
    ff = dict(d.get("free_factor", {}))
    if "delta_conj" in ff:
        ff["delta_conj"] = _word(base, ff["delta_conj"])
    return SwarupResult(d["splitting"], _spec(base, d["c1"], "c1"),
                        chain_from_json(base, d["below_c"]), d["side"],
                        chain_from_json(base, d["below_side"]), _spl(base, d["delta"], "delta"),
                        d["delta_vertex"], ff, d["iterations"],
                        [tuple(m) for m in d["measures"]], d["rerouted"])


def cleave_from_json(base, d: dict) -> CleaveResult:
    return CleaveResult(_spl(base, d["tree"], "tree"), d["case"], None,
                        tuple(d["counts_before"]), tuple(d["counts_after"]),
                        {k: chain_from_json(base, c) for k, c in d["edge_chains"].items()},
                        {k: chain_from_json(base, c) for k, c in d["vertex_chains"].items()},
                        list(d.get("new_edges", [])))


def core_from_json(session: SessionFile, d: dict) -> EquivSquareComplex:
    t1, t2 = (session.splitting(n) for n in d["trees"])
    sp = ProductSpace(t1, t2)
    b = sp.base
    z = EquivSquareComplex(sp)
    for c in d["cells"]:
        a, e = c["cell1"], c["cell2"]
        k1 = "v" if a["kind"] == "vertex" else "e"
        k2 = "v" if e["kind"] == "vertex" else "e"
        x = t1.canonical(k1, a["orbit"], b.parse(a["rep"]))
        y = t2.canonical(k2, e["orbit"], b.parse(e["rep"]))
        pc = ProductCell(c["kind"], x, y, int(c["id"].rsplit(":", 1)[1]) if c["kind"] == "dg" else 0)
        z.cells[sp.key(pc)] = sp.representative(sp.key(pc))
    z.flags.update(d.get("flags", {}))
    return z


def verify_artifact(session: SessionFile, d: dict) -> CertificateReport:
    kind = d.get("kind")
    base = session.base
    if kind == "blowup":
        return check_report(blowup_from_json(base, d))
    if kind == "swarup":
        return swarup_from_json(base, d).check()
    if kind == "cleave":
        return cleave_from_json(base, d).check()
    if kind == "chain":
        return chain_from_json(base, d).check()
    if kind == "one-ended":
        g = _graph(d["graph"], "graph")
        res = OneEndedResult(d["status"], d["vertex"], None,
                             {v: FreeSplittingResult(r["status"], exact=r["exact"], reason=r["reason"])
                              for v, r in d["oracle"].items()})
        if d["witness"] is not None:
            vb = g.base(d["vertex"])
            res.witness = splitting_from_json(vb, d["witness"], "witness", "witness")
        return res.check(g)
    if kind == "core":
        z = core_from_json(session, d)
        rep = check_core(z)
        rep.add("recorded counts match", z.counts() == d["counts"])
        return rep
    raise InputError(f"unknown artifact kind {kind!r}")
