"""Blowing up a vertex of a tree with infinite edge groups.

Given T_inf (infinite edge groups) and T_f (finite edge groups) the core
of T_inf x T_f is shaved and made minimal over the vertices of T_inf.
An f-transverse edge eps with finite stabilizer lying in at most one
square then produces a G_v-tree:

* if eps lies in no square, the non-eps-collapse of the vertex fiber;
* otherwise the square sigma on eps spans the edge e of T_inf, and the
  tree has one vertex orbit v_e with stabilizer G_e, the components of
  the vertex fiber minus the orbit of eps, and one edge per component of
  the edge fiber minus the orbit of sigma.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .certificates import CertificateReport
from .core import build_core, product
from .errors import HypothesisViolation
from .fibers import cofaces, fiber, _index_one
from .surgery import SurgeryTrace, inf_minimal_core, non_e_collapse, shaved_core
from .tree import MarkedSplitting
from .words import SubgroupSpec, intersection

CASE_FINITE = "finite-edge-groups"
CASE_CLEAVE = "cleave-case"


@dataclass
class BlowupReport:
    vertex: str
    tree: MarkedSplitting
    case: str
    face: tuple
    square: Optional[tuple] = None
    edge: Optional[str] = None  # oriented edge of T_inf at the vertex carrying sigma
    ge_splitting: Optional[MarkedSplitting] = None  # (a)
    ve_vertex: Optional[str] = None  # (b)
    edge_witnesses: list = field(default_factory=list)  # (c): (edge, vertex of (a), g)
    vertex_splitting: Optional[MarkedSplitting] = None  # (d): one-edge splitting of G_v
    vertex_witnesses: list = field(default_factory=list)  # (d): (vertex, vertex of (d), g)
    incident: list = field(default_factory=list)  # (i): (T_inf edge, group)
    family: list = field(default_factory=list)  # (ii): (member index, g, H^g cap G_v)
    components: dict = field(default_factory=dict)
    shift: tuple = ()  # h with G_{v_e} = h G_e h^-1
    trace: SurgeryTrace = field(default_factory=SurgeryTrace)

    def to_json(self) -> dict:
        b = self.tree.base
        fmt = b.format

        def spl(s):
            return None if s is None else dict(s.to_json(), group=s.group.to_json())

        return {
            "kind": "blowup",
            "vertex": self.vertex,
            "case": self.case,
            "face": list(map(_j, self.face)),
            "square": None if self.square is None else list(map(_j, self.square)),
            "edge": self.edge,
            "shift": fmt(self.shift),
            "tree": spl(self.tree),
            "ge_splitting": spl(self.ge_splitting),
            "ve_vertex": self.ve_vertex,
            "edge_witnesses": [[e, v, fmt(g)] for e, v, g in self.edge_witnesses],
            "vertex_splitting": spl(self.vertex_splitting),
            "vertex_witnesses": [[v, w, fmt(g)] for v, w, g in self.vertex_witnesses],
            "incident": [[f, grp.to_json()] for f, grp in self.incident],
            "family": [[n, fmt(g), grp.to_json()] for n, g, grp in self.family],
            "components": self.components,
            "trace": self.trace.to_json(),
        }


def _j(x):
    return list(x) if isinstance(x, tuple) else x


# -- hypotheses ---------------------------------------------------------------------------

def check_blowup_hypotheses(t_inf: MarkedSplitting, t_f: MarkedSplitting,
                            family: Sequence[SubgroupSpec]) -> None:
    if not t_inf.positive_edges() or not t_f.positive_edges():
        raise HypothesisViolation("both trees must be non-trivial")
    if not t_inf.edge_groups_infinite():
        raise HypothesisViolation("T_inf must have infinite edge groups")
    if not t_f.edge_groups_finite():
        raise HypothesisViolation("T_f must have finite edge groups")
    for t in (t_inf, t_f):
        if not t.is_minimal():
            raise HypothesisViolation(f"{t.name or 'tree'} is not minimal (it has hairs)")
    for n, h in enumerate(family):
        for t in (t_inf, t_f):
            if not t.is_elliptic(h):
                raise HypothesisViolation(f"family member {n} is not elliptic in {t.name}")


# -- the construction ----------------------------------------------------------------------

def _choose_face(z, t_inf) -> tuple:
    """(vertex orbit, face key, square key or None) with the least key."""
    up = cofaces(z)
    for o in t_inf.vertex_names:
        f = fiber(z, 1, "v", o)
        for ek in f.edges:
            if z.space.stabilizer(z.cells[ek]).is_finite() is not True:
                continue
            sq = [k for k in up[ek] if k[0] == "sq"]
            if not sq:
                return o, ek, None
            if len(sq) == 1 and _index_one(z, z.cells[sq[0]], ek):
                return o, ek, sq[0]
    raise HypothesisViolation("no f-transverse face with finite stabilizer in at most one square")


def blowup_vertex(t_inf: MarkedSplitting, t_f: MarkedSplitting,
                  family: Sequence[SubgroupSpec] = (), max_rounds: int = 64,
                  max_radius: Optional[int] = None, family_reach: int = 2) -> BlowupReport:
    check_blowup_hypotheses(t_inf, t_f, family)
    trace = SurgeryTrace()
    z = build_core(t_inf, t_f, max_rounds=max_rounds, max_radius=max_radius)
    zs, _ = shaved_core(z, 1, trace)
    zm, _ = inf_minimal_core(zs, 1, trace)
    v, face, square = _choose_face(zm, t_inf)
    fv = fiber(zm, 1, "v", v)
    sv = fv.splitting(f"tau_{v}")
    qname = f"q{fv.edges.index(face)}"
    cv, vmap_v = non_e_collapse(sv, qname, f"C(tau_{v})")
    comps = {"C": {n: g.to_json() for n, g in cv.vgroup.items()}}
    if square is None:
        rep = BlowupReport(v, cv, CASE_FINITE, face, components=comps, trace=trace)
    else:
        rep = _cleave_case(zm, t_inf, v, face, square, fv, sv, cv, vmap_v, trace)
    gv = t_inf.vgroup[v]
    rep.incident = [(f.name, f.group) for f in t_inf.out_edges(v)]
    rep.family = _family_witnesses(t_inf.base, gv, family, family_reach)
    return rep


def _cleave_case(z, t_inf, v, face, square, fv, sv, cv, vmap_v, trace) -> BlowupReport:
    sp = z.space
    b = sp.base
    sigma0 = sp.translate_to(1, z.cells[square])
    xe = sigma0.c1
    ename = xe.orbit
    s_end, t_end = t_inf.endpoints(xe)
    # which side of sigma carries eps
    side_cells = [product(s_end, sigma0.c2), product(t_end, sigma0.c2)]
    side = next((n for n, c in enumerate(side_cells) if sp.key(c) == face), None)
    if side is None:
        raise AssertionError("free face is not a side of its square")
    end = (s_end, t_end)[side]
    if end.orbit != v:
        raise AssertionError("free face does not lie over the chosen vertex")
    h = b.inv(end.rep)  # h . end is the base vertex of orbit v
    oriented = ename if side == 0 else t_inf.edges[ename].reverse
    fe = fiber(z, 1, "e", ename)
    se = fe.splitting(f"tau_{ename}")
    sname = f"q{fe.edges.index(square)}"
    ce, vmap_e = non_e_collapse(se, sname, f"C(tau_{ename})")
    ge = t_inf.edges[ename].group.conjugate(h)
    vertices = [(n, cv.vgroup[n]) for n in cv.vertex_names] + [("v_e", ge)]
    edges, edge_w = [], []
    reps = {p: sp.translate_to(1, z.cells[p]) for p in fv.points}
    names_v = {p: f"p{n}" for n, p in enumerate(fv.points)}
    names_e = {p: f"p{n}" for n, p in enumerate(fe.points)}
    # root point of each K-component
    for n, kname in enumerate(ce.vertex_names):
        root = kname.split("+")[0]
        pkey = next(p for p, nm in names_e.items() if nm == root)
        pt = sp.translate_to(1, z.cells[pkey])
        q = sp.act(h, product(end, pt.c2))
        qk = sp.key(q)
        g_q = sp.transport(reps[qk], q)
        cname, g_c = vmap_v[names_v[qk]]
        stable = b.mul(g_q, b.inv(g_c))
        grp = ce.vgroup[kname].conjugate(h)
        edges.append((f"k{n}", "v_e", cname, grp, stable))
        edge_w.append((f"k{n}", kname, b.identity))
    tree = MarkedSplitting(b, vertices, edges, f"blowup_{v}", True, t_inf.vgroup[v])
    trace.add("collapse-to-edge", *[e[0] for e in edges])
    vert_w = [(n, n, b.identity) for n in cv.vertex_names]
    comps = {"C": {n: g.to_json() for n, g in cv.vgroup.items()},
             "K": {n: g.to_json() for n, g in ce.vgroup.items()}}
    return BlowupReport(v, tree, CASE_CLEAVE, face, square, oriented, _conjugated(ce, h), "v_e",
                        edge_w, cv, vert_w, components=comps, shift=h, trace=trace)


def _conjugated(s: MarkedSplitting, h) -> MarkedSplitting:
    """The splitting h S h^-1 of h G h^-1."""
    b = s.base
    vertices = [(n, s.vgroup[n].conjugate(h)) for n in s.vertex_names]
    edges = [(f.name, f.source, f.target, f.group.conjugate(h), b.mul(h, f.stable, b.inv(h)))
             for f in s.positive_edges()]
    return MarkedSplitting(b, vertices, edges, s.name, True, s.group.conjugate(h))


def _family_witnesses(b, gv: SubgroupSpec, family, reach: int) -> list:
    """H^g cap G_v for g over words of length at most `reach`."""
    words = [b.identity]
    gens = [x for g in b.generators() for x in (g, b.inv(g))]
    layer = [b.identity]
    for _ in range(reach):
        layer = [b.mul(w, x) for w in layer for x in gens]
        words += layer
    seen = set()
    out = []
    for n, h in enumerate(family):
        for g in words:
            g = b.normal_form(g)
            if (n, g) in seen:
                continue
            seen.add((n, g))
            hg = h.conjugate(b.inv(g))
            inter = intersection(b, hg, gv)
            if inter.gens:
                out.append((n, g, inter))
    return out


# -- verification ---------------------------------------------------------------------------

def _index_two(v: SubgroupSpec, e: SubgroupSpec) -> bool:
    """[V : E] >= 2, for E finite."""
    if v.is_finite() is False:
        return True
    return v.order() >= 2 * e.order()


def check_report(r: BlowupReport, t_inf: Optional[MarkedSplitting] = None) -> CertificateReport:
    rep = CertificateReport(f"blowup at {r.vertex}")
    t = r.tree
    b = t.base
    gv = t.group
    rep.add("tree marking verifies", bool(t.check()))
    rep.add("tree is non-trivial", t.n_edge_orbits() >= 1 and not t.is_elliptic(gv).elliptic)
    rep.add("tree is minimal", t.is_minimal())
    for f, grp in r.incident:
        rep.add(f"(i) G_{f} elliptic", _elliptic(t, grp))
    for n, g, grp in r.family:
        rep.add(f"(ii) member {n} conjugated by {b.format(g)} elliptic", _elliptic(t, grp))
    finite_edges = all(f.group.is_finite() is True for f in t.positive_edges())
    if r.case == CASE_FINITE:
        rep.add("exactly one case", r.square is None and r.ge_splitting is None)
        rep.add("(1) every edge group is finite", finite_edges)
        return rep
    rep.add("exactly one case", r.case == CASE_CLEAVE and r.square is not None)
    s = r.ge_splitting
    ok_a = s is not None and bool(s.check()) and s.n_edge_orbits() == 1
    if ok_a:
        f = s.positive_edges()[0]
        fin = f.group.is_finite() is True
        if f.source == f.target:
            ess = fin
        else:
            ess = fin and _index_two(s.vgroup[f.source], f.group) and _index_two(
                s.vgroup[f.target], s.edges[f.reverse].group)
        ok_a = ess and s.is_minimal()
    rep.add("(a) G_e splits essentially with finite edge group", ok_a,
            "HNN" if ok_a and s.positive_edges()[0].source == s.positive_edges()[0].target else "")
    ge_ok = r.ve_vertex in t.vgroup and s is not None and t.vgroup[r.ve_vertex].equals(s.group)
    if t_inf is not None and ge_ok:
        ge_ok = any(t.vgroup[r.ve_vertex].equals(grp) for _, grp in r.incident)
    rep.add("(b) G_e is a vertex group", ge_ok)
    ok_c = len(r.edge_witnesses) == t.n_edge_orbits() and s is not None
    for e, w, g in r.edge_witnesses:
        ok_c = (ok_c and e in t.edges and w in s.vgroup and bool(gv.contains(g))
                and t.edges[e].group.equals(s.vgroup[w].conjugate(g)))
    rep.add("(c) edge groups conjugate to vertex groups of (a)", ok_c)
    d = r.vertex_splitting
    ok_d = (d is not None and bool(d.check()) and d.n_edge_orbits() == 1
            and d.positive_edges()[0].group.is_finite() is True and d.group.equals(gv))
    for vname, w, g in r.vertex_witnesses:
        ok_d = (ok_d and vname in t.vgroup and w in d.vgroup and bool(gv.contains(g))
                and t.vgroup[vname].equals(d.vgroup[w].conjugate(g)))
    others = [n for n in t.vertex_names if n != r.ve_vertex]
    ok_d = ok_d and sorted(v for v, _, _ in r.vertex_witnesses) == sorted(others)
    rep.add("(d) other vertex groups come from a one-edge finite splitting of G_v", ok_d)
    return rep


def _elliptic(t: MarkedSplitting, grp: SubgroupSpec) -> bool:
    e = t.is_elliptic(grp)
    return e.elliptic and all(t.act(g, e.vertex) == e.vertex for g in grp.gens)
