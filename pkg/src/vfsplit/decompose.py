"""Top-level drivers: cleaving trees, relative one-endedness, Swarup splittings.

The accessibility order is certified by chains.  A step says that H is a
vertex group of an essential splitting of G with finite edge groups; the
order is conjugation invariant, so consecutive steps are linked by
explicit conjugators.  Certificates re-verify from their own data.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from . import freegroups as fg
from .blowup import CASE_FINITE, BlowupReport, _index_two, blowup_vertex
from .certificates import CertificateReport
from .errors import BudgetExceeded, HypothesisViolation, InputError
from .tree import MarkedSplitting, amalgam, collapse, hnn
from .whitehead import MAX_RANK, FreeSplittingResult, find_free_splitting_rel, is_basis
from .words import FreeBase, SubgroupSpec, evaluate_expression, free_group


# -- chains ---------------------------------------------------------------------------

@dataclass
class ChainStep:
    group: SubgroupSpec
    splitting: MarkedSplitting  # essential, finite edge groups, acting group `group`
    vertex: str
    conj: tuple = ()  # the step's subgroup is conj . G_vertex . conj^-1, conj in `group`
    link: tuple = ()  # group = link . (previous subgroup) . link^-1

    def subgroup(self) -> SubgroupSpec:
        return self.splitting.vgroup[self.vertex].conjugate(self.conj)


@dataclass
class ChainCertificate:
    """bottom <= top (strictly when there is at least one step)."""

    top: SubgroupSpec
    bottom: SubgroupSpec
    steps: list = field(default_factory=list)
    tail: tuple = ()  # bottom = tail . (last subgroup) . tail^-1

    @property
    def strict(self) -> bool:
        return bool(self.steps)

    @classmethod
    def reflexive(cls, g: SubgroupSpec, conj=()) -> "ChainCertificate":
        return cls(g, g.conjugate(conj), [], conj)

    def extend(self, s: MarkedSplitting, vertex: str) -> "ChainCertificate":
        step = ChainStep(self.bottom, s, vertex, s.base.identity, s.base.identity)
        return ChainCertificate(self.top, step.subgroup(), self.steps + [step], s.base.identity)

    def conjugated(self, g) -> "ChainCertificate":
        b = self.top.base
        return ChainCertificate(self.top, self.bottom.conjugate(g), self.steps, b.mul(g, self.tail))

    def then(self, other: "ChainCertificate") -> "ChainCertificate":
        """Concatenate: self.bottom is the top of `other`."""
        if not other.steps:
            return ChainCertificate(self.top, other.bottom, self.steps,
                                    self.top.base.mul(other.tail, self.tail))
        first = other.steps[0]
        first = ChainStep(first.group, first.splitting, first.vertex, first.conj,
                          self.top.base.mul(first.link, self.tail))
        return ChainCertificate(self.top, other.bottom, self.steps + [first] + other.steps[1:],
                                other.tail)

    def check(self, label: str = "chain") -> CertificateReport:
        rep = CertificateReport(label)
        cur = self.top
        for n, st in enumerate(self.steps):
            rep.add(f"step {n}: group is the previous subgroup up to the link",
                    st.group.equals(cur.conjugate(st.link)))
            s = st.splitting
            rep.add(f"step {n}: splitting verifies", bool(s.check())
                    and _acting(s).equals(st.group))
            rep.add(f"step {n}: splitting is essential with finite edge groups",
                    essential_finite(s))
            rep.add(f"step {n}: conjugator lies in the group", st.group.contains(st.conj))
            sub = st.subgroup()
            rep.add(f"step {n}: vertex group is proper", not sub.contains_subgroup(st.group))
            cur = sub
        rep.add("bottom matches", self.bottom.equals(cur.conjugate(self.tail)))
        return rep

    def to_json(self) -> dict:
        b = self.top.base
        return {"top": self.top.to_json(), "bottom": self.bottom.to_json(),
                "tail": b.format(self.tail), "strict": self.strict,
                "steps": [{"group": st.group.to_json(),
                           "splitting": dict(st.splitting.to_json(),
                                             group=_acting(st.splitting).to_json()),
                           "vertex": st.vertex, "conj": b.format(st.conj),
                           "link": b.format(st.link)} for st in self.steps]}


def _acting(s: MarkedSplitting) -> SubgroupSpec:
    return s.group if s.group is not None else SubgroupSpec(s.base, s.base.generators())


def essential_finite(s: MarkedSplitting) -> bool:
    """Non-trivial, finite edge groups, and no edge of index one at a valence-one end."""
    if s.n_edge_orbits() == 0:
        return False
    for f in s.positive_edges():
        if f.group.is_finite() is not True:
            return False
        if f.source == f.target:
            continue
        if not (_index_two(s.vgroup[f.source], f.group)
                and _index_two(s.vgroup[f.target], s.edges[f.reverse].group)):
            return False
    return True


# -- splittings of vertex groups --------------------------------------------------------

def _require_free(base) -> None:
    if not isinstance(base, FreeBase):
        raise InputError("this driver needs a free base presentation")


def relative_free_splitting(base, group: SubgroupSpec, rel: Sequence[SubgroupSpec],
                            bound: int = 4000, max_rank: int = MAX_RANK,
                            name: str = "") -> tuple:
    """A free splitting of `group` with each subgroup in `rel` elliptic.

    Returns (splitting or None, oracle result).  A subgroup is elliptic in
    a tree once its generators and their pairwise products are, so those
    are the words handed to the oracle.
    """
    _require_free(base)
    basis = group.free_basis()
    bspec = SubgroupSpec(base, basis)
    words = []
    for h in rel:
        ex = []
        for g in h.gens:
            m = bspec.membership(g)
            if m.status != "yes":
                raise InputError(f"{base.format(g)} is not in the vertex group")
            ex.append(m.witness)
        words += ex + [fg.mul(x, y) for i, x in enumerate(ex) for y in ex[i + 1:]]
    res = find_free_splitting_rel(len(basis), words, bound, max_rank)
    if not res.found:
        return None, res
    up = lambda w: evaluate_expression(base, w, basis)  # noqa: E731
    triv = SubgroupSpec(base, [])
    f1, f2 = res.factors
    if f2:
        s = MarkedSplitting(base, [("P1", SubgroupSpec(base, [up(w) for w in f1])),
                                   ("P2", SubgroupSpec(base, [up(w) for w in f2]))],
                            [("d", "P1", "P2", triv, base.identity)], name, True, group)
    else:
        s = MarkedSplitting(base, [("P", triv)], [("d", "P", "P", triv, up(f1[0]))],
                            name, True, group)
    for h in rel:
        if not s.is_elliptic(h):
            raise AssertionError("oracle splitting does not make the family elliptic")
    return s, res


def refine_vertex(t: MarkedSplitting, v: str, s: MarkedSplitting, name: str = "") -> tuple:
    """Blow the vertex orbit v up into the G_v-splitting s.

    Every edge at v is re-attached at a vertex of s fixed by its group.
    Returns (splitting, edge conjugators: new edge group = g . old . g^-1).
    """
    b = t.base

    def nm(o):
        return f"{v}.{o}"

    vertices = []
    for o in t.vertex_names:
        if o == v:
            vertices += [(nm(x), s.vgroup[x]) for x in s.vertex_names]
        else:
            vertices.append((o, t.vgroup[o]))
    edges = [(nm(f.name), nm(f.source), nm(f.target), f.group, f.stable)
             for f in s.positive_edges()]
    conj = {}
    for f in t.positive_edges():
        src, tgt, grp, stable, g = f.source, f.target, f.group, f.stable, b.identity
        if f.source == v:
            ell = s.is_elliptic(f.group)
            if not ell:
                raise HypothesisViolation(f"edge group of {f.name} is not elliptic in the blow-up")
            src, g = nm(ell.vertex.orbit), b.inv(ell.vertex.rep)
            grp, stable = f.group.conjugate(g), b.mul(g, stable)
        if f.target == v:
            ell = s.is_elliptic(t.edges[f.reverse].group)
            if not ell:
                raise HypothesisViolation(f"edge group of {f.reverse} is not elliptic in the blow-up")
            tgt, stable = nm(ell.vertex.orbit), b.mul(stable, ell.vertex.rep)
        edges.append((f.name, src, tgt, grp, stable))
        conj[f.name] = g
    return MarkedSplitting(b, vertices, edges, name or t.name, True, t.group), conj


def sub_splitting(t: MarkedSplitting, keep: set, root: str, name: str = "") -> tuple:
    """The component of the kept edge orbits at root, with its setwise stabilizer.

    Returns (splitting acting by the stabilizer, {orbit: g}) where the
    new representative of orbit o is g . v_o.
    """
    b = t.base
    where = {root: b.identity}
    tree = set()
    queue = deque([root])
    while queue:
        o = queue.popleft()
        for f in t.out_edges(o):
            pos = f.name if f.positive else f.reverse
            if pos in keep and f.target not in where:
                where[f.target] = b.mul(where[o], f.stable)
                tree.add(pos)
                queue.append(f.target)
    vertices = [(o, t.vgroup[o].conjugate(where[o])) for o in where]
    edges, gens = [], []
    for o, grp in vertices:
        gens += grp.gens
    for f in t.positive_edges():
        if f.name not in keep or f.source not in where:
            continue
        gs, gt = where[f.source], where[f.target]
        st = b.mul(gs, f.stable, b.inv(gt))
        edges.append((f.name, f.source, f.target, f.group.conjugate(gs), st))
        if f.name not in tree:
            gens.append(st)
    group = SubgroupSpec(b, [g for g in gens if g != b.identity])
    return MarkedSplitting(b, vertices, edges, name or t.name, True, group), where


# -- moving between bases ------------------------------------------------------------------

@dataclass
class Rebase:
    """A free group H <= F as a base of its own: F_k -> F sends x_i to basis[i]."""

    outer: FreeBase
    inner: FreeBase
    basis: list

    def up(self, w):
        return evaluate_expression(self.outer, w, self.basis)

    def down(self, w):
        m = SubgroupSpec(self.outer, self.basis).membership(w)
        if m.status != "yes":
            raise InputError(f"{self.outer.format(w)} is outside the rebased group")
        return fg.reduce_word(m.witness)

    def spec_up(self, h: SubgroupSpec) -> SubgroupSpec:
        return SubgroupSpec(self.outer, [self.up(g) for g in h.gens])

    def spec_down(self, h: SubgroupSpec) -> SubgroupSpec:
        return SubgroupSpec(self.inner, [self.down(g) for g in h.gens])


def rebase(group: SubgroupSpec) -> Rebase:
    b = group.base
    _require_free(b)
    basis = group.free_basis()
    return Rebase(b, free_group([f"x{i + 1}" for i in range(len(basis))]), basis)


def map_splitting(s: MarkedSplitting, rb: Rebase, up: bool) -> MarkedSplitting:
    spec = rb.spec_up if up else rb.spec_down
    word = rb.up if up else rb.down
    base = rb.outer if up else rb.inner
    vertices = [(n, spec(s.vgroup[n])) for n in s.vertex_names]
    edges = [(f.name, f.source, f.target, spec(f.group), word(f.stable)) for f in s.positive_edges()]
    if up:
        group = spec(s.group) if s.group is not None else SubgroupSpec(base, rb.basis)
    else:
        group = None if s.group is not None and s.group.equals(SubgroupSpec(rb.outer, rb.basis)) \
            else (spec(s.group) if s.group is not None else None)
    return MarkedSplitting(base, vertices, edges, s.name, True, group)


def map_chain(c: ChainCertificate, rb: Rebase) -> ChainCertificate:
    steps = [ChainStep(rb.spec_up(st.group), map_splitting(st.splitting, rb, True), st.vertex,
                       rb.up(st.conj), rb.up(st.link)) for st in c.steps]
    return ChainCertificate(rb.spec_up(c.top), rb.spec_up(c.bottom), steps, rb.up(c.tail))


def default_free_splitting(base: FreeBase, family: Sequence[SubgroupSpec] = (),
                           bound: int = 4000) -> MarkedSplitting:
    """A free splitting of the base group with the family elliptic."""
    whole = SubgroupSpec(base, base.generators())
    s, res = relative_free_splitting(base, whole, family, bound, name="T_f")
    if s is None:
        if res.status == "none":
            raise HypothesisViolation("the group is one-ended relative to the family")
        raise BudgetExceeded("relative free splitting", res.reason, bound)
    return MarkedSplitting(base, [(n, s.vgroup[n]) for n in s.vertex_names],
                           [(f.name, f.source, f.target, f.group, f.stable)
                            for f in s.positive_edges()], "T_f")


# -- cleaving -------------------------------------------------------------------------------

@dataclass
class CleaveResult:
    tree: MarkedSplitting
    case: str
    blowup: BlowupReport
    counts_before: tuple
    counts_after: tuple
    edge_chains: dict  # new edge orbit -> ChainCertificate (strict, below an old edge group)
    vertex_chains: dict  # new vertex orbit -> ChainCertificate (strict, below an old vertex group)
    new_edges: list = field(default_factory=list)  # case (1): the finite edges of the blow-up

    def check(self) -> CertificateReport:
        rep = CertificateReport("cleave")
        dv = self.counts_after[0] - self.counts_before[0]
        de = self.counts_after[1] - self.counts_before[1]
        rep.add("vertex orbit count grows by 0 or 1", dv in (0, 1), f"{dv:+d}")
        rep.add("edge orbit count grows by 0 or 1", de in (0, 1), f"{de:+d}")
        rep.add("tree verifies", bool(self.tree.check()))
        for name in self.new_edges:
            rep.add(f"new edge {name} has a finite group",
                    self.tree.edges[name].group.is_finite() is True)
        for name, ch in sorted(self.edge_chains.items()):
            r = ch.check()
            rep.add(f"edge {name} strictly below an old edge group", bool(r) and ch.strict,
                    "; ".join(r.failures()))
            rep.add(f"edge {name} group matches", self.tree.edges[name].group.equals(ch.bottom))
        for name, ch in sorted(self.vertex_chains.items()):
            r = ch.check()
            rep.add(f"vertex {name} strictly below an old vertex group", bool(r) and ch.strict,
                    "; ".join(r.failures()))
        return rep

    def to_json(self) -> dict:
        return {"kind": "cleave", "case": self.case,
                "tree": self.tree.to_json(), "counts_before": list(self.counts_before),
                "counts_after": list(self.counts_after),
                "edge_chains": {k: c.to_json() for k, c in sorted(self.edge_chains.items())},
                "vertex_chains": {k: c.to_json() for k, c in sorted(self.vertex_chains.items())},
                "new_edges": list(self.new_edges),
                "blowup": self.blowup.to_json()}


def cleave_tree(t: MarkedSplitting, family: Sequence[SubgroupSpec] = (),
                t_f: Optional[MarkedSplitting] = None, max_radius: Optional[int] = None,
                bound: int = 4000) -> CleaveResult:
    """Blow up a vertex against a free splitting and collapse the spanned edge."""
    if t_f is None:
        _require_free(t.base)
        t_f = default_free_splitting(t.base, family, bound)
    rep = blowup_vertex(t, t_f, family, max_radius=max_radius)
    v = rep.vertex
    refined, _ = refine_vertex(t, v, rep.tree, f"{t.name}~{v}")
    before = (t.n_vertex_orbits(), t.n_edge_orbits())
    vchains, echains = {}, {}
    if rep.case == CASE_FINITE:
        out = refined
        for o in rep.tree.vertex_names:
            ch = ChainCertificate.reflexive(t.vgroup[v]).extend(rep.tree, o)
            vchains[f"{v}.{o}"] = ch
        new = [f"{v}.{f.name}" for f in rep.tree.positive_edges()]
        return CleaveResult(out, rep.case, rep, before,
                            (out.n_vertex_orbits(), out.n_edge_orbits()), echains, vchains, new)
    epos = t.edges[rep.edge].name if t.edges[rep.edge].positive else t.edges[rep.edge].reverse
    out, vmap = collapse(refined, [epos], f"{t.name}~{v}")
    ge = t.edges[epos].group
    h = rep.shift
    for ename, kname, _ in rep.edge_witnesses:
        src = refined.edges[f"{v}.{ename}"].source
        _, g = vmap[src]
        ch = ChainCertificate.reflexive(ge, h).extend(rep.ge_splitting, kname).conjugated(g)
        echains[f"{v}.{ename}"] = ch
    for vname, w, _ in rep.vertex_witnesses:
        _, g = vmap[f"{v}.{vname}"]
        ch = ChainCertificate.reflexive(t.vgroup[v]).extend(rep.vertex_splitting, w).conjugated(g)
        vchains[vmap[f"{v}.{vname}"][0]] = ch
    return CleaveResult(out, rep.case, rep, before,
                        (out.n_vertex_orbits(), out.n_edge_orbits()), echains, vchains)


# -- the Swarup constructions ------------------------------------------------------------------

@dataclass
class FirstConstruction:
    refined: MarkedSplitting  # t^(2)
    subtree: MarkedSplitting  # t^(1), acting by its setwise stabilizer
    group: SubgroupSpec  # G^(1)
    chains: dict  # vertex orbit of t^(1) -> (vertex orbit of t, ChainCertificate)
    edge_conj: dict  # edge orbit of t -> g with (edge group in t^(1)) = g (old group) g^-1
    where: dict  # vertex orbit of t^(1) -> its representative in t^(2) coordinates
    blowups: list  # (vertex, splitting) in order


def _one_infinite_edge(t: MarkedSplitting) -> None:
    if t.n_edge_orbits() != 1:
        raise HypothesisViolation("expected exactly one edge orbit")
    if t.positive_edges()[0].group.is_finite() is not False:
        raise HypothesisViolation("expected an infinite edge group")


def first_construction(t: MarkedSplitting, family: Sequence[SubgroupSpec] = (),
                       bound: int = 4000, max_steps: int = 32) -> FirstConstruction:
    """Blow up vertices until each is one-ended rel its incident edge groups.

    Then drop the finite edges and keep the component through the old
    edge together with its stabilizer.
    """
    _require_free(t.base)
    _one_infinite_edge(t)
    b = t.base
    chains = {o: (o, ChainCertificate.reflexive(t.vgroup[o])) for o in t.vertex_names}
    econj = {f.name: b.identity for f in t.positive_edges()}
    cur, blowups = t, []
    for _ in range(max_steps):
        for v in cur.vertex_names:
            gv = cur.vgroup[v]
            if gv.is_trivial():
                continue
            rel = [f.group for f in cur.out_edges(v)] + [h for h in family if gv.contains_subgroup(h)]
            s, res = relative_free_splitting(b, gv, rel, bound, name=f"split {v}")
            if res.status == "none-within-bound":
                raise BudgetExceeded("vertex oracle", f"{v}: {res.reason}", bound)
            if s is None:
                continue
            cur, conj = refine_vertex(cur, v, s)
            for k, g in conj.items():
                if k in econj:
                    econj[k] = b.mul(g, econj[k])
            orig, ch = chains.pop(v)
            for o in s.vertex_names:
                chains[f"{v}.{o}"] = (orig, ch.extend(s, o))
            blowups.append((v, s))
            break
        else:
            break
    else:
        raise BudgetExceeded("first construction", "too many blow-ups", max_steps)
    keep = {f.name for f in cur.positive_edges() if f.group.is_finite() is False}
    e0 = t.positive_edges()[0].name
    sub, where = sub_splitting(cur, keep, cur.edges[e0].source, f"{t.name}^(1)")
    out = {o: (chains[o][0], chains[o][1].conjugated(where[o])) for o in sub.vertex_names}
    for k in econj:
        if k in sub.edges:
            econj[k] = b.mul(where[cur.edges[k].source], econj[k])
    return FirstConstruction(cur, sub, sub.group, out, econj, where, blowups)


def coincidence(t: MarkedSplitting) -> Optional[tuple]:
    """(oriented edge, vertex orbit) where the edge group is the whole vertex group."""
    for f in t.positive_edges():
        for g in (f, t.edges[f.reverse]):
            if t.vgroup[g.source].equals(g.group):
                return g.name, g.source
    return None


@dataclass
class SecondConstruction:
    tree: MarkedSplitting  # t_{i+1}, acting by G_{i+1}
    group: SubgroupSpec
    edge_chain: ChainCertificate  # new edge group strictly below the old one
    cleave: CleaveResult
    measure: tuple  # (old, new) edge group ranks


def second_construction(t: MarkedSplitting, t_f: Optional[MarkedSplitting] = None,
                        max_radius: Optional[int] = None, bound: int = 4000) -> SecondConstruction:
    """Pass to a smaller edge group through one blow-up and a cleave.

    The tree is moved onto a basis of its acting group first, so the
    blow-up runs over a free base of its own.
    """
    _require_free(t.base)
    _one_infinite_edge(t)
    acting = _acting(t)
    rb = rebase(acting)
    inner = map_splitting(t, rb, up=False)
    if inner.group is not None:
        raise AssertionError("rebased tree must act by the whole base")
    if t_f is not None and t_f.base is not rb.inner:
        t_f = map_splitting(t_f, rb, up=False)
    cl = cleave_tree(inner, t_f=t_f, max_radius=max_radius, bound=bound)
    if cl.case == CASE_FINITE:
        raise HypothesisViolation(
            "blow-up has finite edge groups, so a vertex group splits relative to its edges")
    name = sorted(cl.edge_chains)[0]
    f = cl.tree.edges[name]
    sub, where = sub_splitting(cl.tree, {name}, f.source, f"{t.name}'")
    chain = cl.edge_chains[name].conjugated(where[f.source])
    up_tree = map_splitting(sub, rb, up=True)
    up_chain = map_chain(chain, rb)
    e_old = t.positive_edges()[0].group
    # the chain's top is the old edge group read in the rebased coordinates
    if not up_chain.top.equals(e_old):
        raise AssertionError("edge chain does not start at the old edge group")
    measure = (e_old.rank(), up_tree.positive_edges()[0].group.rank())
    return SecondConstruction(up_tree, up_tree.group, up_chain, cl, measure)


# -- Swarup -----------------------------------------------------------------------------------

@dataclass
class SwarupResult:
    kind: str  # "amalgam" | "hnn"
    c1: SubgroupSpec
    below_c: ChainCertificate  # C1 <= C
    side: str  # "A" or "B" (amalgam); vertex orbit of the original tree
    below_side: ChainCertificate  # C1 <= A or C1 <= B (amalgam); C1 a vertex group of Delta (hnn)
    delta: Optional[MarkedSplitting] = None  # hnn: splitting of A rel {C1, t^-1 C1 t}
    delta_vertex: Optional[str] = None
    free_factor: dict = field(default_factory=dict)
    iterations: int = 0
    measures: list = field(default_factory=list)
    rerouted: bool = False

    def check(self) -> CertificateReport:
        rep = CertificateReport(f"swarup ({self.kind})")
        r1 = self.below_c.check("C1 <= C")
        rep.add("C1 <= C chain verifies", bool(r1), "; ".join(r1.failures()))
        rep.add("C1 is the bottom of the C chain", self.below_c.bottom.equals(self.c1))
        r2 = self.below_side.check("C1 <= side")
        rep.add(f"C1 <= {self.side} chain verifies", bool(r2), "; ".join(r2.failures()))
        rep.add(f"C1 is the bottom of the {self.side} chain", self.below_side.bottom.equals(self.c1))
        if self.delta is not None:
            d = self.delta
            rep.add("Delta verifies", bool(d.check()))
            rep.add("Delta has finite edge groups", d.edge_groups_finite())
            rep.add("Delta vertex group is C1 up to the recorded conjugator",
                    d.vgroup[self.delta_vertex].equals(
                        self.c1.conjugate(self.free_factor.get("delta_conj", ()))))
        ff = self.free_factor
        if ff:
            rep.add("Stallings free-factor check", ff.get("ok", False), ff.get("detail", ""))
        ms = [m for m in self.measures]
        rep.add("edge ranks strictly decrease", all(a > c for a, c in ms))
        return rep

    def to_json(self) -> dict:
        b = self.c1.base
        return {"kind": "swarup", "splitting": self.kind, "c1": self.c1.to_json(),
                "side": self.side, "below_c": self.below_c.to_json(),
                "below_side": self.below_side.to_json(),
                "delta": None if self.delta is None else dict(
                    self.delta.to_json(), group=_acting(self.delta).to_json()),
                "delta_vertex": self.delta_vertex,
                "free_factor": {k: (b.format(v) if isinstance(v, tuple) else v)
                                for k, v in self.free_factor.items()},
                "iterations": self.iterations, "measures": [list(m) for m in self.measures],
                "rerouted": self.rerouted}


def stallings_free_factor(h: SubgroupSpec, g: SubgroupSpec, complement: Sequence[SubgroupSpec]) -> dict:
    """Is H a free factor of G with the given complementary factors?

    Checked in a basis of G: the bases of H and of the complements,
    rewritten in it, must form a basis of F_rank(G).
    """
    b = g.base
    gb = SubgroupSpec(b, g.free_basis())
    words = []
    for k in [h] + list(complement):
        for w in k.free_basis():
            m = gb.membership(w)
            if m.status != "yes":
                return {"ok": False, "detail": f"{b.format(w)} is not in G"}
            words.append(fg.reduce_word(m.witness))
    ok = is_basis(len(gb.gens), words)
    return {"ok": ok, "detail": f"{len(words)} words, rank {len(gb.gens)}"}


def _complement(s: MarkedSplitting, vertex: str) -> tuple:
    """H conjugated into the base lift and the other free factors of s."""
    b = s.base
    comp = []
    for o in s.vertex_names:
        grp = s.vgroup[o].conjugate(s.P[o])
        if o == vertex:
            h = grp
        elif not grp.is_trivial():
            comp.append(grp)
    for f in s.positive_edges():
        if f.name not in s.tree_edges:
            comp.append(SubgroupSpec(b, [b.mul(s.P[f.source], f.stable, b.inv(s.P[f.target]))]))
    return h, comp


def _final_free_factor(ch: ChainCertificate, c1: SubgroupSpec) -> dict:
    if not ch.steps:
        return {"ok": True, "detail": "C1 is the vertex group itself"}
    st = ch.steps[-1]
    s = st.splitting
    if any(not f.group.is_trivial() for f in s.positive_edges()):
        return {"ok": False, "detail": "last step is not a free splitting"}
    h, comp = _complement(s, st.vertex)
    out = stallings_free_factor(h, st.group, comp)
    out["detail"] += "; C1 is conjugate to the factor" if c1.equals(ch.bottom) else "; mismatch"
    return out


def _swarup_loop(t: MarkedSplitting, family, t_f, max_iterations, bound, max_radius):
    """Shared loop; returns (t_i, first construction, edge chain, measures, rerouted)."""
    e_top = t.positive_edges()[0].group
    edge_chain = ChainCertificate.reflexive(e_top)
    measures = []
    cur = t
    for i in range(max_iterations):
        fc = first_construction(cur, family, bound)
        hit = coincidence(fc.subtree)
        if hit is not None:
            return cur, fc, hit, edge_chain, measures, i
        sc = second_construction(fc.subtree, t_f, max_radius, bound)
        edge_chain = edge_chain.conjugated(fc.edge_conj[cur.positive_edges()[0].name]).then(
            sc.edge_chain)
        measures.append(sc.measure)
        cur = sc.tree
    raise BudgetExceeded("swarup", "iteration cap reached", max_iterations)


def swarup_amalgam(base, a: SubgroupSpec, b_: SubgroupSpec, c: SubgroupSpec,
                   family: Sequence[SubgroupSpec] = (), t_f: Optional[MarkedSplitting] = None,
                   max_iterations: int = 8, bound: int = 4000,
                   max_radius: Optional[int] = None) -> SwarupResult:
    """Some C1 <= C with C1 <= A or C1 <= B, for G = A *_C B."""
    _require_free(base)
    if c.is_finite() is not False:
        raise HypothesisViolation("the amalgamated subgroup must be infinite")
    t = amalgam(base, a, c, b_, "A*_C B")
    cur, fc, hit, edge_chain, measures, n = _swarup_loop(t, family, t_f, max_iterations, bound,
                                                         max_radius)
    return _result("amalgam", t, cur, fc, hit, edge_chain, measures, n)


def swarup_hnn(base, a: SubgroupSpec, c: SubgroupSpec, stable,
               family: Sequence[SubgroupSpec] = (), t_f: Optional[MarkedSplitting] = None,
               max_iterations: int = 8, bound: int = 4000,
               max_radius: Optional[int] = None) -> SwarupResult:
    """Some C1 <= C and a finite splitting Delta of A rel {C1, t^-1 C1 t}."""
    _require_free(base)
    if c.is_finite() is not False:
        raise HypothesisViolation("the associated subgroup must be infinite")
    t = hnn(base, a, c, stable, "A*_C")
    cur, fc, hit, edge_chain, measures, n = _swarup_loop(t, family, t_f, max_iterations, bound,
                                                         max_radius)
    return _result("hnn", t, cur, fc, hit, edge_chain, measures, n)


def _result(kind, t, cur, fc, hit, edge_chain, measures, n) -> SwarupResult:
    b = t.base
    ename, vertex = hit
    sub = fc.subtree
    c1 = sub.edges[ename].group
    e0 = cur.positive_edges()[0].name
    # C1 inside the current tree's coordinates: the edge conjugator, then the stable if reversed
    g = fc.edge_conj[e0]
    if not sub.edges[ename].positive:
        g = b.mul(b.inv(sub.edges[e0].stable), g)
    below_c = edge_chain.conjugated(g)
    orig, side_chain = fc.chains[vertex]
    rerouted = False
    delta = dvertex = None
    ff = {}
    if n == 0:
        ff = _final_free_factor(side_chain, c1)
    if kind == "hnn":
        rerouted = len(sub.vertex_names) > 1
        delta, dvertex, dconj = _delta(t, fc, vertex)
        ff["delta_conj"] = dconj
    return SwarupResult(kind, c1, below_c, orig, side_chain, delta, dvertex, ff, n, measures,
                        rerouted)


def _delta(t: MarkedSplitting, fc: FirstConstruction, vertex: str) -> tuple:
    """The splitting of A from the blow-ups of its vertex, and C1's vertex in it."""
    b = t.base
    v0 = t.vertex_names[0]
    r = fc.refined
    keep = {f.name for f in r.positive_edges() if f.name.startswith(v0 + ".")}
    root = next(o for o in r.vertex_names if o == v0 or o.startswith(v0 + "."))
    d, where = sub_splitting(r, keep, root, "Delta")
    if not d.group.equals(t.vgroup[v0]):
        raise AssertionError("Delta does not act by A")
    if vertex not in where:
        raise AssertionError("C1's vertex is not in A's blow-up")
    return d, vertex, b.mul(where[vertex], b.inv(fc.where[vertex]))


# -- relative one-endedness ----------------------------------------------------------------------

@dataclass
class TwoEndedGraph:
    """A graph of free groups with infinite cyclic edge groups.

    Vertices are (name, FreeBase); edges (name, source, target, word in
    the source group, word in the target group) identify the two cyclic
    subgroups.
    """

    vertices: list
    edges: list

    def base(self, v: str) -> FreeBase:
        return dict(self.vertices)[v]

    def incident(self, v: str) -> list:
        out = []
        for name, s, t, ws, wt in self.edges:
            if s == v:
                out.append(ws)
            if t == v:
                out.append(wt)
        return out


def double(base: FreeBase, w) -> TwoEndedGraph:
    """Two copies of the base glued along <w>."""
    w = base.from_word(w)
    return TwoEndedGraph([("L", base), ("R", base)], [("w", "L", "R", w, w)])


@dataclass
class OneEndedResult:
    status: str  # "one-ended" | "many-ended" | "unknown"
    vertex: Optional[str] = None
    witness: Optional[MarkedSplitting] = None
    oracle: dict = field(default_factory=dict)  # vertex -> FreeSplittingResult

    def check(self, g: TwoEndedGraph) -> CertificateReport:
        rep = CertificateReport(f"one-ended: {self.status}")
        if self.status == "many-ended":
            s = self.witness
            if s is None or self.vertex not in dict(g.vertices):
                rep.add("witness present", False)
                return rep
            rep.add("witness splitting verifies", bool(s.check()))
            rep.add("witness is essential with finite edge groups", essential_finite(s))
            for w in g.incident(self.vertex):
                rep.add(f"incident {s.base.format(w)} elliptic", bool(s.is_elliptic([w])))
        elif self.status == "one-ended":
            for v, vb in g.vertices:
                # rerun the oracle: a negative answer is only exact through the Whitehead graph
                r = find_free_splitting_rel(vb.rank, [vb.from_word(w) for w in g.incident(v)])
                rep.add(f"{v}: no relative free splitting (exact)", r.status == "none" and r.exact,
                        r.reason)
        else:
            rep.add("answer known", False)
        return rep

    def to_json(self) -> dict:
        return {"kind": "one-ended", "status": self.status, "vertex": self.vertex,
                "witness": None if self.witness is None else self.witness.to_json(),
                "oracle": {v: {"status": r.status, "exact": r.exact, "reason": r.reason}
                           for v, r in sorted(self.oracle.items())}}


def one_ended_rel(g: TwoEndedGraph, family: Sequence = (), oracle: Optional[Callable] = None,
                  bound: int = 4000) -> OneEndedResult:
    """One-ended iff every vertex group is one-ended rel its incident edge groups.

    `family` holds (vertex, word) pairs already intersected with vertex groups.
    """
    oracle = oracle or find_free_splitting_rel
    results = {}
    unknown = False
    for v, vb in g.vertices:
        words = [vb.from_word(w) for w in g.incident(v)]
        if any(not fg.cyclic_reduction(w)[1] for w in words):
            raise HypothesisViolation(f"edge word at {v} is trivial, so the edge is not two-ended")
        words += [vb.from_word(w) for u, w in family if u == v]
        r = oracle(vb.rank, words, bound)
        results[v] = r
        if r.found:
            return OneEndedResult("many-ended", v, _witness(vb, r), results)
        if r.status != "none":
            unknown = True
    return OneEndedResult("unknown" if unknown else "one-ended", oracle=results)


def _witness(vb: FreeBase, r: FreeSplittingResult) -> MarkedSplitting:
    triv = SubgroupSpec(vb, [])
    f1, f2 = r.factors
    if f2:
        return amalgam(vb, SubgroupSpec(vb, list(f1)), triv, SubgroupSpec(vb, list(f2)), "witness")
    return hnn(vb, triv, triv, f1[0], "witness")
