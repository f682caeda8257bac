"""Marked splittings of the base group and their Bass-Serre trees.

A splitting is a finite graph whose vertices and oriented edges carry
subgroups of the base group.  Each vertex orbit ``o`` has a representative
vertex ``v_o`` with stabilizer ``G_o``.  Each oriented edge ``f: s -> t`` has
a representative edge cell with source ``v_s`` and target ``t_f . v_t``,
stabilizer ``G_f <= G_s`` and ``t_f^-1 G_f t_f <= G_t``.  The reverse edge
carries ``t_f^-1`` and the conjugated edge group.

Tree geometry comes from splitting paths ``(h0, f1, h1, ..., fk, hk)`` with
value ``h0 t_f1 h1 ... t_fk hk``.  A path without pinches is a geodesic, so
distances and geodesics reduce to Britton reduction over membership tests.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import BudgetExceeded, HypothesisViolation, InputError
from .finite_groups import ValidationReport
from .words import SubgroupSpec, coset_rep, double_coset_rep, free_index, gen_decompose

LOCAL_INDEX_BOUND = 512


@dataclass(frozen=True)
class OrientedEdge:
    name: str
    reverse: str
    source: str
    target: str
    group: SubgroupSpec
    stable: tuple
    positive: bool


@dataclass(frozen=True, order=True)
class TreeCell:
    """Canonical cell ``rep . x_orbit``; edges always use the positive orbit."""

    kind: str  # "v" | "e"
    orbit: str
    rep: tuple

    def to_json(self, base) -> dict:
        return {"kind": "vertex" if self.kind == "v" else "edge",
                "orbit": self.orbit, "rep": base.format(self.rep)}


class MarkedSplitting:
    """A graph of groups marked over the base group.

    `vertices` is a list of (name, SubgroupSpec); `edges` a list of
    (name, source, target, SubgroupSpec inside the source group, stable
    word).  The first vertex is the base orbit.  `group` is the acting
    group; None means the whole base group.
    """

    def __init__(self, base, vertices: Sequence, edges: Sequence = (), name: str = "",
                 check: bool = True, group: Optional[SubgroupSpec] = None):
        self.base = base
        self.name = name
        self.group = group
        self.vertex_names = [v for v, _ in vertices]
        if len(set(self.vertex_names)) != len(self.vertex_names) or not vertices:
            raise InputError("splitting vertex names must be distinct and non-empty")
        self.vgroup = {v: g for v, g in vertices}
        self.edges: dict = {}
        self.edge_order: list = []
        for name_, s, t, grp, stable in edges:
            if s not in self.vgroup or t not in self.vgroup:
                raise InputError(f"edge {name_!r} has an unknown endpoint")
            tw = base.normal_form(base.from_word(stable))
            rname = name_ + "^-1"
            if name_ in self.edges or rname in self.edges:
                raise InputError(f"duplicate edge {name_!r}")
            ti = base.inv(tw)
            self.edges[name_] = OrientedEdge(name_, rname, s, t, grp, tw, True)
            self.edges[rname] = OrientedEdge(rname, name_, t, s, grp.conjugate(ti), ti, False)
            self.edge_order += [name_, rname]
        self.base_orbit = self.vertex_names[0]
        self._cosets: dict = {}
        self._setup_tree()
        self.marking = None
        if check:
            rep = self.check()
            if not rep:
                raise HypothesisViolation(f"invalid splitting {name!r}: {rep.reason}")

    # -- quotient graph -----------------------------------------------------------
    def out_edges(self, o: str) -> list:
        return [self.edges[f] for f in self.edge_order if self.edges[f].source == o]

    def positive_edges(self) -> list:
        return [self.edges[f] for f in self.edge_order if self.edges[f].positive]

    def n_vertex_orbits(self) -> int:
        return len(self.vertex_names)

    def n_edge_orbits(self) -> int:
        return len(self.edge_order) // 2

    def _setup_tree(self) -> None:
        b = self.base
        self.tree_path = {self.base_orbit: []}
        self.P = {self.base_orbit: b.identity}
        queue = deque([self.base_orbit])
        while queue:
            o = queue.popleft()
            for f in self.out_edges(o):
                if f.target not in self.tree_path:
                    self.tree_path[f.target] = self.tree_path[o] + [f.name]
                    self.P[f.target] = b.mul(self.P[o], f.stable)
                    queue.append(f.target)
        if len(self.tree_path) != len(self.vertex_names):
            raise InputError("splitting graph is not connected")
        self.tree_edges = set()
        for p in self.tree_path.values():
            for f in p:
                self.tree_edges.add(f)
                self.tree_edges.add(self.edges[f].reverse)

    def edge_groups_finite(self) -> bool:
        return all(f.group.is_finite() for f in self.positive_edges())

    def edge_groups_infinite(self) -> bool:
        return all(f.group.is_finite() is False for f in self.positive_edges())

    # -- splitting paths ----------------------------------------------------------
    def path_value(self, path: tuple):
        b = self.base
        out = path[0]
        for i in range(1, len(path), 2):
            out = b.mul(out, self.edges[path[i]].stable, path[i + 1])
        return out

    def inverse_path(self, path: tuple) -> tuple:
        b = self.base
        out = [b.inv(path[-1])]
        for i in range(len(path) - 2, 0, -2):
            out += [self.edges[path[i]].reverse, b.inv(path[i - 1])]
        return tuple(out)

    def reduce(self, *paths) -> tuple:
        """Concatenate and remove pinches ``f . h . f^-1`` with h in G_{f^-1}."""
        b = self.base
        st = [b.identity]
        for p in paths:
            st[-1] = b.mul(st[-1], p[0])
            for i in range(1, len(p), 2):
                f = self.edges[p[i]]
                h = st[-1]
                if len(st) > 1 and st[-2] == f.reverse and f.group.contains(h):
                    prev = self.edges[st[-2]]
                    c = b.mul(prev.stable, h, f.stable)
                    del st[-2:]
                    st[-1] = b.mul(st[-1], c)
                else:
                    st += [f.name, b.identity]
                st[-1] = b.mul(st[-1], p[i + 1])
        return tuple(st)

    def tree_walk(self, a: str, c: str) -> tuple:
        """Path along the quotient spanning tree from orbit a to orbit c."""
        b = self.base
        back = [self.edges[f].reverse for f in reversed(self.tree_path[a])]
        out = [b.identity]
        for f in back + self.tree_path[c]:
            out += [f, b.identity]
        return self.reduce(tuple(out))

    def _generator_paths(self) -> list:
        """Paths at the base orbit for the generators of the marking subgroup."""
        out = []
        b = self.base
        for o in self.vertex_names:
            to, back = self.tree_walk(self.base_orbit, o), self.tree_walk(o, self.base_orbit)
            for g in self.vgroup[o].gens:
                out.append(self.reduce(to, (g,), back))
        for f in self.positive_edges():
            if f.name in self.tree_edges:
                continue
            p = self.reduce(self.tree_walk(self.base_orbit, f.source),
                            (b.identity, f.name, b.identity),
                            self.tree_walk(f.target, self.base_orbit))
            out.append(p)
        return out

    def targets(self) -> list:
        """Generators of the acting group, the ones the marking must reach."""
        return list(self.group.gens) if self.group is not None else self.base.generators()

    def compute_marking(self) -> Optional[list]:
        """Express each generator of the acting group as a splitting path, or None."""
        b = self.base
        gpaths = self._generator_paths()
        gvals = [self.path_value(p) for p in gpaths]
        spec = SubgroupSpec(b, gvals)
        if self.group is not None and not self.group.contains_subgroup(spec):
            return None
        marking = []
        for x in self.targets():
            m = spec.membership(x)
            if m.status == "unknown":
                raise BudgetExceeded("marking", f"generator {b.format(x)}", spec.budget)
            if m.status == "no":
                return None
            parts = [gpaths[abs(i) - 1] if i > 0 else self.inverse_path(gpaths[abs(i) - 1])
                     for i in m.witness]
            marking.append(self.reduce((b.identity,), *parts))
        return marking

    def check(self) -> ValidationReport:
        b = self.base
        for f in self.positive_edges():
            if not self.vgroup[f.source].contains_subgroup(f.group):
                return ValidationReport(False, f"edge group of {f.name} not in source group", (f.name,))
            rev = self.edges[f.reverse]
            if not self.vgroup[f.target].contains_subgroup(rev.group):
                return ValidationReport(False, f"edge group of {f.name} not in target group", (f.name,))
        marking = self.compute_marking()
        if marking is None:
            return ValidationReport(False, "splitting does not generate the acting group")
        for x, p in zip(self.targets(), marking):
            if self.path_value(p) != x:
                return ValidationReport(False, "marking certificate does not evaluate", (b.format(x),))
        self.marking = marking
        return ValidationReport(True)

    def path_of(self, g) -> tuple:
        """Reduced splitting path at the base orbit from v_0 to g . v_0."""
        b = self.base
        g = b.normal_form(b.from_word(g))
        if self.marking is None:
            self.marking = self.compute_marking()
        gens_paths = self.marking
        if self.group is None:
            expr = gen_decompose(b, g)
        else:
            m = self.group.membership(g)
            if m.status != "yes":
                raise InputError(f"{b.format(g)} is not in the acting group")
            expr = [(abs(i) - 1, 1 if i > 0 else -1) for i in m.witness]
        parts = []
        for i, s in expr:
            parts.append(gens_paths[i] if s > 0 else self.inverse_path(gens_paths[i]))
        return self.reduce((b.identity,), *parts)

    # -- cells and the action -----------------------------------------------------
    def vertex(self, orbit: Optional[str] = None, rep=None) -> TreeCell:
        b = self.base
        orbit = orbit or self.base_orbit
        rep = b.identity if rep is None else b.from_word(rep)
        return TreeCell("v", orbit, coset_rep(b, rep, self.vgroup[orbit]))

    def edge(self, orbit: str, rep=None) -> TreeCell:
        """Cell ``rep . e_orbit``, stored under the positive orientation."""
        b = self.base
        rep = b.identity if rep is None else b.from_word(rep)
        f = self.edges[orbit]
        if not f.positive:
            rep, f = b.mul(rep, f.stable), self.edges[f.reverse]
        return TreeCell("e", f.name, coset_rep(b, rep, f.group))

    def canonical(self, kind: str, orbit: str, rep) -> TreeCell:
        return self.vertex(orbit, rep) if kind == "v" else self.edge(orbit, rep)

    def act(self, g, c: TreeCell) -> TreeCell:
        b = self.base
        return self.canonical(c.kind, c.orbit, b.mul(b.from_word(g), c.rep))

    def orbit_group(self, c: TreeCell) -> SubgroupSpec:
        return self.vgroup[c.orbit] if c.kind == "v" else self.edges[c.orbit].group

    def stabilizer(self, c: TreeCell) -> SubgroupSpec:
        return self.orbit_group(c).conjugate(c.rep)

    def endpoints(self, c: TreeCell) -> tuple:
        f = self.edges[c.orbit]
        return (self.vertex(f.source, c.rep),
                self.vertex(f.target, self.base.mul(c.rep, f.stable)))

    # -- geodesics ----------------------------------------------------------------
    def connecting_path(self, x: TreeCell, y: TreeCell) -> tuple:
        """Reduced path from orbit x to orbit y with value x.rep^-1 y.rep."""
        b = self.base
        w = b.mul(self.P[x.orbit], b.inv(x.rep), y.rep, b.inv(self.P[y.orbit]))
        return self.reduce(self.tree_walk(x.orbit, self.base_orbit), self.path_of(w),
                           self.tree_walk(self.base_orbit, y.orbit))

    def geodesic(self, x: TreeCell, y: TreeCell) -> tuple:
        """(vertex cells, edge cells) along the geodesic from x to y."""
        b = self.base
        p = self.connecting_path(x, y)
        verts, edges = [x], []
        cur, orbit = x.rep, x.orbit
        for i in range(1, len(p), 2):
            cur = b.mul(cur, p[i - 1])
            f = self.edges[p[i]]
            edges.append(self.edge(f.name, cur))
            cur = b.mul(cur, f.stable)
            orbit = f.target
            verts.append(self.vertex(orbit, cur))
        return verts, edges

    def distance(self, x: TreeCell, y: TreeCell) -> int:
        return (len(self.connecting_path(x, y)) - 1) // 2

    def translation_length(self, g) -> int:
        b = self.base
        g = b.from_word(g)
        d1 = (len(self.path_of(g)) - 1) // 2
        d2 = (len(self.path_of(b.mul(g, g))) - 1) // 2
        return max(0, d2 - d1)

    def axis_point(self, g) -> TreeCell:
        """A vertex on the axis of a hyperbolic g (or fixed by an elliptic g)."""
        v = self.vertex()
        gv = self.act(g, v)
        verts, _ = self.geodesic(v, gv)
        d = len(verts) - 1
        delta = (d - self.translation_length(g)) // 2
        return verts[delta]

    # -- ellipticity ----------------------------------------------------------------
    def is_elliptic(self, h) -> "Ellipticity":
        """Fixed vertex of a finitely generated subgroup, or a hyperbolic witness.

        A finitely generated group fixes a vertex iff every generator and
        every product of two generators is elliptic.  The fixed vertex
        nearest to the base vertex is the farthest of the projections of the
        base vertex onto the generators' fixed trees.
        """
        b = self.base
        gens = [g for g in (h.gens if isinstance(h, SubgroupSpec) else h) if g != b.identity]
        for g in gens:
            if self.translation_length(g) > 0:
                return Ellipticity(False, witness=g)
        for i, g in enumerate(gens):
            for k in gens[i + 1:]:
                for x in (b.mul(g, k), b.mul(g, b.inv(k))):
                    if self.translation_length(x) > 0:
                        return Ellipticity(False, witness=x)
        v = self.vertex()
        best, bd = v, 0
        for g in gens:
            q = self.axis_point(g)
            d = self.distance(v, q)
            if d > bd:
                best, bd = q, d
        for g in gens:
            if self.act(g, best) != best:
                raise AssertionError("fixed point projection failed")
        return Ellipticity(True, vertex=best)

    # -- local structure and balls ------------------------------------------------
    def local_cosets(self, f: str) -> list:
        """Left coset representatives of G_f in G_source(f)."""
        if f in self._cosets:
            return self._cosets[f]
        b = self.base
        e = self.edges[f]
        gv = self.vgroup[e.source]
        if b.is_free and free_index(b, e.group, gv) is None:
            raise InputError(f"infinite local index at edge orbit {f!r}")
        reps = [b.identity]
        queue = deque(reps)
        steps = [g for x in gv.gens for g in (x, b.inv(x))]
        while queue:
            r = queue.popleft()
            for g in steps:
                x = b.mul(r, g)
                if any(e.group.contains(b.mul(b.inv(q), x)) for q in reps):
                    continue
                reps.append(x)
                queue.append(x)
                if len(reps) > LOCAL_INDEX_BOUND:
                    raise InputError(f"local index above {LOCAL_INDEX_BOUND} at edge orbit {f!r}")
        self._cosets[f] = reps
        return reps

    def degree(self, o: str) -> int:
        return sum(len(self.local_cosets(f.name)) for f in self.out_edges(o))

    def neighbours(self, x: TreeCell) -> list:
        """(edge cell, adjacent vertex) pairs around a vertex cell."""
        b = self.base
        out = []
        for f in self.out_edges(x.orbit):
            for h in self.local_cosets(f.name):
                w = b.mul(x.rep, h)
                out.append((self.edge(f.name, w), self.vertex(f.target, b.mul(w, f.stable))))
        return out

    def expand_ball(self, center: Optional[TreeCell] = None, radius: int = 1) -> "FiniteTree":
        center = center or self.vertex()
        if center.kind != "v":
            raise InputError("balls are centred at vertex cells")
        dist = {center: 0}
        edges = {}
        queue = deque([center])
        while queue:
            x = queue.popleft()
            if dist[x] == radius:
                continue
            for e, y in self.neighbours(x):
                if y not in dist:
                    dist[y] = dist[x] + 1
                    queue.append(y)
                edges[e] = self.endpoints(e)
        return FiniteTree(self, dist, edges)

    def hairs(self) -> list:
        """Vertex orbits of valence one: a single out-edge with G_f = G_o."""
        out = []
        for o in self.vertex_names:
            fs = self.out_edges(o)
            if len(fs) == 1 and fs[0].group.contains_subgroup(self.vgroup[o]):
                out.append(o)
        return out

    def is_minimal(self) -> bool:
        return not self.hairs()

    # -- minimal subtrees -----------------------------------------------------------
    def minimal_subtree(self, h: SubgroupSpec) -> "MinimalSubtree":
        ell = self.is_elliptic(h)
        if ell.elliptic:
            return MinimalSubtree(self, h, True, [ell.vertex], [], True)
        y = self.axis_point(ell.witness)
        b = self.base
        vs, es = {y}, set()
        for g in h.gens:
            for x in (g, b.inv(g)):
                pv, pe = self.geodesic(y, self.act(x, y))
                vs.update(pv)
                es.update(pe)
        # spur-free certificate: every vertex of K has two incident edges
        # among translates of K by short words in the generators
        steps = [x for g in h.gens for x in (g, b.inv(g))]
        near, words = set(es), [b.identity]
        spur_free = False
        for _ in range(3):
            words = [b.mul(w, x) for w in words for x in steps]
            for w in words:
                near.update(self.act(w, e) for e in es)
            ends = {}
            for e in near:
                for v in self.endpoints(e):
                    ends[v] = ends.get(v, 0) + 1
            if all(ends.get(v, 0) >= 2 for v in vs):
                spur_free = True
                break
        return MinimalSubtree(self, h, False, sorted(vs), sorted(es), spur_free)

    # -- export -----------------------------------------------------------------------
    def to_json(self) -> dict:
        b = self.base
        return {
            "vertices": [{"name": v, "group": self.vgroup[v].to_json()} for v in self.vertex_names],
            "edges": [{"name": f.name, "source": f.source, "target": f.target,
                       "group": f.group.to_json(), "stable": b.format(f.stable)}
                      for f in self.positive_edges()],
        }

    def to_dot(self) -> str:
        lines = [f'graph "{self.name or "splitting"}" {{']
        for v in self.vertex_names:
            lines.append(f'  "{v}" [label="{v}: {self.vgroup[v]}"];')
        for f in self.positive_edges():
            lines.append(f'  "{f.source}" -- "{f.target}" [label="{f.name}: {f.group}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return f"MarkedSplitting({self.name!r}, V={self.n_vertex_orbits()}, E={self.n_edge_orbits()})"


@dataclass(frozen=True)
class Ellipticity:
    elliptic: bool
    vertex: Optional[TreeCell] = None
    witness: Optional[tuple] = None

    def __bool__(self) -> bool:
        return self.elliptic


@dataclass
class FiniteTree:
    splitting: MarkedSplitting
    dist: dict  # vertex cell -> distance from the centre
    edges: dict  # edge cell -> (endpoint, endpoint)

    @property
    def vertices(self) -> list:
        return sorted(self.dist)

    def degree(self, v: TreeCell) -> int:
        return sum(1 for a, c in self.edges.values() if v in (a, c))

    def is_tree(self) -> bool:
        return len(self.edges) == len(self.dist) - 1

    def restrict(self, radius: int) -> "FiniteTree":
        d = {v: r for v, r in self.dist.items() if r <= radius}
        e = {c: ends for c, ends in self.edges.items() if ends[0] in d and ends[1] in d}
        return FiniteTree(self.splitting, d, e)

    def to_json(self) -> dict:
        b = self.splitting.base
        return {"vertices": [dict(v.to_json(b), dist=self.dist[v]) for v in self.vertices],
                "edges": [c.to_json(b) for c in sorted(self.edges)]}

    def to_dot(self) -> str:
        b = self.splitting.base
        ids = {v: i for i, v in enumerate(self.vertices)}
        lines = ["graph ball {"]
        for v, i in ids.items():
            lines.append(f'  n{i} [label="{v.orbit}:{b.format(v.rep)}"];')
        for c in sorted(self.edges):
            x, y = self.edges[c]
            lines.append(f'  n{ids[x]} -- n{ids[y]} [label="{c.orbit}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass
class MinimalSubtree:
    splitting: MarkedSplitting
    group: SubgroupSpec
    elliptic: bool
    vertices: list
    edges: list
    spur_free: bool

    def quotient_counts(self) -> tuple:
        """(vertex orbits, edge orbits) of the group acting on the subtree."""
        s, b, h = self.splitting, self.splitting.base, self.group
        vs = {(c.orbit, double_coset_rep(b, h, c.rep, s.vgroup[c.orbit])) for c in self.vertices}
        es = {(c.orbit, double_coset_rep(b, h, c.rep, s.edges[c.orbit].group)) for c in self.edges}
        return len(vs), len(es)


def base_splitting(base, name: str = "base") -> MarkedSplitting:
    """The splitting of the base group given by its own presentation."""
    g = base.graph

    def loop(v, items):
        path = [("e", f) for f in base.tree_path[v]] + items
        return base.from_path(path + [("e", f) for f in base._between(v, base.base_vertex)])

    vertices = []
    for v, grp in g.vertices:
        gens = [loop(v, [("v", v, x)]) for x in range(1, grp.order)]
        vertices.append((v, SubgroupSpec(base, gens)))
    edges = []
    for e in g.edge_pairs():
        s, t = e.source, g.target(e.name)
        grp = g.vertex_group(s)
        gens = [loop(s, [("v", s, e.attach(c))]) for c in range(1, e.group.order)]
        path = ([("e", f) for f in base.tree_path[s]] + [("e", e.name)]
                + [("e", f) for f in base._between(t, base.base_vertex)])
        stable = base.mul(base.from_path(path), base.inv(loop(t, [])))
        edges.append((e.name, s, t, SubgroupSpec(base, gens), stable))
    return MarkedSplitting(base, vertices, edges, name)


def amalgam(base, a: SubgroupSpec, c: SubgroupSpec, b: SubgroupSpec, name: str = "",
            check: bool = True) -> MarkedSplitting:
    """The splitting A *_C B with vertex orbits "A" and "B"."""
    return MarkedSplitting(base, [("A", a), ("B", b)], [("e", "A", "B", c, base.identity)],
                           name, check)


def hnn(base, a: SubgroupSpec, c: SubgroupSpec, t, name: str = "",
        check: bool = True) -> MarkedSplitting:
    """The splitting A *_C with stable letter t: C <= A and t^-1 C t <= A."""
    return MarkedSplitting(base, [("A", a)], [("e", "A", "A", c, t)], name, check)


def wedge(base, name: str = "wedge") -> MarkedSplitting:
    """Free splitting of a free base: one trivial vertex, a loop per letter."""
    triv = SubgroupSpec(base, [])
    return MarkedSplitting(base, [("o", triv)],
                           [(f"t{i}", "o", "o", triv, x) for i, x in enumerate(base.generators())],
                           name)


def collapse(t: MarkedSplitting, crush: Sequence[str], name: str = "",
             check: bool = True) -> tuple:
    """Equivariantly collapse the given edge orbits to points.

    Returns the new splitting and a map from old vertex orbits to
    (new vertex orbit, element g_o) such that the old representative
    vertex g_o . v_o lies in the new representative vertex.
    """
    b = t.base
    crush = {t.edges[f].name for f in crush} | {t.edges[f].reverse for f in crush}
    where: dict = {}
    comps = []
    for root in t.vertex_names:
        if root in where:
            continue
        comp = root
        where[root] = (comp, b.identity)
        members, tree, queue = [root], set(), deque([root])
        while queue:
            o = queue.popleft()
            for f in t.out_edges(o):
                if f.name not in crush or f.target in where:
                    continue
                where[f.target] = (comp, b.mul(where[o][1], f.stable))
                tree |= {f.name, f.reverse}
                members.append(f.target)
                queue.append(f.target)
        comps.append((comp, members, tree))
    vertices = []
    for comp, members, tree in comps:
        gens = []
        for o in members:
            g = where[o][1]
            gens += [b.conj(g, x) for x in t.vgroup[o].gens]
        for f in t.positive_edges():
            if f.name in crush and f.name not in tree and f.source in members:
                gens.append(b.mul(where[f.source][1], f.stable, b.inv(where[f.target][1])))
        label = "+".join(members)
        vertices.append((label, SubgroupSpec(b, [x for x in gens if x != b.identity])))
    labels = {comp: lab for (comp, _, _), (lab, _) in zip(comps, vertices)}
    edges = []
    for f in t.positive_edges():
        if f.name in crush:
            continue
        cs, gs = where[f.source]
        ct, gt = where[f.target]
        edges.append((f.name, labels[cs], labels[ct], f.group.conjugate(gs),
                      b.mul(gs, f.stable, b.inv(gt))))
    vmap = {o: (labels[c], g) for o, (c, g) in where.items()}
    return MarkedSplitting(b, vertices, edges, name or t.name, check, t.group), vmap
