"""Graphs of finite groups (Serre convention: oriented edges in reverse pairs).

A `GraphOfGroups` is the quotient data of a cocompact G-tree.  Vertex groups
are finite tables; after `collapse_edges` a vertex may instead carry a marked
subgroup of the ambient group (see `vfsplit.words.SubgroupSpec`).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, replace
from typing import Optional, Sequence

from .finite_groups import (FiniteGroup, GroupError, Morphism, ValidationReport,
                            subgroup_index)


@dataclass(frozen=True)
class Edge:
    name: str
    reverse: str
    source: str
    group: FiniteGroup
    attach: Morphism  # edge group -> source vertex group


@dataclass(frozen=True, eq=False)
class GraphOfGroups:
    vertices: tuple  # ((name, FiniteGroup | None), ...)
    edges: tuple  # (Edge, ...)
    # vertices produced by collapsing infinite pieces: name -> SubgroupSpec
    marked: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "marked", tuple(self.marked))
        object.__setattr__(self, "_vindex", {n: i for i, (n, _) in enumerate(self.vertices)})
        object.__setattr__(self, "_eindex", {e.name: i for i, e in enumerate(self.edges)})

    # -- lookups -----------------------------------------------------------
    @property
    def vertex_names(self) -> list:
        return [n for n, _ in self.vertices]

    def vertex_group(self, v: str) -> Optional[FiniteGroup]:
        return self.vertices[self._vindex[v]][1]

    def marked_group(self, v: str):
        for n, spec in self.marked:
            if n == v:
                return spec
        return None

    def is_finite_vertex(self, v: str) -> bool:
        return self.vertex_group(v) is not None

    def edge(self, name: str) -> Edge:
        try:
            return self.edges[self._eindex[name]]
        except KeyError:
            raise KeyError(f"unknown edge {name!r}") from None

    def has_edge(self, name: str) -> bool:
        return name in self._eindex

    def target(self, e: str) -> str:
        return self.edge(self.edge(e).reverse).source

    def out_edges(self, v: str) -> list:
        return [e for e in self.edges if e.source == v]

    def edge_pairs(self) -> list:
        """One representative per reverse pair, in listing order."""
        seen, out = set(), []
        for e in self.edges:
            if e.name in seen:
                continue
            seen.add(e.name)
            seen.add(e.reverse)
            out.append(e)
        return out

    def is_loop(self, e: str) -> bool:
        return self.edge(e).source == self.target(e)

    def attach_index(self, e: str) -> Optional[int]:
        """[G_source : image of G_e]; None when the source group is infinite."""
        ed = self.edge(e)
        if self.vertex_group(ed.source) is None:
            return None
        return subgroup_index(ed.attach)

    def total_order(self) -> int:
        return (sum(g.order for _, g in self.vertices if g is not None)
                + sum(e.group.order for e in self.edge_pairs()))

    def spanning_tree(self, root: Optional[str] = None) -> frozenset:
        """Names of tree edges (both orientations), BFS in listing order."""
        if not self.vertices:
            return frozenset()
        root = root if root is not None else self.vertices[0][0]
        seen, tree = {root}, set()
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for e in self.out_edges(v):
                w = self.target(e.name)
                if w not in seen:
                    seen.add(w)
                    tree.add(e.name)
                    tree.add(e.reverse)
                    queue.append(w)
        return frozenset(tree)

    def is_connected(self) -> bool:
        if not self.vertices:
            return False
        root = self.vertices[0][0]
        seen = {root}
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for e in self.out_edges(v):
                w = self.target(e.name)
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == len(self.vertices)

    def is_free_base(self) -> bool:
        return not self.marked and all(g is not None and g.order == 1 for _, g in self.vertices)

    def __repr__(self):
        return f"GraphOfGroups(V={len(self.vertices)}, E={len(self.edges) // 2})"


def make_graph(vertices: Sequence, edge_pairs: Sequence) -> GraphOfGroups:
    """Convenience constructor.

    `vertices` is a sequence of (name, FiniteGroup).  Each entry of
    `edge_pairs` is (name, source, target, edge_group, attach_source,
    attach_target) with the attach maps given as Morphisms or index tuples;
    the reverse edge is named ``name^-1``.
    """
    vgroups = dict(vertices)
    edges = []
    for name, s, t, eg, a_s, a_t in edge_pairs:
        if not isinstance(a_s, Morphism):
            a_s = Morphism(eg, vgroups[s], tuple(a_s))
        if not isinstance(a_t, Morphism):
            a_t = Morphism(eg, vgroups[t], tuple(a_t))
        rev = f"{name}^-1"
        edges.append(Edge(name, rev, s, eg, a_s))
        edges.append(Edge(rev, name, t, eg, a_t))
    return GraphOfGroups(tuple(vertices), tuple(edges))


def validate(g: GraphOfGroups) -> ValidationReport:
    names = g.vertex_names
    if len(set(names)) != len(names):
        return ValidationReport(False, "duplicate vertex name")
    if not names:
        return ValidationReport(False, "no vertices")
    enames = [e.name for e in g.edges]
    if len(set(enames)) != len(enames):
        return ValidationReport(False, "duplicate edge name")
    for e in g.edges:
        if e.source not in g._vindex:
            return ValidationReport(False, "edge source is not a vertex", (e.name, e.source))
        if e.reverse == e.name:
            return ValidationReport(False, "edge is its own reverse", (e.name,))
        if e.reverse not in g._eindex:
            return ValidationReport(False, "missing reverse edge", (e.name,))
        r = g.edge(e.reverse)
        if r.reverse != e.name:
            return ValidationReport(False, "reverse is not an involution", (e.name,))
        if r.group != e.group:
            return ValidationReport(False, "edge pair has different groups", (e.name,))
        vg = g.vertex_group(e.source)
        if vg is not None:
            if e.attach.target != vg or e.attach.source != e.group:
                return ValidationReport(False, "attach map has wrong domain/codomain", (e.name,))
            w = e.attach.non_injective_witness()
            if w is not None:
                return ValidationReport(False, "attach map is not injective", (e.name,) + w)
    if not g.is_connected():
        return ValidationReport(False, "not connected")
    return ValidationReport(True)


# -- presentations ----------------------------------------------------------

@dataclass(frozen=True)
class Presentation:
    generators: tuple  # names
    relators: tuple  # tuples of (generator index, +-1)

    def __str__(self):
        def word(r):
            return ".".join(self.generators[i] + ("" if s > 0 else "^-1") for i, s in r) or "1"
        rels = ", ".join(word(r) for r in self.relators)
        return f"< {', '.join(self.generators)} | {rels} >"


def element_token(vertex: str, group: FiniteGroup, x: int) -> str:
    if group.element_names is not None:
        return group.element_names[x]
    return f"{vertex}[{x}]"


def fundamental_presentation(g: GraphOfGroups, tree: Optional[frozenset] = None) -> Presentation:
    """Presentation of pi_1 relative to a spanning tree.

    Generators: non-identity vertex-group elements and one stable letter t_e
    per non-tree edge pair.  Relations: vertex multiplication tables, and
    t_e^-1 . attach_e(c) . t_e = attach_rev(c) for every edge pair (t_e = 1 on
    tree edges).
    """
    if g.marked:
        raise GroupError("presentation needs finite vertex groups")
    tree = g.spanning_tree() if tree is None else frozenset(tree)
    _check_spanning(g, tree)
    gens, index = [], {}
    for v, grp in g.vertices:
        for x in range(1, grp.order):
            index[(v, x)] = len(gens)
            gens.append(element_token(v, grp, x))
    for e in g.edge_pairs():
        if e.name not in tree:
            index[("t", e.name)] = len(gens)
            gens.append(e.name)
    rels = []

    def elt(v, x):
        return [] if x == 0 else [(index[(v, x)], 1)]

    def elt_inv(v, x):
        return [] if x == 0 else [(index[(v, x)], -1)]

    for v, grp in g.vertices:
        for x in range(1, grp.order):
            for y in range(1, grp.order):
                z = grp.mul(x, y)
                rels.append(tuple(elt(v, x) + elt(v, y) + elt_inv(v, z)))
    for e in g.edge_pairs():
        r = g.edge(e.reverse)
        t = g.target(e.name)
        for c in range(1, e.group.order):
            left, right = e.attach(c), r.attach(c)
            if e.name in tree:
                rel = elt_inv(e.source, left) + elt(t, right)
            else:
                s = index[("t", e.name)]
                rel = [(s, -1)] + elt(e.source, left) + [(s, 1)] + elt_inv(t, right)
            rels.append(tuple(rel))
    return Presentation(tuple(gens), tuple(r for r in rels if r))


def _check_spanning(g: GraphOfGroups, tree: frozenset) -> None:
    for name in tree:
        if not g.has_edge(name) or g.edge(name).reverse not in tree:
            raise GroupError("spanning tree must consist of whole edge pairs")
    n_pairs = len(tree) // 2
    if n_pairs != len(g.vertices) - 1:
        raise GroupError("not a spanning tree (wrong size)")
    # connectivity through tree edges
    root = g.vertices[0][0]
    seen = {root}
    stack = [root]
    while stack:
        v = stack.pop()
        for e in g.out_edges(v):
            if e.name in tree:
                w = g.target(e.name)
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
    if len(seen) != len(g.vertices):
        raise GroupError("not a spanning tree (does not reach every vertex)")


# -- reduction and ends -----------------------------------------------------

def _merge_collapse(g: GraphOfGroups, e: str) -> GraphOfGroups:
    """Collapse a non-loop edge whose attach map at its source is bijective.

    The source vertex is absorbed into the target; edges at the source are
    re-attached through attach_rev o attach_e^-1.
    """
    ed = g.edge(e)
    u, v = ed.source, g.target(e)
    rev = g.edge(ed.reverse)
    gv = g.vertex_group(v)
    # iso: G_u -> G_v, x = attach_e(c) |-> attach_rev(c)
    iso = [0] * ed.attach.target.order
    for c in range(ed.group.order):
        iso[ed.attach(c)] = rev.attach(c)
    new_edges = []
    for f in g.edges:
        if f.name in (e, ed.reverse):
            continue
        if f.source == u:
            att = Morphism(f.group, gv, tuple(iso[f.attach(c)] for c in range(f.group.order)))
            f = replace(f, source=v, attach=att)
        new_edges.append(f)
    verts = tuple((n, grp) for n, grp in g.vertices if n != u)
    return GraphOfGroups(verts, tuple(new_edges), g.marked)


def _collapsible_edge(g: GraphOfGroups) -> Optional[str]:
    for e in g.edges:
        if g.is_loop(e.name):
            continue
        if g.vertex_group(e.source) is None or g.vertex_group(g.target(e.name)) is None:
            continue
        if e.attach.is_bijective():
            return e.name
    return None


def reduce(g: GraphOfGroups) -> GraphOfGroups:
    while True:
        e = _collapsible_edge(g)
        if e is None:
            return g
        g = _merge_collapse(g, e)


INFINITE = "infinite"


def ends(g: GraphOfGroups):
    """Number of ends of pi_1(g): 0, 2 or INFINITE."""
    if g.marked or any(grp is None for _, grp in g.vertices):
        raise GroupError("ends() needs finite vertex groups")
    r = reduce(g)
    pairs = r.edge_pairs()
    if not pairs:
        return 0
    if len(pairs) == 1:
        e = pairs[0]
        rev = r.edge(e.reverse)
        if r.is_loop(e.name):
            if e.attach.is_bijective() and rev.attach.is_bijective():
                return 2
        elif subgroup_index(e.attach) == 2 and subgroup_index(rev.attach) == 2:
            return 2
    return INFINITE


def _half_tree_finite(g: GraphOfGroups) -> dict:
    """For every oriented edge f: is the half-tree beyond t(f) finite?

    Least fixpoint of: finite(f) iff every further edge at t(f) leads to a
    finite half-tree.  Marked (infinite) vertices are reached through finite
    edge groups, hence carry infinitely many edges: never finite.
    """
    succ = {}
    for f in g.edges:
        w = g.target(f.name)
        if g.vertex_group(w) is None:
            succ[f.name] = None
            continue
        nxt = []
        for h in g.out_edges(w):
            mult = subgroup_index(h.attach)
            if h.name == f.reverse:
                mult -= 1
            if mult > 0:
                nxt.append(h.name)
        succ[f.name] = nxt
    finite = {f.name: False for f in g.edges}
    changed = True
    while changed:
        changed = False
        for f in g.edges:
            if finite[f.name] or succ[f.name] is None:
                continue
            if all(finite[h] for h in succ[f.name]):
                finite[f.name] = True
                changed = True
    return finite


def is_essential_edge(g: GraphOfGroups, e: str) -> bool:
    ed = g.edge(e)
    finite = _half_tree_finite(g)
    return not finite[e] and not finite[ed.reverse]


def is_essential(g: GraphOfGroups) -> bool:
    finite = _half_tree_finite(g)
    return all(not finite[e.name] for e in g.edges)


def collapse_edges(g: GraphOfGroups, orbit_ids, base=None) -> GraphOfGroups:
    """Collapse whole edge pairs.

    Each connected component of the collapsed subgraph becomes one vertex.
    A component that is a single vertex keeps its group; otherwise the new
    vertex carries the component's fundamental group as a subgroup of the
    ambient group (requires `base`, a `vfsplit.words` base group) and is
    stored in `marked`.
    """
    ids = set(orbit_ids)
    for e in ids:
        if g.edge(e).reverse not in ids:
            raise GroupError(f"edge {e!r} collapsed without its reverse")
    if not ids:
        return g
    comp = {v: v for v in g.vertex_names}

    def find(v):
        while comp[v] != v:
            comp[v] = comp[comp[v]]
            v = comp[v]
        return v

    for e in ids:
        a, b = find(g.edge(e).source), find(g.target(e))
        if a != b:
            comp[max(a, b, key=g.vertex_names.index)] = min(a, b, key=g.vertex_names.index)
    groups = {}
    for v in g.vertex_names:
        groups.setdefault(find(v), []).append(v)
    new_vertices, marked = [], list(g.marked)
    for root in [v for v in g.vertex_names if find(v) == v]:
        members = groups[root]
        inner = [e for e in ids if find(g.edge(e).source) == root]
        if not inner:
            new_vertices.append((root, g.vertex_group(root)))
            continue
        if base is None:
            raise GroupError("collapsing a non-trivial subgraph needs the ambient base group")
        from .words import component_subgroup
        spec = component_subgroup(base, members, inner)
        new_vertices.append((root, None))
        marked.append((root, spec))
    new_edges = []
    for f in g.edges:
        if f.name in ids:
            continue
        src = find(f.source)
        if src != f.source:
            # attach still lands in the original member group, a subgroup of the new vertex
            f = replace(f, source=src)
        new_edges.append(f)
    return GraphOfGroups(tuple(new_vertices), tuple(new_edges), tuple(marked))


def to_dot(g: GraphOfGroups, name: str = "G") -> str:
    lines = [f"graph {name} {{"]
    for v, grp in g.vertices:
        label = f"{v}\\n|G|={grp.order}" if grp is not None else f"{v}\\ninfinite"
        lines.append(f'  "{v}" [label="{label}"];')
    for e in g.edge_pairs():
        lines.append(f'  "{e.source}" -- "{g.target(e.name)}" [label="{e.name} |{e.group.order}|"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
