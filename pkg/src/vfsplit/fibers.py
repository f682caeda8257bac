"""Fibers, leaf spaces, hypercarriers and free faces of a square complex.

Everything here works on the quotient data of an `EquivSquareComplex`.
The fiber over a cell x of T_i is the set of product cells whose i-th
coordinate is x.  Over a vertex its points are vertex cells and its edges
are the j-edges; over an edge (read at its midpoint) its points are
i-edges and diagonals, and its edges are squares.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .certificates import CertificateReport
from .core import EquivSquareComplex, ProductCell, product
from .errors import InputError
from .tree import MarkedSplitting, TreeCell


def point_kinds(i: int, k: str) -> tuple:
    if k == "v":
        return ("v",)
    return ("e1", "dg") if i == 1 else ("e2", "dg")


def edge_kind(i: int, k: str) -> str:
    if k == "v":
        return "e2" if i == 1 else "e1"
    return "sq"


def transverse_kind(i: int) -> str:
    """Kind of the i-transverse edges (they project injectively to T_i)."""
    return "e1" if i == 1 else "e2"


# -- fibers -------------------------------------------------------------------------

@dataclass
class Fiber:
    """The fiber over the base cell of an orbit of T_i, by G_x-orbits."""

    complex: EquivSquareComplex
    factor: int
    kind: str
    orbit: str
    points: list  # keys
    edges: list  # keys

    @property
    def base_cell(self) -> TreeCell:
        return self.complex.space.tree(self.factor).canonical(self.kind, self.orbit, None)

    def is_empty(self) -> bool:
        return not self.points

    def is_connected(self) -> bool:
        m = self.complex.fiber_missing(self.factor, self.kind, self.orbit)
        return m is not None and not m

    def endpoints(self, ekey: tuple) -> tuple:
        """Point keys at the two ends of a fiber edge."""
        sp = self.complex.space
        c = self.complex.cells[ekey]
        j = 3 - self.factor
        other = c.cell(j)
        x = c.cell(self.factor)
        return tuple(sp.key(_point(self.factor, x, y)) for y in sp.tree(j).endpoints(other))

    def degree(self, pkey: tuple) -> int:
        """Upstairs valence of the representative point, capped at 2.

        A point of valence one is the tip of a spur.
        """
        z = self.complex
        sp = z.space
        count = 0
        for ekey in self.edges:
            c = z.cells[ekey]
            for face in sp.faces(c):
                if sp.key(face) != pkey:
                    continue
                same = sp.stabilizer(c).contains_subgroup(sp.stabilizer(face))
                count += 1 if same else 2
                if count >= 2:
                    return 2
        return count

    def spurs(self) -> list:
        """(edge key, tip point key) for every spur orbit."""
        out = []
        for p in self.points:
            if self.degree(p) == 1:
                for e in self.edges:
                    if p in self.endpoints(e):
                        out.append((e, p))
        return out

    def is_minimal(self) -> bool:
        return not self.spurs()

    def splitting(self, name: str = "") -> MarkedSplitting:
        """The fiber as a marked splitting of the stabilizer of its base cell."""
        z = self.complex
        sp = z.space
        b = sp.base
        i = self.factor
        x = self.base_cell
        gx = sp.tree(i).stabilizer(x)
        if not self.points:
            raise InputError("empty fiber")
        reps = {p: sp.translate_to(i, z.cells[p]) for p in self.points}
        names = {p: f"p{n}" for n, p in enumerate(self.points)}
        vertices = [(names[p], sp.stabilizer(reps[p])) for p in self.points]
        edges = []
        for n, e in enumerate(self.edges):
            c = sp.translate_to(i, z.cells[e])
            ends = []
            for y in sp.tree(3 - i).endpoints(c.cell(3 - i)):
                pt = _point(i, x, y)
                pk = sp.key(pt)
                ends.append((pk, sp.transport(reps[pk], pt)))
            (ps, gs), (pt_, gt) = ends
            grp = sp.stabilizer(c).conjugate(b.inv(gs))
            edges.append((f"q{n}", names[ps], names[pt_], grp, b.mul(b.inv(gs), gt)))
        return MarkedSplitting(b, vertices, edges, name or f"fiber {i}:{self.kind}:{self.orbit}",
                               True, gx)


def _point(i: int, x: TreeCell, y: TreeCell) -> ProductCell:
    return product(x, y) if i == 1 else product(y, x)


def _index_one(z: EquivSquareComplex, c: ProductCell, fkey: tuple) -> bool:
    """Whether the face of c in orbit fkey has the same stabilizer as c."""
    sp = z.space
    for face in sp.faces(c):
        if sp.key(face) == fkey:
            return sp.stabilizer(c).contains_subgroup(sp.stabilizer(face))
    raise InputError("not a face")


def fiber(z: EquivSquareComplex, i: int, kind: str, orbit: str) -> Fiber:
    pts, eds = [], []
    ek = edge_kind(i, kind)
    for key, c in sorted(z.cells.items()):
        if c.cell(i).kind != kind[0] or c.cell(i).orbit != orbit:
            continue
        if c.kind in point_kinds(i, kind):
            pts.append(key)
        elif c.kind == ek:
            eds.append(key)
    return Fiber(z, i, kind, orbit, pts, eds)


# -- free faces and hypercarriers ---------------------------------------------------

def cofaces(z: EquivSquareComplex) -> dict:
    """key -> list of coface keys, one entry per face occurrence."""
    sp = z.space
    out: dict = {k: [] for k in z.cells}
    for k, c in z.cells.items():
        for f in sp.faces(c):
            fk = sp.key(f)
            if fk in out:
                out[fk].append(k)
    return out


def is_free_face(z: EquivSquareComplex, square: tuple, face: tuple, up: Optional[dict] = None) -> bool:
    """The face lies in exactly one square upstairs."""
    up = cofaces(z) if up is None else up
    occ = [k for k in up.get(face, []) if k[0] == "sq"]
    return occ == [square] and _index_one(z, z.cells[square], face)


def transverse_free_faces(z: EquivSquareComplex, i: int) -> list:
    """(square key, face key) for each i-transverse free face orbit."""
    up = cofaces(z)
    out = []
    for fk in z.keys(transverse_kind(i)):
        sq = [k for k in up[fk] if k[0] == "sq"]
        if len(sq) == 1 and is_free_face(z, sq[0], fk, up):
            out.append((sq[0], fk))
    return out


@dataclass
class Hypercarrier:
    """Squares meeting the fiber over the midpoint of an edge of T_i."""

    factor: int
    edge_orbit: str
    fiber_points: list
    squares: list
    sides: tuple  # the boundary copies: keys of j-edges at the source and target ends

    def is_product(self, z: EquivSquareComplex) -> bool:
        """Squares match fiber edges and each side is a copy of the fiber."""
        f = fiber(z, self.factor, "e", self.edge_orbit)
        return (sorted(f.edges) == sorted(self.squares)
                and all(len(s) == len(self.squares) for s in self.sides))


def hypercarrier(z: EquivSquareComplex, i: int, edge_orbit: str) -> Hypercarrier:
    f = fiber(z, i, "e", edge_orbit)
    sp = z.space
    sides: tuple = ([], [])
    ti = sp.tree(i)
    for k in f.edges:
        c = z.cells[k]
        s, t = ti.endpoints(c.cell(i))
        for n, v in enumerate((s, t)):
            sides[n].append(sp.key(_point(i, v, c.cell(3 - i))))
    return Hypercarrier(i, edge_orbit, f.points, f.edges, (sorted(sides[0]), sorted(sides[1])))


# -- leaf spaces --------------------------------------------------------------------

@dataclass
class LeafSpace:
    """Quotient of the i-leaf space: G-orbits of components of fibers.

    `nodes` are (kind, orbit, point keys); `edges` join the node over an
    edge orbit to the nodes over its endpoints: (edge node, source node,
    target node, length).
    """

    factor: int
    nodes: list
    edges: list
    node_of: dict = field(default_factory=dict)  # point key -> node index

    def over(self, kind: str, orbit: str) -> list:
        return [n for n, (k, o, _) in enumerate(self.nodes) if k == kind and o == orbit]

    def is_injective(self, z: EquivSquareComplex) -> bool:
        """Projection to T_i is injective: every fiber is connected upstairs."""
        for k, o in z.orbit_cells(self.factor):
            m = z.fiber_missing(self.factor, k, o)
            if m is None or m:
                return False
        return True

    def is_forest(self, z: EquivSquareComplex) -> Optional[bool]:
        """True when certified.

        If every edge fiber is connected, two leaf edges at a leaf vertex
        never cover the same edge of T_i, so the leaf space immerses in a
        tree and is a forest.  Otherwise the check is inconclusive (None).
        """
        for k, o in z.orbit_cells(self.factor):
            if k != "e":
                continue
            m = z.fiber_missing(self.factor, k, o)
            if m:
                return None
        return True

    def to_json(self) -> dict:
        return {"factor": self.factor,
                "nodes": [{"kind": k, "orbit": o, "cells": len(pts)} for k, o, pts in self.nodes],
                "edges": [list(e) for e in self.edges]}


def _components(points: list, links: list) -> list:
    parent = {p: p for p in points}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, c in links:
        if a in parent and c in parent:
            parent[find(a)] = find(c)
    groups: dict = {}
    for p in points:
        groups.setdefault(find(p), []).append(p)
    return sorted(sorted(g) for g in groups.values())


def leaf_space(z: EquivSquareComplex, i: int) -> LeafSpace:
    sp = z.space
    ti = sp.tree(i)
    nodes, node_of = [], {}
    for k, o in z.orbit_cells(i):
        f = fiber(z, i, k, o)
        links = [f.endpoints(e) for e in f.edges]
        for comp in _components(f.points, links):
            for p in comp:
                node_of[p] = len(nodes)
            nodes.append((k, o, comp))
    edges = set()
    for n, (k, o, pts) in enumerate(nodes):
        if k != "e":
            continue
        for p in pts:
            c = z.cells[p]
            ends = []
            s, t = ti.endpoints(c.cell(i))
            for v in (s, t):
                ends.append(node_of.get(_vertex_face(sp, c, i, v)))
            edges.add((n, ends[0], ends[1], 1))
    return LeafSpace(i, nodes, sorted(edges, key=lambda e: tuple(-1 if x is None else x for x in e)),
                     node_of)


def _vertex_face(sp, c: ProductCell, i: int, v: TreeCell) -> Optional[tuple]:
    """Key of the face of a point over an edge that lies over the endpoint v."""
    for f in sp.faces(c):
        if f.kind == "v" and f.cell(i) == v:
            return sp.key(f)
    return None


@dataclass
class LeafMap:
    """Map of quotient leaf nodes induced by an inclusion of complexes."""

    factor: int
    node_map: dict
    ok: bool
    detail: str = ""


def leaf_fold(new: LeafSpace, old: LeafSpace) -> LeafMap:
    """The map new -> old sending a component to the one containing it.

    Verified to be well defined, to cover the same cell of T_i, to carry
    leaf edges to leaf edges and to be surjective.
    """
    m = {}
    for n, (k, o, pts) in enumerate(new.nodes):
        targets = {old.node_of.get(p) for p in pts}
        if len(targets) != 1 or None in targets:
            return LeafMap(new.factor, m, False, f"node {n} is not inside one old node")
        t = targets.pop()
        if old.nodes[t][:2] != (k, o):
            return LeafMap(new.factor, m, False, f"node {n} changes its projection")
        m[n] = t
    old_edges = {(e, s, t) for e, s, t, _ in old.edges}
    for e, s, t, _ in new.edges:
        img = (m[e], m.get(s) if s is not None else None, m.get(t) if t is not None else None)
        if img not in old_edges:
            return LeafMap(new.factor, m, False, f"edge {e} has no image")
    if set(m.values()) != set(range(len(old.nodes))):
        return LeafMap(new.factor, m, False, "fold is not surjective")
    return LeafMap(new.factor, m, True)


def leaf_isomorphic(new: LeafSpace, old: LeafSpace) -> bool:
    lm = leaf_fold(new, old)
    return lm.ok and len(set(lm.node_map.values())) == len(new.nodes) == len(old.nodes) \
        and len(new.edges) == len(old.edges)


# -- certificate --------------------------------------------------------------------

def check_core(z: EquivSquareComplex, family: Optional[list] = None) -> CertificateReport:
    """Finiteness, face closure, connected fibers, stabilizer monotonicity, forests."""
    sp = z.space
    rep = CertificateReport("core")
    rep.add("finite quotient", 0 < len(z.cells) < 10 ** 6, f"{len(z.cells)} orbit cells")
    missing = []
    for k, c in z.cells.items():
        for f in sp.faces(c):
            if sp.key(f) not in z.cells:
                missing.append(k)
    rep.add("closed under faces", not missing, f"{len(missing)} cells with missing faces")
    rep.add("quotient connected", z.quotient_connected())
    ok, bad = z.fibers_connected()
    rep.add("fibers connected", ok, "" if ok else f"failing fiber {bad}")
    mono = True
    for k, c in z.cells.items():
        st = sp.stabilizer(c)
        for f in sp.faces(c):
            if not sp.stabilizer(f).contains_subgroup(st):
                mono = False
    rep.add("stabilizer monotonicity", mono)
    for i in (1, 2):
        ls = leaf_space(z, i)
        rep.add(f"leaf space {i} is a forest", ls.is_forest(z) is True)
        rep.add(f"leaf space {i} projects injectively", ls.is_injective(z))
    for n, h in enumerate(family or []):
        e1 = sp.t1.is_elliptic(h)
        e2 = sp.t2.is_elliptic(h)
        rep.add(f"family member {n} fixes a product vertex", e1.elliptic and e2.elliptic)
    return rep
