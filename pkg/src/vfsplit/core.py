"""Equivariant square complexes in a product of two Bass-Serre trees.

Product cells are pairs of tree cells.  Kinds: ``v`` (vertex x vertex),
``e1`` (edge x vertex), ``e2`` (vertex x edge), ``sq`` (edge x edge) and
``dg``, the diagonal of a square, which only appears when the two trees
share a collapse (for instance T x T).  A diagonal has sign +1 when it joins
(source, source) to (target, target) and -1 otherwise.

A G-invariant complex is stored by orbit: each orbit is keyed by
``(kind, orbit1, orbit2, r, sign)`` where the representative cell is
``(x1, r . x2)`` with ``x1`` the base cell of ``orbit1`` and ``r`` the
canonical representative of the double coset ``G_x1 r G_x2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import BudgetExceeded, HypothesisViolation
from .tree import MarkedSplitting, TreeCell
from .words import SubgroupSpec, double_coset_rep, intersection, transporter

DIM = {"v": 0, "e1": 1, "e2": 1, "dg": 1, "sq": 2}
KINDS = {("v", "v"): "v", ("e", "v"): "e1", ("v", "e"): "e2", ("e", "e"): "sq"}
SPLIT = {"v": ("v", "v"), "e1": ("e", "v"), "e2": ("v", "e"), "sq": ("e", "e"), "dg": ("e", "e")}


@dataclass(frozen=True, order=True)
class ProductCell:
    kind: str
    c1: TreeCell
    c2: TreeCell
    sign: int = 0

    def cell(self, i: int) -> TreeCell:
        return self.c1 if i == 1 else self.c2


def product(c1: TreeCell, c2: TreeCell, sign: int = 0, diagonal: bool = False) -> ProductCell:
    kind = "dg" if diagonal else KINDS[(c1.kind, c2.kind)]
    return ProductCell(kind, c1, c2, sign if kind == "dg" else 0)


class ProductSpace:
    """The two trees together with orbit canonicalization of product cells."""

    def __init__(self, t1: MarkedSplitting, t2: MarkedSplitting):
        if t1.base is not t2.base:
            raise HypothesisViolation("the two splittings use different base presentations")
        self.t1, self.t2 = t1, t2
        self.base = t1.base

    def tree(self, i: int) -> MarkedSplitting:
        return self.t1 if i == 1 else self.t2

    def act(self, g, c: ProductCell) -> ProductCell:
        return ProductCell(c.kind, self.t1.act(g, c.c1), self.t2.act(g, c.c2), c.sign)

    def key(self, c: ProductCell) -> tuple:
        b = self.base
        w = b.mul(b.inv(c.c1.rep), c.c2.rep)
        r = double_coset_rep(b, self.t1.orbit_group(c.c1), w, self.t2.orbit_group(c.c2))
        return (c.kind, c.c1.orbit, c.c2.orbit, r, c.sign)

    def representative(self, key: tuple) -> ProductCell:
        kind, o1, o2, r, sign = key
        k1, k2 = SPLIT[kind]
        return ProductCell(kind, self.t1.canonical(k1, o1, None), self.t2.canonical(k2, o2, r), sign)

    def translate_to(self, i: int, c: ProductCell) -> ProductCell:
        """The translate of c whose i-th coordinate is the base cell of its orbit."""
        return self.act(self.base.inv(c.cell(i).rep), c)

    def faces(self, c: ProductCell) -> list:
        t1, t2 = self.t1, self.t2
        if c.kind == "v":
            return []
        if c.kind == "e1":
            return [product(v, c.c2) for v in t1.endpoints(c.c1)]
        if c.kind == "e2":
            return [product(c.c1, v) for v in t2.endpoints(c.c2)]
        s1, e1 = t1.endpoints(c.c1)
        s2, e2 = t2.endpoints(c.c2)
        if c.kind == "dg":
            if c.sign > 0:
                return [product(s1, s2), product(e1, e2)]
            return [product(s1, e2), product(e1, s2)]
        return [product(c.c1, s2), product(c.c1, e2), product(s1, c.c2), product(e1, c.c2),
                product(s1, s2), product(s1, e2), product(e1, s2), product(e1, e2)]

    def stabilizer(self, c: ProductCell) -> SubgroupSpec:
        return intersection(self.base, self.t1.stabilizer(c.c1), self.t2.stabilizer(c.c2))

    def transport(self, src: ProductCell, dst: ProductCell):
        """An element g with g . src = dst (the cells must share an orbit)."""
        b = self.base
        g0 = b.mul(dst.c1.rep, b.inv(src.c1.rep))
        stab = self.t1.stabilizer(src.c1)
        a = b.mul(b.inv(g0), dst.c2.rep)
        h = transporter(b, stab, a, src.c2.rep, self.t2.orbit_group(src.c2))
        g = b.mul(g0, h)
        if self.act(g, src) != dst:
            raise AssertionError("transport failed")
        return g

    def gluing(self, c: ProductCell) -> list:
        """Faces of c as (face key, g) with face = g . representative(face key)."""
        out = []
        for f in self.faces(c):
            k = self.key(f)
            out.append((k, self.transport(self.representative(k), f)))
        return out

    def step(self, a: TreeCell, b: TreeCell, i: int, e: TreeCell) -> int:
        """+1 if walking from a to b along edge e follows its orientation."""
        s, _ = self.tree(i).endpoints(e)
        return 1 if s == a else -1

    def diagonal_path(self, x: ProductCell, y: ProductCell) -> list:
        """Cells of a path from vertex x to vertex y, diagonal steps first."""
        v1, f1 = self.t1.geodesic(x.c1, y.c1)
        v2, f2 = self.t2.geodesic(x.c2, y.c2)
        out = [x]
        i = j = 0
        while i < len(f1) or j < len(f2):
            if i < len(f1) and j < len(f2):
                sign = (self.step(v1[i], v1[i + 1], 1, f1[i])
                        * self.step(v2[j], v2[j + 1], 2, f2[j]))
                out.append(product(f1[i], f2[j], sign, diagonal=True))
                i, j = i + 1, j + 1
            elif i < len(f1):
                out.append(product(f1[i], v2[j]))
                i += 1
            else:
                out.append(product(v1[i], f2[j]))
                j += 1
            out.append(product(v1[i], v2[j]))
        return out


def point_path(t: MarkedSplitting, p: TreeCell, q: TreeCell) -> list:
    """Cells met by the geodesic between two points of the subdivided tree.

    Edge cells stand for their midpoints.
    """
    if p == q:
        return [p]
    ps = [p] if p.kind == "v" else list(t.endpoints(p))
    qs = [q] if q.kind == "v" else list(t.endpoints(q))
    best = None
    for a in ps:
        for b in qs:
            d = t.distance(a, b)
            if best is None or d < best[0]:
                best = (d, a, b)
    verts, edges = t.geodesic(best[1], best[2])
    out = list(verts) + list(edges)
    if p.kind == "e":
        out.append(p)
    if q.kind == "e":
        out.append(q)
    return out


def _over_kinds(i: int, k: str) -> tuple:
    if k == "v":
        return ("v", "e2") if i == 1 else ("v", "e1")
    return ("e1", "sq", "dg") if i == 1 else ("e2", "sq", "dg")


class EquivSquareComplex:
    """A G-invariant subcomplex of T1 x T2 stored by orbit representatives."""

    def __init__(self, space: ProductSpace, cells: Optional[dict] = None):
        self.space = space
        self.cells: dict = dict(cells or {})
        self.flags = {"is_core": False, "is_shaved": False, "is_inf_minimal": False}

    def copy(self) -> "EquivSquareComplex":
        z = EquivSquareComplex(self.space, self.cells)
        z.flags = dict(self.flags)
        return z

    # -- membership ---------------------------------------------------------------
    def __contains__(self, c: ProductCell) -> bool:
        return self.space.key(c) in self.cells

    def add(self, c: ProductCell) -> bool:
        k = self.space.key(c)
        if k in self.cells:
            return False
        self.cells[k] = self.space.representative(k)
        for f in self.space.faces(self.cells[k]):
            self.add(f)
        return True

    def keys(self, kind: Optional[str] = None) -> list:
        return sorted(k for k in self.cells if kind is None or k[0] == kind)

    def counts(self) -> dict:
        out = {k: 0 for k in DIM}
        for k in self.cells:
            out[k[0]] += 1
        return out

    def absorb_diagonals(self) -> None:
        for k in self.keys("dg"):
            if ("sq",) + k[1:4] + (0,) in self.cells:
                del self.cells[k]

    # -- fibers --------------------------------------------------------------------
    def over(self, i: int, k: str, orbit: str) -> list:
        """Cells whose i-th coordinate is the base cell of the given orbit."""
        sp = self.space
        out = []
        for key in self.keys():
            c = self.cells[key]
            if c.kind in _over_kinds(i, k) and c.cell(i).orbit == orbit:
                out.append(sp.translate_to(i, c))
        return out

    def _fiber_cell(self, i: int, x: TreeCell, y: TreeCell) -> ProductCell:
        if x.kind == "e" and y.kind == "e":
            return ProductCell("sq", x, y) if i == 1 else ProductCell("sq", y, x)
        return product(x, y) if i == 1 else product(y, x)

    def fiber_points(self, i: int, k: str, orbit: str) -> list:
        j = 3 - i
        pts = []
        for c in self.over(i, k, orbit):
            y = c.cell(j)
            if y.kind == "v" or c.kind == "dg":
                pts.append(y)
        return pts

    def fiber_missing(self, i: int, k: str, orbit: str, radius: Optional[int] = None) -> Optional[list]:
        """Cells needed to make the fiber over the base cell connected.

        None when the fiber is empty.  The fiber is connected iff the
        geodesics from one point to every other orbit representative and to
        its translates by the stabilizer's generators stay inside it.
        """
        sp = self.space
        ti, tj = sp.tree(i), sp.tree(3 - i)
        x = ti.canonical(k, orbit, None)
        pts = self.fiber_points(i, k, orbit)
        if not pts:
            return None
        x0 = pts[0]
        targets = pts[1:] + [tj.act(h, x0) for h in ti.orbit_group(x).gens]
        missing, seen = [], set()
        for q in targets:
            path = point_path(tj, x0, q)
            if radius is not None and len(path) > 2 * radius + 1:
                raise BudgetExceeded("fiber geodesic", f"factor {i} {k} {orbit}", radius)
            if len(path) == 1:
                continue
            for y in path:
                c = self._fiber_cell(i, x, y)
                key = sp.key(c)
                if key not in self.cells and key not in seen:
                    seen.add(key)
                    missing.append(c)
        return missing

    def orbit_cells(self, i: int) -> list:
        t = self.space.tree(i)
        return [("v", o) for o in t.vertex_names] + [("e", f.name) for f in t.positive_edges()]

    def fibers_connected(self) -> tuple:
        """(ok, first failing (factor, kind, orbit) or None)."""
        for i in (1, 2):
            for k, o in self.orbit_cells(i):
                m = self.fiber_missing(i, k, o)
                if m is None or m:
                    return False, (i, k, o)
        return True, None

    def quotient_connected(self) -> bool:
        keys = self.keys()
        if not keys:
            return False
        index = {k: n for n, k in enumerate(keys)}
        parent = list(range(len(keys)))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for k in keys:
            for f in self.space.faces(self.cells[k]):
                fk = self.space.key(f)
                if fk in index:
                    parent[find(index[k])] = find(index[fk])
        return len({find(n) for n in range(len(keys))}) == 1


def build_core(t1: MarkedSplitting, t2: MarkedSplitting, max_rounds: int = 64,
               max_cells: int = 4000, override: bool = False, trace=None,
               max_radius: Optional[int] = None, prune_closure: bool = True) -> EquivSquareComplex:
    """Fold a connected seed until both projections have connected fibers.

    The seed is the orbit of the base vertex pair joined to its translates
    by the base generators along diagonal-first paths.  Each round adds the
    cells on the geodesics missing from some fiber (adding a square folds a
    leaf space).  Diagonals lying in a square are absorbed.  The closure
    can overshoot, so it is then pruned: maximal cell orbits are dropped
    while every fiber stays non-empty and connected.
    """
    if not override:
        _check_core_hypotheses(t1, t2)
    sp = ProductSpace(t1, t2)
    z = EquivSquareComplex(sp)
    x = product(t1.vertex(), t2.vertex())
    z.add(x)
    for s in sp.base.generators():
        for c in sp.diagonal_path(x, sp.act(s, x)):
            z.add(c)
    for rnd in range(max_rounds):
        added = 0
        for i in (1, 2):
            for k, o in z.orbit_cells(i):
                m = z.fiber_missing(i, k, o, max_radius)
                if m is None:
                    raise HypothesisViolation(f"empty fiber over {k} {o} of factor {i}")
                for c in m:
                    if z.add(c):
                        added += 1
                        if trace is not None:
                            trace.append(("fold", i, k, o, sp.key(c)))
        z.absorb_diagonals()
        if len(z.cells) > max_cells:
            raise BudgetExceeded("build_core", f"{len(z.cells)} orbit cells", max_cells)
        if not added:
            if prune_closure:
                prune(z, trace)
                z.flags["is_core"] = True
            return z
    raise BudgetExceeded("build_core", "fold rounds exhausted", max_rounds)


def _face_index(z: EquivSquareComplex) -> dict:
    """key -> set of keys of cells having it as a face."""
    sp = z.space
    up: dict = {k: set() for k in z.cells}
    for k, c in z.cells.items():
        for f in sp.faces(c):
            fk = sp.key(f)
            if fk in up:
                up[fk].add(k)
    return up


def _valid(z: EquivSquareComplex) -> bool:
    for i in (1, 2):
        for k, o in z.orbit_cells(i):
            m = z.fiber_missing(i, k, o)
            if m is None or m:
                return False
    return True


def prune(z: EquivSquareComplex, trace=None) -> None:
    """Greedily drop orbits of maximal cells while fibers stay connected.

    A square may take some of its free faces (and the vertices they
    orphan) with it; this is the inverse of the fold that added it.
    """
    from itertools import combinations
    sp = z.space
    changed = True
    while changed:
        changed = False
        up = _face_index(z)
        order = sorted((k for k in z.cells if not up[k]), key=lambda k: (-DIM[k[0]], k))
        for k in order:
            faces = [sp.key(f) for f in sp.faces(z.cells[k])]
            free = sorted({f for f in faces if DIM[f[0]] == 1 and up.get(f) == {k}})
            options = [()] + [c for n in range(1, len(free) + 1) for c in combinations(free, n)]
            for extra in options:
                gone = {k, *extra}
                trial = {q: c for q, c in z.cells.items() if q not in gone}
                # drop vertices left without any coface, when they were faces of removed cells
                touched = {sp.key(f) for g in gone for f in sp.faces(z.cells[g]) if f.kind == "v"}
                for v in touched:
                    if v in trial and not any(q in trial for q in up[v]):
                        del trial[v]
                cand = EquivSquareComplex(sp, trial)
                if _valid(cand):
                    if trace is not None:
                        trace.append(("prune", sorted(set(z.cells) - set(trial))))
                    z.cells = trial
                    changed = True
                    break
            if changed:
                break


def _check_core_hypotheses(t1: MarkedSplitting, t2: MarkedSplitting) -> None:
    """Accept the diagonal case and the infinite-versus-finite edge group regime."""
    if t1 is t2 or _same_splitting(t1, t2):
        return
    for a, b in ((t1, t2), (t2, t1)):
        if a.edge_groups_infinite() and b.edge_groups_finite():
            return
    if t1.edge_groups_finite() and t2.edge_groups_finite():
        return
    raise HypothesisViolation("cannot certify that the trees have no common collapse; "
                              "pass override=True to proceed")


def _same_splitting(t1: MarkedSplitting, t2: MarkedSplitting) -> bool:
    if t1.n_vertex_orbits() != t2.n_vertex_orbits() or t1.n_edge_orbits() != t2.n_edge_orbits():
        return False
    return all(t2.vgroup.get(o) is not None and t1.vgroup[o].equals(t2.vgroup[o])
               for o in t1.vertex_names)
