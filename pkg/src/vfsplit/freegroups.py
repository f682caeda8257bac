"""Reduced words in a free group and Stallings folded graphs.

Letters are non-zero ints: generator k is ``k`` (1-based), its inverse ``-k``.
Shortlex order uses a < A < b < B < ...

Folded graphs carry optional edge weights, words in the subgroup's own
generators, maintained by gauge transformations during folding.  Reading a
word around a loop at the base then yields an explicit product expression.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Optional, Sequence

Word = tuple


def reduce_word(seq: Iterable[int]) -> Word:
    out: list = []
    for x in seq:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def inverse(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def mul(*ws: Sequence[int]) -> Word:
    out: list = []
    for w in ws:
        for x in w:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
    return tuple(out)


def power(w: Sequence[int], n: int) -> Word:
    if n < 0:
        w, n = inverse(w), -n
    return mul(*([w] * n))


def letter_key(x: int) -> tuple:
    return (abs(x), x < 0)


def shortlex_key(w: Sequence[int]) -> tuple:
    return (len(w), tuple(letter_key(x) for x in w))


def cyclic_reduction(w: Sequence[int]) -> tuple:
    """Return (u, c) with w = u c u^-1 and c cyclically reduced."""
    w = reduce_word(w)
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    return w[:i], w[i:j + 1]


def letters(rank: int) -> list:
    out = []
    for k in range(1, rank + 1):
        out += [k, -k]
    return out


def is_proper_power(w: Sequence[int]) -> bool:
    _, c = cyclic_reduction(w)
    n = len(c)
    for d in range(1, n):
        if n % d == 0 and c[:d] * (n // d) == tuple(c):
            return True
    return False


class FoldedGraph:
    """A folded (deterministic) labelled graph with a base vertex.

    Built from subgroup generators; vertex 0 is the base.  `adj[v]` maps a
    letter to (target, weight); weights are None unless tracked.
    """

    def __init__(self, gens: Sequence[Word] = (), track: bool = True, _empty: bool = False):
        self.track = track
        self.gens = tuple(reduce_word(g) for g in gens)
        if _empty:
            return
        b = _Builder(track)
        base = b.new_vertex()
        for i, g in enumerate(self.gens):
            if g:
                b.add_path(base, g, base, (i + 1,) if track else None)
        self.marks = {"base": base}
        b.fold(self.marks)
        self.adj, remap = b.export(self.marks["base"])
        self.base = 0

    # -- reading -------------------------------------------------------------
    def read(self, w: Sequence[int], start: Optional[int] = None):
        """Follow w from `start`; return (vertex, letters read, weight)."""
        v = self.base if start is None else start
        weight: list = []
        for i, x in enumerate(w):
            nxt = self.adj[v].get(x)
            if nxt is None:
                return v, i, tuple(weight)
            v, wt = nxt
            if self.track:
                weight = list(mul(weight, wt))
        return v, len(w), tuple(weight)

    def contains(self, w: Sequence[int]) -> bool:
        w = reduce_word(w)
        v, n, _ = self.read(w)
        return n == len(w) and v == self.base

    def witness(self, w: Sequence[int]) -> Optional[Word]:
        """Product expression (word in generator indices, 1-based) or None."""
        w = reduce_word(w)
        v, n, wt = self.read(w)
        if n != len(w) or v != self.base:
            return None
        return reduce_word(wt)

    # -- structure -----------------------------------------------------------
    @property
    def n_vertices(self) -> int:
        return len(self.adj)

    def n_edges(self) -> int:
        return sum(len(d) for d in self.adj) // 2

    def rank(self) -> int:
        return self.n_edges() - self.n_vertices + 1

    def shortlex_paths(self, start: Optional[int] = None) -> dict:
        start = self.base if start is None else start
        paths = {start: ()}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for x in sorted(self.adj[v], key=letter_key):
                u = self.adj[v][x][0]
                if u not in paths:
                    paths[u] = paths[v] + (x,)
                    queue.append(u)
        return paths

    def basis(self) -> list:
        """Free basis read off a shortlex BFS spanning tree (deterministic)."""
        paths = self.shortlex_paths()
        tree = set()
        for v, p in paths.items():
            if p:
                u = self.read(p[:-1])[0]
                tree.add((u, p[-1]))
                tree.add((v, -p[-1]))
        out = []
        for v in sorted(paths, key=lambda q: shortlex_key(paths[q])):
            for x in sorted(self.adj[v], key=letter_key):
                if x < 0:
                    continue
                if (v, x) in tree:
                    continue
                u = self.adj[v][x][0]
                out.append(mul(paths[v], (x,), inverse(paths[u])))
        return out

    def coset_rep(self, w: Sequence[int]) -> Word:
        """Shortlex-least element of the right coset H w."""
        w = reduce_word(w)
        v, n, _ = self.read(w)
        return mul(self.shortlex_paths()[v], w[n:])

    def is_finite_index(self, rank_letters: int) -> bool:
        return all(len(d) == 2 * rank_letters for d in self.adj)


class _Builder:
    """Mutable graph used while folding."""

    def __init__(self, track: bool):
        self.track = track
        self.edges: dict = {}  # eid -> [u, x(>0), v, weight]
        self.inc: dict = {}  # vertex -> set of eids
        self.nv = 0
        self.ne = 0

    def new_vertex(self) -> int:
        v = self.nv
        self.nv += 1
        self.inc[v] = set()
        return v

    def add_edge(self, u: int, x: int, v: int, wt) -> None:
        if x < 0:
            u, x, v = v, -x, u
            wt = inverse(wt) if wt is not None else None
        eid = self.ne
        self.ne += 1
        self.edges[eid] = [u, x, v, wt if wt is not None else ()]
        self.inc[u].add(eid)
        self.inc[v].add(eid)

    def add_path(self, u: int, w: Sequence[int], v: int, wt) -> None:
        cur = u
        for i, x in enumerate(w):
            nxt = v if i == len(w) - 1 else self.new_vertex()
            self.add_edge(cur, x, nxt, wt if (i == len(w) - 1) else ())
            cur = nxt

    def halves(self, z: int):
        for eid in self.inc[z]:
            u, x, v, wt = self.edges[eid]
            if u == z:
                yield x, v, wt, eid
            if v == z:
                yield -x, u, inverse(wt), eid

    def gauge(self, q: int, g: Word) -> None:
        if not g:
            return
        gi = inverse(g)
        for eid in self.inc[q]:
            e = self.edges[eid]
            wt = e[3]
            if e[0] == q:
                wt = mul(g, wt)
            if e[2] == q:
                wt = mul(wt, gi)
            e[3] = wt

    def fold(self, marks: dict) -> None:
        protected = set(marks.values())
        work = deque(range(self.nv))
        while work:
            z = work.popleft()
            if z not in self.inc:
                continue
            seen = {}
            clash = None
            for x, t, wt, eid in self.halves(z):
                if x in seen and seen[x][2] != eid:
                    clash = (seen[x], (t, wt, eid))
                    break
                seen[x] = (t, wt, eid)
            if clash is None:
                continue
            (p1, a, e1), (p2, b, e2) = clash
            if p1 == p2:
                self._drop(e2)
            else:
                keep, gone, wk, wg = p1, p2, a, b
                if gone in protected and keep not in protected:
                    keep, gone, wk, wg = p2, p1, b, a
                elif gone in protected and keep in protected:
                    # two marked vertices become one: remap the mark
                    for k, m in marks.items():
                        if m == gone:
                            marks[k] = keep
                    protected = set(marks.values())
                if self.track:
                    self.gauge(gone, mul(inverse(wk), wg))
                self._merge(gone, keep)
                work.append(keep)
            work.append(z)

    def _drop(self, eid: int) -> None:
        u, _, v, _ = self.edges.pop(eid)
        self.inc[u].discard(eid)
        self.inc[v].discard(eid)

    def _merge(self, gone: int, keep: int) -> None:
        for eid in list(self.inc[gone]):
            e = self.edges[eid]
            if e[0] == gone:
                e[0] = keep
            if e[2] == gone:
                e[2] = keep
            self.inc[keep].add(eid)
        del self.inc[gone]

    def export(self, base: int):
        order = [base] + sorted(v for v in self.inc if v != base)
        remap = {v: i for i, v in enumerate(order)}
        adj = [dict() for _ in order]
        for u, x, v, wt in self.edges.values():
            w = wt if self.track else None
            adj[remap[u]][x] = (remap[v], w)
            adj[remap[v]][-x] = (remap[u], inverse(wt) if self.track else None)
        return adj, remap


def _graph_from_adj(adj: list, base: int, track: bool = False) -> FoldedGraph:
    g = FoldedGraph(track=track, _empty=True)
    g.adj = adj
    g.base = base
    return g


class _DoubleCosetAutomaton:
    """Automaton for H w K whose accepted reduced words are exactly H w K.

    States are the vertices of the folded graphs of H and K plus the inner
    vertices of a one-way arc spelling w.  Benois saturation adds an empty
    move p -> r whenever p -a-> q -a^-1-> r, so reduced words are accepted
    iff they represent elements of the double coset.
    """

    def __init__(self, h: Sequence[Word], w: Sequence[int], k: Sequence[Word]):
        gh = FoldedGraph(h, track=False)
        gk = FoldedGraph(k, track=False)
        w = reduce_word(w)
        trans: list = []
        for v, d in enumerate(gh.adj):
            for x, (u, _) in d.items():
                trans.append((("h", v), x, ("h", u)))
        for v, d in enumerate(gk.adj):
            for x, (u, _) in d.items():
                trans.append((("k", v), x, ("k", u)))
        self.start, self.final = ("h", gh.base), ("k", gk.base)
        eps = set()
        if w:
            path = [self.start] + [("a", i) for i in range(1, len(w))] + [self.final]
            for i, x in enumerate(w):
                trans.append((path[i], x, path[i + 1]))
        else:
            eps.add((self.start, self.final))
        self.out: dict = {self.start: [], self.final: []}
        for p, x, q in trans:
            self.out.setdefault(p, []).append((x, q))
            self.out.setdefault(q, [])
        self.closure = self._saturate(eps)

    def _close(self, eps: set) -> dict:
        nxt: dict = {p: {p} for p in self.out}
        for p, r in eps:
            nxt[p].add(r)
        changed = True
        while changed:
            changed = False
            for p in nxt:
                grow = set().union(*(nxt[q] for q in nxt[p]))
                if not grow <= nxt[p]:
                    nxt[p] |= grow
                    changed = True
        return nxt

    def _saturate(self, eps: set) -> dict:
        while True:
            clo = self._close(eps)
            new = set()
            for p in self.out:
                for p1 in clo[p]:
                    for x, q in self.out[p1]:
                        for q1 in clo[q]:
                            for y, r in self.out[q1]:
                                if y == -x and r not in clo[p]:
                                    new.add((p, r))
            if not new:
                return clo
            eps |= new

    def _moves(self, state):
        s, last = state
        for s1 in self.closure[s]:
            for x, q in self.out[s1]:
                if x != -last:
                    yield x, (q, x)

    def shortest(self) -> Word:
        """Shortlex-least reduced word accepted."""
        states = {(p, last) for p in self.out for last in
                  {0} | {x for d in self.out.values() for x, _ in d}}
        rev: dict = {st: [] for st in states}
        for st in states:
            for x, nst in self._moves(st):
                rev[nst].append(st)
        dist = {st: 0 for st in states if self.final in self.closure[st[0]]}
        queue = deque(dist)
        while queue:
            st = queue.popleft()
            for pr in rev[st]:
                if pr not in dist:
                    dist[pr] = dist[st] + 1
                    queue.append(pr)
        cur = {(self.start, 0)}
        d = dist[(self.start, 0)]
        out = []
        while d > 0:
            best: dict = {}
            for st in cur:
                for x, nst in self._moves(st):
                    if dist.get(nst) == d - 1:
                        best.setdefault(x, set()).add(nst)
            x = min(best, key=letter_key)
            out.append(x)
            cur = best[x]
            d -= 1
        return tuple(out)


def double_coset_rep(h: Sequence[Word], w: Sequence[int], k: Sequence[Word]) -> Word:
    """Shortlex-least element of the double coset H w K."""
    return _DoubleCosetAutomaton(h, w, k).shortest()


def in_double_coset(x: Sequence[int], h, w, k) -> bool:
    return double_coset_rep(h, x, k) == double_coset_rep(h, w, k)


def coset_intersection(h: Sequence[Word], k: Sequence[Word], y: Sequence[int]) -> Optional[Word]:
    """An element of H cap K y, or None when the intersection is empty."""
    gh = FoldedGraph(h, track=False)
    b = _Builder(track=False)
    base = b.new_vertex()
    for g in k:
        g = reduce_word(g)
        if g:
            b.add_path(base, g, base, None)
    y = reduce_word(y)
    end = b.new_vertex()
    if y:
        b.add_path(base, y, end, None)
    else:
        b._merge(end, base)
    marks = {"b": base, "e": end if y else base}
    b.fold(marks)
    adj, remap = b.export(marks["b"])
    target = (gh.base, remap[marks["e"]])
    start = (gh.base, 0)
    paths = {start: ()}
    queue = deque([start])
    while queue:
        p, q = queue.popleft()
        if (p, q) == target:
            return paths[(p, q)]
        for x in sorted(gh.adj[p], key=letter_key):
            if x in adj[q]:
                nxt = (gh.adj[p][x][0], adj[q][x][0])
                if nxt not in paths:
                    paths[nxt] = paths[(p, q)] + (x,)
                    queue.append(nxt)
    return None


def double_coset_witness(h: Sequence[Word], w: Sequence[int], k: Sequence[Word]) -> tuple:
    """(g, r, c) with g in H, c in K, r the canonical representative and w = g r c."""
    r = double_coset_rep(h, w, k)
    kw = [mul(w, g, inverse(w)) for g in k]
    g = coset_intersection(h, kw, mul(w, inverse(r)))
    if g is None:
        raise AssertionError("double coset witness not found")
    c = mul(inverse(r), inverse(g), w)
    return g, r, c


def intersection_basis(h: Sequence[Word], k: Sequence[Word]) -> list:
    """Free basis of H cap K via the pullback of folded graphs."""
    gh = FoldedGraph(h, track=False)
    gk = FoldedGraph(k, track=False)
    start = (gh.base, gk.base)
    paths = {start: ()}
    queue = deque([start])
    while queue:
        p, q = queue.popleft()
        for x in sorted(gh.adj[p], key=letter_key):
            if x in gk.adj[q]:
                nxt = (gh.adj[p][x][0], gk.adj[q][x][0])
                if nxt not in paths:
                    paths[nxt] = paths[(p, q)] + (x,)
                    queue.append(nxt)
    out = []
    for v in sorted(paths, key=lambda s: shortlex_key(paths[s])):
        p, q = v
        for x in sorted(gh.adj[p], key=letter_key):
            if x < 0 or x not in gk.adj[q]:
                continue
            u = (gh.adj[p][x][0], gk.adj[q][x][0])
            word = mul(paths[v], (x,), inverse(paths[u]))
            if word and paths[v] + (x,) != paths[u] and paths[u] + (-x,) != paths[v]:
                out.append(word)
    return out


def evaluate(expr: Sequence[int], gens: Sequence[Word]) -> Word:
    """Evaluate a product expression over 1-based generator indices."""
    out: Word = ()
    for i in expr:
        g = gens[abs(i) - 1]
        out = mul(out, g if i > 0 else inverse(g))
    return out
