"""The word problem over a base presentation (a graph of finite groups).

Two implementations share one interface:

* `FreeBase` -- all vertex groups trivial.  Elements are freely reduced
  tuples of letters (one letter per non-tree edge pair); subgroups are
  handled exactly with Stallings folded graphs.
* `GraphBase` -- general finite vertex groups.  Elements are Britton normal
  forms of closed paths at the base vertex: ``(g0, e1, g1, ..., ek, gk)``
  with every ``g_i`` (i < k) the least element of its coset of the
  attaching image of ``e_{i+1}``.  Normal forms are unique, so element
  equality is tuple equality.

Words are written over generator names: stable letters for non-tree edges
and vertex-group elements ``v[i]`` (or declared element names), joined with
``.`` and with ``^-1`` (or ``^n``) exponents.
"""

from __future__ import annotations

import random
import re
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

from . import freegroups as fg
from .errors import BudgetExceeded, InputError
from .graph_of_groups import GraphOfGroups, element_token, validate

DEFAULT_BUDGET = 20000

_TOKEN = re.compile(r"^(?P<name>[^\^]+?)(\^(?P<exp>-?\d+))?$")


def _split_tokens(s: str) -> list:
    s = s.strip()
    if s in ("", "1", "e"):
        return []
    out = []
    for tok in s.split("."):
        tok = tok.strip()
        m = _TOKEN.match(tok)
        if not m or not tok:
            raise InputError(f"malformed token {tok!r} in word {s!r}")
        exp = int(m.group("exp")) if m.group("exp") is not None else 1
        out.append((m.group("name"), exp))
    return out


class _BaseCommon:
    graph: GraphOfGroups

    def _setup_graph(self, graph: GraphOfGroups):
        rep = validate(graph)
        if not rep:
            raise InputError(f"invalid base presentation: {rep.reason} {rep.witness}")
        if graph.marked or any(grp is None for _, grp in graph.vertices):
            raise InputError("base presentation must have finite vertex groups")
        self.graph = graph
        self.vnames = graph.vertex_names
        self.vindex = {v: i for i, v in enumerate(self.vnames)}
        self.base_vertex = self.vnames[0]
        self.tree = graph.spanning_tree(self.base_vertex)
        # tree path (list of edge names) from the base vertex to each vertex
        self.tree_path = {self.base_vertex: []}
        queue = deque([self.base_vertex])
        while queue:
            v = queue.popleft()
            for e in graph.out_edges(v):
                if e.name in self.tree:
                    w = graph.target(e.name)
                    if w not in self.tree_path:
                        self.tree_path[w] = self.tree_path[v] + [e.name]
                        queue.append(w)
        self.positive = set(e.name for e in graph.edge_pairs())
        self.stable = [e.name for e in graph.edge_pairs() if e.name not in self.tree]
        self.elt_names = {}
        for v, grp in graph.vertices:
            for x in range(grp.order):
                self.elt_names[element_token(v, grp, x)] = (v, x)
                self.elt_names[f"{v}[{x}]"] = (v, x)

    def _between(self, a: str, b: str) -> list:
        """Tree path from vertex a to vertex b as edge names."""
        back = [self.graph.edge(e).reverse for e in reversed(self.tree_path[a])]
        return back + self.tree_path[b]

    def _tokens_to_path(self, s: str) -> list:
        """Parse a word into path items ('e', name) / ('v', vertex, elt)."""
        items, cur = [], self.base_vertex
        for name, exp in _split_tokens(s):
            if name in self.positive and name not in self.elt_names:
                e = self.graph.edge(name)
                rev = e.reverse
                for _ in range(abs(exp)):
                    ed = name if exp > 0 else rev
                    src = self.graph.edge(ed).source
                    items += [("e", f) for f in self._between(cur, src)]
                    items.append(("e", ed))
                    cur = self.graph.target(ed)
            elif name in self.elt_names:
                v, x = self.elt_names[name]
                grp = self.graph.vertex_group(v)
                if exp < 0:
                    x, exp = grp.inv(x), -exp
                y = 0
                for _ in range(exp):
                    y = grp.mul(y, x)
                items += [("e", f) for f in self._between(cur, v)]
                items.append(("v", v, y))
                cur = v
            else:
                raise InputError(f"unknown generator {name!r}")
        items += [("e", f) for f in self._between(cur, self.base_vertex)]
        return items

    def parse(self, s: str):
        return self.from_path(self._tokens_to_path(s))

    def from_word(self, w):
        if isinstance(w, str):
            return self.parse(w)
        return w

    def power(self, x, n: int):
        if n < 0:
            x, n = self.inv(x), -n
        out = self.identity
        for _ in range(n):
            out = self.mul(out, x)
        return out

    def conj(self, g, x):
        """g x g^-1"""
        return self.mul(g, x, self.inv(g))

    def commutator(self, x, y):
        return self.mul(x, y, self.inv(x), self.inv(y))

    def is_identity(self, x) -> bool:
        return x == self.identity

    def random_element(self, rng: random.Random, n: int):
        gens = self.generators()
        out = self.identity
        for _ in range(n):
            g = rng.choice(gens)
            out = self.mul(out, g if rng.random() < 0.5 else self.inv(g))
        return out


class FreeBase(_BaseCommon):
    is_free = True

    def __init__(self, graph: GraphOfGroups):
        self._setup_graph(graph)
        self.rank = len(self.stable)
        self.letter = {e: i + 1 for i, e in enumerate(self.stable)}
        self.names = list(self.stable)
        self.identity = ()

    def from_path(self, items) -> tuple:
        out = []
        for it in items:
            if it[0] != "e":
                continue
            e = it[1]
            if e in self.letter:
                out.append(self.letter[e])
            else:
                r = self.graph.edge(e).reverse
                if r in self.letter:
                    out.append(-self.letter[r])
        return fg.reduce_word(out)

    def mul(self, *xs):
        return fg.mul(*xs)

    def inv(self, x):
        return fg.inverse(x)

    def normal_form(self, x):
        return fg.reduce_word(x)

    def key(self, x):
        return fg.shortlex_key(x)

    def length(self, x) -> int:
        return len(x)

    def format(self, x) -> str:
        if not x:
            return "1"
        return ".".join(self.names[abs(a) - 1] + ("" if a > 0 else "^-1") for a in x)

    def generators(self) -> list:
        return [(k,) for k in range(1, self.rank + 1)]

    def __repr__(self):
        return f"FreeBase(rank={self.rank})"


class GraphBase(_BaseCommon):
    is_free = False

    def __init__(self, graph: GraphOfGroups):
        self._setup_graph(graph)
        g = graph
        self.enames = [e.name for e in g.edges]
        self.eindex = {n: i for i, n in enumerate(self.enames)}
        self.rev = [self.eindex[e.reverse] for e in g.edges]
        self.src = [self.vindex[e.source] for e in g.edges]
        self.tgt = [self.vindex[g.target(e.name)] for e in g.edges]
        self.vgroup = [grp for _, grp in g.vertices]
        self.att = [e.attach.map for e in g.edges]
        self.preim = []
        self.decomp = []  # decomp[e][x] = (r, c) with x = r * att_e(c)
        for i, e in enumerate(g.edges):
            grp = self.vgroup[self.src[i]]
            att = self.att[i]
            pre = {y: c for c, y in enumerate(att)}
            self.preim.append(pre)
            table = []
            for x in range(grp.order):
                r = min(grp.mul(x, y) for y in att)
                c = pre[grp.mul(grp.inv(r), x)]
                table.append((r, c))
            self.decomp.append(table)
        self.is_tree_edge = [n in self.tree for n in self.enames]
        self.identity = (0,)

    # -- normal forms ---------------------------------------------------------
    def _push_edge(self, st: list, f: int) -> None:
        last = st[-1]
        if len(st) > 1 and st[-2] == self.rev[f] and last in self.preim[f]:
            c = self.preim[f][last]
            ek = st[-2]
            del st[-2:]
            grp = self.vgroup[self.src[ek]]
            st[-1] = grp.mul(st[-1], self.att[ek][c])
            return
        r, c = self.decomp[f][last]
        st[-1] = r
        st.append(f)
        st.append(self.att[self.rev[f]][c])

    def _vertex_of(self, st: list) -> int:
        return self.tgt[st[-2]] if len(st) > 1 else 0

    def _push_elt(self, st: list, x: int) -> None:
        grp = self.vgroup[self._vertex_of(st)]
        st[-1] = grp.mul(st[-1], x)

    def _append(self, st: list, x: tuple) -> None:
        self._push_elt(st, x[0])
        for i in range(1, len(x), 2):
            self._push_edge(st, x[i])
            self._push_elt(st, x[i + 1])

    def from_path(self, items) -> tuple:
        st = [0]
        for it in items:
            if it[0] == "e":
                f = self.eindex[it[1]]
                if self.src[f] != self._vertex_of(st):
                    raise InputError("path is not composable")
                self._push_edge(st, f)
            else:
                v = self.vindex[it[1]]
                if v != self._vertex_of(st):
                    raise InputError("path is not composable")
                self._push_elt(st, it[2])
        if self._vertex_of(st) != 0:
            raise InputError("path is not closed at the base vertex")
        return tuple(st)

    def mul(self, *xs):
        st = [0]
        for x in xs:
            self._append(st, x)
        return tuple(st)

    def inv(self, x):
        k = len(x)
        out = [self.vgroup[self.tgt[x[-2]] if k > 1 else 0].inv(x[-1])]
        for i in range(k - 2, 0, -2):
            out.append(self.rev[x[i]])
            v = self.src[x[i]]
            out.append(self.vgroup[v].inv(x[i - 1]))
        st = [0]
        self._append(st, tuple(out))
        return tuple(st)

    def normal_form(self, x):
        st = [0]
        self._append(st, tuple(x))
        return tuple(st)

    def key(self, x):
        return (len(x), x)

    def length(self, x) -> int:
        return sum(1 for i in range(1, len(x), 2) if not self.is_tree_edge[x[i]])

    def syllable_length(self, x) -> int:
        return (len(x) - 1) // 2

    def format(self, x) -> str:
        toks = []
        for i, s in enumerate(x):
            if i % 2 == 0:
                v = self.tgt[x[i - 1]] if i > 0 else 0
                if s != 0:
                    vn = self.vnames[v]
                    toks.append(element_token(vn, self.vgroup[v], s))
            else:
                name = self.enames[s]
                if self.is_tree_edge[s]:
                    continue
                if name in self.positive:
                    toks.append(name)
                else:
                    toks.append(self.graph.edge(name).reverse + "^-1")
        return ".".join(toks) or "1"

    def vertex_element(self, v: str, x: int) -> tuple:
        return self.from_path([("e", f) for f in self.tree_path[v]] + [("v", v, x)]
                              + [("e", f) for f in self._between(v, self.base_vertex)])

    def generators(self) -> list:
        out = []
        for v, grp in self.graph.vertices:
            for x in range(1, grp.order):
                out.append(self.vertex_element(v, x))
        for e in self.stable:
            out.append(self.parse(e))
        return out

    def __repr__(self):
        return f"GraphBase(V={len(self.vnames)}, E={len(self.enames) // 2})"


def make_base(graph: GraphOfGroups):
    if graph.is_free_base():
        return FreeBase(graph)
    return GraphBase(graph)


def free_group(names: Sequence[str]) -> FreeBase:
    """F_n as one trivial vertex with a loop per name."""
    from .finite_groups import trivial_group
    from .graph_of_groups import make_graph
    t = trivial_group()
    g = make_graph([("v", t)], [(n, "v", "v", t, (0,), (0,)) for n in names])
    return FreeBase(g)


# -- subgroups -----------------------------------------------------------------

@dataclass(frozen=True)
class Membership:
    status: str  # "yes" | "no" | "unknown"
    witness: Optional[tuple] = None  # product expression over 1-based gen indices
    budget: Optional[int] = None

    def __bool__(self) -> bool:
        return self.status == "yes"


def evaluate_expression(base, expr: Sequence[int], gens: Sequence) -> tuple:
    out = base.identity
    for i in expr:
        g = gens[abs(i) - 1]
        out = base.mul(out, g if i > 0 else base.inv(g))
    return out


class SubgroupSpec:
    """A finitely generated subgroup of the base group, given by generators."""

    def __init__(self, base, gens: Sequence, budget: int = DEFAULT_BUDGET, name: str = ""):
        self.base = base
        self.gens = tuple(base.normal_form(base.from_word(g)) for g in gens)
        self.budget = budget
        self.name = name
        self._graph = None
        self._finite = None  # dict element -> expression, when known finite

    # -- free base ------------------------------------------------------------
    @property
    def graph(self) -> fg.FoldedGraph:
        if not self.base.is_free:
            raise TypeError("folded graphs only exist over a free base")
        if self._graph is None:
            self._graph = fg.FoldedGraph(self.gens, track=True)
        return self._graph

    def rank(self) -> int:
        return self.graph.rank()

    def free_basis(self) -> list:
        return self.graph.basis()

    # -- finite enumeration -----------------------------------------------------
    def _enumerate(self, limit: int) -> Optional[dict]:
        """All elements with product expressions, or None past `limit`."""
        if self._finite is not None:
            return self._finite
        b = self.base
        found = {b.identity: ()}
        queue = deque([b.identity])
        while queue:
            x = queue.popleft()
            for i, g in enumerate(self.gens):
                for sgn in (1, -1):
                    y = b.mul(x, g if sgn > 0 else b.inv(g))
                    if y not in found:
                        found[y] = found[x] + ((i + 1) * sgn,)
                        if len(found) > limit:
                            return None
                        queue.append(y)
        self._finite = found
        return found

    def is_trivial(self) -> bool:
        return all(g == self.base.identity for g in self.gens)

    def is_finite(self) -> Optional[bool]:
        if self.is_trivial():
            return True
        b = self.base
        if b.is_free:
            return False
        # Serre: generators and their pairwise products all elliptic => a global
        # fixed vertex, and vertex groups of the base are finite
        if any(_has_infinite_order(b, g) for g in self.gens):
            return False
        if any(_has_infinite_order(b, b.mul(g, h)) for g, h in combinations(self.gens, 2)):
            return False
        return True

    def elements(self) -> list:
        e = self._enumerate(self.budget)
        if e is None:
            raise BudgetExceeded("subgroup enumeration", "subgroup is not finite within budget")
        return sorted(e, key=self.base.key)

    def order(self) -> int:
        return len(self.elements())

    # -- membership -------------------------------------------------------------
    def membership(self, w) -> Membership:
        b = self.base
        w = b.normal_form(b.from_word(w))
        if b.is_free:
            wit = self.graph.witness(w)
            if wit is None:
                return Membership("no")
            return Membership("yes", wit)
        fin = self.is_finite()
        if fin:
            e = self._enumerate(self.budget)
            if w in e:
                return Membership("yes", e[w])
            return Membership("no")
        # budgeted search over products of generators
        found = {b.identity: ()}
        queue = deque([b.identity])
        while queue and len(found) <= self.budget:
            x = queue.popleft()
            if x == w:
                return Membership("yes", found[x])
            for i, g in enumerate(self.gens):
                for sgn in (1, -1):
                    y = b.mul(x, g if sgn > 0 else b.inv(g))
                    if y not in found:
                        found[y] = found[x] + ((i + 1) * sgn,)
                        queue.append(y)
        if w in found:
            return Membership("yes", found[w])
        return Membership("unknown", budget=self.budget)

    def contains(self, w) -> bool:
        m = self.membership(w)
        if m.status == "unknown":
            raise BudgetExceeded("membership", f"{self.base.format(w)} in {self}", self.budget)
        return m.status == "yes"

    def contains_subgroup(self, other: "SubgroupSpec") -> bool:
        return all(self.contains(g) for g in other.gens)

    def equals(self, other: "SubgroupSpec") -> bool:
        return self.contains_subgroup(other) and other.contains_subgroup(self)

    def conjugate(self, g) -> "SubgroupSpec":
        """g H g^-1"""
        b = self.base
        g = b.from_word(g)
        return SubgroupSpec(b, [b.conj(g, h) for h in self.gens], self.budget)

    def coset_eq(self, w1, w2) -> Membership:
        b = self.base
        return self.membership(b.mul(b.inv(b.from_word(w1)), b.from_word(w2)))

    def to_json(self) -> list:
        return [self.base.format(g) for g in self.gens]

    def __repr__(self):
        inner = ", ".join(self.base.format(g) for g in self.gens)
        return f"<{inner}>"


def trivial_subgroup(base) -> SubgroupSpec:
    return SubgroupSpec(base, [])


def _has_infinite_order(base, g) -> bool:
    """Infinite order iff hyperbolic on the base Bass-Serre tree.

    For any tree isometry, translation length = max(0, d(v, g^2 v) - d(v, g v)).
    """
    if base.is_free:
        return bool(g)
    return base.syllable_length(base.mul(g, g)) > base.syllable_length(g)


def component_subgroup(base, members: Sequence[str], inner_edges) -> SubgroupSpec:
    """pi_1 of a connected subgraph (vertices + edge names) inside the base."""
    g = base.graph
    members = list(members)
    root = members[0]
    inner = set(inner_edges)
    # spanning tree of the component from root
    path = {root: []}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for e in g.out_edges(v):
            if e.name in inner:
                w = g.target(e.name)
                if w not in path:
                    path[w] = path[v] + [e.name]
                    queue.append(w)
    used = set()
    for w in path:
        for e in path[w]:
            used.add(e)
            used.add(g.edge(e).reverse)
    to_root = [("e", f) for f in base.tree_path[root]]
    from_root = [("e", f) for f in base._between(root, base.base_vertex)]

    def loop(items):
        return base.from_path(to_root + items + from_root)

    def back(w):
        return [("e", g.edge(f).reverse) for f in reversed(path[w])]

    gens = []
    for w in members:
        grp = g.vertex_group(w)
        for x in range(1, grp.order):
            gens.append(loop([("e", f) for f in path[w]] + [("v", w, x)] + back(w)))
    for e in g.edge_pairs():
        if e.name in inner and e.name not in used:
            s, t = e.source, g.target(e.name)
            gens.append(loop([("e", f) for f in path[s]] + [("e", e.name)] + back(t)))
    return SubgroupSpec(base, [x for x in gens if x != base.identity])


def whole_group(base) -> SubgroupSpec:
    return SubgroupSpec(base, base.generators())


# -- cosets, double cosets, intersections ----------------------------------------

def _finite_elements(spec: Optional[SubgroupSpec], base) -> Optional[list]:
    if spec is None or spec.is_trivial():
        return [base.identity]
    fin = spec.is_finite()
    if fin:
        return spec.elements()
    return None


def double_coset_rep(base, h: Optional[SubgroupSpec], w, k: Optional[SubgroupSpec]):
    """Canonical (shortlex-least) representative of H w K.

    `None` stands for the trivial subgroup.  Exact over a free base; over
    other bases at least one side must be finite, the other finite or
    trivial.
    """
    w = base.from_word(w)
    if base.is_free:
        hg = h.gens if h is not None else ()
        kg = k.gens if k is not None else ()
        return fg.double_coset_rep(hg, w, kg)
    he = _finite_elements(h, base)
    ke = _finite_elements(k, base)
    if he is None or ke is None:
        raise BudgetExceeded("double coset canonicalization",
                             "infinite subgroup over a non-free base")
    best = None
    for x in he:
        xw = base.mul(x, w)
        for y in ke:
            z = base.mul(xw, y)
            if best is None or base.key(z) < base.key(best):
                best = z
    return best


def double_coset_witness(base, h: Optional[SubgroupSpec], w, k: Optional[SubgroupSpec]) -> tuple:
    """(g, r, c) with g in H, c in K, r = double_coset_rep(H, w, K) and w = g r c."""
    w = base.from_word(w)
    if base.is_free:
        hg = h.gens if h is not None else ()
        kg = k.gens if k is not None else ()
        return fg.double_coset_witness(hg, w, kg)
    r = double_coset_rep(base, h, w, k)
    for x in _finite_elements(h, base):
        c = base.mul(base.inv(r), base.inv(x), w)
        if k is None and c == base.identity or k is not None and k.contains(c):
            return x, r, c
    raise AssertionError("double coset witness not found")


def free_index(base, h: SubgroupSpec, k: SubgroupSpec) -> Optional[int]:
    """[K : H] for H <= K over a free base, or None when the index is infinite.

    H is rewritten in a free basis of K; the index is finite exactly when
    the folded graph of the rewritten H covers the rose on that basis.
    """
    basis = fg.FoldedGraph(k.graph.basis(), track=True)
    words = []
    for g in h.gens:
        wit = basis.witness(g)
        if wit is None:
            raise InputError("free_index needs H inside K")
        words.append(wit)
    r = len(k.graph.basis())
    if r == 0:
        return 1
    gh = fg.FoldedGraph(words, track=False)
    return gh.n_vertices if gh.is_finite_index(r) else None


def coset_rep(base, w, k: Optional[SubgroupSpec]):
    """Canonical representative of the left coset w K."""
    return double_coset_rep(base, None, w, k)


def intersection(base, h: SubgroupSpec, k: SubgroupSpec) -> SubgroupSpec:
    if base.is_free:
        return SubgroupSpec(base, fg.intersection_basis(h.gens, k.gens))
    he = _finite_elements(h, base)
    if he is not None:
        return SubgroupSpec(base, [x for x in he if x != base.identity and k.contains(x)])
    ke = _finite_elements(k, base)
    if ke is not None:
        return SubgroupSpec(base, [x for x in ke if x != base.identity and h.contains(x)])
    raise BudgetExceeded("intersection", "two infinite subgroups over a non-free base")


def gen_decompose(base, x) -> list:
    """Write x as a product of `base.generators()`: list of (index, +-1)."""
    if base.is_free:
        return [(abs(a) - 1, 1 if a > 0 else -1) for a in x]
    gens = base.generators()
    index = {}
    i = 0
    for v, grp in base.graph.vertices:
        for y in range(1, grp.order):
            index[(v, y)] = i
            i += 1
    for e in base.stable:
        index[("t", e)] = i
        i += 1
    out = []
    for j, s in enumerate(x):
        if j % 2 == 0:
            if s != 0:
                v = base.vnames[base.tgt[x[j - 1]] if j > 0 else 0]
                out.append((index[(v, s)], 1))
        else:
            name = base.enames[s]
            if base.is_tree_edge[s]:
                continue
            if name in base.positive:
                out.append((index[("t", name)], 1))
            else:
                out.append((index[("t", base.graph.edge(name).reverse)], -1))
    assert len(gens) == i
    return out


def transporter(base, h: Optional[SubgroupSpec], a, b, k: Optional[SubgroupSpec]):
    """An element g of H with g b K = a K, assuming H a K = H b K."""
    g1, r1, _ = double_coset_witness(base, h, a, k)
    g2, r2, _ = double_coset_witness(base, h, b, k)
    if r1 != r2:
        raise ValueError("elements lie in different double cosets")
    return base.mul(g1, base.inv(g2))
