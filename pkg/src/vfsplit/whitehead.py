"""Free splittings of F_n relative to a list of words.

A negative answer comes from the Whitehead graph: if F_n splits freely
with every word elliptic, the Whitehead graph of the cyclically reduced
words in any basis is disconnected or has a cut vertex.  So one basis
whose graph is 2-connected settles it; the search walks length
non-increasing Whitehead moves until it finds one or a witness.  A positive
answer is an automorphism (tracked as images of the basis) after which
the letters split into two blocks with no word mixing them.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import networkx as nx

from . import freegroups as fg
from .errors import InputError

MAX_RANK = 3


@dataclass
class FreeSplittingResult:
    status: str  # "splitting" | "none" | "none-within-bound"
    factors: tuple = ()  # two tuples of words in F_n: bases of the free factors
    exact: bool = False
    reason: str = ""

    @property
    def found(self) -> bool:
        return self.status == "splitting"


def cyclic_words(words: Sequence) -> list:
    return [c for c in (fg.cyclic_reduction(w)[1] for w in words) if c]


def whitehead_graph(rank: int, words: Sequence) -> nx.MultiGraph:
    """Vertices the letters; each cyclic subword xy gives an edge x -- y^-1."""
    g = nx.MultiGraph()
    g.add_nodes_from(fg.letters(rank))
    for c in cyclic_words(words):
        for i, x in enumerate(c):
            g.add_edge(x, -c[(i + 1) % len(c)])
    return g


def has_cut(rank: int, words: Sequence) -> bool:
    g = nx.Graph(whitehead_graph(rank, words))
    return not nx.is_connected(g) or any(True for _ in nx.articulation_points(g))


def _blocks(rank: int, words: Sequence) -> list:
    """Connected classes of generators, linking the letters of each word."""
    g = nx.Graph()
    g.add_nodes_from(range(1, rank + 1))
    for c in cyclic_words(words):
        ks = sorted({abs(x) for x in c})
        g.add_edges_from(zip(ks, ks[1:]))
    return sorted(sorted(b) for b in nx.connected_components(g))


def _apply(images: dict, w: Sequence) -> tuple:
    return fg.mul(*[images[x] if x > 0 else fg.inverse(images[-x]) for x in w])


def whitehead_moves(rank: int):
    """Type-two Whitehead automorphisms (A, a) as images of the generators."""
    ls = fg.letters(rank)
    for a in ls:
        rest = [x for x in ls if x not in (a, -a)]
        for r in range(len(rest) + 1):
            for sub in combinations(rest, r):
                if not sub:
                    continue
                s = set(sub) | {a}
                img = {}
                for k in range(1, rank + 1):
                    if k in (a, -a):
                        img[k] = (k,)
                        continue
                    w = [k]
                    if k in s:
                        w = w + [a]
                    if -k in s:
                        w = [-a] + w
                    img[k] = fg.reduce_word(w)
                inv = {}
                s2 = (s - {a}) | {-a}
                for k in range(1, rank + 1):
                    if k in (a, -a):
                        inv[k] = (k,)
                        continue
                    w = [k]
                    if k in s2:
                        w = w + [-a]
                    if -k in s2:
                        w = [a] + w
                    inv[k] = fg.reduce_word(w)
                yield img, inv


def _total(words) -> int:
    return sum(len(c) for c in cyclic_words(words))


def find_free_splitting_rel(rank: int, words: Sequence, bound: int = 4000,
                            max_rank: int = MAX_RANK) -> FreeSplittingResult:
    """A free splitting of F_rank in which every word is elliptic."""
    if rank > max_rank:
        raise InputError(f"rank {rank} exceeds the configured maximum {max_rank}")
    words = [fg.reduce_word(w) for w in words]
    if rank == 0:
        return FreeSplittingResult("none", exact=True, reason="trivial group")
    if rank == 1:
        if cyclic_words(words):
            return FreeSplittingResult("none", exact=True, reason="Z rel a non-trivial word")
        # Z is an HNN extension of the trivial group; report it as a one-letter factor
        return FreeSplittingResult("splitting", (((1,),), ()), exact=True)
    ident = {k: (k,) for k in range(1, rank + 1)}
    start = tuple(cyclic_words(words))
    seen = {start}
    queue = deque([(start, ident)])
    moves = list(whitehead_moves(rank))
    while queue and len(seen) <= bound:
        cur, psi = queue.popleft()
        if not has_cut(rank, cur):
            return FreeSplittingResult("none", exact=True, reason="Whitehead graph has no cut vertex")
        blocks = _blocks(rank, cur)
        if len(blocks) > 1:
            first = blocks[0]
            f1 = tuple(psi[k] for k in first)
            f2 = tuple(psi[k] for k in range(1, rank + 1) if k not in first)
            return FreeSplittingResult("splitting", (f1, f2), exact=True)
        n = _total(cur)
        for img, inv in moves:
            nxt = tuple(cyclic_words([_apply(img, w) for w in cur]))
            if _total(nxt) > n or nxt in seen:
                continue
            seen.add(nxt)
            psi2 = {k: _apply(psi, inv[k]) for k in psi}
            queue.appendleft((nxt, psi2)) if _total(nxt) < n else queue.append((nxt, psi2))
    return FreeSplittingResult("none-within-bound", reason=f"searched {len(seen)} tuples")


def is_basis(rank: int, words: Sequence) -> bool:
    """Stallings check: the words generate F_rank and there are rank of them."""
    g = fg.FoldedGraph([fg.reduce_word(w) for w in words], track=False)
    return len(words) == rank and g.n_vertices == 1 and g.rank() == rank
