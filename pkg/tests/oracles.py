"""Independent oracles used by the test suite."""

from __future__ import annotations

import itertools
from collections import deque

from vfsplit import freegroups as fg


def reduced_words(rank: int, max_len: int):
    letters = fg.letters(rank)
    frontier = [()]
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            for x in letters:
                if w and w[-1] == -x:
                    continue
                nxt.append(w + (x,))
        yield from nxt
        frontier = nxt


def side(t, e, y) -> int:
    """0 if vertex y is on the source side of edge cell e, 1 otherwise."""
    s, u = t.endpoints(e)
    return 0 if t.distance(y, s) < t.distance(y, u) else 1


def far_point(t, g, reach: int = 8):
    """g^N . v for N large enough that g^N v lies beyond every edge within `reach`."""
    v = t.vertex()
    ell = t.translation_length(g)
    n = (2 * t.distance(v, t.act(g, v)) + 2 * reach) // ell + 1
    return t.act(t.base.power(g, n), v)


def square_heavy(t1, t2, e1, e2, points) -> bool:
    """All four quadrants of e1 x e2 contain attracting ends of a witness.

    `points` holds, per witness, far points (y1, y2) along its two axes.
    """
    seen = set()
    for y1, y2 in points:
        seen.add((side(t1, e1, y1), side(t2, e2, y2)))
        if len(seen) == 4:
            return True
    return False


def doubly_hyperbolic(t1, t2, rank: int, max_len: int) -> list:
    return [w for w in reduced_words(rank, max_len)
            if t1.translation_length(w) > 0 and t2.translation_length(w) > 0]


def nearby_edges(t, rank: int, max_len: int) -> set:
    v = t.vertex()
    out = set()
    for w in itertools.chain([()], reduced_words(rank, max_len)):
        out.update(t.geodesic(v, t.act(w, v))[1])
    return out


def heavy_square_keys(space, rank: int, edge_len: int = 2, witness_len: int = 5) -> set:
    """Orbit keys of squares near the base whose four quadrants are heavy."""
    a, b = space.t1, space.t2
    wit = doubly_hyperbolic(a, b, rank, witness_len)
    points = [(far_point(a, g), far_point(b, g)) for g in wit]
    out = set()
    from vfsplit.core import ProductCell
    for e1 in nearby_edges(a, rank, edge_len):
        for e2 in nearby_edges(b, rank, edge_len):
            if square_heavy(a, b, e1, e2, points):
                out.add(space.key(ProductCell("sq", e1, e2)))
    return out


def bfs_ends(base, radius: int = 8, deletion: int = 2):
    """Ends of the Cayley graph seen through a ball.

    Counts components of B(radius) minus B(deletion) that reach the
    sphere of the outer radius; 0 if the group fits inside the ball.
    """
    gens = base.generators()
    gens = gens + [base.inv(g) for g in gens]
    one = base.normal_form(base.identity)
    dist = {one: 0}
    frontier = [one]
    adj = {}
    for r in range(1, radius + 1):
        nxt = []
        for x in frontier:
            for g in gens:
                y = base.normal_form(base.mul(x, g))
                if y not in dist:
                    dist[y] = r
                    nxt.append(y)
        frontier = nxt
    for x in dist:
        adj[x] = [y for y in (base.normal_form(base.mul(x, g)) for g in gens) if y in dist]
    outer = [x for x, d in dist.items() if d == radius]
    if not outer:
        return 0
    seen, count = set(), 0
    for start in outer:
        if start in seen:
            continue
        count += 1
        queue = deque([start])
        seen.add(start)
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if dist[y] > deletion and y not in seen:
                    seen.add(y)
                    queue.append(y)
    return count if count <= 2 else "infinite"
