"""Small graphs of finite cyclic groups for the ends comparison."""

from __future__ import annotations

from vfsplit.finite_groups import make_cyclic
from vfsplit.graph_of_groups import make_graph


def incl(k: int, n: int) -> tuple:
    return tuple(x * (n // k) for x in range(k))


def ends_instances() -> list:
    """(label, graph) pairs; total vertex-group order at most 8."""
    out = []
    for n in (1, 2, 3, 6):
        out.append((f"Z{n}", make_graph([("P", make_cyclic(n))], [])))
    for m, n in ((1, 1), (2, 2), (2, 3), (3, 3), (2, 4), (4, 4), (2, 6), (3, 5)):
        for k in (1, 2):
            if m % k or n % k:
                continue
            out.append((f"Z{m}*_Z{k} Z{n}", make_graph(
                [("P", make_cyclic(m)), ("Q", make_cyclic(n))],
                [("e", "P", "Q", make_cyclic(k), incl(k, m), incl(k, n))])))
    for n, k in ((1, 1), (2, 1), (2, 2), (4, 2), (4, 4), (3, 3), (6, 3), (6, 2)):
        out.append((f"Z{n}*_Z{k} HNN", make_graph(
            [("P", make_cyclic(n))], [("t", "P", "P", make_cyclic(k), incl(k, n), incl(k, n))])))
    out.append(("Z2*Z2*Z2", make_graph(
        [("X", make_cyclic(2)), ("Y", make_cyclic(2)), ("Z", make_cyclic(2))],
        [("e", "X", "Y", make_cyclic(1), (0,), (0,)), ("f", "Y", "Z", make_cyclic(1), (0,), (0,))])))
    out.append(("Z2*Z2 HNN", make_graph(
        [("X", make_cyclic(2)), ("Y", make_cyclic(2))],
        [("e", "X", "Y", make_cyclic(1), (0,), (0,)), ("t", "X", "X", make_cyclic(2), (0, 1), (0, 1))])))
    return out


def nielsen_splitting(base, seed: int, moves: int = 3):
    """Free splitting <u>*<v> of F2 for a basis (u, v) reached by random Nielsen moves."""
    import random

    from vfsplit.tree import amalgam
    from vfsplit.words import SubgroupSpec

    rng = random.Random(seed)
    u, v = base.parse("a"), base.parse("b")
    for _ in range(moves):
        m = rng.randrange(4)
        if m == 0:
            u = base.mul(u, v)
        elif m == 1:
            u = base.mul(u, base.inv(v))
        elif m == 2:
            v = base.mul(v, u)
        else:
            v = base.mul(base.inv(u), v)
    return amalgam(base, SubgroupSpec(base, [u]), SubgroupSpec(base, []),
                   SubgroupSpec(base, [v]), name=f"N{seed}")
