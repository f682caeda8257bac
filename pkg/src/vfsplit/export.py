"""Deterministic JSON and DOT renderings of complexes and leaf spaces.

Node ids are built from canonical orbit keys, so two runs on the same
input give byte-identical text.
"""

from __future__ import annotations

from .core import EquivSquareComplex
from .fibers import LeafSpace


def key_id(base, key: tuple) -> str:
    kind, o1, o2, r, sign = key
    s = f"{kind}:{o1}:{o2}:{base.format(r)}"
    return s + (f":{sign:+d}" if kind == "dg" else "")


def complex_to_json(z: EquivSquareComplex) -> dict:
    """Orbit cells with their faces, each face as (cell id, gluing word)."""
    sp = z.space
    b = sp.base
    cells = []
    for k in z.keys():
        c = z.cells[k]
        cells.append({"id": key_id(b, k), "kind": k[0],
                      "cell1": c.c1.to_json(b), "cell2": c.c2.to_json(b),
                      "stabilizer": sp.stabilizer(c).to_json(),
                      "faces": [[key_id(b, fk), b.format(g)] for fk, g in sp.gluing(c)]})
    return {"kind": "core", "trees": [sp.t1.name, sp.t2.name], "counts": z.counts(),
            "flags": dict(sorted(z.flags.items())), "cells": cells}


def complex_to_dot(z: EquivSquareComplex, name: str = "core") -> str:
    """Quotient 1-skeleton; squares are boxes joined to their four sides."""
    sp = z.space
    b = sp.base
    lines = [f'graph "{name}" {{', "  node [shape=point];"]
    for k in z.keys("v"):
        lines.append(f'  "{key_id(b, k)}" [shape=circle, label="{k[1]},{k[2]}"];')
    for k in z.keys():
        if k[0] in ("e1", "e2", "dg"):
            ends = [key_id(b, fk) for fk, _ in sp.gluing(z.cells[k])]
            lines.append(f'  "{ends[0]}" -- "{ends[1]}" [label="{k[0]} {k[1]},{k[2]}"];')
    for k in z.keys("sq"):
        sid = key_id(b, k)
        lines.append(f'  "{sid}" [shape=box, label="sq {k[1]},{k[2]}"];')
        for fk, _ in sp.gluing(z.cells[k])[:4]:
            lines.append(f'  "{sid}" -- "{key_id(b, fk)}" [style=dotted];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def leaf_space_to_dot(ls: LeafSpace, name: str = "leaves") -> str:
    lines = [f'graph "{name}" {{']
    for n, (kind, orbit, pts) in enumerate(ls.nodes):
        lines.append(f'  n{n} [label="{kind} {orbit} ({len(pts)})"];')
    for e in sorted(ls.edges):
        lines.append(f"  n{e[0]} -- n{e[1]};")
        lines.append(f"  n{e[0]} -- n{e[2]};")
    lines.append("}")
    return "\n".join(lines) + "\n"
