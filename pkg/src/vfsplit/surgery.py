"""Equivariant surgeries: shaving, free-face collapse, and the vertex blow-up.

All complex surgeries act on orbit keys: removing the orbit of a cell
removes every translate of it.  Each operation returns a fresh object and
appends replayable moves to a `SurgeryTrace`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .core import EquivSquareComplex
from .errors import InputError
from .fibers import (LeafMap, cofaces, fiber, is_free_face, leaf_fold, leaf_isomorphic,
                     leaf_space, transverse_free_faces, transverse_kind)
from .tree import MarkedSplitting, collapse


@dataclass
class SurgeryTrace:
    """Ordered moves, each a JSON-friendly tuple starting with its kind.

    Kinds: ``hair-collapse`` (splitting vertex and edge names),
    ``free-face-collapse`` (square key, face key), ``detach`` (cell keys)
    and ``collapse-to-edge`` (names of the resulting edge orbits).
    """

    moves: list = field(default_factory=list)

    def add(self, *move) -> None:
        self.moves.append(tuple(move))

    def __len__(self) -> int:
        return len(self.moves)

    def to_json(self) -> list:
        return [_jsonable(m) for m in self.moves]

    @classmethod
    def from_json(cls, data: list) -> "SurgeryTrace":
        return cls([_untuple(m) for m in data])


def _jsonable(x):
    if isinstance(x, (tuple, list)):
        return [_jsonable(y) for y in x]
    return x


def _untuple(x):
    if isinstance(x, list):
        return tuple(_untuple(y) for y in x)
    return x


# -- shaving splittings -----------------------------------------------------------

def remove_hair(t: MarkedSplitting, o: str) -> tuple:
    """Collapse the hair orbit at vertex orbit o; returns (splitting, edge name)."""
    if o not in t.hairs():
        raise InputError(f"vertex orbit {o!r} is not a hair")
    f = t.out_edges(o)[0]
    pos = f if f.positive else t.edges[f.reverse]
    vertices = [(v, t.vgroup[v]) for v in t.vertex_names if v != o]
    if o == t.base_orbit:
        # keep the other endpoint's representative as the new base
        other = f.target
        vertices.sort(key=lambda item: item[0] != other)
    edges = [(e.name, e.source, e.target, e.group, e.stable) for e in t.positive_edges()
             if e.name != pos.name]
    return MarkedSplitting(t.base, vertices, edges, t.name, True, t.group), pos.name


def shave_tree(t: MarkedSplitting, trace: Optional[SurgeryTrace] = None) -> tuple:
    """Collapse hair orbits one at a time until the splitting has none."""
    trace = SurgeryTrace() if trace is None else trace
    while True:
        hairs = sorted(t.hairs())
        if not hairs or t.n_edge_orbits() == 0:
            return t, trace
        t, ename = remove_hair(t, hairs[0])
        trace.add("hair-collapse", hairs[0], ename)


def replay_tree(t: MarkedSplitting, trace: SurgeryTrace) -> MarkedSplitting:
    for move in trace.moves:
        if move[0] != "hair-collapse":
            raise InputError(f"unexpected move {move[0]!r} for a splitting")
        t, ename = remove_hair(t, move[1])
        if ename != move[2]:
            raise InputError("replay diverged")
    return t


# -- complex surgeries ----------------------------------------------------------------

def remove_orbits(z: EquivSquareComplex, keys: Sequence) -> EquivSquareComplex:
    out = z.copy()
    for k in keys:
        if k not in out.cells:
            raise InputError(f"cell orbit {k} not present")
        del out.cells[k]
    return out


@dataclass
class CollapseReport:
    square: tuple
    face: tuple
    factor: int  # the face is transverse to this factor; its leaf space is unchanged
    unchanged: bool
    fold: LeafMap

    @property
    def ok(self) -> bool:
        return self.unchanged and self.fold.ok


def collapse_free_face(z: EquivSquareComplex, square: tuple, face: tuple,
                       trace: Optional[SurgeryTrace] = None) -> tuple:
    """Collapse the square orbit onto the side opposite the free face.

    The leaf space of the factor the face is transverse to must be
    unchanged; the other one is cleaved, which is verified by building the
    fold from the new leaf space onto the old one.
    """
    if square not in z.cells or face not in z.cells or not is_free_face(z, square, face):
        raise InputError(f"{face} is not a free face of {square}")
    i = 1 if face[0] == transverse_kind(1) else 2
    new = remove_orbits(z, [square, face])
    new.flags["is_core"] = False
    same = leaf_isomorphic(leaf_space(new, i), leaf_space(z, i))
    fold = leaf_fold(leaf_space(new, 3 - i), leaf_space(z, 3 - i))
    if trace is not None:
        trace.add("free-face-collapse", square, face)
    return new, CollapseReport(square, face, i, same, fold)


def shaved_core(z: EquivSquareComplex, inf: int = 1,
                trace: Optional[SurgeryTrace] = None) -> tuple:
    """Collapse inf-transverse free faces until every edge fiber has no spur.

    Returns (complex, collapse reports).
    """
    reports = []
    cur = z
    while True:
        faces = transverse_free_faces(cur, inf)
        if not faces:
            break
        cur, rep = collapse_free_face(cur, *faces[0], trace=trace)
        reports.append(rep)
    out = cur.copy()
    out.flags["is_shaved"] = True
    return out, reports


def _fiber_spur_free(z: EquivSquareComplex, i: int, kind: str) -> bool:
    t = z.space.tree(i)
    orbits = t.vertex_names if kind == "v" else [f.name for f in t.positive_edges()]
    return all(fiber(z, i, kind, o).is_minimal() for o in orbits)


def inf_minimal_core(z: EquivSquareComplex, inf: int = 1,
                     trace: Optional[SurgeryTrace] = None) -> tuple:
    """Collapse spurs of the vertex fibers that carry nothing else.

    A spur is collapsed when its tip meets no inf-transverse edge, so the
    attached hypercarriers are untouched.  Returns (complex, blocked spurs).
    """
    cur = z.copy()
    t = cur.space.tree(inf)
    blocked = []
    changed = True
    while changed:
        changed = False
        up = cofaces(cur)
        for o in t.vertex_names:
            for ekey, tip in fiber(cur, inf, "v", o).spurs():
                if any(k[0] == transverse_kind(inf) for k in up[tip]):
                    if (ekey, tip) not in blocked:
                        blocked.append((ekey, tip))
                    continue
                cur = remove_orbits(cur, [ekey, tip])
                if trace is not None:
                    trace.add("detach", ekey, tip)
                changed = True
                break
            if changed:
                break
    cur.flags["is_inf_minimal"] = not blocked
    return cur, blocked


def replay_complex(z: EquivSquareComplex, trace: SurgeryTrace) -> EquivSquareComplex:
    cur = z
    for move in trace.moves:
        if move[0] == "free-face-collapse":
            cur, _ = collapse_free_face(cur, move[1], move[2])
        elif move[0] == "detach":
            cur = remove_orbits(cur, list(move[1:]))
        else:
            raise InputError(f"unexpected move {move[0]!r} for a complex")
    return cur


def complex_json(z: EquivSquareComplex) -> str:
    """Canonical serialization of the orbit keys, for bit-exact comparisons."""
    return json.dumps([_jsonable(k) for k in z.keys()], separators=(",", ":"))


# -- the non-e-collapse ---------------------------------------------------------------

def non_e_collapse(t: MarkedSplitting, e: str, name: str = "") -> tuple:
    """Collapse every edge orbit except e; returns (splitting, vertex map)."""
    if e not in t.edges:
        raise InputError(f"unknown edge orbit {e!r}")
    keep = {e, t.edges[e].reverse}
    crush = [f.name for f in t.positive_edges() if f.name not in keep]
    return collapse(t, crush, name or f"C({t.name},{e})")
