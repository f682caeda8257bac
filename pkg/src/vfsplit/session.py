"""Session files: a base presentation with named splittings, families and graphs.

Schema version 1::

    {"schema": 1,
     "base": {"free": ["a", "b"]}            # or {"vertices": [...], "edges": [...]}
     "splittings": {"T": {"vertices": [{"name": "A", "group": ["a"]}, ...],
                          "edges": [{"name": "e", "source": "A", "target": "B",
                                     "group": [], "stable": "1"}],
                          "group": ["a", "b"]}},      # optional acting group
     "families": {"H": [["a"], ["b.a"]]},
     "graphs": {"D": {"vertices": [{"name": "L", "free": ["a", "b"]}, ...],
                      "edges": [{"name": "w", "source": "L", "target": "R",
                                 "source_word": "a", "target_word": "a"}]}},
     "budgets": {"radius": 6, "steps": 4000}}

Errors name the JSON path (and line, for syntax errors) of the first problem.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .decompose import TwoEndedGraph
from .errors import InputError, VFSplitError
from .finite_groups import GroupError, group_from_json
from .graph_of_groups import make_graph
from .tree import MarkedSplitting
from .words import FreeBase, SubgroupSpec, free_group, make_base

SCHEMA = 1


@dataclass
class Budgets:
    radius: Optional[int] = None  # fiber geodesic radius in build_core
    steps: int = 4000  # oracle search bound
    rounds: int = 64  # core folding rounds


@dataclass
class SessionFile:
    base: object
    splittings: dict = field(default_factory=dict)
    families: dict = field(default_factory=dict)
    graphs: dict = field(default_factory=dict)
    budgets: Budgets = field(default_factory=Budgets)
    raw_base: dict = field(default_factory=dict)
    name: str = ""

    def splitting(self, name: str) -> MarkedSplitting:
        if name not in self.splittings:
            raise InputError(f"no splitting named {name!r}")
        return self.splittings[name]

    def family(self, name: Optional[str]) -> list:
        if not name:
            return []
        if name not in self.families:
            raise InputError(f"no family named {name!r}")
        return self.families[name]

    def graph(self, name: str) -> TwoEndedGraph:
        if name not in self.graphs:
            raise InputError(f"no graph named {name!r}")
        return self.graphs[name]


def _at(path: str, fn, *args):
    try:
        return fn(*args)
    except (VFSplitError, GroupError, KeyError, TypeError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        raise InputError(f"{path}: {msg}") from exc


def _base(d: dict):
    if "free" in d:
        return free_group(list(d["free"]))
    vgroups = {v["name"]: group_from_json(v["group"]) for v in d["vertices"]}
    vertices = [(v["name"], vgroups[v["name"]]) for v in d["vertices"]]
    edges = []
    for e in d.get("edges", []):
        eg = group_from_json(e["group"])
        a_s, a_t = e["attach"]
        edges.append((e["name"], e["source"], e["target"], eg, tuple(a_s), tuple(a_t)))
    return make_base(make_graph(vertices, edges))


def _spec(base, words, path: str) -> SubgroupSpec:
    if not isinstance(words, list):
        raise InputError(f"{path}: expected a list of words")
    gens = [_at(f"{path}[{i}]", base.parse, w) for i, w in enumerate(words)]
    return SubgroupSpec(base, gens)


def splitting_from_json(base, d: dict, name: str, path: str = "splitting") -> MarkedSplitting:
    vertices = [(v["name"], _spec(base, v["group"], f"{path}.vertices[{i}].group"))
                for i, v in enumerate(d["vertices"])]
    edges = []
    for i, e in enumerate(d.get("edges", [])):
        p = f"{path}.edges[{i}]"
        edges.append((e["name"], e["source"], e["target"], _spec(base, e["group"], f"{p}.group"),
                      _at(f"{p}.stable", base.parse, e.get("stable", "1"))))
    group = d.get("group")
    group = _spec(base, group, f"{path}.group") if group is not None else None
    return _at(path, MarkedSplitting, base, vertices, edges, name, True, group)


def splitting_to_json(s: MarkedSplitting) -> dict:
    d = s.to_json()
    if s.group is not None:
        d["group"] = s.group.to_json()
    return d


def _graph(d: dict, path: str) -> TwoEndedGraph:
    vertices = [(v["name"], free_group(list(v["free"]))) for v in d["vertices"]]
    bases = dict(vertices)
    edges = []
    for i, e in enumerate(d.get("edges", [])):
        p = f"{path}.edges[{i}]"
        ws = _at(f"{p}.source_word", bases[e["source"]].parse, e["source_word"])
        wt = _at(f"{p}.target_word", bases[e["target"]].parse, e["target_word"])
        edges.append((e["name"], e["source"], e["target"], ws, wt))
    return TwoEndedGraph(vertices, edges)


def _graph_to_json(g: TwoEndedGraph) -> dict:
    bases = dict(g.vertices)
    return {"vertices": [{"name": n, "free": list(b.names)} for n, b in g.vertices],
            "edges": [{"name": n, "source": s, "target": t,
                       "source_word": bases[s].format(ws), "target_word": bases[t].format(wt)}
                      for n, s, t, ws, wt in g.edges]}


def session_from_dict(d: dict) -> SessionFile:
    if not isinstance(d, dict):
        raise InputError("session must be a JSON object")
    if d.get("schema") != SCHEMA:
        raise InputError(f"schema: expected {SCHEMA}, got {d.get('schema')!r}")
    if "base" not in d:
        raise InputError("base: missing")
    base = _at("base", _base, d["base"])
    s = SessionFile(base, raw_base=d["base"], name=d.get("name", ""))
    for name, sd in d.get("splittings", {}).items():
        s.splittings[name] = _at(f"splittings.{name}", splitting_from_json, base, sd, name,
                                 f"splittings.{name}")
    for name, fam in d.get("families", {}).items():
        s.families[name] = [_spec(base, g, f"families.{name}[{i}]") for i, g in enumerate(fam)]
    for name, gd in d.get("graphs", {}).items():
        s.graphs[name] = _at(f"graphs.{name}", _graph, gd, f"graphs.{name}")
    bd = d.get("budgets", {})
    s.budgets = Budgets(bd.get("radius"), bd.get("steps", 4000), bd.get("rounds", 64))
    return s


def parse_session(path) -> SessionFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
    return session_from_dict(d)


def serialize(s: SessionFile) -> str:
    """Canonical text: sorted keys, two-space indent, trailing newline."""
    d = {"schema": SCHEMA, "base": s.raw_base}
    if s.name:
        d["name"] = s.name
    if s.splittings:
        d["splittings"] = {n: splitting_to_json(t) for n, t in s.splittings.items()}
    if s.families:
        d["families"] = {n: [h.to_json() for h in fam] for n, fam in s.families.items()}
    if s.graphs:
        d["graphs"] = {n: _graph_to_json(g) for n, g in s.graphs.items()}
    b = s.budgets
    d["budgets"] = {"radius": b.radius, "steps": b.steps, "rounds": b.rounds}
    return json.dumps(d, indent=2, sort_keys=True) + "\n"


def dumps(obj) -> str:
    """Canonical JSON for artifacts."""
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def is_free(base) -> bool:
    return isinstance(base, FreeBase)
