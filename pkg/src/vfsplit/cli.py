"""Command line interface: ``vfsplit COMMAND SESSION [options]``.

Exit codes: 0 success, 1 hypothesis or validation failure, 2 unknown or
budget exhausted.  Artifacts go to ``--out DIR`` as canonical JSON and DOT.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from .blowup import blowup_vertex, check_report
from .core import build_core
from .decompose import cleave_tree, one_ended_rel, swarup_amalgam, swarup_hnn
from .errors import BudgetExceeded, HypothesisViolation, InputError, VFSplitError
from .export import complex_to_dot, complex_to_json, leaf_space_to_dot
from .fibers import check_core, leaf_space
from .finite_groups import GroupError
from .graph_of_groups import INFINITE, ends, is_essential, is_essential_edge
from .session import _graph_to_json, dumps, parse_session, splitting_to_json
from .surgery import (SurgeryTrace, complex_json, replay_complex, replay_tree, shave_tree,
                      shaved_core)
from .verify import verify_artifact

OK, FAIL, UNKNOWN = 0, 1, 2


class Run:
    def __init__(self, args):
        self.args = args
        self.session = parse_session(args.session)
        b = self.session.budgets
        self.radius = args.budget_radius if args.budget_radius is not None else b.radius
        self.steps = args.budget_steps if args.budget_steps is not None else b.steps
        self.out = Path(args.out) if args.out else None

    def write(self, name: str, text: str) -> None:
        if self.out is None:
            return
        self.out.mkdir(parents=True, exist_ok=True)
        (self.out / name).write_text(text, encoding="utf-8")

    def trace_path(self):
        return Path(self.args.trace) if self.args.trace else None


def _print_report(rep) -> int:
    print(rep.summary())
    return OK if rep.ok else FAIL


def _load_artifact(path) -> dict:
    try:
        d = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(d, dict):
        raise InputError(f"{path}: expected a JSON object")
    return d


# -- commands --------------------------------------------------------------------------------

def cmd_validate(r: Run) -> int:
    s = r.session
    b = s.base
    rng = random.Random(r.args.seed)
    bad = 0
    for _ in range(200):
        w = b.random_element(rng, rng.randint(0, 12))
        if b.normal_form(b.normal_form(w)) != b.normal_form(w) or not b.is_identity(
                b.mul(w, b.inv(w))):
            bad += 1
    print(f"base: {b!r}")
    print(f"kernel self-check: {200 - bad}/200 random words")
    for name, t in s.splittings.items():
        print(f"splitting {name}: {t.n_vertex_orbits()} vertex orbits, "
              f"{t.n_edge_orbits()} edge orbits, valid")
    for name, fam in s.families.items():
        print(f"family {name}: {len(fam)} subgroups")
    for name, g in s.graphs.items():
        print(f"graph {name}: {len(g.vertices)} vertices, {len(g.edges)} edges")
    return OK if not bad else FAIL


def cmd_ends(r: Run) -> int:
    try:
        n = ends(r.session.base.graph)
    except GroupError as exc:
        raise InputError(str(exc)) from exc
    print(n)
    r.write("ends.json", dumps({"kind": "ends", "ends": n if n != INFINITE else "infinite"}))
    return OK


def cmd_essential(r: Run) -> int:
    g = r.session.base.graph
    per = {e.name: is_essential_edge(g, e.name) for e in g.edge_pairs()}
    ess = is_essential(g)
    for name in sorted(per):
        print(f"{name}: {'essential' if per[name] else 'inessential'}")
    print(f"essential: {ess}")
    r.write("essential.json", dumps({"kind": "essential", "essential": ess, "edges": per}))
    return OK


def cmd_tree_ball(r: Run) -> int:
    t = r.session.splitting(r.args.splitting)
    ball = t.expand_ball(radius=r.radius if r.radius is not None else 2)
    print(f"ball: {len(ball.dist)} vertices, {len(ball.edges)} edges, tree={ball.is_tree()}")
    r.write("tree-ball.json", dumps(dict(ball.to_json(), kind="tree-ball", splitting=t.name)))
    r.write("tree-ball.dot", ball.to_dot())
    return OK if ball.is_tree() else FAIL


def _pair(r: Run):
    if not r.args.pair or len(r.args.pair) != 2:
        raise InputError("--pair T1 T2 is required")
    return (r.session.splitting(n) for n in r.args.pair)


def cmd_core(r: Run) -> int:
    t1, t2 = _pair(r)
    z = build_core(t1, t2, max_rounds=r.session.budgets.rounds, max_radius=r.radius)
    rep = check_core(z, r.session.family(r.args.family))
    print(f"core: {z.counts()}")
    r.write("core.json", dumps(complex_to_json(z)))
    r.write("core.dot", complex_to_dot(z))
    for i in (1, 2):
        r.write(f"leaves{i}.dot", leaf_space_to_dot(leaf_space(z, i), f"leaves{i}"))
    r.write("core-check.json", dumps(rep.to_json()))
    return _print_report(rep)


def cmd_shave(r: Run) -> int:
    trace = SurgeryTrace()
    if r.args.splitting:
        t = r.session.splitting(r.args.splitting)
        out, _ = shave_tree(t, trace)
        print(f"shaved {t.name}: {len(trace)} hair collapses, {out.n_edge_orbits()} edge orbits left")
        result = {"kind": "shave", "target": "splitting", "splitting": t.name,
                  "result": splitting_to_json(out), "trace": trace.to_json()}
        ok = out.is_minimal()
    else:
        t1, t2 = _pair(r)
        z = build_core(t1, t2, max_rounds=r.session.budgets.rounds, max_radius=r.radius)
        out, reports = shaved_core(z, 1, trace)
        print(f"shaved core: {len(trace)} free-face collapses, counts {out.counts()}")
        result = {"kind": "shave", "target": "core", "pair": list(r.args.pair),
                  "result": json.loads(complex_json(out)), "trace": trace.to_json(),
                  "collapses_ok": all(c.ok for c in reports)}
        ok = result["collapses_ok"]
        r.write("shaved-core.dot", complex_to_dot(out, "shaved"))
    r.write("shave.json", dumps(result))
    if r.trace_path():
        r.trace_path().write_text(dumps(result), encoding="utf-8")
    return OK if ok else FAIL


def cmd_replay(r: Run) -> int:
    if not r.args.artifact:
        raise InputError("replay needs the recorded shave artifact (or --trace FILE)")
    d = _load_artifact(r.args.artifact)
    if "trace" not in d or d.get("target") not in ("splitting", "core"):
        raise InputError(f"{r.args.artifact}: not a shave artifact")
    trace = SurgeryTrace.from_json(d["trace"])
    if d["target"] == "splitting":
        out = replay_tree(r.session.splitting(d["splitting"]), trace)
        same = splitting_to_json(out) == d["result"]
    else:
        t1, t2 = (r.session.splitting(n) for n in d["pair"])
        z = build_core(t1, t2, max_rounds=r.session.budgets.rounds, max_radius=r.radius)
        out = replay_complex(z, trace)
        same = json.loads(complex_json(out)) == d["result"]
    print(f"replay of {len(trace)} moves: {'identical' if same else 'DIFFERS'}")
    return OK if same else FAIL


def cmd_blowup(r: Run) -> int:
    t_inf = r.session.splitting(r.args.inf)
    t_f = r.session.splitting(r.args.fin)
    rep = blowup_vertex(t_inf, t_f, r.session.family(r.args.family),
                        max_rounds=r.session.budgets.rounds, max_radius=r.radius)
    print(f"blow-up at {rep.vertex}: {rep.case}, tree {rep.tree!r}")
    r.write("blowup.json", dumps(rep.to_json()))
    r.write("blowup.dot", rep.tree.to_dot())
    return _print_report(check_report(rep, t_inf))


def cmd_cleave(r: Run) -> int:
    t = r.session.splitting(r.args.splitting)
    t_f = r.session.splitting(r.args.fin) if r.args.fin else None
    res = cleave_tree(t, r.session.family(r.args.family), t_f, max_radius=r.radius,
                      bound=r.steps)
    print(f"cleave: {res.case}, orbits {res.counts_before} -> {res.counts_after}")
    r.write("cleave.json", dumps(res.to_json()))
    r.write("cleave.dot", res.tree.to_dot())
    return _print_report(res.check())


def cmd_swarup(r: Run) -> int:
    t = r.session.splitting(r.args.splitting)
    if t.n_edge_orbits() != 1:
        raise HypothesisViolation("swarup needs a one-edge splitting")
    f = t.positive_edges()[0]
    b = t.base
    fam = r.session.family(r.args.family)
    if f.source == f.target:
        res = swarup_hnn(b, t.vgroup[f.source], f.group, f.stable, fam, bound=r.steps,
                         max_radius=r.radius)
    else:
        if f.stable != b.identity:
            raise InputError("amalgam splittings must have a trivial stable letter")
        res = swarup_amalgam(b, t.vgroup[f.source], t.vgroup[f.target], f.group, fam,
                             bound=r.steps, max_radius=r.radius)
    print(f"C1 = {res.c1}, below {res.side}, after {res.iterations} second constructions")
    r.write("swarup.json", dumps(res.to_json()))
    return _print_report(res.check())


def cmd_one_ended(r: Run) -> int:
    g = r.session.graph(r.args.graph)
    res = one_ended_rel(g, bound=r.steps)
    print(res.status + (f" (witness at {res.vertex})" if res.vertex else ""))
    d = res.to_json()
    d["graph"] = _graph_to_json(g)
    r.write("one-ended.json", dumps(d))
    if res.status == "unknown":
        return UNKNOWN
    return _print_report(res.check(g))


def cmd_verify(r: Run) -> int:
    if not r.args.artifact:
        raise InputError("verify needs a certificate file")
    d = _load_artifact(r.args.artifact)
    return _print_report(verify_artifact(r.session, d))


COMMANDS = {
    "validate": cmd_validate, "ends": cmd_ends, "essential": cmd_essential,
    "tree-ball": cmd_tree_ball, "core": cmd_core, "shave": cmd_shave, "blowup": cmd_blowup,
    "cleave": cmd_cleave, "swarup": cmd_swarup, "one-ended": cmd_one_ended,
    "verify": cmd_verify, "replay": cmd_replay,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vfsplit", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("session", help="session JSON file")
    p.add_argument("artifact", nargs="?", help="certificate or trace file (verify, replay)")
    p.add_argument("--splitting", help="splitting name")
    p.add_argument("--pair", nargs=2, metavar=("T1", "T2"), help="two splitting names")
    p.add_argument("--inf", help="splitting with infinite edge groups (blowup)")
    p.add_argument("--fin", help="splitting with finite edge groups (blowup, cleave)")
    p.add_argument("--family", help="family name")
    p.add_argument("--graph", help="two-ended graph name (one-ended)")
    p.add_argument("--budget-radius", type=int, default=None)
    p.add_argument("--budget-steps", type=int, default=None)
    p.add_argument("--trace", help="write (shave) or read (replay) a surgery trace file")
    p.add_argument("--out", help="directory for JSON and DOT artifacts")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized self-checks")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "replay" and not args.artifact and args.trace:
        args.artifact = args.trace
    try:
        run = Run(args)
        return COMMANDS[args.command](run)
    except BudgetExceeded as exc:
        print(f"unknown: {exc}", file=sys.stderr)
        return UNKNOWN
    except (HypothesisViolation, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAIL
    except VFSplitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAIL


if __name__ == "__main__":
    sys.exit(main())
