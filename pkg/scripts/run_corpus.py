"""Run the CLI over the corpus and print each command with its exit code.

Usage: ``python3 scripts/run_corpus.py [--out DIR]``.  Artifacts for each
command land in ``DIR/<session>-<command>/``.
"""

from __future__ import annotations

import argparse
import tempfile
from contextlib import redirect_stdout
from io import StringIO
from pathlib import Path

from vfsplit.cli import main as cli

CORPUS = Path(__file__).resolve().parent.parent / "corpus"

JOBS = [
    ("z", "validate", []), ("z", "ends", []),
    ("finite", "ends", []), ("modular", "ends", []), ("z4_z6", "essential", []),
    ("dihedral", "core", ["--pair", "T", "T"]),
    ("f2", "core", ["--pair", "T1", "T2"]),
    ("f2", "shave", ["--pair", "T1", "T2"]),
    ("triple", "core", ["--pair", "T", "YXZ"]),
    ("f3", "blowup", ["--inf", "Tinf", "--fin", "Tf"]),
    ("f3", "blowup", ["--inf", "Tinf", "--fin", "Tf2"]),
    ("f3", "cleave", ["--splitting", "Tinf", "--fin", "Tf"]),
    ("f3", "swarup", ["--splitting", "Tinf"]),
    ("f3", "swarup", ["--splitting", "Thnn"]),
    ("f2", "one-ended", ["--graph", "double_a"]),
    ("f2", "one-ended", ["--graph", "double_a2b2"]),
]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=None)
    args = ap.parse_args()
    root = args.out or Path(tempfile.mkdtemp(prefix="vfsplit-"))
    worst = 0
    for n, (session, command, extra) in enumerate(JOBS):
        out = root / f"{n:02d}-{session}-{command}"
        buf = StringIO()
        with redirect_stdout(buf):
            code = cli([command, str(CORPUS / f"{session}.json"), "--out", str(out), *extra])
        first = buf.getvalue().strip().splitlines()[:1] or [""]
        print(f"[{code}] {session:9s} {command:10s} {' '.join(extra):28s} {first[0]}")
        worst = max(worst, code)
    print(f"artifacts in {root}")
    return worst


if __name__ == "__main__":
    raise SystemExit(main())
