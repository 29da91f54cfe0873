#!/usr/bin/env python3
"""Rebuild the cause-effect pair directory (pairNNNN.txt + pairmeta.txt).

The only offline-reachable copy of the Tuebingen cause-effect pairs is the
resource CSV shipped inside the `cdt` wheel on PyPI. That copy holds the
99 scalar pairs with ids 1..104, renumbered consecutively and re-oriented
so that the cause is always column A. This script maps the ids back to the
repository numbering and restores a two-column layout.

Orientation of the original files is not recoverable from that copy, so the
pairs listed in EFFECT_FIRST are written effect-first (cause in column 2) to
mirror the direction arrows of the repository README as best known. Accuracy
does not depend on orientation; ROC-AUC does.

Usage: tools/fetch_pairs.py [--wheel PATH] [--out data/tuebingen]
"""

import argparse
import csv
import io
import pathlib
import subprocess
import sys
import tempfile
import zipfile

PAIRS_CSV = "cdt/data/resources/Tuebingen_pairs.csv"
TARGETS_CSV = "cdt/data/resources/Tuebingen_targets.csv"

# Repository ids stored effect-first (ground truth Y -> X).
EFFECT_FIRST = {
    13, 14, 15,
    47, 48, 49, 50, 51,
    56, 57, 58, 59, 60, 61, 62, 63,
    68, 69, 73, 75, 79, 80, 84, 89, 90, 92, 99, 101,
}


def cdt_to_repo_id(i: int) -> int:
    # cdt drops the multivariate pairs 52-55 and 71 and renumbers.
    if i <= 51:
        return i
    if i <= 66:
        return i + 4
    return i + 5


def fetch_wheel(dest: pathlib.Path) -> pathlib.Path:
    subprocess.run(
        [sys.executable, "-m", "pip", "download", "cdt==0.6.0", "--no-deps",
         "-d", str(dest)],
        check=True,
    )
    return next(dest.glob("cdt-*.whl"))


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--wheel", type=pathlib.Path)
    ap.add_argument("--out", type=pathlib.Path, default=pathlib.Path("data/tuebingen"))
    args = ap.parse_args()

    with tempfile.TemporaryDirectory() as tmp:
        wheel = args.wheel or fetch_wheel(pathlib.Path(tmp))
        with zipfile.ZipFile(wheel) as z:
            pairs = z.read(PAIRS_CSV).decode()
            targets = z.read(TARGETS_CSV).decode()

    csv.field_size_limit(1 << 30)
    target = {row[0]: float(row[1]) for row in list(csv.reader(io.StringIO(targets)))[1:]}

    args.out.mkdir(parents=True, exist_ok=True)
    meta_lines = []
    for row in list(csv.reader(io.StringIO(pairs)))[1:]:
        name, a, b = row
        if target[name] != 1.0:
            raise SystemExit(f"{name}: unexpected target {target[name]}")
        cause, effect = a.split(), b.split()
        if len(cause) != len(effect):
            raise SystemExit(f"{name}: column length mismatch")
        pid = cdt_to_repo_id(int(name[len("pair"):]))
        if pid in EFFECT_FIRST:
            cols = zip(effect, cause)
            meta = f"{pid:04d} 2 2 1 1 1"
        else:
            cols = zip(cause, effect)
            meta = f"{pid:04d} 1 1 2 2 1"
        with open(args.out / f"pair{pid:04d}.txt", "w") as f:
            f.writelines(f"{u} {v}\n" for u, v in cols)
        meta_lines.append((pid, meta))

    with open(args.out / "pairmeta.txt", "w") as f:
        f.writelines(line + "\n" for _, line in sorted(meta_lines))
    print(f"wrote {len(meta_lines)} pairs to {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
