"""Rebuild the UCI Ecoli dataset (336 rows, 8 classes) from KEEL binary splits.

The KEEL imbalanced collection (also bundled in the `imbalanced_databases`
Python package) stores Ecoli only as one-vs-rest files. ecoli1 keeps all 336
rows in UCI order; the class of each row is recovered by intersecting the
positive sets of the other splits. Some "_vs_" files scale values by 100 and
drop the constant-ish `chg` column, so rows are compared on a normalized key
without it.

Class ids follow the UCI class order:
0 cp, 1 im, 2 pp, 3 imU, 4 om, 5 omL, 6 imL, 7 imS.

    python3 ecoli_from_keel.py path/to/keel/ecoli ../ecoli
"""

import collections
import sys
from pathlib import Path

CLASS_ORDER = ["cp", "im", "pp", "imU", "om", "omL", "imL", "imS"]


def norm(v, scaled):
    k = int(round(float(v) if scaled else float(v) * 100))
    while k and k % 10 == 0:
        k //= 10
    return k


def load(src, name):
    rows = []
    for line in open(src / f"{name}.dat"):
        line = line.strip()
        if not line or line.startswith("@"):
            continue
        parts = [p.strip() for p in line.split(",")]
        rows.append((parts[:-1], parts[-1]))
    return rows


def key(parts, scaled):
    ks = [norm(v, scaled) for v in parts]
    if len(ks) == 7:
        ks = ks[:3] + ks[4:]
    return tuple(ks)


def main(src: Path, dest: Path) -> None:
    base = load(src, "ecoli1")
    assert len(base) == 336
    raw = [r[0] for r in base]
    basekeys = [key(r, False) for r in raw]

    def groups(name, scaled):
        g = collections.defaultdict(collections.Counter)
        for f, label in load(src, name):
            g[label][key(f, scaled)] += 1
        return g

    def pos(name):
        return groups(name, False)["positive"]

    im, pp, imu, om = pos("ecoli1"), pos("ecoli2"), pos("ecoli3"), pos("ecoli4")
    cp = groups("ecoli-0_vs_1", False)["positive"]
    iml = groups("ecoli-0-2-6-7_vs_3-5", True)["positive"] - om
    oml = groups("ecoli-0-6-7_vs_5", True)["negative"] - cp - pp
    ims = collections.Counter(basekeys) - cp - im - pp - imu - om - oml - iml
    pool = dict(zip(CLASS_ORDER, [cp, im, pp, imu, om, oml, iml, ims]))
    pool = {n: collections.Counter(c) for n, c in pool.items()}

    dest.mkdir(parents=True, exist_ok=True)
    with open(dest / "features.csv", "w") as fx, open(dest / "labels.csv", "w") as fy:
        for r, k in zip(raw, basekeys):
            hits = [n for n, c in pool.items() if c[k] > 0]
            assert len(hits) == 1, (r, hits)
            pool[hits[0]][k] -= 1
            fx.write(",".join(r) + "\n")
            fy.write(f"{CLASS_ORDER.index(hits[0])}\n")
    print("wrote 336 rows")


if __name__ == "__main__":
    main(Path(sys.argv[1]), Path(sys.argv[2]))
