"""Convert the Emotions music dataset from Orange's tab format to CSV.

The Orange 2.7 source distribution ships the dataset as
Orange/datasets/emotions.tab: three header lines (names, types, flags), then
593 rows of 72 continuous features followed by 6 binary labels.

    python3 emotions_from_tab.py path/to/emotions.tab ../emotions
"""

import csv
import sys
from pathlib import Path

N_FEATURES = 72


def main(src: Path, dest: Path) -> None:
    lines = src.read_text().splitlines()
    names = lines[0].split("\t")
    rows = [line.split("\t") for line in lines[3:] if line.strip()]
    dest.mkdir(parents=True, exist_ok=True)
    with open(dest / "features.csv", "w", newline="") as fx, open(dest / "labels.csv", "w", newline="") as fy:
        wx, wy = csv.writer(fx, lineterminator="\n"), csv.writer(fy, lineterminator="\n")
        wx.writerow(names[:N_FEATURES])
        wy.writerow(names[N_FEATURES:])
        for r in rows:
            wx.writerow(r[:N_FEATURES])
            wy.writerow(r[N_FEATURES:])
    print(f"wrote {len(rows)} rows")


if __name__ == "__main__":
    main(Path(sys.argv[1]), Path(sys.argv[2]))
