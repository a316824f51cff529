"""Convert a dense MULAN-style ARFF file to the features/labels CSV pair.

MULAN datasets put the label attributes last, each declared as {0,1}.
Sparse ARFF ({index value, ...} rows) is not handled.

    python3 arff_to_csv.py yeast.arff 14 ../yeast
"""

import csv
import sys
from pathlib import Path

from scipy.io import arff


def main(src: Path, n_labels: int, dest: Path) -> None:
    data, meta = arff.loadarff(src)
    names = meta.names()
    feat, lab = names[:-n_labels], names[-n_labels:]
    dest.mkdir(parents=True, exist_ok=True)
    with open(dest / "features.csv", "w", newline="") as fx, open(dest / "labels.csv", "w", newline="") as fy:
        wx, wy = csv.writer(fx, lineterminator="\n"), csv.writer(fy, lineterminator="\n")
        wx.writerow(feat)
        wy.writerow(lab)
        for row in data:
            wx.writerow([repr(float(row[n])) for n in feat])
            wy.writerow([row[n].decode() if isinstance(row[n], bytes) else int(row[n]) for n in lab])
    print(f"wrote {len(data)} rows")


if __name__ == "__main__":
    main(Path(sys.argv[1]), int(sys.argv[2]), Path(sys.argv[3]))
