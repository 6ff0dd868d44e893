"""Plot summary BER against distance from an optoeq CSV.

usage: python plot_ber.py results.csv [out.png]
"""

import csv
import sys
from collections import defaultdict

import matplotlib.pyplot as plt

KP4 = 2.24e-4


def main(path, out=None):
    curves = defaultdict(list)
    with open(path, newline="") as f:
        for row in csv.DictReader(f):
            if row["kind"] != "summary" or row["status"] != "ok":
                continue
            n = f"({row['n_neurons']})" if row["n_neurons"] else ""
            key = f"{row['equalizer']}{n} {row['slice_set']}"
            # Zero errors cannot sit on a log axis; plot the CI upper bound.
            ber = float(row["ber"]) or float(row["ci_high"])
            curves[key].append((float(row["distance_km"]), ber))
    for key, pts in sorted(curves.items()):
        pts.sort()
        plt.semilogy([p[0] for p in pts], [p[1] for p in pts], "o-", label=key)
    plt.axhline(KP4, color="k", ls="--", lw=0.8, label="KP4")
    plt.xlabel("distance (km)")
    plt.ylabel("BER")
    plt.legend(fontsize=8)
    plt.grid(True, which="both", alpha=0.3)
    if out:
        plt.savefig(out, dpi=150)
    else:
        plt.show()


if __name__ == "__main__":
    main(*sys.argv[1:3])
