#!/usr/bin/env python3
"""Plot the CSV written by `stabound analyze`.

Usage:
    python3 scripts/plot_envelopes.py bounds.csv [out.png]

Draws the Euclidean solution norm (solid) with its eigenvalue-envelope
bounds (dashed), and the weighted norm with its bounds when the CSV has a
trajectory.  Needs matplotlib, which is deliberately not a package
dependency.
"""

import csv
import math
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def main() -> int:
    if len(sys.argv) < 2:
        print(__doc__)
        return 2
    path = sys.argv[1]
    out = sys.argv[2] if len(sys.argv) > 2 else "envelopes.png"
    cols: dict[str, list[float]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            for key, value in row.items():
                cols.setdefault(key, []).append(float(value))

    t = cols["t"]
    has_trajectory = not math.isnan(cols["norm_x_I"][0])
    fig, axes = plt.subplots(1, 2 if has_trajectory else 1, figsize=(11, 4))
    ax = axes[0] if has_trajectory else axes

    if has_trajectory:
        ax.plot(t, cols["norm_x_I"], "b-", label="||x(t)||")
    ax.plot(t, cols["lower_main"], "r--", label="weight-envelope bounds")
    ax.plot(t, cols["upper_main"], "r--")
    ax.plot(t, cols["lower_rugh"], "g:", label="extreme-eigenvalue bounds")
    ax.plot(t, cols["upper_rugh"], "g:")
    ax.set_xlabel("t")
    ax.set_ylabel("Euclidean norm")
    ax.legend()
    ax.set_title("solution norm and envelopes")

    if has_trajectory:
        axw = axes[1]
        axw.plot(t, cols["norm_x_H"], "b-", label="||x(t)||_H(t)")
        axw.plot(t, cols["lower_main_H"], "r--", label="weighted bounds")
        axw.plot(t, cols["upper_main_H"], "r--")
        axw.set_xlabel("t")
        axw.set_ylabel("weighted norm")
        axw.legend()
        axw.set_title("time-varying weighted norm")

    fig.tight_layout()
    fig.savefig(out, dpi=150)
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
