//! Plot-script emission: a small matplotlib program rendering the risk
//! curves of one experiment, one panel per sample size.

/// Build the plot script text for an example's curve files.
pub fn plot_script(example: u32, curves: &[(String, String, usize)]) -> String {
    let mut files = String::new();
    for (file, procedure, n) in curves {
        files.push_str(&format!("    (\"{file}\", \"{procedure}\", {n}),\n"));
    }
    format!(
        r##"#!/usr/bin/env python3
"""Render the risk curves of example {example}: risk versus model, one panel
per sample size, with the optimal-risk curve drawn solid."""

import csv
import sys
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

CURVES = [
{files}]

STYLE = {{
    "closest-to-optimal": dict(color="tab:blue", linestyle="-", marker=""),
    "minimax": dict(color="tab:purple", linestyle="--", marker=""),
    "ml": dict(color="tab:red", linestyle="-.", marker=""),
    "robbins": dict(color="tab:green", linestyle=":", marker=""),
    "consistent": dict(color="tab:orange", linestyle=":", marker=""),
}}


def read_curve(path):
    thetas, risks, optimal = [], [], []
    with open(path) as handle:
        for row in csv.DictReader(r for r in handle if not r.startswith("#")):
            thetas.append(float(row["theta"]))
            risks.append(float(row["risk"]))
            optimal.append(float(row["optimal_risk"]))
    return thetas, risks, optimal


def main():
    by_n = defaultdict(list)
    for path, procedure, n in CURVES:
        by_n[n].append((path, procedure))
    if not by_n:
        sys.exit("no curves were generated")
    sizes = sorted(by_n)
    fig, axes = plt.subplots(1, len(sizes), figsize=(5 * len(sizes), 4), squeeze=False)
    for ax, n in zip(axes[0], sizes):
        optimal_drawn = False
        for path, procedure in by_n[n]:
            thetas, risks, optimal = read_curve(path)
            if not optimal_drawn:
                ax.plot(thetas, optimal, color="black", label="optimal")
                optimal_drawn = True
            ax.plot(thetas, risks, label=procedure, **STYLE.get(procedure, {{}}))
        ax.set_title(f"n = {{n}}")
        ax.set_xlabel("model parameter")
        ax.set_ylabel("risk")
        ax.legend(fontsize=8)
    fig.suptitle("Example {example}")
    fig.tight_layout()
    out = "example{example}.png"
    fig.savefig(out, dpi=150)
    print(f"wrote {{out}}")


if __name__ == "__main__":
    main()
"##
    )
}
