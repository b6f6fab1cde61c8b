#!/usr/bin/env python3
"""Plot trace distance, fidelity and concurrence curves from a vardyn CSV."""

import argparse
import csv

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def load(path):
    with open(path, newline="") as f:
        rows = list(csv.DictReader(f))
    return {key: [float(r[key]) for r in rows] for key in rows[0]}


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("csv")
    parser.add_argument("-o", "--output", default="curves.png")
    args = parser.parse_args()

    data = load(args.csv)
    fig, (left, right) = plt.subplots(1, 2, figsize=(10, 4), sharex=True)
    left.plot(data["t"], data["trace_distance"], label="trace distance")
    left.plot(data["t"], data["fidelity"], label="fidelity")
    left.set_xlabel("t")
    left.legend()
    right.plot(data["t"], data["concurrence_var"], label="variational")
    right.plot(data["t"], data["concurrence_exact"], "--", label="ensemble")
    right.set_xlabel("t")
    right.set_ylabel("concurrence")
    right.legend()
    fig.tight_layout()
    fig.savefig(args.output, dpi=150)


if __name__ == "__main__":
    main()
