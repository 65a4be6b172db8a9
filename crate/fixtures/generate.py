"""Regenerates the bundled CSV fixtures. Output is deterministic."""
import csv
import pathlib

import numpy as np

HERE = pathlib.Path(__file__).parent


def write(name, header, rows):
    with open(HERE / name, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([f"{v:.4f}" if isinstance(v, float) else v for v in r])


def separable(rng, m=100):
    rows = []
    for i in range(m):
        label = i % 2
        centre = 0.35 if label == 0 else 0.65
        x = np.clip(rng.normal(centre, 0.05, size=4), 0.0, 1.0)
        rows.append([float(v) for v in x] + [label])
    # anchors so min-max scaling keeps the clusters away from the ends
    rows.append([0.0, 0.0, 0.0, 0.0, 0])
    rows.append([1.0, 1.0, 1.0, 1.0, 1])
    write("separable.csv", ["f0", "f1", "f2", "f3", "class"], rows)


def xor(rng, m=80):
    rows = []
    for _ in range(m):
        x = rng.uniform(0.0, 1.0, size=2)
        label = int((x[0] > 0.5) != (x[1] > 0.5))
        rows.append([float(x[0]), float(x[1]), label])
    write("xor.csv", ["x0", "x1", "label"], rows)


def corral(rng, m=160):
    # target = (A0 and A1) or (B0 and B1); "correlated" agrees with the
    # target 75% of the time; the rest is noise
    rows = []
    for _ in range(m):
        a0, a1, b0, b1, irrelevant = (int(v) for v in rng.integers(0, 2, size=5))
        target = int((a0 and a1) or (b0 and b1))
        correlated = target if rng.uniform() < 0.75 else 1 - target
        noise = float(rng.uniform())
        rows.append([a0, a1, b0, b1, irrelevant, correlated, noise, target])
    write("corral.csv", ["A0", "A1", "B0", "B1", "Irrelevant", "Correlated", "Noise", "class"], rows)


if __name__ == "__main__":
    rng = np.random.default_rng(20240611)
    separable(rng)
    xor(rng)
    corral(rng)
