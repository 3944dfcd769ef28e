#!/usr/bin/env python3
"""Generate a deterministic synthetic embedding file for a trial fixture.

Reads a grouping CSV (columns: group,pt,...) and emits one embedding row
per PT.  Each named group gets an orthonormal center direction; members
are the center plus noise drawn from a reserved orthogonal subspace, so
within-group cosines sit near 0.9 while every cross-group cosine is ~0.
PTs in the "None" group get mutually orthogonal directions of their own.
"""

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

DIM = 64
NOISE_NORM = 0.3


def make_embeddings(groups: dict[str, list[str]], seed: int) -> dict[str, np.ndarray]:
    rng = np.random.default_rng(seed)
    basis, _ = np.linalg.qr(rng.standard_normal((DIM, DIM)))
    named = [g for g in groups if g != "None"]
    singles = groups.get("None", [])
    need = len(named) + len(singles)
    if need + 8 > DIM:
        sys.exit(f"too many groups for dimension {DIM}")
    noise_basis = basis[:, need:]
    vectors: dict[str, np.ndarray] = {}
    col = 0
    for g in named:
        center = basis[:, col]
        col += 1
        for pt in groups[g]:
            coef = rng.standard_normal(noise_basis.shape[1])
            noise = noise_basis @ (coef / np.linalg.norm(coef) * NOISE_NORM)
            v = center + noise
            vectors[pt] = v / np.linalg.norm(v)
    for pt in singles:
        vectors[pt] = basis[:, col]
        col += 1
    return vectors


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--groups", required=True,
                        help="CSV with group,pt columns")
    parser.add_argument("--out", required=True, help="output embedding CSV")
    parser.add_argument("--seed", type=int, default=20240801)
    args = parser.parse_args()

    groups: dict[str, list[str]] = {}
    with open(args.groups, newline="", encoding="utf-8") as f:
        for row in csv.DictReader(f):
            groups.setdefault(row["group"], []).append(row["pt"])
    vectors = make_embeddings(groups, args.seed)

    with open(args.out, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        for pt, v in vectors.items():
            writer.writerow([pt] + [f"{x:.8f}" for x in v])
    print(f"wrote {len(vectors)} embeddings to {args.out}")


if __name__ == "__main__":
    main()
