#!/usr/bin/env python3
"""Small synthetic attributed graph with planted classes.

Attributes follow the noise-free two-slab model: every node carries the
centered indicator of its class scaled per class, plus a few shared
directions, so the attribute Gram matrix has exactly low rank. Edges are
drawn from a planted partition on the same classes.
"""
import argparse
import pathlib

import numpy as np


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nodes", type=int, default=30)
    ap.add_argument("--classes", type=int, default=3)
    ap.add_argument("--dims", type=int, default=6)
    ap.add_argument("--p-in", type=float, default=0.5)
    ap.add_argument("--p-out", type=float, default=0.04)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--out", type=pathlib.Path, required=True)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    n, k = args.nodes, args.classes
    cls = np.arange(n) % k
    u = np.zeros((n, k))
    u[np.arange(n), cls] = 1.0
    u -= u.mean(axis=0)
    mix = rng.uniform(0.5, 2.0, size=(k, args.dims))
    attrs = u @ mix

    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            p = args.p_in if cls[i] == cls[j] else args.p_out
            if rng.random() < p:
                edges.append((i, j))

    args.out.mkdir(parents=True, exist_ok=True)
    with open(args.out / "graph.edges", "w") as f:
        f.write(f"# planted partition, n={n}, seed={args.seed}\n")
        for i, j in edges:
            f.write(f"{i}\t{j}\n")
    nz = [(i, j, attrs[i, j]) for i in range(n) for j in range(args.dims) if attrs[i, j] != 0]
    with open(args.out / "attrs.mtx", "w") as f:
        f.write("%%MatrixMarket matrix coordinate real general\n")
        f.write(f"{n} {args.dims} {len(nz)}\n")
        for i, j, v in nz:
            f.write(f"{i + 1} {j + 1} {v:.17g}\n")
    with open(args.out / "labels.tsv", "w") as f:
        for i in range(n):
            f.write(f"{i}\tclass{cls[i]}\n")
    print(f"{n} nodes, {len(edges)} edges, {args.dims} attributes, {k} classes -> {args.out}")


if __name__ == "__main__":
    main()
