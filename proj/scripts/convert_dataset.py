#!/usr/bin/env python3
"""Convert public attributed-graph benchmarks to the files gage reads.

Output directory layout (what tests/acceptance/acceptance_datasets expects
under $GAGE_DATA_DIR/<name>/):

    graph.edges   "i<TAB>j" per undirected edge, ids 0..N-1
    attrs.mtx     N x d Matrix Market coordinate real, row r = node r
    labels.tsv    "i<TAB>class"
    nodes.txt     0..N-1, one per line (pins the row order)
    sources.sha256  checksums of the files that were read

Sources:

    linqs  WebKB from LINQS: a directory holding <univ>.content / <univ>.cites
           for cornell, texas, washington and wisconsin (merged into one graph).
    mat    MATLAB file with a sparse adjacency, attribute matrix and label
           vector (BlogCatalog style: Network / Attributes / Label).
    tadw   Text triples as distributed with the Wiki data set: graph.txt
           ("i j"), tfidf.txt ("i feature value") and group.txt ("i label").
"""
import argparse
import hashlib
import pathlib
import sys

import numpy as np
import scipy.sparse as sp


def write(out, adj, attrs, labels):
    out.mkdir(parents=True, exist_ok=True)
    n = adj.shape[0]
    adj = sp.coo_matrix(sp.triu(adj + adj.T, k=1))
    with open(out / "graph.edges", "w") as f:
        for i, j in zip(adj.row, adj.col):
            f.write(f"{i}\t{j}\n")
    x = sp.coo_matrix(attrs)
    keep = x.data != 0
    with open(out / "attrs.mtx", "w") as f:
        f.write("%%MatrixMarket matrix coordinate real general\n")
        f.write(f"{n} {x.shape[1]} {int(keep.sum())}\n")
        for i, j, v in zip(x.row[keep], x.col[keep], x.data[keep]):
            f.write(f"{i + 1} {j + 1} {float(v):.17g}\n")
    with open(out / "labels.tsv", "w") as f:
        for i, c in enumerate(labels):
            if c != "":
                f.write(f"{i}\t{c}\n")
    with open(out / "nodes.txt", "w") as f:
        f.writelines(f"{i}\n" for i in range(n))
    print(f"{n} nodes, {adj.nnz} edges, {x.shape[1]} attributes, "
          f"{len(set(labels) - {''})} classes -> {out}")


def from_linqs(src):
    ids, rows, labels = {}, [], []
    cites = []
    for content in sorted(src.glob("*.content")):
        for line in open(content):
            parts = line.split()
            if not parts:
                continue
            ids[parts[0]] = len(rows)
            rows.append([float(v) for v in parts[1:-1]])
            labels.append(parts[-1])
        cites.append(content.with_suffix(".cites"))
    if not rows:
        sys.exit(f"{src}: no *.content files")
    n = len(rows)
    edges, dangling = set(), 0
    for path in cites:
        for line in open(path):
            parts = line.split()
            if len(parts) != 2:
                continue
            a, b = ids.get(parts[0]), ids.get(parts[1])
            if a is None or b is None:
                dangling += 1
            elif a != b:
                edges.add((min(a, b), max(a, b)))
    if dangling:
        print(f"dropped {dangling} citations to pages without content", file=sys.stderr)
    r, c = zip(*edges)
    adj = sp.coo_matrix((np.ones(len(r)), (r, c)), shape=(n, n))
    return adj, np.array(rows), labels


def from_mat(path, adj_key, attr_key, label_key):
    from scipy.io import loadmat
    m = loadmat(path)
    adj = sp.csr_matrix(m[adj_key])
    adj.setdiag(0)
    adj.eliminate_zeros()
    adj.data[:] = 1.0
    labels = np.asarray(m[label_key]).ravel().tolist()
    return adj, sp.csr_matrix(m[attr_key]), labels


def from_tadw(src):
    groups = [line.split() for line in open(src / "group.txt") if line.strip()]
    labels = {int(i): c for i, c in groups}
    e = np.loadtxt(src / "graph.txt", dtype=np.int64, ndmin=2)
    e = e[e[:, 0] != e[:, 1]]
    t = np.loadtxt(src / "tfidf.txt", ndmin=2)
    n = int(max(max(labels), e.max(), t[:, 0].max())) + 1
    adj = sp.coo_matrix((np.ones(len(e)), (e[:, 0], e[:, 1])), shape=(n, n)).tocsr()
    adj.data[:] = 1.0
    attrs = sp.coo_matrix((t[:, 2], (t[:, 0].astype(np.int64), t[:, 1].astype(np.int64))),
                          shape=(n, int(t[:, 1].max()) + 1))
    return adj, attrs, [labels.get(i, "") for i in range(n)]


def record_sources(out, paths):
    with open(out / "sources.sha256", "w") as f:
        for p in sorted(paths):
            f.write(f"{hashlib.sha256(p.read_bytes()).hexdigest()}  {p.resolve()}\n")


def main():
    ap = argparse.ArgumentParser(description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("source", choices=["linqs", "mat", "tadw"])
    ap.add_argument("input", type=pathlib.Path)
    ap.add_argument("out", type=pathlib.Path)
    ap.add_argument("--adj-key", default="Network")
    ap.add_argument("--attr-key", default="Attributes")
    ap.add_argument("--label-key", default="Label")
    args = ap.parse_args()

    if args.source == "linqs":
        adj, attrs, labels = from_linqs(args.input)
    elif args.source == "mat":
        adj, attrs, labels = from_mat(args.input, args.adj_key, args.attr_key, args.label_key)
    else:
        adj, attrs, labels = from_tadw(args.input)
    unlabeled = sum(1 for c in labels if c == "")
    if unlabeled:
        print(f"{unlabeled} nodes have no label and are left out of labels.tsv", file=sys.stderr)
    write(args.out, adj, attrs, labels)
    if args.input.is_dir():
        record_sources(args.out, [p for p in args.input.iterdir() if p.is_file()])
    else:
        record_sources(args.out, [args.input])


if __name__ == "__main__":
    main()
