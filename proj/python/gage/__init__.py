"""Attributed graph embeddings.

``embed`` takes an N x N adjacency and an N x d attribute matrix (scipy sparse
or dense numpy) and returns a dict with the embedding, the CPD factors and
solver diagnostics.
"""

import numpy as np

from . import _core
from ._core import DataError, NumericalError, auc, average_precision

__all__ = ["embed", "assemble", "reconstruction_error", "auc", "average_precision",
           "DataError", "NumericalError"]


def _coo(m):
    if hasattr(m, "tocoo"):
        c = m.tocoo()
        return c.shape, np.asarray(c.row), np.asarray(c.col), np.asarray(c.data, dtype=float)
    a = np.asarray(m, dtype=float)
    if a.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    r, c = np.nonzero(a)
    return a.shape, r, c, a[r, c]


def _pair(adjacency, attributes):
    (n, n2), ar, ac, av = _coo(adjacency)
    (n3, d), xr, xc, xv = _coo(attributes)
    if n != n2 or n != n3:
        raise ValueError(f"adjacency is {n}x{n2} but attributes have {n3} rows")
    return n, d, ar, ac, av, xr, xc, xv


def embed(adjacency, attributes, rank=16, lam=0.8, tol=1e-6, max_iter=50, seed=0, init="evd"):
    return _core.embed_coo(*_pair(adjacency, attributes), rank=rank, lam=lam, tol=tol,
                           max_iter=max_iter, seed=seed, init=init)


def assemble(result, lam):
    """Re-weights an embed() result for another lambda without re-solving."""
    return _core.assemble(result["u"], result["u_prime"], result["c"], lam)


def reconstruction_error(adjacency, attributes, result):
    return _core.reconstruction_error(*_pair(adjacency, attributes), result["u"],
                                      result["u_prime"], result["c"])
