"""Combinatorial split kernels for particle-subset contractions.

For an n-particle amplitude vector ``a`` over the C(d, n) ordered mode
tuples and a cut size ``m``, the split matrix ``B`` has

    B[rank(k), rank(rest)] = sign(k, rest) * a(sorted(k + rest))

where ``k`` runs over the m-subsets of each occupied tuple and ``sign``
is the parity that sorts the concatenation.  The m-particle reduced
density matrix is ``B B† / C(n, m)`` and its purity is
``||B† B||_F² / C(n, m)²``, so both operations reduce to a scatter plus
a Gram product.  The scatter tables depend only on (d, n, m) and are
precomputed once.
"""

from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

from .backend import default_backend, numba_available


@lru_cache(maxsize=None)
def split_tables(d: int, n: int, m: int):
    """Scatter tables (rows, cols, signs), each of shape (C(d,n), C(n,m))."""
    tuples = list(combinations(range(d), n))
    rank_m = {c: i for i, c in enumerate(combinations(range(d), m))}
    rank_rest = {c: i for i, c in enumerate(combinations(range(d), n - m))}
    positions = list(combinations(range(n), m))
    rows = np.empty((len(tuples), len(positions)), dtype=np.int64)
    cols = np.empty_like(rows)
    signs = np.empty(rows.shape, dtype=np.float64)
    for ti, t in enumerate(tuples):
        for si, pos in enumerate(positions):
            kept = tuple(t[i] for i in pos)
            rest = tuple(t[i] for i in range(n) if i not in pos)
            inversions = sum(1 for a in kept for b in rest if a > b)
            rows[ti, si] = rank_m[kept]
            cols[ti, si] = rank_rest[rest]
            signs[ti, si] = -1.0 if inversions % 2 else 1.0
    for arr in (rows, cols, signs):
        arr.flags.writeable = False
    return rows, cols, signs


def _build_numpy(vals, rows, cols, nrows, ncols):
    # (row, col) pairs are unique: they determine the occupied tuple.
    B = np.zeros((nrows, ncols), dtype=np.complex128)
    B[rows, cols] = vals
    return B


def _purity_numpy(vals, rows, cols, nrows, ncols):
    B = _build_numpy(vals, rows, cols, nrows, ncols)
    G = B.conj().T @ B
    return float(np.sum(np.abs(G) ** 2))


def _build_loop(vals, rows, cols, nrows, ncols):
    B = np.zeros((nrows, ncols), dtype=np.complex128)
    for i in range(vals.shape[0]):
        B[rows[i], cols[i]] = vals[i]
    return B


def _purity_loop(vals, rows, cols, nrows, ncols):
    B = np.zeros((nrows, ncols), dtype=np.complex128)
    for i in range(vals.shape[0]):
        B[rows[i], cols[i]] = vals[i]
    G = np.dot(np.conj(B.T), B)
    total = 0.0
    for i in range(G.shape[0]):
        for j in range(G.shape[1]):
            g = G[i, j]
            total += g.real * g.real + g.imag * g.imag
    return total


if numba_available():
    from numba import njit

    _build_numba = njit(cache=True)(_build_loop)
    _purity_numba = njit(cache=True)(_purity_loop)
else:  # pragma: no cover - exercised only without numba installed
    _build_numba = None
    _purity_numba = None


def _flat_inputs(amplitudes, d, n, m):
    rows, cols, signs = split_tables(d, n, m)
    vals = (signs * amplitudes[:, None]).ravel()
    return vals, rows.ravel(), cols.ravel(), comb(d, m), comb(d, n - m)


def split_matrix(amplitudes, d, n, m, backend=None):
    """Build the split matrix B for cut size m."""
    vals, rows, cols, nrows, ncols = _flat_inputs(amplitudes, d, n, m)
    backend = backend or default_backend()
    if backend == "numba":
        return _build_numba(vals, rows, cols, nrows, ncols)
    return _build_numpy(vals, rows, cols, nrows, ncols)


def split_purity(amplitudes, d, n, m, backend=None):
    """Tr rho_m^2 computed from the split matrix without forming rho_m."""
    vals, rows, cols, nrows, ncols = _flat_inputs(amplitudes, d, n, m)
    backend = backend or default_backend()
    if backend == "numba":
        raw = _purity_numba(vals, rows, cols, nrows, ncols)
    else:
        raw = _purity_numpy(vals, rows, cols, nrows, ncols)
    return raw / comb(n, m) ** 2
