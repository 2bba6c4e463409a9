"""Numpy twin of the compiled scan kernels.

Chunk semantics, enumeration order and tie-breaking match _ckernels exactly:
subsets in lex order by rank, pairings scanned in label order, first
maximum wins (numpy argmax on a rank-major/pairing-minor layout gives the
same winner as the compiled strict-improvement loop).
"""

import itertools
import math
from functools import lru_cache

import numpy as np

_BATCH = 1 << 16


@lru_cache(maxsize=8)
def _subset_index(n):
    count = math.comb(n, 4)
    flat = np.fromiter(
        itertools.chain.from_iterable(itertools.combinations(range(n), 4)),
        dtype=np.int32,
        count=4 * count,
    )
    return flat.reshape(count, 4)


def _batches(start, stop):
    for s in range(start, stop, _BATCH):
        yield s, min(stop, s + _BATCH)


def _argbest(R, offset):
    """(value, rank, pairing) of the first flat maximum of an (m, 3) residual array."""
    flat = np.argmax(R)
    row, col = divmod(int(flat), 3)
    return float(R[row, col]), offset + row, col


def _best3(a, b):
    if a is None:
        return b
    if b is None or a[0] > b[0] or (a[0] == b[0] and (a[1], a[2]) <= (b[1], b[2])):
        return a
    return b


def scan_products(fmat, start, stop):
    n = fmat.shape[0]
    idx = _subset_index(n)
    best = None
    for s, e in _batches(start, stop):
        I, J, K, L = (idx[s:e, t] for t in range(4))
        p0 = fmat[I, K] * fmat[J, L]
        p1 = fmat[I, J] * fmat[K, L]
        p2 = fmat[I, L] * fmat[J, K]
        with np.errstate(divide="ignore", invalid="ignore"):
            R = np.stack(((p0 - p1 - p2) / p0, (p1 - p0 - p2) / p1, (p2 - p0 - p1) / p2), axis=1)
        R[~np.isfinite(R)] = -np.inf
        best = _best3(best, _argbest(R, s))
    return best


def scan_fourpoint(dmat, start, stop):
    n = dmat.shape[0]
    idx = _subset_index(n)
    best = None
    for s, e in _batches(start, stop):
        I, J, K, L = (idx[s:e, t] for t in range(4))
        S = np.stack((dmat[I, K] + dmat[J, L], dmat[I, J] + dmat[K, L], dmat[I, L] + dmat[J, K]), axis=1)
        order = np.sort(S, axis=1)
        v = order[:, 2] - order[:, 1]
        row = int(np.argmax(v))
        col = int(np.argmax(S[row]))
        best = _best3(best, (float(v[row]), s + row, col))
    return best


def scan_apt(umat, start, stop):
    n = umat.shape[0]
    idx = _subset_index(n)
    best_e = None
    best_s = None
    for s, e in _batches(start, stop):
        I, J, K, L = (idx[s:e, t] for t in range(4))
        ua0, ub0 = umat[I, K], umat[J, L]
        ua1, ub1 = umat[I, J], umat[K, L]
        ua2, ub2 = umat[I, L], umat[J, K]
        m = np.maximum.reduce([ua0, ub0, ua1, ub1, ua2, ub2])
        E0 = np.exp(ua0 + ub0 - m)
        E1 = np.exp(ua1 + ub1 - m)
        E2 = np.exp(ua2 + ub2 - m)
        Re = np.stack((E0 - E1 - E2, E1 - E0 - E2, E2 - E0 - E1), axis=1)
        best_e = _best3(best_e, _argbest(Re, s))
        B0 = (E0 - np.exp(ua0 - ub0 - m) - np.exp(ub0 - ua0 - m) + np.exp(-ua0 - ub0 - m)) * 0.25
        B1 = (E1 - np.exp(ua1 - ub1 - m) - np.exp(ub1 - ua1 - m) + np.exp(-ua1 - ub1 - m)) * 0.25
        B2 = (E2 - np.exp(ua2 - ub2 - m) - np.exp(ub2 - ua2 - m) + np.exp(-ua2 - ub2 - m)) * 0.25
        Rs = np.stack((B0 - B1 - B2, B1 - B0 - B2, B2 - B0 - B1), axis=1)
        best_s = _best3(best_s, _argbest(Rs, s))
    if best_e is None:
        return None
    return best_e + best_s
