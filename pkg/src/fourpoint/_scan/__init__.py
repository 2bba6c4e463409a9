"""Quadruple-scan engine: compiled kernels with a pure-numpy twin.

The distinct 4-subsets (i<j<k<l) of an n-point space are enumerated in
lexicographic order and addressed by rank.  Kernels process half-open rank
ranges and report (value, rank, pairing); chunks partition the rank space,
so the reduction (max value, ties to the smallest rank then pairing) is
independent of the partitioning and of worker scheduling.

Pairings of a sorted subset are labelled in tie-break order:
index 0 = "13|24" (d_ik, d_jl), 1 = "12|34" (d_ij, d_kl),
2 = "14|23" (d_il, d_jk).

Set FOURPOINT_PURE_PYTHON=1 to force the numpy kernels.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import _pykernels

if os.environ.get("FOURPOINT_PURE_PYTHON"):
    _impl = _pykernels
    COMPILED = False
else:
    try:
        from . import _ckernels as _impl

        COMPILED = True
    except ImportError:
        _impl = _pykernels
        COMPILED = False

PAIRING_LABELS = ("13|24", "12|34", "14|23")

__all__ = [
    "COMPILED",
    "PAIRING_LABELS",
    "backend",
    "n_subsets",
    "unrank_subset",
    "scan_product_defect",
    "scan_apt_defect",
    "scan_fourpoint_defect",
    "product_residual",
    "apt_exp_residual",
    "apt_sn_bracket",
    "fourpoint_residual",
]


def backend():
    return "compiled" if COMPILED else "python"


def n_subsets(n):
    return math.comb(n, 4)


def unrank_subset(n, r):
    """The rank-r subset (i<j<k<l) in lexicographic order."""
    i = 0
    while True:
        c = math.comb(n - 1 - i, 3)
        if r < c:
            break
        r -= c
        i += 1
    j = i + 1
    while True:
        c = math.comb(n - 1 - j, 2)
        if r < c:
            break
        r -= c
        j += 1
    k = j + 1
    while True:
        c = n - 1 - k
        if r < c:
            break
        r -= c
        k += 1
    return i, j, k, k + 1 + r


def _chunks(total, workers):
    nchunks = max(1, min(total, workers * 4))
    bounds = np.linspace(0, total, nchunks + 1).astype(np.int64)
    return [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


def _run(fn, total, workers):
    if total <= 0:
        return []
    if workers <= 1 or total < 8192:
        return [fn(0, total)]
    parts = _chunks(total, workers)
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(lambda ab: fn(*ab), parts))


def _merge(cands):
    best = None
    for c in cands:
        if c is None:
            continue
        if best is None or c[0] > best[0] or (c[0] == best[0] and (c[1], c[2]) < (best[1], best[2])):
            best = c
    return best


def scan_product_defect(fmat, workers=1):
    """Max over subsets/pairings of (P_left - P_1 - P_2)/P_left.

    P are the three products of opposite-pair entries of ``fmat``.
    Returns (defect, subset, pairing_index).
    """
    fmat = np.ascontiguousarray(fmat, dtype=np.float64)
    n = fmat.shape[0]
    total = n_subsets(n)
    best = _merge(_run(lambda a, b: _impl.scan_products(fmat, a, b), total, workers))
    if best is None:
        return None
    return best[0], unrank_subset(n, best[1]), best[2]


def scan_apt_defect(umat, workers=1):
    """Exponential and sinh-product residual scans over ``umat`` (exponent units).

    Returns ((exp_defect, subset, pairing), (sn_bracket, subset, pairing));
    the sinh bracket still needs the caller's 1/(-kappa) factor.
    """
    umat = np.ascontiguousarray(umat, dtype=np.float64)
    n = umat.shape[0]
    total = n_subsets(n)
    results = _run(lambda a, b: _impl.scan_apt(umat, a, b), total, workers)
    be = _merge([r[:3] if r else None for r in results])
    bs = _merge([r[3:] if r else None for r in results])
    if be is None:
        return None
    return (
        (be[0], unrank_subset(n, be[1]), be[2]),
        (bs[0], unrank_subset(n, bs[1]), bs[2]),
    )


def scan_fourpoint_defect(dmat, workers=1):
    """Max over subsets of (largest pairing sum - second largest).

    Returns (defect, subset, argmax_pairing_index).
    """
    dmat = np.ascontiguousarray(dmat, dtype=np.float64)
    n = dmat.shape[0]
    total = n_subsets(n)
    best = _merge(_run(lambda a, b: _impl.scan_fourpoint(dmat, a, b), total, workers))
    if best is None:
        return None
    return best[0], unrank_subset(n, best[1]), best[2]


# ---------------------------------------------------------------- reference
# Scalar re-evaluations, structurally identical to the kernels; used to
# confirm that a reported witness reproduces its defect.

def _pairs(quad):
    i, j, k, l = quad
    return ((i, k, j, l), (i, j, k, l), (i, l, j, k))


def product_residual(fmat, quad, pairing):
    ps = [fmat[a, b] * fmat[c, d] for (a, b, c, d) in _pairs(quad)]
    others = [p for t, p in enumerate(ps) if t != pairing]
    return (ps[pairing] - others[0] - others[1]) / ps[pairing]


def fourpoint_residual(dmat, quad):
    ss = sorted(dmat[a, b] + dmat[c, d] for (a, b, c, d) in _pairs(quad))
    return ss[2] - ss[1]


def _quad_exponents(umat, quad):
    us = [(umat[a, b], umat[c, d]) for (a, b, c, d) in _pairs(quad)]
    m = max(max(p) for p in us)
    return us, m


def apt_exp_residual(umat, quad, pairing):
    us, m = _quad_exponents(umat, quad)
    es = [math.exp(a + b - m) for a, b in us]
    others = [e for t, e in enumerate(es) if t != pairing]
    return es[pairing] - others[0] - others[1]


def apt_sn_bracket(umat, quad, pairing):
    us, m = _quad_exponents(umat, quad)
    bs = [
        (math.exp(a + b - m) - math.exp(a - b - m) - math.exp(b - a - m) + math.exp(-a - b - m))
        * 0.25
        for a, b in us
    ]
    others = [x for t, x in enumerate(bs) if t != pairing]
    return bs[pairing] - others[0] - others[1]
