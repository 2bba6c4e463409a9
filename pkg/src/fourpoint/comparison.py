"""Comparison quadrilaterals in the curvature-kappa model plane (kappa < 0).

A quadruple is embedded as two triangles glued along one diagonal, the two
free vertices on opposite sides, with the glued diagonal placed at exact
equality.  The asymptotic comparison defect measures how much the other
diagonal of the original space exceeds its embedded counterpart on the
sn-scale; nonpositive means the space is at least as thin as the model.
"""

import itertools
import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import model
from .model import ModelPoint, angle_from_sides, model_distance, point_from_polar, sas_distance
from ._scan import PAIRING_LABELS, n_subsets

__all__ = [
    "ModelPoint",
    "AscatCertificate",
    "model_distance",
    "embed_triangle",
    "comparison_quadrilateral",
    "ascat_defect",
]

_BATCH = 1 << 14


def embed_triangle(a, b, c, kappa):
    """Place a triangle with side lengths (a, b, c) in the kappa-plane.

    p1 sits at the sheet apex, p2 at distance c along the canonical
    geodesic, p3 at distance b with positive orientation, so that
    d(p2, p3) = a.  Raises if (a, b, c) violates the triangle inequality.
    """
    if kappa >= 0:
        raise ValueError("comparison embeddings require kappa < 0")
    e = math.sqrt(-kappa)
    gamma = angle_from_sides(e * a, e * b, e * c)
    p1 = point_from_polar(0.0, 0.0, kappa)
    p2 = point_from_polar(c, 0.0, kappa)
    p3 = point_from_polar(b, gamma, kappa)
    return p1, p2, p3


def _quad_angles(u12, u13, u14, u23, u34, strict):
    """Angles at the apex between the glued diagonal (1-3) and the free vertices."""
    t2 = angle_from_sides(u23, u12, u13, strict=strict)
    t4 = angle_from_sides(u34, u14, u13, strict=strict)
    return t2, t4


def comparison_quadrilateral(rho, kappa):
    """Embed four points with prescribed distances, glued along the 1-3 diagonal.

    ``rho`` lists the six pairwise distances in lexicographic pair order
    (d12, d13, d14, d23, d24, d34).  The four sides and the 1-3 diagonal
    are realized exactly; vertices 2 and 4 land on opposite sides of the
    geodesic through vertices 1 and 3.  d24 itself does not enter the
    construction; comparing it against the embedded counterpart is the
    point of the exercise.
    """
    if kappa >= 0:
        raise ValueError("comparison embeddings require kappa < 0")
    d12, d13, d14, d23, d24, d34 = (float(v) for v in rho)
    e = math.sqrt(-kappa)
    t2, t4 = _quad_angles(e * d12, e * d13, e * d14, e * d23, e * d34, strict=True)
    p1 = point_from_polar(0.0, 0.0, kappa)
    p2 = point_from_polar(d12, t2, kappa)
    p3 = point_from_polar(d13, 0.0, kappa)
    p4 = point_from_polar(d14, -t4, kappa)
    return p1, p2, p3, p4


def _embedded_diagonal(u12, u13, u14, u23, u34, strict=False):
    """Model-unit length of the free diagonal of the canonical embedding."""
    t2, t4 = _quad_angles(u12, u13, u14, u23, u34, strict)
    return sas_distance(u12, u14, t2 + t4)


@dataclass(frozen=True)
class AscatCertificate:
    """Comparison defect with its witness and embedding diagnostics.

    ``side_residuals`` re-measures the witness embedding's four sides and
    glued diagonal against their prescribed values.  ``non_embeddable``
    lists quadruples whose glue triangles violate the triangle inequality
    (empty for valid metric input).
    """

    defect: float
    witness: tuple
    pairing: str
    kappa: float
    side_residuals: tuple
    non_embeddable: tuple = field(default_factory=tuple)
    scanned: int = 0
    elapsed_s: float = 0.0

    def to_dict(self):
        return {
            "defect": self.defect,
            "witness": list(self.witness),
            "pairing": self.pairing,
            "kappa": self.kappa,
            "side_residuals": list(self.side_residuals),
            "non_embeddable": [list(q) for q in self.non_embeddable],
            "scanned": self.scanned,
            "elapsed_s": self.elapsed_s,
        }


def _glue_variants(u):
    """Per glue choice: (compared pair, arguments of _embedded_diagonal).

    u holds the six model-unit distances keyed by sorted index pair of the
    subset positions: u[(0,1)] = u_ij etc.  Glue choices follow the pairing
    labels: glue (i,k) compares (j,l), glue (i,j) compares (k,l), glue
    (i,l) compares (j,k).
    """
    return (
        (u[1, 3], (u[0, 1], u[0, 2], u[0, 3], u[1, 2], u[2, 3])),  # glue ik, cycle (i,j,k,l)
        (u[2, 3], (u[0, 2], u[0, 1], u[0, 3], u[1, 2], u[1, 3])),  # glue ij, cycle (i,k,j,l)
        (u[1, 2], (u[0, 1], u[0, 3], u[0, 2], u[1, 3], u[2, 3])),  # glue il, cycle (i,j,l,k)
    )


def ascat_defect(space, kappa, workers=None):
    """Max over 4-subsets and the three diagonal choices of
    sn(d_free/2) - sn(d_embedded/2) for the canonical embedding.

    This upper-bounds the minimal additive constant of the comparison
    condition realized by the canonical embedding family.  Quadruples that
    fail to embed are reported in the certificate, not skipped silently.
    """
    del workers  # scan is numpy-vectorized; a worker pool buys nothing here
    t0 = time.perf_counter()
    if kappa >= 0:
        raise ValueError("comparison defects require kappa < 0")
    idx = space.finite_indices()
    if len(idx) < 4:
        raise ValueError("need at least four ordinary points")
    e = math.sqrt(-kappa)
    fp = space.dist[np.ix_(idx, idx)] * e
    m = len(idx)
    subs = np.fromiter(
        itertools.chain.from_iterable(itertools.combinations(range(m), 4)),
        dtype=np.int64,
        count=4 * n_subsets(m),
    ).reshape(-1, 4)
    best = (-math.inf, -1, -1)
    bad = []
    for s in range(0, subs.shape[0], _BATCH):
        blk = subs[s : s + _BATCH]
        I, J, K, L = (blk[:, t] for t in range(4))
        u = {
            (0, 1): fp[I, J],
            (0, 2): fp[I, K],
            (0, 3): fp[I, L],
            (1, 2): fp[J, K],
            (1, 3): fp[J, L],
            (2, 3): fp[K, L],
        }
        contrib = []
        for comp, args in _glue_variants(u):
            diag = _embedded_diagonal(*args, strict=False)
            contrib.append((np.sinh(comp / 2.0) - np.sinh(diag / 2.0)) / e)
        R = np.stack(contrib, axis=1)
        nanmask = np.isnan(R)
        if nanmask.any():
            for row in np.unique(np.nonzero(nanmask)[0]):
                bad.append(tuple(idx[t] for t in blk[row]))
            R = np.where(nanmask, -np.inf, R)
        flat = int(np.argmax(R))
        row, col = divmod(flat, 3)
        cand = (float(R[row, col]), s + row, col)
        if cand[0] > best[0] or (cand[0] == best[0] and cand[1:] < best[1:]):
            best = cand
    value, rank, glue = best
    if rank < 0:
        raise ValueError("no embeddable quadruple found")
    witness_local = tuple(int(t) for t in subs[rank])
    witness = tuple(idx[t] for t in witness_local)
    residuals = _witness_side_residuals(fp, witness_local, glue, kappa)
    return AscatCertificate(
        defect=value,
        witness=witness,
        pairing=PAIRING_LABELS[glue],
        kappa=kappa,
        side_residuals=residuals,
        non_embeddable=tuple(bad),
        scanned=subs.shape[0],
        elapsed_s=time.perf_counter() - t0,
    )


def _cycle_for_glue(quad, glue):
    i, j, k, l = quad
    if glue == 0:  # diagonals (i,k), (j,l)
        return i, j, k, l
    if glue == 1:  # diagonals (i,j), (k,l)
        return i, k, j, l
    return i, j, l, k  # diagonals (i,l), (j,k)


def _witness_side_residuals(umat, quad, glue, kappa):
    """Re-measure the witness embedding: four sides plus glued diagonal.

    Uses the polar representation of the canonical embedding with the
    stable side-angle-side formula, which keeps full precision even for
    coordinates too large for the coordinate-space distance.
    """
    e = math.sqrt(-kappa)
    x1, x2, x3, x4 = _cycle_for_glue(quad, glue)
    u12, u13, u14 = umat[x1, x2], umat[x1, x3], umat[x1, x4]
    u23, u34 = umat[x2, x3], umat[x3, x4]
    t2, t4 = _quad_angles(u12, u13, u14, u23, u34, strict=True)
    measured = (
        u12,                            # apex side, placed at exact radius
        sas_distance(u12, u13, t2),     # round-trips the first glue angle
        sas_distance(u13, u14, t4),     # round-trips the second glue angle
        u14,                            # apex side
        u13,                            # glued diagonal, placed exactly
    )
    prescribed = (u12, u23, u34, u14, u13)
    return tuple(abs(m - w) / e for m, w in zip(measured, prescribed))
