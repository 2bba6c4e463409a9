"""Cross-ratio triples, Ptolemy certification, metric involution, homothety.

The cross-ratio triple of an admissible quadruple (x, y, z, w) is the
projective triple

    (d(x,y) d(z,w) : d(x,z) d(y,w) : d(x,w) d(y,z)),

normalized here so the largest entry is 1.  A point at infinity never
enters the arithmetic: the one-infinity rule drops the infinite factor
from each product and the two-infinity rule yields (0:1:1) up to entry
order, so inf/inf is never formed.
"""

import itertools
import math
import time
from dataclasses import dataclass

import numpy as np

from . import _scan
from .spaces import ExtendedMetricSpace, space_from_matrix, validate

__all__ = [
    "CrossRatioTriple",
    "Certificate",
    "InvolutionResult",
    "HomothetyResult",
    "admissible",
    "crt",
    "in_delta",
    "ptolemy_defect",
    "ptolemy_residual",
    "moebius_equivalent",
    "involute",
    "homothety_ratio",
]

# position pairs of the three cross-ratio products, in formula entry order
_CRT_PAIRS = (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)))


@dataclass(frozen=True)
class CrossRatioTriple:
    """Projective triple with nonnegative entries, normalized to max = 1."""

    a: float
    b: float
    c: float

    @property
    def entries(self):
        return (self.a, self.b, self.c)

    def __iter__(self):
        return iter(self.entries)

    @staticmethod
    def from_raw(a, b, c):
        m = max(a, b, c)
        if m <= 0:
            raise ValueError("cross-ratio triple has no positive entry")
        return CrossRatioTriple(a / m, b / m, c / m)


@dataclass(frozen=True)
class Certificate:
    """A defect value together with the quadruple and pairing attaining it."""

    defect: float
    witness: tuple
    pairing: str
    scanned: int
    elapsed_s: float

    def to_dict(self):
        return {
            "defect": self.defect,
            "witness": list(self.witness),
            "pairing": self.pairing,
            "scanned": self.scanned,
            "elapsed_s": self.elapsed_s,
        }


def admissible(quad):
    """True iff no point index occurs three or more times in the quadruple."""
    if len(quad) != 4:
        raise ValueError("quadruple must have four entries")
    return max(quad.count(q) for q in quad) <= 2


def crt(space, quad):
    """Cross-ratio triple of an admissible quadruple of point indices."""
    quad = tuple(int(q) for q in quad)
    for q in quad:
        if not (0 <= q < space.n):
            raise IndexError(f"point index {q} out of range")
    if not admissible(quad):
        raise ValueError(f"inadmissible quadruple {quad}: a point occurs three or more times")
    om = space.omega
    pos = [t for t in range(4) if quad[t] == om]
    d = space.dist
    if len(pos) == 0:
        raw = [d[quad[p[0][0]], quad[p[0][1]]] * d[quad[p[1][0]], quad[p[1][1]]] for p in _CRT_PAIRS]
    elif len(pos) == 1:
        w = pos[0]
        raw = []
        for p in _CRT_PAIRS:
            keep = p[0] if w in p[1] else p[1]
            raw.append(d[quad[keep[0]], quad[keep[1]]])
    else:
        raw = [0.0 if (pos[0] in p[0]) == (pos[1] in p[0]) else 1.0 for p in _CRT_PAIRS]
    return CrossRatioTriple.from_raw(float(raw[0]), float(raw[1]), float(raw[2]))


def in_delta(triple, tol=1e-12):
    """True iff the triple's entries satisfy the triangle inequality (with slack)."""
    a, b, c = triple.entries
    return a <= b + c + tol and b <= a + c + tol and c <= a + b + tol


def _finite_scan_setup(space):
    idx = space.finite_indices()
    if len(idx) < 4:
        raise ValueError("need at least four ordinary points")
    return idx, space.dist[np.ix_(idx, idx)]


def ptolemy_defect(space, workers=1):
    """Largest normalized Ptolemy residual over distinct 4-subsets.

    For each subset and each choice of left-hand pairing, the residual is
    (P_left - P_1 - P_2)/P_left where P are the three opposite-pair
    distance products; the space is Ptolemy iff the maximum is <= 0.
    Quadruples with a repeated point never violate the inequality (their
    left product is matched or zero by one of the others), so only
    distinct 4-subsets are scanned; the same holds for quadruples through
    the point at infinity, which reduce to triangle inequalities.
    """
    t0 = time.perf_counter()
    idx, fp = _finite_scan_setup(space)
    value, sub, pairing = _scan.scan_product_defect(fp, workers=workers)
    witness = tuple(idx[t] for t in sub)
    return Certificate(
        defect=float(value),
        witness=witness,
        pairing=_scan.PAIRING_LABELS[pairing],
        scanned=_scan.n_subsets(len(idx)),
        elapsed_s=time.perf_counter() - t0,
    )


def ptolemy_residual(space, quad, pairing):
    """Re-evaluate the normalized Ptolemy residual at a witness."""
    idx = {p: t for t, p in enumerate(space.finite_indices())}
    fp = space.finite_part()
    sub = tuple(idx[q] for q in quad)
    return _scan.product_residual(fp, sub, _scan.PAIRING_LABELS.index(pairing))


def moebius_equivalent(space_a, space_b, tol=1e-9):
    """Compare normalized cross-ratio triples on every admissible quadruple.

    Returns (equivalent, max componentwise discrepancy).  Quadruples with a
    repeated point have metric-independent triples (one entry zero, the
    other two equal), so distinct 4-subsets carry all the information and
    are the only ones compared.
    """
    if space_a.n != space_b.n:
        raise ValueError("spaces must have the same point count")
    if space_a.labels != space_b.labels:
        raise ValueError("spaces must share the same labels in the same order")
    worst = 0.0
    for quad in itertools.combinations(range(space_a.n), 4):
        ta = crt(space_a, quad).entries
        tb = crt(space_b, quad).entries
        worst = max(worst, max(abs(x - y) for x, y in zip(ta, tb)))
    return worst <= tol, worst


@dataclass(frozen=True)
class InvolutionResult:
    space: ExtendedMetricSpace
    report: object

    def to_dict(self):
        from .io import space_to_descriptor

        return {"space": space_to_descriptor(self.space), "validation": self.report.to_dict()}


def involute(space, omega_index):
    """Send the chosen point to infinity by metric involution.

    d_w(z, z') = d(z, z')/(d(w, z) d(w, z')) on the remaining points.  If
    the input already has a point at infinity, that point comes back at
    distance 1/d(w, z) and the result stays in the same Moebius class.
    The output is an extended metric exactly when the input is Ptolemy;
    the attached validation report records any triangle violations.
    """
    w = int(omega_index)
    if not (0 <= w < space.n):
        raise IndexError(f"omega index {w} out of range")
    if space.omega == w:
        return InvolutionResult(space, validate(space))
    n = space.n
    d = space.dist
    old = space.omega
    to_w = d[:, w].copy()
    finite = [i for i in range(n) if i != w and i != old]
    for i in finite:
        if to_w[i] == 0.0:
            raise ValueError(f"point {i} is at distance zero from the new point at infinity")
    m = np.zeros((n, n))
    for a in range(n):
        for b in range(a + 1, n):
            if w in (a, b):
                v = math.inf
            elif old in (a, b):
                other = b if a == old else a
                v = 1.0 / to_w[other]
            else:
                v = d[a, b] / (to_w[a] * to_w[b])
            m[a, b] = m[b, a] = v
    out = ExtendedMetricSpace(space.labels, m, omega=w)
    return InvolutionResult(out, validate(out))


@dataclass(frozen=True)
class HomothetyResult:
    ok: bool
    ratio: float
    worst_pair: tuple
    max_deviation: float


def homothety_ratio(space_a, space_b, rel_tol=1e-9):
    """Find lambda with d_b = lambda * d_a, given both share the remote point.

    Two metrics of one Moebius class with the same point at infinity differ
    by a homothety; this checks it empirically.  Fails (ok=False) with the
    worst-deviating pair if the distance ratios do not agree to rel_tol.
    """
    if space_a.n != space_b.n:
        raise ValueError("spaces must have the same point count")
    if space_a.omega != space_b.omega:
        raise ValueError("spaces must share the same point at infinity")
    idx = space_a.finite_indices()
    ratios = []
    pairs = []
    for a in idx:
        for b in idx:
            if a >= b:
                continue
            da, db = space_a.dist[a, b], space_b.dist[a, b]
            if da == 0.0 and db == 0.0:
                continue
            if da == 0.0 or db == 0.0:
                return HomothetyResult(False, math.nan, (a, b), math.inf)
            ratios.append(db / da)
            pairs.append((a, b))
    if not ratios:
        raise ValueError("no finite distances to compare")
    lam = float(np.median(ratios))
    dev = [abs(r / lam - 1.0) for r in ratios]
    worst = int(np.argmax(dev))
    ok = dev[worst] <= rel_tol
    return HomothetyResult(ok, lam if ok else math.nan, pairs[worst], float(dev[worst]))
