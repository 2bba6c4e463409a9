"""Gromov products, four-point hyperbolicity, PT_kappa and asymptotic defects.

All defects are exact maxima over distinct 4-subsets.  The asymptotic
scans shift every exponential by the quadruple's largest exponent before
evaluating, which doubles the distance range representable in doubles
(arguments stay below sqrt(-kappa)*rho/2 instead of sqrt(-kappa)*rho).
"""

import math
import time
from dataclasses import dataclass

import numpy as np

from . import _scan
from .model import sn_kappa
from .moebius import Certificate, _finite_scan_setup

__all__ = [
    "AptCertificate",
    "gromov_product",
    "gromov_delta",
    "sn_kappa",
    "pt_kappa_defect",
    "pt_kappa_residual",
    "apt_defect",
    "apt_exp_residual",
    "apt_sn_residual",
    "relative_gromov_product",
    "hyperbolicity_bound_from_apt",
]


def gromov_product(space, x, y, z):
    """(x|y)_z = (|zx| + |zy| - |xy|)/2; nonnegative in a metric space."""
    for p in (x, y, z):
        if p == space.omega:
            raise ValueError("Gromov products need ordinary points")
    d = space.dist
    return 0.5 * float(d[z, x] + d[z, y] - d[x, y])


def gromov_delta(space, workers=1):
    """Minimal four-point constant: max over 4-subsets of (largest pairing
    sum - second largest).  Zero for spaces with fewer than four points."""
    t0 = time.perf_counter()
    idx = space.finite_indices()
    if len(idx) < 4:
        return Certificate(0.0, (), "", 0, time.perf_counter() - t0)
    fp = space.dist[np.ix_(idx, idx)]
    value, sub, pairing = _scan.scan_fourpoint_defect(fp, workers=workers)
    return Certificate(
        defect=float(value),
        witness=tuple(idx[t] for t in sub),
        pairing=_scan.PAIRING_LABELS[pairing],
        scanned=_scan.n_subsets(len(idx)),
        elapsed_s=time.perf_counter() - t0,
    )


def _check_kappa_domain(space, kappa):
    if kappa > 0:
        lim = math.pi / math.sqrt(kappa)
        if space.diam >= lim:
            raise ValueError(
                f"diameter {space.diam:g} exceeds the positive-curvature bound {lim:g}"
            )


def pt_kappa_defect(space, kappa, workers=1):
    """Normalized defect of the sn-transformed Ptolemy inequality.

    Distances enter through sn_kappa(d/2); kappa = 0 reduces to the plain
    Ptolemy defect.  For kappa > 0 the diameter must stay below
    pi/sqrt(kappa).
    """
    t0 = time.perf_counter()
    _check_kappa_domain(space, kappa)
    idx, fp = _finite_scan_setup(space)
    value, sub, pairing = _scan.scan_product_defect(_sn_matrix(fp, kappa), workers=workers)
    return Certificate(
        defect=float(value),
        witness=tuple(idx[t] for t in sub),
        pairing=_scan.PAIRING_LABELS[pairing],
        scanned=_scan.n_subsets(len(idx)),
        elapsed_s=time.perf_counter() - t0,
    )


def _sn_matrix(fp, kappa):
    if kappa == 0:
        return fp.copy()
    if kappa < 0:
        e = math.sqrt(-kappa)
        return np.sinh(e * fp / 2.0) / e
    e = math.sqrt(kappa)
    return np.sin(e * fp / 2.0) / e


def pt_kappa_residual(space, kappa, quad, pairing):
    idxmap = {p: t for t, p in enumerate(space.finite_indices())}
    fmat = _sn_matrix(space.finite_part(), kappa)
    sub = tuple(idxmap[q] for q in quad)
    return _scan.product_residual(fmat, sub, _scan.PAIRING_LABELS.index(pairing))


@dataclass(frozen=True)
class AptCertificate:
    """Minimal additive constants of the asymptotic inequality, both forms.

    ``exp_defect``: residual of the pure-exponential form, normalized by
    e^(sqrt(-kappa)/2 * rho) with rho the quadruple's largest distance.
    ``sn_defect``: same for the sn-product form.  The two forms are
    equivalent up to constants; both are reported, no relation is assumed.
    """

    exp_defect: float
    sn_defect: float
    witness_exp: tuple
    pairing_exp: str
    witness_sn: tuple
    pairing_sn: str
    kappa: float
    scanned: int
    elapsed_s: float

    def to_dict(self):
        return {
            "exp_defect": self.exp_defect,
            "sn_defect": self.sn_defect,
            "witness_exp": list(self.witness_exp),
            "pairing_exp": self.pairing_exp,
            "witness_sn": list(self.witness_sn),
            "pairing_sn": self.pairing_sn,
            "kappa": self.kappa,
            "scanned": self.scanned,
            "elapsed_s": self.elapsed_s,
        }


def _umatrix(space, kappa):
    if kappa >= 0:
        raise ValueError("asymptotic defects require kappa < 0")
    idx, fp = _finite_scan_setup(space)
    return idx, math.sqrt(-kappa) / 2.0 * fp


def apt_defect(space, kappa, workers=1):
    """Minimal delta of the asymptotic four-point inequality at kappa < 0."""
    t0 = time.perf_counter()
    idx, umat = _umatrix(space, kappa)
    (ev, esub, ep), (sv, ssub, sp) = _scan.scan_apt_defect(umat, workers=workers)
    return AptCertificate(
        exp_defect=float(ev),
        sn_defect=float(sv) / (-kappa),
        witness_exp=tuple(idx[t] for t in esub),
        pairing_exp=_scan.PAIRING_LABELS[ep],
        witness_sn=tuple(idx[t] for t in ssub),
        pairing_sn=_scan.PAIRING_LABELS[sp],
        kappa=kappa,
        scanned=_scan.n_subsets(len(idx)),
        elapsed_s=time.perf_counter() - t0,
    )


def _witness_to_scan(space, quad):
    idxmap = {p: t for t, p in enumerate(space.finite_indices())}
    return tuple(idxmap[q] for q in quad)


def apt_exp_residual(space, kappa, quad, pairing):
    _, umat = _umatrix(space, kappa)
    return _scan.apt_exp_residual(umat, _witness_to_scan(space, quad), _scan.PAIRING_LABELS.index(pairing))


def apt_sn_residual(space, kappa, quad, pairing):
    _, umat = _umatrix(space, kappa)
    b = _scan.apt_sn_bracket(umat, _witness_to_scan(space, quad), _scan.PAIRING_LABELS.index(pairing))
    return b / (-kappa)


def relative_gromov_product(space, o, omega_proxy, x, y):
    """(x|y)_{w,o} = (x|y)_o - (w|x)_o - (w|y)_o with a finite stand-in w."""
    return (
        gromov_product(space, x, y, o)
        - gromov_product(space, omega_proxy, x, o)
        - gromov_product(space, omega_proxy, y, o)
    )


def hyperbolicity_bound_from_apt(delta_apt):
    """Four-point constant implied by an asymptotic constant: 2 ln(2(1 + delta)).

    From the asymptotic inequality at kappa = -1, the largest pairing sum
    exceeds the second largest by at most this much.
    """
    if delta_apt < 0:
        raise ValueError("asymptotic constant must be nonnegative")
    return 2.0 * math.log(2.0 * (1.0 + delta_apt))
