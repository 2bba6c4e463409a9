"""Constant-curvature model plane geometry for kappa < 0.

Points live on the upper sheet of the hyperboloid <p,p> = 1/kappa in
Minkowski 3-space with the form <p,q> = -p0*q0 + p1*q1 + p2*q2.  All
distance/angle helpers work in "model units" u = sqrt(-kappa) * length so
that the curvature -1 formulas apply; public functions take and return
lengths.

The half-angle and side-angle-side formulas below are arranged so that no
large-magnitude cancellation occurs; naive cosh-product law-of-cosines
loses ~e^(u+v)*eps absolute precision, which matters already for sides
around 20.
"""

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ModelPoint",
    "sn_kappa",
    "model_distance",
    "point_from_polar",
    "angle_from_sides",
    "sas_distance",
    "polar_distance_matrix",
]


def sn_kappa(kappa, x):
    """Generalized sine: sin-type for kappa>0, identity at 0, sinh-type below."""
    if kappa > 0:
        r = math.sqrt(kappa)
        return math.sin(r * x) / r
    if kappa < 0:
        r = math.sqrt(-kappa)
        return math.sinh(r * x) / r
    return x


@dataclass(frozen=True)
class ModelPoint:
    """Point on the curvature-kappa hyperboloid sheet, coords (x0, x1, x2)."""

    coords: tuple

    def __iter__(self):
        return iter(self.coords)

    @property
    def x0(self):
        return self.coords[0]


def _minkowski(p, q):
    return -p[0] * q[0] + p[1] * q[1] + p[2] * q[2]


def _check_on_sheet(p, kappa, tol=1e-8):
    # conditioning of <p,p> degrades like x0^2, scale the tolerance with it
    target = 1.0 / kappa
    err = abs(_minkowski(p, p) - target)
    allowed = tol * (1.0 + abs(target) + p[0] * p[0] * 2.0)
    if err > allowed or p[0] <= 0:
        raise ValueError(f"point not on the curvature {kappa} sheet (residual {err:g})")


def point_from_polar(r, theta, kappa):
    """Point at geodesic distance r from the sheet apex, direction theta."""
    if kappa >= 0:
        raise ValueError("model plane requires kappa < 0")
    if r < 0:
        raise ValueError("radius must be nonnegative")
    e = math.sqrt(-kappa)
    s = math.sinh(e * r) / e
    return ModelPoint((math.cosh(e * r) / e, s * math.cos(theta), s * math.sin(theta)))


def model_distance(p, q, kappa):
    """Geodesic distance between two on-sheet points.

    Uses the chordal form arccosh(1 + s) = log1p(s + sqrt(s*(s+2))) with
    s built from coordinate differences, which stays accurate for nearby
    points (the plain inner-product arccosh does not).
    """
    if kappa >= 0:
        raise ValueError("model plane requires kappa < 0")
    pc = tuple(p) if isinstance(p, ModelPoint) else tuple(p)
    qc = tuple(q) if isinstance(q, ModelPoint) else tuple(q)
    _check_on_sheet(pc, kappa)
    _check_on_sheet(qc, kappa)
    d0, d1, d2 = pc[0] - qc[0], pc[1] - qc[1], pc[2] - qc[2]
    s = -kappa * (-d0 * d0 + d1 * d1 + d2 * d2) / 2.0
    if s <= 0:
        return 0.0
    return math.log1p(s + math.sqrt(s * (s + 2.0))) / math.sqrt(-kappa)


def _sh(x):
    return np.sinh(x)


def angle_from_sides(opp, adj1, adj2, snap=1e-12, strict=True):
    """Included angle between sides adj1, adj2 (model units, curvature -1).

    Stable half-angle form: sin^2(g/2) and cos^2(g/2) share the positive
    denominator sinh(adj1)*sinh(adj2), so the angle is atan2 of the two
    square roots.  Arguments violating the triangle inequality by more than
    `snap` (relative) raise when strict, otherwise come back NaN; tiny
    violations snap to the degenerate angle (0 or pi).
    """
    opp = np.asarray(opp, dtype=float)
    adj1 = np.asarray(adj1, dtype=float)
    adj2 = np.asarray(adj2, dtype=float)
    # sin^2 numerator: sh^2(opp/2) - sh^2((adj1-adj2)/2), factored
    a = _sh(opp / 2.0)
    b = _sh(np.abs(adj1 - adj2) / 2.0)
    num_s = (a - b) * (a + b)
    # cos^2 numerator: sh^2((adj1+adj2)/2) - sh^2(opp/2), factored
    c = _sh((adj1 + adj2) / 2.0)
    num_c = (c - a) * (c + a)
    bad = (num_s < -snap * np.maximum(a * a, b * b)) | (num_c < -snap * np.maximum(c * c, a * a))
    if np.any(bad):
        if strict:
            raise ValueError("triangle inequality violated in angle computation")
    ang = 2.0 * np.arctan2(np.sqrt(np.maximum(num_s, 0.0)), np.sqrt(np.maximum(num_c, 0.0)))
    ang = np.where(bad, np.nan, ang)
    return ang if ang.ndim else float(ang)


def sas_distance(a, b, gamma):
    """Third side from two sides and the included angle (model units, curvature -1).

    cosh(c) = cosh(a-b) + 2 sinh(a) sinh(b) sin^2(gamma/2); every term is
    nonnegative, so the result keeps full relative precision even when the
    angle is tiny or the sides are large.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    gamma = np.asarray(gamma, dtype=float)
    sh_half = _sh((a - b) / 2.0)
    sg = np.sin(gamma / 2.0)
    s = 2.0 * (sh_half * sh_half + _sh(a) * _sh(b) * sg * sg)
    c = np.log1p(s + np.sqrt(s * (s + 2.0)))
    return c if c.ndim else float(c)


def polar_distance_matrix(rs, thetas, kappa):
    """Pairwise geodesic distances of polar-coordinate samples on the kappa-plane."""
    if kappa >= 0:
        raise ValueError("model plane requires kappa < 0")
    e = math.sqrt(-kappa)
    rs = np.asarray(rs, dtype=float) * e
    thetas = np.asarray(thetas, dtype=float)
    u = sas_distance(rs[:, None], rs[None, :], thetas[:, None] - thetas[None, :])
    np.fill_diagonal(u, 0.0)
    return u / e
