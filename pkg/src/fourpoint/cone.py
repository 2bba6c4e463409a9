"""Hyperbolic cone over a finite metric space and its boundary machinery.

The cone over (Z, d) is Z x (0, inf) with

    rho((z,h), (z',h')) = 2 log( (d(z,z') + max(h,h')) / sqrt(h h') ),

a metric whenever d is one.  With base point o = (z0, 1), Gromov products
have the closed form

    (x|x')_o = log( (|z|+max(h,1)) (|z'|+max(h',1)) / (d(z,z') + max(h,h')) ),

where |z| = d(z, z0).  Sending heights to 0 recovers Z on the boundary
through the visual metric rho_o(z,z') = d(z,z') / ((|z|+1)(|z'|+1)), with
one extra boundary point omega at rho_o(omega, z) = 1/(|z|+1) reached by
growing heights; involuting rho_o at omega returns d exactly.
"""

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .moebius import involute
from .spaces import ExtendedMetricSpace, space_from_matrix, validate

__all__ = [
    "ConePoint",
    "ConeSpace",
    "BoundaryMetric",
    "BusemannResult",
    "geometric_heights",
    "cone_distance",
    "build_cone",
    "cone_from_descriptor",
    "cone_gromov_product",
    "boundary_metric",
    "recovered_involution",
    "busemann_approx",
    "classify_sequence",
]

MAX_MATERIALIZED_POINTS = 2000


@dataclass(frozen=True)
class ConePoint:
    """Cone point: index into the base space, positive height."""

    base: int
    height: float

    def __post_init__(self):
        if not (self.height > 0):
            raise ValueError("cone heights must be positive")


def cone_distance(p, q, base_space):
    """Cone metric between two cone points over ``base_space``."""
    d = base_space.dist[p.base, q.base]
    return 2.0 * math.log((d + max(p.height, q.height)) / math.sqrt(p.height * q.height))


def geometric_heights(diam, levels=9):
    """Geometric height grid diam * 2^-k for k = 0 .. levels-1, descending."""
    if levels < 1:
        raise ValueError("need at least one height level")
    return [diam * 2.0 ** (-k) for k in range(levels)]


@dataclass(frozen=True)
class ConeSpace:
    """Finite sample of the cone: every base point at every grid height.

    The base point o = (z0, 1) is recorded for Gromov products; it need
    not itself lie on the height grid.  Immutable; distances are computed
    on demand and the full matrix only materializes for modest sizes.
    """

    base_space: ExtendedMetricSpace
    points: tuple
    z0: int = 0
    truncated: bool = False

    @property
    def o(self):
        return ConePoint(self.z0, 1.0)

    @property
    def n(self):
        return len(self.points)

    def point(self, i):
        return self.points[i]

    def distance(self, p, q):
        p = self.points[p] if isinstance(p, int) else p
        q = self.points[q] if isinstance(q, int) else q
        return cone_distance(p, q, self.base_space)

    def as_space(self):
        """Materialize the distance matrix as an ordinary finite metric space."""
        if self.n > MAX_MATERIALIZED_POINTS:
            raise ValueError(f"refusing to materialize {self.n} points")
        bases = np.array([p.base for p in self.points])
        hs = np.array([p.height for p in self.points])
        dz = self.base_space.dist[np.ix_(bases, bases)]
        hmax = np.maximum(hs[:, None], hs[None, :])
        m = 2.0 * np.log((dz + hmax) / np.sqrt(hs[:, None] * hs[None, :]))
        np.fill_diagonal(m, 0.0)
        labels = [f"{self.base_space.labels[p.base]}@{p.height:g}" for p in self.points]
        return space_from_matrix(m, labels)

    def to_descriptor(self):
        from .io import space_to_descriptor

        return {
            "base_space": space_to_descriptor(self.base_space),
            "points": [[p.base, p.height] for p in self.points],
            "o": [self.z0, 1.0],
            "truncated": self.truncated,
        }


def cone_from_descriptor(doc):
    from .io import space_from_descriptor

    base = space_from_descriptor(doc["base_space"])
    pts = tuple(ConePoint(int(b), float(h)) for b, h in doc["points"])
    return ConeSpace(base, pts, z0=int(doc["o"][0]), truncated=bool(doc.get("truncated", False)))


def build_cone(base_space, heights=None, truncate=False, z0=0, levels=9):
    """Sample the cone over ``base_space`` on a height grid.

    Heights default to the geometric grid diam * 2^-k, k < levels.  With
    ``truncate`` the grid must stay at or below the base diameter.
    """
    if base_space.omega is not None:
        raise ValueError("build the cone over the finite part (no point at infinity)")
    if not (0 <= z0 < base_space.n):
        raise IndexError("z0 out of range")
    diam = base_space.diam
    if heights is None:
        heights = geometric_heights(diam, levels)
    heights = sorted((float(h) for h in heights), reverse=True)
    if not heights:
        raise ValueError("height grid is empty")
    if truncate and heights[0] > diam * (1 + 1e-12):
        raise ValueError(f"truncated cone heights must stay within the diameter {diam:g}")
    pts = tuple(ConePoint(b, h) for h in heights for b in range(base_space.n))
    return ConeSpace(base_space, pts, z0=z0, truncated=bool(truncate))


def cone_gromov_product(p, q, cone):
    """Closed-form Gromov product of two cone points at o = (z0, 1).

    Equals the half-sum definition computed from cone distances exactly
    (an algebraic identity, good to rounding).
    """
    d = cone.base_space.dist
    z0 = cone.z0
    zp = d[p.base, z0]
    zq = d[q.base, z0]
    num = (zp + max(p.height, 1.0)) * (zq + max(q.height, 1.0))
    den = d[p.base, q.base] + max(p.height, q.height)
    return math.log(num / den)


@dataclass(frozen=True)
class BoundaryMetric:
    """Visual boundary metric of the cone plus its finite-height approximants.

    ``space`` carries the closed-form matrix over Z plus the extra boundary
    point omega (an ordinary point of this metric, placed last).  The
    approximant at level k uses cone points at height 2^-k and the tall
    proxy (z0, 2^k) in place of omega; ``gaps[k]`` is the largest
    entrywise deviation from the closed form, and ``rate_constant`` the
    fitted C with gaps[k] <= C * 2^-k.
    """

    space: ExtendedMetricSpace
    omega_index: int
    z0: int
    gaps: tuple
    rate_constant: float
    approximants: tuple = field(default_factory=tuple, repr=False)

    def to_dict(self):
        from .io import space_to_descriptor

        return {
            "space": space_to_descriptor(self.space),
            "omega_index": self.omega_index,
            "z0": self.z0,
            "gaps": list(self.gaps),
            "rate_constant": self.rate_constant,
        }


def boundary_metric(base_space, z0=0, levels=9):
    """Closed-form boundary metric over Z plus omega, with convergence diagnostics.

    The approximants are honest finite computations: half-sum Gromov
    products of cone points at heights 2^-k (and the tall omega proxy at
    height 2^k), exponentiated.  Their gap to the closed form shrinks
    linearly in 2^-k.
    """
    if base_space.omega is not None:
        raise ValueError("boundary metrics are built over the finite part")
    if not (0 <= z0 < base_space.n):
        raise IndexError("z0 out of range")
    n = base_space.n
    d = base_space.dist
    absz = d[:, z0]
    w = 1.0 / (absz + 1.0)
    closed = np.zeros((n + 1, n + 1))
    closed[:n, :n] = d * w[:, None] * w[None, :]
    closed[n, :n] = closed[:n, n] = w
    np.fill_diagonal(closed, 0.0)
    labels = list(base_space.labels) + ["omega"]
    space = space_from_matrix(closed, labels)

    approximants = []
    gaps = []
    for k in range(levels):
        h = 2.0 ** (-k)
        big = 2.0 ** k
        pts = [ConePoint(z, h) for z in range(n)] + [ConePoint(z0, big)]
        approx = np.zeros((n + 1, n + 1))
        for a in range(n + 1):
            for b in range(a + 1, n + 1):
                pa, pb = pts[a], pts[b]
                gp = 0.5 * (
                    cone_distance(pa, ConePoint(z0, 1.0), base_space)
                    + cone_distance(pb, ConePoint(z0, 1.0), base_space)
                    - cone_distance(pa, pb, base_space)
                )
                approx[a, b] = approx[b, a] = math.exp(-gp)
        approximants.append(approx)
        gaps.append(float(np.max(np.abs(approx - closed))))
    rate = max(g * 2.0 ** k for k, g in enumerate(gaps)) if gaps else 0.0
    return BoundaryMetric(
        space=space,
        omega_index=n,
        z0=z0,
        gaps=tuple(gaps),
        rate_constant=rate,
        approximants=tuple(approximants),
    )


def recovered_involution(base_space, z0=0):
    """Involute the boundary metric at omega; returns the base distances back.

    The closed-form chain rho_o -> involution at omega collapses to the
    original matrix entry by entry, so this is an exact round trip.
    """
    bm = boundary_metric(base_space, z0=z0, levels=0)
    res = involute(bm.space, bm.omega_index)
    n = base_space.n
    return np.asarray(res.space.dist[:n, :n])


@dataclass(frozen=True)
class BusemannResult:
    """Finite-stage Busemann values along the escaping witness sequence (z0, i).

    ``value`` is |x w| - |w o| at i = i_max; ``formula_value`` evaluates the
    product combination (w|o)_x - (w|x)_o at the same stage (an algebraic
    identity, so the two agree to rounding).  ``checkpoints`` hold
    (i, |b_i - value|) at geometric stages.
    """

    value: float
    formula_value: float
    i_max: int
    checkpoints: tuple

    @property
    def residuals(self):
        return tuple(r for _, r in self.checkpoints)


def busemann_approx(x, cone, i_max=2 ** 20):
    """Busemann function of the upward direction, normalized to 0 at o."""
    if i_max < 2:
        raise ValueError("need i_max >= 2")
    base = cone.base_space
    o = cone.o

    def stage(i):
        w = ConePoint(cone.z0, float(i))
        return cone_distance(x, w, base) - cone_distance(w, o, base)

    value = stage(i_max)
    w = ConePoint(cone.z0, float(i_max))
    formula = _gp_at(w, o, x, cone) - _gp_at(w, x, o, cone)
    checkpoints = []
    i = 1
    while i <= i_max:
        checkpoints.append((i, abs(stage(i) - value)))
        i *= 2
    if checkpoints[-1][0] != i_max:
        checkpoints.append((i_max, 0.0))
    return BusemannResult(value=value, formula_value=formula, i_max=i_max, checkpoints=tuple(checkpoints))


def _gp_at(a, b, basept, cone):
    """Half-sum Gromov product (a|b) based at an arbitrary cone point."""
    z = cone.base_space
    return 0.5 * (
        cone_distance(basept, a, z) + cone_distance(basept, b, z) - cone_distance(a, b, z)
    )


def classify_sequence(points, cone, tail_fraction=0.5, base_tol=None, growth_threshold=None,
                      height_decay=16.0):
    """Heuristic convergence diagnostic for a finite cone-point sequence.

    cauchy_shrinking: tail bases cluster within ``base_tol`` and tail
    heights have decayed below the first height by ``height_decay``.
    escaping: |z_i| + h_i is nondecreasing on the tail and ends above
    ``growth_threshold``.  divergent: tail Gromov products at o fail to
    grow past the head's.  Anything else is inconclusive.  Any finite rule
    is a heuristic here; the thresholds are configuration, not truth.
    """
    pts = list(points)
    if len(pts) < 8:
        raise ValueError("need at least eight points to classify")
    base = cone.base_space
    diam = base.diam
    base_tol = 1e-6 * diam if base_tol is None else base_tol
    growth_threshold = 10.0 * diam if growth_threshold is None else growth_threshold
    cut = max(2, int(len(pts) * (1 - tail_fraction)))
    head, tail = pts[:cut], pts[cut:]

    tail_base_diam = max(
        (base.dist[p.base, q.base] for p in tail for q in tail), default=0.0
    )
    tail_hmax = max(p.height for p in tail)
    if tail_base_diam <= base_tol and tail_hmax <= pts[0].height / height_decay:
        return "cauchy_shrinking"

    size = [base.dist[p.base, cone.z0] + p.height for p in pts]
    tail_size = size[cut:]
    if all(a <= b + 1e-12 for a, b in zip(tail_size, tail_size[1:])) and tail_size[-1] >= growth_threshold:
        return "escaping"

    def min_pair_product(seg):
        vals = [
            cone_gromov_product(p, q, cone)
            for a, p in enumerate(seg)
            for q in seg[a + 1 :]
        ]
        return (min(vals), max(vals)) if vals else (math.inf, -math.inf)

    _, head_max = min_pair_product(head)
    _, tail_max = min_pair_product(tail)
    if tail_max <= head_max + 1e-9:
        return "divergent"
    return "inconclusive"
