"""Finite extended metric spaces: representation, validation, transforms, generators.

A space is a symmetric nonnegative distance matrix over labelled points,
optionally with one distinguished point omega at distance +inf from every
other point.  +inf is stored as IEEE infinity (the genuine extended-real
value: finite + inf = inf, x/inf = 0, max is absorbing); all omega-specific
logic dispatches on the omega *index*, never on reading inf back out of the
matrix, and inf/inf is never formed.
"""

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ExtendedMetricSpace",
    "ValidationReport",
    "Violation",
    "space_from_matrix",
    "space_from_points",
    "validate",
    "restrict_omega",
    "scale",
    "snowflake",
    "generate",
]

TRIANGLE_REL_SLACK = 1e-12  # generators use transcendental functions; absorb their rounding


@dataclass(frozen=True)
class ExtendedMetricSpace:
    """Finite point set with a symmetric extended distance matrix.

    ``omega`` is the index of the point at infinity, or None.  At most one
    such point exists; every entry between omega and another point is +inf
    and the restriction to the remaining points is an ordinary metric.
    """

    labels: tuple
    dist: np.ndarray
    omega: int = None

    def __post_init__(self):
        m = np.array(self.dist, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"distance matrix must be square, got shape {m.shape}")
        if len(self.labels) != m.shape[0]:
            raise ValueError("label count does not match matrix size")
        if self.omega is not None and not (0 <= self.omega < m.shape[0]):
            raise ValueError("omega index out of range")
        m.setflags(write=False)
        object.__setattr__(self, "dist", m)
        object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))

    @property
    def n(self):
        return self.dist.shape[0]

    def finite_indices(self):
        """Indices of the non-omega points, in order."""
        return [i for i in range(self.n) if i != self.omega]

    def finite_part(self):
        """The matrix restricted to non-omega points (a view copy)."""
        idx = self.finite_indices()
        return self.dist[np.ix_(idx, idx)]

    def d(self, i, j):
        return float(self.dist[i, j])

    @property
    def diam(self):
        """Diameter of the finite part."""
        fp = self.finite_part()
        return float(fp.max()) if fp.size else 0.0


def space_from_matrix(matrix, labels=None, omega=None):
    matrix = np.array(matrix, dtype=float)
    if labels is None:
        labels = [str(i) for i in range(matrix.shape[0])]
    return ExtendedMetricSpace(tuple(labels), matrix, omega)


def space_from_points(coords, labels=None):
    """Euclidean space over explicit coordinates, shape (n, dim) or (n,)."""
    pts = np.atleast_2d(np.asarray(coords, dtype=float))
    if pts.shape[0] == 1 and np.asarray(coords).ndim == 1:
        pts = pts.T
    diff = pts[:, None, :] - pts[None, :, :]
    m = np.sqrt((diff * diff).sum(axis=-1))
    np.fill_diagonal(m, 0.0)
    return space_from_matrix(m, labels)


Violation = tuple  # (kind, witness indices, magnitude)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple = field(default_factory=tuple)

    def kinds(self):
        return sorted({v[0] for v in self.violations})

    def to_dict(self):
        return {
            "ok": self.ok,
            "violations": [
                {"kind": k, "witness": list(w), "magnitude": m} for (k, w, m) in self.violations
            ],
        }


def validate(space):
    """Check every metric axiom and omega rule; report all violations.

    Violation kinds, each listed lexicographically by witness indices:
    ``diagonal`` (nonzero d(i,i)), ``symmetry`` (d(i,j) != d(j,i)),
    ``positivity`` (nonpositive or NaN off-diagonal), ``finiteness``
    (non-finite entry between ordinary points), ``omega`` (an omega row
    entry that is not +inf), and ``triangle`` (d(i,k) > d(i,j) + d(j,k)
    beyond relative slack, over all ordered triples of ordinary points).
    """
    m = space.dist
    n = space.n
    om = space.omega
    viol = []

    for i in range(n):
        if m[i, i] != 0.0:
            viol.append(("diagonal", (i,), abs(float(m[i, i]))))

    for i in range(n):
        for j in range(i + 1, n):
            a, b = float(m[i, j]), float(m[j, i])
            if a != b and not (math.isnan(a) and math.isnan(b)):
                mag = abs(a - b) if math.isfinite(a - b) else math.inf
                viol.append(("symmetry", (i, j), mag))

    fin = space.finite_indices()
    for i in fin:
        for j in fin:
            if i >= j:
                continue
            v = float(m[i, j])
            if math.isnan(v) or v <= 0.0:
                viol.append(("positivity", (i, j), max(0.0, -v) if not math.isnan(v) else math.inf))
            elif math.isinf(v):
                viol.append(("finiteness", (i, j), math.inf))

    if om is not None:
        for i in range(n):
            if i == om:
                continue
            for a, b in ((om, i), (i, om)):
                if not math.isinf(float(m[a, b])):
                    viol.append(("omega", (a, b), float(m[a, b])))

    # triangle inequality on ordered triples of ordinary points, vectorized per i
    sub = space.finite_part()
    k = sub.shape[0]
    if k >= 3:
        good = np.isfinite(sub) & (sub >= 0)
        np.fill_diagonal(good, True)
        for a in range(k):
            lhs = sub[a][None, :]                                  # d(a, c) over c
            rhs = sub[a][:, None] + sub                            # d(a, b) + d(b, c)
            excess = lhs - rhs - TRIANGLE_REL_SLACK * np.abs(rhs)
            okmask = good[a][None, :] & good[a][:, None] & good
            bad = np.argwhere((excess > 0) & okmask)
            for b, c in bad:
                if a == b or b == c or a == c:
                    continue
                viol.append(
                    ("triangle", (fin[a], fin[b], fin[c]), float(sub[a, c] - sub[a, b] - sub[b, c]))
                )

    order = {"diagonal": 0, "symmetry": 1, "positivity": 2, "finiteness": 3, "omega": 4, "triangle": 5}
    viol.sort(key=lambda v: (order[v[0]], v[1]))
    return ValidationReport(ok=not viol, violations=tuple(viol))


def restrict_omega(space):
    """Drop the point at infinity; labels of the remaining points are kept."""
    if space.omega is None:
        raise ValueError("space has no point at infinity")
    idx = space.finite_indices()
    labels = [space.labels[i] for i in idx]
    return space_from_matrix(space.dist[np.ix_(idx, idx)], labels)


def scale(space, lam):
    """Multiply every finite distance by lam > 0; +inf entries are preserved."""
    if not (lam > 0):
        raise ValueError("scale factor must be positive")
    return ExtendedMetricSpace(space.labels, space.dist * lam, space.omega)


def snowflake(space, eps):
    """Entrywise d^eps for 0 < eps <= 1 (metric-preserving by subadditivity of t^eps)."""
    if not (0 < eps <= 1):
        raise ValueError("snowflake exponent must lie in (0, 1]")
    return ExtendedMetricSpace(space.labels, space.dist ** eps, space.omega)


# ---------------------------------------------------------------- generators

def _gen_line(n):
    if n < 2:
        raise ValueError("line generator needs n >= 2")
    pts = np.arange(n, dtype=float)
    return space_from_points(pts, labels=[str(i) for i in range(n)])


def _gen_euclidean(rng, n, dim, box):
    if n < 2 or dim < 1:
        raise ValueError("euclidean generator needs n >= 2 and dim >= 1")
    pts = rng.uniform(0.0, box, size=(n, dim))
    return space_from_points(pts)


def _gen_hyperboloid(rng, n, kappa, radius):
    if n < 2:
        raise ValueError("hyperboloid generator needs n >= 2")
    if kappa >= 0:
        raise ValueError("hyperboloid generator needs kappa < 0")
    if radius <= 0:
        raise ValueError("hyperboloid generator needs radius > 0")
    from . import model

    rs = rng.uniform(0.0, radius, size=n)
    thetas = rng.uniform(0.0, 2.0 * math.pi, size=n)
    m = model.polar_distance_matrix(rs, thetas, kappa)
    return space_from_matrix(m)


def _gen_strip(a, t):
    """Corners of an a-by-t flat rectangle, in cyclic order."""
    if a <= 0 or t <= 0:
        raise ValueError("strip generator needs a > 0 and t > 0")
    pts = np.array([[0.0, 0.0], [t, 0.0], [t, a], [0.0, a]])
    return space_from_points(pts)


def _gen_graph(n, edges):
    """Shortest-path metric of a weighted undirected graph (must be connected)."""
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import shortest_path

    if n < 2:
        raise ValueError("graph generator needs n >= 2")
    rows, cols, vals = [], [], []
    for e in edges:
        u, v = int(e[0]), int(e[1])
        w = float(e[2]) if len(e) > 2 else 1.0
        rows += [u, v]
        cols += [v, u]
        vals += [w, w]
    g = csr_matrix((vals, (rows, cols)), shape=(n, n))
    m = shortest_path(g, method="D", directed=False)
    if not np.all(np.isfinite(m)):
        raise ValueError("graph is not connected")
    return space_from_matrix(m)


def _gen_random_metric(rng, n):
    """Random symmetric matrix repaired to a metric via its shortest-path closure."""
    from scipy.sparse.csgraph import shortest_path

    if n < 2:
        raise ValueError("random_metric generator needs n >= 2")
    raw = rng.uniform(0.5, 2.0, size=(n, n))
    raw = (raw + raw.T) / 2.0
    np.fill_diagonal(raw, 0.0)
    m = shortest_path(raw, method="FW", directed=False)
    return space_from_matrix(m)


def generate(kind, params=None, seed=0):
    """Deterministic space generator; one 64-bit seed drives each call.

    Kinds: ``line(n)``, ``euclidean(n, dim, box)``, ``hyperboloid(n, kappa,
    radius)``, ``strip(a, t)``, ``graph(n, edges)``, ``random_metric(n)``.
    """
    p = dict(params or {})
    rng = np.random.default_rng(np.random.SeedSequence(int(seed)))
    if kind == "line":
        return _gen_line(int(p.get("n", 4)))
    if kind == "euclidean":
        return _gen_euclidean(rng, int(p.get("n", 8)), int(p.get("dim", 2)), float(p.get("box", 1.0)))
    if kind == "hyperboloid":
        return _gen_hyperboloid(rng, int(p.get("n", 8)), float(p.get("kappa", -1.0)), float(p.get("radius", 2.0)))
    if kind == "strip":
        return _gen_strip(float(p.get("a", 1.0)), float(p.get("t", 10.0)))
    if kind == "graph":
        return _gen_graph(int(p["n"]), p["edges"])
    if kind == "random_metric":
        return _gen_random_metric(rng, int(p.get("n", 8)))
    raise ValueError(f"unknown generator kind {kind!r}")
