"""Independent brute-force oracles: plain-Python re-derivations used to
pin expected values.  Deliberately naive (no exponent shifting, no stable
trig rearrangements) so they share no code path with the package."""

import itertools
import math


def _pairing_products(d, q):
    i, j, k, l = q
    return [d[i][k] * d[j][l], d[i][j] * d[k][l], d[i][l] * d[j][k]]


def _as_lists(space):
    return [[float(v) for v in row] for row in space.dist]


def naive_ptolemy_defect(space):
    d = _as_lists(space)
    best = -math.inf
    for q in itertools.combinations(range(len(d)), 4):
        ps = _pairing_products(d, q)
        for t in range(3):
            others = [p for s, p in enumerate(ps) if s != t]
            best = max(best, (ps[t] - others[0] - others[1]) / ps[t])
    return best


def naive_ptk_defect(space, kappa):
    def sn(x):
        if kappa == 0:
            return x
        if kappa < 0:
            return math.sinh(math.sqrt(-kappa) * x) / math.sqrt(-kappa)
        return math.sin(math.sqrt(kappa) * x) / math.sqrt(kappa)

    d = [[sn(v / 2.0) for v in row] for row in _as_lists(space)]
    best = -math.inf
    for q in itertools.combinations(range(len(d)), 4):
        ps = _pairing_products(d, q)
        for t in range(3):
            others = [p for s, p in enumerate(ps) if s != t]
            best = max(best, (ps[t] - others[0] - others[1]) / ps[t])
    return best


def naive_apt_exp_defect(space, kappa):
    c = math.sqrt(-kappa) / 2.0
    d = _as_lists(space)
    best = -math.inf
    for q in itertools.combinations(range(len(d)), 4):
        i, j, k, l = q
        sums = [d[i][k] + d[j][l], d[i][j] + d[k][l], d[i][l] + d[j][k]]
        rho = max(d[a][b] for a, b in itertools.combinations(q, 2))
        for t in range(3):
            others = [s for s2, s in enumerate(sums) if s2 != t]
            r = (math.exp(c * sums[t]) - math.exp(c * others[0]) - math.exp(c * others[1])) * math.exp(-c * rho)
            best = max(best, r)
    return best


def naive_apt_sn_defect(space, kappa):
    c = math.sqrt(-kappa) / 2.0
    d = _as_lists(space)

    def snq(x):
        return math.sinh(math.sqrt(-kappa) * x / 2.0) / math.sqrt(-kappa)

    best = -math.inf
    for q in itertools.combinations(range(len(d)), 4):
        i, j, k, l = q
        ps = [
            snq(d[i][k]) * snq(d[j][l]),
            snq(d[i][j]) * snq(d[k][l]),
            snq(d[i][l]) * snq(d[j][k]),
        ]
        rho = max(d[a][b] for a, b in itertools.combinations(q, 2))
        for t in range(3):
            others = [p for s, p in enumerate(ps) if s != t]
            best = max(best, (ps[t] - others[0] - others[1]) * math.exp(-c * rho))
    return best


def naive_gromov_delta(space):
    d = _as_lists(space)
    best = 0.0
    for q in itertools.combinations(range(len(d)), 4):
        i, j, k, l = q
        sums = sorted([d[i][k] + d[j][l], d[i][j] + d[k][l], d[i][l] + d[j][k]])
        best = max(best, sums[2] - sums[1])
    return best


def bfs_metric(n, edges):
    """Unweighted shortest-path distances by breadth-first search."""
    adj = {i: [] for i in range(n)}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    dist = [[math.inf] * n for _ in range(n)]
    for s in range(n):
        dist[s][s] = 0
        frontier = [s]
        d = 0
        seen = {s}
        while frontier:
            d += 1
            nxt = []
            for u in frontier:
                for v in adj[u]:
                    if v not in seen:
                        seen.add(v)
                        dist[s][v] = d
                        nxt.append(v)
            frontier = nxt
    return dist


def minkowski_distance(p, q, kappa):
    """Hyperboloid distance through the inner product (well-conditioned inputs only)."""
    ip = -p[0] * q[0] + p[1] * q[1] + p[2] * q[2]
    arg = max(1.0, kappa * ip)
    return math.acosh(arg) / math.sqrt(-kappa)


def hyp_angle_acos(opp, a, b):
    """Curvature -1 angle by the plain law of cosines (acos form)."""
    val = (math.cosh(a) * math.cosh(b) - math.cosh(opp)) / (math.sinh(a) * math.sinh(b))
    return math.acos(min(1.0, max(-1.0, val)))


def euclid_quad_diagonal(d12, d13, d14, d23, d34):
    """Planar comparison quadrilateral: free diagonal by plain trigonometry."""

    def ang(opp, x, y):
        val = (x * x + y * y - opp * opp) / (2 * x * y)
        return math.acos(min(1.0, max(-1.0, val)))

    t2 = ang(d23, d12, d13)
    t4 = ang(d34, d14, d13)
    t = t2 + t4
    return math.sqrt(max(0.0, d12 * d12 + d14 * d14 - 2 * d12 * d14 * math.cos(t)))


def hyp_quad_diagonal_acos(d12, d13, d14, d23, d34, kappa):
    """Curvature-kappa comparison quadrilateral diagonal, naive trig route."""
    e = math.sqrt(-kappa)
    t2 = hyp_angle_acos(e * d23, e * d12, e * d13)
    t4 = hyp_angle_acos(e * d34, e * d14, e * d13)
    t = t2 + t4
    ch = math.cosh(e * d12) * math.cosh(e * d14) - math.sinh(e * d12) * math.sinh(e * d14) * math.cos(t)
    return math.acosh(max(1.0, ch)) / e
