import math

import numpy as np
import pytest

from fourpoint import (
    generate,
    restrict_omega,
    scale,
    snowflake,
    space_from_matrix,
    space_from_points,
    validate,
)
from fourpoint.moebius import involute, ptolemy_defect

from _oracles import bfs_metric, minkowski_distance, naive_ptolemy_defect


def test_validate_line_ok(line013):
    assert validate(line013).ok


def test_validate_triangle_violation():
    m = [[0, 5, 1], [5, 0, 1], [1, 1, 0]]
    rep = validate(space_from_matrix(m))
    assert not rep.ok
    tri = [v for v in rep.violations if v[0] == "triangle"]
    assert tri, "triangle violation not reported"
    assert tri[0][2] == pytest.approx(3.0)
    assert set(tri[0][1]) == {0, 1, 2}


def test_validate_four_cycle_against_bfs(four_cycle):
    assert validate(four_cycle).ok
    want = bfs_metric(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert np.allclose(four_cycle.dist, want)


def test_validate_reports_symmetry_and_diagonal():
    m = np.array([[0.0, 1.0], [2.0, 0.5]])
    rep = validate(space_from_matrix(m))
    kinds = rep.kinds()
    assert "symmetry" in kinds and "diagonal" in kinds


def test_validate_omega_rules():
    m = np.array([[0.0, 1.0, math.inf], [1.0, 0.0, math.inf], [math.inf, math.inf, 0.0]])
    assert validate(space_from_matrix(m, omega=2)).ok
    bad = m.copy()
    bad[0, 2] = bad[2, 0] = 5.0
    rep = validate(space_from_matrix(bad, omega=2))
    assert not rep.ok and "omega" in rep.kinds()


def test_restrict_omega():
    m = np.array([[0.0, math.inf, math.inf], [math.inf, 0.0, 2.0], [math.inf, 2.0, 0.0]])
    sp = space_from_matrix(m, labels=["w", "a", "b"], omega=0)
    sub = restrict_omega(sp)
    assert sub.labels == ("a", "b")
    assert sub.dist[0, 1] == 2.0
    assert validate(sub).ok
    with pytest.raises(ValueError):
        restrict_omega(sub)


def test_scale_examples(line013):
    doubled = scale(line013, 2)
    assert np.allclose(doubled.dist, line013.dist * 2)
    assert np.allclose(scale(line013, 1).dist, line013.dist)
    with pytest.raises(ValueError):
        scale(line013, 0)
    back = scale(scale(line013, 7.3), 1 / 7.3)
    assert np.max(np.abs(back.dist - line013.dist)) <= 1e-12 * np.max(line013.dist)


def test_scale_preserves_infinity():
    m = np.array([[0.0, math.inf], [math.inf, 0.0]])
    sp = scale(space_from_matrix(m, omega=1), 3.0)
    assert math.isinf(sp.dist[0, 1])


def test_snowflake(line4):
    half = snowflake(line4, 0.5)
    assert half.dist[0, 3] == pytest.approx(math.sqrt(3))
    assert np.allclose(snowflake(line4, 1).dist, line4.dist)
    with pytest.raises(ValueError):
        snowflake(line4, 1.5)
    for eps in (0.25, 0.5, 0.75, 1.0):
        assert validate(snowflake(generate("random_metric", {"n": 7}, seed=3), eps)).ok


def test_snowflake_half_is_ptolemy():
    # square-root metrics satisfy the Ptolemy inequality
    for seed in range(4):
        sp = snowflake(generate("random_metric", {"n": 8}, seed=seed), 0.5)
        assert ptolemy_defect(sp).defect <= 1e-12


@pytest.mark.parametrize(
    "kind,params",
    [
        ("line", {"n": 4}),
        ("euclidean", {"n": 9, "dim": 3}),
        ("hyperboloid", {"n": 9, "kappa": -1, "radius": 2}),
        ("strip", {"a": 1, "t": 10}),
        ("graph", {"n": 4, "edges": [(0, 1), (1, 2), (2, 3), (3, 0)]}),
        ("random_metric", {"n": 9}),
    ],
)
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_generators_validate(kind, params, seed):
    sp = generate(kind, params, seed=seed)
    assert validate(sp).ok
    again = generate(kind, params, seed=seed)
    assert np.array_equal(sp.dist, again.dist), "generation is not deterministic"


def test_line_distances():
    sp = generate("line", {"n": 4})
    assert sp.dist[0, 3] == 3.0 and sp.dist[1, 2] == 1.0


def test_strip_distances():
    sp = generate("strip", {"a": 1, "t": 10})
    d = sp.dist
    diag = math.sqrt(101.0)
    assert d[0, 2] == pytest.approx(diag, abs=1e-12) and d[1, 3] == pytest.approx(diag, abs=1e-12)
    assert d[0, 1] == 10.0 and d[2, 3] == 10.0
    assert d[1, 2] == 1.0 and d[0, 3] == 1.0
    assert abs(d[0, 2] ** 2 - 101.0) <= 1e-12 * 101.0


def test_hyperboloid_generator_against_inner_product_oracle():
    from fourpoint.model import point_from_polar, polar_distance_matrix

    rng = np.random.default_rng(5)
    rs = rng.uniform(0, 2, size=6)
    th = rng.uniform(0, 2 * np.pi, size=6)
    m = polar_distance_matrix(rs, th, -1.0)
    pts = [tuple(point_from_polar(r, t, -1.0)) for r, t in zip(rs, th)]
    for i in range(6):
        for j in range(i + 1, 6):
            # the naive acosh oracle itself loses half the digits near d = 0
            tol = 1e-9 if m[i, j] > 0.05 else 1e-7
            assert m[i, j] == pytest.approx(minkowski_distance(pts[i], pts[j], -1.0), abs=tol)


def test_generator_bad_params():
    with pytest.raises(ValueError):
        generate("line", {"n": 1})
    with pytest.raises(ValueError):
        generate("hyperboloid", {"n": 5, "kappa": 1.0, "radius": 1})
    with pytest.raises(ValueError):
        generate("strip", {"a": -1, "t": 5})
    with pytest.raises(ValueError):
        generate("nope", {})


def test_random_metric_matches_naive_ptolemy():
    sp = generate("random_metric", {"n": 7}, seed=9)
    assert ptolemy_defect(sp).defect == pytest.approx(naive_ptolemy_defect(sp), abs=1e-12)


def test_apt_scaling_vs_curvature():
    # rescaling by sqrt(-kappa) moves the asymptotic defect to curvature -1
    from fourpoint.hyperbolicity import apt_defect

    sp = generate("random_metric", {"n": 6}, seed=21)
    lhs = apt_defect(scale(sp, math.sqrt(2.0)), -1).exp_defect
    rhs = apt_defect(sp, -2).exp_defect
    assert lhs == pytest.approx(rhs, abs=1e-9)


def test_involution_triangle_equality():
    sp = space_from_points([0.0, 1.0, 2.0, 4.0])
    res = involute(sp, 3)
    d = res.space.dist
    assert d[0, 1] == pytest.approx(1 / 12)
    assert d[0, 2] == pytest.approx(1 / 4)
    assert d[1, 2] == pytest.approx(1 / 6)
    assert res.report.ok
