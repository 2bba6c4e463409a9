import math

import numpy as np
import pytest

from fourpoint import generate, scale, space_from_matrix, space_from_points
from fourpoint.hyperbolicity import (
    apt_defect,
    apt_exp_residual,
    apt_sn_residual,
    gromov_delta,
    gromov_product,
    hyperbolicity_bound_from_apt,
    pt_kappa_defect,
    relative_gromov_product,
    sn_kappa,
)
from fourpoint.moebius import ptolemy_defect

from _oracles import (
    naive_apt_exp_defect,
    naive_apt_sn_defect,
    naive_gromov_delta,
    naive_ptk_defect,
)

STRIP10_DEFECT = 7.3851012124670714  # high-precision oracle value


def test_gromov_product_line():
    sp = space_from_points([0.0, 3.0, 5.0])
    assert gromov_product(sp, 1, 2, 0) == pytest.approx(3.0)
    assert gromov_product(sp, 1, 1, 0) == pytest.approx(3.0)  # (x|x)_z = |zx|
    mid = space_from_points([0.0, 1.0, 2.0])
    assert gromov_product(mid, 0, 2, 1) == 0.0


def test_gromov_product_rejects_omega():
    m = np.array([[0, 1, math.inf], [1, 0, math.inf], [math.inf, math.inf, 0]], dtype=float)
    sp = space_from_matrix(m, omega=2)
    with pytest.raises(ValueError):
        gromov_product(sp, 0, 1, 2)


def test_gromov_delta_examples(line4, unit_square, line013):
    assert gromov_delta(line4).defect == 0.0
    assert gromov_delta(unit_square).defect == pytest.approx(2 * math.sqrt(2) - 2)
    assert gromov_delta(line013).defect == 0.0  # fewer than four points


def test_gromov_delta_matches_oracle():
    for seed in range(5):
        sp = generate("random_metric", {"n": 8}, seed=seed)
        assert gromov_delta(sp).defect == pytest.approx(naive_gromov_delta(sp), abs=1e-12)


def test_sn_kappa_table():
    assert sn_kappa(0, 2.3) == 2.3
    assert sn_kappa(-1, 1.0) == pytest.approx(math.sinh(1.0))
    assert sn_kappa(1, math.pi / 2) == pytest.approx(1.0)
    assert sn_kappa(-4, 0.5) == pytest.approx(math.sinh(1.0) / 2)


def test_ptk_zero_equals_ptolemy(unit_square):
    assert pt_kappa_defect(unit_square, 0).defect == pytest.approx(0.0, abs=1e-12)
    for seed in range(20):
        sp = generate("random_metric", {"n": 6}, seed=seed)
        a = pt_kappa_defect(sp, 0).defect
        b = ptolemy_defect(sp).defect
        assert a == pytest.approx(b, abs=1e-12)


def test_ptk_hyperboloid_negative():
    for seed in range(3):
        sp = generate("hyperboloid", {"n": 15, "kappa": -1, "radius": 2}, seed=seed)
        assert pt_kappa_defect(sp, -1).defect <= 1e-9


def test_ptk_matches_oracle():
    sp = generate("random_metric", {"n": 7}, seed=2)
    for kappa in (-2.0, -1.0, -0.5, 0.0):
        assert pt_kappa_defect(sp, kappa).defect == pytest.approx(
            naive_ptk_defect(sp, kappa), abs=1e-12
        )


def test_ptk_positive_kappa_domain():
    sp = generate("euclidean", {"n": 6, "dim": 2, "box": 0.5}, seed=1)
    cert = pt_kappa_defect(sp, 1.0)  # diameter well below pi
    assert math.isfinite(cert.defect)
    big = scale(sp, 100.0)
    with pytest.raises(ValueError):
        pt_kappa_defect(big, 1.0)


def test_ptk_kappa_monotone_heuristic():
    # empirical consistency check on Euclidean data: defect does not
    # increase as kappa rises toward 0
    for seed in range(3):
        sp = generate("euclidean", {"n": 8, "dim": 2}, seed=seed)
        defects = [pt_kappa_defect(sp, k).defect for k in (-4.0, -2.0, -1.0, 0.0)]
        for a, b in zip(defects, defects[1:]):
            assert b <= a + 1e-12


def test_apt_equilateral():
    m = 2.0 * (np.ones((4, 4)) - np.eye(4))
    sp = space_from_matrix(m)
    cert = apt_defect(sp, -1)
    assert cert.exp_defect == pytest.approx(-math.e, abs=1e-12)


def test_apt_strip():
    sp = generate("strip", {"a": 1, "t": 10})
    cert = apt_defect(sp, -1)
    assert cert.exp_defect == pytest.approx(STRIP10_DEFECT, abs=1e-9)
    assert cert.exp_defect > 4.0
    # direct formula: (e^sqrt(101) - e^10 - e) / e^(sqrt(101)/2)
    s = math.sqrt(101.0)
    want = (math.exp(s) - math.exp(10.0) - math.e) / math.exp(s / 2.0)
    assert cert.exp_defect == pytest.approx(want, rel=1e-12)


def test_apt_matches_oracles():
    for seed in range(4):
        sp = generate("random_metric", {"n": 7}, seed=seed)
        for kappa in (-0.5, -1.0, -2.0):
            cert = apt_defect(sp, kappa)
            assert cert.exp_defect == pytest.approx(naive_apt_exp_defect(sp, kappa), abs=1e-11)
            assert cert.sn_defect == pytest.approx(naive_apt_sn_defect(sp, kappa), abs=1e-11)


def test_apt_witness_reproduces():
    sp = generate("euclidean", {"n": 9, "dim": 2}, seed=3)
    cert = apt_defect(sp, -1)
    assert apt_exp_residual(sp, -1, cert.witness_exp, cert.pairing_exp) == pytest.approx(
        cert.exp_defect, abs=1e-12
    )
    assert apt_sn_residual(sp, -1, cert.witness_sn, cert.pairing_sn) == pytest.approx(
        cert.sn_defect, abs=1e-12
    )


def test_apt_rejects_nonnegative_kappa(unit_square):
    with pytest.raises(ValueError):
        apt_defect(unit_square, 0.0)
    with pytest.raises(ValueError):
        apt_defect(unit_square, 1.0)


def test_apt_scaling_law():
    for seed in range(3):
        sp = generate("random_metric", {"n": 6}, seed=seed)
        for kappa in (-0.5, -2.0, -3.0):
            lhs = apt_defect(scale(sp, math.sqrt(-kappa)), -1).exp_defect
            rhs = apt_defect(sp, kappa).exp_defect
            assert lhs == pytest.approx(rhs, abs=1e-9)


def test_apt_kappa_monotonicity():
    for seed in range(5):
        sp = generate("random_metric", {"n": 7}, seed=seed)
        d2 = apt_defect(sp, -2).exp_defect
        d1 = apt_defect(sp, -1).exp_defect
        assert max(0.0, d1) <= max(0.0, d2) ** math.sqrt(0.5) + 1e-9


def test_apt_permutation_invariance():
    sp = generate("random_metric", {"n": 7}, seed=11)
    rng = np.random.default_rng(0)
    perm = rng.permutation(7)
    shuffled = space_from_matrix(sp.dist[np.ix_(perm, perm)])
    for kappa in (-1.0, -2.0):
        assert apt_defect(sp, kappa).exp_defect == pytest.approx(
            apt_defect(shuffled, kappa).exp_defect, abs=1e-12
        )
    assert gromov_delta(sp).defect == pytest.approx(gromov_delta(shuffled).defect, abs=1e-12)
    assert ptolemy_defect(sp).defect == pytest.approx(ptolemy_defect(shuffled).defect, abs=1e-12)


def test_relative_gromov_product():
    sp = space_from_points([0.0, 3.0, 5.0, 100.0])
    assert relative_gromov_product(sp, 0, 3, 1, 2) == pytest.approx(-5.0)
    # x = y collapses to |ox| - 2 (w|x)_o
    val = relative_gromov_product(sp, 0, 3, 1, 1)
    assert val == pytest.approx(sp.dist[0, 1] - 2 * gromov_product(sp, 3, 1, 0))


def test_hyperbolicity_bound_values():
    assert hyperbolicity_bound_from_apt(0.0) == pytest.approx(2 * math.log(2))
    assert hyperbolicity_bound_from_apt(4.0) == pytest.approx(2 * math.log(10))
    with pytest.raises(ValueError):
        hyperbolicity_bound_from_apt(-0.1)


def test_hyperbolicity_chain():
    for seed in range(10):
        sp = generate("random_metric", {"n": 8}, seed=seed)
        delta = gromov_delta(sp).defect
        apt = apt_defect(sp, -1).exp_defect
        assert delta <= hyperbolicity_bound_from_apt(max(0.0, apt)) + 1e-9


def test_large_distances_do_not_overflow():
    # shifted exponentials keep the scan finite up to distances ~1400
    sp = scale(generate("strip", {"a": 1, "t": 10}), 65.0)
    cert = apt_defect(sp, -1)
    assert math.isfinite(cert.exp_defect)
    assert cert.exp_defect > 4.0
