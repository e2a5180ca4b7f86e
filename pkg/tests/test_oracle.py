import math

import numpy as np
import pytest

from sympolar import gaussian as gs
from sympolar import oracle
from sympolar.ellipsoid import Ellipsoid
from sympolar.verify import random_ellipsoid, random_mixed_state

CFG = oracle.OracleConfig(samples=4000, seed=3)
G11 = np.array([[2.0, 1.0], [1.0, 1.0]])


def random_pure_1d(rng):
    return gs.PureGaussian([[rng.uniform(0.3, 3.0)]], [[rng.uniform(-2.0, 2.0)]], hbar=rng.uniform(0.5, 2.0))


def test_config_validation():
    with pytest.raises(ValueError):
        oracle.OracleConfig(samples=0)


def test_support_membership_examples():
    ball = Ellipsoid(np.eye(2))
    assert oracle.support_membership(ball, [1.0, 0.0])
    assert oracle.support_value(Ellipsoid(np.diag([2.0, 0.5])), [1.0, 0.0]) == pytest.approx(math.sqrt(0.5))
    assert oracle.support_membership(Ellipsoid(np.diag([2.0, 0.5])), [1.0, 0.0])
    assert not oracle.support_membership(ball, [1.1, 0.0])


def test_support_value_is_a_maximum():
    # sup over boundary samples approaches the closed form from below
    rng = np.random.default_rng(1)
    e = Ellipsoid(np.array([[2.0, 0.3, 0.0], [0.3, 1.0, 0.2], [0.0, 0.2, 0.5]]), hbar=1.5)
    z = oracle._cholesky_boundary(e.M, e.hbar, oracle._unit_directions(rng, 200000, 3))
    p = np.array([0.4, -1.0, 0.7])
    sampled = np.max(z @ p)
    exact = oracle.support_value(e, p)
    assert sampled <= exact * (1 + 1e-12)
    assert sampled >= 0.995 * exact


def test_mc_containment_examples():
    assert oracle.mc_containment(Ellipsoid(np.eye(3)), Ellipsoid(np.eye(3) / 4), CFG)
    assert not oracle.mc_containment(Ellipsoid(np.eye(3) / 4), Ellipsoid(np.eye(3)), CFG)


def test_mc_projection_examples():
    assert oracle.mc_projection(Ellipsoid(np.eye(4)), "X", CFG).disagreements == 0
    report = oracle.mc_projection(Ellipsoid(G11), "X", CFG)
    assert report.disagreements == 0 and report.checked > 0


def test_mc_projection_random():
    rng = np.random.default_rng(2)
    for _ in range(30):
        omega = random_ellipsoid(int(rng.integers(1, 4)), rng)
        assert oracle.mc_projection(omega, "X", CFG).disagreements == 0


def test_oracles_deterministic():
    omega = random_ellipsoid(2, 5)
    assert oracle.mc_projection(omega, "P", CFG) == oracle.mc_projection(omega, "P", CFG)
    rho = random_mixed_state(1, np.random.default_rng(5))
    a = oracle.tomography_numeric(rho, CFG)
    b = oracle.tomography_numeric(rho, CFG)
    np.testing.assert_array_equal(a.lhs_curve, b.lhs_curve)


def test_wigner_numeric_examples():
    ground = gs.PureGaussian([[1.0]], [[0.0]])
    assert oracle.wigner_numeric(ground, [0.0, 0.0]) == pytest.approx(1.0 / math.pi, abs=1e-6)
    assert oracle.wigner_numeric(ground, [1.0, 0.0]) == pytest.approx(math.exp(-1.0) / math.pi, abs=1e-6)
    with pytest.raises(ValueError):
        oracle.wigner_numeric(gs.random_pure_gaussian(2, 0), np.zeros(4))


def test_wigner_numeric_matches_closed_form():
    rng = np.random.default_rng(6)
    for _ in range(20):
        psi = random_pure_1d(rng)
        z = rng.normal(size=2)
        assert abs(oracle.wigner_numeric(psi, z) - gs.wigner_eval(psi, z)) <= 1e-6


def test_moyal_examples():
    ground = gs.PureGaussian([[1.0]], [[0.0]])
    check = oracle.moyal_numeric(ground, ground)
    assert check.lhs == pytest.approx(1 / (2 * math.pi), abs=1e-9)
    assert check.rhs == pytest.approx(1 / (2 * math.pi), abs=1e-9)
    assert oracle.moyal_numeric(ground, gs.PureGaussian([[2.0]], [[0.0]])).residual <= 1e-5
    assert oracle.moyal_numeric(gs.PureGaussian([[1.0]], [[1.0]]), gs.PureGaussian([[1.0]], [[-1.0]])).residual <= 1e-5


def test_marginal_numeric_examples():
    assert oracle.marginal_numeric(gs.MixedGaussian(0.5 * np.eye(2)), 0.0) == pytest.approx(math.pi**-0.5, abs=1e-12)
    assert oracle.marginal_numeric(gs.MixedGaussian(np.eye(2)), 0.0) == pytest.approx((2 * math.pi) ** -0.5, abs=1e-12)
    rng = np.random.default_rng(7)
    for _ in range(20):
        rho = random_mixed_state(1, rng, hbar=rng.uniform(0.5, 2.0), min_excess=0.5)
        x = rng.normal() * math.sqrt(rho.Sigma[0, 0])
        assert abs(oracle.marginal_numeric(rho, x) - gs.marginal_eval(rho, x)) <= 1e-6
        assert abs(oracle.marginal_numeric(rho, x, method="hermite") - gs.marginal_eval(rho, x)) <= 1e-6
    with pytest.raises(ValueError):
        oracle.marginal_numeric(rho, 0.0, method="simpson")


@pytest.mark.parametrize("x,y", [(1.0, 0.0), (1.0, 1.0), (2.0, -1.0)])
def test_pde_residual_examples(x, y):
    assert oracle.pde_residual(gs.PureGaussian([[x]], [[y]])) <= 1e-6


def test_pde_residual_detects_wrong_state():
    psi = gs.PureGaussian([[1.0]], [[1.0]])
    assert oracle.pde_residual(gs.PureGaussian([[1.0]], [[0.5]]), operator=psi) > 1e-2
    assert oracle.pde_residual(gs.PureGaussian([[1.5]], [[1.0]]), operator=psi) > 1e-2


def test_tomography_numeric_examples():
    assert oracle.tomography_numeric(gs.MixedGaussian(0.5 * np.eye(2))).max_gap <= 1e-5
    assert oracle.tomography_numeric(gs.MixedGaussian(np.eye(2))).max_gap >= 1e-2
    assert oracle.tomography_numeric(gs.MixedGaussian(0.5 * np.linalg.inv(G11))).max_gap <= 1e-5


def test_tomography_numeric_matches_closed_form_test():
    rng = np.random.default_rng(8)
    for t in range(10):
        hbar = rng.uniform(0.5, 2.0)
        rho = gs.as_density(random_pure_1d(rng)) if t % 2 else random_mixed_state(1, rng, hbar=hbar)
        gap = oracle.tomography_numeric(rho).max_gap
        assert (gap <= 1e-5) == gs.tomography_pure_test(rho).is_pure
