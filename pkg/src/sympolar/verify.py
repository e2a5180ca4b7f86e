"""Seeded property suites behind ``sympolar verify``.

Each suite draws random instances, checks a closed-form statement on them
(often against an oracle from ``sympolar.oracle``) and tallies passes and
failures per statement key. Reports contain no timings, so a fixed seed
and level always produce byte-identical output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import capacity, ellipsoid as ell, gaussian as gs, oracle
from .ellipsoid import Ellipsoid
from .matcore import loewner_leq
from .symplectic import (
    is_symplectic,
    planted_matrix,
    random_lagrangian,
    random_posdef,
    random_symplectic,
    symplectic_eigenvalues,
    williamson_plane,
)

SUITES = ("geometry", "capacity", "gaussian")


@dataclass(frozen=True)
class Level:
    trials: int
    planes: int
    quadrature: int
    samples: int


LEVELS = {
    "quick": Level(trials=20, planes=10, quadrature=4, samples=2000),
    "full": Level(trials=200, planes=100, quadrature=20, samples=20000),
}


@dataclass
class Tally:
    passed: int = 0
    failed: int = 0

    def add(self, ok: bool):
        if ok:
            self.passed += 1
        else:
            self.failed += 1


@dataclass
class Report:
    suite: str
    seed: int
    level: str
    results: dict = field(default_factory=dict)

    @property
    def all_passed(self) -> bool:
        return all(t.failed == 0 for t in self.results.values())

    def as_dict(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "level": self.level,
            "results": {k: {"passed": t.passed, "failed": t.failed} for k, t in sorted(self.results.items())},
            "all_passed": self.all_passed,
        }


# -- random instances --------------------------------------------------------


def random_ellipsoid(n: int, rng, kind: str = "generic", hbar: float = 1.0) -> Ellipsoid:
    """Random phase-space ellipsoid.

    ``kind`` is ``"generic"`` (random positive definite matrix with a random
    overall scale, so that its determinant is not pinned to 1),
    ``"quantized"`` (symplectic spectrum in ``[0.2, 1)``), ``"blob"``
    (spectrum identically 1) or ``"unquantized"`` (spectrum in ``[0.3, 3]``
    with at least one value above 1.2).
    """
    rng = np.random.default_rng(rng)
    if kind == "generic":
        scale = np.exp(rng.uniform(-1.0, 1.0))
        return Ellipsoid(scale * random_posdef(2 * n, rng, cond=20.0), hbar)
    if kind == "quantized":
        lam = rng.uniform(0.2, 1.0 - 1e-3, n)
    elif kind == "blob":
        lam = np.ones(n)
    elif kind == "unquantized":
        lam = rng.uniform(0.3, 3.0, n)
        lam[rng.integers(n)] = rng.uniform(1.2, 3.0)
    else:
        raise ValueError(f"unknown ellipsoid kind {kind!r}")
    return Ellipsoid(planted_matrix(lam, rng)[0], hbar)


def random_mixed_state(n: int, rng, hbar: float = 1.0, min_excess: float = 0.75) -> gs.MixedGaussian:
    """Mixed Gaussian with every symplectic eigenvalue of ``Sigma`` in ``[min_excess hbar, 2 hbar]``."""
    return gs.random_mixed_gaussian(n, rng, hbar, lam=rng.uniform(min_excess * hbar, 2.0 * hbar, n))


def _gap(a, b) -> float:
    return ell.matrix_gap(a, b)


# -- geometry ----------------------------------------------------------------


def _polar_duality(rng, lv: Level, tally: Tally, cfg: oracle.OracleConfig):
    for t in range(lv.trials):
        d = int(rng.integers(1, 5))
        x = Ellipsoid(random_posdef(d, rng, cond=20.0))
        y = Ellipsoid(x.M / rng.uniform(1.1, 3.0))  # y contains x
        lam = rng.uniform(0.2, 5.0)
        lin = rng.normal(size=(d, d)) + 2.0 * np.eye(d)
        dual = ell.polar_dual(x)
        ok = ell.polar_dual(dual).allclose(x, 1e-8)
        ok &= ell.contains(y, x) and ell.contains(dual, ell.polar_dual(y))
        ok &= _gap(ell.polar_dual(x.scaled(lam)).M, dual.scaled(1.0 / lam).M) <= 1e-8
        ok &= _gap(ell.polar_dual(ell.linear_image(x, lin)).M, ell.linear_image(dual, np.linalg.inv(lin).T).M) <= 1e-8
        if t < 5:
            ok &= oracle.polar_dual_agreement(x, dual, cfg).disagreements == 0
        tally.add(bool(ok))


def _prop1(rng, lv: Level, tally: Tally):
    for _ in range(lv.trials):
        d = int(rng.integers(1, 5))
        x = Ellipsoid(random_posdef(d, rng, cond=20.0))
        john = ell.john_of_product(x)
        ok = ell.is_blob(john).is_blob
        ok &= _gap(ell.project(john, "X").M, x.M) <= 1e-9
        ok &= _gap(ell.project(john, "P").M, ell.polar_dual(x).M) <= 1e-9
        tally.add(bool(ok))


def _prop3(rng, lv: Level, tally: Tally):
    kinds = ("quantized", "blob", "unquantized", "generic")
    for t in range(lv.trials):
        n = int(rng.integers(1, 4))
        omega = random_ellipsoid(n, rng, kinds[t % len(kinds)])
        dual = ell.symplectic_polar_dual(omega)
        lam_max = symplectic_eigenvalues(omega.M)[-1]
        ok = True
        if abs(lam_max - 1.0) > 1e-9:
            ok &= ell.is_quantized(omega) == ell.contains(omega, dual)
        ok &= ell.is_blob(omega).is_blob == dual.allclose(omega, 1e-8)
        tally.add(bool(ok))


def _thm1(rng, lv: Level, tally: Tally):
    for t in range(lv.trials):
        n = int(rng.integers(1, 4))
        if t % 2:
            omega = ell.blob_from_symplectic(random_symplectic(n, rng))
        else:
            omega = random_ellipsoid(n, rng)
        tally.add(ell.projection_dual_check(omega).holds == ell.is_blob(omega).is_blob)


def _thm3(rng, lv: Level, tally: Tally, converse: Tally):
    for t in range(lv.trials):
        n = int(rng.integers(1, 4))
        if t % 2 == 0:
            omega = random_ellipsoid(n, rng, "quantized")
            ok = all(ell.lagrangian_slice_check(omega, random_lagrangian(n, rng)).included for _ in range(lv.planes))
            tally.add(ok)
        else:
            omega = random_ellipsoid(n, rng, "unquantized")
            tally.add(not ell.lagrangian_slice_check(omega, williamson_plane(omega.M)).included)
            planes = (random_lagrangian(n, rng) for _ in range(lv.planes))
            converse.add(not any(ell.lagrangian_slice_check(omega, pl).included for pl in planes))


def _sections(rng, lv: Level, tally: Tally, cfg: oracle.OracleConfig):
    for _ in range(max(2, lv.trials // 10)):
        n = int(rng.integers(1, 4))
        omega = random_ellipsoid(n, rng)
        ok = all(oracle.mc_projection(omega, tag, cfg).disagreements == 0 for tag in ("X", "P"))
        plane = random_lagrangian(n, rng)
        ok &= oracle.mc_section(omega, plane.basis, ell.intersect(omega, plane), cfg).disagreements == 0
        inner = Ellipsoid(omega.M * rng.uniform(1.0, 2.0))
        ok &= oracle.mc_containment(inner, omega, cfg) == ell.contains(omega, inner)
        ok &= not oracle.mc_containment(omega, inner, cfg) or ell.contains(inner, omega)
        tally.add(bool(ok))


def geometry_suite(seed: int, lv: Level) -> dict:
    cfg = oracle.OracleConfig(samples=lv.samples, seed=seed)
    out = {key: Tally() for key in ("polar-duality", "Prop1", "Prop3", "Thm1", "Thm3", "Thm3-converse", "sections")}
    _polar_duality(np.random.default_rng([seed, 1]), lv, out["polar-duality"], cfg)
    _prop1(np.random.default_rng([seed, 2]), lv, out["Prop1"])
    _prop3(np.random.default_rng([seed, 3]), lv, out["Prop3"])
    _thm1(np.random.default_rng([seed, 4]), lv, out["Thm1"])
    _thm3(np.random.default_rng([seed, 5]), lv, out["Thm3"], out["Thm3-converse"])
    _sections(np.random.default_rng([seed, 6]), lv, out["sections"], cfg)
    return out


# -- capacity ----------------------------------------------------------------


def capacity_suite(seed: int, lv: Level) -> dict:
    rng = np.random.default_rng([seed, 10])
    out = {key: Tally() for key in ("capacity-ellipsoid", "Eq-yaron3", "Eq-clinmax")}
    for _ in range(lv.trials):
        n = int(rng.integers(1, 4))
        hbar = float(rng.uniform(0.5, 2.0))
        ball = capacity.capacity_ellipsoid(Ellipsoid(np.eye(2 * n), hbar)).value
        omega = random_ellipsoid(n, rng, hbar=hbar)
        moved = ell.linear_image(omega, random_symplectic(n, rng))
        c0 = capacity.capacity_ellipsoid(omega).value
        ok = abs(ball - math.pi * hbar) <= 1e-12 * math.pi * hbar
        ok &= abs(capacity.capacity_ellipsoid(moved).value - c0) <= 1e-8 * c0
        out["capacity-ellipsoid"].add(bool(ok))

        x = Ellipsoid(random_posdef(n, rng, cond=20.0), hbar)
        cmax = capacity.cmax_product(x, ell.polar_dual(x)).value
        out["Eq-yaron3"].add(abs(cmax - 4.0 * hbar) <= 1e-9 * 4.0 * hbar)
        cmin = capacity.cmin_lin_product_xxdual(x).value
        out["Eq-clinmax"].add(abs(cmin - math.pi * hbar) <= 1e-9 * math.pi * hbar)
    return out


# -- gaussian ----------------------------------------------------------------


def _wigner_matrix(rng, lv: Level, tally: Tally):
    for _ in range(lv.trials):
        n = int(rng.integers(1, 5))
        psi = gs.random_pure_gaussian(n, rng)
        g = gs.wigner_matrix(psi)
        ok = abs(np.linalg.det(g) - 1.0) <= 1e-9 and is_symplectic(g)
        back = gs.from_blob(gs.to_blob(psi))
        ok &= _gap(back.X, psi.X) <= 1e-8 and np.abs(back.Y - psi.Y).max() <= 1e-8 * max(1.0, np.abs(psi.Y).max())
        s = random_symplectic(n, rng)
        pushed = gs.pushforward(psi, s)
        ok &= gs.to_blob(pushed).allclose(ell.linear_image(gs.to_blob(psi), s), 1e-8)
        tally.add(bool(ok))


def _quantum_condition(rng, lv: Level, tally: Tally):
    for t in range(lv.trials):
        n = int(rng.integers(1, 4))
        lam = rng.uniform(0.2, 2.0, n)
        rho = gs.MixedGaussian(planted_matrix(lam, rng)[0])
        verdict = gs.quantum_check(rho)
        expected = lam.min() >= 0.5
        ok = verdict.is_quantum == expected
        ok &= ell.is_quantized(gs.covariance_ellipsoid(rho)) == verdict.is_quantum
        tally.add(bool(ok))


def _thm2(rng, lv: Level, tally: Tally, cfg: oracle.OracleConfig):
    for t in range(lv.trials):
        n = int(rng.integers(1, 4))
        if t % 2:
            rho = gs.as_density(gs.random_pure_gaussian(n, rng))
        else:
            rho = random_mixed_state(n, rng)
        pure = gs.tomography_pure_test(rho).is_pure
        mu_one = abs(gs.purity(rho, warn=False) - 1.0) <= 1e-9
        blob = ell.is_blob(gs.covariance_ellipsoid(rho)).is_blob
        ok = pure == mu_one == blob == bool(t % 2)
        tally.add(bool(ok))
    for t in range(lv.quadrature):
        rho = gs.as_density(gs.random_pure_gaussian(1, rng)) if t % 2 else random_mixed_state(1, rng)
        gap = oracle.tomography_numeric(rho, cfg).max_gap
        tally.add(gap <= 1e-5 if t % 2 else gap >= 1e-2)


def _random_pure_1d(rng) -> gs.PureGaussian:
    return gs.PureGaussian([[rng.uniform(0.3, 3.0)]], [[rng.uniform(-2.0, 2.0)]])


def _moyal(rng, lv: Level, tally: Tally, cfg: oracle.OracleConfig):
    for _ in range(lv.trials):
        psi = gs.random_pure_gaussian(int(rng.integers(1, 5)), rng)
        n, hbar = psi.n, psi.hbar
        det_g = np.linalg.det(gs.wigner_matrix(psi))
        closed = (math.pi * hbar) ** (-2 * n) * (0.5 * math.pi * hbar) ** n / math.sqrt(det_g)
        tally.add(abs(closed - (2.0 * math.pi * hbar) ** (-n)) <= 1e-9 * (2.0 * math.pi * hbar) ** (-n))
    for _ in range(lv.quadrature):
        tally.add(oracle.moyal_numeric(_random_pure_1d(rng), _random_pure_1d(rng), cfg).residual <= 1e-5)


def _fermi(rng, lv: Level, tally: Tally, cfg: oracle.OracleConfig):
    for _ in range(lv.quadrature):
        tally.add(oracle.pde_residual(_random_pure_1d(rng), cfg) <= 1e-6)


def _quadrature(rng, lv: Level, tally: Tally, cfg: oracle.OracleConfig):
    for _ in range(lv.quadrature):
        psi = _random_pure_1d(rng)
        z = rng.normal(size=2)
        ok = abs(oracle.wigner_numeric(psi, z, cfg) - gs.wigner_eval(psi, z)) <= 1e-6
        rho = random_mixed_state(1, rng, min_excess=0.5)
        x = float(rng.normal() * math.sqrt(rho.Sigma[0, 0]))
        ok &= abs(oracle.marginal_numeric(rho, x, cfg) - gs.marginal_eval(rho, x)) <= 1e-6
        tally.add(bool(ok))


def gaussian_suite(seed: int, lv: Level) -> dict:
    cfg = oracle.OracleConfig(samples=lv.samples, seed=seed)
    out = {key: Tally() for key in ("wigner-matrix", "quantum-condition", "Thm2", "Moyal", "Fermi-PDE", "quadrature")}
    _wigner_matrix(np.random.default_rng([seed, 20]), lv, out["wigner-matrix"])
    _quantum_condition(np.random.default_rng([seed, 21]), lv, out["quantum-condition"])
    _thm2(np.random.default_rng([seed, 22]), lv, out["Thm2"], cfg)
    _moyal(np.random.default_rng([seed, 23]), lv, out["Moyal"], cfg)
    _fermi(np.random.default_rng([seed, 24]), lv, out["Fermi-PDE"], cfg)
    _quadrature(np.random.default_rng([seed, 25]), lv, out["quadrature"], cfg)
    return out


_RUNNERS: dict[str, Callable[[int, Level], dict]] = {
    "geometry": geometry_suite,
    "capacity": capacity_suite,
    "gaussian": gaussian_suite,
}


def run(suite: str = "all", seed: int = 0, level: str = "quick") -> Report:
    if level not in LEVELS:
        raise ValueError(f"level must be one of {sorted(LEVELS)}, got {level!r}")
    names = SUITES if suite == "all" else (suite,)
    if any(name not in _RUNNERS for name in names):
        raise ValueError(f"suite must be one of {SUITES + ('all',)}, got {suite!r}")
    report = Report(suite, seed, level)
    for name in names:
        report.results.update(_RUNNERS[name](seed, LEVELS[level]))
    return report
