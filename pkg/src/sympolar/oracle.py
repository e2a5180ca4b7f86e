"""Independent numerical re-derivations of the closed forms.

Geometric oracles work by sampling points and testing membership directly;
the Gaussian oracles (one degree of freedom only) evaluate the defining
integrals by the trapezoid rule. Trapezoid quadrature converges
geometrically on smooth, rapidly decaying integrands, so a fixed grid
reaching ``grid_extent`` standard deviations is enough for the tolerances
used in the test suite.

Every oracle is a deterministic function of its inputs and ``OracleConfig``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .ellipsoid import Ellipsoid, project
from .gaussian import MixedGaussian, PureGaussian, density_eval, wavefunction_eval, wigner_eval, wigner_matrix
from .matcore import block_inverse

QUAD_POINTS = 2**12
BOUNDARY_BAND = 1e-9


@dataclass(frozen=True)
class OracleConfig:
    samples: int = 20000
    seed: int = 0
    quadrature_order: int = 64
    grid_extent: float = 8.0

    def __post_init__(self):
        if self.samples <= 0 or self.quadrature_order <= 0 or not self.grid_extent > 0:
            raise ValueError("oracle sizes must be positive")

    def rng(self, salt: int = 0) -> np.random.Generator:
        return np.random.default_rng([self.seed, salt])


def _one_dof(n: int):
    if n != 1:
        raise ValueError(f"quadrature oracles support one degree of freedom only, got n={n}")


def _cholesky_boundary(m, hbar, directions) -> np.ndarray:
    # Points with M z.z = hbar: z = sqrt(hbar) L^-T u for unit u, M = L L^T.
    chol = np.linalg.cholesky(m)
    return math.sqrt(hbar) * np.linalg.solve(chol.T, directions.T).T


def _unit_directions(rng, count: int, dim: int) -> np.ndarray:
    u = rng.normal(size=(count, dim))
    return u / np.linalg.norm(u, axis=1, keepdims=True)


# -- geometry --------------------------------------------------------------


def support_value(e: Ellipsoid, p) -> float | np.ndarray:
    """``sup_{x in E} p.x``, which for ``E = {A x.x <= hbar}`` is ``sqrt(hbar A^-1 p.p)``."""
    p = np.asarray(p, dtype=float)
    sol = np.linalg.solve(e.M, np.atleast_2d(p).T).T
    out = np.sqrt(e.hbar * np.einsum("...i,...i->...", np.atleast_2d(p), sol))
    return float(out[0]) if p.ndim == 1 else out


def support_membership(e: Ellipsoid, p, slack: float = 0.0) -> bool | np.ndarray:
    """Membership of ``p`` in the hbar-polar dual of ``e`` from the support-function inequality."""
    out = support_value(e, p) <= e.hbar * (1.0 + slack)
    return bool(out) if np.ndim(out) == 0 else out


class MembershipAgreement(NamedTuple):
    checked: int
    disagreements: int
    boundary_excluded: int


def polar_dual_agreement(e: Ellipsoid, dual: Ellipsoid, cfg: OracleConfig = OracleConfig()) -> MembershipAgreement:
    """Compare membership in ``dual`` with the support-function test on random momenta."""
    rng = cfg.rng(1)
    scale = math.sqrt(e.hbar / np.linalg.eigvalsh(e.M)[0])
    p = rng.normal(size=(cfg.samples, e.dim)) * (e.hbar / scale)
    ratio = support_value(e, p) / e.hbar
    near = np.abs(ratio - 1.0) < BOUNDARY_BAND
    claimed = dual.gauge(p) <= 1.0
    wrong = (claimed != (ratio <= 1.0)) & ~near
    return MembershipAgreement(int((~near).sum()), int(wrong.sum()), int(near.sum()))


def mc_containment(inner: Ellipsoid, outer: Ellipsoid, cfg: OracleConfig = OracleConfig()) -> bool:
    """Sampling test of ``inner ⊂ outer``: every sampled boundary point of ``inner`` lies in ``outer``."""
    if inner.dim != outer.dim:
        raise ValueError(f"dimension mismatch: {inner.dim} vs {outer.dim}")
    rng = cfg.rng(2)
    z = _cholesky_boundary(inner.M, inner.hbar, _unit_directions(rng, cfg.samples, inner.dim))
    return bool(np.all(outer.gauge(z) <= 1.0 + BOUNDARY_BAND))


def mc_projection(omega: Ellipsoid, tag: str, cfg: OracleConfig = OracleConfig()) -> MembershipAgreement:
    """Check ``project(omega, tag)`` against direct minimization over the discarded coordinates.

    ``x`` lies in the projection iff ``min_p M(x, p).(x, p) <= hbar``. The
    minimum equals ``x.((M^-1)_XX)^-1 x``, read here from the blockwise
    inverse; the projection itself is computed through a Schur complement.
    """
    n = omega.n
    inv = block_inverse(omega.M)
    keep = slice(0, n) if tag.upper() == "X" else slice(n, 2 * n)
    reduced = np.linalg.inv(inv[keep, keep])
    reduced = 0.5 * (reduced + reduced.T)
    rng = cfg.rng(3)
    radii = rng.uniform(0.0, 1.5, cfg.samples)[:, None]
    x = radii * _cholesky_boundary(reduced, omega.hbar, _unit_directions(rng, cfg.samples, n))
    minimum = np.einsum("...i,ij,...j->...", x, reduced, x) / omega.hbar
    near = np.abs(minimum - 1.0) < BOUNDARY_BAND
    claimed = project(omega, tag).gauge(x) <= 1.0
    wrong = (claimed != (minimum <= 1.0)) & ~near
    return MembershipAgreement(int((~near).sum()), int(wrong.sum()), int(near.sum()))


def mc_section(omega: Ellipsoid, basis, section: Ellipsoid, cfg: OracleConfig = OracleConfig()) -> MembershipAgreement:
    """Check a section ``omega ∩ span(basis)``: ``u`` is in ``section`` iff ``basis @ u`` is in ``omega``."""
    b = np.asarray(basis, dtype=float)
    k = b.shape[1]
    rng = cfg.rng(4)
    radii = rng.uniform(0.0, 1.5, cfg.samples)[:, None]
    u = radii * _cholesky_boundary(section.M, omega.hbar, _unit_directions(rng, cfg.samples, k))
    direct = omega.gauge(u @ b.T)
    near = np.abs(direct - 1.0) < BOUNDARY_BAND
    wrong = ((section.gauge(u) <= 1.0) != (direct <= 1.0)) & ~near
    return MembershipAgreement(int((~near).sum()), int(wrong.sum()), int(near.sum()))


# -- Gaussian quadrature (n = 1) ---------------------------------------------


def _trapezoid_grid(half_width: float, points: int = QUAD_POINTS) -> np.ndarray:
    return np.linspace(-half_width, half_width, points)


def wigner_numeric(psi: PureGaussian, z, cfg: OracleConfig = OracleConfig()) -> float:
    """``(2 pi hbar)^-1 int exp(-i p y / hbar) psi(x + y/2) conj(psi(x - y/2)) dy`` by the trapezoid rule."""
    _one_dof(psi.n)
    x, p = (float(v) for v in np.asarray(z, dtype=float).ravel())
    hbar = psi.hbar
    # |psi(x + y/2) psi(x - y/2)| decays like exp(-X y^2 / 4 hbar)
    std = math.sqrt(2.0 * hbar / psi.X[0, 0])
    y = _trapezoid_grid(cfg.grid_extent * std)
    integrand = np.exp(-1j * p * y / hbar) * wavefunction_eval(psi, x + 0.5 * y) * np.conj(wavefunction_eval(psi, x - 0.5 * y))
    return float(np.trapezoid(integrand, y).real / (2.0 * math.pi * hbar))


class MoyalCheck(NamedTuple):
    lhs: float
    rhs: float
    residual: float


def _wigner_std(psi: PureGaussian) -> float:
    # Largest standard deviation of W psi, whose covariance is (hbar/2) G^-1.
    return math.sqrt(0.5 * psi.hbar * np.linalg.eigvalsh(np.linalg.inv(wigner_matrix(psi)))[-1])


def moyal_numeric(psi: PureGaussian, phi: PureGaussian, cfg: OracleConfig = OracleConfig(), points: int = 401) -> MoyalCheck:
    """Both sides of ``int W psi W phi dz = (2 pi hbar)^-1 |<psi|phi>|^2``, each by quadrature."""
    _one_dof(psi.n)
    _one_dof(phi.n)
    if psi.hbar != phi.hbar:
        raise ValueError("states use different hbar")
    hbar = psi.hbar
    half = cfg.grid_extent * max(_wigner_std(psi), _wigner_std(phi))
    axis = _trapezoid_grid(half, points)
    xx, pp = np.meshgrid(axis, axis, indexing="ij")
    z = np.stack([xx, pp], axis=-1)
    product = wigner_eval(psi, z) * wigner_eval(phi, z)
    lhs = float(np.trapezoid(np.trapezoid(product, axis, axis=1), axis))

    std = math.sqrt(hbar / min(psi.X[0, 0], phi.X[0, 0]))
    x = _trapezoid_grid(cfg.grid_extent * std)
    overlap = np.trapezoid(wavefunction_eval(psi, x) * np.conj(wavefunction_eval(phi, x)), x)
    rhs = float(abs(overlap) ** 2 / (2.0 * math.pi * hbar))
    return MoyalCheck(lhs, rhs, abs(lhs - rhs))


def marginal_numeric(rho: MixedGaussian, x: float, cfg: OracleConfig = OracleConfig(), method: str = "trapezoid") -> float:
    """``int rho(x, p) dp`` by quadrature around the conditional mean of ``p``.

    ``method="trapezoid"`` uses a uniform grid of ``grid_extent`` standard
    deviations of ``p``; ``method="hermite"`` uses ``cfg.quadrature_order``
    Gauss-Hermite nodes scaled to the conditional spread of ``p``.
    """
    _one_dof(rho.n)
    sigma = rho.Sigma
    center = rho.z0[1] + sigma[1, 0] / sigma[0, 0] * (x - rho.z0[0])
    if method == "trapezoid":
        p = center + _trapezoid_grid(cfg.grid_extent * math.sqrt(sigma[1, 1]))
        return float(np.trapezoid(density_eval(rho, np.stack([np.full_like(p, x), p], axis=-1)), p))
    if method == "hermite":
        width = math.sqrt(2.0 * (sigma[1, 1] - sigma[1, 0] ** 2 / sigma[0, 0]))
        nodes, weights = np.polynomial.hermite.hermgauss(cfg.quadrature_order)
        p = center + width * nodes
        values = density_eval(rho, np.stack([np.full_like(p, x), p], axis=-1))
        return float(width * np.sum(weights * np.exp(nodes**2) * values))
    raise ValueError(f"method must be 'trapezoid' or 'hermite', got {method!r}")


def pde_residual(
    psi: PureGaussian,
    cfg: OracleConfig = OracleConfig(),
    step: float | None = None,
    operator: PureGaussian | None = None,
) -> float:
    """``max |H psi| / max |psi|`` for the Weyl-quantized Fermi function, by finite differences.

    ``H psi = -hbar^2 psi'' - i hbar Y (2 x psi' + psi) + (X^2 + Y^2) x^2 psi - hbar X psi``,
    with fourth-order central differences on a grid of step ``1e-3 sqrt(hbar)``.
    ``X`` and ``Y`` are taken from ``operator`` (default ``psi`` itself).
    """
    _one_dof(psi.n)
    hbar = psi.hbar
    op = psi if operator is None else operator
    xv, yv = op.X[0, 0], op.Y[0, 0]
    h = 1e-3 * math.sqrt(hbar) if step is None else step
    half = cfg.grid_extent * math.sqrt(hbar / psi.X[0, 0])
    count = int(math.ceil(half / h))
    x = h * np.arange(-count - 2, count + 3)
    f = wavefunction_eval(psi, x)
    inner = slice(2, -2)
    d1 = (f[:-4] - 8.0 * f[1:-3] + 8.0 * f[3:-1] - f[4:]) / (12.0 * h)
    d2 = (-f[:-4] + 16.0 * f[1:-3] - 30.0 * f[2:-2] + 16.0 * f[3:-1] - f[4:]) / (12.0 * h * h)
    xi, fi = x[inner], f[inner]
    h_psi = -(hbar**2) * d2 - 1j * hbar * yv * (2.0 * xi * d1 + fi) + (xv**2 + yv**2) * xi**2 * fi - hbar * xv * fi
    return float(np.max(np.abs(h_psi)) / np.max(np.abs(f)))


class TomographyCurves(NamedTuple):
    x: np.ndarray
    lhs_curve: np.ndarray
    rhs_curve: np.ndarray
    max_gap: float


def tomography_numeric(rho: MixedGaussian, cfg: OracleConfig = OracleConfig(), points: int = 201) -> TomographyCurves:
    """Tabulate both sides of the purity identity for one degree of freedom.

    ``lhs_curve`` is the Fourier transform ``(2 pi hbar)^{-1/2} int exp(-i p x / hbar) rho(0, p/2) dp``;
    ``rhs_curve`` is ``(2 / (pi hbar))^{1/2} int rho(x, p) dp``. Both are
    computed by quadrature and coincide exactly when the state is pure.
    """
    _one_dof(rho.n)
    hbar = rho.hbar
    sigma = rho.Sigma
    xs = _trapezoid_grid(cfg.grid_extent * math.sqrt(sigma[0, 0]), points)
    p = _trapezoid_grid(2.0 * cfg.grid_extent * math.sqrt(sigma[1, 1]))
    f = density_eval(rho, np.stack([np.zeros_like(p), 0.5 * p], axis=-1))
    kernel = np.exp(-1j * np.outer(xs, p) / hbar)
    lhs = np.trapezoid(kernel * f, p, axis=1) / math.sqrt(2.0 * math.pi * hbar)
    marginal = np.array([marginal_numeric(rho, x, cfg) for x in xs])
    rhs = math.sqrt(2.0 / (math.pi * hbar)) * marginal
    return TomographyCurves(xs, lhs, rhs, float(np.max(np.abs(lhs - rhs))))
