"""Gaussian states: generalized Gaussians, their Wigner matrices and Gaussian density operators.

A pure generalized Gaussian is

    psi_{X,Y}(x) = (pi hbar)^{-n/4} (det X)^{1/4} exp(-(X + iY) x.x / 2 hbar)

with ``X`` positive definite and ``Y`` symmetric. Its Wigner function is
``(pi hbar)^{-n} exp(-G z.z / hbar)`` where the Wigner matrix ``G`` is
symmetric, positive definite and symplectic. A mixed Gaussian is described
by its covariance matrix ``Sigma`` and center ``z0``; its covariance
ellipsoid has matrix ``M = (hbar/2) Sigma^-1``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .ellipsoid import Ellipsoid, is_blob
from .matcore import (
    DEFAULT_TOLERANCES,
    InvalidMatrixError,
    NumericalError,
    as_posdef,
    block_split,
    mat_inv_sqrt,
    mat_sqrt,
    schur_complement,
    sym_eigvals,
    sym_inv,
    symmetrize,
)
from .symplectic import is_symplectic, planted_matrix, random_posdef, standard_J, symplectic_eigenvalues

TOL = DEFAULT_TOLERANCES.recon


class NonPhysicalStateWarning(UserWarning):
    """The covariance matrix violates the quantum condition (purity above 1)."""


class NotABlobError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class PureGaussian:
    X: np.ndarray
    Y: np.ndarray
    hbar: float = 1.0

    def __post_init__(self):
        x = as_posdef(self.X)
        y = symmetrize(self.Y)
        if x.shape != y.shape:
            raise InvalidMatrixError(f"X and Y shapes differ: {x.shape} vs {y.shape}")
        if not self.hbar > 0:
            raise ValueError(f"hbar must be positive, got {self.hbar!r}")
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "X", x)
        object.__setattr__(self, "Y", y)
        object.__setattr__(self, "hbar", float(self.hbar))

    @property
    def n(self) -> int:
        return self.X.shape[0]


@dataclass(frozen=True, eq=False)
class MixedGaussian:
    Sigma: np.ndarray
    z0: Optional[np.ndarray] = None
    hbar: float = 1.0

    def __post_init__(self):
        sigma = as_posdef(self.Sigma)
        if sigma.shape[0] % 2:
            raise InvalidMatrixError(f"covariance matrix must have even dimension, got {sigma.shape[0]}")
        z0 = np.zeros(sigma.shape[0]) if self.z0 is None else np.array(self.z0, dtype=float)
        if z0.shape != (sigma.shape[0],):
            raise InvalidMatrixError(f"center has shape {z0.shape}, expected ({sigma.shape[0]},)")
        if not self.hbar > 0:
            raise ValueError(f"hbar must be positive, got {self.hbar!r}")
        sigma.setflags(write=False)
        z0.setflags(write=False)
        object.__setattr__(self, "Sigma", sigma)
        object.__setattr__(self, "z0", z0)
        object.__setattr__(self, "hbar", float(self.hbar))

    @property
    def n(self) -> int:
        return self.Sigma.shape[0] // 2

    @property
    def M(self) -> np.ndarray:
        return 0.5 * self.hbar * sym_inv(self.Sigma)


def wigner_matrix(psi: PureGaussian) -> np.ndarray:
    """``G = [[X + Y X^-1 Y, Y X^-1], [X^-1 Y, X^-1]]``."""
    x_inv = sym_inv(psi.X)
    y = psi.Y
    g = np.block([[psi.X + y @ x_inv @ y, y @ x_inv], [x_inv @ y, x_inv]])
    return 0.5 * (g + g.T)


def wigner_factor(psi: PureGaussian) -> np.ndarray:
    """Symplectic ``S = [[X^{1/2}, 0], [X^{-1/2} Y, X^{-1/2}]]`` with ``S^T S = G``."""
    root = mat_sqrt(psi.X)
    inv_root = mat_inv_sqrt(psi.X)
    return np.block([[root, np.zeros_like(root)], [inv_root @ psi.Y, inv_root]])


def _points(x, n: int) -> np.ndarray:
    # For n = 1 a scalar or a flat array of positions is accepted.
    x = np.asarray(x, dtype=float)
    if n == 1 and x.shape[-1:] != (1,):
        x = x[..., None]
    if x.shape[-1:] != (n,):
        raise InvalidMatrixError(f"points must have last dimension {n}, got shape {x.shape}")
    return x


def wavefunction_eval(psi: PureGaussian, x) -> complex | np.ndarray:
    """Value of ``psi_{X,Y}`` at ``x`` (shape ``(n,)`` or a stack ``(..., n)``)."""
    x = _points(x, psi.n)
    quad = np.einsum("...i,ij,...j->...", x, psi.X + 1j * psi.Y, x)
    norm = (math.pi * psi.hbar) ** (-psi.n / 4) * np.linalg.det(psi.X) ** 0.25
    out = norm * np.exp(-quad / (2.0 * psi.hbar))
    return complex(out) if out.ndim == 0 else out


def wigner_eval(psi: PureGaussian, z) -> float | np.ndarray:
    """Wigner function ``(pi hbar)^{-n} exp(-G z.z / hbar)``."""
    z = np.asarray(z, dtype=float)
    g = wigner_matrix(psi)
    out = (math.pi * psi.hbar) ** (-psi.n) * np.exp(-np.einsum("...i,ij,...j->...", z, g, z) / psi.hbar)
    return float(out) if out.ndim == 0 else out


def fermi_symbol(psi: PureGaussian, z) -> float | np.ndarray:
    """The quadratic symbol ``(p + Y x).(p + Y x) + X^2 x.x - hbar Tr X`` whose Weyl quantization annihilates ``psi``."""
    z = np.asarray(z, dtype=float)
    n = psi.n
    x, p = z[..., :n], z[..., n:]
    shifted = p + x @ psi.Y.T
    x2 = psi.X @ psi.X
    out = (
        np.einsum("...i,...i->...", shifted, shifted)
        + np.einsum("...i,ij,...j->...", x, x2, x)
        - psi.hbar * np.trace(psi.X)
    )
    return float(out) if np.ndim(out) == 0 else out


def to_blob(psi: PureGaussian) -> Ellipsoid:
    """The quantum blob ``{G z.z <= hbar}`` attached to ``psi``."""
    return Ellipsoid(wigner_matrix(psi), psi.hbar)


def from_blob(omega: Ellipsoid, tol: float = TOL) -> PureGaussian:
    """Inverse of ``to_blob``: read ``X = G_PP^-1`` and ``Y = G_XP G_PP^-1`` off the blocks."""
    report = is_blob(omega, tol)
    if not report.is_blob:
        raise NotABlobError(f"ellipsoid is not a quantum blob (symplectic residual {report.symplectic:.2e})")
    blocks = block_split(omega.M)
    x = sym_inv(blocks.pp)
    y = blocks.xp @ x
    if np.linalg.norm(y - y.T) > max(tol, 1e-12) * max(1.0, np.linalg.norm(y)) * 10:
        raise NumericalError("recovered Y is not symmetric")
    return PureGaussian(x, 0.5 * (y + y.T), omega.hbar)


def pushforward(psi: PureGaussian, s, tol: float = TOL) -> PureGaussian:
    """Gaussian whose Wigner function is ``W psi(S^-1 z)``; Wigner matrix ``S^-T G S^-1``."""
    s = np.asarray(s, dtype=float)
    if not is_symplectic(s, tol):
        raise InvalidMatrixError("transformation is not symplectic")
    s_inv = np.linalg.inv(s)
    g = s_inv.T @ wigner_matrix(psi) @ s_inv
    return from_blob(Ellipsoid(0.5 * (g + g.T), psi.hbar), max(tol, 1e-9))


def as_density(psi: PureGaussian) -> MixedGaussian:
    """The Gaussian density operator ``|psi><psi|``: covariance ``(hbar/2) G^-1``."""
    return MixedGaussian(0.5 * psi.hbar * sym_inv(wigner_matrix(psi)), None, psi.hbar)


def density_eval(rho: MixedGaussian, z) -> float | np.ndarray:
    """Wigner distribution ``(2 pi)^{-n} det(Sigma)^{-1/2} exp(-Sigma^-1 (z-z0).(z-z0) / 2)``."""
    dz = np.asarray(z, dtype=float) - rho.z0
    sigma_inv = sym_inv(rho.Sigma)
    _, logdet = np.linalg.slogdet(rho.Sigma)
    norm = (2.0 * math.pi) ** (-rho.n) * math.exp(-0.5 * logdet)
    out = norm * np.exp(-0.5 * np.einsum("...i,ij,...j->...", dz, sigma_inv, dz))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class QuantumVerdict:
    is_quantum: bool
    min_hermitian_eig: float
    min_sympl_eig_of_sigma: float
    purity: float


def hermitian_embedding(rho: MixedGaussian) -> np.ndarray:
    """Real ``4n x 4n`` symmetric form ``[[Re H, -Im H], [Im H, Re H]]`` of ``H = Sigma + (i hbar/2) J``."""
    half_j = 0.5 * rho.hbar * standard_J(rho.n)
    return np.block([[rho.Sigma, -half_j], [half_j, rho.Sigma]])


def quantum_check(rho: MixedGaussian, tol: float = TOL) -> QuantumVerdict:
    """Test the quantum condition ``Sigma + (i hbar/2) J >= 0`` in two independent ways.

    The Hermitian test looks at the smallest eigenvalue of the real
    embedding; the symplectic test requires every symplectic eigenvalue of
    ``Sigma`` to be at least ``hbar/2``. Both verdicts must agree away from
    the boundary, otherwise ``NumericalError`` is raised.
    """
    scale = max(rho.hbar, float(np.linalg.norm(rho.Sigma)))
    herm = float(sym_eigvals(hermitian_embedding(rho))[0])
    sympl = float(symplectic_eigenvalues(rho.Sigma)[0])
    herm_ok = herm >= -tol * scale
    sympl_ok = sympl >= 0.5 * rho.hbar - tol * scale
    if herm_ok != sympl_ok:
        slack = 1e-6 * scale
        if abs(herm) > slack and abs(sympl - 0.5 * rho.hbar) > slack:
            raise NumericalError(
                f"quantum criteria disagree: min Hermitian eigenvalue {herm:.3e}, min symplectic eigenvalue {sympl:.3e}"
            )
    return QuantumVerdict(herm_ok and sympl_ok, herm, sympl, purity(rho, warn=False))


def purity(rho: MixedGaussian, warn: bool = True) -> float:
    """``Tr(rho^2) = (hbar/2)^n det(Sigma)^{-1/2}``.

    Values above 1 mean the covariance matrix is not that of a quantum state;
    they are returned as computed, with a ``NonPhysicalStateWarning``.
    """
    _, logdet = np.linalg.slogdet(rho.Sigma)
    mu = math.exp(rho.n * math.log(0.5 * rho.hbar) - 0.5 * logdet)
    if warn and mu > 1.0 + 1e-9:
        warnings.warn(f"purity {mu:.6g} exceeds 1: covariance violates the quantum condition", NonPhysicalStateWarning, stacklevel=2)
    return mu


def covariance_ellipsoid(rho: MixedGaussian) -> Ellipsoid:
    """``{z : Sigma^-1 z.z / 2 <= 1}``, i.e. ``{M z.z <= hbar}`` with ``M = (hbar/2) Sigma^-1``."""
    return Ellipsoid(rho.M, rho.hbar)


class Marginal(NamedTuple):
    cov: np.ndarray
    normalizer: float


def x_marginal(rho: MixedGaussian, tol: float = TOL) -> Marginal:
    """Covariance and peak value of the position marginal ``int rho(x, p) dp``.

    The covariance is read as ``Sigma_XX`` and cross-checked against
    ``(hbar/2) (M/M_PP)^-1``.
    """
    cov = block_split(rho.Sigma).xx.copy()
    via_m = 0.5 * rho.hbar * sym_inv(schur_complement(rho.M, "PP"))
    if np.linalg.norm(cov - via_m) > max(tol, 1e-12) * 10 * np.linalg.norm(cov):
        raise NumericalError("marginal covariance disagrees between the Sigma and M routes")
    _, logdet = np.linalg.slogdet(cov)
    normalizer = (2.0 * math.pi) ** (-rho.n / 2) * math.exp(-0.5 * logdet)
    return Marginal(cov, normalizer)


def marginal_eval(rho: MixedGaussian, x) -> float | np.ndarray:
    """Position marginal at ``x`` for a centered state (closed form)."""
    cov, normalizer = x_marginal(rho)
    x = _points(x, rho.n)
    out = normalizer * np.exp(-0.5 * np.einsum("...i,ij,...j->...", x, sym_inv(cov), x))
    return float(out) if out.ndim == 0 else out


class TomographyResult(NamedTuple):
    is_pure: bool
    residuals: tuple[float, float]


def tomography_pure_test(rho: MixedGaussian, tol: float = TOL) -> TomographyResult:
    """Purity test from partial covariance data: ``M_PP^-1 == M/M_PP``.

    ``residuals[0]`` is the relative gap between ``M_PP^-1`` and ``M/M_PP``;
    ``residuals[1]`` is ``|det M - 1|`` (informational). For one degree of
    freedom the first condition is exactly purity; for more it is necessary
    but not sufficient.
    """
    m = rho.M
    pp_inv = sym_inv(block_split(m).pp)
    schur = schur_complement(m, "PP")
    r1 = float(np.linalg.norm(pp_inv - schur) / max(np.linalg.norm(pp_inv), np.linalg.norm(schur)))
    r2 = float(abs(np.linalg.det(m) - 1.0))
    return TomographyResult(r1 <= tol, (r1, r2))


def random_pure_gaussian(n: int, seed=None, hbar: float = 1.0, cond: float = 10.0) -> PureGaussian:
    """Random ``psi_{X,Y}`` with ``X`` of condition number ``cond`` and ``Y`` of unit scale."""
    rng = np.random.default_rng(seed)
    x = random_posdef(n, rng, cond)
    y = rng.normal(size=(n, n))
    return PureGaussian(x, 0.5 * (y + y.T), hbar)


def random_mixed_gaussian(n: int, seed=None, hbar: float = 1.0, lam=None, spread: float = 0.5) -> MixedGaussian:
    """Gaussian state ``Sigma = S^T diag(lam, lam) S`` with planted symplectic spectrum ``lam``.

    Without ``lam`` the spectrum is drawn from ``[hbar/2, 2 hbar]``.
    """
    rng = np.random.default_rng(seed)
    if lam is None:
        lam = rng.uniform(0.5 * hbar, 2.0 * hbar, n)
    sigma, _ = planted_matrix(lam, rng, spread)
    return MixedGaussian(sigma, None, hbar)
