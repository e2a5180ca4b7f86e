"""Dense symmetric-matrix kernel.

Everything else in the package is built on the handful of routines here:
a cyclic Jacobi eigensolver, functional calculus on positive definite
matrices (square roots, inverse square roots), the Löwner order, and the
2x2 block calculus (Schur complements, block inversion) used for phase-space
matrices written in ``(x, p)`` ordering.

Matrices are plain ``numpy`` arrays. ``symmetrize`` and ``as_posdef`` are the
validating constructors; they return new arrays and never modify the input.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

# Default tolerances. Every public routine takes an override.
TOL_RECON = 1e-9
TOL_ASYM = 1e-8
EPS_PD = 1e-12
JACOBI_THRESHOLD = 1e-13
JACOBI_MAX_SWEEPS = 100


class InvalidMatrixError(ValueError):
    """Input matrix violates a structural requirement (shape, symmetry, definiteness)."""


class NotSymmetricError(InvalidMatrixError):
    pass


class NotPositiveDefiniteError(InvalidMatrixError):
    pass


class NumericalError(RuntimeError):
    """An internal postcondition failed; signals a bug or a pathological input."""


class ConvergenceError(NumericalError):
    pass


@dataclass(frozen=True)
class Tolerances:
    """Tolerance policy shared by the geometric and Gaussian layers.

    ``recon`` is the relative tolerance for matrix comparisons, ``symp`` the
    relative tolerance for symplectic membership, ``pd`` the relative floor on
    the smallest eigenvalue of a positive definite matrix and ``asym`` the
    largest relative asymmetry accepted (and silently removed) on input.
    """

    recon: float = TOL_RECON
    symp: float = TOL_RECON
    pd: float = EPS_PD
    asym: float = TOL_ASYM


DEFAULT_TOLERANCES = Tolerances()


class BlockSplit(NamedTuple):
    xx: np.ndarray
    xp: np.ndarray
    px: np.ndarray
    pp: np.ndarray


def _square(a, name: str = "matrix") -> np.ndarray:
    a = np.array(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise InvalidMatrixError(f"{name} must be a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidMatrixError(f"{name} has non-finite entries")
    return a


def symmetrize(a, asym_tol: float = TOL_ASYM) -> np.ndarray:
    """Return ``(a + a.T) / 2`` after checking that ``a`` is symmetric up to round-off.

    Raises
    ------
    NotSymmetricError
        If ``||a - a.T||_F > asym_tol * ||a||_F``.
    """
    a = _square(a)
    norm = np.linalg.norm(a)
    if np.linalg.norm(a - a.T) > asym_tol * norm:
        raise NotSymmetricError("matrix is not symmetric")
    return 0.5 * (a + a.T)


try:
    from numba import njit
except ImportError:  # pragma: no cover - exercised only without numba
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


@njit(cache=True)
def _jacobi_kernel(a, target, max_sweeps):
    # In-place cyclic Jacobi on ``a``; returns (eigenvectors, converged).
    d = a.shape[0]
    v = np.eye(d)
    for _ in range(max_sweeps + 1):
        off = 0.0
        for i in range(d):
            for j in range(i + 1, d):
                off += 2.0 * a[i, j] * a[i, j]
        if np.sqrt(off) <= target:
            return v, True
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                # symmetric 2x2 Schur decomposition, Golub & Van Loan 8.5.2
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                for k in range(d):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(d):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(d):
                    vp = v[k, p]
                    vq = v[k, q]
                    v[k, p] = c * vp - s * vq
                    v[k, q] = s * vp + c * vq
    return v, False


def sym_eigen(a, threshold: float = JACOBI_THRESHOLD, max_sweeps: int = JACOBI_MAX_SWEEPS):
    """Eigendecomposition of a real symmetric matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    a : array_like
        Symmetric matrix (only the symmetric part is used).
    threshold : float
        Sweeps stop once the off-diagonal Frobenius norm drops below
        ``threshold * ||a||_F``.
    max_sweeps : int
        Iteration cap; exceeding it raises ``ConvergenceError``.

    Returns
    -------
    w : ndarray
        Eigenvalues in ascending order.
    v : ndarray
        Orthonormal eigenvectors, ``v[:, k]`` belongs to ``w[k]``.
    """
    a = _square(a)
    a = 0.5 * (a + a.T)
    scale = np.linalg.norm(a)
    if scale == 0.0:
        return np.zeros(a.shape[0]), np.eye(a.shape[0])
    v, converged = _jacobi_kernel(a, threshold * scale, max_sweeps)
    if not converged:
        raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")
    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def sym_eigvals(a) -> np.ndarray:
    return sym_eigen(a)[0]


def as_posdef(a, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Validate a symmetric positive definite matrix and return its symmetrized copy.

    The smallest eigenvalue must exceed ``tol.pd`` times the largest one.
    """
    a = symmetrize(a, tol.asym)
    w = sym_eigvals(a)
    if w[-1] <= 0.0 or w[0] <= tol.pd * w[-1]:
        raise NotPositiveDefiniteError(f"matrix is not positive definite (eigenvalues in [{w[0]:.3e}, {w[-1]:.3e}])")
    return a


def _spectral_function(a, f) -> np.ndarray:
    w, v = sym_eigen(a)
    if w[0] <= 0.0:
        raise NotPositiveDefiniteError("spectral function requires a positive definite matrix")
    out = (v * f(w)) @ v.T
    return 0.5 * (out + out.T)


def mat_sqrt(a) -> np.ndarray:
    """Principal square root of a positive definite matrix."""
    return _spectral_function(a, np.sqrt)


def mat_inv_sqrt(a) -> np.ndarray:
    """Inverse of the principal square root of a positive definite matrix."""
    return _spectral_function(a, lambda w: 1.0 / np.sqrt(w))


def sym_inv(a) -> np.ndarray:
    """Inverse of a symmetric invertible matrix, symmetrized."""
    out = np.linalg.inv(np.asarray(a, dtype=float))
    return 0.5 * (out + out.T)


def loewner_leq(a, b, tol: float = TOL_RECON) -> bool:
    """Decide ``a <= b`` in the Löwner order.

    True iff the smallest eigenvalue of ``b - a`` is at least
    ``-tol * max(||a||_F, ||b||_F)``; the tolerance is relative so the
    answer does not depend on an overall scale.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise InvalidMatrixError(f"dimension mismatch: {a.shape} vs {b.shape}")
    scale = max(np.linalg.norm(a), np.linalg.norm(b))
    return bool(sym_eigvals(b - a)[0] >= -tol * scale)


def _half(m) -> int:
    d = m.shape[0]
    if d % 2:
        raise InvalidMatrixError(f"block operations need an even dimension, got {d}")
    return d // 2


def block_split(m) -> BlockSplit:
    """Split a ``2n x 2n`` matrix into its ``(x, p)`` blocks."""
    m = _square(m)
    n = _half(m)
    return BlockSplit(m[:n, :n], m[:n, n:], m[n:, :n], m[n:, n:])


def schur_complement(m, against: str = "PP") -> np.ndarray:
    """Schur complement of a ``2n x 2n`` positive definite matrix.

    ``against="PP"`` gives ``M/M_PP = M_XX - M_XP M_PP^-1 M_PX`` and
    ``against="XX"`` gives ``M/M_XX = M_PP - M_PX M_XX^-1 M_XP``.
    """
    blocks = block_split(m)
    if against == "PP":
        out = blocks.xx - blocks.xp @ np.linalg.solve(blocks.pp, blocks.px)
    elif against == "XX":
        out = blocks.pp - blocks.px @ np.linalg.solve(blocks.xx, blocks.xp)
    else:
        raise ValueError(f"against must be 'PP' or 'XX', got {against!r}")
    return 0.5 * (out + out.T)


def block_inverse(m) -> np.ndarray:
    """Invert a ``2n x 2n`` positive definite matrix blockwise through its Schur complements."""
    blocks = block_split(m)
    s_pp = np.linalg.inv(schur_complement(m, "PP"))
    s_xx = np.linalg.inv(schur_complement(m, "XX"))
    pp_inv = np.linalg.inv(blocks.pp)
    upper = -s_pp @ blocks.xp @ pp_inv
    lower = -pp_inv @ blocks.px @ s_pp
    out = np.block([[s_pp, upper], [lower, s_xx]])
    return 0.5 * (out + out.T)
