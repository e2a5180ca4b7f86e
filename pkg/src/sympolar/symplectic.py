"""Standard symplectic structure on phase space ``R^{2n}`` with ``z = (x, p)``.

The ordering convention is fixed throughout the package: coordinates are
``(x_1..x_n, p_1..p_n)`` and

    J = [[0, I_n], [-I_n, 0]],    omega(z, z') = J z . z' = p.x' - p'.x

so that ``S`` is symplectic iff ``S.T @ J @ S == J``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .matcore import (
    DEFAULT_TOLERANCES,
    InvalidMatrixError,
    NumericalError,
    Tolerances,
    as_posdef,
    mat_inv_sqrt,
    mat_sqrt,
    sym_eigen,
)


@dataclass(frozen=True)
class SymplecticContext:
    """Degrees of freedom, Planck constant and tolerance policy for one computation."""

    n: int
    hbar: float = 1.0
    tol: Tolerances = field(default=DEFAULT_TOLERANCES)

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        if not self.hbar > 0:
            raise ValueError(f"hbar must be positive, got {self.hbar!r}")

    @property
    def J(self) -> np.ndarray:
        return standard_J(self.n)


def standard_J(n: int) -> np.ndarray:
    """The ``2n x 2n`` standard symplectic matrix ``[[0, I], [-I, 0]]``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


def _even_dim(a: np.ndarray) -> int:
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] % 2:
        raise InvalidMatrixError(f"expected a square matrix of even dimension, got shape {a.shape}")
    return a.shape[0] // 2


def symplectic_residual(s) -> float:
    """``||S^T J S - J||_F / max(1, ||S||_F^2)``."""
    s = np.asarray(s, dtype=float)
    n = _even_dim(s)
    j = standard_J(n)
    return float(np.linalg.norm(s.T @ j @ s - j) / max(1.0, np.linalg.norm(s) ** 2))


def is_symplectic(s, tol: float = DEFAULT_TOLERANCES.symp) -> bool:
    """True iff ``||S^T J S - J||_F <= tol * max(1, ||S||_F^2)``.

    Raises ``InvalidMatrixError`` for non-square or odd-dimensional input.
    """
    return symplectic_residual(s) <= tol


def symplectic_inverse(s) -> np.ndarray:
    """Inverse of a symplectic matrix, ``S^-1 = -J S^T J``."""
    s = np.asarray(s, dtype=float)
    j = standard_J(_even_dim(s))
    return -j @ s.T @ j


def _paired_spectrum(w: np.ndarray) -> np.ndarray:
    # eigenvalues of -K^2 come in equal pairs; sorted pairing is exact up to round-off
    lo, hi = w[0::2], w[1::2]
    scale = max(float(w[-1]), np.finfo(float).tiny)
    if np.any(np.abs(hi - lo) > 1e-6 * scale):
        raise NumericalError("eigenvalues of -K^2 do not pair up; matrix is numerically degenerate")
    return np.sqrt(np.clip(0.5 * (lo + hi), 0.0, None))


def symplectic_eigenvalues(m) -> np.ndarray:
    """Symplectic eigenvalues of a positive definite ``2n x 2n`` matrix, ascending.

    These are the moduli of the eigenvalues ``+-i lambda_j`` of ``J M``. They
    are computed from the antisymmetric matrix ``K = M^{1/2} J M^{1/2}``: the
    symmetric matrix ``-K^2`` has eigenvalues ``lambda_j^2``, each twice.
    """
    m = as_posdef(m)
    n = _even_dim(m)
    root = mat_sqrt(m)
    k = root @ standard_J(n) @ root
    w, _ = sym_eigen(k.T @ k)
    return _paired_spectrum(w)


def _canonical_basis(k: np.ndarray, tol: float = 1e-8):
    """Orthogonal ``O`` with ``O^T K O = [[0, diag(mu)], [-diag(mu), 0]]`` for antisymmetric ``K``.

    Returns ``(O, mu)`` with ``mu`` descending. Eigenvectors of ``-K^2`` are
    grouped into clusters of (numerically) equal eigenvalues; inside a cluster
    pairs ``(u, K u / |K u|)`` are picked greedily and the rest of the cluster
    is re-orthogonalized against them.
    """
    d = k.shape[0]
    n = d // 2
    w, v = sym_eigen(k.T @ k)
    w, v = w[::-1], v[:, ::-1]
    top = max(float(w[0]), np.finfo(float).tiny)

    clusters = []
    start = 0
    for i in range(1, d + 1):
        if i == d or abs(w[i] - w[i - 1]) > tol * max(w[i - 1], 1e-3 * top):
            if (i - start) % 2 and i < d:
                continue
            clusters.append(range(start, i))
            start = i

    xs, ps, mus = [], [], []
    for cluster in clusters:
        picked = []
        for idx in cluster:
            u = v[:, idx].copy()
            for b in picked:
                u -= (b @ u) * b
            norm = np.linalg.norm(u)
            if norm < 0.5:
                continue
            u /= norm
            ku = k @ u
            for b in picked:
                ku -= (b @ ku) * b
            mu = np.linalg.norm(ku)
            if mu == 0.0:
                raise NumericalError("antisymmetric matrix is singular")
            x = ku / mu
            picked.extend([u, x])
            xs.append(x)
            ps.append(u)
            mus.append(mu)
            if len(picked) == len(cluster):
                break
    if len(xs) != n:
        raise NumericalError(f"canonical pairing found {len(xs)} of {n} pairs")
    order = np.argsort(mus, kind="stable")[::-1]
    o = np.column_stack([np.column_stack(xs)[:, order], np.column_stack(ps)[:, order]])
    return o, np.asarray(mus)[order]


def williamson(m, tol: Tolerances = DEFAULT_TOLERANCES):
    """Williamson diagonalization ``M = S0^T diag(Lambda, Lambda) S0``.

    Parameters
    ----------
    m : array_like
        Positive definite ``2n x 2n`` matrix.
    tol : Tolerances
        ``tol.recon`` bounds the relative reconstruction error and
        ``tol.symp`` the symplectic residual of ``S0``; both are re-checked
        before returning.

    Returns
    -------
    s0 : ndarray
        Symplectic matrix.
    lam : ndarray
        Symplectic eigenvalues of ``m``, ascending.

    Notes
    -----
    With ``K' = M^{-1/2} J M^{-1/2}`` and an orthogonal ``O`` bringing ``K'``
    to canonical form ``J diag(mu, mu)``, the matrix
    ``S0 = diag(mu, mu)^{1/2} O^T M^{1/2}`` is symplectic and
    ``S0^T diag(1/mu, 1/mu) S0 = M``; so ``Lambda = 1/mu``.
    """
    m = as_posdef(m, tol)
    n = _even_dim(m)
    j = standard_J(n)
    root = mat_sqrt(m)
    inv_root = mat_inv_sqrt(m)
    kp = inv_root @ j @ inv_root
    kp = 0.5 * (kp - kp.T)
    o, mu = _canonical_basis(kp)
    delta_half = np.sqrt(np.concatenate([mu, mu]))
    s0 = delta_half[:, None] * (o.T @ root)
    lam = 1.0 / mu

    recon = s0.T @ np.diag(np.concatenate([lam, lam])) @ s0
    err = np.linalg.norm(recon - m) / np.linalg.norm(m)
    if err > tol.recon or not is_symplectic(s0, tol.symp):
        raise NumericalError(
            f"Williamson postcondition failed: reconstruction {err:.2e}, symplectic residual {symplectic_residual(s0):.2e}"
        )
    return s0, lam


def _rng(seed):
    return np.random.default_rng(seed)


def _random_orthogonal(rng, n: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def random_symplectic(n: int, seed=None, spread: float = 0.5) -> np.ndarray:
    """Deterministic pseudo-random element of ``Sp(n)``.

    Built as a product of generators of the group: ``diag(L^-1, L^T)``
    with random invertible ``L``, lower and upper symmetric shears
    ``[[I, 0], [P, I]]`` and the matrix ``J``. ``spread`` controls the size
    of the random factors and hence the condition number.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng = _rng(seed)
    eye = np.eye(n)
    zero = np.zeros((n, n))

    def m_l():
        ell = _random_orthogonal(rng, n) @ np.diag(np.exp(rng.uniform(-spread, spread, n))) @ _random_orthogonal(rng, n)
        return np.block([[np.linalg.inv(ell), zero], [zero, ell.T]])

    def shear(lower: bool):
        p = rng.normal(scale=spread, size=(n, n))
        p = 0.5 * (p + p.T)
        return np.block([[eye, zero], [p, eye]]) if lower else np.block([[eye, p], [zero, eye]])

    s = m_l() @ shear(True) @ standard_J(n) @ shear(False) @ m_l()
    if rng.random() < 0.5:
        s = s @ standard_J(n)
    return s


@dataclass(frozen=True, eq=False)
class LagrangianPlane:
    """An ``n``-dimensional isotropic subspace of ``R^{2n}`` given by an orthonormal basis."""

    basis: np.ndarray
    tol: float = DEFAULT_TOLERANCES.recon

    def __post_init__(self):
        b = np.array(self.basis, dtype=float)
        if b.ndim != 2 or b.shape[0] != 2 * b.shape[1]:
            raise InvalidMatrixError(f"Lagrangian basis must have shape (2n, n), got {b.shape}")
        n = b.shape[1]
        if np.linalg.norm(b.T @ b - np.eye(n)) > self.tol * n:
            raise InvalidMatrixError("Lagrangian basis columns are not orthonormal")
        if not is_lagrangian(b, self.tol):
            raise InvalidMatrixError("subspace is not isotropic")
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @property
    def n(self) -> int:
        return self.basis.shape[1]

    @classmethod
    def from_span(cls, vectors, tol: float = DEFAULT_TOLERANCES.recon) -> "LagrangianPlane":
        """Orthonormalize the columns of ``vectors`` and wrap them."""
        q, _ = np.linalg.qr(np.asarray(vectors, dtype=float))
        return cls(q, tol)

    @classmethod
    def x_plane(cls, n: int) -> "LagrangianPlane":
        return cls(np.eye(2 * n)[:, :n])

    @classmethod
    def p_plane(cls, n: int) -> "LagrangianPlane":
        return cls(np.eye(2 * n)[:, n:])


def is_lagrangian(b, tol: float = DEFAULT_TOLERANCES.recon) -> bool:
    """True iff the columns of the ``2n x n`` matrix ``b`` span a Lagrangian plane.

    Tests ``||B^T J B||_F <= tol * ||B||_F^2``; raises for rank-deficient ``b``.
    """
    b = np.asarray(b, dtype=float)
    if b.ndim != 2 or b.shape[0] != 2 * b.shape[1]:
        raise InvalidMatrixError(f"expected a (2n, n) matrix, got shape {b.shape}")
    sv = np.linalg.svd(b, compute_uv=False)
    if sv[-1] <= 1e-12 * sv[0]:
        raise InvalidMatrixError("columns are linearly dependent")
    j = standard_J(b.shape[1])
    return bool(np.linalg.norm(b.T @ j @ b) <= tol * np.linalg.norm(b) ** 2)


def random_lagrangian(n: int, seed=None) -> LagrangianPlane:
    """Image of ``R^n x 0`` under ``random_symplectic(n, seed)``, re-orthonormalized."""
    s = random_symplectic(n, seed)
    return LagrangianPlane.from_span(s[:, :n])


def williamson_plane(m) -> LagrangianPlane:
    """The plane ``S0^{-1}(R^n x 0)`` that diagonalizes ``m`` symplectically."""
    s0, _ = williamson(m)
    n = s0.shape[0] // 2
    return LagrangianPlane.from_span(symplectic_inverse(s0)[:, :n])


def random_posdef(d: int, seed=None, cond: float = 10.0) -> np.ndarray:
    """Random symmetric positive definite ``d x d`` matrix with condition number ``cond``."""
    rng = _rng(seed)
    q = _random_orthogonal(rng, d)
    logs = rng.uniform(0.0, np.log(cond), d)
    if d > 1:
        logs[0], logs[-1] = 0.0, np.log(cond)
    w = np.exp(logs - 0.5 * np.log(cond))
    out = (q * w) @ q.T
    return 0.5 * (out + out.T)


def planted_matrix(lam, seed=None, spread: float = 0.5) -> tuple[np.ndarray, np.ndarray]:
    """Matrix ``S^T diag(lam, lam) S`` with a random symplectic ``S``; returns ``(M, S)``."""
    lam = np.asarray(lam, dtype=float)
    s = random_symplectic(len(lam), seed, spread)
    d = np.concatenate([lam, lam])
    m = s.T @ (d[:, None] * s)
    return 0.5 * (m + m.T), s
