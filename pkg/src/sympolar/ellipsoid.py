"""Centered ellipsoids ``{z : M z.z <= hbar}`` and their polar-duality geometry.

All bodies are centered at the origin. Containment between centered
ellipsoids is decided exactly through the Löwner order
(``inner ⊂ outer  <=>  M_outer <= M_inner``); sampling checks live in
``sympolar.oracle`` only.

Projections and intersections onto a subspace are returned in the
coordinates of that subspace's orthonormal basis, so the result is again a
genuine (lower-dimensional) ellipsoid.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Union

import numpy as np

from .matcore import (
    DEFAULT_TOLERANCES,
    InvalidMatrixError,
    Tolerances,
    as_posdef,
    block_split,
    loewner_leq,
    mat_inv_sqrt,
    schur_complement,
    sym_inv,
)
from .symplectic import (
    LagrangianPlane,
    is_lagrangian,
    is_symplectic,
    standard_J,
    symplectic_eigenvalues,
    symplectic_residual,
)

TOL = DEFAULT_TOLERANCES.recon


class HbarMismatchError(ValueError):
    """Two ellipsoids with different hbar were combined; duality depends on hbar."""


@dataclass(frozen=True, eq=False)
class Ellipsoid:
    """The centered ellipsoid ``{z in R^d : M z.z <= hbar}``."""

    M: np.ndarray
    hbar: float = 1.0

    def __post_init__(self):
        if not self.hbar > 0:
            raise ValueError(f"hbar must be positive, got {self.hbar!r}")
        m = as_posdef(self.M)
        m.setflags(write=False)
        object.__setattr__(self, "M", m)
        object.__setattr__(self, "hbar", float(self.hbar))

    @property
    def dim(self) -> int:
        return self.M.shape[0]

    @property
    def n(self) -> int:
        """Degrees of freedom for a phase-space ellipsoid."""
        if self.dim % 2:
            raise InvalidMatrixError(f"dimension {self.dim} is odd; not a phase-space ellipsoid")
        return self.dim // 2

    def gauge(self, z) -> np.ndarray:
        """``M z.z / hbar`` for one point or a stack of points (last axis is the coordinate)."""
        z = np.asarray(z, dtype=float)
        return np.einsum("...i,ij,...j->...", z, self.M, z) / self.hbar

    def __contains__(self, z) -> bool:
        return bool(self.gauge(z) <= 1.0)

    def scaled(self, factor: float) -> "Ellipsoid":
        """The dilate ``factor * self``."""
        return Ellipsoid(self.M / factor**2, self.hbar)

    def allclose(self, other: "Ellipsoid", tol: float = TOL) -> bool:
        return self.hbar == other.hbar and matrix_gap(self.M, other.M) <= tol


def matrix_gap(a, b) -> float:
    """Relative Frobenius distance ``||a - b|| / max(||a||, ||b||)``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise InvalidMatrixError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b) / max(np.linalg.norm(a), np.linalg.norm(b)))


Plane = Union[str, LagrangianPlane, np.ndarray]


def _plane_basis(plane: Plane, dim: int) -> np.ndarray:
    if isinstance(plane, str):
        if dim % 2:
            raise InvalidMatrixError("coordinate planes need an even dimension")
        n = dim // 2
        tag = plane.upper()
        if tag == "X":
            return np.eye(dim)[:, :n]
        if tag == "P":
            return np.eye(dim)[:, n:]
        raise ValueError(f"coordinate plane tag must be 'X' or 'P', got {plane!r}")
    b = plane.basis if isinstance(plane, LagrangianPlane) else np.asarray(plane, dtype=float)
    if b.ndim != 2 or b.shape[0] != dim or b.shape[1] == 0 or b.shape[1] > dim:
        raise InvalidMatrixError(f"subspace basis of shape {b.shape} does not fit dimension {dim}")
    if np.linalg.norm(b.T @ b - np.eye(b.shape[1])) > 1e-9 * b.shape[1]:
        raise InvalidMatrixError("subspace basis must have orthonormal columns")
    return b


def polar_dual(x: Ellipsoid) -> Ellipsoid:
    """hbar-polar dual: ``{A x.x <= hbar}`` maps to ``{A^-1 p.p <= hbar}``."""
    return Ellipsoid(sym_inv(x.M), x.hbar)


def symplectic_polar_dual(omega: Ellipsoid) -> Ellipsoid:
    """Symplectic polar dual ``J(Omega^hbar)``, the ellipsoid with matrix ``-J M^-1 J``."""
    j = standard_J(omega.n)
    return Ellipsoid(-j @ sym_inv(omega.M) @ j, omega.hbar)


def linear_image(e: Ellipsoid, lin) -> Ellipsoid:
    """Image ``L(E)``; its matrix is ``L^-T M L^-1``."""
    lin = np.asarray(lin, dtype=float)
    if lin.shape != (e.dim, e.dim):
        raise InvalidMatrixError(f"map of shape {lin.shape} does not act on dimension {e.dim}")
    if np.linalg.matrix_rank(lin) < e.dim:
        raise InvalidMatrixError("linear map is singular")
    inv = np.linalg.inv(lin)
    return Ellipsoid(inv.T @ e.M @ inv, e.hbar)


def project(omega: Ellipsoid, plane: Plane) -> Ellipsoid:
    """Orthogonal projection of ``omega`` onto a subspace, in the subspace's basis coordinates.

    For the coordinate planes this is ``M/M_PP`` (tag ``"X"``) or ``M/M_XX``
    (tag ``"P"``). For a general orthonormal basis ``B`` with complement
    ``C`` it is the Schur complement of the ``C``-block of ``[B C]^T M [B C]``.
    """
    if isinstance(plane, str):
        _plane_basis(plane, omega.dim)
        return Ellipsoid(schur_complement(omega.M, "PP" if plane.upper() == "X" else "XX"), omega.hbar)
    b = _plane_basis(plane, omega.dim)
    k = b.shape[1]
    if k == omega.dim:
        return Ellipsoid(b.T @ omega.M @ b, omega.hbar)
    q, _ = np.linalg.qr(b, mode="complete")
    c = q[:, k:]
    mbb = b.T @ omega.M @ b
    mbc = b.T @ omega.M @ c
    mcc = c.T @ omega.M @ c
    return Ellipsoid(mbb - mbc @ np.linalg.solve(mcc, mbc.T), omega.hbar)


def intersect(omega: Ellipsoid, plane: Plane) -> Ellipsoid:
    """Section of ``omega`` by a subspace: matrix ``B^T M B`` in basis coordinates."""
    b = _plane_basis(plane, omega.dim)
    return Ellipsoid(b.T @ omega.M @ b, omega.hbar)


def contains(outer: Ellipsoid, inner: Ellipsoid, tol: float = TOL) -> bool:
    """``inner ⊂ outer``, decided by ``M_outer <= M_inner`` in the Löwner order."""
    if outer.hbar != inner.hbar:
        raise HbarMismatchError(f"hbar mismatch: {outer.hbar} vs {inner.hbar}")
    return loewner_leq(outer.M, inner.M, tol)


def john_of_product(x: Ellipsoid) -> Ellipsoid:
    """Maximal-volume ellipsoid inscribed in ``X x X^hbar``.

    For ``X = {A x.x <= hbar}`` it is ``{A x.x + A^-1 p.p <= hbar}``, the
    image of the ball ``B^{2n}(sqrt(hbar))`` under ``diag(A^{-1/2}, A^{1/2})``.
    """
    n = x.dim
    zero = np.zeros((n, n))
    return Ellipsoid(np.block([[x.M, zero], [zero, sym_inv(x.M)]]), x.hbar)


def blob_from_symplectic(s, hbar: float = 1.0, tol: float = DEFAULT_TOLERANCES.symp) -> Ellipsoid:
    """The quantum blob ``S(B^{2n}(sqrt(hbar)))``, with matrix ``(S S^T)^-1``."""
    s = np.asarray(s, dtype=float)
    if not is_symplectic(s, tol):
        raise InvalidMatrixError(f"matrix is not symplectic (residual {symplectic_residual(s):.2e})")
    return Ellipsoid(sym_inv(s @ s.T), hbar)


@dataclass(frozen=True)
class BlobReport:
    """Verdict of ``is_blob`` and the residuals behind it.

    Residuals are relative to ``||M||_F^2``: ``symplectic`` is the residual of
    ``M^T J M = J``; ``rs`` holds the two block identities
    ``M_XX M_PP - M_XP^2 = I`` and ``M_PX M_PP = M_PP M_XP``; ``cond0`` is
    ``M_PP (M/M_PP) - I``.
    """

    is_blob: bool
    symplectic: float
    cond0_residual: float
    rs_residuals: tuple[float, float]
    witness_S: Optional[np.ndarray] = None


def is_blob(omega: Ellipsoid, tol: float = DEFAULT_TOLERANCES.symp) -> BlobReport:
    """Decide whether ``omega`` is a quantum blob ``S(B^{2n}(sqrt(hbar)))``.

    That is the case iff the matrix ``M`` is itself symplectic. On success
    the report carries the witness ``S = M^{-1/2}`` (symplectic, because the
    square root of a positive symmetric symplectic matrix is symplectic) which
    satisfies ``(S S^T)^-1 = M``.
    """
    m = omega.M
    n = omega.n
    blocks = block_split(m)
    scale = max(1.0, np.linalg.norm(m) ** 2)
    eye = np.eye(n)
    rs1 = np.linalg.norm(blocks.xx @ blocks.pp - blocks.xp @ blocks.xp - eye) / scale
    rs2 = np.linalg.norm(blocks.px @ blocks.pp - blocks.pp @ blocks.xp) / scale
    c0 = np.linalg.norm(blocks.pp @ schur_complement(m, "PP") - eye) / scale
    resid = symplectic_residual(m)
    ok = resid <= tol
    witness = mat_inv_sqrt(m) if ok else None
    return BlobReport(bool(ok), float(resid), float(c0), (float(rs1), float(rs2)), witness)


def is_quantized(omega: Ellipsoid, tol: float = TOL) -> bool:
    """True iff ``omega`` contains a quantum blob, i.e. every symplectic eigenvalue of ``M`` is at most 1."""
    return bool(symplectic_eigenvalues(omega.M)[-1] <= 1.0 + tol)


class ProjectionDualityCheck(NamedTuple):
    holds: bool
    lhs: Ellipsoid
    rhs: Ellipsoid
    gap: float


def projection_dual_check(omega: Ellipsoid, tol: float = TOL) -> ProjectionDualityCheck:
    """Compare the polar dual of the X-projection with the P-section.

    ``lhs = (Pi_X Omega)^hbar`` has matrix ``(M/M_PP)^-1``, ``rhs = Omega ∩ l_P``
    has matrix ``M_PP``. For one degree of freedom they agree exactly when
    ``omega`` is a quantum blob.
    """
    lhs = polar_dual(project(omega, "X"))
    rhs = intersect(omega, "P")
    gap = matrix_gap(lhs.M, rhs.M)
    return ProjectionDualityCheck(gap <= tol, lhs, rhs, gap)


class SliceCheck(NamedTuple):
    included: bool
    equal: bool


def lagrangian_slice_check(omega: Ellipsoid, plane: LagrangianPlane, tol: float = TOL) -> SliceCheck:
    """Compare ``Omega^{hbar,omega} ∩ l`` with ``Omega ∩ l`` on a Lagrangian plane ``l``.

    ``included`` says the section of the symplectic dual lies inside the
    section of ``omega``; ``equal`` says the two sections coincide.
    """
    b = _plane_basis(plane, omega.dim)
    if b.shape[1] != omega.n or not is_lagrangian(b, max(tol, 1e-9)):
        raise InvalidMatrixError("plane is not Lagrangian")
    own = b.T @ omega.M @ b
    dual = b.T @ symplectic_polar_dual(omega).M @ b
    included = loewner_leq(own, dual, tol)
    return SliceCheck(included, included and loewner_leq(dual, own, tol))
