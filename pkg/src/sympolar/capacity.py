"""Symplectic capacities in the regimes where they have closed forms.

All capacities agree on ellipsoids: for ``{M z.z <= r^2}`` the value is
``pi r^2 / lambda_max`` with ``lambda_max`` the largest symplectic
eigenvalue of ``M``. For products ``X x P`` of centered ellipsoids the
maximal capacity is ``4 hbar sup{lam > 0 : lam X^hbar ⊂ P}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .ellipsoid import Ellipsoid, HbarMismatchError, contains, john_of_product, polar_dual
from .matcore import TOL_RECON, NumericalError, mat_sqrt, sym_eigvals
from .symplectic import symplectic_eigenvalues


@dataclass(frozen=True)
class CapacityResult:
    value: float
    formula_used: str  # "ellipsoid" | "product_cmax" | "product_cmin_lin"


def capacity_ellipsoid(omega: Ellipsoid) -> CapacityResult:
    """Capacity ``pi hbar / lambda_max`` of the phase-space ellipsoid ``{M z.z <= hbar}``."""
    lam_max = symplectic_eigenvalues(omega.M)[-1]
    return CapacityResult(math.pi * omega.hbar / lam_max, "ellipsoid")


def cmax_product(x: Ellipsoid, p: Ellipsoid, tol: float = TOL_RECON) -> CapacityResult:
    """Maximal symplectic capacity of ``X x P`` for centered ellipsoids.

    With ``X = {A x.x <= hbar}`` and ``P = {C p.p <= hbar}``,
    ``lam X^hbar ⊂ P`` iff ``lam^2 A^{1/2} C A^{1/2} <= I``, so the optimal
    dilation is ``lam* = mu_max^{-1/2}`` where ``mu_max`` is the top eigenvalue
    of ``A^{1/2} C A^{1/2}``. The reduction is re-checked by a direct
    containment test at ``lam*`` (must hold) and at ``lam* (1 + 10 tol)``
    (must fail).
    """
    if x.hbar != p.hbar:
        raise HbarMismatchError(f"hbar mismatch: {x.hbar} vs {p.hbar}")
    if x.dim != p.dim:
        raise ValueError(f"dimension mismatch: {x.dim} vs {p.dim}")
    root = mat_sqrt(x.M)
    mu_max = sym_eigvals(root @ p.M @ root)[-1]
    lam = 1.0 / math.sqrt(mu_max)

    dual = polar_dual(x)
    if not contains(p, dual.scaled(lam), tol):
        raise NumericalError("optimal dilation of X^hbar is not contained in P")
    if contains(p, dual.scaled(lam * (1.0 + 10.0 * tol)), 0.0):
        raise NumericalError("dilation of X^hbar beyond the optimum is still contained in P")
    return CapacityResult(4.0 * x.hbar * lam, "product_cmax")


def cmin_lin_product_xxdual(x: Ellipsoid, tol: float = TOL_RECON) -> CapacityResult:
    """Smallest linear symplectic capacity of ``X x X^hbar``, which is ``pi hbar`` for every ellipsoid ``X``.

    Evaluated as the capacity of the John ellipsoid of the product (the
    largest symplectic ball it contains) and checked against ``pi hbar``.
    """
    value = capacity_ellipsoid(john_of_product(x)).value
    expected = math.pi * x.hbar
    if abs(value - expected) > max(tol, 1e-12) * expected:
        raise NumericalError(f"capacity of the John ellipsoid is {value!r}, expected {expected!r}")
    return CapacityResult(value, "product_cmin_lin")

