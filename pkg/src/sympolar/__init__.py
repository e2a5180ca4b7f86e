"""Polar duality of ellipsoids, symplectic capacities and Gaussian states in phase space.

Phase-space vectors are ordered ``z = (x, p)`` and the symplectic form is
``omega(z, z') = J z . z'`` with ``J = [[0, I], [-I, 0]]``.
"""

from .capacity import CapacityResult, capacity_ellipsoid, cmax_product, cmin_lin_product_xxdual
from .ellipsoid import (
    BlobReport,
    Ellipsoid,
    HbarMismatchError,
    blob_from_symplectic,
    contains,
    intersect,
    is_blob,
    is_quantized,
    john_of_product,
    lagrangian_slice_check,
    linear_image,
    polar_dual,
    project,
    projection_dual_check,
    symplectic_polar_dual,
)
from .gaussian import (
    MixedGaussian,
    PureGaussian,
    QuantumVerdict,
    covariance_ellipsoid,
    from_blob,
    purity,
    pushforward,
    quantum_check,
    to_blob,
    tomography_pure_test,
    wigner_matrix,
)
from .matcore import InvalidMatrixError, NumericalError, Tolerances
from .symplectic import LagrangianPlane, standard_J, symplectic_eigenvalues, williamson

__version__ = "0.1.0"
