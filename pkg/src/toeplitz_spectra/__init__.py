"""Eigenvalue asymptotics of symmetric Toeplitz matrices with n-dependent symbols."""

from .expansion import ErrorReport, ExpansionKind, approx_eigenvalues, c12, error_report, gammas, psi12, q12
from .matrixless import CoefficientGrid, boundary_values, extrapolate, interpolate, predict, validate
from .momentary import BetaSpec, MomentarySymbol, beta_eval, fn_family, instantiate
from .quadrature import DomainError, PVConfig, b_eval, eta, eta_prime, phi, psi
from .symbols import (
    CosineSymbol,
    SimpleLoopReport,
    add,
    derivative,
    evaluate,
    kms,
    laplacian,
    laplacian_power,
    multiply,
    scale,
    simple_loop_check,
    wiener_norm,
)
from .toeplitz import SymmetricBandedToeplitz, build, eigenvalue_count_below, eigenvalues

__version__ = "0.1.0"
