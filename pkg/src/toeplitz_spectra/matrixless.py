"""Matrix-less eigenvalue prediction for n-dependent symbols.

For ``T_n(f_0 + beta_1(h) f_1 + ...)`` with a simple expansion

    lambda_j(n) = f_0(d_{j,n}) + sum_l c_l(d_{j,n}) h^l + O(h^{L+1}),

the coefficients ``c_l`` are sampled on the coarse mesh ``pi j h0`` by
Richardson-type extrapolation from the spectra of a few small matrices of
sizes ``n_s = 2^s (n0+1) - 1``, whose meshes contain the coarse mesh.  They are
then interpolated locally to the mesh of any large n, optionally with exact
endpoint values as extra nodes, which removes the large errors that one-sided
interpolation produces near 0 and pi.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import BarycentricInterpolator

from .expansion import ErrorReport, mesh, report
from .momentary import MomentarySymbol, instantiate, step
from .symbols import evaluate, laplacian_power
from .toeplitz import default_threads, symbol_eigenvalues

DEFAULT_LEVELS = 5
DEFAULT_DEGREE = 8


@dataclass(frozen=True)
class CoefficientGrid:
    """Sampled coefficients ``values[l-1, j-1] ~ c_l(pi j h0)`` plus optional endpoint values."""

    n0: int
    values: np.ndarray = field(repr=False)
    boundary: np.ndarray | None = field(default=None, repr=False)
    residual: float = 0.0

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.ndim != 2 or v.shape[1] != self.n0:
            raise ValueError("values must have shape (levels, n0)")
        if not np.all(np.isfinite(v)):
            raise ValueError("coefficient values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        if self.boundary is not None:
            b = np.array(self.boundary, dtype=float)
            if b.shape != (v.shape[0], 2):
                raise ValueError("boundary must have shape (levels, 2)")
            b.setflags(write=False)
            object.__setattr__(self, "boundary", b)

    @property
    def levels(self) -> int:
        return self.values.shape[0]

    @property
    def h0(self) -> float:
        return step(self.n0)

    @property
    def theta(self) -> np.ndarray:
        return mesh(self.n0)


def schedule(n0: int, levels: int) -> list[int]:
    """Nested matrix sizes ``2^s (n0+1) - 1``, s = 0..levels-1."""
    return [2**s * (n0 + 1) - 1 for s in range(levels)]


def boundary_values(alpha1: float, alpha0: float, levels: int) -> np.ndarray:
    """Rows ``(c_l(0), c_l(pi))`` for l = 1..levels of the family
    ``f_2 + alpha1 f_1 h^2 + alpha0 h^4``.

    Only c_2 and c_4 pick up the symbol terms; every other coefficient
    vanishes at both endpoints.
    """
    if levels < 1:
        raise ValueError("levels must be >= 1")
    out = np.zeros((levels, 2))
    if levels >= 2:
        out[1, 1] = 4.0 * alpha1
    if levels >= 4:
        out[3, 1] = alpha0
    return out


def family_parameters(ms: MomentarySymbol) -> tuple[float, float] | None:
    """``(alpha1, alpha0)`` if ``ms`` is the family built by ``fn_family``, else None."""
    f0, f1, f2 = (laplacian_power(q).coeffs for q in (0, 1, 2))
    if not np.array_equal(ms.base.coeffs, f2) or len(ms.terms) != 2:
        return None
    (b1, s1), (b0, s0) = ms.terms
    if (b1.form, b1.p, b1.q, b0.form, b0.p, b0.q) != ("power_log", 2.0, 0, "power_log", 4.0, 0):
        return None
    if not (np.array_equal(s1.coeffs, f1) and np.array_equal(s0.coeffs, f0)):
        return None
    return b1.c, b0.c


def solve_levels(errors: np.ndarray, n0: int) -> tuple[np.ndarray, float]:
    """Solve ``sum_l c_l h_s^l = errors[s]`` for every column.

    The unknowns are rescaled by ``h0^l`` so the matrix has entries
    ``2^(-s l)``; returns the coefficients and the worst relative residual.
    """
    levels = errors.shape[0]
    ell = np.arange(1, levels + 1)
    w = 2.0 ** -np.outer(np.arange(levels), ell)
    if np.linalg.cond(w) > 1e14:
        raise np.linalg.LinAlgError("extrapolation system is numerically singular")
    y = np.linalg.solve(w, errors)
    resid = np.abs(w @ y - errors).max(axis=0) / np.maximum(np.abs(errors).max(axis=0), np.finfo(float).tiny)
    h0 = step(n0)
    return y / h0 ** ell[:, None], float(resid.max()) if resid.size else 0.0


def extrapolate(
    ms: MomentarySymbol,
    n0: int,
    k: int,
    levels: int | None = None,
    boundary: np.ndarray | bool | None = None,
    method: str = "lapack",
    threads: int | None = None,
) -> CoefficientGrid:
    """Sample ``c_1..c_levels`` on the mesh of size ``n0``.

    ``levels`` defaults to ``max(k-1, DEFAULT_LEVELS)``.  ``boundary`` may be
    an explicit array, False to omit endpoint values, or None to use the
    known values when ``ms`` belongs to the ``fn_family`` family.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    if n0 < 4:
        raise ValueError("n0 must be >= 4")
    levels = max(k - 1, DEFAULT_LEVELS) if levels is None else int(levels)
    if levels < k - 1:
        raise ValueError("levels must be at least k - 1")
    sizes = schedule(n0, levels)
    work = lambda ns: symbol_eigenvalues(instantiate(ms, ns), ns, method=method)
    threads = threads or default_threads()
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            spectra = list(pool.map(work, sizes))
    else:
        spectra = [work(ns) for ns in sizes]
    j = np.arange(1, n0 + 1)
    base = evaluate(ms.base, mesh(n0))
    errors = np.array([lam[2**s * j - 1] - base for s, lam in enumerate(spectra)])
    values, resid = solve_levels(errors, n0)
    if boundary is None:
        params = family_parameters(ms)
        boundary = None if params is None else boundary_values(*params, levels)
    elif boundary is False:
        boundary = None
    return CoefficientGrid(n0=n0, values=values, boundary=boundary, residual=resid)


def _nodes(grid: CoefficientGrid, ell: int, use_boundary: bool):
    x = grid.theta
    y = grid.values[ell - 1]
    if use_boundary and grid.boundary is not None:
        lo, hi = grid.boundary[ell - 1]
        x = np.concatenate([[0.0], x, [np.pi]])
        y = np.concatenate([[lo], y, [hi]])
    return x, y


def interpolate(grid: CoefficientGrid, ell: int, theta, degree: int = DEFAULT_DEGREE, use_boundary: bool = True):
    """Local polynomial interpolation of ``c_ell`` through the ``degree+1`` nearest nodes."""
    if not 1 <= ell <= grid.levels:
        raise ValueError(f"ell must be in 1..{grid.levels}")
    t = np.asarray(theta, dtype=float)
    if np.any(t < 0.0) or np.any(t > np.pi) or not np.all(np.isfinite(t)):
        raise ValueError("theta must lie in [0, pi]")
    x, y = _nodes(grid, ell, use_boundary)
    width = min(degree + 1, x.size)
    flat = np.atleast_1d(t).ravel()
    # window of `width` consecutive nodes centred on the nearest one
    near = np.clip(np.rint((flat - x[0]) / (x[1] - x[0])).astype(int), 0, x.size - 1)
    start = np.clip(near - width // 2, 0, x.size - width)
    out = np.empty(flat.size)
    for s0 in np.unique(start):
        sel = start == s0
        out[sel] = BarycentricInterpolator(x[s0 : s0 + width], y[s0 : s0 + width])(flat[sel])
    # exact nodes return the stored sample
    hit = flat == x[near]
    out[hit] = y[near[hit]]
    out = out.reshape(t.shape)
    return float(out) if out.ndim == 0 else out


def predict(
    ms: MomentarySymbol,
    grid: CoefficientGrid,
    n: int,
    k: int,
    degree: int = DEFAULT_DEGREE,
    use_boundary: bool = True,
) -> np.ndarray:
    """``f_0(d) + sum_{l<k} c_l(d) h^l`` on the mesh of size n."""
    if k < 1 or k - 1 > grid.levels:
        raise ValueError(f"k must be in 1..{grid.levels + 1}")
    d = mesh(n)
    h = step(n)
    out = evaluate(ms.base, d)
    for ell in range(1, k):
        out = out + interpolate(grid, ell, d, degree, use_boundary) * h**ell
    return out


def normalization(n0: int, k: int, n: int) -> float:
    return float(n0 + 1) ** k * (n + 1)


def validate(
    ms: MomentarySymbol,
    grid: CoefficientGrid,
    n: int,
    k: int,
    degree: int = DEFAULT_DEGREE,
    use_boundary: bool = True,
    exact: np.ndarray | None = None,
    method: str = "lapack",
) -> ErrorReport:
    """Compare predictions against the reference spectrum of ``T_n``."""
    if exact is None:
        exact = symbol_eigenvalues(instantiate(ms, n), n, method=method)
    err = np.abs(exact - predict(ms, grid, n, k, degree, use_boundary))
    return report(err, normalization(grid.n0, k, n), k, n)
