"""Symmetric banded Toeplitz matrices and reference eigenvalue solvers.

Three independent routes to the spectrum are provided:

* ``lapack``: scipy's symmetric banded driver (band reduction + tridiagonal
  solver), the default and the only route fast enough for n ~ 10^4;
* ``bisect``: bisection on Sturm counts, vectorised over all eigenvalue
  indices at once.  Tridiagonal matrices are counted directly; wider bands
  are first reduced to tridiagonal form by an orthogonal similarity when
  n <= DENSE_LIMIT, and counted by the banded LDL^T inertia otherwise;
* ``jacobi``: cyclic Jacobi rotations on the dense matrix, used as a
  textbook oracle for small n.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eig_banded
from scipy.linalg.lapack import dsytrd

from .symbols import CosineSymbol

METHODS = ("lapack", "bisect", "jacobi")
DENSE_LIMIT = 4096


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class SymmetricBandedToeplitz:
    n: int
    band: np.ndarray = field(repr=False)

    def __post_init__(self):
        b = np.array(self.band, dtype=float).ravel()
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if b.size > self.n:
            raise ValueError("band must have at most n entries")
        b.setflags(write=False)
        object.__setattr__(self, "band", b)

    @property
    def m(self) -> int:
        return self.band.size - 1

    def entry(self, i: int, j: int) -> float:
        k = abs(i - j)
        return float(self.band[k]) if k <= self.m else 0.0

    def dense(self) -> np.ndarray:
        n = self.n
        a = np.zeros((n, n))
        for k, v in enumerate(self.band):
            idx = np.arange(n - k)
            a[idx, idx + k] = v
            a[idx + k, idx] = v
        return a

    def upper_banded(self) -> np.ndarray:
        """LAPACK upper band storage, shape (m+1, n)."""
        m, n = self.m, self.n
        ab = np.zeros((m + 1, n))
        for k, v in enumerate(self.band):
            ab[m - k, k:] = v
        return ab

    def gershgorin(self) -> tuple[float, float]:
        radius = 2.0 * np.abs(self.band[1:]).sum()
        return float(self.band[0] - radius), float(self.band[0] + radius)


def build(c: CosineSymbol, n: int) -> SymmetricBandedToeplitz:
    """``T_n(c)``; coefficients beyond the matrix size are dropped."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return SymmetricBandedToeplitz(n, c.coeffs[:n])


def eigenvalue_count_below(t: SymmetricBandedToeplitz, x) -> np.ndarray | int:
    """Number of eigenvalues strictly below each shift in ``x``.

    Sylvester inertia of ``T - x I`` from an unpivoted banded LDL^T sweep,
    vectorised over the shifts.  Pivots smaller than ``eps * ||T||`` are
    replaced by ``-eps * ||T||``, which amounts to moving the shift by an
    ulp-sized amount.
    """
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    n, m, a = t.n, t.m, t.band
    guard = np.finfo(float).eps * max(float(np.abs(a).sum()), np.finfo(float).tiny)
    count = np.zeros(xs.shape, dtype=np.int64)
    # ring buffers over rows i-m..i-1: lbuf[r, s] = L[row, row-m+s], dbuf[r] = D[row]
    lbuf = np.zeros((m, m, xs.size))
    dbuf = np.ones((m, xs.size))
    for i in range(n):
        first = max(0, m - i)
        lrow = np.zeros((m, xs.size))
        for s in range(first, m):
            acc = a[m - s] - sum(lrow[q] * lbuf[s, q - s + m] * dbuf[q] for q in range(first, s))
            lrow[s] = acc / dbuf[s]
        d = (a[0] - xs) - sum(lrow[q] ** 2 * dbuf[q] for q in range(first, m))
        d = np.where(np.abs(d) < guard, -guard, d)
        count += d < 0
        if m:
            lbuf[:-1] = lbuf[1:]
            lbuf[-1] = lrow
            dbuf[:-1] = dbuf[1:]
            dbuf[-1] = d
    return count if np.ndim(x) else int(count[0])


def tridiagonal_form(t: SymmetricBandedToeplitz) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal and off-diagonal of a tridiagonal matrix similar to ``t``."""
    if t.m == 0:
        return np.full(t.n, float(t.band[0])), np.zeros(max(t.n - 1, 0))
    if t.m == 1:
        return np.full(t.n, float(t.band[0])), np.full(t.n - 1, float(t.band[1]))
    _, d, e, _, info = dsytrd(t.dense(), lower=1)
    if info != 0:
        raise ConvergenceError(f"tridiagonal reduction failed (info={info})")
    return d, e


def sturm_count(diag: np.ndarray, off: np.ndarray, x) -> np.ndarray:
    """Eigenvalues of the symmetric tridiagonal matrix below each shift in ``x``."""
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    e2 = np.concatenate([[0.0], np.asarray(off, dtype=float) ** 2])
    scale_ = max(float(np.abs(diag).max(initial=0.0)), float(np.sqrt(e2.max(initial=0.0))), np.finfo(float).tiny)
    pivmin = np.finfo(float).eps * scale_
    count = np.zeros(xs.shape, dtype=np.int64)
    q = np.ones(xs.shape)
    for a, b2 in zip(diag, e2):
        q = (a - xs) - b2 / q
        q = np.where(np.abs(q) < pivmin, -pivmin, q)
        count += q < 0
    return count


def _bisect_all(t: SymmetricBandedToeplitz, indices: np.ndarray, tol: float, max_iter: int, counter=None) -> np.ndarray:
    counter = counter or (lambda xs: eigenvalue_count_below(t, xs))
    lo0, hi0 = t.gershgorin()
    pad = 1e-12 * max(1.0, abs(lo0), abs(hi0))
    lo = np.full(indices.size, lo0 - pad)
    hi = np.full(indices.size, hi0 + pad)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        active = (hi - lo > tol) & (mid > lo) & (mid < hi)
        if not active.any():
            break
        cnt = counter(mid[active])
        below = cnt > indices[active]
        idx = np.flatnonzero(active)
        hi[idx[below]] = mid[active][below]
        lo[idx[~below]] = mid[active][~below]
    else:
        if np.any(hi - lo > tol):
            raise ConvergenceError("bisection did not converge within the iteration cap")
    return 0.5 * (lo + hi)


def jacobi_eigenvalues(a: np.ndarray, tol: float = 1e-14, max_sweeps: int = 100) -> np.ndarray:
    """Cyclic Jacobi rotations on a dense symmetric matrix."""
    a = np.array(a, dtype=float)
    n = a.shape[0]
    scale_ = max(np.abs(a).max(), 1e-300)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.triu(a, 1) ** 2))
        if off <= tol * scale_:
            return np.sort(np.diag(a))
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) < 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                tt = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0)) if theta != 0 else 1.0
                c = 1.0 / np.sqrt(tt * tt + 1.0)
                s = tt * c
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
    raise ConvergenceError("Jacobi iteration did not converge")


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("TOEPLITZ_SPECTRA_THREADS", "1")))
    except ValueError:
        return 1


def eigenvalues(
    t: SymmetricBandedToeplitz,
    tol: float | None = None,
    method: str = "lapack",
    threads: int | None = None,
    max_iter: int = 200,
) -> np.ndarray:
    """All eigenvalues of ``t`` in nondecreasing order."""
    if tol is not None and tol <= 0:
        raise ValueError("tol must be positive")
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    if t.m == 0:
        return np.full(t.n, float(t.band[0]))
    if method == "lapack":
        return np.sort(eig_banded(t.upper_banded(), lower=False, eigvals_only=True))
    if method == "jacobi":
        return jacobi_eigenvalues(t.dense(), tol=1e-15 if tol is None else tol)
    if method == "bisect":
        lo, hi = t.gershgorin()
        if tol is None:
            tol = 4.0 * np.finfo(float).eps * max(1.0, hi - lo, abs(lo), abs(hi))
        idx = np.arange(t.n)
        counter = None
        if t.n <= DENSE_LIMIT:
            d, e = tridiagonal_form(t)
            counter = lambda xs: sturm_count(d, e, xs)
        threads = threads or default_threads()
        if threads <= 1:
            return _bisect_all(t, idx, tol, max_iter, counter)
        chunks = np.array_split(idx, threads)
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(lambda ch: _bisect_all(t, ch, tol, max_iter, counter), chunks))
        return np.concatenate(parts)


def symbol_eigenvalues(c: CosineSymbol, n: int, method: str = "lapack") -> np.ndarray:
    return eigenvalues(build(c, n), method=method)
