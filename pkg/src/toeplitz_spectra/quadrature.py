"""Regularised principal-value quadrature for the functions b, eta, psi and phi.

For an even symbol ``f`` the divided difference

    b_f(sigma, s) = (f(sigma) - f(s)) / (2 (cos s - cos sigma))

is a cosine polynomial in both variables.  Writing ``cos(k sigma) - cos(k s)``
as a product of sines gives

    b_f(sigma, s) = -sum_k a_k U_{k-1}(cos((sigma+s)/2)) U_{k-1}(cos((sigma-s)/2))

with Chebyshev polynomials of the second kind, which is evaluated by the
three-term recurrence and has no removable singularity left in it.

The singular integrals are computed on the periodic trapezoid grid
``sigma_m = 2 pi (m + 1/2) / M`` after subtracting the value of the numerator
at the singular point; the subtracted constant integrates to zero against
the kernel.  The kernel is oriented so that eta of the KMS symbol equals its
closed form ``2 arctan(rho sin s / (1 - rho cos s))``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .symbols import CosineSymbol

CHUNK = 128


class DomainError(ValueError):
    """The regularised quotient is not positive, so the symbol is outside the simple-loop class."""


@dataclass(frozen=True)
class PVConfig:
    nodes: int = 4096
    exclusion_radius: float = 1e-6
    fd_step: float = 1e-3
    threads: int = 1

    def __post_init__(self):
        if self.nodes < 64 or self.nodes % 2:
            raise ValueError("nodes must be an even integer >= 64")
        if not self.exclusion_radius > 0:
            raise ValueError("exclusion_radius must be positive")
        if not 0 < self.fd_step < 1e-2:
            raise ValueError("fd_step must lie in (0, 1e-2)")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")

    def grid(self) -> np.ndarray:
        return 2.0 * np.pi * (np.arange(self.nodes) + 0.5) / self.nodes


DEFAULT = PVConfig()


def _check_s(s) -> np.ndarray:
    arr = np.asarray(s, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr > np.pi):
        raise ValueError("s must lie in [0, pi]")
    return arr


def _bmat(c: CosineSymbol, sigma: np.ndarray, s: np.ndarray) -> np.ndarray:
    """b_c on the outer grid (s rows, sigma columns)."""
    x = np.cos(0.5 * np.add.outer(s, sigma))
    y = np.cos(0.5 * np.subtract.outer(sigma, s).T)
    ua_prev, ua = np.zeros_like(x), np.ones_like(x)
    ub_prev, ub = np.zeros_like(y), np.ones_like(y)
    out = np.zeros_like(x)
    for a_k in c.coeffs[1:]:
        out -= a_k * ua * ub
        ua, ua_prev = 2.0 * x * ua - ua_prev, ua
        ub, ub_prev = 2.0 * y * ub - ub_prev, ub
    return out


def _bdiag(c: CosineSymbol, s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """b_c(s, s) and D with d/dsigma b_c(sigma, s) at sigma = s equal to sin(s) * D."""
    x = np.cos(s)
    u_prev, u = np.zeros_like(x), np.ones_like(x)
    du_prev, du = np.zeros_like(x), np.zeros_like(x)
    val = np.zeros_like(x)
    slope = np.zeros_like(x)
    for k, a_k in enumerate(c.coeffs[1:], start=1):
        val -= a_k * k * u
        slope += 0.5 * a_k * k * du
        u, u_prev, du, du_prev = 2.0 * x * u - u_prev, u, 2.0 * u + 2.0 * x * du - du_prev, du
    return val, slope


def b_eval(f: CosineSymbol, sigma, s):
    """b_f(sigma, s), including its limit values on the diagonal."""
    s_arr = _check_s(s)
    sig = np.asarray(sigma, dtype=float)
    out = _bmat(f, np.atleast_1d(sig).ravel(), np.atleast_1d(s_arr).ravel())
    out = out.reshape(np.atleast_1d(s_arr).shape + np.atleast_1d(sig).shape)
    if s_arr.ndim == 0 and sig.ndim == 0:
        return float(out.ravel()[0])
    if s_arr.ndim == 0:
        return out[0]
    if sig.ndim == 0:
        return out[..., 0]
    return out


# Each ratio is (R(B), R(diag), dR/dsigma at sigma = s divided by sin s), where
# B is the list of b matrices, diag the list of (b(s,s), D) pairs.
def _log_ratio(bs, ds):
    (b,), ((v, d),) = bs, ds
    return np.log(b), np.log(v), d / v


def _quotient(bs, ds):
    (bf, bg), ((vf, df), (vg, dg)) = bs, ds
    return bg / bf, vg / vf, (dg * vf - vg * df) / (vf * vf)


def _share(bs, ds):
    (bf, bg), ((vf, df), (vg, dg)) = bs, ds
    tot = vf + vg
    return bg / (bf + bg), vg / tot, (dg * vf - vg * df) / (tot * tot)


def _pv_chunk(symbols, ratio, positive, s, cfg):
    sigma = cfg.grid()
    bs = [_bmat(c, sigma, s) for c in symbols]
    ds = [_bdiag(c, s) for c in symbols]
    for b in positive(bs):
        if not np.all(b > 0):
            raise DomainError("b is not positive on the quadrature grid; symbol is not simple-loop")
    r, r_s, slope = ratio(bs, ds)
    den = np.subtract.outer(-np.cos(s), -np.cos(sigma))
    near = (np.abs(np.subtract.outer(s, sigma)) < cfg.exclusion_radius) | (
        np.abs(np.subtract.outer(2.0 * np.pi - s, sigma)) < cfg.exclusion_radius
    )
    with np.errstate(divide="ignore", invalid="ignore"):
        integrand = (r - r_s[:, None]) / den
    integrand = np.where(near, -slope[:, None], integrand)
    return np.sin(s) / cfg.nodes * integrand.sum(axis=1)


def _pv(symbols, ratio, positive, s, cfg: PVConfig):
    s_arr = _check_s(s)
    flat = np.atleast_1d(s_arr).ravel()
    inner = (flat > 0.0) & (flat < np.pi)
    out = np.zeros(flat.size)
    pts = flat[inner]
    chunks = [pts[i : i + CHUNK] for i in range(0, pts.size, CHUNK)]
    job = lambda ch: _pv_chunk(symbols, ratio, positive, ch, cfg)
    if cfg.threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(cfg.threads) as pool:
            parts = list(pool.map(job, chunks))
    else:
        parts = [job(ch) for ch in chunks]
    if parts:
        out[inner] = np.concatenate(parts)
    out = out.reshape(s_arr.shape)
    return float(out) if out.ndim == 0 else out


def eta(f: CosineSymbol, s, cfg: PVConfig = DEFAULT):
    """eta_f(s) = (sin s / 2 pi) PV int log b_f(sigma, s) / (cos sigma - cos s) dsigma."""
    return _pv([f], _log_ratio, lambda bs: bs, s, cfg)


def psi(f: CosineSymbol, g: CosineSymbol, s, cfg: PVConfig = DEFAULT):
    """First-order change of eta_f under the perturbation f -> f + g h."""
    return _pv([f, g], _quotient, lambda bs: bs[:1], s, cfg)


def phi(f: CosineSymbol, g: CosineSymbol, s, cfg: PVConfig = DEFAULT):
    """Coefficient of h log h in eta_{f + g h^h} - eta_{f+g}."""
    return _pv([f, g], _share, lambda bs: [bs[0] + bs[1]], s, cfg)


def _eta_extended(f: CosineSymbol, s: np.ndarray, cfg: PVConfig) -> np.ndarray:
    # eta is sin(s) times a function of cos(s): odd about 0 and about pi
    r = np.mod(s, 2.0 * np.pi)
    sign = np.where(r > np.pi, -1.0, 1.0)
    r = np.where(r > np.pi, 2.0 * np.pi - r, r)
    return sign * eta(f, np.clip(r, 0.0, np.pi), cfg)


def eta_prime(f: CosineSymbol, s, cfg: PVConfig = DEFAULT):
    """Fourth-order central difference of eta with step ``cfg.fd_step``.

    Stencil points outside [0, pi] use the odd reflection of eta, which is
    exact, so the endpoints need no one-sided formula.
    """
    s_arr = _check_s(s)
    e = cfg.fd_step
    flat = np.atleast_1d(s_arr).ravel()
    pts = np.concatenate([flat + 2 * e, flat + e, flat - e, flat - 2 * e])
    v = _eta_extended(f, pts, cfg).reshape(4, flat.size)
    out = ((-v[0] + 8.0 * v[1] - 8.0 * v[2] + v[3]) / (12.0 * e)).reshape(s_arr.shape)
    return float(out) if out.ndim == 0 else out

