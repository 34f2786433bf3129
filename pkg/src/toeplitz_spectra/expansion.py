"""Expansion coefficients and k-term eigenvalue approximations.

With ``h = 1/(n+1)`` and ``d_j = pi j h`` the approximations are

* ``single``:   lambda_j(T_n(f))           ~ f(d) + c1 h + c2 h^2
* ``sum``:      lambda_j(T_n(f + g))       ~ lambda_j(T_n(f)) + lambda_j(T_n(g)) + Q1 h + Q2 h^2
* ``linear_h``: lambda_j(T_n(f + g h))     ~ f(d) + Psi1 h + Psi2 h^2
* ``h_to_h``:   lambda_j(T_n(f + g h^h))   ~ f(d) + g(d) + (G11 log h + G10) h
                                              + (G22 log^2 h + G21 log h + G20) h^2

with ``log h < 0``.  Only three terms are available in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import quadrature as quad
from .momentary import step
from .quadrature import PVConfig
from .symbols import CosineSymbol, add, derivative, evaluate, scale
from .toeplitz import symbol_eigenvalues

MAX_TERMS = 3


class ExpansionKind(str, Enum):
    SINGLE = "single"
    SUM = "sum"
    LINEAR_H = "linear_h"
    H_TO_H = "h_to_h"


def mesh(n: int) -> np.ndarray:
    """The points ``d_{j,n} = pi j / (n+1)``, j = 1..n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return np.pi * np.arange(1, n + 1) / (n + 1)


class _Derivs:
    """Values and first two derivatives of a symbol on a fixed set of points."""

    def __init__(self, c: CosineSymbol, s):
        self.v = evaluate(c, s)
        self.d1 = derivative(c, s, 1)
        self.d2 = derivative(c, s, 2)


def c12(f: CosineSymbol, s, cfg: PVConfig = quad.DEFAULT):
    """``(c1, c2)`` of the single-symbol expansion."""
    F = _Derivs(f, s)
    e, ep = quad.eta(f, s, cfg), quad.eta_prime(f, s, cfg)
    return -F.d1 * e, 0.5 * F.d2 * e * e + F.d1 * e * ep


def q12(f: CosineSymbol, g: CosineSymbol, s, cfg: PVConfig = quad.DEFAULT):
    """``(Q1, Q2)`` relating the spectrum of T_n(f+g) to those of T_n(f) and T_n(g)."""
    fg = add(f, g)
    F, G = _Derivs(f, s), _Derivs(g, s)
    ef, eg, es = quad.eta(f, s, cfg), quad.eta(g, s, cfg), quad.eta(fg, s, cfg)
    pf, pg, ps = quad.eta_prime(f, s, cfg), quad.eta_prime(g, s, cfg), quad.eta_prime(fg, s, cfg)
    q1 = F.d1 * (ef - es) + G.d1 * (eg - es)
    q2 = (
        0.5 * F.d2 * (es * es - ef * ef)
        + 0.5 * G.d2 * (es * es - eg * eg)
        + F.d1 * (es * ps - ef * pf)
        + G.d1 * (es * ps - eg * pg)
    )
    return q1, q2


def psi12(f: CosineSymbol, g: CosineSymbol, s, cfg: PVConfig = quad.DEFAULT):
    """``(Psi1, Psi2)`` for the symbol ``f + g h``."""
    F, G = _Derivs(f, s), _Derivs(g, s)
    e, ep = quad.eta(f, s, cfg), quad.eta_prime(f, s, cfg)
    p = quad.psi(f, g, s, cfg)
    p1 = G.v - F.d1 * e
    p2 = 0.5 * F.d2 * e * e + F.d1 * e * ep - F.d1 * p - G.d1 * e
    return p1, p2


def gammas(f: CosineSymbol, g: CosineSymbol, s, cfg: PVConfig = quad.DEFAULT):
    """``(G11, G10, G22, G21, G20)`` for the symbol ``f + g h^h``."""
    fg = add(f, g)
    F, G = _Derivs(f, s), _Derivs(g, s)
    e, ep = quad.eta(fg, s, cfg), quad.eta_prime(fg, s, cfg)
    ph = quad.phi(f, g, s, cfg)
    d1 = F.d1 + G.d1
    return (
        G.v,
        -e * d1,
        0.5 * G.v,
        -ph * d1 - G.d1 * e,
        0.5 * e * e * (F.d2 + G.d2) + e * ep * d1,
    )


def _kind(kind) -> ExpansionKind:
    try:
        return ExpansionKind(kind)
    except ValueError:
        raise ValueError(f"unknown expansion kind {kind!r}") from None


def perturbed_symbol(kind, f: CosineSymbol, g: CosineSymbol | None, n: int) -> CosineSymbol:
    """The symbol whose Toeplitz spectrum the expansion of ``kind`` describes."""
    kind = _kind(kind)
    if kind is ExpansionKind.SINGLE:
        return f
    if g is None:
        raise ValueError(f"kind {kind.value} needs a second symbol g")
    h = step(n)
    if kind is ExpansionKind.SUM:
        return add(f, g)
    if kind is ExpansionKind.LINEAR_H:
        return add(f, scale(g, h))
    return add(f, scale(g, h**h))


def exact_eigenvalues(kind, f, g, n: int, method: str = "lapack") -> np.ndarray:
    return symbol_eigenvalues(perturbed_symbol(kind, f, g, n), n, method=method)


def approximations(kind, f, g, n: int, k_max: int = MAX_TERMS, cfg: PVConfig = quad.DEFAULT, method: str = "lapack"):
    """List of the 1..k_max term approximations, sharing one set of coefficient evaluations."""
    kind = _kind(kind)
    if not 1 <= k_max <= MAX_TERMS:
        raise ValueError(f"k must be in 1..{MAX_TERMS}")
    if kind is not ExpansionKind.SINGLE and g is None:
        raise ValueError(f"kind {kind.value} needs a second symbol g")
    d = mesh(n)
    h = step(n)
    if kind is ExpansionKind.SINGLE:
        base = evaluate(f, d)
        terms = (lambda: c12(f, d, cfg),)
    elif kind is ExpansionKind.SUM:
        base = symbol_eigenvalues(f, n, method) + symbol_eigenvalues(g, n, method)
        terms = (lambda: q12(f, g, d, cfg),)
    elif kind is ExpansionKind.LINEAR_H:
        base = evaluate(f, d)
        terms = (lambda: psi12(f, g, d, cfg),)
    else:
        base = evaluate(f, d) + evaluate(g, d)
        terms = None
    out = [base]
    if k_max == 1:
        return out
    if terms is not None:
        a1, a2 = terms[0]()
        out.append(base + a1 * h)
        if k_max >= 3:
            out.append(out[1] + a2 * h * h)
        return out
    lg = math.log(h)
    g11, g10, g22, g21, g20 = gammas(f, g, d, cfg)
    out.append(base + g11 * h * lg + g10 * h)
    if k_max >= 3:
        out.append(out[1] + (g22 * lg * lg + g21 * lg + g20) * h * h)
    return out


def approx_eigenvalues(kind, f, g, n: int, k: int, cfg: PVConfig = quad.DEFAULT, method: str = "lapack") -> np.ndarray:
    """The k-term approximation of the spectrum, k = 1..3."""
    return approximations(kind, f, g, n, k, cfg, method)[k - 1]


def normalization(kind, k: int, n: int) -> float:
    kind = _kind(kind)
    factor = float(n + 1) ** k
    if kind is ExpansionKind.H_TO_H:
        factor /= math.log(n + 1) ** k
    return factor


@dataclass(frozen=True)
class ErrorReport:
    per_j: np.ndarray
    max_error: float
    normalized_max: float
    k: int
    n: int

    @property
    def normalized_per_j(self) -> np.ndarray:
        if self.max_error == 0:
            return np.zeros_like(self.per_j)
        return self.per_j * (self.normalized_max / self.max_error)


def report(per_j, factor: float, k: int, n: int) -> ErrorReport:
    per_j = np.asarray(per_j, dtype=float)
    m = float(np.abs(per_j).max()) if per_j.size else 0.0
    return ErrorReport(per_j=per_j, max_error=m, normalized_max=factor * m, k=k, n=n)


def error_report(exact, approx, kind, k: int, n: int) -> ErrorReport:
    """Signed per-index errors ``exact - approx`` and their normalised maximum."""
    exact = np.asarray(exact, dtype=float)
    approx = np.asarray(approx, dtype=float)
    if exact.shape != approx.shape:
        raise ValueError("exact and approximate spectra differ in length")
    return report(exact - approx, normalization(kind, k, n), k, n)
