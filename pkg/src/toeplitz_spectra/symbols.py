"""Even real symbols given by finite cosine series.

A symbol is stored by its Fourier coefficients ``(a_0, ..., a_m)`` with the
convention ``f(t) = a_0 + 2 * sum_k a_k cos(k t)``, so that the Toeplitz
matrix generated by ``f`` has entry ``a_|i-j|`` at position ``(i, j)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


@dataclass(frozen=True)
class CosineSymbol:
    """Immutable cosine polynomial ``a_0 + 2 sum_{k=1}^m a_k cos(k t)``."""

    coeffs: np.ndarray = field(repr=False)
    name: str = ""

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float).ravel()
        if c.size == 0:
            c = np.zeros(1)
        if not np.all(np.isfinite(c)):
            raise ValueError("symbol coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def m(self) -> int:
        """Bandwidth (index of the last stored coefficient)."""
        return self.coeffs.size - 1

    def __call__(self, theta):
        return evaluate(self, theta)

    def __repr__(self):
        label = self.name or "CosineSymbol"
        return f"<{label} m={self.m}>"


def _ks(c: CosineSymbol) -> np.ndarray:
    return np.arange(1, c.coeffs.size, dtype=float)


def evaluate(c: CosineSymbol, theta):
    """Value of the symbol at ``theta`` (scalar or array)."""
    t = np.asarray(theta, dtype=float)
    k = _ks(c)
    out = c.coeffs[0] + 2.0 * np.cos(np.multiply.outer(t, k)) @ c.coeffs[1:]
    return out if t.ndim else float(out)


def derivative(c: CosineSymbol, theta, order: int = 1):
    """First or second derivative of the symbol, by termwise differentiation."""
    t = np.asarray(theta, dtype=float)
    k = _ks(c)
    if order == 1:
        out = -2.0 * np.sin(np.multiply.outer(t, k)) @ (k * c.coeffs[1:])
    elif order == 2:
        out = -2.0 * np.cos(np.multiply.outer(t, k)) @ (k * k * c.coeffs[1:])
    else:
        raise ValueError(f"unsupported derivative order {order!r}; use 1 or 2")
    return out if t.ndim else float(out)


def add(a: CosineSymbol, b: CosineSymbol) -> CosineSymbol:
    size = max(a.coeffs.size, b.coeffs.size)
    out = np.zeros(size)
    out[: a.coeffs.size] += a.coeffs
    out[: b.coeffs.size] += b.coeffs
    return CosineSymbol(out)


def scale(a: CosineSymbol, factor: float) -> CosineSymbol:
    return CosineSymbol(a.coeffs * float(factor))


def multiply(a: CosineSymbol, b: CosineSymbol) -> CosineSymbol:
    """Pointwise product, using 2 cos(p t) cos(q t) = cos((p+q)t) + cos((p-q)t).

    On the two-sided coefficient sequences this is a plain convolution.
    """
    two_a = np.concatenate([a.coeffs[:0:-1], a.coeffs])
    two_b = np.concatenate([b.coeffs[:0:-1], b.coeffs])
    full = np.convolve(two_a, two_b)
    centre = full.size // 2
    return CosineSymbol(full[centre:])


def power(a: CosineSymbol, q: int) -> CosineSymbol:
    if q < 0:
        raise ValueError("power must be nonnegative")
    out = constant(1.0)
    for _ in range(q):
        out = multiply(out, a)
    return out


def constant(value: float) -> CosineSymbol:
    return CosineSymbol([float(value)], name=f"const({value:g})")


def laplacian() -> CosineSymbol:
    """``2 - 2 cos t``, the symbol of the 1D second-difference matrix."""
    return CosineSymbol([2.0, -1.0], name="laplacian")


def laplacian_power(q: int) -> CosineSymbol:
    """``(2 - 2 cos t)^q``."""
    if q < 0:
        raise ValueError("q must be a nonnegative integer")
    c = power(laplacian(), int(q))
    return CosineSymbol(c.coeffs, name=f"laplacian^{q}")


def kms(rho: float, tol: float = 1e-14) -> CosineSymbol:
    """Truncated cosine series of the KMS-type simple-loop symbol

        (1 + rho)^2 / 2 * (1 - cos t) / (1 - 2 rho cos t + rho^2).

    Coefficients ``(1 + rho)/2`` and ``(rho^2 - 1) rho^(k-1) / 4``; the series
    stops at the first coefficient whose magnitude falls below ``tol``.
    """
    if not 0.0 < rho < 1.0:
        raise ValueError(f"rho must lie in (0, 1), got {rho!r}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    coeffs = [(1.0 + rho) / 2.0]
    k = 1
    while True:
        a_k = 0.25 * (rho * rho - 1.0) * rho ** (k - 1)
        if abs(a_k) < tol:
            break
        coeffs.append(a_k)
        k += 1
    return CosineSymbol(coeffs, name=f"kms({rho:g})")


def kms_closed_form(rho: float, theta):
    t = np.asarray(theta, dtype=float)
    return (1 + rho) ** 2 / 2 * (1 - np.cos(t)) / (1 - 2 * rho * np.cos(t) + rho * rho)


def wiener_norm(c: CosineSymbol, alpha: float) -> float:
    """Weighted Wiener norm ``sum_{j=-m}^{m} |a_j| (|j| + 1)^alpha``."""
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    k = np.arange(c.coeffs.size, dtype=float)
    w = np.abs(c.coeffs) * (k + 1.0) ** alpha
    return float(w[0] + 2.0 * w[1:].sum())


@dataclass(frozen=True)
class SimpleLoopReport:
    range_min: float
    range_max: float
    endpoint_value: float
    endpoint_slope: float
    endpoint_curvature: float
    peak_curvature: float
    monotone_on_half_period: bool
    is_simple_loop: bool


def simple_loop_check(c: CosineSymbol, grid_size: int = 4096, tol: float = 1e-8) -> SimpleLoopReport:
    """Numerical test of the symmetric simple-loop conditions.

    Checks f(0) = min f = 0, f'(0) = 0, f''(0) > 0, f' > 0 on the open
    half period and f''(pi) < 0.  This is a grid heuristic, not a proof.
    """
    if grid_size < 16:
        raise ValueError("grid_size must be at least 16")
    t = np.linspace(0.0, np.pi, grid_size + 1)
    values = evaluate(c, t)
    slope = derivative(c, t[1:-1], 1)
    f0 = float(values[0])
    d1_0 = derivative(c, 0.0, 1)
    d2_0 = derivative(c, 0.0, 2)
    d2_pi = derivative(c, np.pi, 2)
    lo, hi = float(values.min()), float(values.max())
    scale_ = max(1.0, abs(hi))
    monotone = bool(np.all(slope > 0))
    ok = (
        abs(f0) <= tol * scale_
        and abs(f0 - lo) <= tol * scale_
        and abs(d1_0) <= tol * scale_
        and d2_0 > tol
        and d2_pi < -tol
        and monotone
    )
    return SimpleLoopReport(
        range_min=lo,
        range_max=hi,
        endpoint_value=f0,
        endpoint_slope=d1_0,
        endpoint_curvature=d2_0,
        peak_curvature=d2_pi,
        monotone_on_half_period=monotone,
        is_simple_loop=bool(ok),
    )


def to_text(c: CosineSymbol) -> str:
    """Plain-text form: bandwidth on the first line, then one coefficient per line."""
    lines = [str(c.m)] + [repr(float(v)) for v in c.coeffs]
    return "\n".join(lines) + "\n"


def from_text(text: str) -> CosineSymbol:
    rows = [r.strip() for r in text.splitlines() if r.strip() and not r.lstrip().startswith("#")]
    if not rows:
        raise ValueError("empty coefficient file")
    m = int(rows[0])
    values = [float(r) for r in rows[1:]]
    if len(values) != m + 1:
        raise ValueError(f"expected {m + 1} coefficients, found {len(values)}")
    return CosineSymbol(values)


def load(path) -> CosineSymbol:
    p = Path(path)
    c = from_text(p.read_text())
    return CosineSymbol(c.coeffs, name=p.stem)


def save(c: CosineSymbol, path) -> None:
    Path(path).write_text(to_text(c))


def parse_symbol(spec: str) -> CosineSymbol:
    """Build a symbol from a short spec string.

    Accepted forms: ``laplacian``, ``g``, ``laplacian_power:Q``, ``f:Q``,
    ``kms:RHO``, ``kms:RHO:TOL``, ``const:C``, ``@path`` or ``file:path``.
    """
    spec = spec.strip()
    if spec.startswith("@"):
        return load(spec[1:])
    name, _, rest = spec.partition(":")
    args = rest.split(":") if rest else []
    name = name.lower()
    try:
        if name in ("laplacian", "g", "lap") and not args:
            return laplacian()
        if name in ("laplacian_power", "f", "lap_power") and len(args) == 1:
            return laplacian_power(int(args[0]))
        if name == "kms" and 1 <= len(args) <= 2:
            return kms(float(args[0]), *(float(a) for a in args[1:]))
        if name in ("const", "constant") and len(args) == 1:
            return constant(float(args[0]))
        if name == "file" and len(args) >= 1:
            return load(rest)
    except ValueError as exc:
        raise ValueError(f"bad symbol spec {spec!r}: {exc}") from None
    raise ValueError(f"unknown symbol spec {spec!r}")
