"""Matrix-size dependent symbols ``f_0 + sum_t beta_t(h) f_t`` with h = 1/(n+1)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .symbols import CosineSymbol, add, laplacian_power, scale

FORMS = ("power_log", "h_to_h")


def step(n: int) -> float:
    return 1.0 / (n + 1)


@dataclass(frozen=True)
class BetaSpec:
    """Scale factor ``c h^p log^q(1/h)`` (form ``power_log``) or ``h^h``."""

    form: str = "power_log"
    c: float = 1.0
    p: float = 1.0
    q: int = 0

    def __post_init__(self):
        if self.form not in FORMS:
            raise ValueError(f"unknown beta form {self.form!r}; expected one of {FORMS}")
        if self.p < 0 or self.q < 0 or int(self.q) != self.q:
            raise ValueError("p must be >= 0 and q a nonnegative integer")

    def __call__(self, h: float) -> float:
        return beta_eval(self, h)


def beta_eval(b: BetaSpec, h: float) -> float:
    if not 0.0 < h < 1.0:
        raise ValueError(f"h must lie in (0, 1), got {h!r}")
    if b.form == "h_to_h":
        return h**h
    return b.c * h**b.p * math.log(1.0 / h) ** int(b.q)


@dataclass(frozen=True)
class MomentarySymbol:
    base: CosineSymbol
    terms: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple((beta, sym) for beta, sym in self.terms))

    def instantiate(self, n: int) -> CosineSymbol:
        return instantiate(self, n)


def instantiate(ms: MomentarySymbol, n: int) -> CosineSymbol:
    """The ordinary symbol obtained for matrix size ``n``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    h = step(n)
    out = ms.base
    for beta, sym in ms.terms:
        out = add(out, scale(sym, beta_eval(beta, h)))
    return out


def fn_family(alpha1: float, alpha0: float) -> MomentarySymbol:
    """``f_2 + alpha1 f_1 h^2 + alpha0 f_0 h^4`` with ``f_q = (2 - 2 cos t)^q``."""
    return MomentarySymbol(
        base=laplacian_power(2),
        terms=(
            (BetaSpec("power_log", float(alpha1), 2.0, 0), laplacian_power(1)),
            (BetaSpec("power_log", float(alpha0), 4.0, 0), laplacian_power(0)),
        ),
    )


def ordering_ratios(ms: MomentarySymbol, hs: Sequence[float]) -> np.ndarray:
    """``|beta_{t+1}(h) / beta_t(h)|`` for each consecutive pair of terms (rows) and each h."""
    out = []
    for (b0, _), (b1, _) in zip(ms.terms, ms.terms[1:]):
        out.append([abs(beta_eval(b1, h) / beta_eval(b0, h)) for h in hs])
    return np.array(out)


def is_ordered(ms: MomentarySymbol, hs: Sequence[float] | None = None) -> bool:
    """Numerical check that every term is o(previous term) along decreasing h."""
    if hs is None:
        hs = 2.0 ** -np.arange(4, 21)
    r = ordering_ratios(ms, hs)
    if r.size == 0:
        return True
    return bool(np.all(np.diff(r, axis=1) < 0) and np.all(r[:, -1] < r[:, 0]))
