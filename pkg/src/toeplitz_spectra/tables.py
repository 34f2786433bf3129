"""Error tables for the worked examples: maximum errors and normalised errors per n and k."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import expansion as ex
from . import matrixless as ml
from .momentary import fn_family, instantiate
from .quadrature import DEFAULT, PVConfig
from .symbols import kms, laplacian
from .toeplitz import symbol_eigenvalues

EXPANSION_TABLES = {"q12": ex.ExpansionKind.SUM, "psi12": ex.ExpansionKind.LINEAR_H, "ga12": ex.ExpansionKind.H_TO_H}
FAMILY_TABLES = {"nfplus": (3.0, 2.0), "nfminus": (-3.0, 5.0)}
TABLES = tuple(EXPANSION_TABLES) + tuple(FAMILY_TABLES)

# quadrature cost grows like n * nodes * bandwidth; the family tables only need banded spectra
MAX_N_EXPANSION = 4096
MAX_N_FAMILY = 1 << 16


@dataclass(frozen=True)
class TableRow:
    n: int
    errors: tuple
    normalized: tuple


class BudgetError(ValueError):
    pass


def _check(ns, limit):
    if not ns:
        raise ValueError("empty list of matrix sizes")
    for n in ns:
        if n < 1:
            raise ValueError("matrix sizes must be >= 1")
        if n > limit:
            raise BudgetError(f"n={n} exceeds the reference budget of {limit} for this table")


def expansion_table(which: str, ns, k_max: int = 3, cfg: PVConfig = DEFAULT, method: str = "lapack", rho: float = 0.5):
    """Rows for the KMS + Laplacian examples of the three expansion kinds."""
    kind = EXPANSION_TABLES[which]
    _check(ns, MAX_N_EXPANSION)
    f, g = kms(rho), laplacian()
    rows = []
    for n in ns:
        exact = ex.exact_eigenvalues(kind, f, g, n, method)
        reps = [ex.error_report(exact, a, kind, k + 1, n) for k, a in enumerate(ex.approximations(kind, f, g, n, k_max, cfg, method))]
        rows.append(TableRow(n, tuple(r.max_error for r in reps), tuple(r.normalized_max for r in reps)))
    return rows


def family_table(
    which: str,
    ns,
    n0: int = 100,
    k_max: int = 4,
    levels: int | None = None,
    degree: int = ml.DEFAULT_DEGREE,
    use_boundary: bool = True,
    method: str = "lapack",
    threads: int | None = None,
):
    """Rows for the matrix-less predictions of the fourth-order family."""
    alpha1, alpha0 = FAMILY_TABLES[which]
    _check(ns, MAX_N_FAMILY)
    ms = fn_family(alpha1, alpha0)
    grid = ml.extrapolate(ms, n0, max(k_max, 2), levels=levels, method=method, threads=threads)
    rows = []
    for n in ns:
        exact = symbol_eigenvalues(instantiate(ms, n), n, method)
        reps = [ml.validate(ms, grid, n, k, degree, use_boundary, exact=exact) for k in range(1, k_max + 1)]
        rows.append(TableRow(n, tuple(r.max_error for r in reps), tuple(r.normalized_max for r in reps)))
    return rows


def table(which: str, ns, **kw):
    if which in EXPANSION_TABLES:
        return expansion_table(which, ns, **kw)
    if which in FAMILY_TABLES:
        return family_table(which, ns, **kw)
    raise ValueError(f"unknown table {which!r}; expected one of {TABLES}")


def as_columns(rows) -> tuple[list[str], list[list]]:
    k = len(rows[0].errors)
    header = ["n"] + [c for i in range(1, k + 1) for c in (f"eps_k{i}", f"norm_k{i}")]
    body = [[r.n] + [v for pair in zip(r.errors, r.normalized) for v in pair] for r in rows]
    return header, body


def overlay(kind, f, g, n: int, k: int, cfg: PVConfig = DEFAULT, method: str = "lapack"):
    """Per-index normalised errors of the k-term approximation next to the
    normalised size of the following term, which they should trace."""
    if k not in (1, 2):
        raise ValueError("overlay needs k in {1, 2}")
    apx = ex.approximations(kind, f, g, n, k + 1, cfg, method)
    exact = ex.exact_eigenvalues(kind, f, g, n, method)
    scale_ = ex.normalization(kind, k, n)
    return ex.mesh(n), (apx[k] - apx[k - 1]) * scale_, (exact - apx[k - 1]) * scale_
