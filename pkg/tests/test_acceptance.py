"""Acceptance criteria, one test per criterion.

Each test prints a single PASS/FAIL line with the measured quantities, then
asserts the criterion at its stated tolerance. Run with ``pytest
tests/test_acceptance.py -v`` (the lines are printed with capture disabled).
"""

import time

import numpy as np
import pytest

from toeplitz_spectra import expansion as E
from toeplitz_spectra import matrixless as ML
from toeplitz_spectra import momentary as M
from toeplitz_spectra import quadrature as Q
from toeplitz_spectra import symbols as S
from toeplitz_spectra import tables as T
from toeplitz_spectra.toeplitz import symbol_eigenvalues

KMS = S.kms(0.5)
LAP = S.laplacian()

# reference normalized errors, columns n = 256, 512, 1024
Q12 = {256: (1.1891e-1, 6.4007e-1, 1.1666), 512: (1.1995e-1, 6.4120e-1, 1.1709), 1024: (1.2047e-1, 6.4184e-1, 1.1720)}
# reference max errors eps^(1..4), columns n = 256, 1024, 2048
NF = {
    "nfplus": {
        256: (1.6359e-2, 8.0281e-5, 1.0280e-7, 3.2772e-9),
        1024: (4.0904e-3, 5.0639e-6, 1.6253e-9, 1.5106e-11),
        2048: (2.0453e-3, 1.2679e-6, 2.0356e-10, 6.0169e-12),
    },
    "nfminus": {
        256: (1.6179e-2, 1.0025e-4, 6.7813e-8, 5.8948e-9),
        1024: (4.0791e-3, 6.3398e-6, 1.0836e-9, 2.5494e-11),
        2048: (2.0424e-3, 1.5880e-6, 1.3593e-10, 5.4580e-12),
    },
}


@pytest.fixture
def verdict(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\nACCEPTANCE {number}: {'PASS' if ok else 'FAIL'} | {detail}")
        assert ok, detail

    return emit


def rel(a, b):
    return abs(a / b - 1)


def expansion_norms(kind, n):
    exact = E.exact_eigenvalues(kind, KMS, LAP, n)
    apx = E.approximations(kind, KMS, LAP, n, 3)
    return [E.error_report(exact, a, kind, k + 1, n).normalized_max for k, a in enumerate(apx)]


def test_1_laplacian_oracle(verdict):
    start = time.perf_counter()
    errs = {}
    for n in (16, 256, 2048):
        exact = 2 - 2 * np.cos(np.arange(1, n + 1) * np.pi / (n + 1))
        errs[n] = np.abs(symbol_eigenvalues(LAP, n) - exact).max()
    elapsed = time.perf_counter() - start
    ok = max(errs.values()) <= 1e-10 and elapsed < 5
    verdict(1, ok, f"max errors {', '.join(f'n={n}: {e:.2e}' for n, e in errs.items())}; {elapsed:.2f} s")


def test_2_kms_eta_oracle(verdict):
    start = time.perf_counter()
    s = np.linspace(0, np.pi, 128)
    errs = {}
    for rho in (0.3, 0.5, 0.7):
        closed = 2 * np.arctan(rho * np.sin(s) / (1 - rho * np.cos(s)))
        errs[rho] = np.abs(Q.eta(S.kms(rho), s) - closed).max()
    elapsed = time.perf_counter() - start
    ok = max(errs.values()) <= 1e-7 and elapsed < 30
    verdict(2, ok, f"max errors {', '.join(f'rho={r}: {e:.2e}' for r, e in errs.items())}; {elapsed:.2f} s")


def test_3_table_q12(verdict):
    start = time.perf_counter()
    worst = [0.0, 0.0, 0.0]
    parts = []
    for n, printed in Q12.items():
        got = expansion_norms("sum", n)
        for k in range(3):
            worst[k] = max(worst[k], rel(got[k], printed[k]))
        parts.append(f"n={n}: " + "/".join(f"{v:.4e}" for v in got))
    elapsed = time.perf_counter() - start
    ok = worst[0] <= 0.02 and worst[1] <= 0.02 and worst[2] <= 0.15 and elapsed < 300
    verdict(3, ok, f"{'; '.join(parts)}; worst rel dev k=1..3 {worst[0]:.2%}/{worst[1]:.2%}/{worst[2]:.2%}; {elapsed:.1f} s")


def test_4_table_psi12(verdict):
    start = time.perf_counter()
    got = {n: expansion_norms("linear_h", n)[:2] for n in (512, 1024)}
    elapsed = time.perf_counter() - start
    d1 = max(rel(v[0], 4.0) for v in got.values())
    d2 = max(rel(v[1], 1.31) for v in got.values())
    ok = d1 <= 0.005 and d2 <= 0.03 and elapsed < 300
    detail = "; ".join(f"n={n}: {v[0]:.4f}/{v[1]:.4f}" for n, v in got.items())
    verdict(4, ok, f"{detail}; rel dev k=1 {d1:.3%}, k=2 {d2:.2%}; {elapsed:.1f} s")


def test_5_table_ga12(verdict):
    start = time.perf_counter()
    got = expansion_norms("h_to_h", 512)
    elapsed = time.perf_counter() - start
    d1, d2 = rel(got[0], 3.9757), rel(got[1], 1.9919)
    ok = d1 <= 0.02 and d2 <= 0.03 and elapsed < 300
    verdict(5, ok, f"n=512: {got[0]:.4f}/{got[1]:.4f}; rel dev {d1:.2%}/{d2:.2%}; {elapsed:.1f} s")


def test_6_matrixless_tables(verdict):
    worst_k1 = 0.0
    worst_factor = 1.0
    parts = []
    for which, printed in NF.items():
        for row in T.family_table(which, sorted(printed), n0=100, k_max=4):
            ref = printed[row.n]
            worst_k1 = max(worst_k1, rel(row.errors[0], ref[0]))
            for k in (2, 3):
                worst_factor = max(worst_factor, row.errors[k] / ref[k], ref[k] / row.errors[k])
            parts.append(f"{which} n={row.n}: " + "/".join(f"{e:.3e}" for e in row.errors))
    ok = worst_k1 <= 0.05 and worst_factor <= 10
    verdict(6, ok, f"{'; '.join(parts)}; k=1 rel dev {worst_k1:.2%}; worst k=3,4 factor {worst_factor:.2f}")


def ends(per_j, n, frac=0.05):
    theta = E.mesh(n)
    err = np.abs(per_j)
    return err[theta < frac * np.pi].max(), err[theta > (1 - frac) * np.pi].max()


def test_7_boundary_augmentation(verdict):
    ms = M.fn_family(3, 2)
    n, k, n0 = 8192, 4, 50
    exact = symbol_eigenvalues(M.instantiate(ms, n), n)
    grid = ML.extrapolate(ms, n0, k)
    on = ML.validate(ms, grid, n, k, use_boundary=True, exact=exact).per_j
    off = ML.validate(ms, grid, n, k, use_boundary=False, exact=exact).per_j
    median = np.median(np.abs(on))
    on0, on_pi = ends(on, n)
    off0, off_pi = ends(off, n)
    inflation = max(off0, off_pi) / max(on0, on_pi)
    spread = max(on0, on_pi) / median
    ok = inflation >= 1e2 and spread <= 10
    verdict(
        7,
        ok,
        f"near-boundary inflation {inflation:.1f} (need >= 100), on/median {spread:.1f} (need <= 10); "
        f"theta~0 off {off0:.2e} on {on0:.2e}; theta~pi off {off_pi:.2e} on {on_pi:.2e}; median {median:.2e}",
    )


def test_8_eta_perturbation_ratios(verdict):
    start = time.perf_counter()
    s = np.linspace(0, np.pi, 66)[1:-1]
    hs = 2.0 ** -np.arange(6, 11)
    ef, efg = Q.eta(KMS, s), Q.eta(S.add(KMS, LAP), s)
    ps, ph = Q.psi(KMS, LAP, s), Q.phi(KMS, LAP, s)
    r1 = np.array([np.abs(Q.eta(S.add(KMS, S.scale(LAP, h)), s) - ef - ps * h).max() for h in hs])
    r2 = np.array([np.abs(Q.eta(S.add(KMS, S.scale(LAP, h**h)), s) - efg - ph * h * np.log(h)).max() for h in hs])
    elapsed = time.perf_counter() - start
    ratios1 = r1[:-1] / r1[1:]
    model = (hs * np.log(hs)) ** 2
    ratios2 = r2[:-1] / r2[1:]
    model_ratios = model[:-1] / model[1:]
    const = r2 / model
    spread = const.max() / const.min() - 1
    ok = (
        np.all((ratios1 >= 3.2) & (ratios1 <= 4.8))
        and spread < 0.05
        and np.all(np.abs(ratios2 / model_ratios - 1) <= 0.1)
        and elapsed < 120
    )
    verdict(
        8,
        ok,
        f"part (i) ratios {np.array2string(ratios1, precision=3)}; part (ii) ratios {np.array2string(ratios2, precision=3)} "
        f"vs (h log h)^2 ratios {np.array2string(model_ratios, precision=3)}, r/(h log h)^2 spread {spread:.2%}; {elapsed:.1f} s",
    )


def test_9_property_suites(verdict):
    rng = np.random.default_rng(20240601)
    s = np.linspace(0, np.pi, 66)[1:-1]
    checks = {}

    const = lambda bs, ds: (np.full_like(bs[0], 2.5), np.full(ds[0][0].shape, 2.5), np.zeros(ds[0][0].shape))
    checks["pv identity"] = np.abs(Q._pv([KMS], const, lambda bs: [], s, Q.DEFAULT)).max() <= 1e-9

    full = np.linspace(0, np.pi, 64)
    base = Q.eta(KMS, full)
    checks["scale invariance"] = all(np.abs(Q.eta(S.scale(KMS, c), full) - base).max() <= 1e-8 for c in (0.5, 2.0, 10.0))

    ends = [np.abs(Q.eta(f, [0.0, np.pi])).max() for f in (KMS, S.kms(0.3), S.add(KMS, LAP))]
    checks["eta endpoints"] = max(ends) <= 1e-8

    ok_vdm = True
    for n0, levels in ((20, 2), (50, 4), (100, 5)):
        coeffs = rng.uniform(-10, 10, levels)
        hs = [1.0 / (2**j * (n0 + 1)) for j in range(levels)]
        errors = np.array([[sum(c * h ** (l + 1) for l, c in enumerate(coeffs))] * n0 for h in hs])
        values, _ = ML.solve_levels(errors, n0)
        for l, c in enumerate(coeffs):
            ok_vdm &= np.abs(values[l] - c).max() <= 1e-10 * (1 + abs(c)) * (n0 + 1) ** l
    checks["vandermonde recovery"] = bool(ok_vdm)

    ok_sym = True
    t = rng.uniform(0, 2 * np.pi, 50)
    for _ in range(20):
        a = S.CosineSymbol(rng.uniform(-2, 2, rng.integers(1, 8)))
        b = S.CosineSymbol(rng.uniform(-2, 2, rng.integers(1, 8)))
        scale = (1 + 2 * np.abs(a.coeffs).sum()) * (1 + 2 * np.abs(b.coeffs).sum())
        ok_sym &= np.abs(S.multiply(a, b)(t) - a(t) * b(t)).max() <= 1e-12 * scale
        e = 1e-5
        fd = (a(t + e) - a(t - e)) / (2 * e)
        ok_sym &= np.abs(S.derivative(a, t, 1) - fd).max() <= 1e-6
    checks["product/derivative"] = bool(ok_sym)

    failed = [name for name, ok in checks.items() if not ok]
    verdict(9, not failed, ", ".join(f"{k}: {'ok' if v else 'failed'}" for k, v in checks.items()))
