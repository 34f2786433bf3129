import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from toeplitz_spectra import momentary as M
from toeplitz_spectra import symbols as S


def test_beta_eval_examples():
    assert M.beta_eval(M.BetaSpec("power_log", 1, 1, 0), 0.01) == pytest.approx(0.01)
    assert M.beta_eval(M.BetaSpec("h_to_h"), 0.5) == pytest.approx(math.sqrt(0.5))
    assert M.beta_eval(M.BetaSpec("power_log", 3, 2, 0), 0.01) == pytest.approx(3e-4)
    assert M.beta_eval(M.BetaSpec("power_log", 1, 1, 2), 0.1) == pytest.approx(0.1 * math.log(10) ** 2)
    for h in (0.0, 1.0, -0.5):
        with pytest.raises(ValueError):
            M.beta_eval(M.BetaSpec(), h)


def test_beta_spec_validation():
    with pytest.raises(ValueError):
        M.BetaSpec("exp")
    with pytest.raises(ValueError):
        M.BetaSpec("power_log", 1, -1, 0)
    with pytest.raises(ValueError):
        M.BetaSpec("power_log", 1, 1, 0.5)


def test_instantiate_fn_family():
    h = 0.01
    c = M.instantiate(M.fn_family(3, 2), 99)
    np.testing.assert_allclose(c.coeffs, [6 + 6 * h**2 + 2 * h**4, -4 - 3 * h**2, 1], rtol=0, atol=1e-15)
    np.testing.assert_allclose(c.coeffs, [6.00060002, -4.0003, 1], atol=1e-12)


def test_instantiate_plain_and_linear():
    base = S.kms(0.5)
    np.testing.assert_array_equal(M.instantiate(M.MomentarySymbol(base), 10).coeffs, base.coeffs)
    ms = M.MomentarySymbol(base, ((M.BetaSpec("power_log", 1, 1, 0), S.laplacian()),))
    assert M.instantiate(ms, 127).coeffs[0] == pytest.approx(0.75 + 2 / 128)
    zero = M.fn_family(0, 0)
    for n in (1, 7, 100):
        np.testing.assert_allclose(M.instantiate(zero, n).coeffs, S.laplacian_power(2).coeffs)
    with pytest.raises(ValueError):
        M.instantiate(zero, 0)


def test_uniform_convergence_is_monotone():
    ms = M.fn_family(3, 2)
    t = np.linspace(0, np.pi, 257)
    base = ms.base(t)
    gaps = [np.abs(M.instantiate(ms, 2**p)(t) - base).max() for p in range(6, 15)]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < 1e-6


def test_ordering():
    assert M.is_ordered(M.fn_family(3, 2))
    hh = M.MomentarySymbol(
        S.kms(0.5),
        ((M.BetaSpec("h_to_h"), S.laplacian()), (M.BetaSpec("power_log", 1, 1, 1), S.laplacian())),
    )
    assert M.is_ordered(hh)
    wrong = M.MomentarySymbol(
        S.laplacian(), ((M.BetaSpec("power_log", 1, 2, 0), S.laplacian()), (M.BetaSpec("power_log", 1, 1, 0), S.laplacian()))
    )
    assert not M.is_ordered(wrong)


@given(st.floats(1e-6, 0.999), st.floats(0.01, 10), st.floats(0, 4), st.integers(0, 3))
def test_beta_positive(h, c, p, q):
    v = M.beta_eval(M.BetaSpec("power_log", c, p, q), h)
    assert v >= 0
    if q == 0 or h < 1:
        assert math.isfinite(v)
