import numpy as np
import pytest

from toeplitz_spectra import expansion as E
from toeplitz_spectra import quadrature as Q
from toeplitz_spectra import symbols as S

F = S.kms(0.5)
G = S.laplacian()
CFG = Q.PVConfig(nodes=2048)


def test_c12_of_laplacian_vanishes():
    s = np.linspace(0, np.pi, 9)
    c1, c2 = E.c12(G, s, CFG)
    np.testing.assert_allclose(c1, 0, atol=1e-15)
    np.testing.assert_allclose(c2, 0, atol=1e-15)


def test_c1_kms():
    c1, _ = E.c12(F, np.pi / 2)
    assert c1 == pytest.approx(-S.derivative(F, np.pi / 2) * 2 * np.arctan(0.5), abs=1e-8)


def test_endpoint_values():
    s = np.array([0.0])
    assert abs(E.c12(F, s, CFG)[0][0]) <= 1e-8
    assert abs(E.q12(F, G, s, CFG)[0][0]) <= 1e-8
    assert abs(E.psi12(F, G, s, CFG)[0][0]) <= 1e-8
    assert abs(E.gammas(F, G, s, CFG)[1][0]) <= 1e-8


def test_q1_simplifies_when_g_is_laplacian():
    s = np.linspace(0.1, 3.0, 7)
    q1, _ = E.q12(F, G, s, CFG)
    es = Q.eta(S.add(F, G), s, CFG)
    expected = S.derivative(F, s) * (Q.eta(F, s, CFG) - es) - S.derivative(G, s) * es
    np.testing.assert_allclose(q1, expected, atol=1e-14)


def test_boundary_values_of_psi_and_gamma():
    assert E.psi12(F, G, np.pi, CFG)[0] == pytest.approx(4.0, abs=1e-12)
    assert E.gammas(F, G, np.pi, CFG)[2] == pytest.approx(2.0, abs=1e-12)
    g11, _, g22, _, _ = E.gammas(F, G, np.linspace(0, np.pi, 5), CFG)
    np.testing.assert_allclose(g11, G(np.linspace(0, np.pi, 5)))
    np.testing.assert_allclose(g22, 0.5 * g11)


def test_kinds_and_validation():
    assert E.ExpansionKind("h_to_h") is E.ExpansionKind.H_TO_H
    with pytest.raises(ValueError):
        E.approx_eigenvalues("cubic", F, G, 8, 1)
    with pytest.raises(ValueError):
        E.approx_eigenvalues("sum", F, G, 8, 4)
    with pytest.raises(ValueError):
        E.approx_eigenvalues("sum", F, None, 8, 1)
    with pytest.raises(ValueError):
        E.error_report(np.zeros(3), np.zeros(4), "sum", 1, 3)


def test_single_kind_is_exact_for_laplacian():
    n = 40
    lam = E.exact_eigenvalues("single", G, None, n)
    for k in (1, 2, 3):
        np.testing.assert_allclose(E.approx_eigenvalues("single", G, None, n, k, CFG), lam, atol=1e-12)


def test_error_report_normalization():
    rep = E.error_report(np.arange(4.0), np.arange(4.0), "sum", 2, 4)
    assert rep.max_error == 0 and rep.normalized_max == 0
    np.testing.assert_array_equal(rep.per_j, 0)
    rep = E.error_report([1.0, 2.0], [1.0, 2.5], "sum", 2, 9)
    assert rep.max_error == pytest.approx(0.5)
    assert rep.normalized_max == pytest.approx(0.5 * 100)
    rep = E.error_report([1.0, 2.0], [1.0, 2.5], "h_to_h", 2, 9)
    assert rep.normalized_max == pytest.approx(0.5 * 100 / np.log(10) ** 2)


def test_table_value_sum_n256():
    n = 256
    exact = E.exact_eigenvalues("sum", F, G, n)
    apx = E.approx_eigenvalues("sum", F, G, n, 1)
    rep = E.error_report(exact, apx, "sum", 1, n)
    assert rep.max_error == pytest.approx(4.6270e-4, rel=5e-4)


def test_convergence_order_linear_h():
    norms = {}
    for n in (256, 1024):
        exact = E.exact_eigenvalues("linear_h", F, G, n)
        apx = E.approximations("linear_h", F, G, n, 2)
        norms[n] = [E.error_report(exact, a, "linear_h", k + 1, n).normalized_max for k, a in enumerate(apx)]
    for k in range(2):
        assert abs(norms[256][k] / norms[1024][k] - 1) < 0.05


def test_coefficient_overlay_sum():
    n = 512
    d = E.mesh(n)
    exact = E.exact_eigenvalues("sum", F, G, n)
    apx = E.approx_eigenvalues("sum", F, G, n, 1)
    q1, _ = E.q12(F, G, d)
    scaled = (n + 1) * (exact - apx)
    assert np.abs(scaled - q1).max() <= 0.05 * np.abs(q1).max()
