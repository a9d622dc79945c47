import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import eval_genlaguerre, eval_hermite, factorial, gamma, hyp2f1

from polytoep import hermite as hm
from polytoep import phasespace as ps


@pytest.mark.parametrize("hbar", [1.0, 0.1])
def test_orthonormal_up_to_20(hbar):
    x = np.linspace(-12, 12, 4001) * math.sqrt(hbar)
    H = hm.hermite_functions(21, hbar, x)
    G = H @ H.T * (x[1] - x[0])
    assert np.abs(G - np.eye(21)).max() < 1e-10


def test_matches_textbook_normalization():
    hbar = 0.3
    x = np.linspace(-3, 3, 41)
    H = hm.hermite_functions(12, hbar, x)
    for k in range(12):
        ref = (math.pi * hbar) ** -0.25 / math.sqrt(2.0**k * factorial(k)) \
            * eval_hermite(k, x / math.sqrt(hbar)) * np.exp(-x**2 / (2 * hbar))
        assert np.allclose(H[k], ref, atol=1e-12)


def test_oscillator_eigenfunctions():
    hbar = 0.2
    x = np.linspace(-4, 4, 2001)
    dx = x[1] - x[0]
    for k in range(6):
        f = hm.hermite_fn(k, hbar, x)
        d2 = (f[:-2] - 2 * f[1:-1] + f[2:]) / dx**2
        Hf = -0.5 * hbar**2 * d2 + 0.5 * x[1:-1] ** 2 * f[1:-1]
        assert np.abs(Hf - hbar * (k + 0.5) * f[1:-1]).max() < 1e-4


def test_log_scaled_branch_agrees_with_plain_recurrence():
    x = np.linspace(-20, 20, 9)
    plain = hm.hermite_functions(320, 1.0, x)[310]
    assert np.allclose(hm.hermite_fn(310, 1.0, x), plain, rtol=1e-9, atol=1e-300)


def test_high_index_finite():
    x = np.linspace(-60, 60, 12001)
    v = hm.hermite_fn(1000, 1.0, x)
    assert np.isfinite(v).all()
    assert np.sum(v**2) * (x[1] - x[0]) == pytest.approx(1.0, abs=1e-6)


def test_tensor_hermite():
    pts = np.array([[0.1, -0.3], [0.5, 0.2]])
    v = hm.hermite_fn((2, 1), 0.5, pts)
    ref = hm.hermite_fn(2, 0.5, pts[:, 0]) * hm.hermite_fn(1, 0.5, pts[:, 1])
    assert np.allclose(v, ref)
    with pytest.raises(ValueError):
        hm.hermite_fn((1, 1), 0.5, np.zeros((3, 3)))


def test_input_validation():
    with pytest.raises(ValueError):
        hm.multi_index((1, -2))
    with pytest.raises(ValueError):
        hm.check_hbar(0.0)
    with pytest.warns(UserWarning):
        hm.check_hbar(2.0)
    with pytest.raises(ValueError):
        hm.hermite_functions(3, 1.0, np.array([np.nan]))


@pytest.mark.parametrize("n", [1, 5, 40, 128])
def test_gauss_hermite_exact_on_even_monomials(n):
    rule = hm.gauss_hermite(n)
    for m in range(n):
        assert rule.integrate(lambda t: t ** (2 * m)) == pytest.approx(gamma(m + 0.5), rel=1e-10)


def test_gauss_hermite_large_n():
    rule = hm.gauss_hermite(512)
    assert len(rule.nodes) == 512
    assert np.all(rule.weights >= 0)
    assert np.all(np.diff(rule.nodes) > 0)
    assert rule.weights.sum() == pytest.approx(math.sqrt(math.pi), rel=1e-12)
    for bad in (0, 513):
        with pytest.raises(ValueError):
            hm.gauss_hermite(bad)


def test_scaled_rule_integrates_hermite_squares():
    x, w = hm.gauss_hermite(60).scaled(0.05)
    H = hm.hermite_functions(20, 0.05, x)
    assert np.allclose((H**2) @ w, 1.0, atol=1e-12)


def test_laguerre_against_scipy():
    x = np.linspace(0, 30, 31)
    for n in range(8):
        for m in range(5):
            assert np.allclose(hm.laguerre(n, m, x), eval_genlaguerre(n, m, x), rtol=1e-10, atol=1e-10)
            assert np.allclose(hm.laguerre_table(7, m, x)[n], eval_genlaguerre(n, m, x), rtol=1e-10, atol=1e-10)


def test_laguerre_negative_parameter_identity():
    # L_n^{(-m)}(x) = (-x)^m (n-m)!/n! L_{n-m}^{(m)}(x)
    x = np.linspace(0, 5, 11)
    for n in range(1, 6):
        for m in range(1, n + 1):
            lhs = hm.laguerre(n, -m, x)
            rhs = (-x) ** m * math.factorial(n - m) / math.factorial(n) * hm.laguerre(n - m, m, x)
            assert np.allclose(lhs, rhs, atol=1e-12)
    with pytest.raises(ValueError):
        hm.laguerre(1, -3, x)


def test_terminating_hypergeometric():
    for a in (0.5, 2, 3.5):
        for k in range(6):
            assert hm.hyp2f1_terminating(a, k, 1, 2.0) == pytest.approx(hyp2f1(a, -k, 1, 2.0), rel=1e-12, abs=1e-12)
    assert hm.hyp2f1_terminating(3, 1, 1, 2.0) == -5
    with pytest.raises(ValueError):
        hm.hyp2f1_terminating(1, 3, -1, 0.5)
    with pytest.raises(ValueError):
        hm.hyp2f1_terminating(1, 1.5, 1, 0.5)


def test_pochhammer():
    assert hm.pochhammer(3, 0) == 1
    assert hm.pochhammer(3, 3) == 3 * 4 * 5


def test_wigner_closed_form_matches_fft_route():
    hbar = 0.2
    x = ps.default_axis(hbar, 10)
    for k in range(4):
        W = ps.wigner(ps.hermite_signal(k, hbar, x), x[::4], None)
        Q, P = W.mesh()
        ref = hm.hermite_wigner_closed(k, hbar, np.stack([Q, P], axis=-1))
        assert np.abs(W.values - ref).max() < 1e-10


def test_cross_wigner_closed_form_matches_fft_route():
    hbar = 0.3
    x = ps.default_axis(hbar, 10)
    qs = x[::5]
    ref = None
    for m in range(4):
        for l in range(4):
            W = ps.cross_wigner(ps.hermite_signal(m, hbar, x), ps.hermite_signal(l, hbar, x), qs)
            if ref is None:
                Q, P = W.mesh()
                ref = hm.hermite_cross_wigner(4, hbar, Q, P)
            assert np.abs(W.values - ref[m, l]).max() < 1e-10


def test_wigner_closed_form_rejects_bad_shape():
    with pytest.raises(ValueError):
        hm.hermite_wigner_closed((1, 2), 1.0, np.zeros((4, 3)))


@settings(max_examples=25, deadline=None)
@given(st.floats(0.02, 1.0), st.integers(0, 30))
def test_unit_norm_any_hbar(hbar, k):
    x = np.linspace(-1, 1, 3001) * math.sqrt(hbar) * (math.sqrt(2 * k + 1) + 8)
    f = hm.hermite_fn(k, hbar, x)
    assert np.sum(f * f) * (x[1] - x[0]) == pytest.approx(1.0, abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 12), st.integers(0, 6), st.floats(0, 20))
def test_laguerre_three_term_recurrence(n, m, x):
    # (n+1) L_{n+1} = (2n+1+m-x) L_n - (n+m) L_{n-1}
    lhs = (n + 2) * hm.laguerre(n + 2, m, x)
    rhs = (2 * n + 3 + m - x) * hm.laguerre(n + 1, m, x) - (n + 1 + m) * hm.laguerre(n, m, x)
    assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-6)


def test_spec_point_values():
    assert hm.hermite_fn(0, 1.0, np.array([0.0]))[0] == pytest.approx(math.pi ** -0.25, abs=1e-12)
    assert abs(hm.hermite_fn(1, 1.0, np.array([0.0]))[0]) < 1e-15
    assert hm.laguerre(0, 0, 3.7) == 1
    assert hm.laguerre(1, 0, 2.0) == pytest.approx(-1)
    assert hm.laguerre(2, 0, 2.0) == pytest.approx(-1)
    assert hm.hyp2f1_terminating(2.5, 0, 1, 7.0) == 1
    assert hm.hyp2f1_terminating(1, 1, 1, 2.0) == -1
    origin = np.zeros(2)
    assert hm.hermite_wigner_closed(0, 1.0, origin) == pytest.approx(1 / math.pi)
    assert hm.hermite_wigner_closed(1, 1.0, origin) == pytest.approx(-1 / math.pi)


def test_small_gauss_hermite_rules():
    r1 = hm.gauss_hermite(1)
    assert r1.nodes[0] == pytest.approx(0, abs=1e-15)
    assert r1.weights[0] == pytest.approx(math.sqrt(math.pi))
    r2 = hm.gauss_hermite(2)
    assert np.allclose(r2.nodes, [-1 / math.sqrt(2), 1 / math.sqrt(2)])
    assert np.allclose(r2.weights, math.sqrt(math.pi) / 2)
    assert hm.gauss_hermite(3).integrate(lambda t: t**4) == pytest.approx(0.75 * math.sqrt(math.pi), rel=1e-12)


@pytest.mark.parametrize("hbar", [1.0, 0.1, 0.01])
def test_orthonormal_by_gauss_hermite(hbar):
    x, w = hm.gauss_hermite(200).scaled(hbar)
    H = hm.hermite_functions(21, hbar, x)
    G = (H * w) @ H.T
    assert np.abs(G - np.eye(21)).max() < 1e-10


def test_eigenfunctions_spectral_derivative():
    hbar = 0.1
    x = np.linspace(-4, 4, 512, endpoint=False)
    kx = 2 * np.pi * np.fft.fftfreq(len(x), x[1] - x[0])
    for k in range(11):
        f = hm.hermite_fn(k, hbar, x)
        d2 = np.fft.ifft(-(kx**2) * np.fft.fft(f)).real
        Hf = -0.5 * hbar**2 * d2 + 0.5 * x**2 * f
        assert np.linalg.norm(Hf - hbar * (k + 0.5) * f) / np.linalg.norm(f) < 1e-6


def test_laguerre_against_exact_series():
    from fractions import Fraction

    # L_n^{(m)}(x) = sum_j (-1)^j binom(n+m, n-j) x^j / j!, for n + m >= 0
    def terms(n, m, x):
        return [(-1) ** j * Fraction(math.comb(n + m, n - j)) * Fraction(x) ** j / math.factorial(j)
                for j in range(n + 1) if n - j <= n + m]

    for n in (0, 1, 5, 17, 30):
        for m in sorted({-min(n, 10), 0, 3, 10}):
            for x in (0.0, 0.75, 7.5, 50.0):
                t = terms(n, m, x)
                exact = float(sum(t))
                # error measured against the size of the largest term of the series
                scale = max(1.0, float(max(abs(v) for v in t)))
                assert abs(hm.laguerre(n, m, x) - exact) / scale < 1e-12


def test_wigner_closed_unit_mass():
    hbar = 0.5
    x, w = hm.gauss_hermite(40).scaled(hbar)
    Q, P = np.meshgrid(x, x, indexing="ij")
    for k in range(6):
        Wk = hm.hermite_wigner_closed(k, hbar, np.stack([Q, P], axis=-1))
        assert np.einsum("i,j,ij->", w, w, Wk) == pytest.approx(1.0, abs=1e-10)
