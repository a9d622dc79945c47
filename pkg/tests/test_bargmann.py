import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_state
from polytoep import bargmann as bg
from polytoep import hermite as hm
from polytoep import phasespace as ps

HB = 0.25


@pytest.fixture(scope="module")
def x():
    return ps.default_axis(HB, 24)


@pytest.fixture(scope="module")
def ax():
    return bg.fock_axis(HB, 12, spacing=0.3)


def weighted(F):
    return F.unweighted() * np.exp(-np.abs(F.z) ** 2 / (4 * F.hbar))


def inner_disc(F, radius=3.0):
    return np.abs(F.z) <= radius * math.sqrt(F.hbar)


def monomial(k, hbar, z):
    # analytic image of phi_k: (pi hbar)^(-1/2) (2^(k+1) k!)^(-1/2) (z / sqrt(hbar))^k
    return (math.pi * hbar) ** -0.5 * (2.0 ** (k + 1) * math.factorial(k)) ** -0.5 * (z / math.sqrt(hbar)) ** k


def test_ground_state_value_at_origin():
    x1 = ps.default_axis(1.0, 6)
    F = bg.bargmann(ps.hermite_signal(0, 1.0, x1), [0.0, 0.5], [0.0, 0.5])
    assert F.values[0, 0] == pytest.approx((2 * math.pi) ** -0.5, abs=1e-12)
    assert not F.weight_applied


def test_hermite_images_are_monomials(x, ax):
    for k in range(6):
        F = bg.bargmann(ps.hermite_signal(k, HB, x), ax, ax)
        m = inner_disc(F)
        assert np.abs(F.values - monomial(k, HB, F.z))[m].max() < 1e-6
        assert F.norm() == pytest.approx(1.0, abs=1e-6)
    F1 = bg.bargmann(ps.hermite_signal(1, HB, x), [0.0], [0.0])
    assert abs(F1.values[0, 0]) < 1e-8


def test_reach_warning(x):
    with pytest.warns(UserWarning, match="reliable radius"):
        bg.bargmann(ps.hermite_signal(0, HB, x), [2 * x[-1]], [0.0])


def test_adjoint_inverts(x, ax):
    for k in range(5):
        phik = ps.hermite_signal(k, HB, x)
        back = bg.bargmann_adjoint(bg.bargmann(phik, ax, ax), x)
        assert np.abs(back.samples - phik.samples).max() < 1e-5


def test_adjoint_of_closed_form_and_linearity(rng, x, ax):
    F0 = bg.FockField.from_function(lambda z: monomial(0, HB, z), ax, ax, HB)
    back = bg.bargmann_adjoint(F0, x)
    assert np.abs(back.samples - ps.hermite_signal(0, HB, x).samples).max() < 1e-6
    G = bg.FockField.from_function(lambda z: monomial(3, HB, z) + 0.3 * monomial(1, HB, z), ax, ax, HB)
    a, b = 0.7 - 0.2j, -1.3j
    lhs = bg.bargmann_adjoint(a * F0 + b * G, x).samples
    rhs = a * back.samples + b * bg.bargmann_adjoint(G, x).samples
    assert np.abs(lhs - rhs).max() < 1e-12


def test_poly_bargmann_degree_zero_is_bargmann(rng, x, ax):
    psi = random_state(rng, HB, x)
    a = bg.poly_bargmann(0, psi, ax, ax)
    b = bg.bargmann(psi, ax, ax)
    assert np.abs(weighted(a) - weighted(b)).max() < 1e-6


@pytest.mark.parametrize("k", range(4))
def test_partial_isometry(rng, x, ax, k):
    psi = random_state(rng, HB, x)
    F = bg.poly_bargmann(k, psi, ax, ax)
    assert F.norm() == pytest.approx(psi.norm(), abs=1e-5)


def test_special_hermite_two_routes(x, ax):
    Z = ax[:, None] + 1j * ax[None, :]
    wt = np.exp(-np.abs(Z) ** 2 / (4 * HB))
    for ell in range(4):
        table = bg.special_hermite_table(ell, 5, HB, Z)
        for m in range(5):
            F = bg.poly_bargmann(ell, ps.hermite_signal(m, HB, x), ax, ax)
            assert np.abs((F.values - table[m]) * wt).max() < 1e-5
            assert np.allclose(table[m], bg.special_hermite_basis(ell, m, HB, Z))


def test_special_hermite_ground_value():
    z = np.array([0.0, 0.3 + 0.2j, -1.1j])
    assert np.allclose(bg.special_hermite_basis(0, 0, HB, z), (2 * math.pi * HB) ** -0.5)


def test_special_hermite_below_diagonal_branch(x, ax):
    # ell = 1, m = 0 is the branch whose Laguerre parameter would be -1;
    # it is conj(z) times a constant, so the only zero is the origin
    Z = ax[:, None] + 1j * ax[None, :]
    v = bg.special_hermite_basis(1, 0, HB, Z)
    ratio = v[np.abs(Z) > 1e-9] / np.conj(Z[np.abs(Z) > 1e-9])
    assert np.ptp(ratio.real) < 1e-12 and np.ptp(ratio.imag) < 1e-12
    F = bg.poly_bargmann(1, ps.hermite_signal(0, HB, x), ax, ax)
    assert np.abs((F.values - v) * np.exp(-np.abs(Z) ** 2 / (4 * HB))).max() < 1e-6


def test_special_hermite_tensor():
    z = np.array([[0.1 + 0.2j, -0.3j]])
    v = bg.special_hermite_basis((1, 2), (0, 3), HB, z)
    ref = bg.special_hermite_basis(1, 0, HB, z[:, 0]) * bg.special_hermite_basis(2, 3, HB, z[:, 1])
    assert np.allclose(v, ref)


def test_cross_orthogonality(ax):
    fields = {}
    for ell in range(4):
        for m in range(4):
            fields[ell, m] = bg.FockField.from_function(
                lambda z, e=ell, mm=m: bg.special_hermite_basis(e, mm, HB, z), ax, ax, HB)
    keys = list(fields)
    G = np.array([[fields[a].inner(fields[b]) for b in keys] for a in keys])
    assert np.abs(G - np.eye(len(keys))).max() < 1e-5


def test_kernel_values():
    assert bg.reproducing_kernel(0, 0, 0, 1.0) == pytest.approx(1 / (2 * math.pi))
    for k in range(4):
        assert bg.reproducing_kernel(k, 0.3 - 0.1j, 0.3 - 0.1j, HB) == pytest.approx(
            1 / (2 * math.pi * HB) * math.exp(0.1 / (2 * HB)))
    z, w = 0.4 + 0.1j, -0.2 + 0.5j
    for k in range(3):
        assert bg.reproducing_kernel(k, z, w, HB) == pytest.approx(np.conj(bg.reproducing_kernel(k, w, z, HB)))
    # product over coordinates in d = 2
    zz, ww = np.array([z, w]), np.array([w, 0.1j])
    v = bg.reproducing_kernel((1, 2), zz, ww, HB)
    ref = bg.reproducing_kernel(1, z, w, HB) * bg.reproducing_kernel(2, w, 0.1j, HB)
    assert v == pytest.approx(ref)


def test_reproducing_property(ax):
    pts = [0.0, 0.3 + 0.4j, -0.7 + 0.2j]
    for k in range(4):
        for m in range(4):
            F = bg.FockField.from_function(lambda z: bg.special_hermite_basis(k, m, HB, z), ax, ax, HB)
            for z0 in pts:
                R = F.with_values(bg.reproducing_kernel(k, z0, F.z, HB))
                assert abs(F.inner(R) - bg.special_hermite_basis(k, m, HB, z0)) < 1e-5


def test_projector_on_basis(ax):
    for k in range(3):
        for ell in range(3):
            for m in range(3):
                F = bg.FockField.from_function(lambda z: bg.special_hermite_basis(ell, m, HB, z), ax, ax, HB)
                P = bg.bergman_project(F, k)
                target = weighted(F) if k == ell else 0
                assert np.abs(weighted(P) - target)[inner_disc(F)].max() < 1e-5


def test_projector_idempotent(rng, ax):
    coeffs = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))

    def f(z):
        return sum(coeffs[l, m] * bg.special_hermite_basis(l, m, HB, z) for l in range(4) for m in range(4)) \
            + np.conj(z) ** 5 * np.exp(-np.abs(z) ** 2 / 8)

    F = bg.FockField.from_function(f, ax, ax, HB)
    m = inner_disc(F)
    for k in range(3):
        P1 = bg.bergman_project(F, k)
        P2 = bg.bergman_project(P1, k)
        assert np.abs(weighted(P2) - weighted(P1))[m].max() < 1e-5


def test_projection_of_conj_z_is_analytic(ax):
    F = bg.FockField.from_function(lambda z: np.conj(z) * monomial(0, HB, z), ax, ax, HB)
    P = bg.bergman_project(F, 0)
    r = weighted(bg.dbar(P))
    assert np.abs(r)[inner_disc(F)].max() < 1e-5
    # z-bar phi_0 image is orthogonal to analytic functions, so it projects to zero
    assert np.abs(weighted(P))[inner_disc(F)].max() < 1e-5


@pytest.mark.parametrize("k", range(3))
def test_polyanalytic_degree(rng, x, k):
    axf = bg.fock_axis(HB, 6, spacing=0.15)
    psi = random_state(rng, HB, x, terms=4)
    F = bg.poly_bargmann(k, psi, axf, axf)
    G = F
    for _ in range(k + 1):
        G = bg.dbar(G)
    m = np.abs(F.z) <= 2 * math.sqrt(HB)
    scale = np.abs(weighted(F)).max()
    assert np.abs(weighted(G))[m].max() < 1e-4 * scale
    # one derivative fewer does not vanish
    H = F
    for _ in range(k):
        H = bg.dbar(H)
    if k:
        assert np.abs(weighted(H))[m].max() > 1e-3 * scale


def test_derivative_by_kernel(rng, x, ax):
    psi = random_state(rng, HB, x, terms=4)
    F = bg.bargmann(psi, ax, ax)
    D = bg.dz(F)
    i0, j0 = len(ax) // 2, len(ax) // 2 + 3
    z0 = F.z[i0, j0]
    assert abs(bg.kernel_derivative(F, z0) - D.values[i0, j0]) < 1e-5


def test_translation_at_zero_is_identity(rng, x, ax):
    F = bg.bargmann(random_state(rng, HB, x), ax, ax)
    assert np.abs(bg.fock_translate(0j, F).values - F.values).max() < 1e-14


def _hermite_translate(psi, q, n=12):
    # exact translate of a Hermite combination: re-evaluate the expansion at x - q
    H = hm.hermite_functions(n, psi.hbar, psi.x)
    c = (H * psi.dx) @ psi.samples
    return c @ hm.hermite_functions(n, psi.hbar, psi.x - q)


def test_translation_intertwines_time_frequency_shift(rng, x, ax):
    # Theta_z B f = B M_p T_q f with z = q + i p
    psi = random_state(rng, HB, x, terms=4)
    h = ax[1] - ax[0]
    q, p = 3 * h, -2 * h
    with pytest.warns(UserWarning, match="leaves"):
        lhs = bg.fock_translate(q + 1j * p, bg.bargmann(psi, ax, ax))
    shifted = psi.with_samples(np.exp(1j * p * psi.x / HB) * _hermite_translate(psi, q))
    rhs = bg.bargmann(shifted, ax, ax)
    m = np.abs(lhs.z) <= 2.5 * math.sqrt(HB)
    assert np.abs(weighted(lhs) - weighted(rhs))[m].max() < 1e-5


def test_translation_moves_peak(ax):
    F = bg.FockField.from_function(lambda z: monomial(0, HB, z), ax, ax, HB)
    z0 = 4 * (ax[1] - ax[0]) + 2j * (ax[1] - ax[0])
    with pytest.warns(UserWarning, match="leaves"):
        T = bg.fock_translate(z0, F)
    W = np.abs(weighted(T))
    i, j = np.unravel_index(np.argmax(W), W.shape)
    # the weighted modulus is a Gaussian bump centred at conj(z0); the grid
    # need not contain that point, so allow half a cell diagonal
    h = ax[1] - ax[0]
    assert abs(T.z[i, j] - np.conj(z0)) <= 0.5 * math.sqrt(2) * h + 1e-12
    assert np.abs(W - np.exp(-np.abs(T.z - np.conj(z0)) ** 2 / (4 * HB)) * monomial(0, HB, 0)).max() < 1e-12


def test_off_lattice_translation(ax):
    F = bg.FockField.from_function(lambda z: monomial(1, HB, z), ax, ax, HB)
    z0 = 0.123 + 0.071j
    with pytest.warns(UserWarning, match="leaves"):
        T = bg.fock_translate(z0, F)
    exact = F.with_values(np.exp((1j * z0.real * z0.imag / 2 - abs(z0) ** 2 / 4 + z0 * F.z / 2) / HB)
                          * monomial(1, HB, F.z - np.conj(z0)))
    m = inner_disc(F)
    assert np.abs(weighted(T) - weighted(exact))[m].max() < 1e-4


def test_translation_off_grid_warns(ax):
    F = bg.FockField.from_function(lambda z: monomial(0, HB, z), ax, ax, HB)
    with pytest.warns(UserWarning, match="leaves"):
        bg.fock_translate(5 * (ax[1] - ax[0]) + 0j, F)


def test_mixed_norm(rng, ax):
    F = bg.FockField.from_function(lambda z: monomial(0, HB, z), ax, ax, HB)
    assert bg.mixed_norm(F) == pytest.approx(1.0, abs=1e-6)
    G = bg.FockField.from_function(
        lambda z: monomial(2, HB, z) + (0.5 - 0.2j) * bg.special_hermite_basis(1, 1, HB, z), ax, ax, HB)
    assert bg.mixed_norm(G) == pytest.approx(G.norm(), rel=1e-12)
    c = 2.5 - 1j
    for p, q in [(1, 1), (2, 4), (math.inf, 2), (3, math.inf)]:
        assert bg.mixed_norm(c * G, p, q) == pytest.approx(abs(c) * bg.mixed_norm(G, p, q), rel=1e-12)
    m1 = lambda z: 1 + 0 * np.abs(z)  # noqa: E731
    m2 = lambda z: 1 + np.abs(z) ** 2  # noqa: E731
    for p, q in [(1, 2), (2, 2), (math.inf, 1)]:
        assert bg.mixed_norm(G, p, q, m1) <= bg.mixed_norm(G, p, q, m2)
    with pytest.raises(ValueError):
        bg.mixed_norm(G, 0.5, 2)
    with pytest.raises(ValueError):
        bg.mixed_norm(G, 2, 2, lambda z: -np.ones(z.shape))


def test_multiplex_single_channel(rng, x, ax):
    psi = random_state(rng, HB, x)
    F = bg.multiplex([psi], ax, ax)
    (rec,) = bg.demultiplex(F, 1, x)
    assert np.abs(rec.samples - psi.samples).max() < 1e-5
    assert bg.crosstalk([psi], [rec])[0] < 1e-5


def test_multiplex_three_channels(rng, x, ax):
    sig = [random_state(rng, HB, x) for _ in range(3)]
    F = bg.multiplex(sig, ax, ax)
    rec = bg.demultiplex(F, 3, x)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        errs = bg.crosstalk(sig, rec)
    assert max(errs) < 1e-4
    assert F.norm() ** 2 == pytest.approx(sum(s.norm() ** 2 for s in sig), abs=1e-5)


def test_crosstalk_warns(x):
    a = ps.hermite_signal(0, HB, x)
    b = ps.hermite_signal(1, HB, x)
    with pytest.warns(UserWarning, match="crosstalk"):
        errs = bg.crosstalk([a], [b])
    assert errs[0] == pytest.approx(math.sqrt(2), abs=1e-8)
    with pytest.raises(ValueError):
        bg.multiplex([], [0.0, 1.0], [0.0, 1.0])


def test_fock_file_round_trip(tmp_path, rng, ax):
    F = bg.FockField.from_function(lambda z: monomial(2, HB, z) * (1 + 0.1j), ax, ax, HB)
    path = tmp_path / "f.fock"
    bg.save_fock(F, path)
    G = bg.load_fock(path)
    assert np.array_equal(G.values, F.values)
    assert (G.re0, G.im0, G.dre, G.dim, G.hbar, G.weight_applied) == (F.re0, F.im0, F.dre, F.dim, F.hbar, False)
    bad = tmp_path / "bad.fock"
    bad.write_bytes(b'{"format": "opm"}\n')
    with pytest.raises(ValueError):
        bg.load_fock(bad)


def test_weight_applied_flag(ax):
    F = bg.FockField.from_function(lambda z: monomial(1, HB, z), ax, ax, HB)
    G = bg.FockField(weighted(F), F.re0, F.im0, F.dre, F.dim, HB, weight_applied=True)
    assert np.allclose(G.unweighted(), F.values)
    assert G.inner(F) == pytest.approx(F.inner(F))


def test_plane_mismatch(ax):
    F = bg.FockField.from_function(lambda z: z, ax, ax, HB)
    G = bg.FockField.from_function(lambda z: z, ax[:-1], ax, HB)
    with pytest.raises(ValueError):
        F.inner(G)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 3), st.integers(0, 5), st.floats(-1, 1), st.floats(-1, 1))
def test_basis_kernel_pointwise(k, m, a, b):
    # reproducing kernel built from the basis: sum_m B_k phi_m(z) conj(B_k phi_m(w)) = rho^k(w, z)
    z, w = complex(a, b) * 0.6, complex(b, -a) * 0.4
    ms = 80
    tz = bg.special_hermite_table(k, ms, HB, np.array([z]))[:, 0]
    tw = bg.special_hermite_table(k, ms, HB, np.array([w]))[:, 0]
    s = np.sum(tz * np.conj(tw))
    assert s == pytest.approx(bg.reproducing_kernel(k, w, z, HB), rel=1e-8, abs=1e-10)
    assert abs(bg.special_hermite_basis(k, m, HB, z)) < 1e3
