"""Semiclassical symbol calculus for Hermite localization and Toeplitz operators.

Conventions fixed once here and used everywhere:

* ``{a, b} = d_q a d_p b - d_p a d_q b`` (so op(q)op(p) - op(p)op(q) = i hbar);
* Moyal terms a # b = sum_n (-i hbar)^n / n! alpha_n(a, b), which makes
  alpha_1(a, b) = (a_p b_q - a_q b_p) / 2 and alpha_1(q, p) = -1/2;
* the Hermite-window composition law to second order is
  ab + (i hbar / 2){a, b} - (hbar / 2)<grad_(k) a, grad_(k) b>.

The quadratic cases op(q)op(p) = op(qp + i hbar/2) and
T(z)T(conj z) = T(|z|^2 - 2 hbar) pin these signs.
"""
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import phasespace
from .hermite import (
    check_hbar,
    gauss_hermite,
    hermite_wigner_closed,
    hyp2f1_terminating,
    multi_index,
)
from .phasespace import PhaseField, _check_same_field, partial
from .quantize import Kind, OperatorMatrix, localization_matrix


@dataclass(frozen=True)
class ExpansionCoeffs:
    N: int
    d: int
    exact: tuple

    @property
    def values(self):
        return np.array([float(c) for c in self.exact])


def spec_coefficients(N, d=1):
    """C_{N-1, j} = sum_{m=j}^{N-1} 2^{-m} binom(d-1+m, d-1+j), j = 0..N-1, in exact arithmetic."""
    N, d = int(N), int(d)
    if N < 1 or d < 1:
        raise ValueError("need N >= 1 and d >= 1")
    vals = tuple(
        sum(Fraction(math.comb(d - 1 + m, d - 1 + j), 2**m) for m in range(j, N)) for j in range(N)
    )
    return ExpansionCoeffs(N, d, vals)


# -- spectrogram expansion --------------------------------------------------------

def mu_density(psi, N, qs, ps):
    """Signed density sum_j (-1)^j C_{N-1,j} S^{phi_j}_psi (d = 1)."""
    c = spec_coefficients(N, 1).values
    out = None
    for j in range(N):
        S = phasespace.spectrogram(psi, phasespace.hermite_window(j, psi.hbar), qs, ps)
        term = (-1) ** j * c[j] * S.values
        out = term if out is None else out + term
    return S.with_values(out)


def mu_density_offdiag(psi, phi, N, qs, ps):
    """sum_j (-1)^j C_{N-1,j} V_{phi_j} psi conj(V_{phi_j} phi), approximating W(psi, phi)."""
    c = spec_coefficients(N, 1).values
    out = None
    for j in range(N):
        win = phasespace.hermite_window(j, psi.hbar)
        V1 = phasespace.stft(psi, win, qs, ps)
        V2 = phasespace.stft(phi, win, qs, ps)
        term = (-1) ** j * c[j] * V1.values * np.conj(V2.values)
        out = term if out is None else out + term
    return V1.with_values(out)


# -- Hermite moments -----------------------------------------------------------------

def hermite_moment(alpha, beta, k, hbar):
    """int x^{2 alpha} xi^{2 beta} W_{phi_k}, closed form through a terminating 2F1."""
    alpha, beta, k = int(alpha), int(beta), int(k)
    if min(alpha, beta, k) < 0:
        raise ValueError("alpha, beta, k must be non-negative")
    hbar = check_hbar(hbar)
    f = hyp2f1_terminating(alpha + beta + 1, k, 1, 2.0)
    return (
        f * (-1) ** k * hbar ** (alpha + beta)
        * math.factorial(2 * alpha) * math.factorial(2 * beta)
        / (4 ** (alpha + beta) * math.factorial(alpha) * math.factorial(beta))
    )


def hermite_moment_bruteforce(alpha, beta, k, hbar, odd=False):
    """Tensor Gauss-Hermite quadrature of x^{2a} xi^{2b} W_{phi_k} (x^{2a+1} ... if ``odd``).

    The integrand is e^{-r^2/hbar} times a polynomial of degree 2(a + k)
    in x and 2(b + k) in xi, so enough nodes make the rule exact.
    """
    alpha, beta, k = int(alpha), int(beta), int(k)
    hbar = check_hbar(hbar)
    if alpha + beta > 8 or k > 10:
        warnings.warn("moment outside the tested quadrature budget (alpha+beta <= 8, k <= 10)", stacklevel=2)
    n = alpha + beta + k + 4
    if n > 512:
        raise ValueError("quadrature degree budget exceeded")
    x, w = gauss_hermite(n).nodes, gauss_hermite(n).weights
    s = math.sqrt(hbar)
    X, XI = np.meshgrid(s * x, s * x, indexing="ij")
    Wk = hermite_wigner_closed(k, hbar, np.stack([X, XI], axis=-1))
    # undo the quadrature weight: W carries e^{-(x^2+xi^2)/hbar} already
    integrand = X ** (2 * alpha + int(odd)) * XI ** (2 * beta) * Wk * np.exp((X**2 + XI**2) / hbar)
    return float(hbar * np.einsum("i,j,ij->", w, w, integrand))


def c_alpha(k, alpha):
    """c^{(k)}_alpha = (1/alpha!) prod_j 2F1(alpha_j + alpha_{j+d} + 1, -k_j; 1; 2)."""
    k = multi_index(k)
    alpha = multi_index(alpha)
    d = len(k)
    if len(alpha) != 2 * d:
        raise ValueError(f"alpha must have length {2 * d}")
    out = 1.0 / math.prod(math.factorial(a) for a in alpha)
    for j in range(d):
        out *= hyp2f1_terminating(alpha[j] + alpha[j + d] + 1, k[j], 1, 2.0)
    return out


def apply_D(m, k, a):
    """D_m a = (-1)^{|k|} m! sum_{|alpha|=m} c^{(k)}_alpha d^{2 alpha} a (d = 1, m <= 3)."""
    (k,) = multi_index(k)
    m = int(m)
    if m > 3:
        raise ValueError("finite-difference depth supports m <= 3")
    if m == 0:
        return a
    _stencil_check(a)
    out = np.zeros(a.values.shape, dtype=complex if np.iscomplexobj(a.values) else float)
    for s in range(m + 1):
        out = out + c_alpha((k,), (s, m - s)) * partial(a, 2 * s, 2 * (m - s))
    return a.with_values((-1) ** k * math.factorial(m) * out)


def _stencil_check(a):
    if min(a.values.shape) < 9:
        warnings.warn("grid too coarse for the finite-difference stencil", stacklevel=3)


# -- Moyal and composition symbols ----------------------------------------------

def moyal_bidiff(n, a, b, hbar=None):
    """alpha_n(a, b) for n <= 2, with a # b = sum (-i hbar)^n / n! alpha_n(a, b)."""
    _check_same_field(a, b)
    _stencil_check(a)
    if n == 0:
        return a.with_values(a.values * b.values)
    if n == 1:
        return a.with_values(0.5 * (partial(a, 0, 1) * partial(b, 1, 0) - partial(a, 1, 0) * partial(b, 0, 1)))
    if n == 2:
        return a.with_values(0.25 * (
            partial(a, 0, 2) * partial(b, 2, 0)
            - 2 * partial(a, 1, 1) * partial(b, 1, 1)
            + partial(a, 2, 0) * partial(b, 0, 2)
        ))
    raise ValueError("moyal_bidiff supports n <= 2")


def moyal_product_2nd(a, b, hbar):
    """a # b up to and including the hbar^2 term."""
    out = sum(((-1j * hbar) ** n / math.factorial(n)) * moyal_bidiff(n, a, b).values for n in range(3))
    return a.with_values(out)


def composition_symbol_2nd(a, b, k, hbar):
    """ab + (i hbar/2){a, b} - (hbar/2)<grad_(k) a, grad_(k) b>."""
    hbar = check_hbar(hbar)
    pb = phasespace.poisson_bracket(a, b).values
    gp = phasespace.weighted_gradient_pair(a, b, k).values
    return a.with_values(a.values * b.values + 0.5j * hbar * pb - 0.5 * hbar * gp)


def weyl_corrected_symbol(a, k, N, hbar):
    """sum_{m<N} hbar^m D_m a / (4^m m!): op of this equals the k-th localization of a to O(hbar^N)."""
    if not 1 <= N <= 3:
        raise ValueError("N must be 1, 2 or 3")
    hbar = check_hbar(hbar)
    out = a.values.astype(complex)
    for m in range(1, N):
        out = out + hbar**m / (4**m * math.factorial(m)) * apply_D(m, k, a).values
    return a.with_values(out)


def aw_inverse_2nd(a, k, hbar):
    """a - (hbar/4) Delta_(k) a: its k-th localization equals op(a) up to O(hbar^2)."""
    return a.with_values(a.values - 0.25 * check_hbar(hbar) * phasespace.weighted_laplacian(a, k).values)


def wirtinger(field):
    """(d m, dbar m) for samples on a PhaseField whose axes are (Re z, Im z)."""
    mx, my = phasespace.gradient(field)
    return 0.5 * (mx - 1j * my), 0.5 * (mx + 1j * my)


def toeplitz_composition_symbol(m, mu, k, hbar):
    """Second-order symbol of T_k(m) T_k(mu).

    m mu - hbar (2k+2) dm dbar(mu) - 2k hbar dbar(m) d(mu); for k = 0 this
    is m mu - 2 hbar dm dbar(mu).  ``m`` and ``mu`` are PhaseFields with
    axes (Re z, Im z).
    """
    (k,) = multi_index(k)
    hbar = check_hbar(hbar)
    _check_same_field(m, mu)
    _stencil_check(m)
    dm, dbm = wirtinger(m)
    du, dbu = wirtinger(mu)
    return m.with_values(m.values * mu.values - hbar * (2 * k + 2) * dm * dbu - 2 * k * hbar * dbm * du)


def weyl_via_antiwick_matrix(a, N, n, hbar):
    """sum_j (-1)^j C_{N-1,j} op_aw^{phi_j}(a): the Weyl matrix up to O(hbar^N)."""
    c = spec_coefficients(N, 1).values
    M = sum((-1) ** j * c[j] * localization_matrix(a, j, n, hbar).entries for j in range(N))
    return OperatorMatrix(M, Kind.WEYL, None, check_hbar(hbar))


# -- rate fits ------------------------------------------------------------------------

@dataclass(frozen=True)
class RateFit:
    slope: float
    intercept: float
    rsquared: float
    points: int


def fit_rate(hbars, errors, floor=1e-12):
    """Least-squares slope of log(error) against log(hbar), errors below ``floor`` dropped."""
    h = np.asarray(hbars, dtype=float)
    e = np.asarray(errors, dtype=float)
    if h.shape != e.shape:
        raise ValueError("hbars and errors differ in length")
    keep = e > floor
    h, e = h[keep], e[keep]
    if len(h) < 3:
        raise ValueError(f"need at least 3 errors above {floor:g}, got {len(h)}")
    x, y = np.log(h), np.log(e)
    if np.ptp(x) == 0:
        raise ValueError("hbar values do not vary")
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = np.sum((y - y.mean()) ** 2)
    r2 = 1.0 if ss_tot == 0 else max(0.0, 1.0 - np.sum(resid**2) / ss_tot)
    return RateFit(float(slope), float(intercept), float(r2), len(h))


def monomials(max_degree):
    """Exponent pairs (s, t) of q^s p^t ordered by total degree, then by descending s."""
    return [(s, deg - s) for deg in range(max_degree + 1) for s in range(deg, -1, -1)]

