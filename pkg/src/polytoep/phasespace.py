"""Sampled phase-space transforms: STFT, (cross-)Wigner, spectrograms, Husimi.

Fields live on uniform rectangular grids indexed ``[q, p]``.  Integrals are
trapezoid sums, which for the Gaussian-class integrands used here converge
spectrally once the grid covers the tails.
"""
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve

from .hermite import check_hbar, hermite_functions, multi_index


@dataclass
class SignalGrid:
    """Samples of psi on the grid x0 + j*dx."""

    samples: np.ndarray
    x0: float
    dx: float
    hbar: float

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=complex)
        if self.samples.ndim != 1 or len(self.samples) < 2:
            raise ValueError("need a 1-d array of at least 2 samples")
        if not self.dx > 0:
            raise ValueError("dx must be positive")
        self.hbar = check_hbar(self.hbar)
        peak = np.abs(self.samples).max()
        if peak > 0 and max(abs(self.samples[0]), abs(self.samples[-1])) > 1e-12 * peak:
            warnings.warn("signal does not decay at the grid ends", stacklevel=2)

    @classmethod
    def from_function(cls, f, x, hbar):
        x = np.asarray(x, dtype=float)
        return cls(f(x), x[0], x[1] - x[0], hbar)

    @property
    def x(self):
        return self.x0 + self.dx * np.arange(len(self.samples))

    def norm(self):
        return math.sqrt(np.sum(np.abs(self.samples) ** 2) * self.dx)

    def inner(self, other):
        """Left-linear inner product <self, other> = int self * conj(other)."""
        _check_same_grid(self, other)
        return np.sum(self.samples * np.conj(other.samples)) * self.dx

    def with_samples(self, samples):
        return SignalGrid(samples, self.x0, self.dx, self.hbar)


@dataclass
class PhaseField:
    """Samples of a phase-space function on (q0 + i*dq, p0 + j*dp)."""

    values: np.ndarray
    q0: float
    p0: float
    dq: float
    dp: float
    hbar: float

    def __post_init__(self):
        self.values = np.asarray(self.values)
        if self.values.ndim != 2:
            raise ValueError("PhaseField values must be a matrix")
        if not np.isfinite(self.values).all():
            raise ValueError("non-finite entries in PhaseField")

    @classmethod
    def from_function(cls, f, qs, ps, hbar):
        qs = np.asarray(qs, dtype=float)
        ps = np.asarray(ps, dtype=float)
        Q, P = np.meshgrid(qs, ps, indexing="ij")
        vals = np.broadcast_to(f(Q, P), Q.shape)
        return cls(np.array(vals), qs[0], ps[0], _step(qs), _step(ps), hbar)

    @property
    def qs(self):
        return self.q0 + self.dq * np.arange(self.values.shape[0])

    @property
    def ps(self):
        return self.p0 + self.dp * np.arange(self.values.shape[1])

    def mesh(self):
        return np.meshgrid(self.qs, self.ps, indexing="ij")

    def integrate(self, weight=None):
        v = self.values if weight is None else self.values * weight
        return np.sum(v) * self.dq * self.dp

    def with_values(self, values):
        return PhaseField(values, self.q0, self.p0, self.dq, self.dp, self.hbar)

    def same_grid(self, other, rtol=1e-9):
        return (
            self.values.shape == other.values.shape
            and np.allclose([self.q0, self.p0], [other.q0, other.p0], atol=rtol * max(self.dq, 1.0))
            and math.isclose(self.dq, other.dq, rel_tol=rtol)
            and math.isclose(self.dp, other.dp, rel_tol=rtol)
        )


def _step(v):
    if len(v) < 2:
        return 1.0
    d = np.diff(v)
    if not np.allclose(d, d[0], rtol=1e-9, atol=0):
        raise ValueError("grid must be uniform")
    return float(d[0])


def _check_same_grid(a, b):
    if len(a.samples) != len(b.samples) or not math.isclose(a.dx, b.dx, rel_tol=1e-12) \
            or abs(a.x0 - b.x0) > 1e-9 * a.dx:
        raise ValueError("signals live on different grids")
    if not math.isclose(a.hbar, b.hbar):
        raise ValueError("signals carry different hbar")


def _check_same_field(a, b):
    if not a.same_grid(b):
        raise ValueError("phase-space fields live on different grids")


def truncation_radius(hbar, n_max):
    """Radius covering the first ``n_max + 1`` oscillator states plus Gaussian tails."""
    return math.sqrt(2 * hbar * (2 * n_max + 1)) + 6 * math.sqrt(hbar)


def default_axis(hbar, n_max=32, points=None, margin=6.0, spacing=0.15):
    """Symmetric uniform axis of radius ``truncation_radius`` (at least 96 points)."""
    radius = math.sqrt(2 * hbar * (2 * n_max + 1)) + margin * math.sqrt(hbar)
    if points is None:
        points = max(96, int(math.ceil(2 * radius / (spacing * math.sqrt(hbar)))) + 1)
    return np.linspace(-radius, radius, points)


def hermite_signal(k, hbar, x):
    """phi_k sampled on ``x`` as a SignalGrid."""
    (k,) = multi_index(k)
    x = np.asarray(x, dtype=float)
    return SignalGrid(hermite_functions(k + 1, hbar, x)[k], x[0], x[1] - x[0], hbar)


def hermite_window(k, hbar):
    """phi_k as a callable window (exact evaluation at shifted points)."""
    (k,) = multi_index(k)

    def window(x):
        return hermite_functions(k + 1, hbar, x)[k]

    return window


def _window_matrix(psi, window, qs):
    """conj(u(x - q)) for every q in ``qs`` and x on psi's grid, shape (nq, nx)."""
    x = psi.x
    if callable(window):
        return np.conj(window(x[None, :] - qs[:, None]))
    if not math.isclose(window.dx, psi.dx, rel_tol=1e-12):
        raise ValueError("window and signal have different sampling steps")
    if not math.isclose(window.hbar, psi.hbar):
        raise ValueError("window and signal carry different hbar")
    # need x_i - q on the window lattice
    shift = (qs - (psi.x0 - window.x0)) / psi.dx
    ishift = np.rint(shift).astype(int)
    if np.any(np.abs(shift - ishift) > 1e-6):
        raise ValueError("q values are not on the sampling lattice of the window")
    j = np.arange(len(x))[None, :] - ishift[:, None]
    ok = (j >= 0) & (j < len(window.samples))
    out = np.zeros(j.shape, dtype=complex)
    out[ok] = np.conj(window.samples[j[ok]])
    return out


def stft(psi, window, qs, ps):
    """Short-time Fourier transform V_u psi(q,p) = (2 pi hbar)^(-1/2) <psi, M_p T_q u>.

    ``window`` is a SignalGrid on psi's lattice or a callable; a callable is
    evaluated exactly at the shifted points.
    """
    qs = np.atleast_1d(np.asarray(qs, dtype=float))
    ps = np.atleast_1d(np.asarray(ps, dtype=float))
    hbar = psi.hbar
    if not callable(window):
        nrm = window.norm()
        if abs(nrm - 1) > 1e-3:
            warnings.warn(f"window norm is {nrm:.4g}, not 1", stacklevel=2)
    U = _window_matrix(psi, window, qs)
    x = psi.x
    E = np.exp(-1j * np.outer(x, ps) / hbar) * (psi.dx / math.sqrt(2 * math.pi * hbar))
    vals = (U * psi.samples[None, :]) @ E
    return PhaseField(vals, qs[0], ps[0], _step(qs), _step(ps), hbar)


def _lattice_indices(psi, qs):
    idx = (np.asarray(qs, dtype=float) - psi.x0) / psi.dx
    iidx = np.rint(idx).astype(int)
    if np.any(np.abs(idx - iidx) > 1e-6) or iidx.min() < 0 or iidx.max() >= len(psi.samples):
        raise ValueError("cross_wigner needs q values on the signal grid")
    return iidx


def fft_momenta(psi, pad=2):
    """Momentum grid produced by the FFT route of :func:`cross_wigner`."""
    L = pad * 2 * len(psi.samples)
    dp = math.pi * psi.hbar / (psi.dx * L)
    return dp * (np.arange(L) - L // 2)


def cross_wigner(psi, phi, qs=None, ps=None, pad=2):
    """Cross-Wigner function W(psi, phi)(q,p) = (2 pi hbar)^-1 int e^{ipy/hbar} psi(q-y/2) conj(phi(q+y/2)) dy.

    ``qs`` must be nodes of the shared signal grid (default: all of them).
    With ``ps=None`` each q-row is transformed by a zero-padded FFT and the
    natural momentum grid :func:`fft_momenta` is returned; otherwise the
    same sums are evaluated directly at the requested momenta.
    """
    _check_same_grid(psi, phi)
    hbar, dx = psi.hbar, psi.dx
    n = len(psi.samples)
    qs = psi.x if qs is None else np.atleast_1d(np.asarray(qs, dtype=float))
    j = _lattice_indices(psi, qs)
    s = np.arange(-(n - 1), n)
    lo = j[:, None] - s[None, :]
    hi = j[:, None] + s[None, :]
    ok = (lo >= 0) & (lo < n) & (hi >= 0) & (hi < n)
    C = np.zeros(lo.shape, dtype=complex)
    C[ok] = psi.samples[lo[ok]] * np.conj(phi.samples[hi[ok]])
    scale = 2 * dx / (2 * math.pi * hbar)
    if ps is None:
        ps = fft_momenta(psi, pad)
        L = len(ps)
        buf = np.zeros((len(qs), L), dtype=complex)
        buf[:, s % L] = C
        vals = np.fft.fftshift(np.fft.ifft(buf, axis=1) * L, axes=1) * scale
    else:
        ps = np.atleast_1d(np.asarray(ps, dtype=float))
        if ps.max() - ps.min() > math.pi * hbar / dx:
            warnings.warn("momentum range exceeds the alias-free band pi*hbar/dx", stacklevel=2)
        E = np.exp(2j * dx * np.outer(s, ps) / hbar)
        vals = (C @ E) * scale
    return PhaseField(vals, qs[0], ps[0], _step(qs), _step(ps), hbar)


def wigner(psi, qs=None, ps=None, pad=2):
    """Wigner function W_psi; the tiny imaginary residue is dropped."""
    W = cross_wigner(psi, psi, qs, ps, pad)
    resid = np.abs(W.values.imag).max()
    if resid > 1e-8 * max(1.0, np.abs(W.values.real).max()):
        warnings.warn(f"Wigner function has imaginary residue {resid:.3g}", stacklevel=2)
    return W.with_values(W.values.real)


def spectrogram(psi, window, qs, ps):
    """S^u_psi = |V_u psi|^2."""
    V = stft(psi, window, qs, ps)
    return V.with_values(np.abs(V.values) ** 2)


def husimi(psi, qs, ps):
    """Husimi function: spectrogram with the Gaussian window phi_0."""
    return spectrogram(psi, hermite_window(0, psi.hbar), qs, ps)


def husimi_by_convolution(psi, qs, ps, pad=2):
    """Husimi function as W_psi smoothed by (pi hbar)^-1 exp(-|z|^2/hbar).

    Independent of the STFT route; the Gaussian is separable so the
    convolution is two matrix products against the FFT-grid Wigner function.
    """
    hbar = psi.hbar
    W = wigner(psi, pad=pad)
    qs = np.atleast_1d(np.asarray(qs, dtype=float))
    ps = np.atleast_1d(np.asarray(ps, dtype=float))
    Gq = np.exp(-((qs[:, None] - W.qs[None, :]) ** 2) / hbar) * W.dq
    Gp = np.exp(-((ps[:, None] - W.ps[None, :]) ** 2) / hbar) * W.dp
    vals = Gq @ W.values @ Gp.T / (math.pi * hbar)
    return PhaseField(vals, qs[0], ps[0], _step(qs), _step(ps), hbar)


def convolve(field, kernel):
    """(field * kernel)(z) on field's grid; ``kernel`` is a callable k(q, p).

    The kernel is sampled on a centred grid with field's spacings and the
    convolution done by FFT.
    """
    nq, npp = field.values.shape
    kq = field.dq * np.arange(-(nq - 1), nq)
    kp = field.dp * np.arange(-(npp - 1), npp)
    K = kernel(kq[:, None], kp[None, :])
    vals = fftconvolve(field.values, K, mode="full")[nq - 1: 2 * nq - 1, npp - 1: 2 * npp - 1]
    return field.with_values(vals * field.dq * field.dp)


# -- grid calculus ------------------------------------------------------------

def _d1(f, h, axis):
    """First derivative, 4th-order central differences, 4th-order one-sided at edges."""
    f = np.moveaxis(np.asarray(f), axis, 0)
    n = f.shape[0]
    if n < 5:
        raise ValueError("need at least 5 points along each axis for the stencil")
    out = np.empty_like(f)
    out[2:-2] = (f[:-4] - 8 * f[1:-3] + 8 * f[3:-1] - f[4:]) / (12 * h)
    out[0] = (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12 * h)
    out[1] = (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]) / (12 * h)
    out[-1] = (25 * f[-1] - 48 * f[-2] + 36 * f[-3] - 16 * f[-4] + 3 * f[-5]) / (12 * h)
    out[-2] = (3 * f[-1] + 10 * f[-2] - 18 * f[-3] + 6 * f[-4] - f[-5]) / (12 * h)
    return np.moveaxis(out, 0, axis)


def partial(field, nq=0, np_=0):
    """Mixed partial derivative d^nq/dq^nq d^np/dp^np of a field, as an array."""
    v = field.values
    for _ in range(nq):
        v = _d1(v, field.dq, 0)
    for _ in range(np_):
        v = _d1(v, field.dp, 1)
    return v


def gradient(field):
    return partial(field, 1, 0), partial(field, 0, 1)


def poisson_bracket(a, b):
    """{a, b} = d_q a d_p b - d_p a d_q b."""
    _check_same_field(a, b)
    aq, ap = gradient(a)
    bq, bp = gradient(b)
    return a.with_values(aq * bp - ap * bq)


def weighted_laplacian(a, k):
    """(2k+1) (d_q^2 + d_p^2) a, the d = 1 case of <grad, diag(2k+1, 2k+1) grad>."""
    (k,) = multi_index(k)
    return a.with_values((2 * k + 1) * (partial(a, 2, 0) + partial(a, 0, 2)))


def weighted_gradient_pair(a, b, k):
    """<grad_(k) a, grad_(k) b> with grad_(k) = sqrt(2k+1) grad."""
    _check_same_field(a, b)
    (k,) = multi_index(k)
    aq, ap = gradient(a)
    bq, bp = gradient(b)
    return a.with_values((2 * k + 1) * (aq * bq + ap * bp))
