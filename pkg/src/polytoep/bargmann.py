"""Analytic and polyanalytic Bargmann transforms on sampled Fock planes.

A :class:`FockField` stores the plain values F(z); the Gaussian weight
exp(-|z|^2 / 2 hbar) of L^2_Phi is applied inside every inner product and
norm, never baked into the samples (``weight_applied`` is False for every
producer in this module).

Orientation: the polyanalytic transforms are read off the Hermite-window
STFT through

    V_{phi_k} f(q, -p) = exp(i p q / 2 hbar - |z|^2 / 4 hbar) B_k f(z),   z = q + i p,

so phase-space fields are flipped in p exactly here and nowhere else.
"""
import json
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from . import phasespace
from .hermite import check_hbar, hermite_functions, laguerre, multi_index
from .phasespace import SignalGrid, _d1, _step


@dataclass
class FockField:
    """Samples of F on the grid z = (re0 + i*dre) + 1j*(im0 + j*dim)."""

    values: np.ndarray
    re0: float
    im0: float
    dre: float
    dim: float
    hbar: float
    weight_applied: bool = False

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.ndim != 2:
            raise ValueError("FockField values must be a matrix")
        if not np.isfinite(self.values).all():
            raise ValueError("non-finite entries in FockField")
        self.hbar = check_hbar(self.hbar)

    @classmethod
    def from_function(cls, f, re, im, hbar):
        re = np.asarray(re, dtype=float)
        im = np.asarray(im, dtype=float)
        Z = re[:, None] + 1j * im[None, :]
        return cls(np.broadcast_to(f(Z), Z.shape).copy(), re[0], im[0], _step(re), _step(im), hbar)

    @property
    def re(self):
        return self.re0 + self.dre * np.arange(self.values.shape[0])

    @property
    def im(self):
        return self.im0 + self.dim * np.arange(self.values.shape[1])

    @property
    def z(self):
        return self.re[:, None] + 1j * self.im[None, :]

    def weight(self):
        return np.exp(-np.abs(self.z) ** 2 / (2 * self.hbar))

    def unweighted(self):
        if not self.weight_applied:
            return self.values
        return self.values * np.exp(np.abs(self.z) ** 2 / (4 * self.hbar))

    def inner(self, other):
        """<F, G>_{L^2_Phi} = int F conj(G) exp(-|z|^2/2hbar) dz (left-linear)."""
        _check_same_plane(self, other)
        return np.sum(self.unweighted() * np.conj(other.unweighted()) * self.weight()) * self.dre * self.dim

    def norm(self):
        return math.sqrt(abs(self.inner(self)))

    def with_values(self, values):
        return FockField(values, self.re0, self.im0, self.dre, self.dim, self.hbar, False)

    def __add__(self, other):
        _check_same_plane(self, other)
        return self.with_values(self.unweighted() + other.unweighted())

    def __mul__(self, c):
        return self.with_values(c * self.unweighted())

    __rmul__ = __mul__


def _check_same_plane(a, b):
    if a.values.shape != b.values.shape or not np.allclose(
        [a.re0, a.im0, a.dre, a.dim], [b.re0, b.im0, b.dre, b.dim]
    ):
        raise ValueError("Fock fields live on different grids")
    if not math.isclose(a.hbar, b.hbar):
        raise ValueError("Fock fields carry different hbar")


def fock_axis(hbar, n_max=16, points=None, margin=6.0, spacing=0.15):
    """Symmetric axis for Re z or Im z covering states up to ``n_max``."""
    return phasespace.default_axis(hbar, n_max, points, margin, spacing)


def bargmann(psi, re, im):
    """B psi(z) = (2 pi hbar)^(-1/2) (pi hbar)^(-1/4) int psi(x) exp((xz - z^2/4 - x^2/2)/hbar) dx."""
    hbar = psi.hbar
    re = np.asarray(re, dtype=float)
    im = np.asarray(im, dtype=float)
    x = psi.x
    # the integrand is centred at x = Re z; beyond the signal grid it is truncated
    if np.abs(re).max() > np.abs(x).max():
        warnings.warn("|Re z| exceeds the reliable radius of the signal grid", stacklevel=2)
    z = (re[:, None] + 1j * im[None, :]).ravel()
    expo = (np.outer(z, x) - 0.25 * z[:, None] ** 2 - 0.5 * x[None, :] ** 2) / hbar
    c = (2 * math.pi * hbar) ** -0.5 * (math.pi * hbar) ** -0.25 * psi.dx
    vals = c * (np.exp(expo) @ psi.samples)
    return FockField(vals.reshape(len(re), len(im)), re[0], im[0], _step(re), _step(im), hbar)


def bargmann_adjoint(F, xs):
    """B* F(x) by quadrature of the explicit adjoint kernel over F's grid."""
    hbar = F.hbar
    xs = np.asarray(xs, dtype=float)
    w = F.z.ravel()
    wb = np.conj(w)
    expo = (-((wb[None, :] - xs[:, None]) ** 2) / 2 + wb[None, :] ** 2 / 4 - np.abs(w[None, :]) ** 2 / 2) / hbar
    c = (2 * math.pi * hbar) ** -0.5 * (math.pi * hbar) ** -0.25 * F.dre * F.dim
    vals = c * (np.exp(expo) @ F.unweighted().ravel())
    return SignalGrid(vals, xs[0], _step(xs), hbar)


def poly_bargmann(k, psi, re, im):
    """B_k psi on the grid, read off the phi_k-window STFT at (q, -p)."""
    (k,) = multi_index(k)
    hbar = psi.hbar
    re = np.asarray(re, dtype=float)
    im = np.asarray(im, dtype=float)
    V = phasespace.stft(psi, phasespace.hermite_window(k, hbar), re, -im)
    Q, P = re[:, None], im[None, :]
    vals = np.exp(-1j * P * Q / (2 * hbar) + (Q**2 + P**2) / (4 * hbar)) * V.values
    return FockField(vals, re[0], im[0], _step(re), _step(im), hbar)


def poly_bargmann_adjoint(k, F, xs):
    """B_k* F as V_{phi_k}^* applied to the phase-space pullback of F."""
    (k,) = multi_index(k)
    hbar = F.hbar
    xs = np.asarray(xs, dtype=float)
    re, im = F.re, F.im
    Z = F.z
    G = np.exp(1j * re[:, None] * im[None, :] / (2 * hbar) - np.abs(Z) ** 2 / (4 * hbar)) * F.unweighted()
    T = G @ np.exp(-1j * np.outer(im, xs) / hbar)
    win = hermite_functions(k + 1, hbar, xs[None, :] - re[:, None])[k]
    vals = np.sum(win * T, axis=0) * F.dre * F.dim / math.sqrt(2 * math.pi * hbar)
    return SignalGrid(vals, xs[0], _step(xs), hbar)


def _special_hermite_1d(ell, m, hbar, z):
    x = np.abs(z) ** 2 / (2 * hbar)
    if m >= ell:
        c = math.exp(0.5 * (math.lgamma(ell + 1) - math.lgamma(m + 1)) - 0.5 * math.log(2 * math.pi * hbar))
        return c * (z / math.sqrt(2 * hbar)) ** (m - ell) * laguerre(ell, m - ell, x)
    c = math.exp(0.5 * (math.lgamma(m + 1) - math.lgamma(ell + 1)) - 0.5 * math.log(2 * math.pi * hbar))
    return (-1) ** (ell - m) * c * (np.conj(z) / math.sqrt(2 * hbar)) ** (ell - m) * laguerre(m, ell - m, x)


def special_hermite_basis(ell, m, hbar, z):
    """B_ell phi_m(z) in closed form.

    For m >= ell this is sqrt(ell!/m!) (2 pi hbar)^(-1/2) (z/sqrt(2hbar))^(m-ell)
    L_ell^{(m-ell)}(|z|^2/2hbar); for m < ell the roles swap, z becomes
    conj(z) and a sign (-1)^(ell-m) appears.  Constants give unit L^2_Phi
    norm and match :func:`poly_bargmann` applied to phi_m.
    """
    ell = multi_index(ell)
    m = multi_index(m)
    hbar = check_hbar(hbar)
    if len(ell) != len(m):
        raise ValueError("ell and m must have the same length")
    z = np.asarray(z, dtype=complex)
    if len(ell) == 1:
        return _special_hermite_1d(ell[0], m[0], hbar, z)
    out = np.ones(z.shape[:-1], dtype=complex)
    for j in range(len(ell)):
        out = out * _special_hermite_1d(ell[j], m[j], hbar, z[..., j])
    return out


def special_hermite_table(k, n, hbar, z):
    """B_k phi_m(z) for m = 0..n-1, shape ``(n,) + z.shape`` (d = 1)."""
    (k,) = multi_index(k)
    z = np.asarray(z, dtype=complex)
    return np.stack([_special_hermite_1d(k, m, hbar, z) for m in range(n)])


def reproducing_kernel(k, z, w, hbar):
    """rho^k(z, w) = (2 pi hbar)^(-d) prod_j L_{k_j}(|z_j - w_j|^2 / 2hbar) exp(conj(z).w / 2hbar)."""
    k = multi_index(k)
    hbar = check_hbar(hbar)
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    d = len(k)
    if d == 1:
        z = z[..., None]
        w = w[..., None]
    out = (2 * math.pi * hbar) ** (-d) * np.exp(np.sum(np.conj(z) * w, axis=-1) / (2 * hbar))
    for j, kj in enumerate(k):
        out = out * laguerre(kj, 0, np.abs(z[..., j] - w[..., j]) ** 2 / (2 * hbar))
    return out


def bergman_project(F, k):
    """P_k F(z) = <F, rho^k(z, .)>_{L^2_Phi} by kernel quadrature on F's own grid.

    The integrand conj(rho^k(z, w)) exp(-|w|^2/2hbar) factorizes along the
    grid axes once L_k(|z - w|^2 / 2hbar) is expanded in powers of
    (Re z - Re w)^2 and (Im z - Im w)^2, so each term is a pair of small
    matrix products instead of a dense (grid x grid) kernel.
    """
    (k,) = multi_index(k)
    hbar = F.hbar
    re, im = F.re, F.im
    Z = F.z
    M = F.unweighted() * F.dre * F.dim / (2 * math.pi * hbar)
    # exp(z conj(w)/2hbar - |w|^2/2hbar) = exp((z c - c^2)/2hbar) exp((-i z d - d^2)/2hbar), w = c + i d
    A = np.exp((Z[..., None] * re - re**2) / (2 * hbar))
    B = np.exp((-1j * Z[..., None] * im - im**2) / (2 * hbar))
    u = (F.re[:, None, None] - re) ** 2 / (2 * hbar)
    v = (F.im[None, :, None] - im) ** 2 / (2 * hbar)
    out = np.zeros(Z.shape, dtype=complex)
    for i in range(k + 1):
        AM = ((A * u**i).reshape(-1, len(re)) @ M).reshape(B.shape)
        for l in range(k + 1 - i):
            # L_k(x) = sum_j (-1)^j C(k, j) x^j / j!, with x^j expanded binomially
            g = (-1) ** (i + l) * math.comb(k, i + l) / (math.factorial(i) * math.factorial(l))
            out += g * np.sum(AM * B * v**l, axis=-1)
    return F.with_values(out)


def fock_translate(z0, F):
    """Theta_{z0} F(w) = exp(i p q/2hbar - |z0|^2/4hbar + z0 w/2hbar) F(w - conj(z0)).

    Satisfies Theta_{z0} B f = B M_p T_q f with z0 = q + i p.  Lattice-aligned
    shifts are exact; other shifts interpolate the weighted samples
    (cubic), and points that leave the grid are set to 0 with a warning.
    """
    hbar = F.hbar
    q, p = z0.real, z0.imag
    shift = np.conj(z0)
    w = F.z
    si = shift.real / F.dre
    sj = shift.imag / F.dim
    vals = np.zeros(F.values.shape, dtype=complex)
    if abs(si - round(si)) < 1e-9 and abs(sj - round(sj)) < 1e-9:
        si, sj = int(round(si)), int(round(sj))
        n0, n1 = F.values.shape
        i = np.arange(n0) - si
        j = np.arange(n1) - sj
        oki = (i >= 0) & (i < n0)
        okj = (j >= 0) & (j < n1)
        vals[np.ix_(oki, okj)] = F.unweighted()[np.ix_(i[oki], j[okj])]
        inside = oki[:, None] & okj[None, :]
    else:
        Fw = F.unweighted() * np.exp(-np.abs(w) ** 2 / (4 * hbar))
        pts = w - shift
        inside = (pts.real >= F.re[0]) & (pts.real <= F.re[-1]) & (pts.imag >= F.im[0]) & (pts.imag <= F.im[-1])
        xy = np.stack([pts.real[inside], pts.imag[inside]], axis=-1)
        re_i = RegularGridInterpolator((F.re, F.im), Fw.real, method="cubic")(xy)
        im_i = RegularGridInterpolator((F.re, F.im), Fw.imag, method="cubic")(xy)
        vals[inside] = (re_i + 1j * im_i) * np.exp(np.abs(pts[inside]) ** 2 / (4 * hbar))
    if not inside.all():
        warnings.warn("translated field leaves the sampling grid; outside points set to 0", stacklevel=2)
    phase = np.exp((1j * p * q / 2 - abs(z0) ** 2 / 4 + z0 * w / 2) / hbar)
    return F.with_values(phase * vals)


def mixed_norm(F, p=2.0, q=2.0, weight=None):
    """Weighted mixed norm (int (int |F|^p m^p e^{-p|z|^2/4hbar} dRe z)^{q/p} dIm z)^{1/q}."""
    if p < 1 or q < 1:
        raise ValueError("mixed norm needs p, q >= 1")
    G = np.abs(F.unweighted()) * np.exp(-np.abs(F.z) ** 2 / (4 * F.hbar))
    if weight is not None:
        m = np.asarray(weight(F.z), dtype=float)
        if np.any(m <= 0):
            raise ValueError("weight must be positive on the grid")
        G = G * m
    if math.isinf(p):
        inner = G.max(axis=0)
    else:
        inner = (np.sum(G**p, axis=0) * F.dre) ** (1 / p)
    if math.isinf(q):
        return float(inner.max())
    return float((np.sum(inner**q) * F.dim) ** (1 / q))


def dbar(F):
    """Wirtinger derivative (d/dRe + i d/dIm)/2 by 4th-order differences."""
    v = F.unweighted()
    return F.with_values(0.5 * (_d1(v, F.dre, 0) + 1j * _d1(v, F.dim, 1)))


def dz(F):
    """Wirtinger derivative (d/dRe - i d/dIm)/2 by 4th-order differences."""
    v = F.unweighted()
    return F.with_values(0.5 * (_d1(v, F.dre, 0) - 1j * _d1(v, F.dim, 1)))


def kernel_derivative(F, z):
    """F'(z) via the kernel formula (2 hbar)^(-1) <F, w rho(z, w)>_{L^2_Phi}."""
    hbar = F.hbar
    w = F.z
    integrand = F.unweighted() * np.conj(w) * np.exp((z * np.conj(w) - np.abs(w) ** 2) / (2 * hbar))
    return np.sum(integrand) * F.dre * F.dim / (2 * math.pi * hbar) / (2 * hbar)


def multiplex(signals, re, im):
    """Pack signals psi_0..psi_{n-1} into sum_j B_j psi_j (d = 1, so bold-B_j = B_j)."""
    if not signals:
        raise ValueError("need at least one signal")
    out = None
    for j, psi in enumerate(signals):
        Fj = poly_bargmann(j, psi, re, im)
        out = Fj if out is None else out + Fj
    return out


def demultiplex(F, n, xs):
    """Recover n channels by B_j^*; orthogonality of the true polyanalytic spaces does the rest."""
    return [poly_bargmann_adjoint(j, F, xs) for j in range(n)]


def crosstalk(signals, recovered, tol=1e-4):
    """L^2 reconstruction error per channel; warns on any channel above ``tol``."""
    errs = []
    for psi, rec in zip(signals, recovered):
        errs.append(psi.with_samples(psi.samples - rec.samples).norm())
    bad = [j for j, e in enumerate(errs) if e > tol]
    if bad:
        warnings.warn(f"crosstalk above {tol:g} in channels {bad}", stacklevel=2)
    return errs


# -- .fock files ---------------------------------------------------------------

def save_fock(F, path):
    """Write a ``.fock`` file: one JSON header line, then little-endian f64 re/im pairs (row-major)."""
    header = {
        "format": "fock",
        "version": 1,
        "shape": list(F.values.shape),
        "re0": F.re0,
        "im0": F.im0,
        "dre": F.dre,
        "dim": F.dim,
        "hbar": F.hbar,
        "weight_applied": bool(F.weight_applied),
    }
    payload = np.ascontiguousarray(F.values, dtype="<c16").tobytes()
    with open(path, "wb") as fh:
        fh.write(json.dumps(header).encode() + b"\n")
        fh.write(payload)


def load_fock(path):
    with open(path, "rb") as fh:
        blob = fh.read()
    head, _, payload = blob.partition(b"\n")
    h = json.loads(head)
    if h.get("format") != "fock":
        raise ValueError(f"{path} is not a .fock file")
    vals = np.frombuffer(payload, dtype="<c16").reshape(h["shape"])
    return FockField(vals.copy(), h["re0"], h["im0"], h["dre"], h["dim"], h["hbar"], h["weight_applied"])
