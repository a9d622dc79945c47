"""Operator matrices for Weyl, Hermite-localization and polyanalytic Toeplitz quantization.

Every matrix is a truncation to the first ``n`` basis elements with the
left-linear convention M[i, j] = <A e_j, e_i>.  The basis is {phi_j} for
real-plane quantizations and {B_k phi_j} (or {B phi_j}) for the Toeplitz
kinds.  Entries are phase-space quadratures of the symbol against closed-form
basis densities on a uniform grid, so the only discretization error is the
trapezoid rule, which is spectrally accurate here.

Complex-plane symbols m(z) and real-plane symbols a(q, p) are linked by the
flips breve(m)(q, p) = m(q - i p) and hat(u)(z) = u(Re z, -Im z).
"""
import enum
import json
import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import bargmann as bg
from .hermite import check_hbar, hermite_functions, laguerre_table, multi_index
from .phasespace import PhaseField, SignalGrid, _step

MAX_DEGREE = 6
GRID_SPACING = 0.15  # in units of sqrt(hbar)


class Kind(enum.Enum):
    WEYL = "weyl"
    LOCALIZATION = "localization"
    TOEPLITZ = "toeplitz"
    PROJECTED_TOEPLITZ = "projected_toeplitz"
    COMPLEX_WEYL = "complex_weyl"


@dataclass(frozen=True)
class Symbol:
    """A symbol given by an evaluator.

    ``plane="real"`` evaluators take (q, p); ``plane="complex"`` evaluators
    take z.  ``degree`` is the declared polynomial growth (0 for bounded or
    Schwartz symbols); the quadrature radius grows with it.  Evaluators must
    be stateless.
    """

    func: object
    plane: str = "real"
    degree: int = 0
    name: str = ""

    def __post_init__(self):
        if self.plane not in ("real", "complex"):
            raise ValueError(f"unknown plane {self.plane!r}")
        if self.degree > MAX_DEGREE:
            warnings.warn(f"symbol degree {self.degree} exceeds {MAX_DEGREE}; quadrature may truncate", stacklevel=3)

    def __call__(self, *args):
        return self.func(*args)


def as_symbol(a, plane="real"):
    if isinstance(a, Symbol):
        if a.plane != plane:
            raise ValueError(f"expected a {plane}-plane symbol, got {a.plane}")
        return a
    if callable(a):
        return Symbol(a, plane)
    raise TypeError("symbol must be a Symbol, a callable or a PhaseField")


def breve(m):
    """(q, p) -> m(q - i p)."""
    m = as_symbol(m, "complex")
    return Symbol(lambda q, p: m(q - 1j * p), "real", m.degree, f"breve({m.name})")


def hat(u):
    """z -> u(Re z, -Im z)."""
    u = as_symbol(u, "real")
    return Symbol(lambda z: u(np.real(z), -np.imag(z)), "complex", u.degree, f"hat({u.name})")


@dataclass
class OperatorMatrix:
    entries: np.ndarray
    kind: Kind
    window_k: tuple = None
    hbar: float = 1.0

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=complex)
        if self.entries.ndim != 2 or self.entries.shape[0] != self.entries.shape[1]:
            raise ValueError("operator matrix must be square")
        if not np.isfinite(self.entries).all():
            raise ValueError("non-finite operator matrix entries")
        self.kind = Kind(self.kind)
        if self.kind in (Kind.WEYL, Kind.COMPLEX_WEYL):
            if self.window_k is not None:
                raise ValueError(f"{self.kind.value} matrices carry no window")
        elif self.window_k is None:
            raise ValueError(f"{self.kind.value} matrices need a window index")
        else:
            self.window_k = multi_index(self.window_k)

    @property
    def basis_size(self):
        return self.entries.shape[0]

    def block(self, n):
        return self.entries[:n, :n]

    def hermitian_defect(self):
        return float(np.abs(self.entries - self.entries.conj().T).max())

    def __matmul__(self, other):
        return self.entries @ other.entries


# -- grids ---------------------------------------------------------------------

def quadrature_axis(n, hbar, degree=0, spacing=GRID_SPACING):
    """Symmetric axis covering basis states below ``n``; radius grows with ``degree``."""
    hbar = check_hbar(hbar)
    radius = math.sqrt(2 * hbar * (2 * n + 1)) + (6 + 0.5 * degree) * math.sqrt(hbar)
    points = max(96, int(math.ceil(2 * radius / (spacing * math.sqrt(hbar)))) + 1)
    points += 1 - points % 2  # odd, so the origin is a node
    return np.linspace(-radius, radius, points)


def symbol_field(a, n, hbar, degree=None):
    """Sample a real-plane symbol on the default quadrature grid as a PhaseField."""
    a = as_symbol(a, "real")
    ax = quadrature_axis(n, hbar, a.degree if degree is None else degree)
    return PhaseField.from_function(a, ax, ax, hbar)


def complex_symbol_field(m, n, hbar, degree=None):
    """Sample m(z) on the default grid; the PhaseField axes are (Re z, Im z)."""
    m = as_symbol(m, "complex")
    ax = quadrature_axis(n, hbar, m.degree if degree is None else degree)
    Z = ax[:, None] + 1j * ax[None, :]
    return PhaseField(np.broadcast_to(m(Z), Z.shape).copy(), ax[0], ax[0], _step(ax), _step(ax), hbar)


def _sampled(a, n, hbar, plane):
    """Return (field values, PhaseField grid) for a symbol or an already-sampled field."""
    if isinstance(a, PhaseField):
        if not math.isclose(a.hbar, hbar):
            raise ValueError("symbol field carries a different hbar")
        f = a
    elif plane == "real":
        f = symbol_field(a, n, hbar)
    else:
        f = complex_symbol_field(a, n, hbar)
    _edge_check(f, n, hbar)
    return f


def _edge_check(f, n, hbar):
    """Warn if the symbol times the basis envelope is still sizable at the grid boundary."""
    Q, P = f.mesh()
    r = np.hypot(Q, P)
    r_n = math.sqrt(2 * hbar * (2 * n + 1))
    edge = min(abs(f.qs[0]), abs(f.qs[-1]), abs(f.ps[0]), abs(f.ps[-1]))
    if edge < r_n:
        warnings.warn("quadrature grid does not cover the basis states", stacklevel=4)
        return
    band = r >= edge - math.sqrt(hbar)
    ref = max(np.abs(f.values[r <= r_n]).max(initial=0.0), 1e-300)
    tail = np.abs(f.values[band]) * np.exp(-((r[band] - r_n) ** 2) / hbar)
    if tail.size and tail.max() > 1e-9 * max(ref, 1.0):
        warnings.warn("symbol grows faster than the quadrature grid covers", stacklevel=4)


# -- matrices --------------------------------------------------------------------

def weyl_matrix(a, n, hbar):
    """M[i, j] = <op(a) phi_j, phi_i> = int a W(phi_j, phi_i) by phase-space quadrature."""
    hbar = check_hbar(hbar)
    f = _sampled(a, n, hbar, "real")
    return OperatorMatrix(_weyl_entries(f, n, hbar), Kind.WEYL, None, hbar)


def _weyl_entries(f, n, hbar):
    Q, P = f.mesh()
    q, p, av = Q.ravel(), P.ravel(), f.values.ravel() * (f.dq * f.dp)
    w = math.sqrt(2.0 / hbar) * (q - 1j * p)
    x = 2.0 * (q * q + p * p) / hbar
    env = np.exp(-0.5 * x) / (math.pi * hbar)
    M = np.empty((n, n), dtype=complex)
    for delta in range(n):
        # W(phi_{l+delta}, phi_l) for all l at once, from the Laguerre closed form
        ls = np.arange(n - delta)
        c = (-1.0) ** ls * np.exp(0.5 * (_lgamma(ls + 1) - _lgamma(ls + delta + 1)))
        V = c[:, None] * laguerre_table(n - 1 - delta, delta, x) * (w**delta * env)
        M[ls, ls + delta] = V @ av
        if delta:
            M[ls + delta, ls] = np.conj(V) @ av
    return M


def _lgamma(v):
    return np.array([math.lgamma(t) for t in np.atleast_1d(v)])


def stft_hermite_table(k, n, hbar, q, p):
    """V_{phi_k} phi_j(q, p) for j < n from the special-Hermite closed form, shape (n,) + q.shape."""
    z = np.asarray(q) - 1j * np.asarray(p)
    ph = np.exp(-1j * p * q / (2 * hbar) - (q * q + p * p) / (4 * hbar))
    return bg.special_hermite_table(k, n, hbar, z) * ph


def localization_matrix(a, k, n, hbar):
    """M[i, j] = int a V_{phi_k} phi_j conj(V_{phi_k} phi_i) dz (Hermite-window anti-Wick)."""
    hbar = check_hbar(hbar)
    k = multi_index(k)
    f = _sampled(a, n, hbar, "real")
    Q, P = f.mesh()
    S = stft_hermite_table(k, n, hbar, Q.ravel(), P.ravel())
    M = np.conj(S) @ (S * f.values.ravel()).T * (f.dq * f.dp)
    return OperatorMatrix(M, Kind.LOCALIZATION, k, hbar)


def fock_multiplier_matrix(m, k, n, hbar):
    """<m B_k phi_j, B_k phi_i>_{L^2_Phi}: the matrix of B_k^* m B_k in the Hermite basis.

    Computed by quadrature over the complex plane (axes Re z, Im z).
    """
    hbar = check_hbar(hbar)
    k = multi_index(k)
    f = _sampled(m, n, hbar, "complex")
    X, Y = f.mesh()
    z = (X + 1j * Y).ravel()
    S = bg.special_hermite_table(k, n, hbar, z) * np.exp(-np.abs(z) ** 2 / (4 * hbar))
    return np.conj(S) @ (S * f.values.ravel()).T * (f.dq * f.dp)


def toeplitz_matrix(m, k, n, hbar):
    """T_k(m) = P_k m P_k in the basis {B_k phi_j}."""
    return OperatorMatrix(fock_multiplier_matrix(m, k, n, hbar), Kind.TOEPLITZ, multi_index(k), check_hbar(hbar))


def projected_toeplitz_matrix(m, k, n, hbar, spacing=0.3):
    """T_{k,0}(m) = B B_k^* m B_k B^* in the analytic basis {B phi_j}.

    Evaluated through the transforms themselves: B_k phi_j is sampled on a
    Fock grid, multiplied by m, sent back with B_k^* and paired with phi_i.
    """
    hbar = check_hbar(hbar)
    k = multi_index(k)
    m = as_symbol(m, "complex")
    ax = quadrature_axis(n, hbar, m.degree, spacing=spacing)
    xs = quadrature_axis(n, hbar, 0, spacing=GRID_SPACING)
    phis = hermite_functions(n, hbar, xs)
    Z = ax[:, None] + 1j * ax[None, :]
    mz = m(Z)
    M = np.empty((n, n), dtype=complex)
    for j in range(n):
        F = bg.FockField(mz * bg.special_hermite_basis(k, j, hbar, Z), ax[0], ax[0], _step(ax), _step(ax), hbar)
        back = bg.poly_bargmann_adjoint(k, F, xs).samples
        M[:, j] = phis @ back * _step(xs)
    return OperatorMatrix(M, Kind.PROJECTED_TOEPLITZ, k, hbar)


# -- kappa ------------------------------------------------------------------------

def kappa(x, xi):
    """Point of the Lagrangian Lambda over (x, xi): (zeta, -(i/2) conj(zeta)) with zeta = -x + i xi."""
    zeta = -np.asarray(x) + 1j * np.asarray(xi)
    return zeta, -0.5j * np.conj(zeta)


def kappa_inverse(zeta):
    zeta = np.asarray(zeta, dtype=complex)
    return -zeta.real, zeta.imag


def kappa_pullback(a):
    """(x, xi) -> a(zeta(x, xi)) for a symbol on Lambda given in the parameter zeta."""
    a = as_symbol(a, "complex")
    return Symbol(lambda x, xi: a(kappa(x, xi)[0]), "real", a.degree, f"kappa*({a.name})")


def kappa_pushforward(u):
    """Inverse of :func:`kappa_pullback`: zeta -> u(kappa^{-1}(zeta))."""
    u = as_symbol(u, "real")
    return Symbol(lambda zeta: u(*kappa_inverse(zeta)), "complex", u.degree, f"kappa_*({u.name})")


def complex_weyl_matrix(a, n, hbar):
    """op_Phi(a) in the basis {B phi_j}, defined as the Weyl matrix of the kappa pullback."""
    M = weyl_matrix(kappa_pullback(a), n, hbar)
    return OperatorMatrix(M.entries, Kind.COMPLEX_WEYL, None, M.hbar)


def antiholo_weyl_check(p, N, n, hbar):
    """max |op(breve p) - sum_j (-1)^j C_{N-1,j} B_j^* p B_j| over the n x n matrices.

    ``p`` is a holomorphic polynomial (callable of z) of degree at most N - 1.
    """
    from .calculus import spec_coefficients

    p = as_symbol(p, "complex")
    lhs = weyl_matrix(breve(p), n, hbar).entries
    coeffs = spec_coefficients(N, 1).values
    rhs = sum((-1) ** j * coeffs[j] * fock_multiplier_matrix(p, j, n, hbar) for j in range(N))
    return float(np.abs(lhs - rhs).max())


# -- .opm / CSV ------------------------------------------------------------------

def save_opm(M, path):
    """Write a ``.opm`` file: one JSON header line, then row-major little-endian f64 re/im pairs."""
    header = {
        "format": "opm",
        "version": 1,
        "kind": M.kind.value,
        "window_k": None if M.window_k is None else list(M.window_k),
        "hbar": M.hbar,
        "basis_size": M.basis_size,
    }
    with open(path, "wb") as fh:
        fh.write(json.dumps(header).encode() + b"\n")
        fh.write(np.ascontiguousarray(M.entries, dtype="<c16").tobytes())


def load_opm(path):
    with open(path, "rb") as fh:
        blob = fh.read()
    head, _, payload = blob.partition(b"\n")
    h = json.loads(head)
    if h.get("format") != "opm":
        raise ValueError(f"{path} is not a .opm file")
    n = h["basis_size"]
    entries = np.frombuffer(payload, dtype="<c16").reshape(n, n).copy()
    wk = None if h["window_k"] is None else tuple(h["window_k"])
    return OperatorMatrix(entries, Kind(h["kind"]), wk, h["hbar"])


def opm_to_csv(M, path):
    """Write ``i,j,re,im`` rows for matrices up to 16 x 16."""
    if M.basis_size > 16:
        raise ValueError("CSV export is for matrices up to 16 x 16")
    with open(path, "w") as fh:
        fh.write("i,j,re,im\n")
        for i in range(M.basis_size):
            for j in range(M.basis_size):
                e = M.entries[i, j]
                fh.write(f"{i},{j},{e.real:.17g},{e.imag:.17g}\n")
