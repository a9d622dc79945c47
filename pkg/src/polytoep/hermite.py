"""Hermite functions, Laguerre polynomials and Gauss-Hermite quadrature.

All Hermite functions use the hbar-scaled physicists' normalization

    phi_k(x) = (pi hbar)^(-1/4) (2^k k!)^(-1/2) H_k(x / sqrt(hbar)) exp(-x^2 / 2 hbar),

which makes them the unit-norm eigenfunctions of -hbar^2/2 d^2/dx^2 + x^2/2
with eigenvalues hbar (k + 1/2).
"""
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_hermite


def multi_index(k):
    """Return ``k`` as a tuple of non-negative ints (scalars become 1-tuples)."""
    if np.isscalar(k):
        k = (k,)
    k = tuple(int(v) for v in k)
    if any(v < 0 for v in k):
        raise ValueError(f"multi-index entries must be non-negative, got {k}")
    return k


def check_hbar(hbar):
    hbar = float(hbar)
    if not hbar > 0:
        raise ValueError(f"hbar must be positive, got {hbar}")
    if hbar > 1:
        warnings.warn(f"hbar={hbar} is outside (0, 1]", stacklevel=3)
    return hbar


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights for int f(x) exp(-x^2) dx."""

    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, f):
        return np.sum(self.weights * f(self.nodes))

    def scaled(self, hbar):
        """Rule for plain integrals int g(x) dx of Gaussian-like g at scale sqrt(hbar).

        Returns (x, w) with int g dx ~ sum w * g(x); the Gaussian weight is
        folded into ``w``.
        """
        s = math.sqrt(hbar)
        x = s * self.nodes
        w = s * self.weights * np.exp(self.nodes**2)
        return x, w


def gauss_hermite(n):
    """Gauss-Hermite rule with ``n`` nodes (exact to degree 2n-1).

    For large ``n`` the outermost weights are below the float64 range and
    come back as 0.
    """
    n = int(n)
    if not 1 <= n <= 512:
        raise ValueError(f"n must be in [1, 512], got {n}")
    x, w = roots_hermite(n)
    return QuadratureRule(np.asarray(x), np.asarray(w))


def hermite_functions(n, hbar, x):
    """Values of phi_0 .. phi_{n-1} at ``x``; shape ``(n,) + x.shape``.

    Uses the normalized three-term recurrence, which never forms H_k itself.
    Fine up to k ~ 300; see :func:`hermite_fn` beyond that.
    """
    hbar = check_hbar(hbar)
    x = np.asarray(x, dtype=float)
    if np.isnan(x).any():
        raise ValueError("NaN in evaluation points")
    s = x / math.sqrt(hbar)
    out = np.empty((n,) + x.shape)
    if n == 0:
        return out
    out[0] = (math.pi * hbar) ** -0.25 * np.exp(-0.5 * s**2)
    if n > 1:
        out[1] = math.sqrt(2.0) * s * out[0]
    for k in range(1, n - 1):
        out[k + 1] = math.sqrt(2.0 / (k + 1)) * s * out[k] - math.sqrt(k / (k + 1)) * out[k - 1]
    return out


def _hermite_1d(k, hbar, x):
    if k <= 300:
        return hermite_functions(k + 1, hbar, x)[k]
    # log-scaled recurrence: carry a per-point exponent so exp(-s^2/2) never underflows first
    s = x / math.sqrt(hbar)
    logscale = -0.25 * math.log(math.pi * hbar) - 0.5 * s**2
    prev = np.zeros_like(s)
    cur = np.ones_like(s)
    for j in range(k):
        nxt = math.sqrt(2.0 / (j + 1)) * s * cur - math.sqrt(j / (j + 1)) * prev
        prev, cur = cur, nxt
        big = np.abs(cur) > 1e150
        if big.any():
            cur[big] *= 1e-150
            prev[big] *= 1e-150
            logscale[big] += 150 * math.log(10.0)
    with np.errstate(under="ignore"):
        return cur * np.exp(logscale)


def hermite_fn(k, hbar, x):
    """Tensor Hermite function phi_k at points ``x``.

    ``x`` has trailing axis of length ``len(k)`` when ``len(k) > 1``; for
    ``d = 1`` a plain array of points is accepted.
    """
    k = multi_index(k)
    hbar = check_hbar(hbar)
    x = np.asarray(x, dtype=float)
    if np.isnan(x).any():
        raise ValueError("NaN in evaluation points")
    if len(k) == 1:
        if x.ndim and x.shape[-1] == 1 and x.ndim > 1:
            x = x[..., 0]
        return _hermite_1d(k[0], hbar, x)
    if x.shape[-1] != len(k):
        raise ValueError(f"points have dimension {x.shape[-1]}, multi-index has {len(k)}")
    out = np.ones(x.shape[:-1])
    for j, kj in enumerate(k):
        out = out * _hermite_1d(kj, hbar, x[..., j])
    return out


def laguerre(n, m, x):
    """Generalized Laguerre polynomial L_n^{(m)}(x) by upward recurrence.

    ``m`` may be a negative integer as long as ``n + m >= 0``; the recurrence
    is a polynomial identity in the parameter, so it covers that branch too.
    """
    n = int(n)
    if n < 0:
        raise ValueError("n must be non-negative")
    if float(m) == int(m) and n + int(m) < 0:
        raise ValueError(f"need n + m >= 0, got n={n}, m={m}")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev
    cur = 1.0 + m - x
    for j in range(1, n):
        prev, cur = cur, ((2 * j + 1 + m - x) * cur - (j + m) * prev) / (j + 1)
    return cur


def laguerre_table(nmax, m, x):
    """All L_j^{(m)}(x), j = 0..nmax, stacked on a new leading axis."""
    x = np.asarray(x, dtype=float)
    out = np.empty((nmax + 1,) + x.shape)
    out[0] = 1.0
    if nmax >= 1:
        out[1] = 1.0 + m - x
    for j in range(1, nmax):
        out[j + 1] = ((2 * j + 1 + m - x) * out[j] - (j + m) * out[j - 1]) / (j + 1)
    return out


def pochhammer(a, j):
    out = 1.0
    for i in range(j):
        out *= a + i
    return out


def hyp2f1_terminating(a, k, c, x):
    """2F1(a, -k; c; x) as the finite sum over j = 0..k."""
    if int(k) != k or k < 0:
        raise ValueError("second parameter must be -k with integer k >= 0")
    k = int(k)
    if float(c) == int(c) and c <= 0 and -c < k:
        raise ValueError(f"c={c} hits a zero Pochhammer denominator before the series ends")
    total = 0.0
    term = 1.0
    for j in range(k + 1):
        total += term
        term *= (a + j) * (-k + j) / ((c + j) * (j + 1)) * x
    return total


def hermite_wigner_closed(k, hbar, z):
    """Wigner function of phi_k from its Laguerre closed form.

    ``z`` has trailing axis of length ``2d`` ordered (q_1, p_1, ..., q_d, p_d).
    """
    k = multi_index(k)
    hbar = check_hbar(hbar)
    z = np.asarray(z, dtype=float)
    d = len(k)
    if z.shape[-1] != 2 * d:
        raise ValueError(f"expected trailing dimension {2 * d}, got {z.shape[-1]}")
    out = np.full(z.shape[:-1], (math.pi * hbar) ** (-d) * (-1.0) ** sum(k))
    for j, kj in enumerate(k):
        r2 = z[..., 2 * j] ** 2 + z[..., 2 * j + 1] ** 2
        out = out * np.exp(-r2 / hbar) * laguerre(kj, 0, 2.0 * r2 / hbar)
    return out


def hermite_cross_wigner(n, hbar, q, p):
    """Cross-Wigner functions W(phi_m, phi_l)(q, p) for all m, l < n.

    Returns an array of shape ``(n, n) + q.shape`` indexed ``[m, l]``.  For
    ``m >= l``

        W(phi_m, phi_l) = (-1)^l / (pi hbar) sqrt(l!/m!) (sqrt(2/hbar)(q - ip))^(m-l)
                          exp(-r^2/hbar) L_l^{(m-l)}(2 r^2 / hbar)

    and the other triangle follows from W(phi_l, phi_m) = conj W(phi_m, phi_l).
    """
    hbar = check_hbar(hbar)
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    w = math.sqrt(2.0 / hbar) * (q - 1j * p)
    x = 2.0 * (q * q + p * p) / hbar
    env = np.exp(-0.5 * x) / (math.pi * hbar)
    out = np.empty((n, n) + q.shape, dtype=complex)
    for delta in range(n):
        lag = laguerre_table(n - 1 - delta, delta, x)
        wpow = w**delta
        for l in range(n - delta):
            m = l + delta
            c = (-1) ** l * math.exp(0.5 * (math.lgamma(l + 1) - math.lgamma(m + 1)))
            val = c * wpow * env * lag[l]
            out[m, l] = val
            if delta:
                out[l, m] = np.conj(val)
    return out
