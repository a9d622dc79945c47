"""Convergence experiments over an hbar ladder, shared by the CLI and the test-suite.

Each experiment returns a :class:`Report` whose rows carry
(experiment, k, N, hbar, error, slope, rsquared).  Errors are max-norms over
the leading ``basis_size - 4`` block; matrix products are formed at a padded
size first so truncation of the intermediate sum does not leak into that
block.
"""
import json
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import bargmann as bg
from . import calculus as cc
from . import phasespace as ps
from . import quantize as qz

LADDER = (0.2, 0.1, 0.05, 0.025)
EXACT_TOL = 1e-5
PAD = 16
EDGE = 4

# Gaussian test symbols.  Width 2 keeps (2k+1) hbar / width^2 small over the
# whole ladder for k <= 2, so the fits see the asymptotic rate.
WIDTH2 = 4.0


def _test_a(q, p):
    return np.exp(-((q - 0.3) ** 2 + p**2) / WIDTH2)


def _test_b(q, p):
    return np.exp(-(q**2 + (p + 0.2) ** 2 / 1.5) / WIDTH2) * (1 + 0.5 * q)


def _test_m(z):
    return np.exp(-np.abs(z - 0.3) ** 2 / WIDTH2)


def _test_mu(z):
    return np.exp(-np.abs(z + 0.2j) ** 2 / WIDTH2) * (1 + 0.5 * np.conj(z))


# -- symbol registry ---------------------------------------------------------------

def _poly(coeffs):
    pairs = cc.monomials(20)[: len(coeffs)]
    degree = max((s + t for (s, t), c in zip(pairs, coeffs) if c != 0), default=0)

    def f(q, p):
        return sum(c * q**s * p**t for (s, t), c in zip(pairs, coeffs)) + 0 * q

    return qz.Symbol(f, "real", degree, "poly")


REAL_SYMBOLS = {
    "gauss": qz.Symbol(lambda q, p: np.exp(-(q * q + p * p)), "real", 0, "gauss"),
    "wide": qz.Symbol(lambda q, p: np.exp(-(q * q + p * p) / WIDTH2), "real", 0, "wide"),
    "ho": qz.Symbol(lambda q, p: q * q + p * p, "real", 2, "ho"),
    "q": qz.Symbol(lambda q, p: q + 0 * p, "real", 1, "q"),
    "p": qz.Symbol(lambda q, p: p + 0 * q, "real", 1, "p"),
    "qp": qz.Symbol(lambda q, p: q * p, "real", 2, "qp"),
    "one": qz.Symbol(lambda q, p: np.ones(np.broadcast(q, p).shape), "real", 0, "one"),
}

COMPLEX_SYMBOLS = {
    "one": qz.Symbol(lambda z: np.ones(np.shape(z), dtype=complex), "complex", 0, "one"),
    "z": qz.Symbol(lambda z: z + 0j, "complex", 1, "z"),
    "zbar": qz.Symbol(lambda z: np.conj(z), "complex", 1, "zbar"),
    "absz2": qz.Symbol(lambda z: np.abs(z) ** 2 + 0j, "complex", 2, "absz2"),
}


def get_symbol(name, plane="real"):
    """Builtin symbol by id.

    ``poly:c0,c1,...`` lists coefficients of 1, q, p, q^2, qp, p^2, q^3, ...
    (total degree, then descending power of q).  Complex-plane lookups fall
    back to hat() of the real-plane entry.
    """
    if name.startswith("poly:"):
        try:
            coeffs = [float(c) for c in name[5:].split(",") if c.strip()]
        except ValueError:
            raise KeyError(f"bad polynomial coefficients in {name!r}") from None
        if not coeffs:
            raise KeyError("poly: needs at least one coefficient")
        sym = _poly(coeffs)
    elif plane == "complex" and name in COMPLEX_SYMBOLS:
        return COMPLEX_SYMBOLS[name]
    elif name in REAL_SYMBOLS:
        sym = REAL_SYMBOLS[name]
    else:
        raise KeyError(f"unknown symbol {name!r}")
    return sym if plane == "real" else qz.hat(sym)


# -- reports -------------------------------------------------------------------------

@dataclass
class Report:
    experiment: str
    k: int
    N: int
    hbars: list
    errors: list
    fit: object = None
    threshold: str = ""
    passed: bool = False
    notes: list = field(default_factory=list)

    def rows(self):
        slope = math.nan if self.fit is None else self.fit.slope
        r2 = math.nan if self.fit is None else self.fit.rsquared
        return [
            {"experiment": self.experiment, "k": self.k, "N": self.N, "hbar": h, "error": e,
             "slope": slope, "rsquared": r2}
            for h, e in zip(self.hbars, self.errors)
        ]


COLUMNS = ("experiment", "k", "N", "hbar", "error", "slope", "rsquared")


def _fmt(v):
    if isinstance(v, float):
        return "%.17g" % v
    return str(v)


def reports_to_csv(reports):
    lines = [",".join(COLUMNS)]
    for r in reports:
        for row in r.rows():
            lines.append(",".join(_fmt(row[c]) for c in COLUMNS))
    return "\n".join(lines) + "\n"


def reports_to_json(reports):
    recs = [row for r in reports for row in r.rows()]
    for rec in recs:
        for c in ("slope", "rsquared"):
            if isinstance(rec[c], float) and math.isnan(rec[c]):
                rec[c] = None
    return json.dumps(recs, indent=1) + "\n"


def _ladder_map(fn, hbars, jobs):
    if jobs and jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fn, hbars))
    return [fn(h) for h in hbars]


def _finish(rep, target, tol=None, min_slope=None):
    """Attach a fit and decide pass/fail; near-zero errors count as exact."""
    if all(e < EXACT_TOL for e in rep.errors):
        rep.passed = True
        rep.threshold = f"exact: every error < {EXACT_TOL:g}"
        return rep
    rep.fit = cc.fit_rate(rep.hbars, rep.errors)
    if min_slope is not None:
        rep.passed = rep.fit.slope >= min_slope
        rep.threshold = f"slope >= {min_slope:g}"
    else:
        rep.passed = abs(rep.fit.slope - target) <= tol
        rep.threshold = f"|slope - {target:g}| <= {tol:g}"
    return rep


# -- experiments -----------------------------------------------------------------------

def expansion_residual(a, N, n, hbar):
    """max |weyl_via_antiwick - weyl| over the stable block."""
    blk = n - EDGE
    lhs = cc.weyl_via_antiwick_matrix(a, N, n, hbar).entries
    rhs = qz.weyl_matrix(a, n, hbar).entries
    return float(np.abs(lhs - rhs)[:blk, :blk].max())


def expansion_experiment(symbol="wide", N=2, hbars=LADDER, n=32, jobs=1, slope_tol=0.3):
    a = get_symbol(symbol) if isinstance(symbol, str) else symbol
    errs = _ladder_map(lambda h: expansion_residual(a, N, n, h), hbars, jobs)
    name = f"expansion:{symbol if isinstance(symbol, str) else a.name}"
    return _finish(Report(name, 0, N, list(hbars), errs), N, tol=slope_tol)


def localization_composition_residual(k, n, hbar, commutator=False):
    nw, blk = n + PAD, n - EDGE
    a = qz.symbol_field(_test_a, nw, hbar)
    b = qz.symbol_field(_test_b, nw, hbar)
    La = qz.localization_matrix(a, k, nw, hbar).entries
    Lb = qz.localization_matrix(b, k, nw, hbar).entries
    if commutator:
        # (i/hbar)[loc a, loc b] -> loc({b, a}) with {a, b} = a_q b_p - a_p b_q
        lhs = 1j / hbar * (La @ Lb - Lb @ La)
        rhs = qz.localization_matrix(ps.poisson_bracket(b, a), k, nw, hbar).entries
    else:
        lhs = La @ Lb
        rhs = qz.localization_matrix(cc.composition_symbol_2nd(a, b, k, hbar), k, nw, hbar).entries
    return float(np.abs(lhs - rhs)[:blk, :blk].max())


def toeplitz_composition_residual(k, n, hbar):
    nw, blk = n + PAD, n - EDGE
    m = qz.complex_symbol_field(_test_m, nw, hbar)
    mu = qz.complex_symbol_field(_test_mu, nw, hbar)
    Tm = qz.toeplitz_matrix(m, k, nw, hbar).entries
    Tu = qz.toeplitz_matrix(mu, k, nw, hbar).entries
    Tc = qz.toeplitz_matrix(cc.toeplitz_composition_symbol(m, mu, k, hbar), k, nw, hbar).entries
    return float(np.abs(Tm @ Tu - Tc)[:blk, :blk].max())


COMPOSITION_SLOPES = {"localization": 1.7, "toeplitz": 1.7, "commutator": 0.7}


def composition_experiment(kind, k=0, hbars=LADDER, n=32, jobs=1, min_slope=None):
    if kind == "localization":
        fn = lambda h: localization_composition_residual(k, n, h)  # noqa: E731
    elif kind == "commutator":
        fn = lambda h: localization_composition_residual(k, n, h, commutator=True)  # noqa: E731
    elif kind == "toeplitz":
        fn = lambda h: toeplitz_composition_residual(k, n, h)  # noqa: E731
    else:
        raise KeyError(f"unknown composition kind {kind!r}")
    errs = _ladder_map(fn, hbars, jobs)
    rep = Report(f"composition:{kind}", k, 2, list(hbars), errs)
    return _finish(rep, None, min_slope=COMPOSITION_SLOPES[kind] if min_slope is None else min_slope)


def wirtinger_example(hbar, k=0):
    """Constant part of the corrected symbol for m = z, mu = conj(z): symbol - |z|^2."""
    ax = np.linspace(-1, 1, 21)
    Z = ax[:, None] + 1j * ax[None, :]
    m = ps.PhaseField(Z, ax[0], ax[0], ax[1] - ax[0], ax[1] - ax[0], hbar)
    mu = m.with_values(np.conj(Z))
    c = cc.toeplitz_composition_symbol(m, mu, k, hbar).values - np.abs(Z) ** 2
    return complex(c[10, 10])


def random_signals(n, hbar, x, seed, terms=8):
    rng = np.random.default_rng(seed)
    H = ps.hermite_signal(0, hbar, x)
    table = np.stack([ps.hermite_signal(j, hbar, x).samples for j in range(terms)])
    out = []
    for _ in range(n):
        c = rng.normal(size=terms) + 1j * rng.normal(size=terms)
        c /= np.linalg.norm(c)
        out.append(H.with_samples(c @ table))
    return out


@dataclass
class MultiplexReport:
    n: int
    hbar: float
    errors: list
    energy_defect: float
    tol: float
    energy_tol: float

    @property
    def passed(self):
        return max(self.errors) < self.tol and self.energy_defect < self.energy_tol


def multiplex_experiment(n=3, seed=0, hbar=0.1, tol=1e-4, energy_tol=1e-5, spacing=0.3):
    if not 1 <= n <= 5:
        raise ValueError("n must be between 1 and 5")
    x = ps.default_axis(hbar, 24)
    ax = ps.default_axis(hbar, 14 + n, spacing=spacing)
    sig = random_signals(n, hbar, x, seed)
    F = bg.multiplex(sig, ax, ax)
    rec = bg.demultiplex(F, n, x)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        errs = bg.crosstalk(sig, rec, tol)
    energy = abs(F.norm() ** 2 - sum(s.norm() ** 2 for s in sig))
    return MultiplexReport(n, hbar, [float(e) for e in errs], float(energy), tol, energy_tol)
