"""Command-line front end: coefficient and moment tables, rate experiments, exports.

Exit codes: 0 pass, 1 tolerance failure, 2 usage error.  Every command is
deterministic given its flags and seed; floats are written with 17
significant digits so repeated runs give byte-identical CSV.
"""
import argparse
import math
import os
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from . import bargmann as bg
from . import calculus as cc
from . import experiments as ex
from . import phasespace as ps
from . import quantize as qz

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    hbar_ladder: tuple = ex.LADDER
    basis_size: int = 32
    grid_points: int = 128
    truncation_margin: float = 6.0
    output_dir: str = "."
    format: str = "csv"

    def validate(self):
        lad = self.hbar_ladder
        if len(lad) < 3 or any(h <= 0 for h in lad) or any(b >= a for a, b in zip(lad, lad[1:])):
            raise UsageError("hbar_ladder must hold at least 3 positive, strictly decreasing values")
        if self.basis_size < 8:
            raise UsageError("basis_size must be at least 8")
        if self.grid_points < 32:
            raise UsageError("grid_points must be at least 32")
        if self.format not in ("csv", "json"):
            raise UsageError("format must be csv or json")
        return self


def _parse_value(key, raw):
    if key == "hbar_ladder":
        return tuple(float(v) for v in raw.split(",") if v.strip())
    if key in ("basis_size", "grid_points"):
        return int(raw)
    if key == "truncation_margin":
        return float(raw)
    return raw.strip()


def load_config(path=None, overrides=None):
    """Defaults, then the key=value file, then POLYTOEP_OUT, then command-line flags."""
    cfg = ExperimentConfig()
    known = {f.name for f in fields(ExperimentConfig)}
    if path:
        try:
            text = Path(path).read_text()
        except OSError as e:
            raise UsageError(f"cannot read config {path}: {e.strerror}") from None
        vals = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, raw = line.partition("=")
            key = key.strip()
            if not sep or key not in known:
                raise UsageError(f"{path}:{lineno}: expected key=value with key in {sorted(known)}")
            try:
                vals[key] = _parse_value(key, raw)
            except ValueError:
                raise UsageError(f"{path}:{lineno}: bad value for {key}") from None
        cfg = replace(cfg, **vals)
    if os.environ.get("POLYTOEP_OUT"):
        cfg = replace(cfg, output_dir=os.environ["POLYTOEP_OUT"])
    if overrides:
        cfg = replace(cfg, **{k: v for k, v in overrides.items() if v is not None})
    return cfg.validate()


def _f(v):
    return "%.17g" % v


def _write_report(reports, cfg, name, out):
    text = ex.reports_to_csv(reports) if cfg.format == "csv" else ex.reports_to_json(reports)
    out.write(text)
    if cfg.output_dir:
        d = Path(cfg.output_dir)
        path = d / f"{name}.{cfg.format}"
        try:
            d.mkdir(parents=True, exist_ok=True)
            path.write_text(text)
        except OSError as e:
            raise OSError(f"cannot write report {path}: {e.strerror}") from None


def _verdict(reports, out):
    ok = True
    for r in reports:
        slope = "" if r.fit is None else f" slope={r.fit.slope:.4f} r2={r.fit.rsquared:.4f}"
        out.write(f"# {r.experiment} k={r.k} N={r.N}:{slope} [{r.threshold}] {'PASS' if r.passed else 'FAIL'}\n")
        ok &= r.passed
    return EXIT_PASS if ok else EXIT_FAIL


# -- commands ----------------------------------------------------------------------

def cmd_moments(args, cfg, out):
    out.write("alpha,beta,k,closed_form,quadrature,abs_diff\n")
    worst = 0.0
    for k in range(args.k_max + 1):
        for a in range(args.ab_max + 1):
            for b in range(args.ab_max + 1):
                v = cc.hermite_moment(a, b, k, args.hbar)
                w = cc.hermite_moment_bruteforce(a, b, k, args.hbar)
                diff = abs(v - w)
                worst = max(worst, diff)
                out.write(f"{a},{b},{k},{_f(v)},{_f(w)},{_f(diff)}\n")
    ok = worst < args.tol
    out.write(f"# max abs_diff {_f(worst)} (tolerance {args.tol:g}) {'PASS' if ok else 'FAIL'}\n")
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_coeffs(args, cfg, out):
    c = cc.spec_coefficients(args.N, args.d)
    out.write("j,value,exact\n")
    for j, (v, e) in enumerate(zip(c.values, c.exact)):
        out.write(f"{j},{_f(v)},{e}\n")
    return EXIT_PASS


def cmd_expansion(args, cfg, out):
    try:
        ex.get_symbol(args.symbol)
    except KeyError as e:
        raise UsageError(str(e.args[0])) from None
    rep = ex.expansion_experiment(args.symbol, args.N, cfg.hbar_ladder, cfg.basis_size, args.jobs, args.slope_tol)
    _write_report([rep], cfg, f"expansion_{args.symbol.replace(':', '_').replace(',', '_')}_N{args.N}", out)
    return _verdict([rep], out)


def cmd_composition(args, cfg, out):
    rep = ex.composition_experiment(args.kind, args.k, cfg.hbar_ladder, cfg.basis_size, args.jobs, args.min_slope)
    _write_report([rep], cfg, f"composition_{args.kind}_k{args.k}", out)
    if args.kind == "toeplitz":
        h = cfg.hbar_ladder[0]
        c = ex.wirtinger_example(h, args.k)
        out.write(f"# m=z, mu=conj(z), k={args.k}, hbar={h:g}: corrected symbol = |z|^2 + ({_f(c.real)}"
                  f"{'+' if c.imag >= 0 else '-'}{_f(abs(c.imag))}j)\n")
    return _verdict([rep], out)


def cmd_multiplex(args, cfg, out):
    if not 1 <= args.n <= 5:
        raise UsageError("n must be between 1 and 5")
    rep = ex.multiplex_experiment(args.n, args.seed, args.hbar, args.tol, args.energy_tol)
    out.write("channel,error\n")
    for j, e in enumerate(rep.errors):
        out.write(f"{j},{_f(e)}\n")
    out.write(f"# energy defect {_f(rep.energy_defect)} (tolerance {rep.energy_tol:g})\n")
    out.write(f"# crosstalk tolerance {rep.tol:g}: {'PASS' if rep.passed else 'FAIL'}\n")
    return EXIT_PASS if rep.passed else EXIT_FAIL


def _state(name, hbar, x):
    if name == "cat":
        a, b = ps.hermite_signal(0, hbar, x), ps.hermite_signal(1, hbar, x)
        return a.with_samples((a.samples + b.samples) / math.sqrt(2))
    if name.startswith("phi") and name[3:].isdigit():
        return ps.hermite_signal(int(name[3:]), hbar, x)
    raise UsageError(f"unknown state {name!r}; use phi<k> or cat")


def _write_grid_csv(path, f, header):
    lines = [header]
    Q, P = f.mesh()
    for q, p, v in zip(Q.ravel(), P.ravel(), f.values.ravel()):
        lines.append(f"{_f(q)},{_f(p)},{_f(float(np.real(v)))}")
    Path(path).write_text("\n".join(lines) + "\n")


def cmd_export(args, cfg, out):
    path = Path(args.path)
    if not path.is_absolute() and cfg.output_dir and not path.parent.parts:
        path = Path(cfg.output_dir) / path
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        _export(args, cfg, path)
    except OSError as e:
        sys.stderr.write(f"error: cannot write {path}: {e.strerror or e}\n")
        return EXIT_FAIL
    out.write(f"wrote {path}\n")
    return EXIT_PASS


def _export(args, cfg, path):
    h = args.hbar
    x = ps.default_axis(h, 16, cfg.grid_points, cfg.truncation_margin)
    if args.object in ("wigner", "husimi", "mu"):
        # a 4x finer signal lattice keeps the symmetric momentum range alias-free
        psi = _state(args.state, h, np.linspace(x[0], x[-1], 4 * len(x) - 3))
        if args.object == "wigner":
            f = ps.wigner(psi, x, x)
        elif args.object == "husimi":
            f = ps.husimi(psi, x, x)
        else:
            f = cc.mu_density(psi, args.N, x, x)
        _write_grid_csv(path, f, "q,p,value")
    elif args.object == "kernel":
        ax = ps.default_axis(h, 16, cfg.grid_points, cfg.truncation_margin)
        z0 = complex(args.z0.replace(" ", "")) if args.z0 else 0j
        F = bg.FockField.from_function(lambda w: bg.reproducing_kernel(args.k, z0, w, h), ax, ax, h)
        if path.suffix == ".fock":
            bg.save_fock(F, path)
        else:
            lines = ["re,im,value_re,value_im"]
            for z, v in zip(F.z.ravel(), F.values.ravel()):
                lines.append(f"{_f(z.real)},{_f(z.imag)},{_f(v.real)},{_f(v.imag)}")
            path.write_text("\n".join(lines) + "\n")
    elif args.object == "opmatrix":
        n = args.n or cfg.basis_size
        complex_plane = args.kind in ("toeplitz", "projected_toeplitz", "complex_weyl")
        try:
            sym = ex.get_symbol(args.symbol, "complex" if complex_plane else "real")
        except KeyError as e:
            raise UsageError(str(e.args[0])) from None
        build = {
            "weyl": lambda: qz.weyl_matrix(sym, n, h),
            "localization": lambda: qz.localization_matrix(sym, args.k, n, h),
            "toeplitz": lambda: qz.toeplitz_matrix(sym, args.k, n, h),
            "projected_toeplitz": lambda: qz.projected_toeplitz_matrix(sym, args.k, n, h),
            "complex_weyl": lambda: qz.complex_weyl_matrix(sym, n, h),
        }
        M = build[args.kind]()
        if path.suffix == ".csv":
            qz.opm_to_csv(M, path)
        else:
            qz.save_opm(M, path)


# -- parser -------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    p = _Parser(prog="polytoep", description=__doc__.splitlines()[0])
    p.add_argument("--config", help="key=value configuration file")
    p.add_argument("--hbar-ladder", help="comma-separated decreasing hbar values")
    p.add_argument("--basis-size", type=int)
    p.add_argument("--grid-points", type=int)
    p.add_argument("--truncation-margin", type=float)
    p.add_argument("--output-dir")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--jobs", type=int, default=1, help="parallel hbar values (threads)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("moments", help="closed-form Hermite moments against quadrature")
    s.add_argument("--k-max", type=int, default=2)
    s.add_argument("--ab-max", type=int, default=1)
    s.add_argument("--hbar", type=float, default=1.0)
    s.add_argument("--tol", type=float, default=1e-8)

    s = sub.add_parser("coeffs", help="spectrogram-expansion coefficients")
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--d", type=int, default=1)

    s = sub.add_parser("expansion", help="Weyl-via-localization rate experiment")
    s.add_argument("--symbol", default="wide")
    s.add_argument("--N", type=int, default=2)
    s.add_argument("--slope-tol", type=float, default=0.3)

    s = sub.add_parser("composition", help="composition / commutator rate experiment")
    s.add_argument("--kind", choices=("localization", "toeplitz", "commutator"), required=True)
    s.add_argument("--k", type=int, default=0)
    s.add_argument("--min-slope", type=float)

    s = sub.add_parser("multiplex", help="polyanalytic multiplexing round trip")
    s.add_argument("--n", type=int, default=3)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--hbar", type=float, default=0.1)
    s.add_argument("--tol", type=float, default=1e-4)
    s.add_argument("--energy-tol", type=float, default=1e-5)

    s = sub.add_parser("export", help="write fields or operator matrices")
    s.add_argument("object", choices=("kernel", "wigner", "husimi", "mu", "opmatrix"))
    s.add_argument("path")
    s.add_argument("--state", default="phi0")
    s.add_argument("--hbar", type=float, default=0.1)
    s.add_argument("--N", type=int, default=2)
    s.add_argument("--k", type=int, default=0)
    s.add_argument("--z0", help="kernel base point, e.g. 0.5+0.2j")
    s.add_argument("--kind", default="toeplitz",
                   choices=("weyl", "localization", "toeplitz", "projected_toeplitz", "complex_weyl"))
    s.add_argument("--symbol", default="absz2")
    s.add_argument("--n", type=int)
    return p


COMMANDS = {
    "moments": cmd_moments,
    "coeffs": cmd_coeffs,
    "expansion": cmd_expansion,
    "composition": cmd_composition,
    "multiplex": cmd_multiplex,
    "export": cmd_export,
}


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
        if args.jobs < 1:
            raise UsageError("--jobs must be at least 1")
        ladder = None
        if args.hbar_ladder:
            try:
                ladder = tuple(float(v) for v in args.hbar_ladder.split(","))
            except ValueError:
                raise UsageError("--hbar-ladder takes comma-separated numbers") from None
        cfg = load_config(args.config, {
            "hbar_ladder": ladder,
            "basis_size": args.basis_size,
            "grid_points": args.grid_points,
            "truncation_margin": args.truncation_margin,
            "output_dir": args.output_dir,
            "format": args.format,
        })
        if args.command in ("coeffs",) and (args.N < 1 or args.d < 1):
            raise UsageError("N and d must be at least 1")
        return COMMANDS[args.command](args, cfg, out)
    except UsageError as e:
        sys.stderr.write(f"usage error: {e}\n")
        return EXIT_USAGE
    except OSError as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
