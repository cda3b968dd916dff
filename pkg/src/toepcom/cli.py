"""Command-line front end: ``toepcom {profile,concentration,sweep,conjecture,roc}``.

Exit codes: 0 success, 2 invalid input, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import analysis, bounds, detection, experiments
from .signals import SignalError, SignalSpec, build_signal, make_basis

EXIT_USAGE = 2
EXIT_IO = 3


class UsageError(Exception):
    pass


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _parse_points(text: str) -> list[int]:
    """'2:128:2' (inclusive range) or '64,128,256'."""
    try:
        if ":" in text:
            parts = [int(p) for p in text.split(":")]
            if len(parts) == 2:
                parts.append(1)
            start, stop, step = parts
            if step <= 0:
                raise ValueError
            return list(range(start, stop + 1, step))
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise UsageError(f"cannot parse grid {text!r}") from None


def _signal_spec(args) -> SignalSpec:
    if args.spec:
        try:
            with open(args.spec) as fh:
                text = fh.read()
        except OSError as exc:
            raise OSError(f"cannot read spec file: {exc}") from exc
        return SignalSpec.from_json(text)
    if args.n is None:
        raise UsageError("--n (or --spec) is required")
    k = args.n if args.k is None else args.k
    return SignalSpec(
        n=args.n, k=k, basis=args.basis, support=args.support, values=args.values,
        seed=args.seed, normalize=args.normalize,
    )


def _write_rows(args, header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    _emit(args, buf.getvalue())


def _emit(args, text):
    if args.out in (None, "-"):
        sys.stdout.write(text)
        return
    with open(args.out, "w", newline="") as fh:
        fh.write(text)


def _require_m(args):
    if args.m is None or args.m < 1:
        raise UsageError("--m must be a positive integer")
    return args.m


def cmd_profile(args):
    spec = _signal_spec(args)
    m = _require_m(args)
    a = build_signal(spec)
    prof = analysis.com_profile(a, m)
    basis = make_basis(spec.basis, spec.n)
    out = {
        "rho": prof.rho,
        "mu": prof.mu,
        "rho_c": prof.rho_c,
        "det_bound": analysis.deterministic_rho_bound(basis, spec.k, m),
        "exp_bound": analysis.expected_rho_bound(basis, spec.k, m),
    }
    _emit(args, json.dumps(out, indent=2) + "\n")


def cmd_concentration(args):
    spec = _signal_spec(args)
    m = _require_m(args)
    a = build_signal(spec)
    eps = experiments.default_eps_grid(args.eps_min, args.eps_max, args.eps_steps)
    res = experiments.run_concentration(a, m, args.trials, eps, args.seed)
    prof = analysis.com_profile(a, m)
    up = bounds.toeplitz_upper_tail(eps, m, prof.rho)
    lo = bounds.toeplitz_lower_tail(eps, m, prof.mu)
    un = bounds.unstructured_tail(eps, m)
    rows = zip(eps, res.upper_rates, res.lower_rates, up, lo, un)
    _write_rows(args, ["epsilon", "upper_rate", "lower_rate", "upper_bound_toeplitz",
                       "lower_bound_toeplitz", "bound_unstructured"], rows)


def _sweep_template(args):
    if args.n is None and not args.spec:
        raise UsageError("--n (or --spec) is required")
    spec = _signal_spec(args) if args.spec else SignalSpec(
        n=args.n, k=args.k or 1, basis=args.basis, support=args.support,
        values=args.values, seed=args.seed,
    )
    return spec


def cmd_sweep(args):
    template = _sweep_template(args)
    points = _parse_points(args.points)
    m = args.m if args.axis != "M" else None
    if args.axis != "M":
        _require_m(args)
    res = experiments.sweep_mean_rho(template, args.axis, points, args.trials, m, args.seed,
                                     full_support=args.full_support)
    rows = zip(res.points, res.mean_rho, res.mean_rho_c, res.bound_expectation)
    _write_rows(args, ["axis_value", "mean_rho", "mean_rho_c", "bound_expectation"], rows)


def cmd_conjecture(args):
    template = _sweep_template(args)
    points = _parse_points(args.points)
    m = _require_m(args)
    res = experiments.sweep_mean_rho(template, "K", points, args.trials, m, args.seed)
    fit = experiments.fit_conjecture(res)
    k = res.points.astype(float)
    rows = zip(res.points, res.mean_rho_c, k / res.mean_rho_c, fit.line(k))
    _write_rows(args, ["K", "mean_rho_c", "K_over_mean", "fit_line"], rows)
    print(json.dumps({"c1": fit.c1, "c2": fit.c2, "residual": fit.residual,
                      "implied_c": fit.implied_c, "L": fit.l}), file=sys.stderr)


def cmd_roc(args):
    alphas = detection.default_alphas(args.alpha_steps)
    if args.xc_norm is not None:
        curve = detection.analytic_roc(alphas, args.xc_norm, args.sigma)
        _write_rows(args, ["alpha", "pd"], zip(curve.alphas, curve.pds))
        return
    spec = _signal_spec(args)
    m = _require_m(args)
    c = build_signal(spec)
    problem = detection.DetectionProblem(np.asarray(c), args.sigma, m)
    curves, mean = detection.empirical_roc(problem, args.trials, alphas, args.seed, args.ensemble)
    if args.per_trial:
        rows = ((t, al, pd) for t, cv in enumerate(curves) for al, pd in zip(cv.alphas, cv.pds))
        _write_rows(args, ["trial", "alpha", "pd"], rows)
    else:
        _write_rows(args, ["alpha", "pd"], zip(mean.alphas, mean.pds))


def _add_signal_flags(p, m_required=True):
    g = p.add_argument_group("signal")
    g.add_argument("--spec", help="SignalSpec JSON file (overrides the flags below)")
    g.add_argument("--n", type=int, help="signal length N")
    g.add_argument("--k", type=int, help="sparsity K (default: N)")
    g.add_argument("--basis", choices=["identity", "real_fourier"], default="identity",
                   help="sparsity basis")
    g.add_argument("--support", choices=["first_k", "random"], default="first_k",
                   help="support rule")
    g.add_argument("--values", choices=["equal_positive", "gaussian_inv_k"],
                   default="equal_positive", help="nonzero value rule")
    g.add_argument("--normalize", action="store_true", help="scale the signal to unit norm")
    p.add_argument("--m", type=int, help="number of measurements M")
    p.add_argument("--seed", type=int, default=0, help="master random seed (uint64)")
    p.add_argument("--out", help="output file (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toepcom",
        description="Concentration functionals, tail bounds and detection experiments "
                    "for randomized compressive Toeplitz matrices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("profile", help="rho, mu, rho_c and the rho bounds of one signal (JSON)")
    _add_signal_flags(p)
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("concentration", help="empirical deviation rates vs epsilon (CSV)")
    _add_signal_flags(p)
    p.add_argument("--trials", type=int, default=1000, help="number of random operators")
    p.add_argument("--eps-min", type=float, default=0.02, help="smallest epsilon")
    p.add_argument("--eps-max", type=float, default=0.98, help="largest epsilon")
    p.add_argument("--eps-steps", type=int, default=50, help="number of epsilon grid points")
    p.set_defaults(func=cmd_concentration)

    for name, helptext in (("sweep", "sample means of rho and rho_c along an axis (CSV)"),
                           ("conjecture", "K / mean(rho_c) and its linear fit (CSV)")):
        p = sub.add_parser(name, help=helptext)
        _add_signal_flags(p)
        p.set_defaults(support="random", values="gaussian_inv_k")
        p.add_argument("--trials", type=int, default=1000, help="signals per grid point")
        p.add_argument("--points", required=True,
                       help="grid, 'start:stop:step' (inclusive) or comma list")
        if name == "sweep":
            p.add_argument("--axis", choices=list(experiments.AXES), default="K",
                           help="swept quantity")
            p.add_argument("--full-support", action="store_true",
                           help="use K = N at every grid point")
            p.set_defaults(func=cmd_sweep)
        else:
            p.set_defaults(func=cmd_conjecture)

    p = sub.add_parser("roc", help="analytic or empirical ROC curves (CSV)")
    _add_signal_flags(p)
    p.add_argument("--sigma", type=float, default=0.3, help="noise standard deviation")
    p.add_argument("--alpha-steps", type=int, default=99, help="number of false-alarm levels")
    p.add_argument("--trials", type=int, default=1000, help="number of random matrices")
    p.add_argument("--ensemble", choices=list(detection.ENSEMBLES), default="toeplitz",
                   help="random matrix ensemble")
    p.add_argument("--xc-norm", type=float, help="analytic curve for a given ||Xc||")
    p.add_argument("--per-trial", action="store_true", help="emit one curve per trial")
    p.set_defaults(func=cmd_roc)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except OSError as exc:
        print(f"toepcom: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (UsageError, SignalError, ValueError) as exc:
        print(f"toepcom: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return 0


if __name__ == "__main__":
    sys.exit(main())
