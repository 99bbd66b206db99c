import sys
import math
import shlex
import argparse
import contextlib
from argparse import BooleanOptionalAction
from pathlib import Path

import numpy as np

from silversplit import (
    messages as msgs,
    version,
    printer_csv,
    printer_json,
)
from silversplit.config import RunConfig
from silversplit.exceptions import ConfigError, SilversplitError
from silversplit.resonances import primitive_indices, resonance_table, sequence_asymptotics
from silversplit.melnikov import (
    C0, LN_LAMBDA, dominance_profile, g_star, half_lattice, log_harmonics,
    melnikov_quadrature, melnikov_series, star_profile, transition_ladder,
)
from silversplit.splitting import (
    ContinuationRow, build_model, continuation_sweep, log_grid,
    solve_escalated, solve_model_critical_points, splitting_size, transversality,
)
from silversplit import verify


class LocalArgumentParser (argparse.ArgumentParser):
    def convert_arg_line_to_args(self, arg_line):
        return shlex.split(arg_line)


# -- Argument Parser ---

def generic_path_t(p):
    return Path(p).expanduser().resolve()

def input_file_t(p):
    p = generic_path_t(p)
    if not p.is_file():
        raise argparse.ArgumentTypeError(f"no such file: {p}")
    return p

def positive_float_t(s):
    value = float(s)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {s}")
    return value


def _common_parser():
    common = argparse.ArgumentParser(add_help=False)

    group = common.add_argument_group("Model")
    group.add_argument(
        "--rho",
        type=float,
        default=1.0,
        help="Width of analyticity of the perturbation (default: 1)",
    )
    group.add_argument(
        "--p",
        type=float,
        default=3.5,
        help="Exponent of mu = eps^p (default: 3.5)",
    )
    group.add_argument(
        "--allow-small-p",
        action="store_true",
        help="Accept p at or below the threshold of the selected variant. Results are then outside the hypothesis of the splitting estimates.",
    )
    group.add_argument(
        "--h-variant",
        choices=("standard", "shifted"),
        default="standard",
        help="Perturbation h(x) = cos x ('standard', needs p > 3) or cos x - 1 ('shifted', needs p > 2)",
    )
    group.add_argument(
        "--precision",
        type=int,
        metavar="BITS",
        help="Working precision of exact-to-float conversions (default: 256; $SILVERSPLIT_PRECISION overrides it)",
    )
    group.add_argument(
        "--eta-factor",
        type=positive_float_t,
        default=10.0,
        help="Safety factor c of the solver preconditions eta * c < E* (default: 10)",
    )
    group.add_argument(
        "--scan-grid",
        type=int,
        default=64,
        help="Nodes per axis of the basin scan; 0 disables it (default: 64)",
    )

    group = common.add_argument_group("Phases")
    group.add_argument(
        "--phases",
        dest="phases_file",
        type=input_file_t,
        metavar="FILE",
        help="JSON phases file: a list of {\"k\": [k1, k2], \"sigma\": s} records or {\"mode\": \"random\", \"seed\": S}",
    )
    group.add_argument(
        "--random-phases",
        action="store_true",
        help="Use deterministic pseudo-random phases instead of sigma = 0",
    )
    group.add_argument(
        "--seed",
        type=int,
        default=0,
        help="Seed of random phases and sampled angles (default: 0)",
    )
    group.add_argument(
        "--bounded-primary",
        action=BooleanOptionalAction,
        default=True,
        help="Build random primary phases so that |dtau_n| < 2pi/3 for every n",
    )

    group = common.add_argument_group("Output")
    group.add_argument(
        "--format",
        choices=("csv", "json"),
        default="csv",
        help="Output format (default: csv)",
    )
    group.add_argument(
        "-o", "--output",
        type=generic_path_t,
        metavar="FILE",
        help="Write data to FILE instead of stdout. Beware: If FILE exists already, it will be silently overwritten.",
    )
    group.add_argument(
        "--quiet",
        action="store_true",
        help="Only print warnings and errors",
    )
    group.add_argument(
        "--debug",
        action="store_true",
        help="Print debug messages",
    )
    return common


def _range_parser():
    ranged = argparse.ArgumentParser(add_help=False)
    group = ranged.add_argument_group("Epsilon grid")
    group.add_argument(
        "--eps-min",
        type=positive_float_t,
        help="Lower end of the eps grid",
    )
    group.add_argument(
        "--eps-max",
        type=positive_float_t,
        help="Upper end of the eps grid",
    )
    group.add_argument(
        "--points",
        type=int,
        default=50,
        help="Number of grid values (default: 50)",
    )
    group.add_argument(
        "--log-grid",
        action=BooleanOptionalAction,
        default=True,
        help="Space the grid uniformly in ln eps (default) or in eps",
    )
    return ranged


def get_parser():

    parser = LocalArgumentParser(
        prog="silversplit",
        fromfile_prefix_chars="@",
        description="Exponentially small splitting of separatrices for the silver frequency vector.",
    )
    parser.add_argument(
        "--version",
        action="version",
        version=version.VERSION_NUMBER,
    )
    common = _common_parser()
    ranged = _range_parser()
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    sub = subparsers.add_parser("resonances", parents=[common], help="Resonant sequences s(j, n) and their numerators")
    sub.add_argument("--j-max", type=int, default=10, help="Largest generator index (default: 10)")
    sub.add_argument("--n-max", type=int, default=8, help="Largest sequence index (default: 8)")
    sub.add_argument("--primitive-only", action="store_true", help="Skip non-primitive j")
    sub.add_argument("--asymptotics", action="store_true", help="Emit K_j and gamma_tilde*_j per primitive j instead")
    sub.set_defaults(func=cmd_resonances)

    sub = subparsers.add_parser("dominance", parents=[common, ranged], help="Most dominant harmonics S1, S2, ... and h1, h2, ...")
    sub.add_argument("--eps", type=positive_float_t, nargs="+", help="Explicit eps values (instead of a grid)")
    sub.add_argument("--depth", type=int, default=5, help="Number of ranked harmonics (default: 5)")
    sub.set_defaults(func=cmd_dominance)

    sub = subparsers.add_parser("sweep", parents=[common, ranged], help="Exponents h1..h5 and dominant harmonics S1..S5 over an eps grid")
    sub.add_argument("--model-columns", action="store_true", help="Append the four-harmonic model quantities (Q, Qt, dtau, E*, ...)")
    sub.set_defaults(func=cmd_sweep)

    sub = subparsers.add_parser("critical-points", parents=[common], help="The four critical points at one eps")
    sub.add_argument("--eps", type=positive_float_t, required=True)
    sub.add_argument("--model-only", action="store_true", help="Solve the four-harmonic model only")
    sub.set_defaults(func=cmd_critical_points)

    sub = subparsers.add_parser("continue", parents=[common, ranged], help="Track the critical points across an eps grid")
    sub.set_defaults(func=cmd_continue)

    sub = subparsers.add_parser("oracle", parents=[common], help="Residue formula against direct quadrature")
    sub.add_argument("--eps", type=positive_float_t, required=True)
    sub.add_argument("--samples", type=int, default=20, help="Number of random angles (default: 20)")
    sub.add_argument("--tol", type=positive_float_t, default=1e-10, help="Quadrature tolerance relative to sum L_k (default: 1e-10)")
    sub.set_defaults(func=cmd_oracle)

    sub = subparsers.add_parser("verify", parents=[common], help="Run the acceptance checks and write a JSON report")
    sub.add_argument("--only", nargs="+", choices=list(verify.CHECKS), metavar="CHECK", help=f"Run only these checks: {', '.join(verify.CHECKS)}")
    sub.add_argument("--full", action="store_true", help="Use the full acceptance grids (also: SILVERSPLIT_SLOW=1)")
    sub.add_argument("--show-long-errors", action="store_true", help="Print every error and warning of every check")
    sub.set_defaults(func=cmd_verify)

    sub = subparsers.add_parser("figure-data", parents=[common], help="Curves for external plotting")
    sub.add_argument("which", choices=("h-curves", "gk-curves"))
    sub.add_argument("--n", type=int, default=4, help="Transition index the grid is anchored at (default: 4)")
    sub.add_argument("--periods", type=int, default=1, help="Number of periods of ln eps (default: 1)")
    sub.add_argument("--samples", type=int, default=400, help="Grid values per period (default: 400)")
    sub.add_argument("--j", type=int, nargs="+", default=[1, 3], help="Sequences shown by gk-curves (default: 1 3)")
    sub.add_argument("--exact", action="store_true", help="h-curves from the exact g_k instead of the limits g*")
    sub.set_defaults(func=cmd_figure_data)

    return parser


# -- Output --

@contextlib.contextmanager
def _open_output(path):
    if path is None:
        yield sys.stdout
    else:
        with path.open("w", encoding="utf-8", newline="") as fh:
            yield fh


def emit(args, config, kind, rows, cmd_str, payload=None):
    with _open_output(args.output) as fh:
        if config.fmt == "csv":
            printer_csv.TablePrinter(fh, rows)
        else:
            printer_json.ReportPrinter(fh, kind, rows if payload is None else payload, cmd_str)
    if args.output is not None:
        msgs.status_message(f"Wrote {kind} data to {args.output}.")


def _grid(config):
    if config.eps_min is None or config.eps_max is None:
        raise ConfigError("--eps-min and --eps-max are required for this command")
    if config.log_grid:
        return log_grid(config.eps_min, config.eps_max, config.points)
    return np.linspace(config.eps_min, config.eps_max, config.points)


# -- Commands --

def cmd_resonances(args, config, cmd_str):
    if args.asymptotics:
        rows = []
        for j in primitive_indices(args.j_max):
            asym = sequence_asymptotics(j, N=max(15, args.n_max), precision_bits=config.precision_bits)
            rows.append({
                "j": j, "K": asym.K, "gamma_star": asym.gamma_star,
                "gamma_tilde_star": asym.gamma_tilde_star, "rate_ok": asym.rate_ok,
            })
    else:
        rows = resonance_table(args.j_max, args.n_max, precision_bits=config.precision_bits)
        if args.primitive_only:
            rows = [r for r in rows if r["primitive"]]
    emit(args, config, "resonances", rows, cmd_str)
    return 0


def cmd_dominance(args, config, cmd_str):
    eps_values = args.eps if args.eps else _grid(config)
    rows = []
    for eps in eps_values:
        profile = dominance_profile(float(eps), depth=args.depth, rho=config.rho, p=config.p,
                                    precision_bits=config.precision_bits)
        if not profile.primary_consistent:
            msgs.warning_message(f"eps={eps:.6e}: S1 = {profile.S[0]} is not s0({profile.n_interval})", cls="other")
        rows.append(profile.as_row())
    emit(args, config, "dominance", rows, cmd_str)
    return 0


def cmd_sweep(args, config, cmd_str):
    rows = []
    for eps in _grid(config):
        eps = float(eps)
        profile = dominance_profile(eps, depth=5, rho=config.rho, p=config.p, precision_bits=config.precision_bits)
        row = profile.as_row()
        if args.model_columns:
            model = build_model(eps, rho=config.rho, phases=config.phases, p=config.p,
                                precision_bits=config.precision_bits)
            trans = transversality(model)
            row.update({
                "ln_B": model.ln_B, "ln_eta": model.ln_eta, "ln_eta_prime": model.ln_eta_prime,
                "ln_perturbation": model.ln_perturbation,
                "Q": model.Q, "Qt": model.Q_tilde, "dtau": model.d_tau, "dtau1": model.d_tau1,
                "Eplus": trans.E_plus, "Eminus": trans.E_minus, "Estar": trans.E_star,
                "ln_splitting": splitting_size(model),
                "ln_splitting_law": config.p*math.log(eps) - 0.5*math.log(eps) - C0(config.rho)*profile.h[0]/eps**0.25,
            })
        rows.append(row)
    emit(args, config, "sweep", rows, cmd_str)
    return 0


def cmd_critical_points(args, config, cmd_str):
    model = build_model(args.eps, rho=config.rho, phases=config.phases, p=config.p,
                        precision_bits=config.precision_bits)
    trans = transversality(model)
    if args.model_only:
        points, flags = solve_model_critical_points(model, c=config.eta_factor), ()
    else:
        solution = solve_escalated(model, config.phases, c=config.eta_factor, scan_grid=config.scan_grid,
                                   precision_bits=config.precision_bits)
        points, flags = solution.points, solution.flags
        if flags:
            msgs.warning_message(f"eps={args.eps:.6e}: flags {list(flags)}", cls="bifurcation")
    row = ContinuationRow.from_points(model, trans, points, flags)
    details = []
    for pt, entry in zip(points, row.points):
        details.append({
            "index": pt.index, "branch": pt.branch,
            "psi1": float(pt.psi[0]), "psi2": float(pt.psi[1]),
            "theta1": entry[0], "theta2": entry[1],
            "det_scaled": pt.hess_det_scaled, "ln_abs_det": pt.ln_abs_hess_det,
            "ln_m_star": entry[3], "m_ratio": entry[4], "residual": pt.residual,
        })
    payload = {
        "model": model, "transversality": trans, "phases": config.phases.describe(),
        "points": details, "flags": list(flags),
    }
    emit(args, config, "critical-points", [row.as_row()], cmd_str, payload)
    return 0


def cmd_continue(args, config, cmd_str):
    report = continuation_sweep(
        config.eps_min, config.eps_max, config.points, phases=config.phases,
        rho=config.rho, p=config.p, c=config.eta_factor, scan_grid=config.scan_grid,
        grid=_grid(config), precision_bits=config.precision_bits,
    )
    rows = [row.as_row() for row in report.rows]
    payload = {
        "phases": config.phases.describe(),
        "rows": [dict(row.as_row(), flags=list(row.flags)) for row in report.rows],
        "phase_violations": list(report.phase_violations), "flag_count": report.flag_count,
    }
    emit(args, config, "continue", rows, cmd_str, payload)
    return 0


def cmd_oracle(args, config, cmd_str):
    rng = np.random.default_rng(config.seed)
    rows = []
    for theta in rng.uniform(0, 2*math.pi, size=(args.samples, 2)):
        series = melnikov_series(theta, args.eps, 1.0, phases=config.phases, rho=config.rho)
        quad = melnikov_quadrature(theta, args.eps, tol=args.tol, radius=series.radius,
                                   rho=config.rho, phases=config.phases)
        scale = float(np.exp(log_harmonics(args.eps, half_lattice(series.radius), config.rho)).sum())
        rows.append({
            "theta1": float(theta[0]), "theta2": float(theta[1]),
            "series": series.value, "quadrature": quad,
            "l1_error": abs(quad - series.value) / scale,
            "relative_error": abs(quad - series.value) / abs(series.value),
            "radius": series.radius,
        })
    emit(args, config, "oracle", rows, cmd_str)
    return 0


def cmd_verify(args, config, cmd_str):
    report = verify.run_checks(config, names=args.only, full=args.full or None)
    verify.print_findings(report, show_long_errors=args.show_long_errors)
    with _open_output(args.output) as fh:
        printer_json.ReportPrinter(fh, "verify", report.as_dict(), cmd_str)
    return 0 if report.passed else 1


def _figure_grid(args, rho):
    """ln eps over args.periods periods, the first one centred at eps_hat_n."""
    centre = math.log(transition_ladder(args.n, rho).eps_hat_n)
    hi = centre + 2*LN_LAMBDA
    lo = hi - 4*LN_LAMBDA*args.periods
    return np.linspace(lo, hi, args.samples*args.periods + 1)


def cmd_figure_data(args, config, cmd_str):
    rho = config.rho
    rows = []
    ln_grid = _figure_grid(args, rho)
    if args.which == "h-curves":
        for ln_eps in ln_grid:
            eps = math.exp(ln_eps)
            if args.exact:
                h = dominance_profile(eps, depth=3, rho=rho, precision_bits=config.precision_bits).h
            else:
                h = [entry[0] for entry in star_profile(eps, depth=3, rho=rho)]
            rows.append({"x": ln_eps / (4*LN_LAMBDA), "eps": eps, "h1": h[0], "h2": h[1], "h3": h[2]})
    else:
        n_values = range(max(0, args.n - args.periods), args.n + 2)
        for ln_eps in ln_grid:
            eps = math.exp(ln_eps)
            row = {"x": ln_eps / (4*LN_LAMBDA), "eps": eps}
            for j in args.j:
                for n in n_values:
                    row[f"g_{j}_{n}"] = g_star(eps, j, n, rho)
            rows.append(row)
    emit(args, config, "figure-data", rows, cmd_str)
    return 0


def main_impl(args, cmd_str):
    msgs.set_verbosity(quiet=args.quiet, debug=args.debug)
    try:
        config = RunConfig.from_args(args)
        return args.func(args, config, cmd_str)
    except ConfigError as e:
        msgs.error_message(str(e), cls="usage")
        return 2
    except SilversplitError as e:
        msgs.error_message(f"{type(e).__name__}: {e}", cls="other")
        return 1


# -- CLI entrypoint --

def main(given_argv=sys.argv[1:]):
    """
    Argparse-based entry point. Returns the exit code.
    Beware: argparse raises SystemExit(2) on usage errors.
    """
    args = get_parser().parse_args(given_argv)
    cmd_str = " ".join(["silversplit"] + [shlex.quote(str(a)) for a in given_argv])
    return main_impl(args, cmd_str)


if __name__ == "__main__":
    sys.exit(main())
