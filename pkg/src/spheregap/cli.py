"""Command-line interface.

Subcommands: spectrum, gap-curve, variation, verify-appendix, solve,
gap-slope. Output is CSV (default) or JSON with identical numeric payloads;
floats are printed with 17 significant digits so identical invocations give
byte-identical output. Exit codes: 0 success, 1 usage error, 2 numerical
failure, 3 verification failure.
"""
import argparse
import csv
import io
import json
import math
import sys

from .errors import SphereGapError

_FLOAT_FMT = ".17g"


class _Parser(argparse.ArgumentParser):
    """argparse variant exiting with code 1 on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _fmt(value) -> str:
    if isinstance(value, float):
        return format(value, _FLOAT_FMT)
    return str(value)


def _emit(args, command: str, params: dict, columns, rows, summary=None) -> None:
    if args.format == "json":
        payload = {"command": command, "params": params,
                   "rows": [dict(zip(columns, row)) for row in rows]}
        if summary:
            payload["summary"] = summary
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
        return
    out = io.StringIO()
    if summary:
        for key, value in summary.items():
            out.write(f"# {key}={_fmt(value)}\n")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    sys.stdout.write(out.getvalue())


def _resolve_beta(args, name: str = "beta") -> float:
    plain = getattr(args, name)
    times_pi = getattr(args, f"{name}_pi")
    if (plain is None) == (times_pi is None):
        raise ValueError(f"specify exactly one of --{name.replace('_', '-')} "
                         f"or --{name.replace('_', '-')}-pi")
    return plain if plain is not None else times_pi * math.pi


def _domain_spec(domain: str, beta: float):
    from .spectra import LuneSpec, TriangleSpec

    return LuneSpec(beta) if domain == "lune" else TriangleSpec(beta)


def _cmd_spectrum(args) -> int:
    from . import spectra

    if args.count < 1:
        raise ValueError("--count must be >= 1")
    beta = _resolve_beta(args)
    spec = _domain_spec(args.domain, beta)
    entries = spectra.spectrum(spec, args.count)
    rows = [
        (entry.eigenvalue, len(entry.modes),
         ";".join(f"{m.k}:{m.j}" for m in entry.modes))
        for entry in entries
    ]
    _emit(args, "spectrum",
          {"domain": args.domain, "beta": beta, "count": args.count},
          ("eigenvalue", "multiplicity", "modes"), rows)
    return 0


def _cmd_gap_curve(args) -> int:
    from . import spectra

    beta_min = _resolve_beta(args, "beta_min")
    beta_max = _resolve_beta(args, "beta_max")
    if not (0.0 < beta_min < beta_max < 2.0 * math.pi):
        raise ValueError("need 0 < beta-min < beta-max < 2*pi")
    if args.steps < 1:
        raise ValueError("--steps must be >= 1")
    rows = []
    for i in range(args.steps + 1):
        beta = beta_min + (beta_max - beta_min) * i / args.steps
        spec = _domain_spec(args.domain, beta)
        rows.append((beta, spectra.gap(spec), spectra.gap_regime(spec)))
    _emit(args, "gap-curve",
          {"domain": args.domain, "beta_min": beta_min, "beta_max": beta_max,
           "steps": args.steps},
          ("beta", "gap", "regime"), rows)
    return 0


def _cmd_variation(args) -> int:
    import numpy as np

    from . import variation

    if args.z_steps < 1 or args.b_steps < 1:
        raise ValueError("step counts must be >= 1")
    zs = np.linspace(0.0, 2.0 * math.pi, args.z_steps)
    rows = []
    if args.b is not None or args.a is not None:
        if args.b is None:
            args.b = math.sqrt(max(0.0, 1.0 - args.a**2))
        a = math.sqrt(max(0.0, 1.0 - args.b**2))
        if args.a is not None and abs(args.a - a) > 1e-9:
            raise ValueError("direction must satisfy a = sqrt(1 - b^2)")
        best = (math.inf, 0.0)
        for z in zs:
            val = variation.gap_variation_I(float(z), (a, args.b))
            rows.append((float(z), args.b, val))
            if val < best[0]:
                best = (val, float(z))
        summary = {"min_value": best[0], "argmin_z": best[1], "argmin_b": args.b}
    else:
        bs = np.linspace(0.0, 1.0, args.b_steps)
        best = (math.inf, 0.0, 0.0)
        for z in zs:
            for b in bs:
                val = variation.gap_variation_I(float(z), (math.sqrt(1.0 - b**2), float(b)))
                rows.append((float(z), float(b), val))
                if val < best[0]:
                    best = (val, float(z), float(b))
        summary = {"min_value": best[0], "argmin_z": best[1], "argmin_b": best[2]}
    summary["reference_16_over_pi"] = variation.MIN_GAP_VARIATION
    summary["abs_diff"] = abs(summary["min_value"] - variation.MIN_GAP_VARIATION)
    _emit(args, "variation",
          {"a": args.a, "b": args.b, "z_steps": args.z_steps, "b_steps": args.b_steps},
          ("z", "b", "value"), rows, summary)
    return 0


def _cmd_verify_appendix(args) -> int:
    from . import variation

    report = variation.verify_appendix()
    rows = [(e.label, e.computed, e.expected, e.abs_err) for e in report.entries]
    _emit(args, "verify-appendix", {"tol": report.tol},
          ("label", "computed", "expected", "abs_err"), rows,
          {"passed": int(report.passed)})
    return 0 if report.passed else 3


def _direction(args):
    a, b = args.a, args.b
    if abs(a * a + b * b - 1.0) > 1e-9:
        raise ValueError("direction must satisfy a^2 + b^2 = 1")
    return float(a), float(b)


def _cmd_solve(args) -> int:
    from . import fem
    from .geometry import DeformationParams

    a, b = _direction(args)
    config = fem.SolverConfig(grid_n=args.grid_n, num_modes=max(args.modes, 2))
    problem = fem.assemble(DeformationParams(a, b, args.t), config)
    vals, _ = fem.solve_smallest(problem, max(args.modes, 2), method="sparse",
                                 tol=config.tol)
    rows = [(i + 1, float(v)) for i, v in enumerate(vals[: args.modes])]
    gap = float(vals[1] - vals[0])
    _emit(args, "solve",
          {"a": a, "b": b, "t": args.t, "grid_n": args.grid_n, "modes": args.modes},
          ("index", "eigenvalue"), rows, {"gap": gap})
    return 0


def _cmd_gap_slope(args) -> int:
    from . import fem

    a, b = _direction(args)
    try:
        t_values = [float(x) for x in args.t_list.split(",") if x.strip()]
    except ValueError as exc:
        raise ValueError(f"cannot parse --t-list: {exc}") from None
    config = fem.SolverConfig(grid_n=args.grid_n)
    result = fem.gap_slope((a, b), t_values, config)
    rows = [(t, g, s) for t, g, s in zip(result.t_values, result.gaps, result.slopes)]
    summary = {
        "slope": result.slope,
        "error_estimate": result.error_estimate,
        "gap_at_zero": result.gap_at_zero,
        "warning": int(result.warning),
    }
    _emit(args, "gap-slope",
          {"a": a, "b": b, "t_list": args.t_list, "grid_n": args.grid_n},
          ("t", "gap", "slope"), rows, summary)
    return 0


def _add_format(p) -> None:
    p.add_argument("--format", choices=("csv", "json"), default="csv",
                   help="output format (default csv)")


def _add_beta(p, name: str = "beta") -> None:
    flag = name.replace("_", "-")
    p.add_argument(f"--{flag}", type=float, default=None, dest=name,
                   help=f"{flag} in radians")
    p.add_argument(f"--{flag}-pi", type=float, default=None, dest=f"{name}_pi",
                   help=f"{flag} as a multiple of pi")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="spheregap",
                     description="Spectra and gap variation of spherical lunes "
                                 "and half-lune triangles")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("spectrum", help="closed-form Dirichlet spectrum")
    p.add_argument("--domain", choices=("lune", "triangle"), required=True)
    _add_beta(p)
    p.add_argument("--count", type=int, default=5, help="distinct eigenvalues to list")
    _add_format(p)
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("gap-curve", help="fundamental gap over a range of angles")
    p.add_argument("--domain", choices=("lune", "triangle"), required=True)
    _add_beta(p, "beta_min")
    _add_beta(p, "beta_max")
    p.add_argument("--steps", type=int, default=100, help="number of intervals")
    _add_format(p)
    p.set_defaults(func=_cmd_gap_curve)

    p = sub.add_parser("variation", help="first variation I(z, b) of the gap")
    p.add_argument("--a", type=float, default=None)
    p.add_argument("--b", type=float, default=None)
    p.add_argument("--z-steps", type=int, default=361, dest="z_steps")
    p.add_argument("--b-steps", type=int, default=101, dest="b_steps")
    _add_format(p)
    p.set_defaults(func=_cmd_variation)

    p = sub.add_parser("verify-appendix",
                       help="check every pairing term against its closed form")
    _add_format(p)
    p.set_defaults(func=_cmd_verify_appendix)

    p = sub.add_parser("solve", help="numeric eigenvalues of a deformed triangle")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--grid-n", type=int, default=64, dest="grid_n")
    p.add_argument("--modes", type=int, default=4)
    _add_format(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("gap-slope", help="finite-difference gap slope at t = 0")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--t-list", default="0.02,0.01,0.005", dest="t_list",
                   help="comma-separated decreasing deformation magnitudes")
    p.add_argument("--grid-n", type=int, default=64, dest="grid_n")
    _add_format(p)
    p.set_defaults(func=_cmd_gap_slope)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SphereGapError as exc:
        print(f"spheregap: numerical failure: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"spheregap: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
