"""Command-line entry point.

Exit status is 0 on success, 1 for configuration errors and 2 when some
evaluation produced a numerical-failure row (or, for ``verify``, when an
agreement check failed).
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np
import yaml

from ..config import ConfigError, SystemConfig, load_config
from .experiments import approximation_error, difference_lambda, optimize_rho
from .presets import PRESETS, run_preset
from .sweep import AXES, EVALUATORS, SweepSpec, run_sweep

__all__ = ["main", "parse_grid"]

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2


def parse_grid(text: str) -> list[float]:
    """``"0:60:5"`` (inclusive stop) or ``"0.1,0.5,0.9"``.

    >>> parse_grid("0:10:5")
    [0.0, 5.0, 10.0]
    >>> parse_grid("1, 2.5")
    [1.0, 2.5]
    """
    text = text.strip()
    try:
        if ":" in text:
            start, stop, step = (float(p) for p in text.split(":"))
            if step <= 0:
                raise ConfigError("grid step must be positive")
            n = int(np.floor((stop - start) / step + 1e-9)) + 1
            return [float(v) for v in np.round(start + step * np.arange(n), 10)]
        values = [float(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise ConfigError(f"cannot parse grid {text!r}: {exc}") from exc
    if not values:
        raise ConfigError("grid is empty")
    return values


def _apply_overrides(config: SystemConfig, overrides) -> SystemConfig:
    data = config.to_dict()
    for item in overrides or ():
        key, sep, raw = item.partition("=")
        if not sep:
            raise ConfigError(f"override {item!r} is not of the form key=value")
        node = data
        parts = key.strip().split(".")
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise ConfigError(f"cannot set {key}: {part} is not a section")
        node[parts[-1]] = yaml.safe_load(raw)
    return SystemConfig.from_dict(data)


def _config(args) -> SystemConfig:
    base = SystemConfig() if args.config is None else load_config(args.config)
    return _apply_overrides(base, args.set)


def _cmd_sweep(args) -> int:
    cfg = _config(args)
    if args.preset:
        results = run_preset(args.preset, args.out_dir, base=cfg, quick=args.quick,
                             workers=args.workers, plot=not args.no_plot)
        failures = sum(r.failures for r in results.values())
        for label in results:
            print(Path(args.out_dir) / f"{args.preset}_{label}.csv")
        return EXIT_NUMERICAL if failures else EXIT_OK
    spec = SweepSpec(cfg, args.axis, parse_grid(args.grid), tuple(args.evaluators.split(",")),
                     output_path=args.out, min_errors=args.min_errors, max_bits=args.max_bits,
                     partner=args.partner, workers=args.workers)
    result = run_sweep(spec)
    if args.out is None:
        sys.stdout.write(result.to_csv())
    elif not args.no_plot:
        from .plot import plot_results

        plot_results({"sweep": result}, Path(args.out).with_suffix(".svg"), x_label=args.axis)
    return EXIT_NUMERICAL if result.failures else EXIT_OK


def _cmd_optimize_rho(args) -> int:
    try:
        rho, ber = optimize_rho(_config(args), parse_grid(args.grid))
    except RuntimeError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    print(f"rho*={rho!r} ber*={ber!r}")
    return EXIT_OK


def _cmd_approx_error(args) -> int:
    points = approximation_error(_config(args), [int(c) for c in parse_grid(args.chi)],
                                 min_errors=args.min_errors, max_bits=args.max_bits)
    print("chi,lambda,analytic,simulated,flag")
    for p in points:
        print(f"{p.chi},{p.value!r},{p.analytic!r},{p.reference!r},{p.flag}")
    return EXIT_NUMERICAL if any(p.flag != "ok" for p in points) else EXIT_OK


def _cmd_diff_lambda(args) -> int:
    points = difference_lambda(_config(args), args.model, parse_grid(args.d_grid))
    print("d,lambda")
    for d, value in points:
        print(f"{d!r},{value!r}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    from .verify import dual_path_rows, nl_uniform_rows

    cfg = _config(args)
    grid = parse_grid(args.grid)
    failed = 0
    print("op,ps_db,closed,oracle,relative_error,method,status")
    for rows, tol in ((dual_path_rows(cfg, grid), args.tol), (nl_uniform_rows(cfg, grid), args.nl_tol)):
        for r in rows:
            ok = r.passes(tol)
            failed += not ok
            print(f"{r.op},{r.ps_db:g},{r.closed!r},{r.oracle!r},{r.relative_error:.3e},{r.method},"
                  f"{'pass' if ok else 'FAIL'}")
    return EXIT_NUMERICAL if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ehrelay", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("config", nargs="?", help="YAML configuration file (defaults if omitted)")
        p.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override a configuration field, e.g. eh.rho=0.5 or ps_db=40")

    p = sub.add_parser("sweep", help="evaluate BER along one axis or run a figure preset")
    common(p)
    p.add_argument("--axis", choices=AXES, default="ps_db")
    p.add_argument("--grid", default="0:60:5")
    p.add_argument("--evaluators", default="analytic_L,analytic_NL",
                   help=f"comma-separated subset of {','.join(EVALUATORS)}")
    p.add_argument("--out", help="CSV path; printed to stdout when omitted")
    p.add_argument("--partner", type=int, default=0,
                   help="fixed partner antenna count for n_ip/n_eh axes in PS mode")
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--out-dir", default="results")
    p.add_argument("--quick", action="store_true", help="thin grids for presets")
    p.add_argument("--no-plot", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--min-errors", type=int, default=200)
    p.add_argument("--max-bits", type=int, default=10**8)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("optimize-rho", help="grid search of the PS split factor")
    common(p)
    p.add_argument("--grid", default="0.05:0.95:0.05")
    p.set_defaults(func=_cmd_optimize_rho)

    p = sub.add_parser("approx-error", help="Lambda(chi) against Monte-Carlo")
    common(p)
    p.add_argument("--chi", default="1,2,5,10,15,20,25,30")
    p.add_argument("--min-errors", type=int, default=100_000)
    p.add_argument("--max-bits", type=int, default=10**8)
    p.set_defaults(func=_cmd_approx_error)

    p = sub.add_parser("diff-lambda", help="uniform minus fixed-distance BER")
    common(p)
    p.add_argument("--model", choices=("L", "NL"), default="L")
    p.add_argument("--d-grid", default="1:3:0.1")
    p.set_defaults(func=_cmd_diff_lambda)

    p = sub.add_parser("verify", help="closed forms against direct quadrature")
    common(p)
    p.add_argument("--grid", default="0:55:5")
    p.add_argument("--tol", type=float, default=1e-4)
    p.add_argument("--nl-tol", type=float, default=5e-3,
                   help="tolerance of the Chebyshev-rule NL uniform SER")
    p.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse reports bad options with status 2, which is reserved here
        return EXIT_OK if exc.code in (0, None) else EXIT_CONFIG
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigError, OSError, yaml.YAMLError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
