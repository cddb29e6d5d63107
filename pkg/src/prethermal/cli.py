"""Command-line entry point.

    prethermal simulate --config scenario.json --out results.csv
    prethermal reproduce fig1 --out-dir data/
    prethermal spectrum --alpha 0.99999 [--A 0.1 --B 0.9 --omega0 1.0]

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
1 unexpected error.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .errors import ConfigError, NumericalError
from .model import BathParams, build_liouvillian, spectrum
from .scenarios import FIGURES, load_scenario, reproduce, run_scenario

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

log = logging.getLogger("prethermal")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="prethermal",
        description="Two-qubit correlated-bath simulator: prethermal dynamics, "
                    "TPM/EPM statistics and heat-exchange fluctuation theorems.",
    )
    parser.add_argument("--log-level", default="warning",
                        choices=["debug", "info", "warning", "error"])
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a scenario config and write a CSV")
    sim.add_argument("--config", required=True, help="scenario JSON file")
    sim.add_argument("--out", required=True, help="output CSV path")
    sim.add_argument("--threads", type=int, default=1, help="worker threads over sweep points")

    rep = sub.add_parser("reproduce", help="emit preset config(s) and CSV(s) for a figure")
    rep.add_argument("figure", choices=list(FIGURES))
    rep.add_argument("--out-dir", required=True)
    rep.add_argument("--threads", type=int, default=1)

    spec = sub.add_parser("spectrum", help="print the generator spectrum, gap and timescale")
    spec.add_argument("--alpha", type=float, required=True)
    spec.add_argument("--A", type=float, default=0.1)
    spec.add_argument("--B", type=float, default=0.9)
    spec.add_argument("--omega0", type=float, default=1.0)
    return parser


def _cmd_simulate(args) -> int:
    scenario = load_scenario(args.config)
    path = run_scenario(scenario, args.out, threads=max(1, args.threads))
    log.info("wrote %s", path)
    print(path)
    return EXIT_OK


def _cmd_reproduce(args) -> int:
    for path in reproduce(args.figure, args.out_dir, threads=max(1, args.threads)):
        print(path)
    return EXIT_OK


def _cmd_spectrum(args) -> int:
    try:
        params = BathParams(omega0=args.omega0, A=args.A, B=args.B, alpha=args.alpha)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    spec = spectrum(build_liouvillian(params))
    print(f"alpha={params.alpha:g} A={params.A:g} B={params.B:g} omega0={params.omega0:g}")
    print(f"null-space dimension: {spec.null_dimension}")
    print(f"spectral gap: {spec.gap:.12g}")
    print(f"equilibration time: {spec.equilibration_time:.12g}")
    print("eigenvalues (ascending |Re|):")
    for ev in spec.eigenvalues:
        print(f"  {ev.real:+.12e} {ev.imag:+.12e}j")
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level.upper(),
                        format="%(levelname)s %(name)s: %(message)s")
    handlers = {"simulate": _cmd_simulate, "reproduce": _cmd_reproduce,
                "spectrum": _cmd_spectrum}
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
