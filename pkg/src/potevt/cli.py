"""Command-line entry point: ``potevt analyze|diagnose|simulate|backtest``.

Exit codes: 0 success, 2 input/output problem, 3 fitting problem
(too few exceedances, degenerate data, no convergence), 4 bad configuration.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import pipeline
from .dist import GpdParams, LogNormalParams
from .errors import ConfigError, DomainError, InputError, PotError

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_FIT = 3
EXIT_CONFIG = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser, data: bool = True) -> None:
    p.add_argument("--out", type=Path, default=Path("potevt-out"), help="output directory")
    p.add_argument("--render", action="store_true", help="also render each CSV to SVG")
    if not data:
        return
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--format", choices=("single", "ts"), default="single")
    p.add_argument("--sign", choices=("as-is", "negate"), default="as-is")
    p.add_argument("--threshold", type=float)
    p.add_argument("--threshold-quantile", type=float)
    p.add_argument("--alpha", type=float, action="append",
                   help="confidence level; repeatable (default 0.95, 0.99, 0.995)")
    p.add_argument("--band", type=float, help="half-width of the borderline band")
    p.add_argument("--grid", help="threshold grid MIN:MAX:COUNT")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="potevt", description="Peaks-over-threshold VaR and ES estimation")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    _common(sub.add_parser("analyze", help="fit the tail and report VaR/ES"))
    _common(sub.add_parser("diagnose", help="threshold diagnostics over a grid"))

    bt = sub.add_parser("backtest", help="out-of-sample exceedance counts")
    _common(bt)
    bt.add_argument("--split", type=float, default=0.5, help="training fraction")

    sim = sub.add_parser("simulate", help="write seeded simulated losses")
    _common(sim, data=False)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--n", type=int, required=True)
    sim.add_argument("--model", choices=("gpd", "lognormal"), default="gpd")
    sim.add_argument("--xi", type=float, default=0.0)
    sim.add_argument("--beta", type=float, default=1.0)
    sim.add_argument("--mu-log", type=float, default=0.0)
    sim.add_argument("--sigma2-log", type=float, default=1.0)
    sim.add_argument("--u-offset", type=float, default=0.0)
    return parser


def config_from_args(args) -> pipeline.RunConfig:
    return pipeline.RunConfig(
        input=args.input,
        format=args.format,
        sign=args.sign,
        threshold=args.threshold,
        threshold_quantile=args.threshold_quantile,
        alphas=tuple(args.alpha) if args.alpha else pipeline.DEFAULT_ALPHAS,
        band=args.band,
        grid=pipeline.parse_grid(args.grid) if args.grid else None,
        out=args.out,
        split=getattr(args, "split", 0.5),
        render=args.render,
    )


def _simulate(args) -> None:
    try:
        if args.model == "gpd":
            model = GpdParams(args.xi, args.beta)
        else:
            model = LogNormalParams(args.mu_log, args.sigma2_log)
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc
    series = pipeline.simulate(args.seed, args.n, model, args.u_offset)
    path = pipeline.write_simulation(series, args.out)
    print(path)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "simulate":
            _simulate(args)
            return EXIT_OK
        cfg = config_from_args(args)
        if args.command == "analyze":
            report = pipeline.analyze(cfg)
        elif args.command == "diagnose":
            report = pipeline.diagnose(cfg)
        else:
            report = pipeline.run_backtest(cfg)
    except ConfigError as exc:
        print(f"potevt: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InputError as exc:
        print(f"potevt: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PotError as exc:
        print(f"potevt: fit error: {exc}", file=sys.stderr)
        return EXIT_FIT
    print(Path(cfg.out) / report["files"][-1])
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
