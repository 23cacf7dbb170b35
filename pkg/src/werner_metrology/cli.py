"""Command-line front end.

Subcommands::

    werner-metrology probabilities --strategy bell --eta 1 --points 5
    werner-metrology fisher-sweep --points 11
    werner-metrology simulate --strategy bell --eta 1 --phi 0.7853981634 --shots 10000 --trials 300 --seed 7
    werner-metrology tomography --eta 0.7 --shots 100000 --seed 1

Angles are in radians.  Data goes to stdout, diagnostics to stderr.
Exit codes: 0 success, 2 domain error, 3 flat likelihood, 4 infeasible counts.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DomainError, FlatLikelihoodError, InfeasibleCountsError, MetrologyError
from .estimation import ExperimentConfig, run_monte_carlo
from .fisher import fisher_bell_closed, fisher_local_closed, qfi_coherent_closed
from .measurements import STRATEGY_LABELS, VisibilityModelParams, model_probs
from .states import werner
from .tomography import TomographySettings, tomography_report

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_FLAT = 3
EXIT_INFEASIBLE = 4

FISHER_COLUMNS = ("eta", "F_bell", "F_local", "QFI")


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    start: float
    stop: float
    points: int

    def __post_init__(self) -> None:
        if self.parameter not in ("phi", "eta"):
            raise DomainError(f"sweep parameter must be phi or eta, got {self.parameter!r}")
        if self.points < 2:
            raise DomainError("a sweep needs at least 2 points")
        if not self.start < self.stop:
            raise DomainError("sweep start must be below stop")
        if self.parameter == "eta" and not (0.0 <= self.start and self.stop <= 1.0):
            raise DomainError("eta sweep must stay inside [0, 1]")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)


def _emit_table(header: Sequence[str], rows: list[list[float]], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([dict(zip(header, r)) for r in rows], indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for r in rows:
        writer.writerow([repr(float(x)) for x in r])
    return buf.getvalue()


def cmd_probabilities(strategy: str, sweep: SweepSpec, eta: float, visibility: float, fmt: str = "csv") -> str:
    params = VisibilityModelParams(eta, visibility)
    labels = STRATEGY_LABELS[strategy]
    rows = []
    for phi in sweep.values():
        dist = model_probs(strategy, float(phi), params)
        rows.append([float(phi), *dist.probabilities.tolist()])
    return _emit_table(("phi", *labels), rows, fmt)


def cmd_fisher_sweep(sweep: SweepSpec, phi: float = math.pi / 4, fmt: str = "csv") -> str:
    rows = [
        [float(eta), fisher_bell_closed(phi, eta), fisher_local_closed(phi, eta), qfi_coherent_closed(eta)]
        for eta in np.clip(sweep.values(), 0.0, 1.0)
    ]
    return _emit_table(FISHER_COLUMNS, rows, fmt)


def cmd_simulate(config: ExperimentConfig, fmt: str = "json") -> str:
    report = run_monte_carlo(config)
    return report.to_csv() if fmt == "csv" else report.to_json() + "\n"


def cmd_tomography(eta: float, shots: int, seed: int, exact: bool = False) -> str:
    target = werner(eta)
    report = tomography_report(target, TomographySettings(shots, seed), exact=exact)
    return report.to_json() + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="werner-metrology", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("probabilities", help="outcome probabilities versus phi")
    p.add_argument("--strategy", choices=sorted(STRATEGY_LABELS), default="bell")
    p.add_argument("--eta", type=float, default=1.0)
    p.add_argument("--visibility", type=float, default=1.0, help="interference visibility V (e.g. 0.96)")
    p.add_argument("--start", type=float, default=0.0, help="first phi, radians")
    p.add_argument("--stop", type=float, default=math.pi / 2, help="last phi, radians")
    p.add_argument("--points", type=int, default=41)
    p.add_argument("--output", choices=("csv", "json"), default="csv")

    f = sub.add_parser("fisher-sweep", help="Fisher information versus eta at fixed phi")
    f.add_argument("--phi", type=float, default=math.pi / 4, help="radians")
    f.add_argument("--start", type=float, default=0.0)
    f.add_argument("--stop", type=float, default=1.0)
    f.add_argument("--points", type=int, default=21)
    f.add_argument("--output", choices=("csv", "json"), default="csv")

    s = sub.add_parser("simulate", help="Monte Carlo estimation versus the Cramer-Rao bound")
    s.add_argument("--config", type=Path, help="JSON file with ExperimentConfig fields; flags override")
    s.add_argument("--strategy", choices=sorted(STRATEGY_LABELS))
    s.add_argument("--eta", type=float)
    s.add_argument("--phi", type=float, help="radians, in [0, pi/2]")
    s.add_argument("--visibility", type=float)
    s.add_argument("--shots", type=int)
    s.add_argument("--trials", type=int)
    s.add_argument("--seed", type=int)
    s.add_argument("--output", choices=("csv", "json"), default="json")

    t = sub.add_parser("tomography", help="simulated tomography of a Werner state")
    t.add_argument("--eta", type=float, required=True)
    t.add_argument("--shots", type=int, default=100_000, help="shots per setting")
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--exact", action="store_true", help="use exact probabilities instead of sampling")
    return parser


_SIM_FLAGS = {
    "strategy": "strategy",
    "eta": "eta_true",
    "phi": "phi_true",
    "visibility": "visibility",
    "shots": "shots",
    "trials": "trials",
    "seed": "seed",
}


def _simulation_config(args: argparse.Namespace) -> ExperimentConfig:
    fields: dict = {}
    if args.config is not None:
        fields.update(json.loads(args.config.read_text(encoding="utf-8")))
    for flag, name in _SIM_FLAGS.items():
        value = getattr(args, flag)
        if value is not None:
            fields[name] = value
    if "eta_true" not in fields or "phi_true" not in fields:
        raise DomainError("simulate needs --eta and --phi (or a --config providing them)")
    return ExperimentConfig.from_dict(fields)


def run(args: argparse.Namespace) -> str:
    if args.command == "probabilities":
        sweep = SweepSpec("phi", args.start, args.stop, args.points)
        return cmd_probabilities(args.strategy, sweep, args.eta, args.visibility, args.output)
    if args.command == "fisher-sweep":
        sweep = SweepSpec("eta", args.start, args.stop, args.points)
        return cmd_fisher_sweep(sweep, args.phi, args.output)
    if args.command == "simulate":
        return cmd_simulate(_simulation_config(args), args.output)
    return cmd_tomography(args.eta, args.shots, args.seed, args.exact)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out = run(args)
    except FlatLikelihoodError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FLAT
    except InfeasibleCountsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (MetrologyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    sys.stdout.write(out)
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
