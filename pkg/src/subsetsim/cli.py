"""Command-line entry point: estimate | sweep | trace | selftest.

Configuration comes from an optional YAML document plus command-line flags
(flags win). Outputs are deterministic for a fixed (config, seed): CSV bodies
are byte-identical across reruns; the JSON manifest additionally records
versions and wall time for provenance.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import secrets
import sys
import time
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence

import numpy as np
import yaml

from . import __version__
from ._kernels import backend_name
from .dmc import DmcEstimate, dmc_estimate
from .errors import BudgetExceededError, ValidationError
from .experiments import SweepSpec, level_trace, replicate_ss, sweep_compare
from .mma import ProposalSpec
from .model import (FailureSpec, analytic_failure_probability,
                    linear_sum_model, threshold_for_probability)
from .randmath import RandomStream
from .subsim import SsConfig, SsEstimate, expected_levels, run_subset_simulation

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_BUDGET = 3
EXIT_IO = 4

OUT_DIR_ENV = "SUBSETSIM_OUT"

_MODELS = {"linear_sum": linear_sum_model}

SWEEP_DEFAULT_DIM = 1000
SWEEP_DEFAULT_GRID = [float(v) for v in np.linspace(0.0, 200.0, 41)]
SWEEP_DEFAULT_REPLICATES = 100
SWEEP_QUICK_REPLICATES = 20


@dataclass
class RunConfig:
    """Fully resolved run configuration (the serialized form)."""

    command: str = "estimate"
    model_name: str = "linear_sum"
    dim: Optional[int] = None
    y_star: Optional[float] = None
    p_target: Optional[float] = None
    method: str = "ss"
    level_probability: float = 0.1
    samples_per_level: int = 1000
    proposal_kind: str = "gaussian"
    proposal_spread: float = 1.0
    adapt: bool = False
    max_levels: int = 50
    replicates: int = 1
    seed: int = 0
    out_dir: str = "out"
    dmc_samples: Optional[int] = None
    sweep_thresholds: Optional[List[float]] = None
    sweep_replicates: Optional[int] = None
    quick: bool = False

    def effective_dim(self) -> int:
        if self.dim is not None:
            return self.dim
        return SWEEP_DEFAULT_DIM if self.command == "sweep" else 2

    def resolved_y_star(self) -> float:
        if (self.y_star is None) == (self.p_target is None):
            raise ValidationError(
                "exactly one of y_star / p_target must be given "
                f"(got y_star={self.y_star!r}, p_target={self.p_target!r})"
            )
        if self.y_star is not None:
            return float(self.y_star)
        return threshold_for_probability(self.effective_dim(), float(self.p_target))

    def build_model(self):
        try:
            factory = _MODELS[self.model_name]
        except KeyError:
            raise ValidationError(
                f"unknown model {self.model_name!r}; available: {sorted(_MODELS)}"
            ) from None
        return factory(self.effective_dim())

    def ss_config(self, keep_samples: bool = False) -> SsConfig:
        config = SsConfig(
            level_probability=self.level_probability,
            samples_per_level=self.samples_per_level,
            proposal=ProposalSpec(self.proposal_kind, self.proposal_spread),
            adapt=self.adapt,
            max_levels=self.max_levels,
            seed=self.seed,
            keep_samples=keep_samples,
        )
        config.validate()
        return config

    def as_dict(self) -> Dict:
        return dataclasses.asdict(self)


_CONFIG_KEYS = {
    "command", "method", "y_star", "p_target", "level_probability",
    "samples_per_level", "adapt", "max_levels", "replicates", "seed",
    "out_dir", "dmc_samples", "quick",
}


def parse_config(text: str) -> RunConfig:
    """Parse a YAML configuration document into a validated RunConfig."""
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        location = ""
        mark = getattr(exc, "problem_mark", None)
        if mark is not None:
            location = f" at line {mark.line + 1}, column {mark.column + 1}"
        raise ValidationError(f"config parse error{location}: {exc}") from exc
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ValidationError("config document must be a mapping of keys to values")

    config = RunConfig()
    known = set(_CONFIG_KEYS) | {"model", "proposal", "sweep"}
    unknown = set(raw) - known
    if unknown:
        raise ValidationError(f"unknown config keys: {sorted(unknown)}")

    for key in _CONFIG_KEYS & set(raw):
        setattr(config, key, raw[key])

    model = raw.get("model", {})
    if model:
        if not isinstance(model, dict):
            raise ValidationError("config key 'model' must be a mapping")
        config.model_name = model.get("name", config.model_name)
        config.dim = model.get("dim", config.dim)
    proposal = raw.get("proposal", {})
    if proposal:
        if not isinstance(proposal, dict):
            raise ValidationError("config key 'proposal' must be a mapping")
        config.proposal_kind = proposal.get("kind", config.proposal_kind)
        config.proposal_spread = proposal.get("spread", config.proposal_spread)
    sweep = raw.get("sweep", {})
    if sweep:
        if not isinstance(sweep, dict):
            raise ValidationError("config key 'sweep' must be a mapping")
        if "thresholds" in sweep:
            config.sweep_thresholds = [float(v) for v in sweep["thresholds"]]
        if "replicates" in sweep:
            config.sweep_replicates = int(sweep["replicates"])

    _validate_types(config)
    return config


def _validate_types(config: RunConfig) -> None:
    if config.method not in ("ss", "dmc", "both"):
        raise ValidationError(
            f"method must be one of ss|dmc|both; got {config.method!r}")
    if config.dim is not None and config.dim < 1:
        raise ValidationError(f"model.dim must be >= 1; got {config.dim}")
    if config.replicates < 1:
        raise ValidationError(f"replicates must be >= 1; got {config.replicates}")
    if not isinstance(config.seed, int) or isinstance(config.seed, bool):
        raise ValidationError(f"seed must be an integer; got {config.seed!r}")


# ---------------------------------------------------------------------------
# serialization

def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def _write_csv(path: str, header: Sequence[str], rows: Sequence[Sequence]) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(cell) for cell in row) for row in rows)
    with open(path, "w", newline="") as handle:
        handle.write("\n".join(lines) + "\n")


def _write_json(path: str, payload: Dict) -> None:
    with open(path, "w") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")


def _levels_rows(estimate: SsEstimate) -> List[List]:
    rows = []
    for rec in estimate.level_records:
        stats = rec.acceptance_stats
        rate = None if stats is None else stats.candidate_acceptance_rate
        rows.append([rec.level, rec.threshold, rec.n_failures, rate,
                     rec.evaluations_used])
    return rows


def _responses_rows(estimate: SsEstimate) -> List[List]:
    rows = []
    for rec in estimate.level_records:
        for rank, response in enumerate(rec.sorted_responses, start=1):
            rows.append([rec.level, rank, float(response)])
    return rows


def _samples_rows(estimate: SsEstimate) -> List[List]:
    rows = []
    for rec in estimate.level_records:
        if rec.samples is None:
            continue
        for sample in rec.samples:
            rows.append([rec.level, float(sample.point[0]), float(sample.point[1])])
    return rows


def _ss_run_payload(estimate: Optional[SsEstimate], replicate: int) -> Dict:
    if estimate is None:
        return {"replicate": replicate, "excluded": True}
    return {
        "replicate": replicate,
        "p_hat": estimate.p_hat,
        "levels": estimate.n_levels,
        "total_samples": estimate.total_samples,
        "total_evaluations": estimate.total_evaluations,
        "final_fraction": estimate.final_fraction,
        "tie_flagged": estimate.tie_flagged,
        "thresholds": [float(t) for t in estimate.thresholds],
    }


def _geometric_mean(values: Sequence[float]) -> float:
    if not values:
        return float("nan")
    return float(math.exp(np.mean(np.log(np.asarray(values)))))


# ---------------------------------------------------------------------------
# commands

def _log(message: str) -> None:
    print(message, file=sys.stderr)


def cmd_estimate(config: RunConfig, out_dir: str) -> Dict:
    y_star = config.resolved_y_star()
    dim = config.effective_dim()
    model = config.build_model()
    spec = FailureSpec(model, y_star)
    p_true = analytic_failure_probability(dim, y_star) \
        if config.model_name == "linear_sum" else None
    summary: Dict = {
        "command": "estimate",
        "model": {"name": config.model_name, "dim": dim},
        "y_star": y_star,
        "p_target": config.p_target,
        "p_true": p_true,
        "method": config.method,
        "seed": config.seed,
    }

    ss_mean = None
    if config.method in ("ss", "both"):
        ss_config = config.ss_config()
        estimates, rep_summary = replicate_ss(
            spec, ss_config, config.replicates, config.seed)
        successes = [e for e in estimates if e is not None]
        if not successes:
            raise BudgetExceededError(
                f"all {config.replicates} subset-simulation replicates "
                "exceeded the level budget")
        ss_mean = rep_summary.mean

        # replicate 0 rerun with retained samples backs levels.csv (and the
        # 2-D scatter); identical draws, so it matches estimates[0] exactly
        detail_index = next(i for i, e in enumerate(estimates) if e is not None)
        detail = run_subset_simulation(
            spec, config.ss_config(keep_samples=dim == 2),
            RandomStream(config.seed).substream(detail_index))
        _write_csv(os.path.join(out_dir, "levels.csv"),
                   ["level", "threshold", "n_failures", "acceptance_rate",
                    "evaluations"],
                   _levels_rows(detail))
        if dim == 2:
            _write_csv(os.path.join(out_dir, "samples.csv"),
                       ["level", "x1", "x2"], _samples_rows(detail))

        p_hats = [e.p_hat for e in successes]
        summary["ss"] = {
            "replicates": config.replicates,
            "exclusions": rep_summary.exclusions,
            "mean": rep_summary.mean,
            "std": rep_summary.std,
            "cov": rep_summary.cov,
            "geometric_mean": _geometric_mean(p_hats),
            "mean_total_samples": rep_summary.mean_total_samples,
            "mean_levels": rep_summary.mean_levels,
            "levels_histogram": {
                str(levels): sum(1 for e in successes if e.n_levels == levels)
                for levels in sorted({e.n_levels for e in successes})
            },
            "runs": [_ss_run_payload(e, i) for i, e in enumerate(estimates)],
        }
        if config.replicates > 1:
            rows = []
            for index, estimate in enumerate(estimates):
                if estimate is None:
                    continue
                rows.append([index, estimate.p_hat, estimate.n_levels,
                             estimate.total_samples, estimate.total_evaluations,
                             p_true, rep_summary.mean])
            _write_csv(os.path.join(out_dir, "runs.csv"),
                       ["replicate", "p_hat", "levels", "total_samples",
                        "total_evaluations", "p_true", "p_hat_mean"],
                       rows)

    if config.method in ("dmc", "both"):
        budget = config.dmc_samples
        if budget is None:
            if ss_mean is not None:
                budget = int(math.ceil(summary["ss"]["mean_total_samples"]))
            else:
                # planning heuristic: budget an SS run at the same settings
                n = config.samples_per_level
                n_seeds = round(n * config.level_probability)
                levels = max(0, expected_levels(
                    p_true if p_true and 0 < p_true < 1 else 0.5,
                    config.level_probability))
                budget = n + levels * (n - n_seeds)
        master = RandomStream(config.seed)
        runs: List[DmcEstimate] = [
            dmc_estimate(spec, budget, master.substream("dmc", index))
            for index in range(config.replicates)
        ]
        p_hats = np.array([run.p_hat for run in runs])
        mean = float(p_hats.mean())
        std = 0.0 if len(runs) == 1 else float(p_hats.std(ddof=1))
        summary["dmc"] = {
            "n_samples": budget,
            "replicates": config.replicates,
            "mean": mean,
            "std": std,
            "cov": std / mean if mean != 0.0 else None,
            "runs": [
                {"replicate": i, "p_hat": run.p_hat, "n_failures": run.n_failures,
                 "theoretical_cov": run.theoretical_cov}
                for i, run in enumerate(runs)
            ],
        }

    _write_json(os.path.join(out_dir, "summary.json"), summary)
    return summary


def cmd_trace(config: RunConfig, out_dir: str) -> Dict:
    y_star = config.resolved_y_star()
    spec = FailureSpec(config.build_model(), y_star)
    estimate = level_trace(spec, config.ss_config(), config.seed)
    _write_csv(os.path.join(out_dir, "levels.csv"),
               ["level", "threshold", "n_failures", "acceptance_rate",
                "evaluations"],
               _levels_rows(estimate))
    _write_csv(os.path.join(out_dir, "responses.csv"),
               ["level", "rank", "response"], _responses_rows(estimate))
    summary = {
        "command": "trace",
        "model": {"name": config.model_name, "dim": config.effective_dim()},
        "y_star": y_star,
        "seed": config.seed,
        "p_hat": estimate.p_hat,
        "levels": estimate.n_levels,
        "total_samples": estimate.total_samples,
        "total_evaluations": estimate.total_evaluations,
        "n_failures_per_level": [rec.n_failures for rec in estimate.level_records],
        "thresholds": [float(t) for t in estimate.thresholds],
        "tie_flagged": estimate.tie_flagged,
    }
    _write_json(os.path.join(out_dir, "summary.json"), summary)
    return summary


def cmd_sweep(config: RunConfig, out_dir: str) -> Dict:
    dim = config.effective_dim()
    thresholds = config.sweep_thresholds or SWEEP_DEFAULT_GRID
    replicates = config.sweep_replicates
    if replicates is None:
        replicates = SWEEP_QUICK_REPLICATES if config.quick else SWEEP_DEFAULT_REPLICATES
    sweep = SweepSpec(
        dim=dim,
        thresholds=thresholds,
        replicates=replicates,
        config=config.ss_config(),
        dmc_budget=config.dmc_samples,
    )
    _log(f"sweep: {len(thresholds)} grid points x {replicates} replicates "
         f"(d={dim}, n={config.samples_per_level})")
    rows = sweep_compare(sweep, config.seed)
    _write_csv(os.path.join(out_dir, "sweep.csv"),
               ["y_star", "p_true", "ss_mean", "ss_std", "ss_cov",
                "ss_mean_total_samples", "dmc_mean", "dmc_cov",
                "dmc_cov_theory", "replicates", "exclusions"],
               [[row.y_star, row.p_true, row.ss_mean, row.ss_std, row.ss_cov,
                 row.ss_mean_total_samples, row.dmc_mean, row.dmc_cov,
                 row.dmc_cov_theory, row.replicates, row.exclusions]
                for row in rows])
    return {"command": "sweep", "rows": len(rows), "replicates": replicates,
            "dim": dim}


def cmd_selftest(config: RunConfig) -> int:
    from . import selftest
    return selftest.run(quick=config.quick)


# ---------------------------------------------------------------------------
# argument handling

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="subsetsim",
        description="Rare-event failure probability estimation via Subset "
                    "Simulation, with a Direct Monte Carlo baseline.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("estimate", "estimate a failure probability (ss, dmc, or both)"),
        ("sweep", "SS-vs-DMC comparison over a threshold grid"),
        ("trace", "single run emitting per-level response curves"),
        ("selftest", "run the built-in invariant checks"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", metavar="PATH", help="YAML configuration file")
        cmd.add_argument("--seed", type=int, help="master RNG seed (default 0)")
        cmd.add_argument("--entropy-seed", action="store_true",
                         help="seed from OS entropy instead of the fixed default")
        cmd.add_argument("--out", metavar="DIR", help="output directory")
        cmd.add_argument("--quick", action="store_true",
                         help="CI profile (sweep replicates = 20)")
        cmd.add_argument("--model", help="model name (linear_sum)")
        cmd.add_argument("--dim", type=int, help="input dimension d")
        cmd.add_argument("--y-star", type=float, dest="y_star",
                         help="critical threshold")
        cmd.add_argument("--p-target", type=float, dest="p_target",
                         help="target failure probability (resolves y*)")
        cmd.add_argument("--method", choices=("ss", "dmc", "both"))
        cmd.add_argument("--level-probability", type=float, dest="level_probability")
        cmd.add_argument("--samples-per-level", type=int, dest="samples_per_level")
        cmd.add_argument("--proposal-kind", choices=("gaussian", "uniform"),
                         dest="proposal_kind")
        cmd.add_argument("--proposal-spread", type=float, dest="proposal_spread")
        cmd.add_argument("--adapt", action="store_true", default=None,
                         help="adapt proposal spread between levels")
        cmd.add_argument("--max-levels", type=int, dest="max_levels")
        cmd.add_argument("--replicates", type=int)
        cmd.add_argument("--dmc-samples", type=int, dest="dmc_samples")
        cmd.add_argument("--sweep-thresholds", dest="sweep_thresholds",
                         help="comma-separated y* grid for sweep")
        cmd.add_argument("--sweep-replicates", type=int, dest="sweep_replicates")
    return parser


def _merge_flags(config: RunConfig, args: argparse.Namespace) -> RunConfig:
    config.command = args.command
    overrides = {
        "seed": args.seed,
        "out_dir": args.out,
        "model_name": args.model,
        "dim": args.dim,
        "y_star": args.y_star,
        "p_target": args.p_target,
        "method": args.method,
        "level_probability": args.level_probability,
        "samples_per_level": args.samples_per_level,
        "proposal_kind": args.proposal_kind,
        "proposal_spread": args.proposal_spread,
        "adapt": args.adapt,
        "max_levels": args.max_levels,
        "replicates": args.replicates,
        "dmc_samples": args.dmc_samples,
        "sweep_replicates": args.sweep_replicates,
    }
    for key, value in overrides.items():
        if value is not None:
            setattr(config, key, value)
    if args.sweep_thresholds is not None:
        config.sweep_thresholds = [
            float(v) for v in args.sweep_thresholds.split(",") if v.strip()
        ]
    if args.quick:
        config.quick = True
    # a flag y_star/p_target replaces (not duplicates) a config-file setting
    if args.y_star is not None and args.p_target is None:
        config.p_target = None
    if args.p_target is not None and args.y_star is None:
        config.y_star = None
    if args.entropy_seed and args.seed is None:
        config.seed = secrets.randbits(64)
        _log(f"entropy seed: {config.seed}")
    _validate_types(config)
    return config


def _manifest(config: RunConfig, summary: Dict, wall_time: float) -> Dict:
    return {
        "config": config.as_dict(),
        "seed": config.seed,
        "kernel_backend": backend_name(),
        "versions": {
            "subsetsim": __version__,
            "numpy": np.__version__,
            "python": sys.version.split()[0],
        },
        "wall_time_s": wall_time,
        "result": {k: v for k, v in summary.items()
                   if not isinstance(v, (list, dict))},
    }


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    started = time.monotonic()
    try:
        if args.config is not None:
            try:
                with open(args.config) as handle:
                    text = handle.read()
            except OSError as exc:
                _log(f"cannot read config {args.config}: {exc}")
                return EXIT_IO
            config = parse_config(text)
        else:
            config = RunConfig()
        config = _merge_flags(config, args)

        if config.command == "selftest":
            return cmd_selftest(config)

        out_dir = os.environ.get(OUT_DIR_ENV) or config.out_dir
        try:
            os.makedirs(out_dir, exist_ok=True)
        except OSError as exc:
            _log(f"cannot create output directory {out_dir}: {exc}")
            return EXIT_IO

        if config.command == "estimate":
            summary = cmd_estimate(config, out_dir)
        elif config.command == "trace":
            summary = cmd_trace(config, out_dir)
        elif config.command == "sweep":
            summary = cmd_sweep(config, out_dir)
        else:  # pragma: no cover - argparse enforces the choices
            raise ValidationError(f"unknown command {config.command!r}")

        _write_json(os.path.join(out_dir, "manifest.json"),
                    _manifest(config, summary, time.monotonic() - started))
        _log(f"wrote results to {out_dir}")
        return EXIT_OK
    except ValidationError as exc:
        _log(f"validation error: {exc}")
        return EXIT_VALIDATION
    except BudgetExceededError as exc:
        _log(f"budget exceeded: {exc}")
        return EXIT_BUDGET
    except OSError as exc:
        _log(f"I/O error: {exc}")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
