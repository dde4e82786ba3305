"""Command line entry point: ``uba simulate | bounds | reproduce``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from importlib import resources
from pathlib import Path

from uba.bounds import bound_report
from uba.errors import UbaError
from uba.sim.config import FORMATS, POLICIES, SimConfig, load_config, parse_config, sweep_lists
from uba.sim.engine import run_experiment
from uba.sim.output import bounds_document, emit_results
from uba.sim.scenarios import ScenarioSpec, build_scenario

log = logging.getLogger("uba")

FIGURES = ("regret8", "regret16", "accuracy8", "accuracy128")


def canned_config_text(figure: str) -> str:
    return resources.files("uba").joinpath(f"data/configs/{figure}.ini").read_text()


def _overrides(cfg: SimConfig, args) -> SimConfig:
    changes = {}
    for attr, value in (
        ("policy", getattr(args, "policy", None)),
        ("runs", args.runs),
        ("base_seed", args.seed),
        ("horizon", getattr(args, "horizon", None)),
        ("output_format", args.format),
        ("workers", args.workers),
    ):
        if value is not None:
            changes[attr] = value
    return cfg.replace(**changes) if changes else cfg


def _summary(result) -> str:
    c = result.curve
    line = f"{result.config.policy:>10} {result.config.scenario.label():>18}  regret(T={int(c.t[-1])}) = {c.mean_regret[-1]:.3f}"
    det = result.detection
    if det is not None:
        if det.n_terminated:
            line += (
                f"  stopped {det.n_terminated}/{det.runs}"
                f"  peak declared {det.accuracy(result.profile.k_star):.3f}"
                f"  mean delay {det.terminated_delays.mean():.2f}"
            )
        else:
            line += f"  stopped 0/{det.runs}"
    return line


def cmd_simulate(args) -> int:
    cfg = _overrides(load_config(args.config), args)
    out = args.out or cfg.output_dir or "results"
    result = run_experiment(cfg)
    for path in emit_results(result, cfg.output_format, out):
        log.info("wrote %s", path)
    print(_summary(result))
    return 0


def cmd_bounds(args) -> int:
    cfg = load_config(args.config)
    report = bound_report(build_scenario(cfg.scenario))
    print(json.dumps(bounds_document(report, cfg.epsilon), indent=2, sort_keys=True))
    return 0


def cmd_reproduce(args) -> int:
    text = canned_config_text(args.figure)
    base = _overrides(parse_config(text, source=f"{args.figure}.ini"), args)
    sweep = sweep_lists(text)
    scenarios = sweep.get("scenarios") or [None]
    policies = sweep.get("policies") or [base.policy]
    root = Path(args.out or Path("results") / args.figure)
    for name in scenarios:
        cfg = base if name is None else base.replace(scenario=ScenarioSpec(name=name))
        for policy in policies:
            run_cfg = cfg.replace(policy=policy)
            result = run_experiment(run_cfg)
            target = root / f"{run_cfg.scenario.label()}_{policy}"
            emit_results(result, run_cfg.output_format, target)
            print(_summary(result))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="uba", description="Unimodal beam alignment simulator")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--runs", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--out")
        p.add_argument("--format", choices=FORMATS)
        p.add_argument("--workers", type=int)

    sim = sub.add_parser("simulate", help="run a Monte-Carlo experiment from a config file")
    sim.add_argument("--config", required=True)
    sim.add_argument("--policy", choices=POLICIES + ("vanilla_klucb",))
    sim.add_argument("--horizon", type=int)
    common(sim)
    sim.set_defaults(func=cmd_simulate)

    bnd = sub.add_parser("bounds", help="print regret-bound constants for a config's scenario")
    bnd.add_argument("--config", required=True)
    bnd.set_defaults(func=cmd_bounds)

    rep = sub.add_parser("reproduce", help="run one of the shipped figure configs")
    rep.add_argument("--figure", required=True, choices=FIGURES)
    rep.add_argument("--horizon", type=int)
    common(rep)
    rep.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except UbaError as exc:
        print(f"uba: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"uba: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
