"""Monte-Carlo experiment harness, result files and CLI."""

from uba.sim.config import SimConfig, load_config, parse_config
from uba.sim.engine import DetectionStats, ExperimentResult, RegretCurve, Trace, run_episode, run_experiment
from uba.sim.output import emit_results, read_regret_csv
from uba.sim.scenarios import ScenarioSpec, build_scenario

__all__ = [
    "DetectionStats",
    "ExperimentResult",
    "RegretCurve",
    "ScenarioSpec",
    "SimConfig",
    "Trace",
    "build_scenario",
    "emit_results",
    "load_config",
    "parse_config",
    "read_regret_csv",
    "run_episode",
    "run_experiment",
]
