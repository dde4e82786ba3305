"""Simulation configuration and its INI file format.

A config file has three sections::

    [scenario]
    name = directional            ; or success_probs = 0.9, 0.5, ...
    power_model = unit            ; unit | gaussian_beam

    [policy]
    name = uba                    ; uba | exhaustive | klucb
    gamma = 2
    c = 3.0
    termination = false
    psi_threshold = 4.0
    psi_source = power            ; power | energy

    [simulation]
    horizon = 10000
    pilot_duration = 1
    runs = 1000
    seed = 2018
"""

from __future__ import annotations

import configparser
import dataclasses
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from uba.baselines import ExhaustiveConfig
from uba.errors import ConfigError, DomainError
from uba.policy import UbaConfig
from uba.sim.scenarios import ScenarioSpec

POLICIES = ("uba", "exhaustive", "klucb")
FORMATS = ("csv", "json")

KNOWN_KEYS = {
    "scenario": {
        "name", "success_probs", "power_model", "tx_angle", "rx_angles", "beam_spacing", "beam_width", "threshold",
    },
    "policy": {
        "name", "gamma", "c", "psi_threshold", "termination", "psi_source", "min_slots", "rounds_per_arm",
        "exhaustive_mode",
    },
    "simulation": {"horizon", "pilot_duration", "runs", "seed", "epsilon", "workers", "out", "format"},
    "sweep": {"scenarios", "policies"},
}


@dataclass(frozen=True)
class SimConfig:
    horizon: int = 10_000
    pilot_duration: int = 1
    policy: str = "uba"
    scenario: ScenarioSpec = field(default_factory=lambda: ScenarioSpec(name="directional"))
    runs: int = 100
    base_seed: int = 2018
    uba: UbaConfig = field(default_factory=UbaConfig)
    exhaustive: ExhaustiveConfig = field(default_factory=ExhaustiveConfig)
    epsilon: float = 0.1
    workers: int = 1
    output_dir: Optional[str] = None
    output_format: str = "csv"

    def __post_init__(self):
        if self.policy == "vanilla_klucb":
            object.__setattr__(self, "policy", "klucb")
        if self.horizon < 1:
            raise ConfigError(f"horizon must be >= 1, got {self.horizon}")
        if self.pilot_duration < 1:
            raise ConfigError(f"pilot_duration must be >= 1, got {self.pilot_duration}")
        if self.runs < 1:
            raise ConfigError(f"runs must be >= 1, got {self.runs}")
        if self.policy not in POLICIES:
            raise ConfigError(f"policy must be one of {POLICIES}, got {self.policy!r}")
        if self.output_format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if not self.epsilon > 0:
            raise ConfigError("epsilon must be > 0")

    @property
    def n_probes(self) -> int:
        """Probe budget floor(T / T_bar)."""
        return self.horizon // self.pilot_duration

    def replace(self, **changes) -> "SimConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def _floats(text: str) -> tuple:
    try:
        return tuple(float(x) for x in text.replace("(", " ").replace(")", " ").replace(",", " ").split())
    except ValueError as exc:
        raise ConfigError(f"bad number list {text!r}") from exc


def _opt_float(sec, key):
    return sec.getfloat(key) if key in sec else None


def parse_config(text: str, source: str = "<string>") -> SimConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from exc
    unknown = set(cp.sections()) - {"scenario", "policy", "simulation", "sweep"}
    if unknown:
        raise ConfigError(f"unknown config sections: {sorted(unknown)}")
    for name in cp.sections():
        extra = set(cp[name]) - KNOWN_KEYS[name]
        if extra:
            raise ConfigError(f"{source}: unknown keys in [{name}]: {sorted(extra)}")
    for name in ("scenario", "policy", "simulation"):
        if not cp.has_section(name):
            cp.add_section(name)
    sc, po, si = cp["scenario"], cp["policy"], cp["simulation"]

    try:
        probs = _floats(sc["success_probs"]) if "success_probs" in sc else None
        scenario = ScenarioSpec(
            name=sc.get("name") or (None if probs else "directional"),
            success_probs=probs,
            power_model=sc.get("power_model") or None,
            tx_angle=sc.getfloat("tx_angle", 0.0),
            rx_angles=_floats(sc["rx_angles"]) if "rx_angles" in sc else None,
            beam_spacing=_opt_float(sc, "beam_spacing"),
            beam_width=_opt_float(sc, "beam_width"),
            threshold=_opt_float(sc, "threshold"),
        )
        uba = UbaConfig(
            gamma=po.getint("gamma", 2),
            c_const=po.getfloat("c", 3.0),
            psi_threshold=po.getfloat("psi_threshold", 4.0),
            termination_enabled=po.getboolean("termination", False),
            psi_source=po.get("psi_source", "power"),
            min_slots=po.getint("min_slots", 2),
        )
        exhaustive = ExhaustiveConfig(
            rounds_per_arm=po.getint("rounds_per_arm", 1),
            mode=po.get("exhaustive_mode", "perpetual_round_robin"),
        )
        return SimConfig(
            horizon=si.getint("horizon", 10_000),
            pilot_duration=si.getint("pilot_duration", 1),
            policy=po.get("name", "uba"),
            scenario=scenario,
            runs=si.getint("runs", 100),
            base_seed=si.getint("seed", 2018),
            uba=uba,
            exhaustive=exhaustive,
            epsilon=si.getfloat("epsilon", 0.1),
            workers=si.getint("workers", 1),
            output_dir=si.get("out") or None,
            output_format=si.get("format", "csv"),
        )
    except (ValueError, DomainError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"{source}: {exc}") from exc


def load_config(path) -> SimConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text, source=str(path))


def sweep_lists(text: str) -> dict:
    """The optional [sweep] section: comma lists of scenarios and policies."""
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    cp.read_string(text)
    if not cp.has_section("sweep"):
        return {}
    sw = cp["sweep"]
    return {key: [v.strip() for v in sw[key].split(",") if v.strip()] for key in sw}
