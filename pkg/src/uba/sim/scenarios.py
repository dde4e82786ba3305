"""Named reward scenarios and the scenario section of a config."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from uba.beam import RewardProfile, build_beam_space, build_profile
from uba.errors import ConfigError

THETA_DIRECTIONAL = (0.99, 0.98, 0.96, 0.93, 0.9, 0.1, 0.06, 0.04)
THETA_QUASI_DIRECTIONAL = (0.95, 0.9, 0.8, 0.65, 0.45, 0.25, 0.15, 0.1)
THETA_ACCURACY8 = (0.8, 0.5, 0.35, 0.3, 0.25, 0.2, 0.15, 0.1)

DEFAULT_SPACING = 10.0

# FWHM of a Gaussian beam is 2*sqrt(2 ln 2) * width
FWHM_PER_WIDTH = 2.0 * math.sqrt(2.0 * math.log(2.0))


def padded_directional(extra: int = 8) -> tuple:
    """Directional profile with ``extra`` tail arms from 0.03 down to 0.01."""
    return THETA_DIRECTIONAL + tuple(np.linspace(0.03, 0.01, extra).tolist())


def theta_accuracy128(k: int = 128) -> tuple:
    """0.8 exp(-k/4) over a floor falling from 0.02 to 0.01 (a flat floor would tie)."""
    return tuple(np.maximum(0.8 * np.exp(-np.arange(k) / 4.0), np.linspace(0.02, 0.01, k)).tolist())


@dataclass(frozen=True)
class ScenarioSpec:
    """How to build a reward profile.

    Either ``name`` refers to a canned scenario or ``success_probs`` is given
    explicitly.  For ``gaussian_beam`` powers the receive beams sit at
    ``tx_angle + k * beam_spacing`` unless ``rx_angles`` is given, and the
    beam width defaults to a 3 dB crossover between adjacent beams.  Unset
    ``power_model`` means unit powers and unset ``beam_spacing`` means 10 deg.
    """

    name: Optional[str] = None
    success_probs: Optional[Tuple[float, ...]] = None
    power_model: Optional[str] = None
    tx_angle: float = 0.0
    rx_angles: Optional[Tuple[float, ...]] = None
    beam_spacing: Optional[float] = None
    beam_width: Optional[float] = None
    threshold: Optional[float] = None

    def label(self) -> str:
        return self.name or f"custom{len(self.success_probs or ())}"


CANNED = {
    "directional": ScenarioSpec(name="directional", success_probs=THETA_DIRECTIONAL),
    "quasi_directional": ScenarioSpec(name="quasi_directional", success_probs=THETA_QUASI_DIRECTIONAL),
    "directional16": ScenarioSpec(name="directional16", success_probs=padded_directional()),
    "accuracy8": ScenarioSpec(
        name="accuracy8", success_probs=THETA_ACCURACY8, power_model="gaussian_beam", beam_spacing=10.0
    ),
    "accuracy128": ScenarioSpec(name="accuracy128", success_probs=theta_accuracy128(), beam_spacing=1.0),
}


def resolve(scenario: ScenarioSpec) -> ScenarioSpec:
    """Fill a named scenario from the canned table; explicitly set fields win."""
    if scenario.success_probs is not None:
        return scenario
    if scenario.name is None:
        raise ConfigError("scenario needs a name or success_probs")
    try:
        base = CANNED[scenario.name]
    except KeyError:
        raise ConfigError(f"unknown scenario {scenario.name!r}; known: {sorted(CANNED)}") from None
    changed = {
        f.name: getattr(scenario, f.name)
        for f in dataclasses.fields(scenario)
        if getattr(scenario, f.name) != f.default
    }
    return dataclasses.replace(base, **changed)


def build_scenario(scenario: ScenarioSpec) -> RewardProfile:
    scenario = resolve(scenario)
    theta = np.asarray(scenario.success_probs, dtype=float)
    k = len(theta)
    power_model = scenario.power_model or "unit"
    spacing = DEFAULT_SPACING if scenario.beam_spacing is None else scenario.beam_spacing
    if scenario.rx_angles is not None:
        rx = np.asarray(scenario.rx_angles, dtype=float)
    else:
        rx = scenario.tx_angle + spacing * np.arange(k)
    try:
        space = build_beam_space(1, k, scenario.tx_angle, rx)
    except ValueError as exc:
        raise ConfigError(f"scenario {scenario.label()}: {exc}") from exc
    # arms must keep the order in which success_probs were listed
    if scenario.rx_angles is None and np.any(np.diff(space.misalignment) <= 0):
        raise ConfigError(f"scenario {scenario.label()}: {k} beams at {spacing} deg spacing wrap past 180 deg")
    width = scenario.beam_width
    if power_model == "gaussian_beam" and width is None:
        width = spacing / FWHM_PER_WIDTH
    try:
        return build_profile(space, power_model, theta, width=width, threshold=scenario.threshold)
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"scenario {scenario.label()}: {exc}") from exc
