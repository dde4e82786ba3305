"""Unimodal beam alignment: a structured KL-UCB bandit for mmWave beam-pair search."""

from uba.baselines import ExhaustiveConfig, SweepResult, decoupled_sweep, exhaustive_select, vanilla_klucb_select
from uba.beam import (
    BeamSpace,
    RewardProfile,
    RewardSample,
    build_beam_space,
    build_profile,
    gaussian_beam_powers,
    sample_reward,
)
from uba.bounds import (
    BoundReport,
    bound_report,
    lower_bound_constant,
    unstructured_constant,
    upper_bound_coefficient,
    upper_bound_envelope,
)
from uba.errors import (
    ConfigError,
    DegenerateSpaceError,
    DomainError,
    ExperimentError,
    InvalidGeometryError,
    ModelViolationError,
    OrderingError,
    PolicyStateError,
    UbaError,
)
from uba.klucb import ArmStatistics, exploration_budget, kl_bernoulli, klucb_index
from uba.policy import PolicyState, UbaConfig, check_termination, neighborhood, peak_to_average, select_arm, update
from uba.rng import SlotStream

__version__ = "0.1.0"

__all__ = [
    "ArmStatistics",
    "BeamSpace",
    "BoundReport",
    "ConfigError",
    "DegenerateSpaceError",
    "DomainError",
    "ExhaustiveConfig",
    "ExperimentError",
    "InvalidGeometryError",
    "ModelViolationError",
    "OrderingError",
    "PolicyState",
    "PolicyStateError",
    "RewardProfile",
    "RewardSample",
    "SlotStream",
    "SweepResult",
    "UbaConfig",
    "UbaError",
    "bound_report",
    "build_beam_space",
    "build_profile",
    "check_termination",
    "decoupled_sweep",
    "exhaustive_select",
    "exploration_budget",
    "gaussian_beam_powers",
    "kl_bernoulli",
    "klucb_index",
    "lower_bound_constant",
    "neighborhood",
    "peak_to_average",
    "sample_reward",
    "select_arm",
    "unstructured_constant",
    "update",
    "upper_bound_coefficient",
    "upper_bound_envelope",
    "vanilla_klucb_select",
]
