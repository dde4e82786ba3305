"""Bernoulli KL divergence and the KL-UCB index used to rank arms."""

from __future__ import annotations

import math
from dataclasses import dataclass

from uba import _kernels
from uba.errors import DomainError

DEFAULT_C = 3.0


@dataclass
class ArmStatistics:
    """Pull count and exact reward sum for one arm."""

    pulls: int = 0
    cumulative_energy: float = 0.0

    @property
    def empirical_mean(self) -> float:
        return self.cumulative_energy / self.pulls if self.pulls else 0.0

    def record(self, energy: float) -> None:
        self.pulls += 1
        self.cumulative_energy += energy


def _check_prob(name, value):
    if value != value:
        raise DomainError(f"{name} is NaN")
    if not 0.0 <= value <= 1.0:
        raise DomainError(f"{name}={value} outside [0, 1]")


def kl_bernoulli(theta: float, theta_star: float) -> float:
    """KL divergence between Bernoulli(theta) and Bernoulli(theta_star).

    Uses 0 log 0 = 0.  When ``theta_star`` is 0 or 1 and differs from
    ``theta`` the divergence is infinite and ``math.inf`` is returned; every
    other input gives a finite value, so ``inf`` is never an overflow.
    """
    _check_prob("theta", theta)
    _check_prob("theta_star", theta_star)
    return _kernels.kl_bern(float(theta), float(theta_star))


def exploration_budget(leader_count: int, c_const: float = DEFAULT_C) -> float:
    """f = log l + c log(log l), with both logarithms clamped at zero."""
    if leader_count < 1:
        raise DomainError(f"leader count must be >= 1, got {leader_count}")
    if not c_const > 0:
        raise DomainError(f"exploration constant must be > 0, got {c_const}")
    return _kernels.exploration_budget(float(leader_count), float(c_const))


def klucb_bound(mean: float, power: float, budget: float) -> float:
    """Largest q in [0, power] with I(mean/power, q/power) <= budget.

    Computed by bisection on q to within 1e-9.  An infinite budget returns
    ``power``.
    """
    if not power > 0:
        raise DomainError(f"power must be > 0, got {power}")
    if budget != budget or budget < 0:
        raise DomainError(f"exploration budget must be >= 0, got {budget}")
    if mean != mean or mean < 0 or mean > power * (1 + 1e-12):
        raise DomainError(f"empirical mean {mean} outside [0, {power}]")
    if math.isinf(budget):
        return float(power)
    return _kernels.klucb_index(float(mean), float(power), float(budget))


def klucb_index(stats: ArmStatistics, power: float, exploration_budget: float) -> float:
    """KL-UCB index of an arm; never-pulled arms get ``power``."""
    if exploration_budget != exploration_budget or exploration_budget < 0:
        raise DomainError(f"exploration budget must be >= 0, got {exploration_budget}")
    if stats.pulls == 0:
        return float(power)
    return klucb_bound(stats.empirical_mean, power, exploration_budget)
