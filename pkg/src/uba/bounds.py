"""Regret-bound constants for a reward profile.

* ``lower_bound_constant``: the structured asymptotic lower-bound constant,
  summed over the optimal arm's reward-filtered neighbours only.
* ``unstructured_constant``: the same terms summed over every sub-optimal arm.
* ``upper_bound_envelope``: (1 + eps) * coefficient * log T for the UBA policy.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from uba.beam import RewardProfile
from uba.errors import DomainError
from uba.klucb import kl_bernoulli


class BoundDomainError(DomainError):
    """A divergence argument left (0, 1) for the named arm."""

    def __init__(self, message, arm):
        super().__init__(message)
        self.arm = arm


def filtered_neighbors(profile: RewardProfile, arm: Optional[int] = None) -> list:
    """Line neighbours j of ``arm`` with p_arm * theta_arm <= p_j (default: the best arm)."""
    k = profile.k_star if arm is None else arm
    target = profile.means[k]
    return [j for j in (k - 1, k + 1) if 0 <= j < profile.k and target <= profile.powers[j]]


def line_neighbors(profile: RewardProfile, arm: Optional[int] = None) -> list:
    k = profile.k_star if arm is None else arm
    return [j for j in (k - 1, k + 1) if 0 <= j < profile.k]


def _lai_robbins_term(profile: RewardProfile, j: int) -> float:
    mu_star = profile.best_mean
    target = mu_star / profile.powers[j]
    if not 0.0 < target < 1.0:
        raise BoundDomainError(
            f"arm {j}: p*theta* / p_j = {target:.6g} is outside (0, 1) "
            f"(needs p*theta* < p_j = {profile.powers[j]:.6g})",
            arm=j,
        )
    return (mu_star - profile.means[j]) / kl_bernoulli(float(profile.success_probs[j]), target)


def lower_bound_constant(profile: RewardProfile) -> float:
    """Structured constant c(theta); independent of K beyond the best arm's neighbours."""
    return float(sum(_lai_robbins_term(profile, j) for j in filtered_neighbors(profile)))


def unstructured_constant(profile: RewardProfile) -> float:
    """Unstructured constant c'(theta) over every arm except the best one."""
    k_star = profile.k_star
    return float(sum(_lai_robbins_term(profile, j) for j in range(profile.k) if j != k_star))


def upper_bound_coefficient(profile: RewardProfile) -> float:
    """Sum over N(k*) of (mu* - mu_k) / I(theta_k, theta_k*)."""
    k_star = profile.k_star
    th_star = float(profile.success_probs[k_star])
    total = 0.0
    for j in filtered_neighbors(profile):
        th = float(profile.success_probs[j])
        if th >= th_star:
            raise BoundDomainError(
                f"arm {j}: theta={th} is not below the best arm's theta={th_star}", arm=j
            )
        total += (profile.best_mean - profile.means[j]) / kl_bernoulli(th, th_star)
    return float(total)


def upper_bound_envelope(profile: RewardProfile, epsilon: float, horizons: Sequence[float]) -> np.ndarray:
    """(1 + epsilon) * coefficient * log T for each horizon T."""
    if not epsilon > 0:
        raise DomainError(f"epsilon must be > 0, got {epsilon}")
    h = np.asarray(horizons, dtype=float)
    if np.any(h < 1):
        raise DomainError("horizons must be >= 1")
    return (1.0 + epsilon) * upper_bound_coefficient(profile) * np.log(h)


@dataclass
class BoundReport:
    c_theta: Optional[float]
    c_prime_theta: Optional[float]
    ub_constant: Optional[float]
    k_star: int
    filtered_neighbors: list
    line_neighbors: list
    notes: list = field(default_factory=list)

    @property
    def neighbors_differ(self) -> bool:
        return self.filtered_neighbors != self.line_neighbors

    def to_dict(self) -> dict:
        d = asdict(self)
        d["neighbors_differ"] = self.neighbors_differ
        return d


def bound_report(profile: RewardProfile) -> BoundReport:
    """Compute every constant; a constant whose domain check fails is None with a note."""
    notes = []
    values = {}
    for name, fn in (
        ("c_theta", lower_bound_constant),
        ("c_prime_theta", unstructured_constant),
        ("ub_constant", upper_bound_coefficient),
    ):
        try:
            v = fn(profile)
            values[name] = v if math.isfinite(v) else None
        except BoundDomainError as exc:
            values[name] = None
            notes.append(f"{name}: {exc}")
    report = BoundReport(
        k_star=profile.k_star,
        filtered_neighbors=filtered_neighbors(profile),
        line_neighbors=line_neighbors(profile),
        notes=notes,
        **values,
    )
    if report.neighbors_differ:
        report.notes.append("reward-filtered neighbourhood of the best arm differs from its line neighbours")
    return report
