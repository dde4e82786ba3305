"""Unimodal beam alignment (UBA) decision rule.

Each slot runs select -> sample -> update -> (optional) termination check.
The leader is the arm with the highest empirical mean; the policy either
replays the leader (every ``gamma + 1`` leader-slots) or plays the arm with
the largest KL-UCB index among the leader and its two line neighbours.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from uba.beam import RewardSample
from uba.errors import DomainError, PolicyStateError
from uba.klucb import DEFAULT_C, ArmStatistics, exploration_budget, klucb_index

PSI_SOURCES = ("power", "energy")


@dataclass(frozen=True)
class UbaConfig:
    gamma: int = 2
    c_const: float = DEFAULT_C
    psi_threshold: float = 4.0
    termination_enabled: bool = False
    psi_source: str = "power"
    min_slots: int = 2

    def __post_init__(self):
        if self.gamma < 1:
            raise DomainError(f"gamma must be >= 1, got {self.gamma}")
        if not self.c_const > 0:
            raise DomainError(f"c_const must be > 0, got {self.c_const}")
        if self.termination_enabled and not self.psi_threshold > 1:
            raise DomainError(f"psi_threshold must be > 1, got {self.psi_threshold}")
        if self.psi_source not in PSI_SOURCES:
            raise DomainError(f"psi_source must be one of {PSI_SOURCES}")
        if self.min_slots < 1:
            raise DomainError("min_slots must be >= 1")


@dataclass
class PolicyState:
    """Mutable per-run bookkeeping shared by UBA and the baselines.

    ``psi_power_sum`` / ``psi_energy_sum`` accumulate the true power and the
    realized energy of every chosen arm; ``t`` is the matching count.
    """

    k: int
    t: int = 0
    pulls: np.ndarray = field(default=None)
    cumulative_energy: np.ndarray = field(default=None)
    leader: int = 0
    leader_counts: np.ndarray = field(default=None)
    psi_power_sum: float = 0.0
    psi_energy_sum: float = 0.0
    last_arm: Optional[int] = None
    last_power: float = 0.0
    last_energy: float = 0.0
    pending: Optional[int] = None
    terminated_arm: Optional[int] = None
    terminated_at: Optional[int] = None

    def __post_init__(self):
        if self.k < 2:
            raise DomainError(f"need at least 2 arms, got {self.k}")
        if self.pulls is None:
            self.pulls = np.zeros(self.k, dtype=np.int64)
        if self.cumulative_energy is None:
            self.cumulative_energy = np.zeros(self.k)
        if self.leader_counts is None:
            self.leader_counts = np.zeros(self.k, dtype=np.int64)

    @property
    def terminated(self) -> bool:
        return self.terminated_arm is not None

    @property
    def empirical_means(self) -> np.ndarray:
        out = np.zeros(self.k)
        pulled = self.pulls > 0
        out[pulled] = self.cumulative_energy[pulled] / self.pulls[pulled]
        return out

    def stats(self, arm: int) -> ArmStatistics:
        return ArmStatistics(int(self.pulls[arm]), float(self.cumulative_energy[arm]))

    def _claim(self, arm: int) -> int:
        if self.terminated:
            raise PolicyStateError(f"search already terminated on arm {self.terminated_arm}")
        self.pending = int(arm)
        return self.pending


def _arm_count(space) -> int:
    return space if isinstance(space, (int, np.integer)) else space.k


def neighborhood(space, arm: int) -> list:
    """The arm and its line-graph neighbours, clipped to the arm range."""
    k = _arm_count(space)
    if not 0 <= arm < k:
        raise IndexError(f"arm {arm} out of range for K={k}")
    return [j for j in (arm - 1, arm, arm + 1) if 0 <= j < k]


def forced_exploitation(leader_count: int, gamma: int) -> bool:
    """True on leader counts 1, gamma+2, 2*gamma+3, ..."""
    return leader_count >= 1 and (leader_count - 1) % (gamma + 1) == 0


def candidate_indices(state: PolicyState, cfg: UbaConfig, powers: Sequence[float]) -> dict:
    """KL-UCB index of every arm in the leader's neighbourhood."""
    lead = state.leader
    l = int(state.leader_counts[lead])
    f = exploration_budget(l, cfg.c_const) if l >= 1 else 0.0
    out = {}
    for j in neighborhood(state.k, lead):
        stats = state.stats(j)
        if stats.pulls == 0:
            out[j] = float(powers[j])
        else:
            out[j] = klucb_index(stats, float(powers[j]), f / stats.pulls)
    return out


def select_arm(state: PolicyState, cfg: UbaConfig, space, powers: Sequence[float]) -> int:
    """Choose the arm to probe in the next slot.

    Ties in the index branch go to the leader, then to the lower index.
    """
    if state.terminated:
        raise PolicyStateError(f"search already terminated on arm {state.terminated_arm}")
    if _arm_count(space) != state.k:
        raise DomainError("beam space and policy state disagree on K")
    lead = state.leader
    if forced_exploitation(int(state.leader_counts[lead]), cfg.gamma):
        return state._claim(lead)
    indices = candidate_indices(state, cfg, powers)
    best = max(indices, key=lambda j: (indices[j], j == lead, -j))
    return state._claim(best)


def update(state: PolicyState, chosen: int, sample: RewardSample, powers: Sequence[float]) -> PolicyState:
    """Record the outcome of the arm returned by the preceding select."""
    if state.pending is None or chosen != state.pending or sample.arm != chosen:
        raise PolicyStateError(
            f"update for arm {chosen} (sample arm {sample.arm}) does not match selected arm {state.pending}"
        )
    state.pending = None
    state.t += 1
    state.pulls[chosen] += 1
    state.cumulative_energy[chosen] += sample.energy

    mu = state.empirical_means
    top = mu.max()
    if mu[state.leader] != top:
        state.leader = int(np.flatnonzero(mu == top)[0])
    state.leader_counts[state.leader] += 1

    p = float(powers[chosen])
    state.psi_power_sum += p
    state.psi_energy_sum += sample.energy
    state.last_arm = chosen
    state.last_power = p
    state.last_energy = sample.energy
    return state


def peak_to_average(state: PolicyState, source: str = "power") -> float:
    """psi(t): the last chosen value over the running mean of chosen values."""
    if state.t == 0:
        raise PolicyStateError("peak-to-average ratio undefined before the first slot")
    if source == "power":
        cur, total = state.last_power, state.psi_power_sum
    else:
        cur, total = state.last_energy, state.psi_energy_sum
    if total <= 0.0:
        return 0.0
    return cur / (total / state.t)


def check_termination(state: PolicyState, cfg: UbaConfig) -> Optional[int]:
    """Stop the search when psi(t) >= Psi; returns the declared arm or None."""
    if state.t == 0:
        raise PolicyStateError("cannot check termination before the first slot")
    if state.terminated:
        return state.terminated_arm
    if not cfg.termination_enabled or state.t < cfg.min_slots:
        return None
    if peak_to_average(state, cfg.psi_source) >= cfg.psi_threshold:
        state.terminated_arm = state.last_arm
        state.terminated_at = state.t
        return state.terminated_arm
    return None
