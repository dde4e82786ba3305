"""Reference policies: exhaustive scanning, unstructured KL-UCB, and the
802.11ad-style decoupled transmit/receive sweep."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from uba.beam import RewardProfile, sample_reward
from uba.errors import DomainError, PolicyStateError
from uba.klucb import DEFAULT_C, exploration_budget, klucb_index
from uba.policy import PolicyState, UbaConfig, check_termination, select_arm, update
from uba.rng import SlotStream

EXHAUSTIVE_MODES = ("scan_then_commit", "perpetual_round_robin")


@dataclass(frozen=True)
class ExhaustiveConfig:
    rounds_per_arm: int = 1
    mode: str = "perpetual_round_robin"

    def __post_init__(self):
        if self.rounds_per_arm < 1:
            raise DomainError("rounds_per_arm must be >= 1")
        if self.mode not in EXHAUSTIVE_MODES:
            raise DomainError(f"mode must be one of {EXHAUSTIVE_MODES}")


def exhaustive_select(state: PolicyState, cfg: ExhaustiveConfig, k: int) -> int:
    """Cycle arms 0..K-1 for ``rounds_per_arm`` passes, then commit or keep cycling."""
    if state.terminated:
        raise PolicyStateError("search already terminated")
    t = state.t
    if t < cfg.rounds_per_arm * k or cfg.mode == "perpetual_round_robin":
        return state._claim(t % k)
    return state._claim(int(np.argmax(state.empirical_means)))


def vanilla_klucb_select(state: PolicyState, c_const: float = DEFAULT_C, powers: Sequence[float] = ()) -> int:
    """KL-UCB over all arms with f(t) = log t + c log log t; ties to the lowest index."""
    if state.terminated:
        raise PolicyStateError("search already terminated")
    if len(powers) != state.k:
        raise DomainError("need one power per arm")
    f = exploration_budget(state.t, c_const) if state.t >= 1 else 0.0
    best, best_v = 0, -1.0
    for j in range(state.k):
        stats = state.stats(j)
        v = float(powers[j]) if stats.pulls == 0 else klucb_index(stats, float(powers[j]), f / stats.pulls)
        if v > best_v:
            best, best_v = j, v
    return state._claim(best)


@dataclass(frozen=True)
class SweepResult:
    tx_arm: int
    rx_arm: int
    slots_used: int
    rx_slots: int
    tx_slots: int
    budget_exhausted: bool


def _sweep_phase(profile, inner, budget, stream, uba_cfg, exh_cfg):
    """Run one side's search; returns (declared arm, slots used, finished)."""
    state = PolicyState(profile.k)
    powers = profile.powers
    for slot in range(budget):
        if inner == "uba":
            arm = select_arm(state, uba_cfg, profile.k, powers)
        else:
            arm = exhaustive_select(state, exh_cfg, profile.k)
        update(state, arm, sample_reward(profile, arm, stream, slot), powers)
        if inner == "uba":
            declared = check_termination(state, uba_cfg)
            if declared is not None:
                return declared, state.t, True
        elif state.t == exh_cfg.rounds_per_arm * profile.k:
            return int(np.argmax(state.empirical_means)), state.t, True
    return int(state.leader), state.t, False


def decoupled_sweep(
    profile_tx: RewardProfile,
    profile_rx: RewardProfile,
    inner_policy: str,
    budget: int,
    seed: int = 0,
    run: int = 0,
    uba_cfg: Optional[UbaConfig] = None,
    exhaustive_cfg: Optional[ExhaustiveConfig] = None,
) -> SweepResult:
    """Find the receive beam with the transmitter quasi-omni, then the reverse.

    Phase 1 searches ``profile_rx`` for at most ``budget // 2`` slots; phase 2
    searches ``profile_tx`` with whatever budget remains.  A phase that never
    terminates reports its leader and sets ``budget_exhausted``.
    """
    if budget < 2:
        raise DomainError(f"budget must be >= 2, got {budget}")
    if inner_policy not in ("uba", "exhaustive"):
        raise DomainError(f"inner policy must be 'uba' or 'exhaustive', got {inner_policy!r}")
    if uba_cfg is None:
        uba_cfg = UbaConfig(termination_enabled=True)
    if inner_policy == "uba" and not uba_cfg.termination_enabled:
        raise DomainError("decoupled sweep with UBA needs termination enabled")
    exh_cfg = exhaustive_cfg or ExhaustiveConfig(mode="scan_then_commit")

    rx_arm, rx_slots, rx_done = _sweep_phase(
        profile_rx, inner_policy, budget // 2, SlotStream(seed, run, stream=1), uba_cfg, exh_cfg
    )
    tx_arm, tx_slots, tx_done = _sweep_phase(
        profile_tx, inner_policy, budget - rx_slots, SlotStream(seed, run, stream=2), uba_cfg, exh_cfg
    )
    return SweepResult(
        tx_arm=tx_arm,
        rx_arm=rx_arm,
        slots_used=rx_slots + tx_slots,
        rx_slots=rx_slots,
        tx_slots=tx_slots,
        budget_exhausted=not (rx_done and tx_done),
    )
