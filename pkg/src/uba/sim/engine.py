"""Seeded Monte-Carlo episodes and experiment aggregation.

Regret is accumulated in expectation form: each probe adds the gap
mu* - mu_k of the chosen arm.  With a pilot duration T_bar > 1 a horizon of
T slots allows floor(T / T_bar) probes and regret is counted per probe.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, List, Optional

import numpy as np

from uba import _kernels
from uba.baselines import exhaustive_select, vanilla_klucb_select
from uba.beam import RewardProfile, RewardSample
from uba.bounds import BoundReport, bound_report
from uba.errors import ConfigError, ExperimentError
from uba.policy import PolicyState, check_termination, select_arm, update
from uba.rng import SlotStream
from uba.sim.config import SimConfig
from uba.sim.scenarios import build_scenario

log = logging.getLogger(__name__)

CHUNK_RUNS = 25

_POLICY_CODES = {
    "uba": _kernels.POLICY_UBA,
    "exhaustive": _kernels.POLICY_EXHAUSTIVE,
    "klucb": _kernels.POLICY_KLUCB,
}
_EXHAUSTIVE_CODES = {
    "scan_then_commit": _kernels.EXHAUSTIVE_COMMIT,
    "perpetual_round_robin": _kernels.EXHAUSTIVE_ROUND_ROBIN,
}


@dataclass(frozen=True)
class TraceRecord:
    slot: int
    arm: int
    energy: float
    leader: int
    cumulative_regret: float
    terminated: bool


@dataclass
class Trace:
    """One episode as parallel arrays, one entry per probe."""

    run_id: int
    pilot_duration: int
    arms: np.ndarray
    energies: np.ndarray
    leaders: np.ndarray
    cumulative_regret: np.ndarray
    terminated_at: Optional[int] = None
    declared_arm: Optional[int] = None

    def __len__(self):
        return len(self.arms)

    @property
    def slots(self) -> np.ndarray:
        return (np.arange(len(self.arms)) + 1) * self.pilot_duration

    @property
    def delay(self) -> Optional[int]:
        """Slots spent before the search stopped, or None."""
        return None if self.terminated_at is None else self.terminated_at * self.pilot_duration

    def records(self) -> Iterator[TraceRecord]:
        stop = self.terminated_at
        for i, slot in enumerate(self.slots):
            yield TraceRecord(
                slot=int(slot),
                arm=int(self.arms[i]),
                energy=float(self.energies[i]),
                leader=int(self.leaders[i]),
                cumulative_regret=float(self.cumulative_regret[i]),
                terminated=stop is not None and i + 1 >= stop,
            )


def _profile_for(cfg: SimConfig, profile: Optional[RewardProfile]) -> RewardProfile:
    if profile is not None:
        return profile
    try:
        return build_scenario(cfg.scenario)
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"invalid scenario {cfg.scenario.label()}: {exc}") from exc


def _uniforms(cfg: SimConfig, run_id: int) -> np.ndarray:
    return SlotStream(cfg.base_seed, run_id).uniforms(cfg.n_probes)


def _kernel_episode(cfg: SimConfig, profile: RewardProfile, run_id: int):
    n = cfg.n_probes
    arms = np.empty(n, np.int64)
    energies = np.empty(n)
    leaders = np.empty(n, np.int64)
    u = cfg.uba
    term_at, declared = _kernels.run_episode(
        _POLICY_CODES[cfg.policy],
        np.ascontiguousarray(profile.powers, dtype=np.float64),
        np.ascontiguousarray(profile.success_probs, dtype=np.float64),
        _uniforms(cfg, run_id),
        u.gamma,
        u.c_const,
        cfg.exhaustive.rounds_per_arm,
        _EXHAUSTIVE_CODES[cfg.exhaustive.mode],
        cfg.policy == "uba" and u.termination_enabled,
        u.psi_threshold,
        u.psi_source == "energy",
        u.min_slots,
        arms,
        energies,
        leaders,
    )
    return arms, energies, leaders, (None if term_at < 0 else int(term_at)), (None if declared < 0 else int(declared))


def run_episode(cfg: SimConfig, run_id: int, profile: Optional[RewardProfile] = None) -> Trace:
    """Play one seeded episode of ``cfg.policy``; deterministic in (base_seed, run_id).

    Once the UBA search terminates the declared beam is used for the rest of
    the horizon.
    """
    profile = _profile_for(cfg, profile)
    arms, energies, leaders, term_at, declared = _kernel_episode(cfg, profile, run_id)
    return Trace(
        run_id=run_id,
        pilot_duration=cfg.pilot_duration,
        arms=arms,
        energies=energies,
        leaders=leaders,
        cumulative_regret=np.cumsum(profile.gaps[arms]),
        terminated_at=term_at,
        declared_arm=declared,
    )


def run_episode_reference(cfg: SimConfig, run_id: int, profile: Optional[RewardProfile] = None) -> Trace:
    """Same episode stepped through the Python policy API (slow; for cross-checks)."""
    profile = _profile_for(cfg, profile)
    powers = profile.powers
    u = _uniforms(cfg, run_id)
    state = PolicyState(profile.k)
    n = cfg.n_probes
    arms = np.empty(n, np.int64)
    energies = np.empty(n)
    leaders = np.empty(n, np.int64)
    use_term = cfg.policy == "uba" and cfg.uba.termination_enabled
    for t in range(n):
        if state.terminated:
            arm = state.terminated_arm
        elif cfg.policy == "uba":
            arm = select_arm(state, cfg.uba, profile.k, powers)
        elif cfg.policy == "klucb":
            arm = vanilla_klucb_select(state, cfg.uba.c_const, powers)
        else:
            arm = exhaustive_select(state, cfg.exhaustive, profile.k)
        success = u[t] < profile.success_probs[arm]
        sample = RewardSample(arm, int(success), float(powers[arm]) if success else 0.0)
        if not state.terminated:
            update(state, arm, sample, powers)
            if use_term:
                check_termination(state, cfg.uba)
        arms[t], energies[t], leaders[t] = arm, sample.energy, state.leader
    return Trace(
        run_id=run_id,
        pilot_duration=cfg.pilot_duration,
        arms=arms,
        energies=energies,
        leaders=leaders,
        cumulative_regret=np.cumsum(profile.gaps[arms]),
        terminated_at=state.terminated_at,
        declared_arm=state.terminated_arm,
    )


@dataclass
class RegretCurve:
    t: np.ndarray
    mean_regret: np.ndarray
    stderr: np.ndarray
    oracle_reward: np.ndarray

    def at(self, slot: int) -> float:
        """Mean cumulative regret after ``slot`` slots."""
        i = int(np.searchsorted(self.t, slot, side="right")) - 1
        if i < 0:
            return 0.0
        return float(self.mean_regret[i])


@dataclass
class DetectionStats:
    """Declared beams and stopping delays over all runs (-1 = never stopped)."""

    k: int
    horizon: int
    declared: np.ndarray
    delays: np.ndarray

    @property
    def runs(self) -> int:
        return len(self.declared)

    @property
    def terminated(self) -> np.ndarray:
        return self.declared >= 0

    @property
    def n_terminated(self) -> int:
        return int(self.terminated.sum())

    @property
    def non_terminated(self) -> int:
        return self.runs - self.n_terminated

    @property
    def counts(self) -> np.ndarray:
        return np.bincount(self.declared[self.terminated], minlength=self.k)

    @property
    def frequencies(self) -> np.ndarray:
        """Per-arm detection frequency over all runs; sums to <= 1."""
        return self.counts / self.runs

    def accuracy(self, arm: int) -> float:
        """Fraction of terminating runs that declared ``arm`` (nan if none stopped)."""
        n = self.n_terminated
        return float(self.counts[arm] / n) if n else float("nan")

    @property
    def terminated_delays(self) -> np.ndarray:
        return self.delays[self.terminated]

    def delay_cdf(self):
        """(distinct delays, fraction of all runs stopped by that delay)."""
        d = self.terminated_delays
        values, counts = np.unique(d, return_counts=True)
        return values, np.cumsum(counts) / self.runs


@dataclass
class ExperimentResult:
    config: SimConfig
    profile: RewardProfile
    curve: RegretCurve
    bounds: BoundReport
    mean_pulls: np.ndarray
    final_regret: np.ndarray
    detection: Optional[DetectionStats] = None
    notes: List[str] = field(default_factory=list)

    def lower_bound_curve(self) -> Optional[np.ndarray]:
        c = self.bounds.c_theta
        return None if c is None else c * np.log(self.curve.t)

    def upper_bound_curve(self) -> Optional[np.ndarray]:
        b = self.bounds.ub_constant
        return None if b is None else (1.0 + self.config.epsilon) * b * np.log(self.curve.t)


def _run_chunk(cfg: SimConfig, profile: RewardProfile, runs: range):
    n = cfg.n_probes
    total = np.zeros(n)
    total_sq = np.zeros(n)
    pulls = np.zeros(profile.k, np.int64)
    finals, declared, delays = [], [], []
    gaps = profile.gaps
    for run_id in runs:
        arms, _, _, term_at, arm = _kernel_episode(cfg, profile, run_id)
        regret = np.cumsum(gaps[arms])
        total += regret
        total_sq += regret * regret
        pulls += np.bincount(arms, minlength=profile.k)
        finals.append(regret[-1])
        declared.append(-1 if arm is None else arm)
        delays.append(-1 if term_at is None else term_at * cfg.pilot_duration)
    return total, total_sq, pulls, finals, declared, delays


def run_experiment(
    cfg: SimConfig, profile: Optional[RewardProfile] = None, workers: Optional[int] = None
) -> ExperimentResult:
    """Run ``cfg.runs`` independent episodes and aggregate them.

    Runs are grouped in fixed chunks whose partial sums are combined in
    chunk order, so the result is bit-identical for any ``workers``.
    """
    profile = _profile_for(cfg, profile)
    workers = cfg.workers if workers is None else workers
    chunks = [range(s, min(s + CHUNK_RUNS, cfg.runs)) for s in range(0, cfg.runs, CHUNK_RUNS)]
    log.info("running %d x %s on %s (%d probes, %d workers)",
             cfg.runs, cfg.policy, cfg.scenario.label(), cfg.n_probes, workers)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda r: _run_chunk(cfg, profile, r), chunks))
    else:
        parts = [_run_chunk(cfg, profile, r) for r in chunks]
    if not parts:
        raise ExperimentError("no runs completed")

    n = cfg.n_probes
    total, total_sq = np.zeros(n), np.zeros(n)
    pulls = np.zeros(profile.k, np.int64)
    finals, declared, delays = [], [], []
    for t_sum, t_sq, p, f, d, dl in parts:
        total += t_sum
        total_sq += t_sq
        pulls += p
        finals += f
        declared += d
        delays += dl
    runs = cfg.runs
    mean = total / runs
    if runs > 1:
        var = np.maximum(total_sq - runs * mean * mean, 0.0) / (runs - 1)
        stderr = np.sqrt(var / runs)
    else:
        stderr = np.zeros(n)
    t = (np.arange(n) + 1) * cfg.pilot_duration
    curve = RegretCurve(t=t, mean_regret=mean, stderr=stderr, oracle_reward=profile.best_mean * (np.arange(n) + 1))

    detection = None
    notes = []
    if cfg.policy == "uba" and cfg.uba.termination_enabled:
        detection = DetectionStats(
            k=profile.k,
            horizon=cfg.horizon,
            declared=np.asarray(declared, np.int64),
            delays=np.asarray(delays, np.int64),
        )
    else:
        notes.append("termination disabled: no detection statistics")
    return ExperimentResult(
        config=cfg,
        profile=profile,
        curve=curve,
        bounds=bound_report(profile),
        mean_pulls=pulls / runs,
        final_regret=np.asarray(finals),
        detection=detection,
        notes=notes,
    )
