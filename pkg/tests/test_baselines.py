import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import klucb_grid
from uba.baselines import ExhaustiveConfig, decoupled_sweep, exhaustive_select, vanilla_klucb_select
from uba.beam import RewardProfile, RewardSample
from uba.errors import DomainError, PolicyStateError
from uba.klucb import exploration_budget
from uba.policy import PolicyState, UbaConfig, update
from uba.rng import SlotStream
from uba.sim.scenarios import CANNED, build_scenario


def feed(state, arm, energy, powers):
    state._claim(arm)
    update(state, arm, RewardSample(arm, int(energy > 0), energy), powers)


class TestExhaustive:
    def test_first_scan_in_order(self):
        cfg = ExhaustiveConfig()
        state = PolicyState(8)
        arms = []
        for _ in range(8):
            arm = exhaustive_select(state, cfg, 8)
            arms.append(arm)
            feed(state, arm, 0.0, [1.0] * 8)
        assert arms == list(range(8))

    def test_second_pass(self):
        state = PolicyState(3)
        state.t = 5
        assert exhaustive_select(state, ExhaustiveConfig(rounds_per_arm=2), 3) == 2

    def test_commit_to_argmax(self):
        cfg = ExhaustiveConfig(mode="scan_then_commit")
        powers = [1.0, 1.0, 1.0]
        state = PolicyState(3)
        for energy in (0.0, 0.7, 0.2):
            feed(state, exhaustive_select(state, cfg, 3), energy, powers)
        assert state.empirical_means.tolist() == [0.0, 0.7, 0.2]
        for _ in range(10):
            arm = exhaustive_select(state, cfg, 3)
            assert arm == 1
            feed(state, arm, 0.7, powers)

    def test_commit_tie_lowest(self):
        cfg = ExhaustiveConfig(mode="scan_then_commit")
        state = PolicyState(3)
        for energy in (0.0, 0.5, 0.5):
            feed(state, exhaustive_select(state, cfg, 3), energy, [1.0] * 3)
        assert exhaustive_select(state, cfg, 3) == 1

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_scan_audit(self, m):
        cfg = ExhaustiveConfig(rounds_per_arm=m, mode="scan_then_commit")
        state = PolicyState(5)
        for _ in range(5 * m):
            feed(state, exhaustive_select(state, cfg, 5), 0.3, [1.0] * 5)
        assert state.pulls.tolist() == [m] * 5

    def test_perpetual_keeps_cycling(self):
        cfg = ExhaustiveConfig()
        state = PolicyState(4)
        arms = []
        for t in range(12):
            arm = exhaustive_select(state, cfg, 4)
            arms.append(arm)
            feed(state, arm, 1.0 if arm == 2 else 0.0, [1.0] * 4)
        assert arms == [0, 1, 2, 3] * 3

    def test_invalid_config(self):
        with pytest.raises(DomainError):
            ExhaustiveConfig(rounds_per_arm=0)
        with pytest.raises(DomainError):
            ExhaustiveConfig(mode="sometimes")

    def test_terminated(self):
        state = PolicyState(2)
        state.terminated_arm = 1
        with pytest.raises(PolicyStateError):
            exhaustive_select(state, ExhaustiveConfig(), 2)


class TestVanillaKLUCB:
    def test_lowest_unpulled(self):
        powers = [1.0] * 6
        state = PolicyState(6)
        for t in range(6):
            assert vanilla_klucb_select(state, 3.0, powers) == t
            update(state, t, RewardSample(t, 0, 0.0), powers)

    def test_dominant_mean(self):
        state = PolicyState(2)
        state.t = 1000
        state.pulls[:] = 500
        state.cumulative_energy[:] = [450.0, 50.0]
        assert vanilla_klucb_select(state, 3.0, [1.0, 1.0]) == 0

    def test_grid_oracle_argmax(self):
        rng = np.random.default_rng(5)
        for _ in range(25):
            powers = rng.uniform(0.3, 1.0, 4)
            state = PolicyState(4)
            state.pulls[:] = rng.integers(1, 50, 4)
            state.t = int(state.pulls.sum())
            state.cumulative_energy[:] = rng.uniform(0, 1, 4) * powers * state.pulls
            f = exploration_budget(state.t, 3.0)
            oracle = [
                klucb_grid(state.cumulative_energy[j] / state.pulls[j], powers[j], f / state.pulls[j])
                for j in range(4)
            ]
            assert vanilla_klucb_select(state, 3.0, powers) == int(np.argmax(oracle))

    @given(st.permutations(range(5)), st.integers(0, 10_000))
    def test_label_equivariance(self, perm, seed):
        rng = np.random.default_rng(seed)
        powers = rng.uniform(0.3, 1.0, 5)
        pulls = rng.integers(1, 30, 5)
        energy = rng.uniform(0, 1, 5) * powers * pulls
        a = PolicyState(5, t=int(pulls.sum()), pulls=pulls.copy(), cumulative_energy=energy.copy())
        perm = np.asarray(perm)
        b = PolicyState(5, t=int(pulls.sum()), pulls=pulls[perm].copy(), cumulative_energy=energy[perm].copy())
        assert perm[vanilla_klucb_select(b, 3.0, powers[perm])] == vanilla_klucb_select(a, 3.0, powers)

    def test_power_count_checked(self):
        with pytest.raises(DomainError):
            vanilla_klucb_select(PolicyState(3), 3.0, [1.0, 1.0])


class TestDecoupledSweep:
    def test_exhaustive_sixteen_slots(self):
        profile = RewardProfile.unit([0.9, 0.8, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1])
        for run in range(20):
            res = decoupled_sweep(profile, profile, "exhaustive", 1000, seed=3, run=run)
            assert res.slots_used == 16 and not res.budget_exhausted
            # argmax of one sample per arm from each phase's stream (ties to the lowest arm)
            for stream, got in ((1, res.rx_arm), (2, res.tx_arm)):
                u = SlotStream(3, run, stream).uniforms(8)
                assert got == int(np.argmax(u < profile.success_probs))

    def test_uba_noiseless(self):
        profile = RewardProfile.unit([1.0, 0.0])
        res = decoupled_sweep(profile, profile, "uba", 50, seed=1)
        assert (res.tx_arm, res.rx_arm) == (0, 0)
        assert res.slots_used <= 50

    @given(st.integers(2, 120), st.integers(0, 1000), st.sampled_from(["uba", "exhaustive"]))
    def test_slots_within_budget(self, budget, run, inner):
        profile = build_scenario(CANNED["accuracy8"])
        cfg = UbaConfig(termination_enabled=True, psi_source="energy")
        res = decoupled_sweep(profile, profile, inner, budget, seed=7, run=run, uba_cfg=cfg)
        assert res.slots_used <= budget
        assert res.rx_slots + res.tx_slots == res.slots_used

    def test_uba_mean_slots_below_exhaustive(self):
        # UBA gets a budget well above the 16 slots exhaustive needs
        profile = build_scenario(CANNED["accuracy8"])
        cfg = UbaConfig(termination_enabled=True, psi_source="energy")
        slots = [
            decoupled_sweep(profile, profile, "uba", 200, seed=2018, run=run, uba_cfg=cfg).slots_used
            for run in range(1000)
        ]
        assert np.mean(slots) < 16

    def test_argument_checks(self):
        p = RewardProfile.unit([0.9, 0.1])
        with pytest.raises(DomainError):
            decoupled_sweep(p, p, "uba", 1)
        with pytest.raises(DomainError):
            decoupled_sweep(p, p, "klucb", 10)
        with pytest.raises(DomainError):
            decoupled_sweep(p, p, "uba", 10, uba_cfg=UbaConfig())
