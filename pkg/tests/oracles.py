"""Independent reference computations used as test oracles."""

import mpmath
import numpy as np
from scipy.special import xlogy

mpmath.mp.dps = 50


def kl_mp(x, y):
    """Bernoulli KL divergence at 50 significant digits."""
    x, y = mpmath.mpf(x), mpmath.mpf(y)
    out = mpmath.mpf(0)
    if x > 0:
        out += x * mpmath.log(x / y)
    if x < 1:
        out += (1 - x) * mpmath.log((1 - x) / (1 - y))
    return out


def kl_vec(x, q):
    """Vectorised Bernoulli KL I(x, q) over an array of q (xlogy handles 0 log 0)."""
    q = np.asarray(q, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = xlogy(x, x) - xlogy(x, q) + xlogy(1 - x, 1 - x) - xlogy(1 - x, 1 - q)
    out = np.where((q >= 1.0) & (x < 1.0), np.inf, out)
    return np.where(q == x, 0.0, out)


def klucb_grid(mean, power, budget, step=1e-7):
    """sup{q in [mean, power] : I(mean/power, q/power) <= budget} by grid scan.

    A 1e-3 scan brackets the answer, then a ``step`` scan inside the bracket
    gives the last admissible grid point.
    """
    x = mean / power

    def ok(q):
        return kl_vec(x, q / power) <= budget

    coarse = np.append(np.arange(mean, power, 1e-3), power)
    good = coarse[ok(coarse)]
    lo = good[-1]
    if lo >= power:
        return power
    fine = np.append(np.arange(lo, min(lo + 1e-3, power), step), min(lo + 1e-3, power))
    return float(fine[ok(fine)][-1])


def hand_update(history, k, powers):
    """Straight-line replay of the bookkeeping: pulls, sums, leader, leader counts.

    ``history`` is a list of (arm, energy).  Leader ties keep the incumbent,
    otherwise the lowest index wins.
    """
    pulls = [0] * k
    sums = [0.0] * k
    lcounts = [0] * k
    leader = 0
    chosen_powers = []
    for arm, energy in history:
        pulls[arm] = pulls[arm] + 1
        sums[arm] = sums[arm] + energy
        means = [sums[j] / pulls[j] if pulls[j] else 0.0 for j in range(k)]
        best = max(means)
        if means[leader] != best:
            leader = means.index(best)
        lcounts[leader] = lcounts[leader] + 1
        chosen_powers.append(powers[arm])
    return pulls, sums, leader, lcounts, chosen_powers


def scripted_trace(successes, powers, cfg):
    """Drive the Python UBA policy with a fixed success script.

    Returns per-slot dicts with the pre-selection leader, its leader count,
    whether the forced branch fired, the chosen arm and the post-update state.
    """
    from uba.beam import RewardSample
    from uba.policy import PolicyState, check_termination, forced_exploitation, select_arm, update

    state = PolicyState(len(powers))
    steps = []
    for ok in successes:
        if state.terminated:
            break
        leader = state.leader
        lcount = int(state.leader_counts[leader])
        pulls_before = state.pulls.copy()
        means_before = state.empirical_means
        arm = select_arm(state, cfg, len(powers), powers)
        sample = RewardSample(arm, int(ok), float(powers[arm]) if ok else 0.0)
        update(state, arm, sample, powers)
        declared = check_termination(state, cfg) if cfg.termination_enabled else None
        steps.append(
            dict(
                leader=leader,
                lcount=lcount,
                forced=forced_exploitation(lcount, cfg.gamma),
                arm=arm,
                pulls_before=pulls_before,
                means_before=means_before,
                t=state.t,
                pulls=state.pulls.copy(),
                leader_counts=state.leader_counts.copy(),
                declared=declared,
            )
        )
    return state, steps


def random_valid_profile(rng, unit=None):
    """A random profile in the ordered-and-unimodal set with every p_j > mu*.

    Unit-power profiles peak at arm 0; custom-power ones peak anywhere.
    """
    from uba.beam import RewardProfile

    k = int(rng.integers(2, 13))
    theta = np.sort(rng.choice(np.arange(1, 96) / 100.0, size=k, replace=False))[::-1]
    if unit is None:
        unit = bool(rng.integers(0, 2))
    if unit:
        return RewardProfile.unit(theta)
    k_star = int(rng.integers(0, k))
    mu_star = theta[k_star]
    mu = np.empty(k)
    mu[k_star] = mu_star
    if k_star > 0:
        s = np.sort(rng.uniform(theta[0], 1.0, k_star))
        mu[:k_star] = mu_star * s
    if k_star < k - 1:
        s = np.sort(rng.uniform(theta[k_star + 1], 1.0, k - k_star - 1))[::-1]
        mu[k_star + 1 :] = mu_star * s
    powers = mu / theta
    powers[k_star] = 1.0
    return RewardProfile(powers, theta)


def lai_robbins_mp(mu_star, mu_j, theta_j, p_j):
    return (mpmath.mpf(mu_star) - mpmath.mpf(mu_j)) / kl_mp(theta_j, mpmath.mpf(mu_star) / mpmath.mpf(p_j))
