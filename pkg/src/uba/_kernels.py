"""Compiled scalar math and the per-episode simulation loop.

The Python policy objects in :mod:`uba.policy` and :mod:`uba.baselines` call
the same scalar functions, so an episode run here and the same episode
stepped through the Python API pick identical arms.
"""

import math

import numba as nb
import numpy as np

BISECTION_TOL = 1e-9
BISECTION_MAX_ITER = 100

POLICY_UBA = 0
POLICY_EXHAUSTIVE = 1
POLICY_KLUCB = 2

EXHAUSTIVE_COMMIT = 0
EXHAUSTIVE_ROUND_ROBIN = 1

_jit = nb.njit(cache=True, nogil=True)


@_jit
def kl_bern(x, y):
    """Bernoulli KL divergence I(x, y) with 0 log 0 = 0; inf off the support."""
    if x == y:
        return 0.0
    if y <= 0.0 or y >= 1.0:
        return math.inf
    r = 0.0
    if x > 0.0:
        r += x * math.log(x / y)
    if x < 1.0:
        r += (1.0 - x) * math.log((1.0 - x) / (1.0 - y))
    return r if r > 0.0 else 0.0


@_jit
def klucb_normalized(x, budget, tol):
    """sup{y in [x, 1] : I(x, y) <= budget} by bisection."""
    if budget <= 0.0 or x >= 1.0:
        return x
    lo = x
    hi = 1.0
    for _ in range(BISECTION_MAX_ITER):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if kl_bern(x, mid) <= budget:
            lo = mid
        else:
            hi = mid
    return lo


@_jit
def klucb_index(mean, power, budget):
    x = mean / power
    if x > 1.0:
        x = 1.0
    tol = BISECTION_TOL / power if power > 1.0 else BISECTION_TOL
    return power * klucb_normalized(x, budget, tol)


@_jit
def exploration_budget(count, c):
    lg = math.log(count)
    f = lg + c * math.log(lg if lg > 1.0 else 1.0)
    return f if f > 0.0 else 0.0


@_jit
def uba_select(s, mu, powers, leader, lcount, gamma, c):
    l = lcount[leader]
    if l >= 1 and (l - 1) % (gamma + 1) == 0:
        return leader
    k = powers.shape[0]
    f = exploration_budget(l, c) if l >= 1 else 0.0
    best = leader
    if s[leader] == 0:
        bestv = powers[leader]
    else:
        bestv = klucb_index(mu[leader], powers[leader], f / s[leader])
    for j in (leader - 1, leader + 1):
        if j < 0 or j >= k:
            continue
        if s[j] == 0:
            v = powers[j]
        else:
            v = klucb_index(mu[j], powers[j], f / s[j])
        # leader wins ties; leader-1 is visited first so lower index wins next
        if v > bestv:
            best = j
            bestv = v
    return best


@_jit
def klucb_select(s, mu, powers, t, c):
    k = powers.shape[0]
    f = exploration_budget(t, c) if t >= 1 else 0.0
    best = 0
    bestv = -1.0
    for j in range(k):
        if s[j] == 0:
            v = powers[j]
        else:
            v = klucb_index(mu[j], powers[j], f / s[j])
        if v > bestv:
            best = j
            bestv = v
    return best


@_jit
def exhaustive_select(mu, t, k, rounds, mode):
    if t < rounds * k or mode == EXHAUSTIVE_ROUND_ROBIN:
        return t % k
    return np.argmax(mu)


@_jit
def next_leader(mu, leader):
    m = mu.max()
    if mu[leader] == m:
        return leader
    for j in range(mu.shape[0]):
        if mu[j] == m:
            return j
    return leader


@_jit
def run_episode(
    policy,
    powers,
    thetas,
    uniforms,
    gamma,
    c,
    rounds,
    exh_mode,
    term_enabled,
    psi_threshold,
    psi_energy,
    min_slots,
    arms_out,
    energy_out,
    leader_out,
):
    """Play ``len(uniforms)`` probes.  Returns (terminated_at, declared_arm).

    ``terminated_at`` is the 1-based probe count at which the search stopped
    (-1 if it never did).  After termination the declared arm is played for
    the remaining probes with the policy state frozen.
    """
    k = powers.shape[0]
    n = uniforms.shape[0]
    s = np.zeros(k, np.int64)
    cum = np.zeros(k)
    mu = np.zeros(k)
    lcount = np.zeros(k, np.int64)
    leader = 0
    psi_sum = 0.0
    term_at = -1
    declared = -1
    for t in range(n):
        if term_at >= 0:
            arm = declared
            e = powers[arm] if uniforms[t] < thetas[arm] else 0.0
            arms_out[t] = arm
            energy_out[t] = e
            leader_out[t] = leader
            continue
        if policy == POLICY_UBA:
            arm = uba_select(s, mu, powers, leader, lcount, gamma, c)
        elif policy == POLICY_KLUCB:
            arm = klucb_select(s, mu, powers, t, c)
        else:
            arm = exhaustive_select(mu, t, k, rounds, exh_mode)
        e = powers[arm] if uniforms[t] < thetas[arm] else 0.0
        s[arm] += 1
        cum[arm] += e
        mu[arm] = cum[arm] / s[arm]
        leader = next_leader(mu, leader)
        lcount[leader] += 1
        psi_sum += e if psi_energy else powers[arm]
        arms_out[t] = arm
        energy_out[t] = e
        leader_out[t] = leader
        if term_enabled and t + 1 >= min_slots and psi_sum > 0.0:
            cur = e if psi_energy else powers[arm]
            if cur / (psi_sum / (t + 1)) >= psi_threshold:
                term_at = t + 1
                declared = arm
    return term_at, declared
