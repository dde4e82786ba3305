"""Beam-pair arm space and the Bernoulli-scaled reward environment.

Arms are transmit/receive beam pairs flattened onto a line ordered by
misalignment.  Arm indices are 0-based throughout the library; emitted
result files label beams 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from uba.errors import (
    DegenerateSpaceError,
    InvalidGeometryError,
    ModelViolationError,
    OrderingError,
)
from uba.rng import SlotStream

POWER_MODELS = ("unit", "gaussian_beam", "custom")


def _frozen(a, dtype=float):
    arr = np.array(a, dtype=dtype)
    arr.setflags(write=False)
    return arr


def angular_difference(a, b):
    """Absolute angular difference in degrees, wrapped to [0, 180]."""
    d = np.abs((np.asarray(a, dtype=float) - np.asarray(b, dtype=float)) % 360.0)
    return np.minimum(d, 360.0 - d)


@dataclass(frozen=True)
class BeamSpace:
    """Beam pairs ordered by non-decreasing misalignment.

    ``pairs[k]`` is the (tx beam, rx beam) index pair of arm ``k`` and
    ``misalignment[k]`` its angular mismatch in degrees.
    """

    n_tx: int
    n_rx: int
    misalignment: np.ndarray
    pairs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "misalignment", _frozen(self.misalignment))
        if self.n_tx < 1 or self.n_rx < 1:
            raise DegenerateSpaceError(f"need n_tx, n_rx >= 1, got {self.n_tx}, {self.n_rx}")
        if self.k < 2:
            raise DegenerateSpaceError(f"beam space needs at least 2 arms, got {self.k}")
        if self.misalignment.shape != (self.k,):
            raise InvalidGeometryError(
                f"expected {self.k} misalignment values, got {self.misalignment.shape}"
            )
        m = self.misalignment
        if not np.all(np.isfinite(m)) or np.any(m < 0):
            raise InvalidGeometryError("misalignment values must be finite and >= 0")
        if np.any(np.diff(m) < 0):
            raise InvalidGeometryError("misalignment must be non-decreasing in arm index")
        if not self.pairs:
            object.__setattr__(self, "pairs", tuple((0, j) for j in range(self.k)))

    @property
    def k(self) -> int:
        return self.n_tx * self.n_rx

    @classmethod
    def line(cls, k: int) -> "BeamSpace":
        """A bare K-arm line with unit-spaced misalignments (no geometry)."""
        return cls(n_tx=1, n_rx=k, misalignment=np.arange(k, dtype=float))


def build_beam_space(
    n_tx: int,
    n_rx: int,
    tx_fixed_angle: Union[float, Sequence[float]],
    rx_angles: Sequence[float],
) -> BeamSpace:
    """Flatten the N_t x N_r beam grid into a misalignment-ordered line.

    ``tx_fixed_angle`` is a single angle (``n_tx == 1``) or one angle per
    transmit beam.  Arms sort by misalignment; ties go to the lower receive
    beam index, then the lower transmit beam index.
    """
    if n_tx < 1 or n_rx < 1:
        raise DegenerateSpaceError(f"need n_tx, n_rx >= 1, got {n_tx}, {n_rx}")
    if n_tx * n_rx < 2:
        raise DegenerateSpaceError("beam space needs at least 2 arms")
    tx = np.atleast_1d(np.asarray(tx_fixed_angle, dtype=float))
    if tx.size == 1 and n_tx > 1:
        raise InvalidGeometryError("n_tx > 1 requires one angle per transmit beam")
    rx = np.asarray(rx_angles, dtype=float)
    if rx.shape != (n_rx,) or tx.shape != (n_tx,):
        raise InvalidGeometryError(
            f"angle counts ({tx.size} tx, {rx.size} rx) do not match n_tx={n_tx}, n_rx={n_rx}"
        )
    for name, angles in (("rx", rx), ("tx", tx)):
        if not np.all(np.isfinite(angles)):
            raise InvalidGeometryError(f"{name} angles must be finite")
        wrapped = np.round(angles % 360.0, 9)
        values, counts = np.unique(wrapped, return_counts=True)
        if np.any(counts > 1):
            raise InvalidGeometryError(f"duplicate {name} beam angles (mod 360): {values[counts > 1].tolist()[:5]}")

    entries = []
    for i in range(n_tx):
        for j in range(n_rx):
            entries.append((float(angular_difference(tx[i], rx[j])), j, i))
    entries.sort()
    return BeamSpace(
        n_tx=n_tx,
        n_rx=n_rx,
        misalignment=[e[0] for e in entries],
        pairs=tuple((i, j) for _, j, i in entries),
    )


def unimodality_violation(means) -> Optional[tuple]:
    """Return indices around the first break of strict unimodality, or None."""
    mu = np.asarray(means, dtype=float)
    k = len(mu)
    d = np.diff(mu)
    for i in range(k - 1):
        if d[i] == 0:
            start = max(0, min(i - 1, k - 3))
            return tuple(range(start, min(start + 3, k)))
    for j in range(1, k - 1):
        if d[j - 1] < 0 and d[j] > 0:
            return (j - 1, j, j + 1)
    return None


@dataclass(frozen=True)
class RewardProfile:
    """Per-arm powers p_k and success probabilities theta_k.

    Rewards are p_k with probability theta_k, else 0, so the mean reward of
    arm k is p_k * theta_k.  ``threshold`` is informational only; it is
    already folded into the success probabilities.  ``check_order=False``
    admits profiles whose success probabilities are not non-increasing
    (e.g. a reflected peak); only strict unimodality of the means is kept.
    """

    powers: np.ndarray
    success_probs: np.ndarray
    threshold: Optional[float] = None
    power_model: str = "custom"
    check_order: bool = field(default=True, repr=False, compare=False)
    means: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        p = _frozen(self.powers)
        th = _frozen(self.success_probs)
        object.__setattr__(self, "powers", p)
        object.__setattr__(self, "success_probs", th)
        if self.power_model not in POWER_MODELS:
            raise ValueError(f"unknown power model {self.power_model!r}")
        if th.ndim != 1 or th.shape != p.shape:
            raise ValueError(f"powers {p.shape} and success_probs {th.shape} must be equal-length vectors")
        if len(th) < 2:
            raise DegenerateSpaceError("a profile needs at least 2 arms")
        if not np.all(np.isfinite(p)) or np.any(p <= 0):
            raise ValueError("powers must be finite and > 0")
        if not np.all(np.isfinite(th)) or np.any((th < 0) | (th > 1)):
            raise ValueError("success probabilities must lie in [0, 1]")
        bad = np.flatnonzero(np.diff(th) > 0)
        if self.check_order and bad.size:
            i = int(bad[0])
            raise OrderingError(
                f"success probabilities must be non-increasing: theta[{i}]={th[i]} < theta[{i + 1}]={th[i + 1]}",
                index=i + 1,
            )
        if self.power_model == "unit" and np.any(p != 1.0):
            raise ValueError("unit power model requires all powers == 1")
        if self.power_model == "gaussian_beam" and np.any(np.diff(p) > 0):
            raise ValueError("physical power model requires non-increasing powers")
        mu = _frozen(p * th)
        object.__setattr__(self, "means", mu)
        where = unimodality_violation(mu)
        if where is not None:
            raise ModelViolationError(
                f"mean rewards are not strictly unimodal around arms {where}: "
                f"{[round(float(mu[j]), 6) for j in where]}",
                indices=where,
            )

    @property
    def k(self) -> int:
        return len(self.success_probs)

    @property
    def k_star(self) -> int:
        return int(np.argmax(self.means))

    @property
    def best_mean(self) -> float:
        return float(self.means[self.k_star])

    @property
    def gaps(self) -> np.ndarray:
        return self.best_mean - self.means

    @classmethod
    def unit(cls, success_probs, threshold=None, check_order=True) -> "RewardProfile":
        th = np.asarray(success_probs, dtype=float)
        return cls(np.ones_like(th), th, threshold=threshold, power_model="unit", check_order=check_order)


def gaussian_beam_powers(misalignment, width: float) -> np.ndarray:
    """Received power exp(-delta^2 / (2 width^2)) for misalignments in degrees."""
    if not width > 0:
        raise ValueError(f"beam width must be > 0, got {width}")
    d = np.asarray(misalignment, dtype=float)
    return np.exp(-(d * d) / (2.0 * width * width))


def build_profile(
    space: BeamSpace,
    power_model: str,
    success_probs,
    width: Optional[float] = None,
    threshold: Optional[float] = None,
) -> RewardProfile:
    """Attach a power model and success probabilities to a beam space.

    ``power_model`` is ``"unit"`` (all p_k = 1) or ``"gaussian_beam"``, which
    needs ``width`` in degrees.  Raises OrderingError for increasing theta
    and ModelViolationError when the mean vector is not strictly unimodal.
    """
    th = np.asarray(success_probs, dtype=float)
    if th.shape != (space.k,):
        raise ValueError(f"expected {space.k} success probabilities, got {th.size}")
    if power_model == "unit":
        powers = np.ones(space.k)
    elif power_model == "gaussian_beam":
        if width is None:
            raise ValueError("gaussian_beam power model needs a beam width")
        powers = gaussian_beam_powers(space.misalignment, width)
    else:
        raise ValueError(f"unknown power model {power_model!r}")
    return RewardProfile(powers, th, threshold=threshold, power_model=power_model)


@dataclass(frozen=True)
class RewardSample:
    arm: int
    success: int
    energy: float


def sample_reward(profile: RewardProfile, arm: int, rng: SlotStream, slot: int) -> RewardSample:
    """Draw the reward of ``arm`` at ``slot`` from the run's stream.

    Success is ``u < theta_k`` for the slot's uniform ``u``, so the same
    (seed, run, slot, arm) always gives the same sample.
    """
    if not 0 <= arm < profile.k:
        raise IndexError(f"arm {arm} out of range for K={profile.k}")
    success = int(rng.uniform(slot) < profile.success_probs[arm])
    return RewardSample(arm, success, float(profile.powers[arm]) if success else 0.0)
