"""Classically correlated dephasing channel driven by random telegraph noise.

A single qubit is dephased with probability ``p = (1 - f(t)) / 2``, where the
memory kernel ``f`` decays monotonically for ``tau < 1/4`` (Markovian) and
oscillates for ``tau > 1/4``. Two successive uses of the channel are
correlated through ``mu``: the joint Pauli probability is

    p_ij = (1 - mu) p_i p_j + mu p_i delta_ij

and the Kraus operators are ``sqrt(p_ij) sigma_i (x) sigma_j``. For X-state
inputs the whole action collapses to scaling the off-diagonals by
``eta = f^2 + (1 - f^2) mu``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from .linalg import PAULIS, kron2, validate_density
from .state import GravcatXState

BOUNDARY_TOL = 1e-10
PROB_TOL = 1e-12


class Regime(str, enum.Enum):
    MARKOVIAN = "markovian"
    BOUNDARY = "boundary"
    NON_MARKOVIAN = "non_markovian"


def regime_of(tau: float) -> Regime:
    gap = 1.0 - 16.0 * tau * tau
    if abs(gap) < BOUNDARY_TOL:
        return Regime.BOUNDARY
    return Regime.MARKOVIAN if gap > 0 else Regime.NON_MARKOVIAN


@dataclass(frozen=True)
class ChannelSpec:
    mu: float
    tau: float

    def __post_init__(self):
        if not 0.0 <= self.mu <= 1.0:
            raise ValueError(f"mu must lie in [0, 1], got {self.mu!r}")
        if not (self.tau > 0 and math.isfinite(self.tau)):
            raise ValueError(f"tau must be positive, got {self.tau!r}")

    @property
    def regime(self) -> Regime:
        return regime_of(self.tau)

    def kernel(self, t):
        return memory_kernel(t, self.tau)

    def eta(self, t):
        return decoherence_factor(memory_kernel(t, self.tau), self.mu)


def memory_kernel(t, tau: float):
    """Telegraph-noise kernel f(t); accepts a scalar or an array of times.

    With ``x = t / (2 tau)`` and ``v = sqrt|1 - 16 tau^2|``:

    * ``tau < 1/4``: ``exp(-x) [cosh(v x) + sinh(v x) / v]``
    * ``tau > 1/4``: ``exp(-x) [cos(v x) + sin(v x) / v]``
    * ``tau = 1/4``: the common limit ``exp(-x) (1 + x)``
    """
    if not tau > 0:
        raise ValueError(f"tau must be positive, got {tau!r}")
    scalar = np.ndim(t) == 0
    tt = np.asarray(t, dtype=float)
    if np.any(tt < 0) or not np.all(np.isfinite(tt)):
        raise ValueError("time must be finite and non-negative")

    x = tt / (2.0 * tau)
    gap = 1.0 - 16.0 * tau * tau
    if abs(gap) < BOUNDARY_TOL:
        f = np.exp(-x) * (1.0 + x)
    elif gap > 0:
        v = math.sqrt(gap)
        # exp(-x) cosh(vx) and exp(-x) sinh(vx) in overflow-free form
        grow = np.exp((v - 1.0) * x)
        decay = np.exp(-(1.0 + v) * x)
        f = 0.5 * (grow + decay) - 0.5 * grow * np.expm1(-2.0 * v * x) / v
    else:
        v = math.sqrt(-gap)
        f = np.exp(-x) * (np.cos(v * x) + np.sin(v * x) / v)
    f = np.clip(f, -1.0, 1.0)
    return float(f) if scalar else f


def flip_probability(t, tau: float):
    return 0.5 * (1.0 - memory_kernel(t, tau))


@dataclass(frozen=True)
class PauliProbability:
    """Probabilities of applying I, X, Y, Z to a single qubit."""

    p0: float
    p1: float
    p2: float
    p3: float

    def __post_init__(self):
        ps = self.as_array()
        if np.any(ps < 0) or abs(ps.sum() - 1.0) > PROB_TOL:
            raise ValueError(f"not a probability vector: {tuple(ps)}")

    @classmethod
    def dephasing(cls, p: float) -> "PauliProbability":
        # p > 1/2 is legitimate once the kernel swings negative
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"dephasing probability must lie in [0, 1], got {p!r}")
        return cls(1.0 - p, 0.0, 0.0, p)

    def as_array(self) -> np.ndarray:
        return np.array([self.p0, self.p1, self.p2, self.p3], dtype=float)


def joint_probability(p: PauliProbability, mu: float) -> np.ndarray:
    """4x4 joint probability p_ij for two correlated uses of the channel."""
    if not 0.0 <= mu <= 1.0:
        raise ValueError(f"mu must lie in [0, 1], got {mu!r}")
    v = p.as_array()
    return (1.0 - mu) * np.outer(v, v) + mu * np.diag(v)


def _check_joint(jp) -> np.ndarray:
    jp = np.asarray(jp, dtype=float)
    if jp.shape != (4, 4):
        raise ValueError(f"joint probability must be 4x4, got shape {jp.shape}")
    if np.any(jp < 0) or abs(jp.sum() - 1.0) > PROB_TOL:
        raise ValueError("joint probability must be non-negative and sum to 1")
    return jp


def kraus_operators(jp) -> list[np.ndarray]:
    """E_ij = sqrt(p_ij) sigma_i (x) sigma_j for every non-zero p_ij."""
    jp = _check_joint(jp)
    return [
        math.sqrt(jp[i, j]) * kron2(PAULIS[i], PAULIS[j])
        for i in range(4)
        for j in range(4)
        if jp[i, j] > 0
    ]


def cptp_residual(jp) -> float:
    """max |sum E^dagger E - I| over entries."""
    total = sum(e.conj().T @ e for e in kraus_operators(jp))
    return float(np.max(np.abs(total - np.eye(4))))


def apply_channel_general(rho, jp) -> np.ndarray:
    r = validate_density(rho)
    out = sum(e @ r @ e.conj().T for e in kraus_operators(jp))
    return 0.5 * (out + out.conj().T)


def dephasing_joint_probability(f: float, mu: float) -> np.ndarray:
    """Joint probability of the correlated dephasing channel at kernel value ``f``."""
    return joint_probability(PauliProbability.dephasing(0.5 * (1.0 - f)), mu)


def decoherence_factor(f, mu: float):
    if not 0.0 <= mu <= 1.0:
        raise ValueError(f"mu must lie in [0, 1], got {mu!r}")
    f2 = np.square(f)
    if np.any(f2 > 1.0):
        raise ValueError("kernel value must lie in [-1, 1]")
    eta = f2 + (1.0 - f2) * mu
    return float(eta) if np.ndim(eta) == 0 else eta


def evolve_closed_form(s: GravcatXState, f: float, mu: float) -> GravcatXState:
    """Channel output for a thermal input: only the coherences shrink, by eta."""
    if s.eta != 1.0:
        raise ValueError("closed-form evolution expects a thermal input state (eta = 1)")
    return replace(s, eta=decoherence_factor(f, mu))


def evolve_general(rho, f: float, mu: float) -> np.ndarray:
    return apply_channel_general(rho, dephasing_joint_probability(f, mu))
