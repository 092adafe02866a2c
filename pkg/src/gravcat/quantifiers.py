"""Quantumness measures: l1 coherence, local quantum Fisher information, Bell-CHSH.

Every measure has two routes. The ``*_closed`` functions take a
:class:`~gravcat.state.GravcatXState` and use X-state formulas; the
``*_general`` functions take any 4x4 density matrix and go through the Jacobi
eigensolver. The two are kept independent so one can check the other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import I2, PAULIS, density_spectrum, hermitian_eig, kron2, validate_density
from .state import GravcatXState, xstate_eigenvalues

TSIRELSON = 2.0 * math.sqrt(2.0)
CLASSICAL_BOUND = 2.0
PAIR_CUTOFF = 1e-12

_LOCAL_PAULIS = tuple(kron2(s, I2) for s in PAULIS[1:])
_PAULI_PAIRS = tuple(tuple(kron2(a, b) for b in PAULIS[1:]) for a in PAULIS[1:])


@dataclass(frozen=True)
class QuantifierRecord:
    t: float
    f: float
    eta: float
    coherence: float
    lqfi: float
    bell_max: float

    @property
    def violates_bell(self) -> bool:
        return violation_flag(self.bell_max)

    def value(self, quantity: str) -> float:
        return {"coherence": self.coherence, "lqfi": self.lqfi, "bell": self.bell_max}[quantity]


# -- coherence ---------------------------------------------------------------


def coherence_l1_general(rho) -> float:
    r = validate_density(rho)
    return float(np.sum(np.abs(r)) - np.sum(np.abs(np.diag(r))))


def coherence_l1_closed(s: GravcatXState) -> float:
    return 2.0 * (abs(s.outer_coherence) + abs(s.inner_coherence))


# -- LQFI --------------------------------------------------------------------


def lqfi_m_matrix(rho) -> np.ndarray:
    """3x3 matrix M_{nu mu} = sum 2 q_i q_j/(q_i+q_j) <i|s_nu x I|j><j|s_mu x I|i>."""
    q, v = density_spectrum(rho)
    qi, qj = q[:, None], q[None, :]
    qsum = qi + qj
    weight = np.where(qsum >= PAIR_CUTOFF, 2.0 * qi * qj / np.where(qsum > 0, qsum, 1.0), 0.0)
    local = [v.conj().T @ op @ v for op in _LOCAL_PAULIS]
    m = np.empty((3, 3))
    for a in range(3):
        for b in range(3):
            m[a, b] = np.sum(weight * local[a] * local[b].T).real
    return 0.5 * (m + m.T)


def lqfi_general(rho) -> float:
    m = lqfi_m_matrix(rho)
    lam_max = hermitian_eig(m).eigenvalues[0]
    return float(np.clip(1.0 - lam_max, 0.0, 1.0))


def lqfi_components(s: GravcatXState) -> tuple[float, float] | None:
    """(M_zz, M_xx) for an X-state, or None when the M_xx quotient is degenerate.

    The quotient m1 m2 / m3 is evaluated with m3 in the factored form
    16 (q1+q3)(q1+q4)(q2+q3)(q2+q4) = 16 [(q1 q2 - q3 q4)^2 + m2], valid
    because the eigenvalues sum to one. The textbook expansion of m3
    cancels catastrophically at low temperature.
    """
    q1, q2, q3, q4 = xstate_eigenvalues(s)
    ec, ed = s.outer_coherence, s.inner_coherence
    outer = s.a_minus + s.a_plus

    m_zz = 1.0
    if outer > 0:
        m_zz -= 4.0 * ec * ec / outer
    if s.b > 0:
        m_zz -= 4.0 * ed * ed / (2.0 * s.b)

    p_outer, p_inner = q1 * q2, q3 * q4
    m1 = 64.0 * (outer * s.b + p_outer + p_inner + 2.0 * abs(ec * ed))
    m2 = outer * p_inner + 2.0 * s.b * p_outer
    m3_over_16 = (p_outer - p_inner) ** 2 + m2
    if not m3_over_16 > 0:
        return None
    m_xx = m1 * m2 / (16.0 * m3_over_16)
    return m_zz, m_xx


def lqfi_closed(s: GravcatXState) -> float:
    """min(F0, F1) with F0 = 1 - M_zz and F1 = 1 - M_xx."""
    comps = lqfi_components(s)
    if comps is None:
        return lqfi_general(s.to_matrix())
    m_zz, m_xx = comps
    return float(min(max(1.0 - m_zz, 0.0), max(1.0 - m_xx, 0.0), 1.0))


# -- Bell-CHSH ---------------------------------------------------------------


def correlation_matrix(rho) -> np.ndarray:
    """x_{nu mu} = tr(rho sigma_nu (x) sigma_mu) for nu, mu in (x, y, z)."""
    r = validate_density(rho)
    return np.array([[np.trace(r @ op).real for op in row] for row in _PAULI_PAIRS])


def bell_max_general(rho) -> float:
    """Horodecki maximum: 2 sqrt(sum of the two largest eigenvalues of X^T X)."""
    x = correlation_matrix(rho)
    w = hermitian_eig(x.T @ x).eigenvalues
    m = max(w[0] + w[1], 0.0)
    return float(min(2.0 * math.sqrt(m), TSIRELSON))


def bell_terms(s: GravcatXState) -> tuple[float, float]:
    ec, ed = abs(s.outer_coherence), abs(s.inner_coherence)
    zz = s.a_plus + s.a_minus - 2.0 * s.b
    return 8.0 * (ec * ec + ed * ed), 4.0 * (ec + ed) ** 2 + zz * zz


def bell_max_closed(s: GravcatXState) -> float:
    return float(min(2.0 * math.sqrt(max(bell_terms(s))), TSIRELSON))


def violation_flag(bell_max: float) -> bool:
    if bell_max < 0:
        raise ValueError(f"bell_max must be non-negative, got {bell_max!r}")
    return bell_max > CLASSICAL_BOUND + 1e-12


def measure(s: GravcatXState, t: float = math.nan, f: float = math.nan) -> QuantifierRecord:
    """All three closed-form measures for an already-evolved X-state."""
    return QuantifierRecord(
        t=t,
        f=f,
        eta=s.eta,
        coherence=coherence_l1_closed(s),
        lqfi=lqfi_closed(s),
        bell_max=bell_max_closed(s),
    )


def measure_general(rho, t: float = math.nan, f: float = math.nan, eta: float = math.nan):
    return QuantifierRecord(
        t=t,
        f=f,
        eta=eta,
        coherence=coherence_l1_general(rho),
        lqfi=lqfi_general(rho),
        bell_max=bell_max_general(rho),
    )
