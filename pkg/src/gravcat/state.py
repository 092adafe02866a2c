"""Two-gravcat Hamiltonian and its thermal (Gibbs) X-state.

Natural units throughout (hbar = k_B = 1). The Hamiltonian is

    H = (omega/2) (Z (x) I + I (x) Z) - gamma X (x) X

whose Gibbs state exp(-H/T)/Z has the X shape::

    [[a-, 0, 0, c ],
     [0,  b, d, 0 ],
     [0,  d, b, 0 ],
     [c,  0, 0, a+]]
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .linalg import I2, SX, SZ, hermitian_eig, kron2, matrix_exp_hermitian

MIN_TEMPERATURE = 1e-6
_ALPHA_EPS = 1e-12


@dataclass(frozen=True)
class PhysicalParams:
    omega: float
    gamma: float
    temperature: float

    def __post_init__(self):
        for name in ("omega", "gamma", "temperature"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v!r}")
        if self.temperature < MIN_TEMPERATURE:
            raise ValueError(
                f"temperature must be >= {MIN_TEMPERATURE:g} (T > 0), got {self.temperature!r}"
            )
        if self.gamma < 0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma!r}")
        if self.omega < 0:
            raise ValueError(f"omega must be >= 0, got {self.omega!r}")

    @property
    def alpha(self) -> float:
        return math.hypot(self.omega, self.gamma)


@dataclass(frozen=True)
class Geometry:
    """Two parallel double wells; all quantities already nondimensionalized.

    ``x_prime`` is the centre-to-centre distance when the masses sit in
    different minima and ``separation_L`` the gap between the two axes.
    """

    mass: float
    x_prime: float
    separation_L: float
    gravitational_constant: float = 1.0

    def __post_init__(self):
        if self.mass <= 0 or self.gravitational_constant <= 0:
            raise ValueError("mass and gravitational_constant must be positive")
        if self.separation_L < 0:
            raise ValueError("separation_L must be >= 0")
        if self.x_prime <= self.separation_L:
            raise ValueError(
                f"x_prime ({self.x_prime!r}) must exceed separation_L ({self.separation_L!r})"
            )

    @property
    def x(self) -> float:
        return math.sqrt(self.x_prime**2 - self.separation_L**2)


def gravitational_coupling(g: Geometry) -> float:
    """gamma = G m^2 / 2 * (1/x - 1/x') with x = sqrt(x'^2 - L^2)."""
    gamma = 0.5 * g.gravitational_constant * g.mass**2 * (1.0 / g.x - 1.0 / g.x_prime)
    return max(gamma, 0.0)


@dataclass(frozen=True)
class GravcatXState:
    """Entries of the X-shaped two-qubit state; off-diagonals are ``eta*c`` and ``eta*d``."""

    a_minus: float
    a_plus: float
    b: float
    c: float
    d: float
    eta: float = 1.0

    def __post_init__(self):
        tr = self.a_minus + self.a_plus + 2 * self.b
        if abs(tr - 1.0) > 1e-12:
            raise ValueError(f"X-state trace is {tr!r}, expected 1")
        if min(self.a_minus, self.a_plus, self.b, self.c, self.d) < 0:
            raise ValueError("X-state entries must be non-negative")
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError(f"eta must lie in [0, 1], got {self.eta!r}")
        if self.eta * self.c > math.sqrt(self.a_minus * self.a_plus) + 1e-12:
            raise ValueError("outer block is not positive: eta*c > sqrt(a- a+)")
        if self.eta * self.d > self.b + 1e-12:
            raise ValueError("inner block is not positive: eta*d > b")

    @property
    def outer_coherence(self) -> float:
        return self.eta * self.c

    @property
    def inner_coherence(self) -> float:
        return self.eta * self.d

    def with_eta(self, eta: float) -> "GravcatXState":
        return replace(self, eta=eta)

    def to_matrix(self) -> np.ndarray:
        ec, ed = self.outer_coherence, self.inner_coherence
        return np.array(
            [
                [self.a_minus, 0, 0, ec],
                [0, self.b, ed, 0],
                [0, ed, self.b, 0],
                [ec, 0, 0, self.a_plus],
            ],
            dtype=complex,
        )

    def eigenvalues(self) -> tuple[float, float, float, float]:
        return xstate_eigenvalues(self)


def build_hamiltonian(p: PhysicalParams) -> np.ndarray:
    h_omega = 0.5 * p.omega * (kron2(SZ, I2) + kron2(I2, SZ))
    h_gamma = -p.gamma * kron2(SX, SX)
    return h_omega + h_gamma


@dataclass(frozen=True)
class GibbsDetails:
    """Closed-form state together with the partition function it came from.

    ``log_z`` is kept because Z itself overflows for T ~ 1e-4.
    """

    state: GravcatXState
    log_z: float
    alpha: float


def gibbs_details(p: PhysicalParams) -> GibbsDetails:
    t = p.temperature
    alpha, gamma, omega = p.alpha, p.gamma, p.omega
    # factor exp(shift) out of every cosh/sinh so nothing overflows at small T
    shift = max(alpha, gamma) / t
    ea_p = math.exp(alpha / t - shift)
    ea_m = math.exp(-alpha / t - shift)
    eg_p = math.exp(gamma / t - shift)
    eg_m = math.exp(-gamma / t - shift)
    cosh_a, sinh_a = 0.5 * (ea_p + ea_m), 0.5 * (ea_p - ea_m)
    cosh_g, sinh_g = 0.5 * (eg_p + eg_m), 0.5 * (eg_p - eg_m)
    z = 2.0 * (cosh_a + cosh_g)

    if alpha < _ALPHA_EPS:
        # sinh(alpha/T)/alpha -> 1/T, and gamma <= alpha ~ 0
        sinhc = math.exp(-shift) / t
        a_minus = a_plus = cosh_a / z
        c = gamma * sinhc / z
    else:
        # alpha*cosh - omega*sinh rewritten without cancellation
        a_minus = (alpha * ea_m + gamma * gamma / (alpha + omega) * sinh_a) / (z * alpha)
        a_plus = (alpha * cosh_a + omega * sinh_a) / (z * alpha)
        c = gamma * sinh_a / (z * alpha)
    b = cosh_g / z
    d = sinh_g / z
    state = GravcatXState(a_minus, a_plus, b, c, d, 1.0)
    return GibbsDetails(state=state, log_z=math.log(z) + shift, alpha=alpha)


def gibbs_closed_form(p: PhysicalParams) -> GravcatXState:
    """Thermal X-state entries from the closed form, with eta = 1."""
    return gibbs_details(p).state


def gibbs_oracle(p: PhysicalParams) -> np.ndarray:
    """exp(-H/T)/tr exp(-H/T) via the Jacobi eigensolver and spectral exponential."""
    a = -build_hamiltonian(p) / p.temperature
    top = hermitian_eig(a).eigenvalues[0]
    e = matrix_exp_hermitian(a - top * np.eye(4))
    return e / np.trace(e).real


def xstate_eigenvalues(s: GravcatXState) -> tuple[float, float, float, float]:
    """(q1, q2, q3, q4): outer block descending, then b + eta*d, b - eta*d.

    The smaller outer eigenvalue is taken as det/q1 rather than a difference,
    which keeps it non-negative and accurate when it is tiny.
    """
    total = s.a_minus + s.a_plus
    ec, ed = s.outer_coherence, s.inner_coherence
    q1 = 0.5 * (total + math.hypot(s.a_minus - s.a_plus, 2.0 * ec))
    det = max(s.a_minus * s.a_plus - ec * ec, 0.0)
    q2 = det / q1 if q1 > 0 else 0.0
    return q1, q2, s.b + ed, max(s.b - ed, 0.0)
