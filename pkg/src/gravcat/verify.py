"""End-to-end oracle checks: every closed form against its general route."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .channel import (
    cptp_residual,
    decoherence_factor,
    dephasing_joint_probability,
    evolve_closed_form,
    evolve_general,
    memory_kernel,
)
from .quantifiers import (
    bell_max_closed,
    bell_max_general,
    coherence_l1_closed,
    coherence_l1_general,
    lqfi_closed,
    lqfi_general,
)
from .state import PhysicalParams, gibbs_closed_form, gibbs_oracle

TOLERANCES = {
    "gibbs": 1e-10,
    "channel": 1e-12,
    "cptp": 1e-12,
    "coherence": 1e-12,
    "lqfi": 1e-8,
    "bell": 1e-10,
}

GIBBS_OMEGAS = (0.0, 0.25, 0.5, 1.0, 2.0)
GIBBS_GAMMAS = (0.0, 0.5, 1.0, 2.0)
GIBBS_TEMPERATURES = (0.01, 0.1, 1.0, 10.0)

SIZES = {"small": (40, 60), "default": (200, 500)}


@dataclass(frozen=True)
class CheckResult:
    name: str
    points: int
    max_deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance


def gibbs_grid():
    for w, g, t in itertools.product(GIBBS_OMEGAS, GIBBS_GAMMAS, GIBBS_TEMPERATURES):
        yield PhysicalParams(w, g, t)


def random_points(n: int, seed: int = 20240601):
    """Reproducible (omega, gamma, T, mu, tau, t) draws covering both regimes."""
    rng = np.random.default_rng(seed)
    for _ in range(n):
        yield (
            float(rng.uniform(0.0, 2.0)),
            float(rng.uniform(0.0, 2.0)),
            float(10 ** rng.uniform(-2.0, 1.0)),
            float(rng.uniform(0.0, 1.0)),
            float(10 ** rng.uniform(-1.3, 1.0)),
            float(rng.uniform(0.0, 30.0)),
        )


def check_gibbs(tol: float) -> CheckResult:
    params = list(gibbs_grid())
    dev = max(
        float(np.max(np.abs(gibbs_closed_form(p).to_matrix() - gibbs_oracle(p)))) for p in params
    )
    return CheckResult("gibbs closed vs exp oracle", len(params), dev, tol)


def check_channel(n: int, tol: float, cptp_tol: float) -> list[CheckResult]:
    dev = cptp = 0.0
    for w, g, temp, mu, tau, t in random_points(n, seed=7):
        s = gibbs_closed_form(PhysicalParams(w, g, temp))
        f = memory_kernel(t, tau)
        closed = evolve_closed_form(s, f, mu).to_matrix()
        general = evolve_general(s.to_matrix(), f, mu)
        dev = max(dev, float(np.max(np.abs(closed - general))))
        cptp = max(cptp, cptp_residual(dephasing_joint_probability(f, mu)))
    return [
        CheckResult("channel closed vs Kraus", n, dev, tol),
        CheckResult("channel CPTP residual", n, cptp, cptp_tol),
    ]


def check_quantifiers(n: int, tols: dict) -> list[CheckResult]:
    dev = {"coherence": 0.0, "lqfi": 0.0, "bell": 0.0}
    for w, g, temp, mu, tau, t in random_points(n):
        eta = decoherence_factor(memory_kernel(t, tau), mu)
        s = gibbs_closed_form(PhysicalParams(w, g, temp)).with_eta(eta)
        rho = s.to_matrix()
        dev["coherence"] = max(dev["coherence"], abs(coherence_l1_closed(s) - coherence_l1_general(rho)))
        dev["lqfi"] = max(dev["lqfi"], abs(lqfi_closed(s) - lqfi_general(rho)))
        dev["bell"] = max(dev["bell"], abs(bell_max_closed(s) - bell_max_general(rho)))
    return [CheckResult(f"{k} closed vs general", n, v, tols[k]) for k, v in dev.items()]


def run_checks(size: str = "default", tol: float | None = None) -> list[CheckResult]:
    """All oracle checks; ``tol`` overrides every tolerance when given."""
    n_channel, n_quant = SIZES[size]
    tols = {k: (tol if tol is not None else v) for k, v in TOLERANCES.items()}
    results = [check_gibbs(tols["gibbs"])]
    results += check_channel(n_channel, tols["channel"], tols["cptp"])
    results += check_quantifiers(n_quant, tols)
    return results
