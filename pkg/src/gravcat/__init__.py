"""Quantumness of thermal gravitational-cat states in correlated dephasing channels."""

from .channel import (
    ChannelSpec,
    PauliProbability,
    Regime,
    apply_channel_general,
    decoherence_factor,
    evolve_closed_form,
    flip_probability,
    joint_probability,
    memory_kernel,
)
from .experiments import Axis, SweepSpec, figure_preset, run_figure, run_sweep
from .linalg import hermitian_eig, kron2, matrix_exp_hermitian, partial_trace_B
from .output import emit_csv, emit_svg
from .quantifiers import (
    QuantifierRecord,
    bell_max_closed,
    bell_max_general,
    coherence_l1_closed,
    coherence_l1_general,
    correlation_matrix,
    lqfi_closed,
    lqfi_general,
    measure,
    violation_flag,
)
from .state import (
    Geometry,
    GravcatXState,
    PhysicalParams,
    build_hamiltonian,
    gibbs_closed_form,
    gibbs_oracle,
    gravitational_coupling,
    xstate_eigenvalues,
)

__version__ = "0.1.0"
