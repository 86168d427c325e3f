"""Discrete-time quantum walks encoded in a single qubit.

Simulation of one- and two-particle walks, readout of the full coin-walker
state from phase-encoded qubit ratios, and the entropy-based correlation,
coherence and assisted-distillation measures evaluated on those states.
"""

__version__ = "0.1.0"

from .codec import (
    PHI0_DEFAULT,
    DecodeResult,
    EncodedQubit,
    RatioSample,
    build_decode_system,
    decode,
    encode,
    encoded_step,
    noisy_ratios,
    ratio,
    reconstruct_two_particle,
    reconstruct_walk,
)
from .distill import (
    BoundsReport,
    delta_cd_pure,
    lower_bound_delta,
    measure_subsystem_a,
    qi_relative_entropy,
    upper_bound_delta,
)
from .linalg import Spectrum, hermitian_eig, nullspace_min, partial_trace, tensor
from .measures import (
    DensityMatrix,
    MeasureReport,
    correlated_coherence,
    dephase,
    entanglement_pure,
    entropy,
    mid,
    mutual_information,
    rel_entropy_coherence,
)
from .optics import jones_hwp, jones_qwp, step_from_waveplates
from .walk import (
    TwoParticleState,
    WalkConfig,
    WalkState,
    coin_matrix,
    evolve,
    one_particle_initial,
    position_distribution,
    position_variance,
    step,
    two_particle_final,
)
