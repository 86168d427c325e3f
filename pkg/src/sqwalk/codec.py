"""Single-qubit phase encoding of a walk state and its reconstruction.

A state ``sum_n a_n|n>|0>_c + b_n|n>|1>_c`` is mapped, for a phase setting
``phi``, onto the qubit ``(sum_n a_n e^{i n phi}, sum_n b_n e^{i n phi})``
(normalized).  One walk step then acts on the qubit as
``exp(-i phi sigma_z) exp(-i theta sigma_y)``.  Measuring the amplitude ratio
``r_k = c0/c1`` at ``2M - 1`` distinct phases gives a homogeneous linear
system whose one-dimensional kernel is the amplitude vector ``(a, b)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from . import linalg
from .errors import (
    DecodeFailed,
    DenominatorVanishes,
    EncodingInvalid,
    IllConditioned,
    PhasePathological,
)
from .walk import (
    TwoParticleState,
    WalkConfig,
    WalkState,
    coin_basis_initial,
    coin_matrix,
    one_particle_initial,
    walk,
)

PHI0_DEFAULT = math.radians(23.6)
EPS_DEN = 1e-9
TAU_RES = 1e-6
MAX_RETRIES = 5
RETRY_FRACTION = 0.1

_DEGENERATE_ATOL = 1e-14
_PATHOLOGICAL_ATOL = 1e-12


@dataclass(frozen=True)
class EncodedQubit:
    phi: float
    c0: complex
    c1: complex
    norm_factor: float = 1.0

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.c0, self.c1], dtype=np.complex128)


@dataclass(frozen=True)
class RatioSample:
    k: int
    phi_k: float
    r_k: complex


@dataclass(frozen=True)
class DecodeResult:
    reconstructed: WalkState
    residual: float
    fidelity_vs_oracle: Optional[float] = None
    kernel_gap: float = math.inf
    condition: float = math.inf


def phase_sums(state: WalkState, phi: float) -> tuple[complex, complex]:
    w = np.exp(1j * state.positions * phi)
    return complex(np.dot(w, state.a)), complex(np.dot(w, state.b))


def is_degenerate(state: WalkState) -> bool:
    scale = max(state.norm, 1e-300)
    return bool(
        np.max(np.abs(state.a), initial=0.0) <= _DEGENERATE_ATOL * scale
        or np.max(np.abs(state.b), initial=0.0) <= _DEGENERATE_ATOL * scale
    )


def encode(state: WalkState, phi: float, strict: bool = True) -> EncodedQubit:
    """Phase-encode ``state`` into one qubit.

    With ``strict=False`` single-coin states are accepted; this is how a
    walk whose *initial* coin is ``|0>`` or ``|1>`` is prepared on the qubit,
    even though such a state could not itself be read back.
    """
    if strict and is_degenerate(state):
        raise EncodingInvalid("all a_n or all b_n vanish; the phase encoding cannot be inverted")
    sa, sb = phase_sums(state, phi)
    norm = math.hypot(abs(sa), abs(sb))
    if norm <= _PATHOLOGICAL_ATOL * max(state.norm, 1e-300):
        raise PhasePathological(f"both phase sums vanish at phi={phi!r}")
    return EncodedQubit(phi, sa / norm, sb / norm, norm)


def pauli_step_matrix(theta: float, phi: float) -> np.ndarray:
    """``exp(-i phi sigma_z) @ exp(-i theta sigma_y)``."""
    shift = np.diag([np.exp(-1j * phi), np.exp(1j * phi)])
    return shift @ coin_matrix(theta)


StepMatrix = Callable[[float, float], np.ndarray]


def encoded_step(q: EncodedQubit, theta: float, step_matrix: StepMatrix = pauli_step_matrix) -> EncodedQubit:
    c0, c1 = step_matrix(theta, q.phi) @ q.vector
    return EncodedQubit(q.phi, complex(c0), complex(c1), q.norm_factor)


def ratio(q: EncodedQubit, eps_den: float = EPS_DEN) -> complex:
    if abs(q.c1) <= eps_den:
        raise DenominatorVanishes(f"|c1|={abs(q.c1):.3e} at phi={q.phi!r}")
    return q.c0 / q.c1


def phase_settings(m: int, phi_0: float) -> np.ndarray:
    return np.arange(1, 2 * m) * phi_0


def collect_ratios(
    initial: WalkState,
    steps: int,
    theta: float,
    phi_0: float,
    step_matrix: StepMatrix = pauli_step_matrix,
    eps_den: float = EPS_DEN,
) -> list[RatioSample]:
    """Run the encoded single-qubit walk once per phase setting and read off ratios.

    A setting whose denominator vanishes is nudged by ``0.1 * phi_0`` and
    rerun, at most ``MAX_RETRIES`` times.
    """
    m = initial.steps + steps + 1
    samples = []
    for k in range(1, 2 * m):
        phi = k * phi_0
        for attempt in range(MAX_RETRIES + 1):
            q = encode(initial, phi, strict=False)
            for _ in range(steps):
                q = encoded_step(q, theta, step_matrix)
            try:
                r = ratio(q, eps_den)
            except DenominatorVanishes:
                if attempt == MAX_RETRIES:
                    raise
                phi += RETRY_FRACTION * phi_0
                continue
            samples.append(RatioSample(k, phi, r))
            break
    return samples


def exact_ratios(state: WalkState, phi_0: float) -> list[RatioSample]:
    """Ratios computed directly from the amplitudes (no qubit evolution)."""
    out = []
    for k, phi in enumerate(phase_settings(state.size, phi_0), start=1):
        sa, sb = phase_sums(state, phi)
        out.append(RatioSample(k, float(phi), sa / sb))
    return out


def build_decode_system(samples: Sequence[RatioSample], m: int) -> np.ndarray:
    if len(samples) != 2 * m - 1:
        raise ValueError(f"need {2 * m - 1} ratio samples for M={m}, got {len(samples)}")
    phis = np.array([s.phi_k for s in samples], dtype=float)
    if m > 1:
        # all positions share a parity, so phases differing by pi give the same equation
        wrapped = np.mod(phis, math.pi)
        d = np.abs(wrapped[:, None] - wrapped[None, :])
        d = np.minimum(d, math.pi - d)
        np.fill_diagonal(d, math.inf)
        if np.min(d) < 1e-9:
            raise IllConditioned("phase settings are not distinct modulo pi")
    n = np.arange(-(m - 1), m, 2)
    e = np.exp(1j * np.outer(phis, n))
    r = np.array([s.r_k for s in samples], dtype=np.complex128)
    return np.hstack([e, -r[:, None] * e])


def _fix_global_phase(v: np.ndarray, m: int) -> np.ndarray:
    mag = np.abs(v)
    top = mag.max()
    cands = np.flatnonzero(mag >= top * (1.0 - 1e-12))
    # prefer lowest position index, then the a-component
    best = min(cands, key=lambda i: (i % m, i // m))
    z = v[best]
    return v * (abs(z) / z)


def fidelity(x: WalkState, y: WalkState) -> float:
    u, v = x.vector(), y.vector()
    return float(abs(np.vdot(u, v)) ** 2 / (np.vdot(u, u).real * np.vdot(v, v).real))


def decode(samples: Sequence[RatioSample], m: int, tau_res: float = TAU_RES) -> DecodeResult:
    a = build_decode_system(samples, m)
    v, residual = linalg.nullspace_min(a)
    v = _fix_global_phase(v / np.linalg.norm(v), m)
    sv = linalg.singular_values(a)
    floor = np.finfo(float).eps * max(sv[0], 1.0)
    if len(sv) >= 2:
        gap = sv[-2] / max(sv[-1], floor)
        cond = sv[0] / max(sv[-2], floor)
    else:
        gap = cond = 1.0
    if residual > tau_res:
        raise DecodeFailed("decode residual above tolerance", residual)
    state = WalkState.from_vector(v, m - 1)
    return DecodeResult(state, residual, None, float(gap), float(cond))


def noisy_ratios(samples: Sequence[RatioSample], sigma_r: float, seed: int) -> list[RatioSample]:
    """Add complex Gaussian noise (std ``sigma_r`` per real component) to every ratio."""
    if sigma_r < 0:
        raise ValueError("sigma_r must be >= 0")
    if sigma_r == 0:
        return list(samples)
    rng = np.random.default_rng(seed)
    noise = rng.normal(0.0, sigma_r, size=(len(samples), 2))
    return [
        RatioSample(s.k, s.phi_k, s.r_k + complex(dr, di))
        for s, (dr, di) in zip(samples, noise)
    ]


def noisy_tolerance(sigma_r: float, m: int) -> float:
    return max(TAU_RES, 10.0 * sigma_r * math.sqrt(2 * m - 1))


def reconstruct(
    initial: WalkState,
    steps: int,
    theta: float,
    phi_0: float = PHI0_DEFAULT,
    sigma_r: float = 0.0,
    seed: int = 0,
    step_matrix: StepMatrix = pauli_step_matrix,
) -> DecodeResult:
    """Full pipeline for an arbitrary initial state at the origin."""
    m = initial.steps + steps + 1
    samples = collect_ratios(initial, steps, theta, phi_0, step_matrix)
    samples = noisy_ratios(samples, sigma_r, seed)
    res = decode(samples, m, noisy_tolerance(sigma_r, m))
    oracle = walk(initial, steps, theta)
    return DecodeResult(
        res.reconstructed,
        res.residual,
        fidelity(res.reconstructed, oracle),
        res.kernel_gap,
        res.condition,
    )


def reconstruct_walk(config: WalkConfig, phi_0: float = PHI0_DEFAULT) -> DecodeResult:
    return reconstruct(one_particle_initial(config.alpha), config.steps, config.theta, phi_0)


def reconstruct_two_particle(alpha: float, steps: int, theta: float, phi_0: float = PHI0_DEFAULT) -> TwoParticleState:
    """Rebuild the two-particle state from separately decoded coin-0 and coin-1 walks.

    The joint state is a two-term superposition of product states, so each
    branch is read out on its own and recombined with the known weights.
    Each decoded branch carries an arbitrary global phase, but both terms of
    the superposition contain one copy of each branch, so those phases only
    multiply the joint state by an overall phase.
    """
    branches = [
        reconstruct(coin_basis_initial(coin), steps, theta, phi_0).reconstructed
        for coin in (0, 1)
    ]
    return TwoParticleState(alpha, branches[0], branches[1])
