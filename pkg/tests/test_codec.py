import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from sqwalk import codec
from sqwalk import walk as W
from sqwalk.errors import (
    DecodeFailed,
    DenominatorVanishes,
    EncodingInvalid,
    IllConditioned,
    PhasePathological,
)
from oracles import random_ket

PHI0 = math.radians(23.6)
thetas = st.floats(0.0, math.pi, exclude_max=True, allow_nan=False)


def random_state(seed, steps):
    v = random_ket(np.random.default_rng(seed), 2 * (steps + 1))
    return W.WalkState.from_vector(v, steps)


@given(seed=st.integers(0, 2**32 - 1), steps=st.integers(0, 8), theta=thetas, phi=st.floats(-7, 7))
def test_encoding_commutes_with_step(seed, steps, theta, phi):
    # encoding then one qubit step equals one walk step then encoding
    s = random_state(seed, steps)
    sa, sb = codec.phase_sums(s, phi)
    assume(math.hypot(abs(sa), abs(sb)) > 1e-6)
    lhs = codec.encoded_step(codec.encode(s, phi), theta).vector
    sa2, sb2 = codec.phase_sums(W.step(s, theta), phi)
    rhs = np.array([sa2, sb2]) / math.hypot(abs(sa), abs(sb))
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


@given(seed=st.integers(0, 2**32 - 1), steps=st.integers(0, 8))
def test_round_trip_random_states(seed, steps):
    s = random_state(seed, steps)
    res = codec.decode(codec.exact_ratios(s, PHI0), s.size)
    assert codec.fidelity(res.reconstructed, s) > 1 - 1e-8
    assert res.residual < 1e-8


@given(seed=st.integers(0, 2**32 - 1), scale=st.complex_numbers(min_magnitude=1e-3, max_magnitude=1e3))
def test_ratios_scale_invariant(seed, scale):
    s = random_state(seed, 4)
    t = W.WalkState(4, scale * s.a, scale * s.b)
    for x, y in zip(codec.exact_ratios(s, PHI0), codec.exact_ratios(t, PHI0)):
        assert abs(x.r_k - y.r_k) <= 1e-9 * max(1.0, abs(x.r_k))


def test_reconstruction_matches_direct_ratios():
    init = W.one_particle_initial(0.3)
    final = W.walk(init, 7, math.pi / 4)
    for x, y in zip(codec.collect_ratios(init, 7, math.pi / 4, PHI0), codec.exact_ratios(final, PHI0)):
        assert x.phi_k == y.phi_k
        assert abs(x.r_k - y.r_k) < 1e-10 * max(1.0, abs(y.r_k))


@pytest.mark.parametrize("alpha", [-1.0, 0.0, 1.0, 1 / math.sqrt(2), -0.45])
def test_reconstruct_walk_including_single_coin_starts(alpha):
    res = codec.reconstruct_walk(W.WalkConfig(7, math.pi / 4, alpha))
    assert res.fidelity_vs_oracle > 1 - 1e-10
    assert math.isfinite(res.kernel_gap) and math.isfinite(res.condition)


def test_condition_matches_lapack():
    init = W.one_particle_initial(1 / math.sqrt(2))
    samples = codec.collect_ratios(init, 7, math.pi / 4, PHI0)
    res = codec.decode(samples, 8)
    sv = np.linalg.svd(codec.build_decode_system(samples, 8), compute_uv=False)
    assert abs(res.condition / (sv[0] / sv[-1]) - 1) < 1e-6


def test_global_phase_convention():
    s = random_state(3, 5)
    v = codec.decode(codec.exact_ratios(s, PHI0), 6).reconstructed.vector()
    k = np.argmax(np.abs(v))
    assert abs(v[k].imag) < 1e-14 and v[k].real > 0


def test_two_particle_reconstruction():
    for alpha in (-0.8, 0.0, 0.5, 1.0):
        exact = W.two_particle_final(alpha, 7, math.pi / 4).joint()
        rec = codec.reconstruct_two_particle(alpha, 7, math.pi / 4).joint()
        assert abs(np.vdot(exact, rec)) ** 2 > 1 - 1e-10


def test_degenerate_state_rejected():
    s = W.WalkState(2, [0.6, 0.8, 0], [0, 0, 0])
    with pytest.raises(EncodingInvalid):
        codec.encode(s, PHI0)
    assert codec.encode(s, PHI0, strict=False).c1 == 0


def test_pathological_phase():
    # e^{-i pi/2} + e^{i pi/2} = 0 for both coin components
    s = W.WalkState(1, [0.5, 0.5], [0.5, 0.5])
    with pytest.raises(PhasePathological):
        codec.encode(s, math.pi / 2)


def test_vanishing_denominator():
    with pytest.raises(DenominatorVanishes):
        codec.ratio(codec.EncodedQubit(0.1, 1.0, 0.0))


def test_retry_nudges_phase():
    def step_matrix(theta, phi):
        if phi == PHI0:
            return np.eye(2)
        return codec.pauli_step_matrix(theta, phi)

    samples = codec.collect_ratios(W.coin_basis_initial(0), 1, math.pi / 4, PHI0, step_matrix)
    assert samples[0].phi_k == pytest.approx(1.1 * PHI0)
    assert [s.phi_k for s in samples[1:]] == [k * PHI0 for k in (2, 3)]


def test_duplicate_phases_rejected():
    s = random_state(0, 3)
    with pytest.raises(IllConditioned):
        codec.build_decode_system(codec.exact_ratios(s, math.pi / 2), 4)
    with pytest.raises(ValueError):
        codec.build_decode_system(codec.exact_ratios(s, PHI0)[:-1], 4)


def test_residual_above_tolerance_fails():
    # 2M - 1 equations in 2M unknowns always have a kernel; failure comes from the tolerance
    samples = codec.exact_ratios(random_state(2, 3), PHI0)
    with pytest.raises(DecodeFailed) as info:
        codec.decode(samples, 4, tau_res=-1.0)
    assert 0.0 <= info.value.residual < 1e-10


def test_noise_is_seeded():
    clean = codec.exact_ratios(random_state(1, 7), PHI0)
    a = codec.noisy_ratios(clean, 1e-3, seed=4)
    b = codec.noisy_ratios(clean, 1e-3, seed=4)
    c = codec.noisy_ratios(clean, 1e-3, seed=5)
    assert [x.r_k for x in a] == [x.r_k for x in b]
    assert [x.r_k for x in a] != [x.r_k for x in c]
    assert codec.noisy_ratios(clean, 0.0, seed=4) == clean


def test_noise_calibration_hundred_seeds():
    init = W.one_particle_initial(1 / math.sqrt(2))
    oracle = W.walk(init, 7, math.pi / 4)
    clean = codec.collect_ratios(init, 7, math.pi / 4, PHI0)
    fids = [
        codec.fidelity(codec.decode(codec.noisy_ratios(clean, 1e-4, seed), 8, math.inf).reconstructed, oracle)
        for seed in range(100)
    ]
    assert np.mean(fids) >= 0.99
