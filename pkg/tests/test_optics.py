import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sqwalk import codec, optics
from sqwalk import walk as W

SZ = np.diag([1.0, -1.0]).astype(complex)
SY = np.array([[0, -1j], [1j, 0]])
angles = st.floats(-2 * math.pi, 2 * math.pi, allow_nan=False)


def expm_series(a, terms=60):
    out = np.eye(2, dtype=complex)
    term = np.eye(2, dtype=complex)
    for k in range(1, terms):
        term = term @ a / k
        out = out + term
    return out


@given(theta=angles, phi=angles)
def test_pauli_step_matches_series(theta, phi):
    ref = expm_series(-1j * phi * SZ) @ expm_series(-1j * theta * SY)
    np.testing.assert_allclose(optics.pauli_exponential_step(theta, phi), ref, atol=1e-12)
    np.testing.assert_allclose(codec.pauli_step_matrix(theta, phi), ref, atol=1e-12)


@given(theta=angles, phi=angles)
def test_three_plates_equal_step_up_to_phase(theta, phi):
    d = optics.global_phase_distance(optics.step_from_waveplates(theta, phi), optics.pauli_exponential_step(theta, phi))
    assert d < 1e-10


@given(xi=angles)
def test_plates_are_unitary_with_right_retardance(xi):
    for m, delta in ((optics.jones_qwp(xi), 1j), (optics.jones_hwp(xi), -1)):
        np.testing.assert_allclose(m @ m.conj().T, np.eye(2), atol=1e-14)
        np.testing.assert_allclose(np.sort_complex(np.linalg.eigvals(m)), np.sort_complex(np.array([1, delta])), atol=1e-12)
    np.testing.assert_allclose(optics.jones_qwp(xi) @ optics.jones_qwp(xi), optics.jones_hwp(xi), atol=1e-14)


def test_horizontal_plates():
    np.testing.assert_allclose(optics.jones_qwp(0.0), np.diag([1, 1j]), atol=1e-15)
    np.testing.assert_allclose(optics.jones_hwp(0.0), np.diag([1, -1]), atol=1e-15)


@pytest.mark.parametrize("theta", [0.1, 0.5, math.pi / 4, 1.2, 2.0])
def test_literal_arrangement_differs_for_generic_theta(theta):
    d = optics.global_phase_distance(
        optics.compose(optics.literal_waveplate_sequence(theta, 0.7)),
        optics.pauli_exponential_step(theta, 0.7),
    )
    assert d > 1e-2


def test_literal_arrangement_agrees_at_zero_theta():
    d = optics.global_phase_distance(
        optics.compose(optics.literal_waveplate_sequence(0.0, 0.7)), optics.pauli_exponential_step(0.0, 0.7)
    )
    assert d < 1e-12


def test_axis_angles_are_reduced_mod_pi():
    p = optics.WaveplateSetting(optics.PlateKind.HWP, 3.5)
    assert 0 <= p.axis_angle < math.pi
    np.testing.assert_allclose(p.matrix(), optics.jones_hwp(3.5), atol=1e-14)


@pytest.mark.parametrize("alpha", [-0.9, 0.2, 1 / math.sqrt(2)])
def test_ratios_agree_between_paths(alpha):
    init = W.one_particle_initial(alpha)
    phi0 = math.radians(23.6)
    pauli = codec.collect_ratios(init, 7, math.pi / 4, phi0)
    plates = codec.collect_ratios(init, 7, math.pi / 4, phi0, optics.step_from_waveplates)
    for x, y in zip(pauli, plates):
        assert abs(x.r_k - y.r_k) < 1e-10 * max(1.0, abs(x.r_k))
