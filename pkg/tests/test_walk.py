import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sqwalk import walk as W
from sqwalk.errors import DomainError
from oracles import walk_dict

alphas = st.floats(-1.0, 1.0, allow_nan=False)
thetas = st.floats(0.0, math.pi, exclude_max=True, allow_nan=False)


@given(alpha=alphas, theta=thetas, steps=st.integers(0, 12))
def test_matches_dictionary_oracle(alpha, theta, steps):
    s = W.evolve(W.WalkConfig(steps, theta, alpha))
    a, b = walk_dict(alpha, 1j * math.sqrt(1 - alpha * alpha), steps, theta)
    np.testing.assert_allclose(s.a, a, atol=1e-12)
    np.testing.assert_allclose(s.b, b, atol=1e-12)


@given(alpha=alphas, theta=thetas, steps=st.integers(0, 9))
def test_matches_dense_operator(alpha, theta, steps):
    init = W.one_particle_initial(alpha)
    fast = W.walk(init, steps, theta)
    dense = W.dense_evolve(init, steps, theta)
    np.testing.assert_allclose(fast.vector(), dense.vector(), atol=1e-12)


@given(alpha=alphas, theta=thetas, steps=st.integers(0, 15))
def test_norm_preserved(alpha, theta, steps):
    assert abs(W.evolve(W.WalkConfig(steps, theta, alpha)).norm - 1.0) < 1e-12


@given(alpha=alphas, theta=thetas, steps=st.integers(0, 9))
def test_parity_support(alpha, theta, steps):
    # on the full line, only sites with n = steps (mod 2) are ever populated
    npos = 2 * steps + 1
    psi = np.zeros(2 * npos, dtype=complex)
    psi[steps] = alpha
    psi[npos + steps] = 1j * math.sqrt(1 - alpha * alpha)
    psi = np.linalg.matrix_power(W.dense_step_operator(steps, theta), steps) @ psi
    n = np.arange(-steps, steps + 1)
    wrong = (n - steps) % 2 == 1
    assert np.all(np.abs(psi[:npos][wrong]) < 1e-14) and np.all(np.abs(psi[npos:][wrong]) < 1e-14)
    np.testing.assert_array_equal(W.evolve(W.WalkConfig(steps, theta, alpha)).positions, n[~wrong])


def test_two_steps_symmetric_distribution():
    s = W.evolve(W.WalkConfig(2, math.pi / 4, 1 / math.sqrt(2)))
    np.testing.assert_allclose(W.position_distribution(s), [0.25, 0.5, 0.25], atol=1e-15)


def test_frozen_variances():
    # exact rationals from the dictionary oracle: 944/64 and 3047/256
    s = W.evolve(W.WalkConfig(7, math.pi / 4, 1 / math.sqrt(2)))
    assert abs(W.position_variance(s) - 14.75) < 1e-12
    for alpha in (-1.0, 0.0, 1.0):
        s = W.evolve(W.WalkConfig(7, math.pi / 4, alpha))
        assert abs(W.position_variance(s) - 3047 / 256) < 1e-12


def test_variance_extrema_at_balanced_coin():
    grid = np.round(np.linspace(-1, 1, 41), 12)
    var = [W.position_variance(W.evolve(W.WalkConfig(7, math.pi / 4, float(a)))) for a in grid]
    top = grid[np.isclose(var, max(var), atol=1e-12)]
    assert set(np.round(np.abs(top), 2)) == {0.7}
    np.testing.assert_allclose(var, var[::-1], atol=1e-12)


def test_state_is_immutable():
    s = W.evolve(W.WalkConfig())
    with pytest.raises(ValueError):
        s.a[0] = 1.0


@pytest.mark.parametrize("kw", [{"steps": -1}, {"theta": math.pi}, {"alpha": 1.5}])
def test_config_rejects_out_of_range(kw):
    with pytest.raises(DomainError):
        W.WalkConfig(**kw)


@pytest.mark.parametrize("alpha", [-1.0, -0.3, 0.0, 1 / math.sqrt(2), 1.0])
def test_two_particle_matches_dense_product_evolution(alpha):
    steps, theta = 4, math.pi / 4
    npos = 2 * steps + 1
    u = np.linalg.matrix_power(W.dense_step_operator(steps, theta), steps)
    e0 = np.zeros(2 * npos, dtype=complex)
    e1 = np.zeros(2 * npos, dtype=complex)
    e0[steps] = 1.0
    e1[npos + steps] = 1.0
    beta = math.sqrt(1 - alpha * alpha)
    psi = np.kron(u, u) @ (alpha * np.kron(e0, e1) + beta * np.kron(e1, e0))
    keep = np.concatenate([np.arange(0, npos, 2), npos + np.arange(0, npos, 2)])
    oracle = psi.reshape(2 * npos, 2 * npos)[np.ix_(keep, keep)].ravel()
    joint = W.two_particle_final(alpha, steps, theta).joint()
    assert abs(abs(np.vdot(oracle, joint)) - 1.0) < 1e-12


def test_two_particle_dims_and_norm():
    tp = W.two_particle_final(0.3, 7, math.pi / 4)
    assert tp.dims == (2, 8, 2, 8)
    assert abs(np.linalg.norm(tp.joint()) - 1.0) < 1e-12
