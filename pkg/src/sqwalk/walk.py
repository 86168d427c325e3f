"""Discrete-time quantum walk on the line, for one and two particles.

States are kept in the compact light-cone basis: after ``N`` steps from the
origin only the ``N + 1`` positions ``-N, -N+2, ..., N`` can carry amplitude,
so a state is two length-``N+1`` arrays ``a`` (coin 0) and ``b`` (coin 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

NORM_ATOL = 1e-10


@dataclass(frozen=True)
class WalkConfig:
    steps: int = 7
    theta: float = math.pi / 4
    alpha: float = 1 / math.sqrt(2)

    def __post_init__(self):
        if self.steps < 0:
            raise DomainError(f"steps must be >= 0, got {self.steps}")
        if not 0.0 <= self.theta < math.pi:
            raise DomainError(f"theta must lie in [0, pi), got {self.theta}")
        if not -1.0 <= self.alpha <= 1.0:
            raise DomainError(f"alpha must lie in [-1, 1], got {self.alpha}")


@dataclass(frozen=True, eq=False)
class WalkState:
    """Coin-walker state ``sum_n a_n |n>|0>_c + b_n |n>|1>_c`` on the light cone."""

    steps: int
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=np.complex128).copy()
        b = np.asarray(self.b, dtype=np.complex128).copy()
        if a.shape != (self.steps + 1,) or b.shape != (self.steps + 1,):
            raise DomainError(f"expected {self.steps + 1} amplitudes per coin state")
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def size(self) -> int:
        return self.steps + 1

    @property
    def positions(self) -> np.ndarray:
        return np.arange(-self.steps, self.steps + 1, 2)

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.a) ** 2) + np.sum(np.abs(self.b) ** 2)))

    def vector(self) -> np.ndarray:
        """Flat state in the coin (x) walker product basis, dims ``(2, steps+1)``."""
        return np.concatenate([self.a, self.b])

    @classmethod
    def from_vector(cls, v, steps: int) -> "WalkState":
        v = np.asarray(v, dtype=np.complex128)
        return cls(steps, v[: steps + 1], v[steps + 1 :])

    def normalized(self) -> "WalkState":
        return WalkState(self.steps, self.a / self.norm, self.b / self.norm)


def coin_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def step(state: WalkState, theta: float) -> WalkState:
    """Toss the coin, then shift coin-0 amplitude left and coin-1 amplitude right."""
    c, s = math.cos(theta), math.sin(theta)
    ta = c * state.a - s * state.b
    tb = s * state.a + c * state.b
    a = np.zeros(state.size + 1, dtype=np.complex128)
    b = np.zeros(state.size + 1, dtype=np.complex128)
    a[:-1] = ta
    b[1:] = tb
    return WalkState(state.steps + 1, a, b)


def one_particle_initial(alpha: float) -> WalkState:
    if not -1.0 <= alpha <= 1.0:
        raise DomainError(f"alpha must lie in [-1, 1], got {alpha}")
    return WalkState(0, [alpha], [1j * math.sqrt(max(0.0, 1.0 - alpha * alpha))])


def coin_basis_initial(coin: int) -> WalkState:
    """Walker at the origin with the coin in ``|0>`` or ``|1>``."""
    if coin not in (0, 1):
        raise DomainError(f"coin must be 0 or 1, got {coin}")
    return WalkState(0, [1.0 - coin], [float(coin)])


def walk(state: WalkState, steps: int, theta: float) -> WalkState:
    for _ in range(steps):
        state = step(state, theta)
    return state


def evolve(config: WalkConfig) -> WalkState:
    return walk(one_particle_initial(config.alpha), config.steps, config.theta)


def position_distribution(state: WalkState) -> np.ndarray:
    return np.abs(state.a) ** 2 + np.abs(state.b) ** 2


def position_variance(state: WalkState) -> float:
    p = position_distribution(state)
    n = state.positions
    mean = float(np.dot(n, p))
    return max(0.0, float(np.dot(n * n, p)) - mean * mean)


@dataclass(frozen=True, eq=False)
class TwoParticleState:
    """``alpha |branch0>|branch1> + sqrt(1-alpha^2) |branch1>|branch0>``.

    ``branch0`` and ``branch1`` are the walks started from coin ``|0>`` and
    ``|1>``.  Subsystem order of the joint vector is A (coin 1), B (walker 1),
    C (coin 2), D (walker 2).
    """

    alpha: float
    branch0: WalkState
    branch1: WalkState
    labels: tuple = field(default=("A", "B", "C", "D"))

    @property
    def dims(self) -> tuple[int, int, int, int]:
        m = self.branch0.size
        return (2, m, 2, m)

    def joint(self) -> np.ndarray:
        v0 = self.branch0.vector()
        v1 = self.branch1.vector()
        beta = math.sqrt(max(0.0, 1.0 - self.alpha * self.alpha))
        return self.alpha * np.kron(v0, v1) + beta * np.kron(v1, v0)


def two_particle_final(alpha: float, steps: int, theta: float) -> TwoParticleState:
    if not -1.0 <= alpha <= 1.0:
        raise DomainError(f"alpha must lie in [-1, 1], got {alpha}")
    b0 = walk(coin_basis_initial(0), steps, theta)
    b1 = walk(coin_basis_initial(1), steps, theta)
    return TwoParticleState(alpha, b0, b1)


def dense_step_operator(steps: int, theta: float) -> np.ndarray:
    """``T @ S`` on the full ``(2N+1)``-site line (coin (x) position order), no wrap."""
    npos = 2 * steps + 1
    shift = np.zeros((2 * npos, 2 * npos), dtype=np.complex128)
    for j in range(npos):
        if j - 1 >= 0:
            shift[j - 1, j] = 1.0
        if j + 1 < npos:
            shift[npos + j + 1, npos + j] = 1.0
    return shift @ np.kron(coin_matrix(theta), np.eye(npos))


def dense_evolve(initial: WalkState, steps: int, theta: float) -> WalkState:
    """Evolve by repeated application of the dense ``T @ S`` matrix.

    Used as an independent oracle for ``walk``; only the initial state must
    sit at the origin (``initial.steps == 0``).
    """
    if initial.steps != 0:
        raise DomainError("dense_evolve expects a state at the origin")
    npos = 2 * steps + 1
    psi = np.zeros(2 * npos, dtype=np.complex128)
    psi[steps] = initial.a[0]
    psi[npos + steps] = initial.b[0]
    u = dense_step_operator(steps, theta)
    psi = np.linalg.matrix_power(u, steps) @ psi
    keep = np.arange(0, npos, 2)
    return WalkState(steps, psi[:npos][keep], psi[npos:][keep])
