"""Jones matrices for wave plates and the three-plate realization of a walk step.

Convention: a plate with fast axis at angle ``xi`` from horizontal is
``R(xi) @ diag(1, e^{i delta}) @ R(-xi)`` with ``R`` the real rotation
``[[cos, -sin], [sin, cos]]`` and retardance ``delta = pi/2`` (QWP) or
``pi`` (HWP).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .linalg import phase_aligned_distance


class PlateKind(enum.Enum):
    QWP = "QWP"
    HWP = "HWP"


@dataclass(frozen=True)
class WaveplateSetting:
    kind: PlateKind
    axis_angle: float

    def __post_init__(self):
        object.__setattr__(self, "axis_angle", self.axis_angle % math.pi)

    def matrix(self) -> np.ndarray:
        if self.kind is PlateKind.QWP:
            return jones_qwp(self.axis_angle)
        return jones_hwp(self.axis_angle)


def rotation(xi: float) -> np.ndarray:
    c, s = math.cos(xi), math.sin(xi)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def _retarder(xi: float, delta: complex) -> np.ndarray:
    return rotation(xi) @ np.diag([1.0, delta]) @ rotation(-xi)


def jones_qwp(xi: float) -> np.ndarray:
    return _retarder(xi, 1j)


def jones_hwp(xi: float) -> np.ndarray:
    return _retarder(xi, -1.0)


def waveplate_sequence(theta: float, phi: float) -> list[WaveplateSetting]:
    """Plates realizing ``exp(-i phi sigma_z) exp(-i theta sigma_y)``, listed left to right.

    The light meets the last entry first.  Under the convention above the
    final quarter-wave plate sits at ``pi/4 - theta``; the form with
    ``pi/4 + theta`` matches only when ``theta`` is 0 or pi/2 (see
    ``literal_waveplate_sequence``).
    """
    return [
        WaveplateSetting(PlateKind.QWP, math.pi / 4),
        WaveplateSetting(PlateKind.HWP, phi / 2 - theta / 2 + math.pi / 4),
        WaveplateSetting(PlateKind.QWP, math.pi / 4 - theta),
    ]


def literal_waveplate_sequence(theta: float, phi: float) -> list[WaveplateSetting]:
    """The QWP(pi/4) HWP(phi/2 - theta/2 + pi/4) QWP(pi/4 + theta) arrangement, kept for comparison."""
    return [
        WaveplateSetting(PlateKind.QWP, math.pi / 4),
        WaveplateSetting(PlateKind.HWP, phi / 2 - theta / 2 + math.pi / 4),
        WaveplateSetting(PlateKind.QWP, math.pi / 4 + theta),
    ]


def compose(plates) -> np.ndarray:
    out = np.eye(2, dtype=np.complex128)
    for plate in plates:
        out = out @ plate.matrix()
    return out


def step_from_waveplates(theta: float, phi: float) -> np.ndarray:
    return compose(waveplate_sequence(theta, phi))


def pauli_exponential_step(theta: float, phi: float) -> np.ndarray:
    """``exp(-i phi sigma_z) @ exp(-i theta sigma_y)`` written out entrywise."""
    c, s = math.cos(theta), math.sin(theta)
    ep = complex(math.cos(phi), -math.sin(phi))
    return np.array([[ep * c, -ep * s], [ep.conjugate() * s, ep.conjugate() * c]])


def global_phase_distance(a, b) -> float:
    """``min_g ||a - e^{ig} b||_F``."""
    return phase_aligned_distance(np.ravel(a), np.ravel(b))
