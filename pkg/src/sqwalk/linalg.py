"""Dense complex linear algebra used throughout the package.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np

from . import kernels
from .errors import ContractViolation, DimensionError

HERMITIAN_ATOL = 1e-12
TIE_DECIMALS = 8


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues (descending) and the matching orthonormal eigenvectors as columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __iter__(self):
        yield self.eigenvalues
        yield self.eigenvectors


def as_matrix(a) -> np.ndarray:
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {a.shape}")
    return a


def is_hermitian(a, atol: float = HERMITIAN_ATOL) -> bool:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    return bool(np.max(np.abs(a - a.conj().T), initial=0.0) <= atol)


def tensor(*mats) -> np.ndarray:
    """Kronecker product of one or more matrices (or vectors), left to right."""
    if not mats:
        raise ValueError("tensor() needs at least one operand")
    return reduce(np.kron, (np.asarray(m, dtype=np.complex128) for m in mats))


def _check_dims(dims: Sequence[int], size: int) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if any(d < 1 for d in dims) or int(np.prod(dims)) != size:
        raise DimensionError(f"subsystem dims {dims} do not multiply to {size}")
    return dims


def partial_trace(rho, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Reduce ``rho`` to the subsystems listed in ``keep``.

    Kept subsystems appear in ascending index order in the output, whatever
    order ``keep`` lists them in.
    """
    rho = as_matrix(rho)
    if rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"density matrix must be square, got {rho.shape}")
    dims = _check_dims(dims, rho.shape[0])
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= len(dims) for k in keep):
        raise DimensionError(f"keep indices {keep} out of range for {len(dims)} subsystems")
    n = len(dims)
    traced = [i for i in range(n) if i not in keep]
    t = rho.reshape(dims + dims)
    # trace out from the highest index so lower axis numbers stay valid
    for i in reversed(traced):
        nleft = t.ndim // 2
        t = np.trace(t, axis1=i, axis2=i + nleft)
    dk = int(np.prod([dims[k] for k in keep])) if keep else 1
    return t.reshape(dk, dk)


def _canonical_phase(v: np.ndarray) -> np.ndarray:
    """Rotate each column so that its first largest-magnitude entry is real positive."""
    v = v.copy()
    mags = np.round(np.abs(v), TIE_DECIMALS)
    for j in range(v.shape[1]):
        i = int(np.argmax(mags[:, j]))
        z = v[i, j]
        if z != 0:
            v[:, j] *= abs(z) / z
    return v


def _order(w: np.ndarray, v: np.ndarray) -> np.ndarray:
    keys = []
    for j in range(len(w)):
        col = np.round(v[:, j], TIE_DECIMALS)
        keys.append((-round(float(w[j]), 10), tuple(zip(col.real.tolist(), col.imag.tolist()))))
    return np.array(sorted(range(len(w)), key=lambda j: keys[j]), dtype=int)


def hermitian_eig(a) -> Spectrum:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Eigenvalues come out descending.  Each eigenvector is phase-fixed (largest
    entry real positive) and ties between equal eigenvalues are broken by
    lexicographic order of the rounded vector entries, so results are
    reproducible.
    """
    a = as_matrix(a)
    if not is_hermitian(a, atol=max(HERMITIAN_ATOL, 1e-12 * np.max(np.abs(a), initial=0.0))):
        raise ContractViolation("hermitian_eig requires a Hermitian matrix")
    a = 0.5 * (a + a.conj().T)
    w, v = kernels.jacobi_eigh(a)
    w, v = w[0], _canonical_phase(v[0])
    idx = _order(w, v)
    return Spectrum(w[idx], v[:, idx])


def eigvalsh_batch(a) -> np.ndarray:
    """Eigenvalues (descending) of a stack of Hermitian matrices, shape ``(batch, n)``."""
    a = np.asarray(a, dtype=np.complex128)
    a = 0.5 * (a + np.conj(np.swapaxes(a, -1, -2)))
    w, _ = kernels.jacobi_eigh(a, vectors=False)
    return -np.sort(-w, axis=1)


def nullspace_min(a) -> tuple[np.ndarray, float]:
    """Unit vector ``v`` minimizing ``||a @ v||``, and that minimal residual.

    ``v`` is the eigenvector of ``a^H a`` with the smallest eigenvalue.
    """
    a = as_matrix(a)
    gram = a.conj().T @ a
    spec = hermitian_eig(gram)
    v = spec.eigenvectors[:, -1]
    v = v / np.linalg.norm(v)
    return v, float(np.linalg.norm(a @ v))


def singular_values(a) -> np.ndarray:
    """All ``cols`` singular values of ``a`` (descending), zero-padded for wide matrices."""
    a = as_matrix(a)
    w = eigvalsh_batch((a.conj().T @ a)[None])[0]
    return np.sqrt(np.clip(w, 0.0, None))


def phase_aligned_distance(x, y) -> float:
    """``min_g ||x - e^{ig} y||`` (Euclidean), attained at ``g = arg <y, x>``."""
    x = np.asarray(x, dtype=np.complex128)
    y = np.asarray(y, dtype=np.complex128)
    overlap = np.vdot(y, x)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return float(np.linalg.norm(x - phase * y))
