"""Entropy-based correlation and coherence measures.

Every quantity uses base-2 logarithms and the computational product basis
as the incoherent basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from . import linalg
from .errors import ContractViolation, DimensionError, NumericConsistencyError

VALID_ATOL = 1e-10
PURE_ATOL = 1e-10
EIG_FLOOR = 1e-10

Cut = Union[str, Sequence[Union[int, str]]]


class DensityMatrix:
    """A density matrix with subsystem dimensions and labels.

    It may be stored either as the full matrix or as a purification factor
    ``P`` with ``rho = P @ P^H``.  Reduced states of large pure states keep
    the factor, so their spectrum comes from whichever of ``P P^H`` and
    ``P^H P`` is smaller and the full matrix is only built on demand.
    """

    def __init__(self, matrix=None, dims=None, labels=None, *, factor=None, validate=True):
        if (matrix is None) == (factor is None):
            raise ValueError("pass exactly one of matrix or factor")
        if factor is not None:
            factor = np.asarray(factor, dtype=np.complex128)
            if factor.ndim == 1:
                factor = factor[:, None]
            size = factor.shape[0]
        else:
            matrix = linalg.as_matrix(matrix)
            size = matrix.shape[0]
        dims = (size,) if dims is None else tuple(int(d) for d in dims)
        if int(np.prod(dims)) != size:
            raise DimensionError(f"dims {dims} do not match dimension {size}")
        if labels is None:
            labels = tuple(chr(ord("A") + i) for i in range(len(dims)))
        labels = tuple(labels)
        if len(labels) != len(dims):
            raise DimensionError("one label per subsystem")
        self._matrix = matrix
        self._factor = factor
        self.dims = dims
        self.labels = labels
        if validate:
            self._validate()

    @classmethod
    def from_ket(cls, psi, dims=None, labels=None) -> "DensityMatrix":
        psi = np.asarray(psi, dtype=np.complex128).ravel()
        return cls(dims=dims, labels=labels, factor=psi)

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    @property
    def matrix(self) -> np.ndarray:
        if self._matrix is None:
            f = self._factor
            self._matrix = f @ f.conj().T
        return self._matrix

    @property
    def ket(self) -> Optional[np.ndarray]:
        if self._factor is not None and self._factor.shape[1] == 1:
            return self._factor[:, 0]
        return None

    def _validate(self):
        if self._factor is not None:
            tr = float(np.sum(np.abs(self._factor) ** 2))
        else:
            m = self._matrix
            if not linalg.is_hermitian(m, atol=VALID_ATOL):
                raise ContractViolation("density matrix is not Hermitian")
            tr = float(np.trace(m).real)
        if abs(tr - 1.0) > VALID_ATOL:
            raise ContractViolation(f"density matrix trace is {tr!r}, expected 1")
        if self._factor is None and np.min(self.spectrum()) < -VALID_ATOL:
            raise ContractViolation("density matrix has a negative eigenvalue")

    def spectrum(self) -> np.ndarray:
        """Eigenvalues, descending (zero-padded when computed from a thin factor)."""
        if self._factor is not None:
            f = self._factor
            if f.shape[1] <= f.shape[0]:
                small = f.conj().T @ f
                w = linalg.eigvalsh_batch(small[None])[0]
                return np.concatenate([w, np.zeros(f.shape[0] - f.shape[1])])
        return linalg.eigvalsh_batch(self.matrix[None])[0]

    def diagonal(self) -> np.ndarray:
        if self._factor is not None:
            return np.sum(np.abs(self._factor) ** 2, axis=1)
        return np.real(np.diag(self._matrix)).copy()

    def indices(self, cut: Cut) -> tuple[int, ...]:
        """Subsystem indices named by ``cut`` (labels, indices, or a label string)."""
        if isinstance(cut, str):
            cut = cut.split("|")[0]
            items = list(cut)
        else:
            items = list(cut)
        out = []
        for it in items:
            if isinstance(it, str):
                if it not in self.labels:
                    raise DimensionError(f"unknown subsystem label {it!r}")
                out.append(self.labels.index(it))
            else:
                out.append(int(it))
        return tuple(sorted(set(out)))

    def reduce(self, keep: Cut) -> "DensityMatrix":
        keep = self.indices(keep)
        if not keep:
            raise DimensionError("must keep at least one subsystem")
        dims = tuple(self.dims[k] for k in keep)
        labels = tuple(self.labels[k] for k in keep)
        if keep == tuple(range(len(self.dims))):
            return self
        if self._factor is not None:
            f = self._factor
            rest = [i for i in range(len(self.dims)) if i not in keep]
            t = f.reshape(self.dims + (f.shape[1],))
            t = np.transpose(t, list(keep) + rest + [len(self.dims)])
            dk = int(np.prod(dims))
            f2 = t.reshape(dk, -1)
            if f2.shape[1] < dk:
                return DensityMatrix(dims=dims, labels=labels, factor=f2, validate=False)
            return DensityMatrix(f2 @ f2.conj().T, dims, labels, validate=False)
        red = linalg.partial_trace(self.matrix, self.dims, keep)
        return DensityMatrix(red, dims, labels, validate=False)

    def bipartition(self, cut: Cut) -> tuple[tuple[int, ...], tuple[int, ...]]:
        a = self.indices(cut)
        b = tuple(i for i in range(len(self.dims)) if i not in a)
        if not a or not b:
            raise DimensionError(f"cut {cut!r} does not split the system into two nonempty parts")
        return a, b

    def is_pure(self, atol: float = PURE_ATOL) -> bool:
        if self.ket is not None:
            return True
        w = self.spectrum()
        return bool(abs(w[0] - 1.0) <= atol)

    def dephased(self) -> "DensityMatrix":
        return DensityMatrix(np.diag(self.diagonal()).astype(np.complex128), self.dims, self.labels, validate=False)


def _as_dm(rho) -> DensityMatrix:
    if isinstance(rho, DensityMatrix):
        return rho
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.ndim == 1:
        return DensityMatrix.from_ket(rho)
    return DensityMatrix(rho)


def shannon(p) -> float:
    p = np.clip(np.asarray(p, dtype=float), 0.0, 1.0)
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p))) if p.size else 0.0


def _spectral_entropy(w) -> float:
    w = np.asarray(w, dtype=float)
    if np.any(w < -EIG_FLOOR):
        raise ContractViolation(f"eigenvalue {w.min()!r} below -{EIG_FLOOR}")
    w = np.clip(w, 0.0, 1.0)
    w = w[w > 0]
    return float(-np.sum(w * np.log2(w))) if w.size else 0.0


def entropy(rho) -> float:
    """Von Neumann entropy in bits."""
    rho = _as_dm(rho)
    if rho.ket is not None:
        return 0.0
    return _spectral_entropy(rho.spectrum())


def mutual_information(rho_ab, cut: Cut) -> float:
    rho = _as_dm(rho_ab)
    a, b = rho.bipartition(cut)
    return entropy(rho.reduce(a)) + entropy(rho.reduce(b)) - entropy(rho)


def entanglement_pure(psi, cut: Cut, dims=None) -> float:
    """Entropy of entanglement of a pure bipartite state."""
    rho = psi if isinstance(psi, DensityMatrix) else DensityMatrix.from_ket(psi, dims)
    if not rho.is_pure():
        raise ContractViolation("entanglement_pure needs a pure state")
    a, b = rho.bipartition(cut)
    sa = entropy(rho.reduce(a))
    sb = entropy(rho.reduce(b))
    if abs(sa - sb) > 1e-9:
        raise NumericConsistencyError(f"S(rho_a)={sa!r} and S(rho_b)={sb!r} disagree for a pure state")
    return sa


def dephase(rho) -> DensityMatrix:
    return _as_dm(rho).dephased()


def rel_entropy_coherence(rho) -> float:
    """``S(rho^D) - S(rho)``."""
    rho = _as_dm(rho)
    return shannon(rho.diagonal()) - entropy(rho)


def _coherences(rho: DensityMatrix, cut: Cut):
    a, b = rho.bipartition(cut)
    ra, rb = rho.reduce(a), rho.reduce(b)
    return rel_entropy_coherence(rho), rel_entropy_coherence(ra), rel_entropy_coherence(rb), ra, rb


def correlated_coherence(rho_ab, cut: Cut) -> float:
    """``C(rho_ab) - C(rho_a) - C(rho_b)``, cross-checked against ``I(rho) - I(rho^D)``."""
    rho = _as_dm(rho_ab)
    a, b = rho.bipartition(cut)
    ra, rb = rho.reduce(a), rho.reduce(b)
    s_ab, s_a, s_b = entropy(rho), entropy(ra), entropy(rb)
    d_ab, d_a, d_b = shannon(rho.diagonal()), shannon(ra.diagonal()), shannon(rb.diagonal())
    cc = (d_ab - s_ab) - (d_a - s_a) - (d_b - s_b)
    via_info = (s_a + s_b - s_ab) - (d_a + d_b - d_ab)
    if abs(cc - via_info) > 1e-9:
        raise NumericConsistencyError(f"correlated coherence forms disagree: {cc!r} vs {via_info!r}")
    return cc


def _schmidt_partners(psi: np.ndarray, da: int, db: int, ea: np.ndarray, fallback: np.ndarray) -> np.ndarray:
    """b-side basis whose leading vectors are the relative states of ``ea``'s columns."""
    m = psi.reshape(da, db)
    cols = []
    for i in range(da):
        f = ea[:, i].conj() @ m
        nrm = np.linalg.norm(f)
        if nrm > 1e-7:
            cols.append(f / nrm)
    basis = np.array(cols).T if cols else np.zeros((db, 0), dtype=np.complex128)
    # complete with the remaining eigenvectors of rho_b, orthogonalized
    for j in range(fallback.shape[1]):
        if basis.shape[1] == db:
            break
        v = fallback[:, j] - basis @ (basis.conj().T @ fallback[:, j])
        nrm = np.linalg.norm(v)
        if nrm > 1e-6:
            basis = np.column_stack([basis, v / nrm])
    return basis


def local_eigenbases(rho_ab, cut: Cut) -> tuple[np.ndarray, np.ndarray]:
    """Rank-one eigenprojector bases of ``rho_a`` and ``rho_b`` used by ``mid``.

    For a pure state the b-basis is aligned with the Schmidt partners of the
    a-basis, which keeps the choice consistent inside degenerate eigenspaces.
    """
    rho = _as_dm(rho_ab)
    a, b = rho.bipartition(cut)
    ra, rb = rho.reduce(a), rho.reduce(b)
    ea = linalg.hermitian_eig(ra.matrix).eigenvectors
    fb = linalg.hermitian_eig(rb.matrix).eigenvectors
    if rho.is_pure():
        psi = rho.ket if rho.ket is not None else linalg.hermitian_eig(rho.matrix).eigenvectors[:, 0]
        perm = list(a) + list(b)
        psi = np.transpose(psi.reshape(rho.dims), perm).ravel()
        fb = _schmidt_partners(psi, ra.dim, rb.dim, ea, fb)
    return ea, fb


def mid(rho_ab, cut: Cut) -> float:
    """Measurement-induced disturbance ``I(rho) - I(Pi(rho))``.

    ``Pi`` measures both sides in the eigenbases of their marginals; the
    measured state is classical, so its mutual information is that of the
    joint outcome distribution.
    """
    rho = _as_dm(rho_ab)
    a, b = rho.bipartition(cut)
    ea, fb = local_eigenbases(rho, cut)
    da, db = ea.shape[0], fb.shape[0]
    perm = list(a) + list(b)
    n = len(rho.dims)
    if rho.ket is not None:
        psi = np.transpose(rho.ket.reshape(rho.dims), perm).reshape(da, db)
        amp = ea.conj().T @ psi @ fb.conj()
        p = np.abs(amp) ** 2
    else:
        t = rho.matrix.reshape(rho.dims + rho.dims)
        t = np.transpose(t, perm + [n + i for i in perm]).reshape(da * db, da * db)
        basis = np.kron(ea, fb)
        p = np.real(np.einsum("ki,kl,li->i", basis.conj(), t, basis)).reshape(da, db)
    p = np.clip(p, 0.0, None)
    p /= p.sum()
    classical_info = shannon(p.sum(axis=1)) + shannon(p.sum(axis=0)) - shannon(p.ravel())
    return mutual_information(rho, cut) - classical_info


@dataclass(frozen=True)
class MeasureReport:
    alpha: float
    I: float
    M: float
    C_whole: float
    C_part_a: float
    C_part_b: float
    C_c: float
    E: Optional[float] = None
    variance: Optional[float] = None


def measure_report(rho_ab, cut: Cut, alpha: float = math.nan, variance: Optional[float] = None) -> MeasureReport:
    rho = _as_dm(rho_ab)
    c_whole, c_a, c_b, _, _ = _coherences(rho, cut)
    e = entanglement_pure(rho, cut) if rho.is_pure() else None
    return MeasureReport(
        alpha=alpha,
        I=mutual_information(rho, cut),
        M=mid(rho, cut),
        C_whole=c_whole,
        C_part_a=c_a,
        C_part_b=c_b,
        C_c=correlated_coherence(rho, cut),
        E=e,
        variance=variance,
    )
