"""Bounds on the assisted distillation of coherence.

For a bipartite state ``rho_ab`` with a qubit on Alice's side ``a``:

* pure states: the gain is exactly ``S(rho_b)``;
* upper bound: ``C_r^{a|b}(rho_ab) - C(rho_b)``, the quantum-incoherent
  relative entropy minus Bob's own coherence;
* lower bound: the best outcome-averaged coherence Bob is left with after
  a projective measurement of ``a``, minus ``C(rho_b)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import linalg
from .errors import ContractViolation, UnsupportedDimension
from .measures import Cut, DensityMatrix, _as_dm, entropy, rel_entropy_coherence

P_FLOOR = 1e-12


@dataclass(frozen=True)
class GridSpec:
    """Coarse grid step (degrees) plus rounds of local refinement."""

    step_deg: float = 5.0
    refine_rounds: int = 2
    refine_factor: int = 10


@dataclass(frozen=True)
class BoundsReport:
    alpha: float
    upper: float
    lower: float
    exact_pure: Optional[float] = None
    argmax_measurement: tuple[float, float] = (math.nan, math.nan)


def _ordered_ab(rho: DensityMatrix, cut: Cut):
    """Matrix of ``rho`` permuted to (a, b) order, with the two dimensions."""
    a, b = rho.bipartition(cut)
    da = int(np.prod([rho.dims[i] for i in a]))
    db = int(np.prod([rho.dims[i] for i in b]))
    perm = list(a) + list(b)
    n = len(rho.dims)
    if perm == list(range(n)):
        return rho.matrix, da, db, b
    t = rho.matrix.reshape(rho.dims + rho.dims)
    t = np.transpose(t, perm + [n + i for i in perm])
    return t.reshape(da * db, da * db), da, db, b


def delta_cd_pure(psi_ab, cut: Cut) -> float:
    rho = _as_dm(psi_ab)
    if not rho.is_pure():
        raise ContractViolation("delta_cd_pure needs a pure state")
    _, b = rho.bipartition(cut)
    return entropy(rho.reduce(b))


def dephase_b(rho_ab, cut: Cut) -> np.ndarray:
    """``Delta_b(rho)`` in (a, b) order: coherences between distinct b labels removed."""
    rho = _as_dm(rho_ab)
    m, da, db, _ = _ordered_ab(rho, cut)
    t = m.reshape(da, db, da, db)
    mask = np.eye(db, dtype=bool)[None, :, None, :]
    return np.where(mask, t, 0.0).reshape(da * db, da * db)


def qi_relative_entropy(rho_ab, cut: Cut) -> float:
    """``S[Delta_b(rho_ab)] - S(rho_ab)``; ``b`` is the complement of ``cut``."""
    rho = _as_dm(rho_ab)
    m, da, db, _ = _ordered_ab(rho, cut)
    t = m.reshape(da, db, da, db)
    # Delta_b(rho) is block diagonal: one da x da block per b label
    blocks = np.einsum("ijkj->jik", t)
    w = linalg.eigvalsh_batch(blocks).ravel()
    w = np.clip(w, 0.0, None)
    w = w[w > 0]
    s_dephased = float(-np.sum(w * np.log2(w)))
    return s_dephased - entropy(rho)


def upper_bound_delta(rho_ab, cut: Cut) -> float:
    rho = _as_dm(rho_ab)
    _, b = rho.bipartition(cut)
    return qi_relative_entropy(rho, cut) - rel_entropy_coherence(rho.reduce(b))


def measurement_basis(theta: float, phi: float) -> np.ndarray:
    """Columns ``cos t|0> + e^{i p} sin t|1>`` and ``e^{-i p} sin t|0> - cos t|1>``."""
    c, s = math.cos(theta), math.sin(theta)
    e = complex(math.cos(phi), math.sin(phi))
    return np.array([[c, e.conjugate() * s], [e * s, -c]], dtype=np.complex128)


def measure_subsystem_a(rho_ab, theta: float, phi: float, cut: Cut = (0,)):
    """Outcomes ``[(p_i, rho_b^i)]`` of measuring ``a`` in the basis at ``(theta, phi)``."""
    rho = _as_dm(rho_ab)
    m, da, db, b = _ordered_ab(rho, cut)
    if da != 2:
        raise UnsupportedDimension(f"subsystem a must be a qubit, got dimension {da}")
    blocks = m.reshape(2, db, 2, db).transpose(0, 2, 1, 3)
    basis = measurement_basis(theta, phi)
    dims = tuple(rho.dims[i] for i in b)
    labels = tuple(rho.labels[i] for i in b)
    out = []
    for i in range(2):
        v = basis[:, i]
        sigma = np.einsum("x,y,xyij->ij", v.conj(), v, blocks)
        p = float(np.trace(sigma).real)
        if p < P_FLOOR:
            cond = np.diag(np.full(db, 1.0 / db)).astype(np.complex128)
        else:
            cond = sigma / p
        out.append((p, DensityMatrix(cond, dims, labels, validate=False)))
    return out


def _blocks(rho_ab, cut: Cut) -> np.ndarray:
    rho = _as_dm(rho_ab)
    m, da, db, _ = _ordered_ab(rho, cut)
    if da != 2:
        raise UnsupportedDimension(f"subsystem a must be a qubit, got dimension {da}")
    return m.reshape(2, db, 2, db).transpose(0, 2, 1, 3)


def _xlogx_sum(p: np.ndarray, axis: int) -> np.ndarray:
    p = np.clip(p, 0.0, None)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0, p * np.log2(np.where(p > 0, p, 1.0)), 0.0)
    return -np.sum(terms, axis=axis)


def averaged_coherence(blocks: np.ndarray, thetas, phis) -> np.ndarray:
    """Outcome-averaged coherence ``sum_i p_i C(rho_b^i)`` for each ``(theta, phi)`` pair."""
    thetas = np.asarray(thetas, dtype=float).ravel()
    phis = np.asarray(phis, dtype=float).ravel()
    c, s = np.cos(thetas), np.sin(thetas)
    e = np.exp(1j * phis)
    # measurement vectors, shape (G, 2 outcomes, 2 components)
    vecs = np.stack(
        [np.stack([c + 0j, e * s], axis=-1), np.stack([np.conj(e) * s, -c + 0j], axis=-1)],
        axis=1,
    )
    sigma = np.einsum("gox,goy,xyij->goij", vecs.conj(), vecs, blocks)
    g, _, db, _ = sigma.shape
    sigma = sigma.reshape(g * 2, db, db)
    p = np.real(np.trace(sigma, axis1=1, axis2=2))
    ok = p >= P_FLOOR
    safe = np.where(ok, p, 1.0)
    cond = sigma / safe[:, None, None]
    diag = np.real(np.diagonal(cond, axis1=1, axis2=2))
    w = linalg.eigvalsh_batch(cond)
    coh = _xlogx_sum(diag, axis=1) - _xlogx_sum(w, axis=1)
    total = np.where(ok, p * coh, 0.0).reshape(g, 2).sum(axis=1)
    return total


def _grid(lo, hi, step):
    n = int(round((hi - lo) / step))
    return lo + step * np.arange(n + 1)


def maximize_averaged_coherence(rho_ab, cut: Cut = (0,), grid: GridSpec = GridSpec()):
    """Coarse grid over theta in [0, pi], phi in [0, 2 pi], then local refinement.

    Returns ``(C_l, (theta, phi))``.
    """
    blocks = _blocks(rho_ab, cut)
    step = math.radians(grid.step_deg)
    th = _grid(0.0, math.pi, step)
    ph = _grid(0.0, 2 * math.pi, step)
    tt, pp = np.meshgrid(th, ph, indexing="ij")
    vals = averaged_coherence(blocks, tt, pp)
    k = int(np.argmax(vals))
    best = (float(vals[k]), float(tt.ravel()[k]), float(pp.ravel()[k]))
    for _ in range(grid.refine_rounds):
        fine = step / grid.refine_factor
        th = np.clip(best[1] + fine * np.arange(-grid.refine_factor, grid.refine_factor + 1), 0.0, math.pi)
        ph = best[2] + fine * np.arange(-grid.refine_factor, grid.refine_factor + 1)
        tt, pp = np.meshgrid(th, ph, indexing="ij")
        vals = averaged_coherence(blocks, tt, pp)
        k = int(np.argmax(vals))
        if vals[k] > best[0]:
            best = (float(vals[k]), float(tt.ravel()[k]), float(pp.ravel()[k] % (2 * math.pi)))
        step = fine
    return best[0], (best[1], best[2])


def lower_bound_delta(rho_ab, cut: Cut = (0,), grid: GridSpec = GridSpec()):
    """``C_l(rho_b) - C(rho_b)`` and the measurement setting attaining ``C_l``."""
    rho = _as_dm(rho_ab)
    _, b = rho.bipartition(cut)
    c_l, arg = maximize_averaged_coherence(rho, cut, grid)
    return c_l - rel_entropy_coherence(rho.reduce(b)), arg


def bounds_report(rho_ab, cut: Cut = (0,), alpha: float = math.nan, grid: GridSpec = GridSpec()) -> BoundsReport:
    rho = _as_dm(rho_ab)
    lower, arg = lower_bound_delta(rho, cut, grid)
    exact = delta_cd_pure(rho, cut) if rho.ket is not None else None
    return BoundsReport(alpha, upper_bound_delta(rho, cut), lower, exact, arg)
