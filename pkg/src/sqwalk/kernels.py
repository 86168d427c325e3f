"""Hot numeric kernels: cyclic Jacobi diagonalization of Hermitian matrices.

Two interchangeable implementations are provided:

* ``jacobi_eigh_numba`` -- explicit loops compiled with ``numba.njit``.
* ``jacobi_eigh_numpy`` -- the same rotation sequence, vectorized over a
  batch axis with plain numpy.

``jacobi_eigh`` is bound to one of them at import time.  Set the environment
variable ``SQWALK_USE_NUMBA=0`` to force the numpy path; the numpy path is also
used when numba cannot be imported.

Both accept a stack of matrices with shape ``(batch, n, n)`` and return
``(eigenvalues, eigenvectors)`` with eigenvalues *unsorted* (in the order the
rotations leave them) and eigenvectors as columns.
"""

from __future__ import annotations

import math
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

__all__ = [
    "BACKEND",
    "HAVE_NUMBA",
    "jacobi_eigh",
    "jacobi_eigh_numba",
    "jacobi_eigh_numpy",
]

TOL = 1e-15
MAX_SWEEPS = 64

HAVE_NUMBA = numba is not None


def _use_numba_from_env() -> bool:
    flag = os.environ.get("SQWALK_USE_NUMBA", "1").strip().lower()
    return flag not in ("0", "false", "no", "off")


def jacobi_eigh_numpy(a, tol=TOL, max_sweeps=MAX_SWEEPS, vectors=True):
    """Batched cyclic Jacobi in pure numpy.

    Every matrix in the batch receives the same (p, q) pivot sequence, with its
    own rotation angle, so each rotation is a handful of vector operations over
    the batch axis.
    """
    a = np.array(a, dtype=np.complex128, copy=True)
    if a.ndim == 2:
        a = a[None]
    nb, n, _ = a.shape
    v = np.broadcast_to(np.eye(n, dtype=np.complex128), (nb, n, n)).copy() if vectors else None
    if n == 1:
        return a[:, :, 0].real.copy(), v

    scale = np.sqrt(np.sum(np.abs(a) ** 2, axis=(1, 2)))
    scale[scale == 0.0] = 1.0
    iu = np.triu_indices(n, 1)

    for _ in range(max_sweeps):
        off = np.sqrt(2.0 * np.sum(np.abs(a[:, iu[0], iu[1]]) ** 2, axis=1))
        if np.all(off <= tol * scale):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[:, p, q]
                r = np.abs(apq)
                active = r > 1e-300
                if not active.any():
                    continue
                rs = np.where(active, r, 1.0)
                e = np.where(active, apq / rs, 1.0)
                theta = (a[:, q, q].real - a[:, p, p].real) / (2.0 * rs)
                t = np.where(theta >= 0.0, 1.0, -1.0) / (np.abs(theta) + np.hypot(theta, 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                c = np.where(active, c, 1.0)
                s = np.where(active, s, 0.0)
                ec = np.conj(e)
                jpp = c[:, None]
                jpq = s[:, None]
                jqp = (-s * ec)[:, None]
                jqq = (c * ec)[:, None]

                colp = a[:, :, p].copy()
                colq = a[:, :, q]
                a[:, :, p] = colp * jpp + colq * jqp
                a[:, :, q] = colp * jpq + colq * jqq
                rowp = a[:, p, :].copy()
                rowq = a[:, q, :]
                a[:, p, :] = np.conj(jpp) * rowp + np.conj(jqp) * rowq
                a[:, q, :] = np.conj(jpq) * rowp + np.conj(jqq) * rowq
                a[:, p, q] = 0.0
                a[:, q, p] = 0.0
                a[:, p, p] = a[:, p, p].real
                a[:, q, q] = a[:, q, q].real
                if vectors:
                    vp = v[:, :, p].copy()
                    vq = v[:, :, q]
                    v[:, :, p] = vp * jpp + vq * jqp
                    v[:, :, q] = vp * jpq + vq * jqq

    w = np.real(np.diagonal(a, axis1=1, axis2=2)).copy()
    return w, v


if HAVE_NUMBA:

    @numba.njit(cache=True)
    def _jacobi_single(a, v, tol, max_sweeps, vectors):
        n = a.shape[0]
        scale = 0.0
        for i in range(n):
            for j in range(n):
                scale += abs(a[i, j]) ** 2
        scale = math.sqrt(scale)
        if scale == 0.0:
            scale = 1.0
        for _ in range(max_sweeps):
            off = 0.0
            for p in range(n - 1):
                for q in range(p + 1, n):
                    off += abs(a[p, q]) ** 2
            if math.sqrt(2.0 * off) <= tol * scale:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = a[p, q]
                    r = abs(apq)
                    if r <= 1e-300:
                        continue
                    ec = (apq / r).conjugate()
                    theta = (a[q, q].real - a[p, p].real) / (2.0 * r)
                    sgn = 1.0 if theta >= 0.0 else -1.0
                    t = sgn / (abs(theta) + math.hypot(theta, 1.0))
                    c = 1.0 / math.sqrt(t * t + 1.0)
                    s = t * c
                    jpp = c + 0j
                    jpq = s + 0j
                    jqp = -s * ec
                    jqq = c * ec
                    for i in range(n):
                        aip = a[i, p]
                        aiq = a[i, q]
                        a[i, p] = aip * jpp + aiq * jqp
                        a[i, q] = aip * jpq + aiq * jqq
                    for j in range(n):
                        apj = a[p, j]
                        aqj = a[q, j]
                        a[p, j] = jpp.conjugate() * apj + jqp.conjugate() * aqj
                        a[q, j] = jpq.conjugate() * apj + jqq.conjugate() * aqj
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    a[p, p] = a[p, p].real
                    a[q, q] = a[q, q].real
                    if vectors:
                        for i in range(n):
                            vip = v[i, p]
                            viq = v[i, q]
                            v[i, p] = vip * jpp + viq * jqp
                            v[i, q] = vip * jpq + viq * jqq

    @numba.njit(cache=True)
    def _jacobi_batch(a, tol, max_sweeps, vectors):
        nb, n, _ = a.shape
        w = np.empty((nb, n))
        v = np.zeros((nb, n, n), dtype=np.complex128)
        for k in range(nb):
            for i in range(n):
                v[k, i, i] = 1.0
            _jacobi_single(a[k], v[k], tol, max_sweeps, vectors)
            for i in range(n):
                w[k, i] = a[k, i, i].real
        return w, v


def jacobi_eigh_numba(a, tol=TOL, max_sweeps=MAX_SWEEPS, vectors=True):
    """Batched cyclic Jacobi compiled with numba (same contract as the numpy path)."""
    if not HAVE_NUMBA:
        raise RuntimeError("numba is not available")
    a = np.array(a, dtype=np.complex128, copy=True)
    if a.ndim == 2:
        a = a[None]
    a = np.ascontiguousarray(a)
    w, v = _jacobi_batch(a, float(tol), int(max_sweeps), bool(vectors))
    return w, (v if vectors else None)


USE_NUMBA = HAVE_NUMBA and _use_numba_from_env()
BACKEND = "numba" if USE_NUMBA else "numpy"
jacobi_eigh = jacobi_eigh_numba if USE_NUMBA else jacobi_eigh_numpy
