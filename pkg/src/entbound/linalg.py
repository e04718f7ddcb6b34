"""Dense complex matrix kernel.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``.  The
Hermitian eigensolver is a cyclic Jacobi method whose rotations are applied
in round-robin (tournament) order, so each round rotates ``n/2`` disjoint
index pairs at once with vectorised numpy updates.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, DimensionError, NotHermitianError

#: Above this size ``method="auto"`` hands spectra to LAPACK.
JACOBI_MAX_DIM = 64


def as_matrix(a) -> np.ndarray:
    """Coerce ``a`` to a finite 2-D complex128 array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or 0 in m.shape:
        raise DimensionError(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix contains NaN or Inf entries")
    return m


def matmul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def kron(a, b) -> np.ndarray:
    """Tensor product with ``out[i*rb + k, j*cb + l] = a[i, j] * b[k, l]``."""
    return np.kron(as_matrix(a), as_matrix(b))


def dagger(a) -> np.ndarray:
    return as_matrix(a).conj().T


def hs_norm(a) -> float:
    """Hilbert-Schmidt (Frobenius) norm."""
    return float(np.linalg.norm(as_matrix(a), "fro"))


def hermiticity_defect(a: np.ndarray) -> float:
    return float(np.max(np.abs(a - a.conj().T)))


@dataclass(frozen=True)
class EigenDecomposition:
    """Ascending real eigenvalues and matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


@lru_cache(maxsize=None)
def _round_robin(n: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    # circle method; an odd n gets a dummy player n whose pairs are dropped
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for i in range(m // 2):
            p, q = players[i], players[m - 1 - i]
            if p < n and q < n:
                ps.append(min(p, q))
                qs.append(max(p, q))
        rounds.append((np.array(ps, dtype=np.intp), np.array(qs, dtype=np.intp)))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def _off_norm(a: np.ndarray) -> float:
    # direct sum; total - diagonal cancels catastrophically near convergence
    off = a.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.linalg.norm(off, "fro"))


def _jacobi(a: np.ndarray, tol: float, max_sweeps: int) -> tuple[np.ndarray, np.ndarray]:
    n = a.shape[0]
    a = 0.5 * (a + a.conj().T)
    v = np.eye(n, dtype=np.complex128)
    scale = np.linalg.norm(a, "fro")
    if n == 1 or scale == 0.0:
        return np.real(np.diagonal(a)).copy(), v
    target = tol * scale
    tiny = np.finfo(float).tiny / np.finfo(float).eps
    rounds = _round_robin(n)

    off = _off_norm(a)
    for _ in range(max_sweeps):
        if off <= target:
            break
        for p, q in rounds:
            apq = a[p, q]
            mag = np.abs(apq)
            active = mag > tiny
            if not np.any(active):
                continue
            p, q, apq, mag = p[active], q[active], apq[active], mag[active]
            phase = apq / mag  # e^{i phi}
            theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
            t = np.where(theta >= 0.0, 1.0, -1.0) / (np.abs(theta) + np.hypot(theta, 1.0))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            # U = diag(1, e^{-i phi}) @ [[c, s], [-s, c]] on each (p, q) block
            u_qp = -s * phase.conj()
            u_qq = c * phase.conj()

            cp, cq = a[:, p], a[:, q]
            a[:, p] = cp * c + cq * u_qp
            a[:, q] = cp * s + cq * u_qq
            rp, rq = a[p, :], a[q, :]
            a[p, :] = c[:, None] * rp + u_qp.conj()[:, None] * rq
            a[q, :] = s[:, None] * rp + u_qq.conj()[:, None] * rq
            a[p, q] = 0.0
            a[q, p] = 0.0

            vp, vq = v[:, p], v[:, q]
            v[:, p] = vp * c + vq * u_qp
            v[:, q] = vp * s + vq * u_qq
        off = _off_norm(a)
    else:
        if off > target:
            raise ConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps "
                f"(off-diagonal norm {off:.3e} > {target:.3e})",
                residual=off,
            )
    return np.real(np.diagonal(a)).copy(), v


def hermitian_eigen(
    a,
    tol: float = 1e-12,
    *,
    herm_tol: float = 1e-10,
    max_sweeps: int = 30,
    method: str = "jacobi",
) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix.

    Parameters
    ----------
    a : array_like
        Square Hermitian matrix.
    tol : float
        Stop once the off-diagonal Frobenius mass is below ``tol * ||a||_F``.
    herm_tol : float
        Accept ``a`` if ``max|a - a^H| <= herm_tol * max|a|``.
    max_sweeps : int
        Sweep budget for the Jacobi iteration.
    method : {"jacobi", "lapack", "auto"}
        ``"auto"`` uses Jacobi up to ``JACOBI_MAX_DIM`` and LAPACK beyond.

    Raises
    ------
    NotHermitianError, ConvergenceError, DimensionError
    """
    a = as_matrix(a)
    n, m = a.shape
    if n != m:
        raise DimensionError(f"eigenproblem needs a square matrix, got {a.shape}")
    amax = float(np.max(np.abs(a)))
    defect = hermiticity_defect(a)
    if defect > herm_tol * amax:
        raise NotHermitianError(f"max|A - A^H| = {defect:.3e} exceeds {herm_tol:.1e} * {amax:.3e}")

    if method == "auto":
        method = "jacobi" if n <= JACOBI_MAX_DIM else "lapack"
    if method == "jacobi":
        w, v = _jacobi(a, tol, max_sweeps)
    elif method == "lapack":
        w, v = np.linalg.eigh(0.5 * (a + a.conj().T))
    else:
        raise ValueError(f"unknown eigensolver method {method!r}")

    order = np.argsort(w, kind="stable")
    return EigenDecomposition(w[order], v[:, order])


def hermitian_eigvals(a, tol: float = 1e-12, *, herm_tol: float = 1e-10, method: str = "auto") -> np.ndarray:
    """Ascending eigenvalues only; LAPACK's eigenvalue-only driver for large inputs."""
    a = as_matrix(a)
    if method == "auto":
        method = "jacobi" if a.shape[0] <= JACOBI_MAX_DIM else "lapack"
    if method == "lapack":
        if a.shape[0] != a.shape[1]:
            raise DimensionError(f"eigenproblem needs a square matrix, got {a.shape}")
        amax = float(np.max(np.abs(a)))
        if hermiticity_defect(a) > herm_tol * amax:
            raise NotHermitianError("matrix is not Hermitian within tolerance")
        return np.linalg.eigvalsh(0.5 * (a + a.conj().T))
    return hermitian_eigen(a, tol, herm_tol=herm_tol, method=method).eigenvalues


def trace_norm_hermitian(a, *, method: str = "auto") -> float:
    """Trace norm ``Tr sqrt(A A^H)``, i.e. the sum of absolute eigenvalues."""
    return float(np.sum(np.abs(hermitian_eigvals(a, method=method))))
