"""Bipartite density matrices and the quantities defined on them.

Composite indices are subsystem-1-major: basis state ``(a, b)`` with
``a < d1`` and ``b < d2`` sits at row ``a * d2 + b``.  The same ordering is
used by the QDM text format read and written here.
"""
from __future__ import annotations

import io
import os
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import (
    DimensionError,
    NotHermitianError,
    NotPositiveError,
    NumericalConsistencyError,
    QdmParseError,
    StateDimensionError,
    TraceError,
)

TRACE_TOL = 1e-12
CLAMP_TOL = 1e-10


@dataclass(frozen=True)
class Bipartition:
    d1: int
    d2: int

    def __post_init__(self):
        for name in ("d1", "d2"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or value < 2:
                raise DimensionError(f"{name} must be an integer >= 2, got {value!r}")
        object.__setattr__(self, "d1", int(self.d1))
        object.__setattr__(self, "d2", int(self.d2))

    @property
    def d(self) -> int:
        return self.d1 * self.d2

    @property
    def d_min(self) -> int:
        return min(self.d1, self.d2)

    @property
    def d_max(self) -> int:
        return max(self.d1, self.d2)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated state; build it with :func:`validate`."""

    mat: np.ndarray
    part: Bipartition
    psd_tol: float = 1e-10

    @property
    def d(self) -> int:
        return self.part.d


def validate(mat, part: Bipartition, psd_tol: float = 1e-10, *, check_spectrum: bool = True) -> DensityMatrix:
    """Check Hermiticity, unit trace and positivity, and freeze the matrix.

    ``check_spectrum=False`` skips the eigenvalue test; it is meant for
    states that are positive by construction (``G G^H / Tr``), where a full
    diagonalisation of a large matrix would dominate the cost.

    Raises
    ------
    StateDimensionError, NotHermitianError, TraceError, NotPositiveError
    """
    m = linalg.as_matrix(mat)
    if m.shape[0] != m.shape[1]:
        raise StateDimensionError(f"density matrix must be square, got {m.shape}")
    if m.shape[0] != part.d:
        raise StateDimensionError(
            f"matrix dimension {m.shape[0]} does not match bipartition {part.d1}x{part.d2}"
        )
    defect = linalg.hermiticity_defect(m)
    if defect > psd_tol:
        raise NotHermitianError(f"max|rho - rho^H| = {defect:.3e} > {psd_tol:.1e}")
    m = 0.5 * (m + m.conj().T)
    tr = np.trace(m).real
    if abs(tr - 1.0) > TRACE_TOL:
        raise TraceError(f"trace {tr!r} differs from 1 by more than {TRACE_TOL:.0e}")
    if check_spectrum:
        lam_min = linalg.hermitian_eigvals(m, method="auto")[0]
        if lam_min < -psd_tol:
            raise NotPositiveError(f"minimum eigenvalue {lam_min:.3e} < -{psd_tol:.1e}")
    m.setflags(write=False)
    return DensityMatrix(m, part, psd_tol)


def purity(rho: DensityMatrix) -> float:
    """``Tr rho^2`` from the Hilbert-Schmidt norm, clamped to ``[1/d, 1]``."""
    p = float(np.sum(np.abs(rho.mat) ** 2))
    lo, hi = 1.0 / rho.d, 1.0
    if p < lo - 1e-9 or p > hi + 1e-9:
        raise NumericalConsistencyError(f"purity {p!r} outside [{lo}, 1]")
    return min(max(p, lo), hi)


def linear_entropy(rho: DensityMatrix) -> float:
    d = rho.d
    return d / (d - 1) * (1.0 - purity(rho))


def partial_transpose_1(rho: DensityMatrix) -> np.ndarray:
    """Transpose the subsystem-1 indices: ``out[(a,b),(a',b')] = rho[(a',b),(a,b')]``."""
    return partial_transpose(rho.mat, rho.part)


def partial_transpose(mat: np.ndarray, part: Bipartition) -> np.ndarray:
    d1, d2 = part.d1, part.d2
    t = np.asarray(mat).reshape(d1, d2, d1, d2).transpose(2, 1, 0, 3)
    return np.ascontiguousarray(t.reshape(d1 * d2, d1 * d2))


def partial_trace(rho: DensityMatrix, keep: int) -> np.ndarray:
    """Reduced matrix of subsystem ``keep`` (1 or 2)."""
    d1, d2 = rho.part.d1, rho.part.d2
    t = rho.mat.reshape(d1, d2, d1, d2)
    if keep == 1:
        return np.trace(t, axis1=1, axis2=3)
    if keep == 2:
        return np.trace(t, axis1=0, axis2=2)
    raise ValueError(f"keep must be 1 or 2, got {keep!r}")


def negativity(rho: DensityMatrix, *, method: str = "auto") -> float:
    """``(||rho^T1||_1 - 1) / (d_min - 1)``.

    Rounding excursions within ``1e-10`` outside ``[0, 1]`` are clamped;
    anything larger raises :class:`NumericalConsistencyError`.
    """
    tn = linalg.trace_norm_hermitian(partial_transpose_1(rho), method=method)
    n = (tn - 1.0) / (rho.part.d_min - 1)
    if n < -CLAMP_TOL or n > 1.0 + CLAMP_TOL:
        raise NumericalConsistencyError(f"negativity {n!r} outside [0, 1]")
    return min(max(n, 0.0), 1.0)


def pt_negative_count(rho: DensityMatrix, tol: float = 1e-12) -> int:
    """Number of eigenvalues of the partial transpose below ``-tol``."""
    w = linalg.hermitian_eigvals(partial_transpose_1(rho), method="auto")
    return int(np.sum(w < -tol))


def pure(psi, part: Bipartition) -> DensityMatrix:
    """Projector onto the normalised ket ``psi``."""
    v = np.asarray(psi, dtype=np.complex128).ravel()
    v = v / np.linalg.norm(v)
    return validate(np.outer(v, v.conj()), part)


def maximally_mixed(part: Bipartition) -> DensityMatrix:
    return validate(np.eye(part.d) / part.d, part)


def bell_state(d: int = 2) -> DensityMatrix:
    """Maximally entangled ``sum_i |ii> / sqrt(d)`` on ``d x d``."""
    psi = np.zeros(d * d, dtype=np.complex128)
    psi[np.arange(d) * (d + 1)] = 1.0
    return pure(psi, Bipartition(d, d))


def werner_state(p: float) -> DensityMatrix:
    """Two-qubit ``p |Phi+><Phi+| + (1 - p) I/4``."""
    phi = bell_state(2).mat
    return validate(p * phi + (1.0 - p) * np.eye(4) / 4.0, Bipartition(2, 2))


# --- QDM v1 text format -----------------------------------------------------

def parse_qdm(text: str) -> tuple[np.ndarray, Bipartition]:
    """Parse QDM v1: ``qdm 1 <d1> <d2>`` then ``d*d`` lines of ``<re> <im>``."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise QdmParseError("empty QDM input")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "qdm" or head[1] != "1":
        raise QdmParseError(f"bad QDM header: {lines[0]!r}")
    try:
        d1, d2 = int(head[2]), int(head[3])
    except ValueError as exc:
        raise QdmParseError(f"bad dimensions in header: {lines[0]!r}") from exc
    if d1 < 1 or d2 < 1:
        raise QdmParseError(f"dimensions must be positive: {lines[0]!r}")
    d = d1 * d2
    body = lines[1:]
    if len(body) != d * d:
        raise QdmParseError(f"expected {d * d} entry lines, found {len(body)}")
    data = np.empty(d * d, dtype=np.complex128)
    for i, ln in enumerate(body):
        parts = ln.split()
        if len(parts) != 2:
            raise QdmParseError(f"line {i + 2}: expected '<re> <im>', got {ln!r}")
        try:
            re, im = float(parts[0]), float(parts[1])
        except ValueError as exc:
            raise QdmParseError(f"line {i + 2}: not a number: {ln!r}") from exc
        if not (np.isfinite(re) and np.isfinite(im)):
            raise QdmParseError(f"line {i + 2}: non-finite entry")
        data[i] = complex(re, im)
    # a syntactically valid file with d1 or d2 < 2 is a validation failure
    return data.reshape(d, d), Bipartition(d1, d2)


def read_qdm(path: str | os.PathLike) -> tuple[np.ndarray, Bipartition]:
    with open(path, encoding="ascii") as fh:
        return parse_qdm(fh.read())


def format_qdm(mat, part: Bipartition) -> str:
    m = linalg.as_matrix(mat)
    out = io.StringIO()
    out.write(f"qdm 1 {part.d1} {part.d2}\n")
    for z in m.ravel():
        out.write(f"{float(z.real)!r} {float(z.imag)!r}\n")
    return out.getvalue()


def write_qdm(path: str | os.PathLike, mat, part: Bipartition) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(format_qdm(mat, part))
