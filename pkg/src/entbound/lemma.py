"""Numerical check of the alpha/beta continuation inequality.

Given ``rho = sum_i p_i |psi_i><psi_i|`` and the heaviest component
``sigma_R``, the family ``tau(x) = (1 - x) sigma_R + x rho`` joins the
reference state (``x = 0``) to ``rho`` (``x = 1``).  Eigenvalues of
``tau(x)^T1`` that start at zero form the beta class and the remaining ones
the alpha class.  With ``A`` and ``B`` the sums of squares of the two
classes, the inequality under test is ``1 - A - B >= d * B``.

Eigenvalue crossings make value-only path matching unreliable, so the beta
class is carried as a subspace: at each step every cluster of (numerically)
degenerate eigenvalues inherits as many beta members as the rank of its
overlap with the previous beta subspace.  When an overlap is not close to
an integer the step is bisected.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import DomainError, PathMatchingError
from .states import DensityMatrix, partial_transpose


@dataclass(frozen=True)
class AlphaBetaSplit:
    a_sum: float
    b_sum: float
    alpha_values: np.ndarray
    beta_values: np.ndarray
    x_path: np.ndarray
    a_path: np.ndarray
    b_path: np.ndarray


@dataclass(frozen=True)
class LemmaCheck:
    split: AlphaBetaSplit
    holds: bool
    delta: float
    n_alpha: int
    n_beta: int
    min_margin: float
    refinements: int

    @property
    def l_value(self) -> float:
        """``(1 - A - B) / d - B`` at ``x = 1``."""
        d = self.n_alpha + self.n_beta
        return (1.0 - self.split.a_sum - self.split.b_sum) / d - self.split.b_sum


def _check_decomposition(rho: DensityMatrix, decomposition, tol: float):
    if not decomposition:
        raise DomainError("empty pure-state decomposition")
    weights = np.array([float(w) for w, _ in decomposition])
    kets = [np.asarray(v, dtype=np.complex128).ravel() for _, v in decomposition]
    if np.any(weights < -tol) or abs(weights.sum() - 1.0) > tol:
        raise DomainError("decomposition weights are not a probability vector")
    acc = np.zeros_like(rho.mat)
    for w, v in zip(weights, kets):
        if v.shape != (rho.d,) or abs(np.linalg.norm(v) - 1.0) > tol:
            raise DomainError("decomposition vectors must be unit kets of dimension d")
        acc += w * np.outer(v, v.conj())
    err = float(np.max(np.abs(acc - rho.mat)))
    if err > tol:
        raise DomainError(f"decomposition misses rho by {err:.3e}")
    return weights, kets


def _clusters(values: np.ndarray, tol: float) -> list[np.ndarray]:
    breaks = np.flatnonzero(np.diff(values) > tol) + 1
    return np.split(np.arange(values.size), breaks)


def _carry_beta(vals, vecs, q_beta, cluster_tol, ambiguity):
    """New beta basis and flags, or ``None`` if the assignment is unclear."""
    n_prev = q_beta.shape[1]
    flags = np.zeros(vals.size, dtype=bool)
    blocks = []
    for idx in _clusters(vals, cluster_tol):
        c = vecs[:, idx]
        m = c.conj().T @ q_beta
        s = float(np.sum(np.abs(m) ** 2))
        n = int(round(s))
        if abs(s - n) > ambiguity:
            return None
        if n == 0:
            continue
        if n == idx.size:
            flags[idx] = True
            blocks.append(c)
            continue
        u, _, _ = np.linalg.svd(m)
        blocks.append(c @ u[:, :n])
        weights = np.sum(np.abs(m) ** 2, axis=1)
        flags[idx[np.argsort(weights)[::-1][:n]]] = True
    if int(flags.sum()) != n_prev:
        return None
    q_new = np.hstack(blocks) if blocks else np.zeros((vals.size, 0), dtype=np.complex128)
    return q_new, flags


def lemma1_verify(
    rho: DensityMatrix,
    decomposition,
    steps: int = 200,
    *,
    zero_tol: float = 1e-9,
    cluster_tol: float = 1e-9,
    ambiguity: float = 0.1,
    max_refine: int = 10,
    tol: float = 1e-9,
) -> LemmaCheck:
    """Track the alpha/beta split along ``tau(x)`` and test the inequality.

    Parameters
    ----------
    rho : DensityMatrix
    decomposition : sequence of (weight, ket)
        Pure-state ensemble for ``rho``; the first heaviest entry is the
        reference.
    steps : int
        Points of the uniform grid on ``[0, 1]``.
    zero_tol : float
        Eigenvalues of the reference partial transpose at most this large
        in modulus seed the beta class.
    max_refine : int
        Bisection depth allowed per grid interval before giving up.

    Raises
    ------
    DomainError
        Bad decomposition or grid.
    PathMatchingError
        The beta subspace could not be followed through some interval.
    """
    if steps < 2:
        raise DomainError("need at least two grid points")
    weights, kets = _check_decomposition(rho, decomposition, 1e-10)
    d = rho.d
    ref = int(np.argmax(weights))
    psi = kets[ref]
    pt_ref = partial_transpose(np.outer(psi, psi.conj()), rho.part)
    pt_rho = partial_transpose(rho.mat, rho.part)

    def spectrum(x):
        e = linalg.hermitian_eigen((1.0 - x) * pt_ref + x * pt_rho)
        return e.eigenvalues, e.eigenvectors

    grid = np.linspace(0.0, 1.0, steps)
    # weight of the reference stays maximal while q_R(x) >= q_i(x)
    others = np.delete(weights, ref)
    q_ref = 1.0 - grid + grid * weights[ref]
    q_max_other = grid * (others.max() if others.size else 0.0)
    ok = q_ref >= q_max_other - 1e-15
    first_bad = int(np.argmin(ok)) if not ok.all() else steps
    delta = float(grid[max(first_bad - 1, 0)])

    vals0, vecs0 = spectrum(0.0)
    flags0 = np.abs(vals0) <= zero_tol
    q_beta = vecs0[:, flags0]
    n_beta = int(flags0.sum())

    xs, a_path, b_path = [0.0], [], []
    last = {"vals": vals0, "flags": flags0}

    def record(vals, flags):
        a_path.append(float(np.sum(vals[~flags] ** 2)))
        b_path.append(float(np.sum(vals[flags] ** 2)))

    record(vals0, flags0)
    refinements = 0

    def advance(x0, q0, x1, depth):
        nonlocal refinements
        vals, vecs = spectrum(x1)
        carried = _carry_beta(vals, vecs, q0, cluster_tol, ambiguity)
        if carried is None:
            if depth >= max_refine:
                raise PathMatchingError(
                    f"beta subspace ambiguous on [{x0:.6g}, {x1:.6g}] after {depth} bisections"
                )
            refinements += 1
            mid = 0.5 * (x0 + x1)
            q_mid = advance(x0, q0, mid, depth + 1)
            return advance(mid, q_mid, x1, depth + 1)
        q1, flags = carried
        xs.append(float(x1))
        record(vals, flags)
        last["vals"], last["flags"] = vals, flags
        return q1

    for x0, x1 in zip(grid[:-1], grid[1:]):
        q_beta = advance(x0, q_beta, x1, 0)

    x_path = np.array(xs)
    a_arr, b_arr = np.array(a_path), np.array(b_path)
    margin = (1.0 - a_arr - b_arr) - d * b_arr
    inside = x_path <= delta + 1e-15
    vals, flags = last["vals"], last["flags"]
    split = AlphaBetaSplit(
        a_sum=float(a_arr[-1]),
        b_sum=float(b_arr[-1]),
        alpha_values=vals[~flags].copy(),
        beta_values=vals[flags].copy(),
        x_path=x_path,
        a_path=a_arr,
        b_path=b_arr,
    )
    min_margin = float(margin[inside].min())
    return LemmaCheck(
        split=split,
        holds=bool(min_margin >= -tol),
        delta=delta,
        n_alpha=d - n_beta,
        n_beta=n_beta,
        min_margin=min_margin,
        refinements=refinements,
    )


def eigen_decomposition_ensemble(rho: DensityMatrix) -> list[tuple[float, np.ndarray]]:
    """Spectral decomposition of ``rho`` as ``(weight, ket)`` pairs, heaviest first."""
    e = linalg.hermitian_eigen(rho.mat)
    w = np.clip(e.eigenvalues, 0.0, None)
    w = w / w.sum()
    order = np.argsort(w)[::-1]
    return [(float(w[i]), e.eigenvectors[:, i]) for i in order if w[i] > 0.0]


def stationary_value(n_alpha: int, n_beta: int) -> tuple[np.ndarray, np.ndarray, float]:
    """Interior stationary point of ``h = (1 - sum mu^2 - sum nu^2)/d - sum nu^2``
    on the unit-trace plane ``sum mu + sum nu = 1``.

    Solves the Lagrange system directly and returns ``(mu, nu, h)``.
    """
    if n_alpha < 1 or n_beta < 0:
        raise DomainError("need n_alpha >= 1 and n_beta >= 0")
    d = n_alpha + n_beta
    size = d + 1
    kkt = np.zeros((size, size))
    rhs = np.zeros(size)
    # grad h = lam * grad(trace): -2 mu/d = lam, -2 nu (1 + 1/d) = lam
    for i in range(n_alpha):
        kkt[i, i] = -2.0 / d
        kkt[i, d] = -1.0
    for j in range(n_alpha, d):
        kkt[j, j] = -2.0 * (1.0 + 1.0 / d)
        kkt[j, d] = -1.0
    kkt[d, :d] = 1.0
    rhs[d] = 1.0
    sol = np.linalg.solve(kkt, rhs)
    mu, nu = sol[:n_alpha], sol[n_alpha:d]
    h = (1.0 - np.sum(mu**2) - np.sum(nu**2)) / d - np.sum(nu**2)
    return mu, nu, float(h)
