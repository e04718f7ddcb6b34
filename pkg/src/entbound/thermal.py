"""Three spin-1 atoms in thermal equilibrium.

The Hamiltonian acts on atom 0 (x) atom 1 (x) atom 2::

    H = omega Jz_total + tau J1.J2 + gamma (J1.J2)^2 + k J0.(J1 + J2)

Energies and temperatures are in units of ``omega`` (``omega = 1`` is the
canonical choice) and ``k_B = 1``, so ``beta = 1 / T``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace

import numpy as np

from . import bounds, linalg, states
from .states import Bipartition, DensityMatrix

log = logging.getLogger(__name__)

N_SITES = 3
SITE_DIM = 3
# Gibbs state split as atom 0 | atoms (1, 2)
GIBBS_PART = Bipartition(SITE_DIM, SITE_DIM * SITE_DIM)
PAIR_PART = Bipartition(SITE_DIM, SITE_DIM)
# the tensor-product order puts the pair (1, 2) second, as d2 = 9 of the
# 3 x 9 split; the 9 x 3 regrouping (0, 1) | 2 is used for pair bounds
PAIR_CUT_PART = Bipartition(SITE_DIM * SITE_DIM, SITE_DIM)


@dataclass(frozen=True)
class SpinOperators:
    jx: np.ndarray
    jy: np.ndarray
    jz: np.ndarray

    def components(self):
        return (self.jx, self.jy, self.jz)


def spin_one() -> SpinOperators:
    """Spin-1 matrices in the ``|+1>, |0>, |-1>`` basis."""
    r = 1.0 / math.sqrt(2.0)
    jx = r * np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=np.complex128)
    jy = r * np.array([[0, -1j, 0], [1j, 0, -1j], [0, 1j, 0]], dtype=np.complex128)
    jz = np.diag([1.0, 0.0, -1.0]).astype(np.complex128)
    return SpinOperators(jx, jy, jz)


def site_operator(op: np.ndarray, site: int, n_sites: int = N_SITES) -> np.ndarray:
    """Embed a single-site operator at ``site`` of an ``n_sites`` chain."""
    eye = np.eye(op.shape[0], dtype=np.complex128)
    out = np.ones((1, 1), dtype=np.complex128)
    for s in range(n_sites):
        out = linalg.kron(out, op if s == site else eye)
    return out


def _spin_dot(a: int, b: int, ops: SpinOperators) -> np.ndarray:
    return sum(
        linalg.matmul(site_operator(c, a), site_operator(c, b)) for c in ops.components()
    )


@dataclass(frozen=True)
class ThermalParams:
    omega: float = 1.0
    tau: float = 0.0
    gamma: float = 0.0
    k: float = 0.0
    beta: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.beta) and self.beta > 0.0):
            raise ValueError(f"beta must be finite and positive, got {self.beta!r}")

    @property
    def kbt(self) -> float:
        return 1.0 / self.beta

    @classmethod
    def at_temperature(cls, kbt: float, **kw) -> "ThermalParams":
        if not kbt > 0.0:
            raise ValueError(f"temperature must be positive, got {kbt!r}")
        return cls(beta=1.0 / kbt, **kw)


def build_hamiltonian(p: ThermalParams) -> np.ndarray:
    ops = spin_one()
    jz_total = sum(site_operator(ops.jz, s) for s in range(N_SITES))
    j12 = _spin_dot(1, 2, ops)
    h = (
        p.omega * jz_total
        + p.tau * j12
        + p.gamma * linalg.matmul(j12, j12)
        + p.k * (_spin_dot(0, 1, ops) + _spin_dot(0, 2, ops))
    )
    return 0.5 * (h + h.conj().T)


@dataclass(frozen=True, eq=False)
class GibbsState:
    hamiltonian: np.ndarray
    eigenvalues: np.ndarray
    weights: np.ndarray
    beta: float
    state: DensityMatrix
    partition_function: float
    log_partition_function: float


def gibbs(h, beta: float, part: Bipartition = GIBBS_PART) -> GibbsState:
    """``exp(-beta H) / Z`` from an eigendecomposition of ``H``.

    Boltzmann factors are shifted by the ground energy, so large ``beta``
    cannot overflow; ``Z`` itself is also returned in log form.
    """
    if not (math.isfinite(beta) and beta > 0.0):
        raise ValueError(f"beta must be finite and positive, got {beta!r}")
    e = linalg.hermitian_eigen(h)
    energies = e.eigenvalues
    e_min = energies[0]
    boltz = np.exp(-beta * (energies - e_min))
    z_shift = float(boltz.sum())
    w = boltz / z_shift
    v = e.eigenvectors
    rho = (v * w) @ v.conj().T
    log_z = math.log(z_shift) - beta * e_min
    with np.errstate(over="ignore"):
        z = float(z_shift * np.exp(-beta * e_min))
    return GibbsState(
        hamiltonian=linalg.as_matrix(h),
        eigenvalues=energies,
        weights=w,
        beta=beta,
        state=states.validate(rho, part),
        partition_function=z,
        log_partition_function=log_z,
    )


def gibbs_mixedness(g: GibbsState) -> float:
    """``sum_{i != j} w_i w_j`` over the Boltzmann weights."""
    w = g.weights
    total = w.sum()
    return float(total * total - np.sum(w * w))


def internal_energy(g: GibbsState) -> float:
    return float(np.dot(g.weights, g.eigenvalues))


def heat_capacity(g: GibbsState) -> float:
    """``beta^2 (<H^2> - <H>^2)``, evaluated as a centred variance."""
    u = internal_energy(g)
    var = float(np.dot(g.weights, (g.eigenvalues - u) ** 2))
    return g.beta * g.beta * var


def reduced_pair_state(g: GibbsState) -> DensityMatrix:
    """State of atoms 1 and 2 after tracing out atom 0, split 3 | 3."""
    reduced = states.partial_trace(g.state, keep=2)
    return states.validate(reduced, PAIR_PART)


BOUND_SOURCES = ("gibbs", "reduced")


@dataclass(frozen=True)
class ThermalPoint:
    params: ThermalParams
    heat_capacity: float
    gibbs_purity: float
    reduced: bounds.BoundsReport
    pair_bounds: bounds.BoundsReport

    @property
    def negativity(self) -> float:
        return self.reduced.negativity


def _pair_bounds(purity: float, negativity: float, source: str, reduced_purity: float) -> bounds.BoundsReport:
    if source == "gibbs":
        # negativity of (1|2) cannot exceed that of (0,1)|2: tracing out
        # atom 0 is local to one side, so the 27-dim bounds apply
        return bounds.report_from_purity(purity, negativity, PAIR_CUT_PART.d1, PAIR_CUT_PART.d2)
    if source == "reduced":
        return bounds.report_from_purity(reduced_purity, negativity, PAIR_PART.d1, PAIR_PART.d2)
    raise ValueError(f"bounds source must be one of {BOUND_SOURCES}, got {source!r}")


def thermal_point(p: ThermalParams, bounds_from: str = "gibbs") -> ThermalPoint:
    """Everything plotted for one parameter set.

    ``bounds_from="gibbs"`` bounds the pair negativity with the purity of
    the full 27-dimensional Gibbs state over the 9 x 3 cut ``(0,1) | 2``;
    ``"reduced"`` uses the purity of the 3 x 3 pair state itself.
    """
    g = gibbs(build_hamiltonian(p), p.beta)
    reduced = bounds.bounds_report(reduced_pair_state(g))
    gp = 1.0 - gibbs_mixedness(g)
    pair = _pair_bounds(gp, reduced.negativity, bounds_from, reduced.purity)
    return ThermalPoint(p, heat_capacity(g), gp, reduced, pair)


def reduced_two_atom_report(p: ThermalParams) -> bounds.BoundsReport:
    """Bounds report of the 3 x 3 state of atoms 1 and 2."""
    g = gibbs(build_hamiltonian(p), p.beta)
    return bounds.bounds_report(reduced_pair_state(g))


SWEEP_VARS = ("gamma", "k", "T")


@dataclass(frozen=True)
class SweepRow:
    sweep_value: float
    heat_capacity: float
    purity_reduced: float
    negativity: float
    q1: float
    q2: float
    q3: int

    COLUMNS = ("sweep_value", "heat_capacity", "purity_reduced", "negativity", "q1", "q2", "q3")

    @property
    def within_bounds(self) -> bool:
        return self.negativity <= min(self.q1, self.q2, self.q3) + 1e-9


def params_at(p: ThermalParams, sweep_var: str, value: float) -> ThermalParams:
    if sweep_var == "gamma":
        return replace(p, gamma=value)
    if sweep_var == "k":
        return replace(p, k=value)
    if sweep_var == "T":
        if not value > 0.0:
            raise ValueError(f"temperature grid must be positive, got {value!r}")
        return replace(p, beta=1.0 / value)
    raise ValueError(f"sweep variable must be one of {SWEEP_VARS}, got {sweep_var!r}")


def sweep_row(p: ThermalParams, sweep_var: str, value: float, bounds_from: str = "gibbs") -> SweepRow:
    pt = thermal_point(params_at(p, sweep_var, value), bounds_from)
    b = pt.pair_bounds
    if b.q3 != 1:
        log.warning("q3 = 0 at %s = %g: mixedness crossed the separability threshold", sweep_var, value)
    return SweepRow(float(value), pt.heat_capacity, pt.reduced.purity, pt.negativity, b.q1, b.q2, b.q3)


def thermal_sweep(p: ThermalParams, sweep_var: str, grid, bounds_from: str = "gibbs", mapper=map) -> list[SweepRow]:
    """One :class:`SweepRow` per grid value; ``mapper`` may be a pool's ``map``."""
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("grid must be a nonempty 1-D array")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing")
    params_at(p, sweep_var, float(grid[0]))  # reject bad sweep_var / T before work starts
    return list(mapper(lambda x: sweep_row(p, sweep_var, float(x), bounds_from), grid))
