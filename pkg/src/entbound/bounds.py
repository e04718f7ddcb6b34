"""Purity-based upper bounds on the negativity of a bipartite state.

All bounds take the purity ``P = Tr rho^2`` together with the total
dimension ``d`` and the smaller subsystem dimension ``d_m``:

* ``q1`` comes from ``||X||_1^2 <= d ||X||_2^2`` applied to the partial
  transpose, whose Hilbert-Schmidt norm equals the state's.
* ``q2`` splits the partially transposed spectrum into the part inherited
  from a dominant pure component and the rest.  It is tighter than ``q1``
  above the crossover purity :func:`p_critical`.
* ``q3`` is the step function that vanishes at and below purity
  ``1/(d-1)``, where every state is separable.

``q2`` is not a rigorous bound for every state.  ``Phi+ (x) I_m/m`` with the
Bell pair across the cut has negativity 1 while ``q2 < 1`` for ``m >= 3``;
see ``tests/test_bounds.py::test_q2_counterexample``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from . import states
from .errors import DomainError

PURITY_SLACK = 1e-12


def _check(purity: float, d: int, d_m: int | None = None) -> float:
    if d < 2:
        raise DomainError(f"d must be >= 2, got {d}")
    if not (1.0 / d - PURITY_SLACK <= purity <= 1.0 + PURITY_SLACK):
        raise DomainError(f"purity {purity!r} outside [1/{d}, 1]")
    if d_m is not None:
        if d_m < 2:
            raise DomainError(f"d_m must be >= 2, got {d_m}")
        if d_m * d_m > d:
            raise DomainError(f"d_m^2 = {d_m * d_m} exceeds d = {d}")
    return min(max(purity, 1.0 / d), 1.0)


def q1_bound(purity: float, d: int, d_m: int) -> float:
    """``(sqrt(d P) - 1) / (d_m - 1)``; exceeds 1 for unbalanced cuts near purity 1."""
    purity = _check(purity, d, d_m)
    # d P >= 1 on the admissible range; the floor removes rounding below it
    return (math.sqrt(max(d * purity, 1.0)) - 1.0) / (d_m - 1)


def q2_bound(purity: float, d: int, d_m: int) -> float:
    purity = _check(purity, d, d_m)
    spread = math.sqrt((d - 1) / d) * math.sqrt(max(1.0 - purity, 0.0))
    return (d_m * math.sqrt(purity) + spread - 1.0) / (d_m - 1)


def q3_bound(purity: float, d: int) -> int:
    """1 while the purity exceeds ``1/(d-1)``, else 0 (the threshold itself gives 0)."""
    purity = _check(purity, d)
    return 1 if purity > 1.0 / (d - 1) else 0


def p_critical(d: int, d_m: int) -> float:
    """Purity above which ``q2 < q1`` (equal to 1 for balanced cuts)."""
    if d_m < 2 or d_m * d_m > d:
        raise DomainError(f"need 2 <= d_m and d_m^2 <= d, got d={d}, d_m={d_m}")
    gap = math.sqrt(d) - d_m
    return (d - 1) / (d * gap * gap + d - 1)


@dataclass(frozen=True)
class PurityBounds:
    q1: float
    q2: float
    q3: int
    q: float
    p_critical: float


def q_min(purity: float, d: int, d1: int, d2: int) -> PurityBounds:
    """All three bounds and their minimum, capped at 1."""
    if d != d1 * d2:
        raise DomainError(f"d = {d} is not {d1} * {d2}")
    d_m = min(d1, d2)
    b1 = q1_bound(purity, d, d_m)
    b2 = q2_bound(purity, d, d_m)
    b3 = q3_bound(purity, d)
    return PurityBounds(b1, b2, b3, min(b1, b2, b3, 1.0), p_critical(d, d_m))


@dataclass(frozen=True)
class BoundsReport:
    purity: float
    s_linear: float
    negativity: float
    q1: float
    q2: float
    q3: int
    q: float
    p_critical: float
    d1: int
    d2: int

    FIELDS = ("d1", "d2", "purity", "s_linear", "negativity", "q1", "q2", "q3", "q", "p_critical")

    @property
    def satisfied(self) -> bool:
        return self.negativity <= self.q + 1e-9

    def as_dict(self) -> dict:
        return asdict(self)


def report_from_purity(purity: float, negativity: float, d1: int, d2: int) -> BoundsReport:
    d = d1 * d2
    b = q_min(purity, d, d1, d2)
    s_l = d / (d - 1) * (1.0 - purity)
    return BoundsReport(purity, s_l, negativity, b.q1, b.q2, b.q3, b.q, b.p_critical, d1, d2)


def bounds_report(rho: states.DensityMatrix, *, method: str = "auto") -> BoundsReport:
    """Purity, linear entropy, negativity and every bound for one state."""
    p = states.purity(rho)
    n = states.negativity(rho, method=method)
    return report_from_purity(p, n, rho.part.d1, rho.part.d2)


def norm_bound_fixed_negatives(d: int, n_minus: int, purity: float) -> float:
    """Largest trace norm of a unit-trace Hermitian ``d x d`` matrix with
    squared HS norm ``purity`` and exactly ``n_minus`` negative eigenvalues.

    Equal to ``(d - 2n + 2 sqrt(n (d - n) (d P - 1))) / d``.  Its maximum
    over a continuous ``n`` is ``sqrt(d P)``, the norm bound behind ``q1``.
    """
    if not 1 <= n_minus < d:
        raise DomainError(f"need 1 <= n_minus < d, got n_minus={n_minus}, d={d}")
    excess = d * purity - 1.0
    if excess < -PURITY_SLACK:
        raise DomainError(f"d * purity = {d * purity!r} < 1")
    excess = max(excess, 0.0)
    return (d - 2 * n_minus + 2.0 * math.sqrt(n_minus * (d - n_minus) * excess)) / d


def rank_refined_bound(purity: float, r: int, d_m: int, d: int | None = None) -> float:
    """``q1`` with ``d`` replaced by a certified rank ``r`` of the partial transpose."""
    if r < d_m * d_m or (d is not None and r > d):
        raise DomainError(f"rank {r} outside [d_m^2, d] = [{d_m * d_m}, {d}]")
    if d_m < 2:
        raise DomainError(f"d_m must be >= 2, got {d_m}")
    purity = _check(purity, d if d is not None else r)
    return (math.sqrt(r * purity) - 1.0) / (d_m - 1)


def crossover_sign(purity: float, d: int, d_m: int, tie: float = 1e-12) -> tuple[int, int]:
    """Signs of ``q1 - q2`` and ``purity - p_critical``, zero inside ``tie``.

    The two agree for every admissible argument: ``q2`` is the tighter
    bound exactly when the purity lies above the crossover.  A zero on
    either side is a tie: near ``P = 1`` the gap ``q1 - q2`` behaves like
    ``sqrt(1 - P)``, so the two tie windows differ in width.
    """
    def sgn(x):
        return 0 if abs(x) <= tie else (1 if x > 0 else -1)
    return sgn(q1_bound(purity, d, d_m) - q2_bound(purity, d, d_m)), sgn(purity - p_critical(d, d_m))
