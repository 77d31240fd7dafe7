"""Ratio cost, EOR/ROE objectives and small facts about fractions.

EOR (expectation over ratios) averages ``benchmark / algorithm`` under a
state mixture; ROE (ratio of expectations) averages numerator and
denominator separately and divides once. Ties are always broken toward the
lowest index.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .model import (
    DEFAULT_TOL,
    Distribution,
    GameInstance,
    RatioValue,
    SolveResult,
    ToleranceConfig,
    ValidationError,
)


def _check_design(inst: GameInstance, design: int) -> None:
    if not 0 <= design < inst.n_designs:
        raise IndexError(f"design {design} out of range (instance has {inst.n_designs})")


def _check_dist(inst: GameInstance, dist: Distribution) -> None:
    if len(dist) != inst.n_states:
        raise ValidationError(
            f"dimension mismatch: distribution has {len(dist)} weights, "
            f"instance has {inst.n_states} states"
        )


def ratio_cost(inst: GameInstance, design: int, state: int) -> float:
    _check_design(inst, design)
    if not 0 <= state < inst.n_states:
        raise IndexError(f"state {state} out of range (instance has {inst.n_states})")
    return float(inst.benchmark[design, state] / inst.algorithm[design, state])


def eor_values(inst: GameInstance, dist: Distribution) -> np.ndarray:
    """EOR of every design under ``dist``."""
    _check_dist(inst, dist)
    return inst.ratios @ dist.weights


def roe_values(inst: GameInstance, dist: Distribution) -> np.ndarray:
    """ROE of every design under ``dist``."""
    _check_dist(inst, dist)
    return (inst.benchmark @ dist.weights) / (inst.algorithm @ dist.weights)


def eor_value(inst: GameInstance, design: int, dist: Distribution) -> float:
    _check_design(inst, design)
    _check_dist(inst, dist)
    return float(inst.ratios[design] @ dist.weights)


def roe_value(inst: GameInstance, design: int, dist: Distribution) -> float:
    _check_design(inst, design)
    _check_dist(inst, dist)
    w = dist.weights
    return float((inst.benchmark[design] @ w) / (inst.algorithm[design] @ w))


def worst_state_pure(inst: GameInstance, design: int) -> RatioValue:
    _check_design(inst, design)
    row = inst.ratios[design]
    j = int(np.argmax(row))
    return RatioValue(float(row[j]), argmax_state=j, argmin_design=design)


def pure_minimax(inst: GameInstance) -> RatioValue:
    """Designer commits to one pure design, adversary answers with its worst state."""
    worst = inst.ratios.max(axis=1)
    i = int(np.argmin(worst))
    j = int(np.argmax(inst.ratios[i]))
    return RatioValue(float(worst[i]), argmax_state=j, argmin_design=i)


def eor_lower_bound(inst: GameInstance, dist: Distribution) -> SolveResult:
    vals = eor_values(inst, dist)
    i = int(np.argmin(vals))
    return SolveResult(float(vals[i]), dist, i)


def roe_lower_bound(inst: GameInstance, dist: Distribution) -> SolveResult:
    vals = roe_values(inst, dist)
    i = int(np.argmin(vals))
    return SolveResult(float(vals[i]), dist, i)


def dominance_witness(
    svec: Sequence[float],
    tvec: Sequence[float],
    dist: Distribution,
    allow_zero_numerator: bool = False,
) -> int:
    """Index in the support of ``dist`` whose own ratio ``s/t`` is at least the ROE.

    Returns the lowest-index supported element of maximal ratio; that
    element always dominates, because the ROE is itself a weighted mean of
    the supported ratios (weights ``dist * t``). With ``allow_zero_numerator``
    zeros in ``svec`` are accepted, since instances may carry zero benchmark
    entries.
    """
    s = np.asarray(svec, dtype=float)
    t = np.asarray(tvec, dtype=float)
    if s.shape != t.shape or s.size != len(dist):
        raise ValidationError(
            f"length mismatch: s has {s.size}, t has {t.size}, distribution has {len(dist)}"
        )
    if np.any(t <= 0):
        raise ValidationError(f"t[{int(np.flatnonzero(t <= 0)[0])}] must be > 0")
    bad = s < 0 if allow_zero_numerator else s <= 0
    if np.any(bad):
        raise ValidationError(f"s[{int(np.flatnonzero(bad)[0])}] must be > 0")

    support = dist.support
    ratios = s[support] / t[support]
    return int(support[np.argmax(ratios)])


@dataclass(frozen=True)
class FractionReport:
    """Ratios ``A = a1/a2``, ``B = b1/b2`` and the blend ``Q`` they bracket."""

    A: float
    B: float
    Q: float
    holds: bool


def _require_positive(**kw: float) -> None:
    for k, v in kw.items():
        if not (v > 0 and np.isfinite(v)):
            raise ValidationError(f"{k} must be a positive finite number, got {v!r}")


def _blend(kappa, a1, a2, b1, b2):
    return (kappa * a1 + b1) / (kappa * a2 + b2)


def fraction_compare(
    kappa: float, a1: float, a2: float, b1: float, b2: float,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> FractionReport:
    """Check that ``Q = (kappa*a1 + b1) / (kappa*a2 + b2)`` never overshoots ``A``.

    If ``A >= B`` then ``A >= Q``, and if ``A == B`` then ``Q == A``. Both
    follow from ``Q`` lying between ``B`` and ``A``, which is what is checked
    (so the mirrored case ``A <= B`` is covered too).
    """
    _require_positive(kappa=kappa, a1=a1, a2=a2, b1=b1, b2=b2)
    A, B = a1 / a2, b1 / b2
    Q = _blend(kappa, a1, a2, b1, b2)
    eps = tol.allowance(A, B, Q)
    holds = min(A, B) - eps <= Q <= max(A, B) + eps
    if abs(A - B) <= eps:
        holds = holds and abs(Q - A) <= eps
    return FractionReport(A, B, Q, bool(holds))


@dataclass(frozen=True)
class MonotonicityReport:
    Q: np.ndarray
    direction: str  # "increasing", "constant" or "decreasing"
    holds: bool


def fraction_monotonicity(
    a1: float, a2: float, b1: float, b2: float,
    kappa_grid: Sequence[float],
    tol: ToleranceConfig = DEFAULT_TOL,
) -> MonotonicityReport:
    """Sample ``Q(kappa)`` on a grid and check its direction against ``A`` vs ``B``."""
    _require_positive(a1=a1, a2=a2, b1=b1, b2=b2)
    grid = np.asarray(kappa_grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2:
        raise ValidationError("kappa_grid needs at least two points")
    if np.any(grid <= 0) or np.any(np.diff(grid) <= 0):
        raise ValidationError("kappa_grid must be positive and strictly increasing")

    A, B = a1 / a2, b1 / b2
    Q = _blend(grid, a1, a2, b1, b2)
    steps = np.diff(Q)
    eps = tol.allowance(A, B, *Q)
    if abs(A - B) <= eps:
        direction = "constant"
        holds = bool(np.all(np.abs(Q - A) <= eps))
    elif A > B:
        direction = "increasing"
        holds = bool(np.all(steps >= -eps))
    else:
        direction = "decreasing"
        holds = bool(np.all(steps <= eps))
    return MonotonicityReport(Q, direction, holds)


def act_second_min(pairs: Sequence[tuple[float, float]]) -> tuple[float, int]:
    """Minimum of ``a_i / b_i``; also the minimum of ``(xi.a) / (xi.b)`` over all mixtures ``xi``."""
    arr = np.asarray(pairs, dtype=float)
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] != 2:
        raise ValidationError("pairs must be a non-empty list of (a, b) tuples")
    if np.any(~(arr > 0)) or not np.all(np.isfinite(arr)):
        raise ValidationError("all pair entries must be positive finite numbers")
    r = arr[:, 0] / arr[:, 1]
    i = int(np.argmin(r))
    return float(r[i]), i
