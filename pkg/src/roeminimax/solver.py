"""Optimal adversary mixtures for the EOR and ROE lower bounds.

Convention throughout: the adversary picks a mixture ``d`` over states
(columns) and the designer answers with a pure design (row), so the value
of a payoff matrix ``M`` is ``max_d min_i (M @ d)[i]``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from . import kernels
from .model import (
    DEFAULT_TOL,
    Distribution,
    GameInstance,
    SolveResult,
    SolverFailure,
    ToleranceConfig,
    point_mass,
    uniform,
)
from .ratio import pure_minimax, roe_lower_bound, worst_state_pure

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class MatrixGameSolution:
    """Both optimal strategies of a zero-sum matrix game with bounds on its value.

    ``value`` is what ``adversary`` guarantees against every design, and
    ``upper`` what ``designer`` concedes against every state; the residual
    ``upper - value`` is the duality gap certificate.
    """

    value: float
    upper: float
    adversary: Distribution
    designer: np.ndarray
    best_design: int
    iterations: int

    @property
    def residual(self) -> float:
        return self.upper - self.value


def _normalized(v: np.ndarray) -> np.ndarray:
    v = np.clip(v, 0.0, None)
    return v / v.sum()


def solve_matrix_game(M, tol: ToleranceConfig = DEFAULT_TOL) -> MatrixGameSolution:
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] < 1 or M.shape[1] < 1:
        raise ValueError(f"payoff must be a non-empty 2-d matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("payoff matrix has non-finite entries")
    m, n = M.shape

    if m == 1:
        j = int(np.argmax(M[0]))
        v = float(M[0, j])
        return MatrixGameSolution(v, v, point_mass(j, n), np.ones(1), 0, 0)
    if n == 1:
        i = int(np.argmin(M[:, 0]))
        v = float(M[i, 0])
        return MatrixGameSolution(v, v, point_mass(0, 1), np.eye(m)[i], i, 0)

    shift = 1.0 - M.min()
    P = M + shift
    eps = 1e-12 * P.max()
    max_iter = 50 * (m + n) + 100
    x, y, iters, status = kernels.simplex_game(P, max_iter, eps)
    if status != kernels.STATUS_OPTIMAL or not (x.sum() > 0 and y.sum() > 0):
        raise SolverFailure(
            "simplex did not reach an optimal basis",
            status=int(status), iterations=int(iters), shape=(m, n),
        )
    adversary = Distribution(_normalized(y))
    designer = _normalized(x)
    payoff = M @ adversary.weights
    best = int(np.argmin(payoff))
    lower = float(payoff[best])
    upper = float(np.max(designer @ M))
    sol = MatrixGameSolution(lower, upper, adversary, designer, best, int(iters))
    if sol.residual > tol.lp_tol:
        raise SolverFailure(
            f"duality gap {sol.residual:.3g} exceeds lp_tol {tol.lp_tol:.3g}",
            residual=sol.residual, iterations=int(iters), shape=(m, n),
        )
    return sol


def zero_sum_value(M, tol: ToleranceConfig = DEFAULT_TOL) -> tuple[float, Distribution, int]:
    """Game value, the adversary's (column) mixture and the designer's best reply."""
    sol = solve_matrix_game(M, tol)
    return sol.value, sol.adversary, sol.best_design


def best_adversary_eor(inst: GameInstance, tol: ToleranceConfig = DEFAULT_TOL) -> SolveResult:
    sol = solve_matrix_game(inst.ratios, tol)
    return SolveResult(
        value=sol.value,
        adversary_dist=sol.adversary,
        best_design=sol.best_design,
        iterations=sol.iterations,
        residual=max(sol.residual, 0.0),
        designer_mix=sol.designer,
    )


def parametric_gap(inst: GameInstance, lam: float, tol: ToleranceConfig = DEFAULT_TOL) -> MatrixGameSolution:
    """Solve the linearized game ``benchmark - lam * algorithm``.

    Its value is strictly decreasing in ``lam`` and crosses zero exactly at
    the ROE sup-inf value.
    """
    return solve_matrix_game(inst.benchmark - lam * inst.algorithm, tol)


def best_adversary_roe(inst: GameInstance, tol: ToleranceConfig = DEFAULT_TOL) -> SolveResult:
    """Sup over state mixtures of the designer's best ROE.

    Dinkelbach-type iteration on the linearized game, with each design's row
    divided by its expected algorithm value under the current mixture (this
    keeps the root and turns linear convergence into superlinear). Every
    game solve yields a mixture whose own ROE bound strictly exceeds the
    current level until the game value is within ``abs_tol`` of zero; a
    bisection step against the upper end of the bracket covers a stalled
    update. The returned value is the exact ROE bound of the returned
    mixture, so replaying the mixture reproduces it.
    """
    m, n = inst.shape
    if n == 1:
        res = roe_lower_bound(inst, point_mass(0, 1))
        return SolveResult(res.value, res.adversary_dist, res.best_design)
    if m == 1:
        worst = worst_state_pure(inst, 0)
        return SolveResult(worst.value, point_mass(worst.argmax_state, n), 0)

    hi = pure_minimax(inst).value
    best = roe_lower_bound(inst, uniform(n))
    iters = 0
    gap_bound = np.inf
    while True:
        if iters >= tol.max_bisection_iters:
            raise SolverFailure(
                f"ROE iteration did not converge in {iters} game solves",
                lam=best.value, bracket_high=hi, gap=gap_bound,
            )
        scale = inst.algorithm @ best.adversary_dist.weights
        lam = best.value
        sol = solve_matrix_game((inst.benchmark - lam * inst.algorithm) / scale[:, None], tol)
        iters += 1
        # unscaled game value lies in [0, upper * max(scale)]
        gap_bound = max(sol.upper, 0.0) * float(scale.max())
        if gap_bound <= tol.abs_tol or hi - lam <= tol.abs_tol:
            break
        cand = roe_lower_bound(inst, sol.adversary)
        if cand.value > lam:
            best = cand
            continue
        mid = 0.5 * (lam + hi)
        log.debug("ROE update stalled at %.17g; bisecting at %.17g", lam, mid)
        msol = parametric_gap(inst, mid, tol)
        iters += 1
        if msol.upper < 0:
            hi = mid
        else:
            cand = roe_lower_bound(inst, msol.adversary)
            if cand.value > lam:
                best = cand

    return SolveResult(
        value=best.value,
        adversary_dist=best.adversary_dist,
        best_design=best.best_design,
        iterations=iters,
        residual=gap_bound,
    )


def adversary_sup_roe_fixed_design(inst: GameInstance, design: int) -> tuple[float, int]:
    """Sup over state mixtures of one design's ROE: attained by its worst pure state."""
    worst = worst_state_pure(inst, design)
    return worst.value, worst.argmax_state
