"""Numerical certification of the lower-bound chains on a finite instance.

Every check is a ``lhs >= rhs`` relation with slack ``lhs - rhs``; it passes
when the slack is at least ``-allowance`` (``abs_tol``, scaled relatively
past magnitude 1). A check whose inputs could not be computed because a
solver failed is marked ``unverified``, never ``fail``.

Solvers are looked up on their modules at call time so a test can swap in
a corrupted one and watch the report fail.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import kernels, ratio, solver
from .model import (
    DEFAULT_TOL,
    Distribution,
    GameInstance,
    SolverFailure,
    ToleranceConfig,
    point_mass,
)

PASS, FAIL, UNVERIFIED = "pass", "fail", "unverified"
CERTIFICATE_FACTOR = 10.0
DEEP_SAMPLES = 100_000


def _sig(v):
    if v is None or not math.isfinite(v):
        return None
    return float(f"{v:.12g}")


@dataclass
class Check:
    relation: str
    lhs: float | None
    rhs: float | None
    allowance: float
    status: str = UNVERIFIED

    @property
    def slack(self) -> float | None:
        if self.lhs is None or self.rhs is None:
            return None
        return self.lhs - self.rhs

    @property
    def passed(self) -> bool:
        return self.status == PASS


@dataclass
class ChainReport:
    instance_name: str
    kind: str
    quantities: list[tuple[str, float | None]] = field(default_factory=list)
    checks: list[Check] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failed(self) -> list[Check]:
        return [c for c in self.checks if c.status == FAIL]

    @property
    def unverified(self) -> list[Check]:
        return [c for c in self.checks if c.status == UNVERIFIED]

    def quantity(self, label: str) -> float | None:
        for k, v in self.quantities:
            if k == label:
                return v
        raise KeyError(label)

    def to_dict(self) -> dict:
        return {
            "instance_name": self.instance_name,
            "kind": self.kind,
            "quantities": [{"label": k, "value": _sig(v)} for k, v in self.quantities],
            "checks": [
                {"relation": c.relation, "lhs": _sig(c.lhs), "rhs": _sig(c.rhs),
                 "slack": _sig(c.slack), "allowance": _sig(c.allowance), "status": c.status}
                for c in self.checks
            ],
            "warnings": list(self.warnings),
            "errors": list(self.errors),
            "overall": self.overall,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def render_text(self) -> str:
        lines = [f"== {self.kind}: {self.instance_name}"]
        for k, v in self.quantities:
            lines.append(f"  {k:<36} {_fmt(v):>20}")
        for c in self.checks:
            lines.append(
                f"  [{c.status:^10}] {c.relation:<44} lhs={_fmt(c.lhs):>19} "
                f"rhs={_fmt(c.rhs):>19} slack={_fmt(c.slack):>19}"
            )
        for w in self.warnings:
            lines.append(f"  warning: {w}")
        for e in self.errors:
            lines.append(f"  error: {e}")
        lines.append(f"  overall: {'PASS' if self.overall else 'FAIL'}")
        return "\n".join(lines)


def _fmt(v) -> str:
    v = _sig(v)
    return "n/a" if v is None else f"{v:.12g}"


def _ge(report: ChainReport, relation: str, lhs, rhs, tol: ToleranceConfig,
        factor: float = 1.0) -> Check:
    if lhs is None or rhs is None:
        chk = Check(relation, lhs, rhs, factor * tol.abs_tol, UNVERIFIED)
    else:
        allow = factor * tol.allowance(lhs, rhs)
        chk = Check(relation, lhs, rhs, allow, PASS if lhs - rhs >= -allow else FAIL)
    report.checks.append(chk)
    return chk


def _check_dists(inst: GameInstance, dists: Sequence[Distribution]) -> None:
    for k, d in enumerate(dists):
        if len(d) != inst.n_states:
            raise ValueError(
                f"distribution {k} has {len(d)} weights, instance has {inst.n_states} states"
            )


def _chain(inst, fixed_dists, tol, *, kind, label, solve, bound) -> ChainReport:
    _check_dists(inst, fixed_dists)
    report = ChainReport(inst.name, kind)
    pure = ratio.pure_minimax(inst).value
    report.quantities.append(("pure minimax", pure))

    sup = cert = None
    try:
        res = solve(inst, tol)
        sup = res.value
        cert = bound(inst, res.adversary_dist).value
    except SolverFailure as exc:
        report.errors.append(f"{label} sup-inf solve failed: {exc}")
    report.quantities.append((f"{label} sup-inf", sup))
    report.quantities.append((f"{label}(solver mixture)", cert))

    fixed = [bound(inst, d).value for d in fixed_dists]
    for k, v in enumerate(fixed):
        report.quantities.append((f"{label}(d{k})", v))

    _ge(report, f"pure minimax >= {label} sup-inf", pure, sup, tol)
    _ge(report, f"{label} sup-inf >= {label}(solver mixture)", sup, cert, tol)
    _ge(report, f"{label}(solver mixture) >= {label} sup-inf", cert, sup, tol,
        factor=CERTIFICATE_FACTOR)
    for k, v in enumerate(fixed):
        _ge(report, f"{label} sup-inf >= {label}(d{k})", sup, v, tol)
    return report


def check_roe_chain(inst: GameInstance, fixed_dists: Sequence[Distribution] = (),
                    tol: ToleranceConfig = DEFAULT_TOL) -> ChainReport:
    """pure minimax >= sup-inf ROE >= ROE bound of each fixed mixture.

    The solver's own mixture is replayed as an extra fixed mixture; it must
    reproduce the sup-inf value within ``10 * abs_tol``.
    """
    return _chain(inst, fixed_dists, tol, kind="roe-chain", label="ROE",
                  solve=solver.best_adversary_roe, bound=ratio.roe_lower_bound)


def check_eor_chain(inst: GameInstance, fixed_dists: Sequence[Distribution] = (),
                    tol: ToleranceConfig = DEFAULT_TOL) -> ChainReport:
    """Same chain as ``check_roe_chain`` for the expectation-over-ratios objective."""
    return _chain(inst, fixed_dists, tol, kind="eor-chain", label="EOR",
                  solve=solver.best_adversary_eor, bound=ratio.eor_lower_bound)


def _sample_mixtures(n: int, count: int, seed: int) -> np.ndarray:
    """Dirichlet(1) mixtures, a third of them restricted to random small supports."""
    rng = np.random.default_rng(seed)
    W = rng.exponential(size=(count, n))
    sparse = count // 3
    if n > 2 and sparse:
        keep = rng.random((sparse, n)) < 2.0 / n
        keep[np.arange(sparse), rng.integers(0, n, sparse)] = True
        W[:sparse] *= keep
    return W / W.sum(axis=1, keepdims=True)


def check_weak_equalities(inst: GameInstance, tol: ToleranceConfig = DEFAULT_TOL,
                          deep: bool = False, seed: int = 0,
                          samples: int = DEEP_SAMPLES) -> ChainReport:
    """Pure min-max, min-max EOR and min-max ROE all coincide.

    The inner maximum over mixtures is taken at the worst pure state in both
    cases: EOR is linear in the mixture, and for ROE no mixture beats its
    worst member. With ``deep`` the inner maxima are also searched over
    ``samples`` random mixtures per design, which must never exceed them.
    """
    report = ChainReport(inst.name, "weak-equalities")
    pure = ratio.pure_minimax(inst).value
    eor_inner = [ratio.worst_state_pure(inst, i).value for i in range(inst.n_designs)]
    roe_inner = [solver.adversary_sup_roe_fixed_design(inst, i)[0]
                 for i in range(inst.n_designs)]
    minmax_eor, minmax_roe = min(eor_inner), min(roe_inner)
    report.quantities += [("pure minimax", pure), ("min-max EOR", minmax_eor),
                          ("min-max ROE", minmax_roe)]
    for a, b, x, y in (("pure minimax", "min-max EOR", pure, minmax_eor),
                       ("pure minimax", "min-max ROE", pure, minmax_roe),
                       ("min-max EOR", "min-max ROE", minmax_eor, minmax_roe)):
        _ge(report, f"{a} >= {b}", x, y, tol)
        _ge(report, f"{b} >= {a}", y, x, tol)

    if deep:
        W = _sample_mixtures(inst.n_states, samples, seed)
        for i in range(inst.n_designs):
            e = float(kernels.eor_over_mixtures(inst.ratios[i], W).max())
            r = float(kernels.roe_over_mixtures(inst.benchmark[i], inst.algorithm[i], W).max())
            report.quantities += [(f"sampled max EOR, design {i}", e),
                                  (f"sampled max ROE, design {i}", r)]
            _ge(report, f"worst pure state >= sampled EOR, design {i}", eor_inner[i], e, tol)
            _ge(report, f"worst pure state >= sampled ROE, design {i}", roe_inner[i], r, tol)
    return report


def check_dominance(inst: GameInstance, dists: Sequence[Distribution],
                    tol: ToleranceConfig = DEFAULT_TOL) -> ChainReport:
    """For every design and mixture, a supported state's own ratio reaches the ROE."""
    _check_dists(inst, dists)
    report = ChainReport(inst.name, "dominance")
    zero_rows = [i for i in range(inst.n_designs) if np.any(inst.benchmark[i] == 0)]
    if zero_rows:
        report.warnings.append(
            f"benchmark rows {zero_rows} contain zeros; the witness is checked "
            "empirically there, outside the strictly positive case"
        )
    for k, d in enumerate(dists):
        roe = ratio.roe_values(inst, d)
        for i in range(inst.n_designs):
            w = ratio.dominance_witness(inst.benchmark[i], inst.algorithm[i], d,
                                        allow_zero_numerator=True)
            own = float(inst.ratios[i, w])
            _ge(report, f"ratio(design {i}, witness {w}) >= ROE(design {i}, d{k})",
                own, float(roe[i]), tol)
    return report


@dataclass
class VerificationSuite:
    reports: list[ChainReport]

    @property
    def overall(self) -> bool:
        return all(r.overall for r in self.reports)

    @property
    def any_failed(self) -> bool:
        return any(r.failed for r in self.reports)

    @property
    def any_unverified(self) -> bool:
        return any(r.unverified for r in self.reports)

    def to_dict(self) -> dict:
        return {"overall": self.overall, "reports": [r.to_dict() for r in self.reports]}

    def render_text(self) -> str:
        return "\n".join(r.render_text() for r in self.reports)


def verify_instance(inst: GameInstance, fixed_dists: Sequence[Distribution] = (),
                    tol: ToleranceConfig = DEFAULT_TOL, deep: bool = False,
                    seed: int = 0) -> VerificationSuite:
    """All four reports. Point masses on every state join the dominance check."""
    fixed_dists = list(fixed_dists)
    pm = [point_mass(j, inst.n_states) for j in range(inst.n_states)]
    return VerificationSuite([
        check_eor_chain(inst, fixed_dists, tol),
        check_roe_chain(inst, fixed_dists, tol),
        check_weak_equalities(inst, tol, deep=deep, seed=seed),
        check_dominance(inst, fixed_dists + pm, tol),
    ])
