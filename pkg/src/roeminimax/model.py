"""Finite game instances, state distributions, tolerances and result records.

Matrices are stored row-major: rows are designs, columns are states, so
``benchmark[i, j] / algorithm[i, j]`` is the ratio cost of design ``i``
against state ``j``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, BinaryIO, Sequence

import numpy as np

NORMALIZATION_TOL = 1e-12

_INSTANCE_KEYS = ("name", "designs", "states", "benchmark", "algorithm")


class ParseError(ValueError):
    """Input text is not a well-formed instance or distribution document."""


class ValidationError(ValueError):
    """Input parsed but violates an invariant of the instance model."""


class SolverFailure(RuntimeError):
    """A numerical procedure did not reach its certificate tolerance."""

    def __init__(self, message: str, **diagnostics: Any):
        super().__init__(message)
        self.diagnostics = diagnostics


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class ToleranceConfig:
    abs_tol: float = 1e-9
    rel_tol: float = 1e-9
    max_bisection_iters: int = 200
    lp_tol: float = 1e-10

    def __post_init__(self):
        for name in ("abs_tol", "rel_tol", "lp_tol"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise ValidationError(f"{name} must be a positive finite number, got {v!r}")
        if self.max_bisection_iters < 1:
            raise ValidationError(
                f"max_bisection_iters must be >= 1, got {self.max_bisection_iters}"
            )

    def allowance(self, *values: float) -> float:
        """Comparison slack for ``values``: absolute, scaled up only past magnitude 1."""
        scale = max((abs(v) for v in values if math.isfinite(v)), default=0.0)
        if scale > 1.0:
            return max(self.abs_tol, self.rel_tol * scale)
        return self.abs_tol


DEFAULT_TOL = ToleranceConfig()


@dataclass(frozen=True, eq=False)
class Distribution:
    """Probability vector over a finite index set (states, unless stated)."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=float).reshape(-1)
        if w.size == 0:
            raise ValidationError("distribution must have at least one weight")
        if not np.all(np.isfinite(w)):
            raise ValidationError("distribution weights must be finite")
        neg = np.flatnonzero(w < 0)
        if neg.size:
            raise ValidationError(f"weights[{neg[0]}] = {w[neg[0]]!r} is negative")
        total = float(w.sum())
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise ValidationError(f"weights must sum to 1, sum = {total:.12g}")
        object.__setattr__(self, "weights", _frozen(w))

    def __len__(self) -> int:
        return self.weights.size

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Distribution):
            return NotImplemented
        return np.array_equal(self.weights, other.weights)

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.weights > 0)

    def to_dict(self) -> dict:
        return {"weights": self.weights.tolist()}


def make_distribution(weights: Sequence[float], space_size: int) -> Distribution:
    """Validate ``weights`` as a distribution over ``space_size`` elements.

    Weights whose sum is within ``NORMALIZATION_TOL`` of one are renormalized;
    anything further off is rejected rather than silently rescaled.
    """
    w = np.asarray(weights, dtype=float).reshape(-1)
    if w.size != space_size:
        raise ValidationError(
            f"distribution has {w.size} weights but the space has {space_size} elements"
        )
    if np.any(w < 0):
        i = int(np.flatnonzero(w < 0)[0])
        raise ValidationError(f"weights[{i}] = {w[i]!r} is negative")
    total = float(w.sum())
    if not math.isfinite(total) or abs(total - 1.0) > NORMALIZATION_TOL:
        raise ValidationError(f"weights must sum to 1, sum = {total:.12g}")
    return Distribution(w / total)


def point_mass(index: int, space_size: int) -> Distribution:
    if not 0 <= index < space_size:
        raise IndexError(f"point mass index {index} out of range for space of size {space_size}")
    w = np.zeros(space_size)
    w[index] = 1.0
    return Distribution(w)


def uniform(space_size: int) -> Distribution:
    return Distribution(np.full(space_size, 1.0 / space_size))


@dataclass(frozen=True, eq=False)
class GameInstance:
    """Finite ratio-cost instance.

    ``benchmark`` may contain zeros; ``algorithm`` must be strictly positive
    everywhere so every ratio is finite. ``metadata`` carries unknown
    top-level keys from the source document (e.g. ``generator``) unchanged.
    """

    name: str
    designs: tuple[str, ...]
    states: tuple[str, ...]
    benchmark: np.ndarray
    algorithm: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "designs", tuple(str(d) for d in self.designs))
        object.__setattr__(self, "states", tuple(str(s) for s in self.states))
        beta = _as_matrix(self.benchmark, "benchmark")
        alg = _as_matrix(self.algorithm, "algorithm")
        validate_arrays(beta, alg, len(self.designs), len(self.states))
        object.__setattr__(self, "benchmark", _frozen(beta))
        object.__setattr__(self, "algorithm", _frozen(alg))

    @property
    def shape(self) -> tuple[int, int]:
        return self.benchmark.shape

    @property
    def n_designs(self) -> int:
        return self.benchmark.shape[0]

    @property
    def n_states(self) -> int:
        return self.benchmark.shape[1]

    @cached_property
    def ratios(self) -> np.ndarray:
        return _frozen(self.benchmark / self.algorithm)

    def to_dict(self) -> dict:
        doc = {
            "name": self.name,
            "designs": list(self.designs),
            "states": list(self.states),
            "benchmark": self.benchmark.tolist(),
            "algorithm": self.algorithm.tolist(),
        }
        for k, v in self.metadata.items():
            doc.setdefault(k, v)
        return doc


def _as_matrix(data: Any, fld: str) -> np.ndarray:
    try:
        a = np.array(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{fld}: not a rectangular numeric matrix ({exc})") from None
    if a.ndim != 2:
        raise ValidationError(f"{fld}: expected a 2-d matrix, got {a.ndim} dimension(s)")
    return a


def validate_arrays(beta: np.ndarray, alg: np.ndarray, m: int, n: int) -> None:
    if m < 1:
        raise ValidationError("designs: the design space is empty")
    if n < 1:
        raise ValidationError("states: the state space is empty")
    if beta.shape != alg.shape:
        raise ValidationError(
            f"dimension mismatch: benchmark is {beta.shape[0]}x{beta.shape[1]}, "
            f"algorithm is {alg.shape[0]}x{alg.shape[1]}"
        )
    if beta.shape != (m, n):
        raise ValidationError(
            f"dimension mismatch: matrices are {beta.shape[0]}x{beta.shape[1]} "
            f"but there are {m} designs and {n} states"
        )
    for fld, a in (("benchmark", beta), ("algorithm", alg)):
        bad = np.argwhere(~np.isfinite(a))
        if bad.size:
            r, c = bad[0]
            raise ValidationError(f"{fld}[{r}][{c}] = {a[r, c]!r} is not finite")
    bad = np.argwhere(beta < 0)
    if bad.size:
        r, c = bad[0]
        raise ValidationError(f"benchmark[{r}][{c}] = {beta[r, c]!r} must be >= 0")
    bad = np.argwhere(alg <= 0)
    if bad.size:
        r, c = bad[0]
        raise ValidationError(
            f"algorithm[{r}][{c}] = {alg[r, c]!r} must be > 0; every algorithm entry "
            "must be positive (having only one design with an all-positive row "
            "is not enough here, since every ratio must be finite)"
        )


def instance_from_dict(doc: Any) -> GameInstance:
    if not isinstance(doc, dict):
        raise ParseError("instance document must be a JSON object")
    missing = [k for k in _INSTANCE_KEYS if k not in doc]
    if missing:
        raise ParseError(f"instance document is missing key(s): {', '.join(missing)}")
    if not isinstance(doc["name"], str):
        raise ParseError("name: expected a string")
    for k in ("designs", "states"):
        if not isinstance(doc[k], list):
            raise ParseError(f"{k}: expected a list of labels")
    for k in ("benchmark", "algorithm"):
        rows = doc[k]
        if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
            raise ParseError(f"{k}: expected a list of rows")
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                if isinstance(v, bool) or not isinstance(v, (int, float)):
                    raise ParseError(f"{k}[{i}][{j}]: expected a number, got {v!r}")
        widths = {len(r) for r in rows}
        if len(widths) > 1:
            raise ValidationError(f"dimension mismatch: {k} rows have unequal lengths {sorted(widths)}")
    extra = {k: v for k, v in doc.items() if k not in _INSTANCE_KEYS}
    beta = doc["benchmark"]
    alg = doc["algorithm"]
    # empty lists become (0,) arrays; give them a 2-d shape so the empty-space check names the field
    return GameInstance(
        name=doc["name"],
        designs=doc["designs"],
        states=doc["states"],
        benchmark=beta if beta else np.zeros((0, len(doc["states"]))),
        algorithm=alg if alg else np.zeros((0, len(doc["states"]))),
        metadata=extra,
    )


def _read_json(source: BinaryIO | bytes | str) -> Any:
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        try:
            source = source.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8: {exc}") from None
    try:
        return json.loads(source)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from None


def load_instance(source: BinaryIO | bytes | str) -> GameInstance:
    """Parse and validate an instance document from a byte stream or buffer."""
    return instance_from_dict(_read_json(source))


def dump_instance(inst: GameInstance) -> bytes:
    return (json.dumps(inst.to_dict(), indent=2) + "\n").encode("utf-8")


def read_instance(path) -> GameInstance:
    with open(path, "rb") as fh:
        return load_instance(fh)


def load_distribution(source: BinaryIO | bytes | str, space_size: int) -> Distribution:
    doc = _read_json(source)
    if not isinstance(doc, dict) or "weights" not in doc:
        raise ParseError('distribution document must be an object with a "weights" list')
    w = doc["weights"]
    if not isinstance(w, list) or not all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in w
    ):
        raise ParseError("weights: expected a list of numbers")
    return make_distribution(w, space_size)


@dataclass(frozen=True)
class RatioValue:
    value: float
    argmax_state: int | None = None
    argmin_design: int | None = None


@dataclass(frozen=True)
class SolveResult:
    """A bound together with the adversary mixture that achieves it.

    ``residual`` is the solver's certificate slack (zero for closed-form
    evaluations). ``designer_mix`` is filled in by game solves that also
    recover the designer's optimal mixed strategy from the dual.
    """

    value: float
    adversary_dist: Distribution
    best_design: int
    iterations: int = 0
    residual: float = 0.0
    designer_mix: np.ndarray | None = None

    def to_dict(self) -> dict:
        d = {
            "value": self.value,
            "adversary_dist": self.adversary_dist.weights.tolist(),
            "best_design": self.best_design,
            "iterations": self.iterations,
            "residual": self.residual,
        }
        if self.designer_mix is not None:
            d["designer_mix"] = self.designer_mix.tolist()
        return d
