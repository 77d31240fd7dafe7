"""Instance generators: ski rental, seeded random matrices, constant-ratio cases.

Random draws come from SplitMix64 so a ``(seed, sizes, range)`` tuple maps to
the same instance on every platform and in every implementation that uses
the same stream: ``u = (next() >> 11) * 2**-53``, filled row-major, all of
``benchmark`` first and then all of ``algorithm``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .model import Distribution, GameInstance, ValidationError

PRNG_NAME = "splitmix64"
_MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def random(self) -> float:
        """Uniform double in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def uniform(self, lo: float, hi: float, count: int) -> np.ndarray:
        return np.array([lo + (hi - lo) * self.random() for _ in range(count)])

    def below(self, k: int) -> int:
        return self.next_u64() % k


@dataclass(frozen=True)
class SkiRentalParams:
    buy_cost: int
    horizon: int

    def __post_init__(self):
        if isinstance(self.buy_cost, bool) or not isinstance(self.buy_cost, int) or self.buy_cost < 2:
            raise ValidationError(f"buy_cost must be an integer >= 2, got {self.buy_cost!r}")
        if not isinstance(self.horizon, int) or self.horizon < self.buy_cost + 1:
            raise ValidationError(
                f"horizon must be an integer >= buy_cost + 1 = {self.buy_cost + 1}, got {self.horizon!r}"
            )


def gen_ski_rental(p: SkiRentalParams) -> GameInstance:
    """Rent-or-buy: design ``i`` rents until buying at the start of day ``i``.

    Design ``horizon + 1`` never buys. State ``j`` is the last ski day. The
    numerator is the online cost and the denominator the offline optimum
    ``min(j, buy_cost)``, so every ratio is a competitive ratio >= 1.
    """
    b, h = p.buy_cost, p.horizon
    thresholds = np.arange(1, h + 2)[:, None]
    days = np.arange(1, h + 1)[None, :]
    online = np.where(days < thresholds, days, thresholds - 1 + b).astype(float)
    offline = np.broadcast_to(np.minimum(days, b), online.shape).astype(float)
    return GameInstance(
        name=f"ski-rental(b={b},h={h}); benchmark=online cost, algorithm=offline optimum",
        designs=[f"buy-day-{i}" for i in range(1, h + 1)] + ["never-buy"],
        states=[f"stop-day-{j}" for j in range(1, h + 1)],
        benchmark=online,
        algorithm=offline,
        metadata={"generator": {"kind": "ski", "buy_cost": b, "horizon": h}},
    )


def _check_sizes(m: int, n: int) -> None:
    if m < 1 or n < 1:
        raise ValidationError(f"need at least one design and one state, got {m}x{n}")


def gen_random(m: int, n: int, seed: int, lo: float = 0.1, hi: float = 10.0) -> GameInstance:
    _check_sizes(m, n)
    if not (0 < lo < hi):
        raise ValidationError(f"need 0 < lo < hi, got lo={lo!r}, hi={hi!r}")
    rng = SplitMix64(seed)
    beta = rng.uniform(lo, hi, m * n).reshape(m, n)
    alg = rng.uniform(lo, hi, m * n).reshape(m, n)
    return GameInstance(
        name=f"random-{m}x{n}-seed{seed}-{PRNG_NAME}",
        designs=[f"d{i}" for i in range(m)],
        states=[f"s{j}" for j in range(n)],
        benchmark=beta,
        algorithm=alg,
        metadata={"generator": {"kind": "random", "designs": m, "states": n,
                                "seed": seed, "lo": lo, "hi": hi, "prng": PRNG_NAME}},
    )


def gen_constant_ratio(m: int, n: int, c: float, seed: int,
                       lo: float = 1.0, hi: float = 10.0) -> GameInstance:
    """Random positive algorithm matrix with ``benchmark = c * algorithm``."""
    _check_sizes(m, n)
    if not c > 0:
        raise ValidationError(f"ratio must be > 0, got {c!r}")
    rng = SplitMix64(seed)
    alg = rng.uniform(lo, hi, m * n).reshape(m, n)
    return GameInstance(
        name=f"constant-ratio-{c:g}-{m}x{n}-seed{seed}-{PRNG_NAME}",
        designs=[f"d{i}" for i in range(m)],
        states=[f"s{j}" for j in range(n)],
        benchmark=c * alg,
        algorithm=alg,
        metadata={"generator": {"kind": "const", "designs": m, "states": n, "ratio": c,
                                "seed": seed, "lo": lo, "hi": hi, "prng": PRNG_NAME}},
    )


def random_distribution(n: int, rng: SplitMix64) -> Distribution:
    w = np.array([rng.random() for _ in range(n)]) + 1e-3
    return Distribution(w / w.sum())


def random_corpus(count: int, seed: int = 0, max_size: int = 12,
                  lo: float = 0.1, hi: float = 10.0) -> Iterator[GameInstance]:
    """``count`` random instances with both sizes drawn from ``1..max_size``."""
    sizes = SplitMix64(seed ^ 0x5EED)
    for k in range(count):
        m = 1 + sizes.below(max_size)
        n = 1 + sizes.below(max_size)
        yield gen_random(m, n, seed * 1_000_003 + k, lo, hi)
