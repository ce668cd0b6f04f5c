"""Oracle versus optimized timings; results are compared before anything is timed."""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass

from ..curvature import core as cc
from ..curvature import pq as lv
from . import oracles

BENCH_MIN_N = 4
BENCH_MAX_N = oracles.ORACLE_MAX_N


@dataclass(frozen=True)
class BenchRow:
    n: int
    tensor: str
    p: int
    q: int
    equal: bool
    oracle_seconds: float
    optimized_seconds: float

    @property
    def speedup(self) -> float:
        return self.oracle_seconds / self.optimized_seconds if self.optimized_seconds > 0 else float("inf")

    def to_dict(self) -> dict:
        return {**asdict(self), "speedup": round(self.speedup, 2)}


def _timed(fn):
    start = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - start


def _row(n, tensor, p, q, oracle, fast) -> BenchRow:
    # equality first, on warm calls, then a timed cold oracle and a timed optimized call
    if not bool((oracle(False).coeffs == fast().coeffs).all()):
        raise AssertionError(f"oracle and optimized {tensor} disagree at n={n}, p={p}, q={q}")
    _, t_oracle = _timed(lambda: oracle(True))
    _, t_fast = _timed(fast)
    return BenchRow(n, tensor, p, q, True, t_oracle, t_fast)


def bench(dims, seed: int = 0) -> list[BenchRow]:
    rows = []
    for n in dims:
        if n > BENCH_MAX_N:
            raise oracles.CostGuardError(f"benchmark dimension {n} exceeds the oracle cost guard {BENCH_MAX_N}")
        if n < BENCH_MIN_N:
            raise ValueError(f"benchmark dimension must be at least {BENCH_MIN_N}")
        R = cc.random_algebraic_curvature(seed, n)
        for p in range(n - 1):
            rows.append(_row(n, "dd_star_p", p, 1,
                             lambda cold, p=p: oracles.oracle_dd_star_p(R, p, cold=cold),
                             lambda p=p: cc.dd_star_p(R, p)))
        if n <= oracles.PQ_ORACLE_MAX_N[2]:
            for p in range(n - 3):
                rows.append(_row(n, "pq_curvature", p, 2,
                                 lambda cold, p=p: _pq_oracle(R, p, cold),
                                 lambda p=p: lv.pq_curvature(R, p, 2)))
    return rows


def _pq_oracle(R, p, cold):
    if cold:
        oracles._delta_table_pq.cache_clear()
    return oracles.oracle_pq_curvature(R, p, 2)
