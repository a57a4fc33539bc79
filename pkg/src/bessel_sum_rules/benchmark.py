"""Wall-clock comparison of direct summation against the closed forms.

The point of the closed forms is that their cost is O(p) while the direct
sum is O(ell); this module measures that ratio honestly.  Bessel-sequence
construction is excluded from both timed paths by default, since both
sides of a rule presuppose the same Bessel values; ``include_bessel=True``
folds construction into each path for an end-to-end figure.
"""

from __future__ import annotations

import math
import statistics
import time
from dataclasses import dataclass
from typing import Callable

from .special_functions import spherical_j_sequence
from .sum_rules import SumRuleQuery, closed_form, direct_sum

# One timed repeat is an inner loop sized so the repeat lasts about 0.1 ms;
# perf_counter_ns granularity is then noise at the per-mille level.
_TARGET_REPEAT_NS = 100_000
_MAX_INNER = 10_000


@dataclass(frozen=True)
class BenchReport:
    """Timing comparison for one query.

    Timings are wall-clock medians over ``repeats`` of the mean
    per-evaluation time inside a calibrated inner loop, in nanoseconds.
    ``checksum`` is the closed-form value computed by the timed code, kept
    so the interpreter cannot skip the work and so reruns can be checked
    for agreement.
    """

    query: SumRuleQuery
    repeats: int
    mean_ns_direct: float
    mean_ns_closed: float
    speedup: float
    checksum: float


def _calibrated_inner(fn: Callable[[], float]) -> int:
    t0 = time.perf_counter_ns()
    fn()
    est = max(time.perf_counter_ns() - t0, 1)
    return max(1, min(_MAX_INNER, math.ceil(_TARGET_REPEAT_NS / est)))


def _time_path(
    fn: Callable[[], float], repeats: int, warmup: int
) -> tuple[float, float]:
    # The calibration call doubles as the first warmup: it pays one-off
    # costs (coefficient caches) before anything is timed.
    inner = _calibrated_inner(fn)
    for _ in range(warmup):
        fn()
    means = []
    value = 0.0
    for _ in range(repeats):
        t0 = time.perf_counter_ns()
        for _ in range(inner):
            value = fn()
        means.append((time.perf_counter_ns() - t0) / inner)
    return statistics.median(means), value


def run_bench(
    query: SumRuleQuery,
    repeats: int = 100,
    warmup: int = 1,
    include_bessel: bool = False,
) -> BenchReport:
    """Time direct_sum against closed_form for one query."""
    if repeats < 1:
        raise ValueError(f"repeats must be >= 1, got {repeats}")
    if warmup < 0:
        raise ValueError(f"warmup must be >= 0, got {warmup}")
    order_z = query.ell + 1
    order_2z = max(query.p + 1, 1)
    if include_bessel:

        def run_direct() -> float:
            return direct_sum(query, spherical_j_sequence(order_z, query.z))

        def run_closed() -> float:
            return closed_form(
                query,
                spherical_j_sequence(order_z, query.z),
                spherical_j_sequence(order_2z, 2.0 * query.z),
            )

    else:
        bessel_z = spherical_j_sequence(order_z, query.z)
        bessel_2z = spherical_j_sequence(order_2z, 2.0 * query.z)

        def run_direct() -> float:
            return direct_sum(query, bessel_z)

        def run_closed() -> float:
            return closed_form(query, bessel_z, bessel_2z)

    mean_direct, _ = _time_path(run_direct, repeats, warmup)
    mean_closed, checksum = _time_path(run_closed, repeats, warmup)
    return BenchReport(
        query=query,
        repeats=repeats,
        mean_ns_direct=mean_direct,
        mean_ns_closed=mean_closed,
        speedup=mean_direct / mean_closed,
        checksum=checksum,
    )


def spearman_rank_correlation(xs: list[float], ys: list[float]) -> float:
    """Spearman rho between two samples, with average ranks on ties."""
    if len(xs) != len(ys):
        raise ValueError("samples must have equal length")
    if len(xs) < 2:
        raise ValueError("need at least two points")

    def ranks(vals: list[float]) -> list[float]:
        order = sorted(range(len(vals)), key=vals.__getitem__)
        out = [0.0] * len(vals)
        i = 0
        while i < len(order):
            j = i
            while j + 1 < len(order) and vals[order[j + 1]] == vals[order[i]]:
                j += 1
            mean_rank = (i + j) / 2 + 1
            for idx in order[i : j + 1]:
                out[idx] = mean_rank
            i = j + 1
        return out

    rx, ry = ranks(xs), ranks(ys)
    mx = statistics.fmean(rx)
    my = statistics.fmean(ry)
    cov = sum((a - mx) * (b - my) for a, b in zip(rx, ry))
    sx = math.sqrt(sum((a - mx) ** 2 for a in rx))
    sy = math.sqrt(sum((b - my) ** 2 for b in ry))
    if sx == 0.0 or sy == 0.0:
        raise ValueError("constant sample has no rank correlation")
    return cov / (sx * sy)
