"""Stable sequences of spherical Bessel functions of the first kind.

All sum rules in this package are statements about j_k(z) for a fixed
argument and a contiguous range of orders, so the natural unit of work is
the whole sequence j_0(z)..j_N(z) rather than a single value.  Upward
recurrence in k is violently unstable above the turning point k ~ z; the
sequence is therefore generated by Miller's downward recurrence

    j_{k-1}(z) = ((2k+1)/z) j_k(z) - j_{k+1}(z)

from a trial pair (0, tiny) seeded well above both N and the turning
point, then normalized against an analytically known quantity.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

__all__ = ["BesselSequence", "spherical_j_sequence", "order_ceiling", "DEFAULT_MAX_ORDER"]

DEFAULT_MAX_ORDER = 10_000
_MAX_ORDER_ENV = "BESSEL_SUMRULES_MAX_N"

# The downward sweep needs its seed above the turning point k ~ z, so the
# work and memory scale with max(n_max, z); bound the argument accordingly.
MAX_ARGUMENT = 1e6

# Below this argument the power series truncated at three terms is already
# exact to ~1e-20 relative, and the recurrence's per-step growth (2k+1)/z
# becomes large enough to overflow between rescale checks.
_SERIES_THRESHOLD = 1e-3

# Growth guard for the downward sweep.  When the recurrence output passes
# _RESCALE_LIMIT the live part of the array is scaled down so the sweep can
# cross arbitrarily long decay ranges without overflowing.  Powers of two,
# so rescaling is exact above the subnormal range.
_RESCALE_LIMIT = 2.0**830
_RESCALE_FACTOR = 2.0**-830

# Anything below the smallest normal double is clamped to zero on output;
# such entries carry absolute (not relative) accuracy anyway.
_TINY = 2.3e-308


def order_ceiling() -> int:
    """Largest order accepted by :func:`spherical_j_sequence`.

    Defaults to ``DEFAULT_MAX_ORDER`` and can be overridden through the
    ``BESSEL_SUMRULES_MAX_N`` environment variable, read at call time.
    """
    raw = os.environ.get(_MAX_ORDER_ENV)
    if raw is None:
        return DEFAULT_MAX_ORDER
    try:
        ceiling = int(raw)
    except ValueError:
        raise ValueError(
            f"{_MAX_ORDER_ENV} must be a positive integer, got {raw!r}"
        ) from None
    if ceiling <= 0:
        raise ValueError(f"{_MAX_ORDER_ENV} must be a positive integer, got {raw!r}")
    return ceiling


@dataclass(frozen=True)
class BesselSequence:
    """Values j_0(z)..j_{order_max}(z) at one fixed argument.

    Immutable; safe to share across threads and reuse for every rule that
    needs the same argument.
    """

    z: float
    order_max: int
    values: tuple[float, ...]

    def __len__(self) -> int:
        return self.order_max + 1

    def __getitem__(self, k: int) -> float:
        return self.values[k]


def spherical_j_sequence(n_max: int, z: float) -> BesselSequence:
    """Compute j_0(z)..j_{n_max}(z) by normalized downward recurrence.

    Parameters
    ----------
    n_max : int
        Highest order required, 0 <= n_max <= :func:`order_ceiling`.
    z : float
        Argument, finite and >= 0.

    Accuracy is relative (~1e-13) wherever the value is not suppressed:
    for orders above the turning point k ~ z, and away from the interior
    zeros of j_k below it.  Near an interior zero the error is absolute at
    the scale of the local envelope, and entries below the normal-double
    range are clamped to exact zeros.
    """
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    ceiling = order_ceiling()
    if n_max > ceiling:
        raise ValueError(f"n_max={n_max} exceeds the order ceiling {ceiling}")
    z = float(z)
    if math.isnan(z) or math.isinf(z):
        raise ValueError(f"z must be finite, got {z}")
    if z < 0.0:
        raise ValueError(f"z must be >= 0, got {z}")
    if z > MAX_ARGUMENT:
        raise ValueError(f"z={z} exceeds the argument ceiling {MAX_ARGUMENT}")

    if z == 0.0:
        return BesselSequence(0.0, n_max, (1.0,) + (0.0,) * n_max)

    j0 = math.sin(z) / z
    if n_max == 0:
        return BesselSequence(z, 0, (j0,))

    if z <= _SERIES_THRESHOLD:
        return BesselSequence(z, n_max, _series_values(n_max, z, j0))

    # Start high enough that the wanted orders are reached only after the
    # contaminating y_k admixture has been damped away.  The seed must sit
    # above the turning point k ~ z as well as above n_max, otherwise the
    # admixture is O(1) at every order.
    margin = math.ceil(15.0 + 2.0 * math.sqrt(n_max + z))
    n_start = max(n_max, math.ceil(z)) + margin

    u = [0.0] * (n_start + 2)
    u[n_start] = 1e-30
    hi = n_start  # indices above hi are exact zeros
    for k in range(n_start, 0, -1):
        nxt = (2 * k + 1) / z * u[k] - u[k + 1]
        u[k - 1] = nxt
        if abs(nxt) > _RESCALE_LIMIT:
            for i in range(k - 1, hi + 2):
                u[i] *= _RESCALE_FACTOR
            while hi > k and u[hi] == 0.0:
                hi -= 1

    scale = 1.0 / max(abs(v) for v in u)
    for i in range(len(u)):
        u[i] *= scale

    if abs(j0) > 1e-3:
        norm = j0 / u[0]
    else:
        # Near a zero of sin z the j_0 anchor is useless; normalize via
        # sum_k (2k+1) j_k^2 = 1 instead, fixing the sign from whichever
        # of j_0, j_1 is analytically larger.
        total = math.fsum((2 * k + 1) * u[k] * u[k] for k in range(n_start + 1))
        norm = 1.0 / math.sqrt(total)
        j1 = math.sin(z) / (z * z) - math.cos(z) / z
        ref, got = (j0, u[0]) if abs(j0) >= abs(j1) else (j1, u[1])
        if (got * norm) * ref < 0.0:
            norm = -norm

    out = [u[k] * norm for k in range(n_max + 1)]
    out[0] = j0
    values = tuple(v if abs(v) >= _TINY else 0.0 for v in out)
    return BesselSequence(z, n_max, values)


def _series_values(n_max: int, z: float, j0: float) -> tuple[float, ...]:
    # j_k(z) = z^k/(2k+1)!! * [1 - x/(2k+3) + x^2/(2(2k+3)(2k+5)) - ...],
    # x = z^2/2; truncation after the x^2 term is < x^3/6 relative.
    x = 0.5 * z * z
    out = [j0]
    lead = 1.0
    for k in range(1, n_max + 1):
        lead *= z / (2 * k + 1)
        tail = 1.0 - x / (2 * k + 3) + x * x / (2.0 * (2 * k + 3) * (2 * k + 5))
        out.append(lead * tail)
    return tuple(v if abs(v) >= _TINY else 0.0 for v in out)
