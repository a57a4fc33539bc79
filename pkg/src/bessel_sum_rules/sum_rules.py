"""Evaluate the sum rules three independent ways.

``direct_sum`` is the oracle: the weighted squares summed term by term
with compensated summation, O(ell) work.  ``closed_form`` evaluates the
boundary expression, a handful of flops regardless of ell.
``recursive_form`` climbs from an order-0 base rule up to order p without
touching the closed-form polynomials, so the three routes are mutually
independent checks.  The four base rules (weights 1/((2k-1)(2k+3)), 2k+1,
(-1)^k(2k+1) and (-1)^k(2k+1)k(k+1)) are exposed directly as
``base_rule``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cache

from .exact_coefficients import (
    Hierarchy,
    alternating_composite_weight,
    boundary_polynomials,
    composite_boundary,
    composite_step_brackets,
    f_weight,
    lhs_weight,
    pochhammer,
)
from .special_functions import BesselSequence, spherical_j_sequence

__all__ = [
    "BaseRule",
    "SumRuleQuery",
    "SumRuleEvaluation",
    "direct_sum",
    "closed_form",
    "recursive_form",
    "base_rule",
    "evaluate",
    "Z_CEILING",
    "ELL_CEILING",
]

Z_CEILING = 1e4
ELL_CEILING = 10_000

# Floor for the relative-error denominator; keeps rel_error finite when a
# sum is an exact zero.
REL_ERROR_FLOOR = 1e-300


class BaseRule(Enum):
    """The four order-0 rules the hierarchies grow out of.

    Named by their j_k^2 weight sequences:

    - RECIPROCAL: 1/((2k-1)(2k+3))
    - LINEAR: 2k+1
    - ALTERNATING: (-1)^k (2k+1)
    - ALTERNATING_QUADRATIC: (-1)^k (2k+1) k (k+1)
    """

    RECIPROCAL = "reciprocal"
    LINEAR = "linear"
    ALTERNATING = "alternating"
    ALTERNATING_QUADRATIC = "alternating_quadratic"


@dataclass(frozen=True)
class SumRuleQuery:
    """One evaluation request: hierarchy, order p, cutoff ell, argument z."""

    hierarchy: Hierarchy
    p: int
    ell: int
    z: float

    def __post_init__(self) -> None:
        if not isinstance(self.hierarchy, Hierarchy):
            raise ValueError(f"hierarchy must be a Hierarchy member, got {self.hierarchy!r}")
        if self.p < 0:
            raise ValueError(f"p must be >= 0, got {self.p}")
        if self.ell < 0:
            raise ValueError(f"ell must be >= 0, got {self.ell}")
        if self.ell > ELL_CEILING:
            raise ValueError(f"ell={self.ell} exceeds the ceiling {ELL_CEILING}")
        if self.hierarchy in (Hierarchy.H2, Hierarchy.H3) and self.ell < self.p:
            raise ValueError(
                f"hierarchies 2/3 start at k = p, so ell >= p is required; "
                f"got ell={self.ell}, p={self.p}"
            )
        object.__setattr__(self, "z", float(self.z))
        if math.isnan(self.z) or math.isinf(self.z) or self.z <= 0.0:
            raise ValueError(f"z must satisfy 0 < z <= {Z_CEILING}, got {self.z}")
        if self.z > Z_CEILING:
            raise ValueError(f"z must satisfy 0 < z <= {Z_CEILING}, got {self.z}")


@dataclass(frozen=True)
class SumRuleEvaluation:
    """Direct and closed-form values of one query, with error metrics."""

    query: SumRuleQuery
    lhs_direct: float
    rhs_closed: float
    rhs_recursive: float | None
    abs_error: float
    rel_error: float


def _check_sequence(seq: BesselSequence, z: float, order: int, name: str) -> None:
    if not isinstance(seq, BesselSequence):
        raise ValueError(f"{name} must be a BesselSequence, got {type(seq).__name__}")
    if seq.z != z:
        raise ValueError(f"{name} was built at z={seq.z}, need z={z}")
    if seq.order_max < order:
        raise ValueError(f"{name} covers orders 0..{seq.order_max}, need {order}")


# Weight vectors in float, cached per (hierarchy, p) and grown on demand.
_weight_cache: dict[tuple[Hierarchy, int], list[float]] = {}


def _float_weights(hierarchy: Hierarchy, p: int, k_max: int) -> list[float]:
    ws = _weight_cache.setdefault((hierarchy, p), [])
    if hierarchy is Hierarchy.H3_COMPOSITE:
        while len(ws) <= k_max:
            k = len(ws)
            sign = -1 if k % 2 else 1
            ws.append(float(sign * (2 * k + 1) * alternating_composite_weight(p, k)))
    else:
        while len(ws) <= k_max:
            ws.append(float(lhs_weight(hierarchy, p, len(ws))))
    return ws


def direct_sum(query: SumRuleQuery, bessel: BesselSequence) -> float:
    """Oracle evaluation: compensated sum of weight(k) * j_k(z)^2, k <= ell."""
    _check_sequence(bessel, query.z, query.ell + 1, "bessel")
    w = _float_weights(query.hierarchy, query.p, query.ell)
    j = bessel.values
    # H2/H3 weights vanish identically below k = p; skipping them is exact.
    start = query.p if query.hierarchy in (Hierarchy.H2, Hierarchy.H3) else 0
    return math.fsum(w[k] * j[k] * j[k] for k in range(start, query.ell + 1))


def _horner(coeffs: tuple[float, ...], x: float) -> float:
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


@cache
def _poly_floats(
    hierarchy: Hierarchy, p: int, ell: int
) -> tuple[tuple[float, ...], tuple[float, ...], tuple[float, ...]]:
    if hierarchy is Hierarchy.H3_COMPOSITE:
        a, b, c = composite_boundary(p, ell)
    else:
        bp = boundary_polynomials(hierarchy, p, ell)
        a, b, c = bp.a_coeffs, bp.b_coeffs, bp.c_coeffs
    return tuple(map(float, a)), tuple(map(float, b)), tuple(map(float, c))


@cache
def _h1_tail_floats(p: int) -> tuple[float, tuple[float, ...]]:
    # tail = pref * sum_k t_k j_{k+1}(2z) / z^{k+1}
    pref = float(1 / pochhammer(Fraction(-2 * p - 1, 2), 2 * p + 2))
    signed = tuple(
        float((-1 if k % 2 else 1) * pochhammer(p - k + 1, k)) for k in range(p + 1)
    )
    return pref, signed


@cache
def _h2_tail_float(p: int) -> float:
    return float(math.factorial(p) / pochhammer(Fraction(3, 2), p))


def closed_form(
    query: SumRuleQuery,
    bessel_z: BesselSequence,
    bessel_2z: BesselSequence | None = None,
) -> float:
    """Boundary-expression value of the rule at (hierarchy, p, ell, z).

    ``bessel_2z`` must cover orders 0..p+1 at argument 2z for hierarchy 1,
    0..p for hierarchy 3, 0..1 for the composite rule; hierarchy 2's tail
    is a pure power of z and ignores it (None is fine).
    """
    h, p, ell, z = query.hierarchy, query.p, query.ell, query.z
    _check_sequence(bessel_z, z, ell + 1, "bessel_z")
    jl, jl1 = bessel_z.values[ell], bessel_z.values[ell + 1]
    a, b, c = _poly_floats(h, p, ell)

    if h is Hierarchy.H1:
        _check_sequence(bessel_2z, 2 * z, p + 1, "bessel_2z")
        # The coefficient lists hold z^2*A and z*C directly: entry m of A
        # belongs to 1/z^{2m+2}, so z^2*A is the plain polynomial in u.
        u = 1.0 / (z * z)
        boundary = (
            _horner(a, u) * jl * jl
            + _horner(b, u) * jl1 * jl1
            + _horner(c, u) * jl * jl1 / z
        )
        pref, signed = _h1_tail_floats(p)
        jd = bessel_2z.values
        inv_z = 1.0 / z
        terms = []
        zp = inv_z
        for k in range(p + 1):
            terms.append(signed[k] * jd[k + 1] * zp)
            zp *= inv_z
        return boundary + pref * math.fsum(terms)

    x = z * z
    boundary = x * (_horner(a, x) * jl * jl + _horner(b, x) * jl1 * jl1)
    boundary += z * _horner(c, x) * jl * jl1
    if h is Hierarchy.H2:
        return boundary + _h2_tail_float(p) * x**p
    if h is Hierarchy.H3:
        _check_sequence(bessel_2z, 2 * z, p, "bessel_2z")
        sign = -1.0 if p % 2 else 1.0
        return boundary + sign * math.factorial(p) * z**p * bessel_2z.values[p]
    # Composite: parity-selected tail.
    if p % 2 == 0:
        _check_sequence(bessel_2z, 2 * z, 0, "bessel_2z")
        sign = -1.0 if (p // 2) % 2 else 1.0
        return boundary + sign * z**p * bessel_2z.values[0]
    _check_sequence(bessel_2z, 2 * z, 1, "bessel_2z")
    sign = -1.0 if ((p - 1) // 2) % 2 else 1.0
    half_bracket = 0.5 * bessel_2z.values[0] - z * bessel_2z.values[1]
    return boundary + sign * z ** (p - 1) * half_bracket


def _base_rhs(
    rule: BaseRule, ell: int, z: float, jl: float, jl1: float,
    j0_2z: float, j1_2z: float,
) -> float:
    if rule is BaseRule.RECIPROCAL:
        return (
            -0.25 / (2 * ell + 3) * jl * jl
            - 0.25 / (2 * ell + 1) * jl1 * jl1
            + 0.25 / z * jl * jl1
            - 0.5 / z * j1_2z
        )
    if rule is BaseRule.LINEAR:
        x = z * z
        return 2.0 * (ell + 1) * z * jl * jl1 - x * jl * jl - x * jl1 * jl1 + 1.0
    sign = -1.0 if ell % 2 else 1.0
    if rule is BaseRule.ALTERNATING:
        return sign * z * jl * jl1 + j0_2z
    # ALTERNATING_QUADRATIC
    x = z * z
    return (
        0.5 * sign * x * (jl * jl - jl1 * jl1)
        + sign * (ell * (ell + 2) + 0.5) * z * jl * jl1
        - z * j1_2z
    )


_base_weight_cache: dict[BaseRule, list[float]] = {}


def _base_weights(rule: BaseRule, k_max: int) -> list[float]:
    ws = _base_weight_cache.setdefault(rule, [])
    while len(ws) <= k_max:
        k = len(ws)
        sign = -1 if k % 2 else 1
        if rule is BaseRule.RECIPROCAL:
            ws.append(float(Fraction(1, (2 * k - 1) * (2 * k + 3))))
        elif rule is BaseRule.LINEAR:
            ws.append(float(2 * k + 1))
        elif rule is BaseRule.ALTERNATING:
            ws.append(float(sign * (2 * k + 1)))
        else:
            ws.append(float(sign * (2 * k + 1) * k * (k + 1)))
    return ws


def base_rule(
    rule: BaseRule,
    ell: int,
    z: float,
    bessel_z: BesselSequence,
    bessel_2z: BesselSequence | None = None,
) -> tuple[float, float]:
    """Both sides of one order-0 rule, truncated at k = ell.

    Returns (lhs, rhs).  ``bessel_2z`` must cover order 1 for RECIPROCAL
    and ALTERNATING_QUADRATIC, order 0 for ALTERNATING; LINEAR has a pure
    constant tail and accepts None.
    """
    if not isinstance(rule, BaseRule):
        raise ValueError(f"rule must be a BaseRule member, got {rule!r}")
    if ell < 0:
        raise ValueError(f"ell must be >= 0, got {ell}")
    z = float(z)
    if math.isnan(z) or math.isinf(z) or z <= 0.0:
        raise ValueError(f"z must be positive and finite, got {z}")
    _check_sequence(bessel_z, z, ell + 1, "bessel_z")

    j0_2z = j1_2z = 0.0
    if rule is not BaseRule.LINEAR:
        need = 0 if rule is BaseRule.ALTERNATING else 1
        _check_sequence(bessel_2z, 2 * z, need, "bessel_2z")
        j0_2z = bessel_2z.values[0]
        if need:
            j1_2z = bessel_2z.values[1]

    j = bessel_z.values
    w = _base_weights(rule, ell)
    lhs = math.fsum(w[k] * j[k] * j[k] for k in range(ell + 1))
    rhs = _base_rhs(rule, ell, z, j[ell], j[ell + 1], j0_2z, j1_2z)
    return lhs, rhs


@cache
def _h1_step_floats(q: int, ell: int) -> tuple[float, float, float, float]:
    half = Fraction(1, 2)
    r1 = float(1 / ((2 * q + 3) * pochhammer(ell - q + half, 2 * q + 3)))
    r2 = float(1 / ((2 * q + 3) * pochhammer(ell - q - half, 2 * q + 3)))
    r3 = float(2 / ((2 * q + 3) * pochhammer(ell - q + half, 2 * q + 2)))
    t = float(1 / pochhammer(-q - 1 - half, 2 * q + 4))
    return r1, r2, r3, t


@cache
def _h2_step_floats(q: int, ell: int) -> tuple[float, float, float, float]:
    den = 2 * q + 3
    factor = float(Fraction(2 * (q + 1), den))
    w1 = float(pochhammer(ell - q + 1, 2 * q + 2) / den)
    w2 = float(pochhammer(ell - q, 2 * q + 2) / den)
    w3 = float(2 * pochhammer(ell - q, 2 * q + 3) / den)
    return factor, w1, w2, w3


@cache
def _h3_step_floats(q: int, ell: int) -> tuple[float, float, float]:
    u_ell, u_prev, w_ell = composite_step_brackets(q, ell)
    sign = -1 if ell % 2 else 1
    return (
        float(Fraction(sign, 2) * u_ell),
        float(Fraction(sign, 2) * u_prev),
        float(sign * (ell + 1) * w_ell),
    )


@cache
def _f_floats(p: int) -> tuple[float, ...]:
    return tuple(float(f_weight(p, q)) for q in range(p + 1))


def _composite_chain(
    p: int, ell: int, z: float, jl: float, jl1: float, j0_2z: float, j1_2z: float,
) -> list[float]:
    # Composite-rule values C_0..C_p at (ell, z).  The two seeds are base
    # rules; each further order comes from the two-step recursion, so the
    # even and odd subchains are independent.
    values = [_base_rhs(BaseRule.ALTERNATING, ell, z, jl, jl1, j0_2z, j1_2z)]
    if p >= 1:
        quad = _base_rhs(BaseRule.ALTERNATING_QUADRATIC, ell, z, jl, jl1, j0_2z, j1_2z)
        values.append(0.5 * values[0] + quad)
    x = z * z
    for q in range(p - 1):
        cu, cv, cw = _h3_step_floats(q, ell)
        values.append(
            -x * values[q] + x * (cu * jl * jl - cv * jl1 * jl1) + cw * z * jl * jl1
        )
    return values


def recursive_form(
    query: SumRuleQuery,
    bessel_z: BesselSequence,
    bessel_2z: BesselSequence | None = None,
) -> float:
    """Right-hand side rebuilt by recursion from an order-0 base rule.

    Hierarchy 1 climbs its own ladder from 8x the RECIPROCAL rule;
    hierarchy 2 from the LINEAR rule; the composite rule uses the two-step
    ladder seeded by ALTERNATING (+ ALTERNATING_QUADRATIC); hierarchy 3 is
    the f-weighted combination of composite values of orders <= p, which
    is how the hierarchy is constructed in the first place.
    """
    h, p, ell, z = query.hierarchy, query.p, query.ell, query.z
    _check_sequence(bessel_z, z, ell + 1, "bessel_z")
    jl, jl1 = bessel_z.values[ell], bessel_z.values[ell + 1]

    if h is Hierarchy.H2:
        value = _base_rhs(BaseRule.LINEAR, ell, z, jl, jl1, 0.0, 0.0)
        x = z * z
        for q in range(p):
            factor, w1, w2, w3 = _h2_step_floats(q, ell)
            value = factor * x * value - x * (w1 * jl * jl + w2 * jl1 * jl1)
            value += z * w3 * jl * jl1
        return value

    need = 1 if (h is Hierarchy.H1 or p >= 1) else 0
    _check_sequence(bessel_2z, 2 * z, need, "bessel_2z")
    j0_2z = bessel_2z.values[0]
    j1_2z = bessel_2z.values[1] if need else 0.0

    if h is Hierarchy.H1:
        value = 8.0 * _base_rhs(BaseRule.RECIPROCAL, ell, z, jl, jl1, j0_2z, j1_2z)
        inv_z2 = 1.0 / (z * z)
        inv_z = 1.0 / z
        for q in range(p):
            r1, r2, r3, t = _h1_step_floats(q, ell)
            value = (
                (2.0 * (q + 1)) / (2 * q + 3) * inv_z2 * value
                - r1 * jl * jl
                - r2 * jl1 * jl1
                + r3 * jl * jl1 * inv_z
                + t * ((q + 1) * j0_2z * inv_z2 + j1_2z * inv_z)
            )
        return value

    chain = _composite_chain(p, ell, z, jl, jl1, j0_2z, j1_2z)
    if h is Hierarchy.H3_COMPOSITE:
        return chain[p]
    weights = _f_floats(p)
    return math.fsum(weights[q] * chain[q] for q in range(p + 1))


def evaluate(query: SumRuleQuery, *, include_recursive: bool = False) -> SumRuleEvaluation:
    """Convenience wrapper: build both sequences, run both (or all three) routes."""
    bessel_z = spherical_j_sequence(query.ell + 1, query.z)
    bessel_2z = spherical_j_sequence(max(query.p + 1, 1), 2 * query.z)
    lhs = direct_sum(query, bessel_z)
    rhs = closed_form(query, bessel_z, bessel_2z)
    recursive = (
        recursive_form(query, bessel_z, bessel_2z) if include_recursive else None
    )
    abs_error = abs(lhs - rhs)
    rel_error = abs_error / max(abs(lhs), REL_ERROR_FLOOR)
    return SumRuleEvaluation(query, lhs, rhs, recursive, abs_error, rel_error)
