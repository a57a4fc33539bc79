"""Machine checks for the recurrence identities behind the sum rules.

The closed forms in :mod:`bessel_sum_rules.sum_rules` all descend from a
small set of identities: a four-term recurrence for squared spherical
Bessel functions, a cross-product elimination identity, and a master
relation that turns any coefficient sequence ``a_k`` into a relation
between two weighted sums plus boundary terms.  This module evaluates the
residual of each identity numerically (or exactly, where the identity is
pure rational arithmetic) so the whole derivation chain can be verified
mechanically instead of trusted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum, unique
from fractions import Fraction
from functools import cache
from typing import Any

from .exact_coefficients import (
    Hierarchy,
    alternating_composite_weight,
    c_coefficient,
    f_weight,
    lhs_weight,
    pochhammer,
)
from .special_functions import BesselSequence, spherical_j_sequence

#: Relative tolerance for the pointwise floating-point identities.
FLOAT_IDENTITY_TOLERANCE = 1e-12

#: Relative tolerance for ell-independence of the master-relation defect.
DEFECT_TOLERANCE = 1e-10

# Relative tolerances are measured against the largest participating term,
# floored so that identically-zero configurations cannot divide by zero.
_SCALE_FLOOR = 1e-300

_SUITE_Z_VALUES = (0.5, 1.0, 5.0, 20.0, 50.0)
_DEFECT_ELL_MAX = 30
_ORTHOGONALITY_Q_MAX = 12
_C_RECURRENCE_P_MAX = 10
_HYPERGEOMETRIC_Q_MAX = 10


@unique
class Identity(Enum):
    """The identities the verification suite knows how to check."""

    FOUR_TERM_RECURRENCE = "four-term-recurrence"
    PRODUCT_IDENTITY = "product-identity"
    MASTER_RELATION = "master-relation"
    FAMILY_CONSISTENCY = "family-consistency"
    C_RECURRENCE = "c-recurrence"
    WEIGHT_ORTHOGONALITY = "weight-orthogonality"
    TERMINATING_3F2 = "terminating-3f2"


@dataclass(frozen=True)
class RelationResidual:
    """Outcome of one identity check.

    ``tolerance`` is None for exact-arithmetic identities, which pass only
    on a rational residual of exactly zero.  Floating-point identities pass
    iff |residual| <= tolerance * scale with scale the largest participating
    term magnitude (floored at 1e-300).
    """

    identity: Identity
    inputs: dict[str, Any] = field(compare=False)
    residual: float | Fraction
    tolerance: float | None
    passed: bool


# --------------------------------------------------------------------------
# Coefficient families for the master relation


@dataclass(frozen=True)
class CoefficientFamily:
    """A coefficient sequence a_k feeding the master relation.

    The master relation holds for any sequence; these seven families are the
    ones that generate the base rules and the three hierarchies.  The
    generator must be evaluable for every integer k (g_0 reaches down to
    a_{-1}), so each family defines a_k on all of Z.
    """

    kind: str
    p: int | None = None

    _SIMPLE = ("ones", "linear", "alternating", "alternating_quadratic")

    def __post_init__(self) -> None:
        if self.kind in self._SIMPLE:
            if self.p is not None:
                raise ValueError(f"family {self.kind!r} takes no order p")
        elif self.kind in ("h1", "h2", "h3"):
            if self.p is None or self.p < 0:
                raise ValueError(f"family {self.kind!r} needs an order p >= 0")
        else:
            raise ValueError(f"unknown coefficient family {self.kind!r}")

    @property
    def label(self) -> str:
        return self.kind if self.p is None else f"{self.kind}(p={self.p})"

    # -- constructors

    @classmethod
    def ones(cls) -> "CoefficientFamily":
        return cls("ones")

    @classmethod
    def linear(cls) -> "CoefficientFamily":
        return cls("linear")

    @classmethod
    def alternating(cls) -> "CoefficientFamily":
        return cls("alternating")

    @classmethod
    def alternating_quadratic(cls) -> "CoefficientFamily":
        return cls("alternating_quadratic")

    @classmethod
    def h1(cls, p: int) -> "CoefficientFamily":
        return cls("h1", p)

    @classmethod
    def h2(cls, p: int) -> "CoefficientFamily":
        return cls("h2", p)

    @classmethod
    def h3(cls, p: int) -> "CoefficientFamily":
        return cls("h3", p)

    # -- the generator and its derived weights

    def a(self, k: int) -> Fraction:
        """Generator value a_k, exact, for any integer k."""
        sign = -1 if k % 2 else 1
        if self.kind == "ones":
            return Fraction(1)
        if self.kind == "linear":
            return Fraction(k)
        if self.kind == "alternating":
            return Fraction(sign)
        if self.kind == "alternating_quadratic":
            return Fraction(-sign * (2 * k * k - 1))
        p = self.p
        assert p is not None
        if self.kind == "h1":
            # Half-integer Pochhammer: no zero factor can occur.
            return -1 / (
                2 * (p + 1) * pochhammer(Fraction(2 * (k - p) - 1, 2), 2 * p + 2)
            )
        if self.kind == "h2":
            return pochhammer(k - p - 1, 2 * p + 3) / (2 * (p + 1))
        acc = Fraction(0)
        for m in range(p + 1):
            acc += (
                c_coefficient(p, m)
                * pochhammer(k - m - 1, 2 * m + 3)
                / ((m + 1) * (m + 2))
            )
        return Fraction(sign * k, 2) * acc

    def f(self, k: int) -> Fraction:
        """Left-side weight (2k+1)(a_{k+1} - a_k) from the generator."""
        return (2 * k + 1) * (self.a(k + 1) - self.a(k))

    def g(self, k: int) -> Fraction:
        """Right-side weight from the generator (needs a_{k-1} at k = 0)."""
        return (self.a(k + 2) + self.a(k + 1)) / (2 * k + 3) - (
            self.a(k) + self.a(k - 1)
        ) / (2 * k - 1)

    def f_reference(self, k: int) -> Fraction:
        """The closed form f_k was designed to produce, for k >= 0."""
        if self.kind == "ones":
            return Fraction(0)
        if self.kind == "linear":
            return Fraction(2 * k + 1)
        if self.kind == "alternating":
            return -2 * _composite_weight(0, k)
        if self.kind == "alternating_quadratic":
            return 4 * lhs_weight(Hierarchy.H3, 1, k)
        p = self.p
        assert p is not None
        if self.kind == "h1":
            return lhs_weight(Hierarchy.H1, p, k)
        if self.kind == "h2":
            return Fraction(2 * p + 3, 2 * (p + 1)) * lhs_weight(Hierarchy.H2, p + 1, k)
        return -_composite_weight(p + 2, k)

    def g_reference(self, k: int) -> Fraction:
        """The closed form g_k was designed to produce, for k >= 0."""
        if self.kind == "ones":
            return -lhs_weight(Hierarchy.H1, 0, k)
        if self.kind in ("linear", "alternating", "alternating_quadratic"):
            return Fraction(0)
        p = self.p
        assert p is not None
        if self.kind == "h1":
            return Fraction(2 * p + 3, 2 * (p + 1)) * lhs_weight(Hierarchy.H1, p + 1, k)
        if self.kind == "h2":
            return lhs_weight(Hierarchy.H2, p, k)
        return _composite_weight(p, k)

    def tail(self, z: float) -> float:
        """Closed form of the constant term F(z) the defect must equal.

        Derived by evaluating the relation at ell = 0 and reducing through
        j_0(2z) and j_1(2z); hierarchy-2 and -3 families have F = 0.
        """
        if self.kind in ("h2", "h3"):
            return 0.0
        two_z = spherical_j_sequence(1, 2.0 * float(z))
        j0_2z, j1_2z = two_z[0], two_z[1]
        if self.kind == "ones":
            return -4.0 * z * j1_2z
        if self.kind == "linear":
            return 1.0
        if self.kind == "alternating":
            return -2.0 * j0_2z
        if self.kind == "alternating_quadratic":
            return -4.0 * z * j1_2z
        p = self.p
        assert p is not None
        front = Fraction(2 * p + 3, 2 * (p + 1)) / pochhammer(
            Fraction(-2 * p - 3, 2), 2 * p + 4
        )
        return -float(front) * ((p + 1) * j0_2z + z * j1_2z)


def _composite_weight(p: int, k: int) -> Fraction:
    sign = -1 if k % 2 else 1
    return sign * (2 * k + 1) * alternating_composite_weight(p, k)


def seven_families(max_p: int) -> tuple[CoefficientFamily, ...]:
    """The four simple families plus all hierarchy families with order <= max_p."""
    simple = (
        CoefficientFamily.ones(),
        CoefficientFamily.linear(),
        CoefficientFamily.alternating(),
        CoefficientFamily.alternating_quadratic(),
    )
    graded = tuple(
        ctor(p)
        for ctor in (CoefficientFamily.h1, CoefficientFamily.h2, CoefficientFamily.h3)
        for p in range(max_p + 1)
    )
    return simple + graded


@cache
def _family_fg(family: CoefficientFamily, k_max: int) -> tuple[tuple[float, float], ...]:
    # Float weights f_k, g_k for k = 0..k_max, converted once per family.
    return tuple(
        (float(family.f(k)), float(family.g(k))) for k in range(k_max + 1)
    )


# --------------------------------------------------------------------------
# Pointwise floating-point identities


def four_term_residual(k: int, bessel: BesselSequence) -> RelationResidual:
    """Residual of the four-term recurrence for squared values at order k.

    (2k-1) j_{k-1}^2 - (2k+1) j_k^2
        = z^2/(2k-1) (j_{k-2}^2 - j_k^2) + z^2/(2k+1) (j_{k-1}^2 - j_{k+1}^2).

    Requires k >= 1; the k = 1 instance uses j_{-1}(z) = cos(z)/z.
    """
    if k < 1:
        raise ValueError(f"the recurrence starts at k = 1, got k={k}")
    if len(bessel) < k + 2:
        raise ValueError(
            f"sequence covers orders 0..{len(bessel) - 1}, need 0..{k + 1}"
        )
    z = bessel.z
    jkm2 = math.cos(z) / z if k == 1 else bessel[k - 2]
    jkm1, jk, jkp1 = bessel[k - 1], bessel[k], bessel[k + 1]
    zz = z * z
    terms = (
        (2 * k - 1) * jkm1 * jkm1,
        -(2 * k + 1) * jk * jk,
        -zz / (2 * k - 1) * (jkm2 * jkm2 - jk * jk),
        -zz / (2 * k + 1) * (jkm1 * jkm1 - jkp1 * jkp1),
    )
    residual = math.fsum(terms)
    scale = max(max(abs(t) for t in terms), _SCALE_FLOOR)
    return RelationResidual(
        identity=Identity.FOUR_TERM_RECURRENCE,
        inputs={"k": k, "z": z},
        residual=residual,
        tolerance=FLOAT_IDENTITY_TOLERANCE,
        passed=abs(residual) <= FLOAT_IDENTITY_TOLERANCE * scale,
    )


def product_identity_residual(ell: int, bessel: BesselSequence) -> RelationResidual:
    """Residual of the cross-product elimination identity at order ell.

    z j_ell j_{ell+1} = z^2/(2 ell + 1) (j_{ell+1}^2 - j_{ell-1}^2)/2
        + (2 ell + 1) j_ell^2 / 2, for ell >= 1.
    """
    if ell < 1:
        raise ValueError(f"the identity needs ell >= 1, got ell={ell}")
    if len(bessel) < ell + 2:
        raise ValueError(
            f"sequence covers orders 0..{len(bessel) - 1}, need 0..{ell + 1}"
        )
    z = bessel.z
    jm1, jl, jl1 = bessel[ell - 1], bessel[ell], bessel[ell + 1]
    terms = (
        z * jl * jl1,
        -0.5 * z * z / (2 * ell + 1) * (jl1 * jl1 - jm1 * jm1),
        -0.5 * (2 * ell + 1) * jl * jl,
    )
    residual = math.fsum(terms)
    scale = max(max(abs(t) for t in terms), _SCALE_FLOOR)
    return RelationResidual(
        identity=Identity.PRODUCT_IDENTITY,
        inputs={"ell": ell, "z": z},
        residual=residual,
        tolerance=FLOAT_IDENTITY_TOLERANCE,
        passed=abs(residual) <= FLOAT_IDENTITY_TOLERANCE * scale,
    )


def master_relation_defect(
    family: CoefficientFamily,
    ell: int,
    z: float,
    bessel: BesselSequence | None = None,
) -> tuple[float, float]:
    """Defect of the master relation at (family, ell, z), with its scale.

    The defect collects every ell-dependent term of the relation on one
    side; the relation asserts it is independent of ell and equal to the
    family's constant term F(z).  Returns (defect, scale) where scale is
    the largest participating term magnitude, for relative comparisons.
    """
    if ell < 0:
        raise ValueError(f"ell must be >= 0, got {ell}")
    z = float(z)
    if bessel is None:
        bessel = spherical_j_sequence(ell + 1, z)
    elif len(bessel) < ell + 2:
        raise ValueError(
            f"sequence covers orders 0..{len(bessel) - 1}, need 0..{ell + 1}"
        )
    fg = _family_fg(family, max(ell, len(bessel) - 1))
    zz = z * z
    terms = []
    for k in range(ell + 1):
        fk, gk = fg[k]
        jk2 = bessel[k] * bessel[k]
        terms.append(fk * jk2)
        terms.append(-zz * gk * jk2)
    a_l = float(family.a(ell))
    a_l1 = float(family.a(ell + 1))
    a_l2 = float(family.a(ell + 2))
    jl, jl1 = bessel[ell], bessel[ell + 1]
    terms.append(zz * (a_l1 + a_l2) / (2 * ell + 3) * jl * jl)
    terms.append(zz * (a_l1 + a_l) / (2 * ell + 1) * jl1 * jl1)
    terms.append(-2.0 * z * a_l1 * jl * jl1)
    defect = math.fsum(terms)
    scale = max(max(abs(t) for t in terms), _SCALE_FLOOR)
    return defect, scale


def master_relation_residual(
    family: CoefficientFamily,
    ell: int,
    z: float,
    bessel: BesselSequence | None = None,
) -> RelationResidual:
    """Check that the master-relation defect at ell matches the ell = 0 one.

    The constant term F(z) is pinned operationally as the ell = 0 defect,
    so the meaningful assertion is ell-independence of the defect.
    """
    if ell < 1:
        raise ValueError(f"ell-independence needs ell >= 1, got {ell}")
    if bessel is None:
        bessel = spherical_j_sequence(ell + 1, float(z))
    defect_ell, scale_ell = master_relation_defect(family, ell, z, bessel)
    defect_0, scale_0 = master_relation_defect(family, 0, z, bessel)
    residual = defect_ell - defect_0
    scale = max(scale_ell, scale_0, _SCALE_FLOOR)
    return RelationResidual(
        identity=Identity.MASTER_RELATION,
        inputs={"family": family.label, "ell": ell, "z": float(z)},
        residual=residual,
        tolerance=DEFECT_TOLERANCE,
        passed=abs(residual) <= DEFECT_TOLERANCE * scale,
    )


# --------------------------------------------------------------------------
# Exact-arithmetic identities


def coefficient_family_consistency(
    family: CoefficientFamily, k_max: int
) -> RelationResidual:
    """Exact check that generator-derived f_k, g_k match their closed forms.

    Compares f_k and g_k computed from the generator a_k against the closed
    forms each family was constructed to produce, for 0 <= k <= k_max.  For
    the hierarchy-3 families the shift identity f_k at order p equals -g_k
    at order p + 2 is asserted as well.  The residual accumulates absolute
    rational differences and passes only at exactly zero.  For hierarchy 2
    and 3 the weights at k < p vanish through a zero Pochhammer factor, so
    the comparison covers those k exactly rather than skipping them.
    """
    if k_max < 0:
        raise ValueError(f"k_max must be >= 0, got {k_max}")
    total = Fraction(0)
    for k in range(k_max + 1):
        total += abs(family.f(k) - family.f_reference(k))
        total += abs(family.g(k) - family.g_reference(k))
        if family.kind == "h3":
            assert family.p is not None
            shifted = CoefficientFamily.h3(family.p + 2)
            total += abs(family.f_reference(k) + shifted.g_reference(k))
    return RelationResidual(
        identity=Identity.FAMILY_CONSISTENCY,
        inputs={"family": family.label, "k_max": k_max},
        residual=total,
        tolerance=None,
        passed=total == 0,
    )


def orthogonality_residual(m: int, q: int) -> RelationResidual:
    """Exact residual of sum_{p=m}^{q} f_p^(q) c_m^(p) = delta_{m,q}."""
    if not 0 <= m <= q:
        raise ValueError(f"need 0 <= m <= q, got m={m}, q={q}")
    acc = sum(
        (f_weight(q, p) * c_coefficient(p, m) for p in range(m, q + 1)),
        Fraction(0),
    )
    residual = acc - (1 if m == q else 0)
    return RelationResidual(
        identity=Identity.WEIGHT_ORTHOGONALITY,
        inputs={"m": m, "q": q},
        residual=residual,
        tolerance=None,
        passed=residual == 0,
    )


def c_recurrence_residual(p: int, m: int) -> RelationResidual:
    """Exact residual of the chain-coefficient recurrence.

    c_m^(p+2) = c_{m-2}^(p) / (m (m-1)) + c_{m-1}^(p) (2m+1)/(2m) for
    m >= 2, with out-of-range chain coefficients read as zero.
    """
    if p < 0:
        raise ValueError(f"p must be >= 0, got {p}")
    if not 2 <= m <= p + 2:
        raise ValueError(f"m must satisfy 2 <= m <= p + 2, got m={m}, p={p}")

    def c_or_zero(pp: int, mm: int) -> Fraction:
        if 0 <= mm <= pp:
            return c_coefficient(pp, mm)
        return Fraction(0)

    residual = (
        c_coefficient(p + 2, m)
        - c_or_zero(p, m - 2) / (m * (m - 1))
        - c_or_zero(p, m - 1) * Fraction(2 * m + 1, 2 * m)
    )
    return RelationResidual(
        identity=Identity.C_RECURRENCE,
        inputs={"p": p, "m": m},
        residual=residual,
        tolerance=None,
        passed=residual == 0,
    )


def terminating_3f2_residual(q: int, m: int, n: int) -> RelationResidual:
    """Exact residual of the terminating hypergeometric reduction.

    The alternating finite sum over p of
    (2q-p)! / (p! (q-p)! (p-2m-n)!) (2n-p+2m+2)_{2p-4m-2n}
    collapses to a product of Pochhammer symbols.  Holds for m >= 1 and
    q >= 2m + n; the m = 0 stratum is excluded (the closed form's
    1/(m-1)! normalization is not defined there).
    """
    if m < 1:
        raise ValueError(f"the reduction needs m >= 1, got m={m}")
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if q < 2 * m + n:
        raise ValueError(f"need q >= 2m + n, got q={q}, m={m}, n={n}")
    lhs = Fraction(0)
    for p in range(2 * m + n, q + 1):
        sign = -1 if p % 2 else 1
        lhs += (
            Fraction(
                sign * math.factorial(2 * q - p),
                math.factorial(p)
                * math.factorial(q - p)
                * math.factorial(p - 2 * m - n),
            )
            * pochhammer(2 * n - p + 2 * m + 2, 2 * p - 4 * m - 2 * n)
        )
    sign_n = -1 if n % 2 else 1
    rhs = (
        Fraction(sign_n * 2 ** (2 * q - 4 * m - 2 * n), math.factorial(m - 1))
        * pochhammer(q - 2 * m - n + 1, m - 1)
        * pochhammer(Fraction(2 * m + 2 * n + 3, 2), q - 2 * m - n)
    )
    residual = lhs - rhs
    return RelationResidual(
        identity=Identity.TERMINATING_3F2,
        inputs={"q": q, "m": m, "n": n},
        residual=residual,
        tolerance=None,
        passed=residual == 0,
    )


# --------------------------------------------------------------------------
# Suite runner


def run_suite(
    max_p: int = 6,
    max_ell: int = 60,
    z_values: tuple[float, ...] = _SUITE_Z_VALUES,
) -> list[RelationResidual]:
    """Run every identity check over the standard grid, deterministically.

    Pointwise identities sweep k, ell = 1..max_ell for each z; the
    master-relation defect sweeps ell = 1..min(30, max_ell) for the four
    simple families and the hierarchy families with order <= max_p.  The
    exact identities always run at their full caps (q <= 12 orthogonality,
    p <= 10 chain recurrence, q <= 10 hypergeometric reduction); they are
    independent of the floating-point grid.
    """
    if max_p < 0 or max_ell < 1:
        raise ValueError(
            f"need max_p >= 0 and max_ell >= 1, got max_p={max_p}, max_ell={max_ell}"
        )
    z_values = tuple(float(z) for z in z_values)
    if not z_values:
        raise ValueError("z_values must contain at least one point")
    for z in z_values:
        if not z > 0:
            raise ValueError(f"z values must be > 0, got {z}")
    results: list[RelationResidual] = []
    families = seven_families(max_p)
    defect_ell_max = min(_DEFECT_ELL_MAX, max_ell)
    for z in z_values:
        bessel = spherical_j_sequence(max_ell + 1, z)
        for k in range(1, max_ell + 1):
            results.append(four_term_residual(k, bessel))
        for ell in range(1, max_ell + 1):
            results.append(product_identity_residual(ell, bessel))
        for family in families:
            for ell in range(1, defect_ell_max + 1):
                results.append(master_relation_residual(family, ell, z, bessel))
    for family in families:
        results.append(coefficient_family_consistency(family, max_ell))
    for q in range(_ORTHOGONALITY_Q_MAX + 1):
        for m in range(q + 1):
            results.append(orthogonality_residual(m, q))
    for p in range(_C_RECURRENCE_P_MAX + 1):
        for m in range(2, p + 3):
            results.append(c_recurrence_residual(p, m))
    for q in range(2, _HYPERGEOMETRIC_Q_MAX + 1):
        for m in range(1, q // 2 + 1):
            for n in range(q - 2 * m + 1):
                results.append(terminating_3f2_residual(q, m, n))
    return results
