"""Exact rational coefficients for the sum-rule hierarchies.

Every weight and boundary-polynomial coefficient in this package is a
rational number built from Pochhammer products over integer or
half-integer starts, factorials, and small combinatorial sums.  These are
generated here in exact `fractions.Fraction` arithmetic; conversion to
floating point happens only at evaluation time in `sum_rules`.  The
alternating sums behind hierarchy 3 involve binomial-scale terms, so
generating them in floats would silently lose digits.

The three hierarchies share one right-hand-side shape,

    z^2 A(z) j_ell(z)^2 + z^2 B(z) j_{ell+1}(z)^2
        + z C(z) j_ell(z) j_{ell+1}(z) + tail,

where A, B, C are polynomials in z^2 (hierarchies 2 and 3) or in 1/z^2
(hierarchy 1), and B at ell equals A at ell-1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cache

__all__ = [
    "Hierarchy",
    "BoundaryPolynomials",
    "pochhammer",
    "c_coefficient",
    "f_weight",
    "lhs_weight",
    "alternating_composite_weight",
    "boundary_polynomials",
    "composite_boundary",
    "composite_step_brackets",
]


class Hierarchy(Enum):
    """The three sum-rule families, plus the alternating composite rule.

    Weight of j_k^2 on the left-hand side:

    - H1: (2k+1) / (k-p-1/2)_{2p+3}, summed over k >= 0
    - H2: (2k+1) (k-p+1)_{2p}, summed over k >= p
    - H3: (-1)^k (2k+1) (k-p+1)_{2p}, summed over k >= p
    - H3_COMPOSITE: (-1)^k (2k+1) sum_m c_m^(p) (k-m+1)_{2m}, over k >= 0

    The value of each member is its CLI token.
    """

    H1 = "1"
    H2 = "2"
    H3 = "3"
    H3_COMPOSITE = "3c"


def _half(twice: int) -> Fraction:
    return Fraction(twice, 2)


def pochhammer(start: int | Fraction, n: int) -> Fraction:
    """Rising factorial (start)_n = start (start+1) ... (start+n-1), exact.

    Extended to n = -1 by (f)_{-1} = 1/(f-1), the Gamma-ratio continuation;
    the pole at f = 1 is a hard error. n < -1 is rejected.
    """
    f = Fraction(start)
    if n < -1:
        raise ValueError(f"pochhammer order must be >= -1, got {n}")
    if n == -1:
        if f == 1:
            raise ValueError("pochhammer(1, -1) is a pole")
        return 1 / (f - 1)
    # Factors are (a + i*b)/b with a, b integers, so zero detection and the
    # running product are exact integer arithmetic.
    a, b = f.numerator, f.denominator
    num = 1
    for i in range(n):
        num *= a + i * b
    return Fraction(num, b**n)


@cache
def c_coefficient(p: int, m: int) -> Fraction:
    """Weight c_m^(p) = (2m-p+2)_{2p-2m} / (2^{2p-2m} m! (p-m)!).

    These combine squared-Bessel weights of the form (k-m+1)_{2m} into the
    alternating composite rule at order p.
    """
    if p < 0:
        raise ValueError(f"p must be >= 0, got {p}")
    if not 0 <= m <= p:
        raise ValueError(f"m must satisfy 0 <= m <= p, got m={m}, p={p}")
    return pochhammer(2 * m - p + 2, 2 * p - 2 * m) / (
        2 ** (2 * p - 2 * m) * math.factorial(m) * math.factorial(p - m)
    )


@cache
def f_weight(q: int, p: int) -> Fraction:
    """Combination weight f_p^(q) = (-1)^{p+q} q! (2q-p)! / (2^{2q-2p} p! (q-p)!).

    Inverts the c_m^(p) triangle: sum_{p=m}^{q} f_p^(q) c_m^(p) = delta_{m,q},
    which is how the hierarchy-3 rule at order q is assembled from composite
    rules of orders <= q.
    """
    if q < 0:
        raise ValueError(f"q must be >= 0, got {q}")
    if not 0 <= p <= q:
        raise ValueError(f"p must satisfy 0 <= p <= q, got p={p}, q={q}")
    sign = -1 if (p + q) % 2 else 1
    return Fraction(
        sign * math.factorial(q) * math.factorial(2 * q - p),
        2 ** (2 * q - 2 * p) * math.factorial(p) * math.factorial(q - p),
    )


@cache
def lhs_weight(hierarchy: Hierarchy, p: int, k: int) -> Fraction:
    """Exact weight of j_k(z)^2 in the hierarchy's left-hand side.

    For H2/H3 with k < p the Pochhammer (k-p+1)_{2p} contains a zero factor
    and the weight is exactly 0.  The composite rule's weight is assembled
    separately from :func:`alternating_composite_weight`.
    """
    if p < 0 or k < 0:
        raise ValueError(f"p and k must be >= 0, got p={p}, k={k}")
    if hierarchy is Hierarchy.H1:
        return (2 * k + 1) / pochhammer(_half(2 * (k - p) - 1), 2 * p + 3)
    if hierarchy is Hierarchy.H2:
        return (2 * k + 1) * pochhammer(k - p + 1, 2 * p)
    if hierarchy is Hierarchy.H3:
        sign = -1 if k % 2 else 1
        return sign * (2 * k + 1) * pochhammer(k - p + 1, 2 * p)
    raise ValueError(
        "lhs_weight covers hierarchies 1/2/3; build the composite weight "
        "from alternating_composite_weight"
    )


@cache
def alternating_composite_weight(p: int, k: int) -> Fraction:
    """Inner weight sum_{m=0}^{p} c_m^(p) (k-m+1)_{2m} of the composite rule.

    The full j_k^2 weight is (-1)^k (2k+1) times this.
    """
    if p < 0 or k < 0:
        raise ValueError(f"p and k must be >= 0, got p={p}, k={k}")
    return sum(
        (c_coefficient(p, m) * pochhammer(k - m + 1, 2 * m) for m in range(p + 1)),
        Fraction(0),
    )


@dataclass(frozen=True)
class BoundaryPolynomials:
    """Exact A/B/C polynomial coefficients of one closed-form right side.

    ``a_coeffs[m]`` multiplies the m-th power of the variable (z^2 for
    hierarchies 2/3, 1/z^2 for hierarchy 1, where the m-th list entry then
    belongs to 1/z^{2m+2}).  b_coeffs at (p, ell) equal a_coeffs at
    (p, ell-1).
    """

    hierarchy: Hierarchy
    p: int
    ell: int
    variable_kind: str  # "z_squared" or "inverse_z_squared"
    a_coeffs: tuple[Fraction, ...]
    b_coeffs: tuple[Fraction, ...]
    c_coeffs: tuple[Fraction, ...]


def _h1_a(p: int, ell: int) -> tuple[Fraction, ...]:
    # Coefficient of 1/z^{2m+2} in A; the m-th term couples the falling
    # product (p-m+1)_m with half-integer Pochhammers anchored at ell.
    out = []
    for m in range(p + 1):
        num = pochhammer(p - m + 1, m)
        den = pochhammer(_half(2 * (p - m) + 1), m + 1) * pochhammer(
            _half(2 * (ell - p + m) + 3), 2 * p - 2 * m + 1
        )
        out.append(-Fraction(1, 2) * num / den)
    return tuple(out)


def _h1_c(p: int, ell: int) -> tuple[Fraction, ...]:
    out = []
    for m in range(p + 1):
        num = pochhammer(p - m + 1, m)
        den = pochhammer(_half(2 * (p - m) + 1), m + 1) * pochhammer(
            _half(2 * (ell - p + m) + 3), 2 * p - 2 * m
        )
        out.append(num / den)
    return tuple(out)


def _h2_a(p: int, ell: int) -> tuple[Fraction, ...]:
    out = []
    for k in range(p + 1):
        num = pochhammer(p - k + 1, k) * pochhammer(ell - p + k + 2, 2 * p - 2 * k)
        den = pochhammer(_half(2 * (p - k) + 1), k + 1)
        out.append(-Fraction(1, 2) * num / den)
    return tuple(out)


def _h2_c(p: int, ell: int) -> tuple[Fraction, ...]:
    out = []
    for k in range(p + 1):
        num = pochhammer(p - k + 1, k) * pochhammer(ell - p + k + 1, 2 * p - 2 * k + 1)
        den = pochhammer(_half(2 * (p - k) + 1), k + 1)
        out.append(num / den)
    return tuple(out)


def _h3_a(p: int, ell: int) -> tuple[Fraction, ...]:
    # m runs to floor((p-1)/2): empty at p = 0, where the closed form has
    # no squared-Bessel boundary terms at all.
    sign = -1 if (p + ell + 1) % 2 else 1
    out = []
    for m in range((p - 1) // 2 + 1):
        acc = Fraction(0)
        for n in range(p - 2 * m):
            term = (
                pochhammer(_half(2 * (m + n) + 3), p - 2 * m - n - 1)
                * pochhammer(p - 2 * m - n, m)
                * pochhammer(ell - n + 2, 2 * n)
            )
            term /= math.factorial(m) * math.factorial(n)
            acc += term if (m + n) % 2 == 0 else -term
        out.append(Fraction(sign, 2) * math.factorial(p) * acc)
    return tuple(out)


def _h3_c(p: int, ell: int) -> tuple[Fraction, ...]:
    # The n = 0 term carries (ell-n+2)_{2n-1} = (ell+2)_{-1} = 1/(ell+1),
    # the one place the degenerate Pochhammer extension is exercised.
    sign = -1 if (p + ell) % 2 else 1
    out = []
    for m in range(p // 2 + 1):
        acc = Fraction(0)
        for n in range(p - 2 * m + 1):
            term = (
                pochhammer(_half(2 * (m + n) + 1), p - 2 * m - n)
                * pochhammer(p - 2 * m - n + 1, m)
                * pochhammer(ell - n + 2, 2 * n - 1)
            )
            term /= math.factorial(m) * math.factorial(n)
            acc += term if (m + n) % 2 == 0 else -term
        out.append(sign * (ell + 1) * math.factorial(p) * acc)
    return tuple(out)


@cache
def boundary_polynomials(hierarchy: Hierarchy, p: int, ell: int) -> BoundaryPolynomials:
    """Exact A/B/C coefficient lists of the closed form at (hierarchy, p, ell).

    Domains: p >= 0; ell >= 0 for hierarchy 1, ell >= p for hierarchies
    2 and 3.  B is the A formula shifted down one ell, which is how the
    closed forms define it.
    """
    if not isinstance(hierarchy, Hierarchy) or hierarchy is Hierarchy.H3_COMPOSITE:
        raise ValueError(
            "boundary_polynomials covers hierarchies 1/2/3; "
            "use composite_boundary for the composite rule"
        )
    if p < 0:
        raise ValueError(f"p must be >= 0, got {p}")
    if hierarchy is Hierarchy.H1:
        if ell < 0:
            raise ValueError(f"hierarchy 1 requires ell >= 0, got {ell}")
        return BoundaryPolynomials(
            hierarchy, p, ell, "inverse_z_squared",
            _h1_a(p, ell), _h1_a(p, ell - 1), _h1_c(p, ell),
        )
    if ell < p:
        raise ValueError(f"hierarchies 2/3 require ell >= p, got ell={ell}, p={p}")
    if hierarchy is Hierarchy.H2:
        return BoundaryPolynomials(
            hierarchy, p, ell, "z_squared",
            _h2_a(p, ell), _h2_a(p, ell - 1), _h2_c(p, ell),
        )
    return BoundaryPolynomials(
        hierarchy, p, ell, "z_squared",
        _h3_a(p, ell), _h3_a(p, ell - 1), _h3_c(p, ell),
    )


@cache
def composite_step_brackets(p: int, ell: int) -> tuple[Fraction, Fraction, Fraction]:
    """Exact brackets (U_p(ell), U_p(ell-1), W_p(ell)) of the composite step.

    U_p(l) = sum_n c_n^(p)/(n+1) (l-n+1)_{2n+2} and
    W_p(l) = sum_n c_n^(p)/((n+1)(n+2)) (l-n)_{2n+3} are the coefficients of
    z^2 j_ell^2, z^2 j_{ell+1}^2 and z j_ell j_{ell+1} in the two-step
    recursion lifting the composite rule from order p to p+2.  Negative ell
    is allowed (the shifted B lists need ell-1 = -1, where every Pochhammer
    carries a zero factor and the brackets vanish).
    """
    if p < 0:
        raise ValueError(f"p must be >= 0, got {p}")

    def u_bracket(l: int) -> Fraction:
        return sum(
            (
                c_coefficient(p, n) / (n + 1) * pochhammer(l - n + 1, 2 * n + 2)
                for n in range(p + 1)
            ),
            Fraction(0),
        )

    w = sum(
        (
            c_coefficient(p, n) / ((n + 1) * (n + 2)) * pochhammer(ell - n, 2 * n + 3)
            for n in range(p + 1)
        ),
        Fraction(0),
    )
    return u_bracket(ell), u_bracket(ell - 1), w


def _composite_a(p: int, ell: int) -> tuple[Fraction, ...]:
    # Closed-form coefficient of z^{2m} in the composite A polynomial,
    # obtained by unrolling the two-step recursion down to its base rule;
    # the highest power (odd p only) comes from the parity term.
    sign = -1 if ell % 2 else 1
    out = []
    for m in range(1, p // 2 + 1):
        msign = -1 if (m + 1) % 2 else 1
        u, _, _ = composite_step_brackets(p - 2 * m, ell)
        out.append(Fraction(sign * msign, 2) * u)
    if p % 2:
        dsign = -1 if ((p - 1) // 2) % 2 else 1
        out.append(Fraction(sign * dsign, 2))
    return tuple(out)


def _composite_c(p: int, ell: int) -> tuple[Fraction, ...]:
    sign = -1 if ell % 2 else 1
    out = []
    for m in range(1, p // 2 + 1):
        msign = -1 if (m + 1) % 2 else 1
        _, _, w = composite_step_brackets(p - 2 * m, ell)
        out.append(sign * msign * (ell + 1) * w)
    if p % 2:
        dsign = -1 if ((p - 1) // 2) % 2 else 1
        out.append(sign * dsign * (ell + 1) ** 2)
    else:
        dsign = -1 if (p // 2) % 2 else 1
        out.append(Fraction(sign * dsign))
    return tuple(out)


@cache
def composite_boundary(
    p: int, ell: int
) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...], tuple[Fraction, ...]]:
    """Exact (a, b, c) lists, in z^2, of the composite rule's closed form.

    Same layout as the z_squared case of :class:`BoundaryPolynomials`; the
    tail (a parity-selected j(2z) term) is handled by the evaluator.
    """
    if p < 0 or ell < 0:
        raise ValueError(f"p and ell must be >= 0, got p={p}, ell={ell}")
    return _composite_a(p, ell), _composite_a(p, ell - 1), _composite_c(p, ell)
