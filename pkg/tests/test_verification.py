"""Machine verification layer: residual checks and the exact identities."""

import math
from fractions import Fraction

import pytest

from bessel_sum_rules import (
    CoefficientFamily,
    Identity,
    RelationResidual,
    c_recurrence_residual,
    coefficient_family_consistency,
    four_term_residual,
    master_relation_defect,
    master_relation_residual,
    orthogonality_residual,
    product_identity_residual,
    run_suite,
    seven_families,
    spherical_j_sequence,
    terminating_3f2_residual,
)


# --------------------------------------------------------------------------
# pointwise recurrence identities


@pytest.mark.parametrize(("k", "z"), [(1, 3.0), (2, 1.0), (5, 20.0), (30, 0.5)])
def test_four_term_recurrence(k, z):
    res = four_term_residual(k, spherical_j_sequence(k + 1, z))
    assert res.identity is Identity.FOUR_TERM_RECURRENCE
    assert res.passed
    assert res.inputs == {"k": k, "z": z}


def test_four_term_recurrence_rejects_k_zero():
    with pytest.raises(ValueError, match="k = 1"):
        four_term_residual(0, spherical_j_sequence(2, 1.0))


def test_four_term_recurrence_needs_order_k_plus_one():
    with pytest.raises(ValueError, match="need 0..6"):
        four_term_residual(5, spherical_j_sequence(5, 1.0))


@pytest.mark.parametrize(("ell", "z"), [(1, 1.0), (10, 5.0), (1, 1e-4), (40, 60.0)])
def test_product_identity(ell, z):
    res = product_identity_residual(ell, spherical_j_sequence(ell + 1, z))
    assert res.identity is Identity.PRODUCT_IDENTITY
    assert res.passed


def test_product_identity_rejects_ell_zero():
    with pytest.raises(ValueError, match="ell >= 1"):
        product_identity_residual(0, spherical_j_sequence(2, 1.0))


# --------------------------------------------------------------------------
# coefficient families


def test_family_constructors_and_labels():
    assert CoefficientFamily.ones().label == "ones"
    assert CoefficientFamily.h2(3).label == "h2(p=3)"
    fam = CoefficientFamily.alternating_quadratic()
    assert fam.p is None


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(kind="ones", p=1),
        dict(kind="h1"),
        dict(kind="h2", p=-1),
        dict(kind="mystery"),
    ],
)
def test_family_rejects_bad_kinds(kwargs):
    with pytest.raises(ValueError):
        CoefficientFamily(**kwargs)


def test_seven_families_enumeration():
    families = seven_families(2)
    assert len(families) == 4 + 3 * 3
    labels = [f.label for f in families]
    assert labels[:4] == ["ones", "linear", "alternating", "alternating_quadratic"]
    assert "h3(p=2)" in labels


def test_generator_values_are_exact_fractions():
    fam = CoefficientFamily.h1(1)
    for k in (-1, 0, 3):
        assert isinstance(fam.a(k), Fraction)
    assert isinstance(fam.f(2), Fraction)
    assert isinstance(fam.g(2), Fraction)


def test_linear_family_generator():
    fam = CoefficientFamily.linear()
    assert [fam.a(k) for k in (-1, 0, 1, 5)] == [-1, 0, 1, 5]
    # f_k = (2k+1)(a_{k+1} - a_k) = 2k+1
    assert [fam.f(k) for k in range(4)] == [1, 3, 5, 7]


@pytest.mark.parametrize("family", seven_families(4))
def test_family_consistency_is_exact(family):
    res = coefficient_family_consistency(family, 30)
    assert res.identity is Identity.FAMILY_CONSISTENCY
    assert res.residual == 0
    assert res.passed


def test_family_consistency_rejects_negative_k_max():
    with pytest.raises(ValueError):
        coefficient_family_consistency(CoefficientFamily.ones(), -1)


# --------------------------------------------------------------------------
# master relation


@pytest.mark.parametrize("family", seven_families(3))
@pytest.mark.parametrize(("ell", "z"), [(1, 0.5), (5, 2.0), (12, 20.0)])
def test_master_relation_ell_independence(family, ell, z):
    res = master_relation_residual(family, ell, z)
    assert res.identity is Identity.MASTER_RELATION
    assert res.passed


def test_master_relation_defect_equals_family_tail():
    # The ell-independent defect is the family's constant term F(z).
    cases = [
        (CoefficientFamily.ones(), 5, 2.0),
        (CoefficientFamily.linear(), 8, 1.0),
        (CoefficientFamily.alternating(), 6, 3.0),
        (CoefficientFamily.alternating_quadratic(), 7, 2.5),
        (CoefficientFamily.h1(2), 9, 4.0),
    ]
    for family, ell, z in cases:
        defect, scale = master_relation_defect(family, ell, z)
        assert abs(defect - family.tail(z)) <= 1e-12 * max(scale, 1.0)


def test_ones_family_tail_value():
    # F(z) = -4 z j_1(2z) for the all-ones family.
    z = 2.0
    j1_2z = spherical_j_sequence(1, 2 * z)[1]
    assert CoefficientFamily.ones().tail(z) == pytest.approx(-4.0 * z * j1_2z)


@pytest.mark.parametrize("p", range(4))
def test_hierarchy_families_have_zero_tail(p):
    for fam in (CoefficientFamily.h2(p), CoefficientFamily.h3(p)):
        assert fam.tail(3.0) == 0.0
        defect, scale = master_relation_defect(fam, p + 5, 3.0)
        assert abs(defect) <= 1e-12 * max(scale, 1.0)


def test_master_relation_validation():
    fam = CoefficientFamily.ones()
    with pytest.raises(ValueError, match="ell >= 1"):
        master_relation_residual(fam, 0, 1.0)
    with pytest.raises(ValueError, match="ell must be >= 0"):
        master_relation_defect(fam, -1, 1.0)
    with pytest.raises(ValueError, match="need 0..4"):
        master_relation_defect(fam, 3, 1.0, spherical_j_sequence(3, 1.0))


# --------------------------------------------------------------------------
# exact identities


@pytest.mark.parametrize("q", range(9))
def test_orthogonality_rows(q):
    for m in range(q + 1):
        res = orthogonality_residual(m, q)
        assert res.identity is Identity.WEIGHT_ORTHOGONALITY
        assert res.residual == 0
        assert res.passed


def test_orthogonality_domain():
    with pytest.raises(ValueError):
        orthogonality_residual(3, 2)
    with pytest.raises(ValueError):
        orthogonality_residual(-1, 2)


@pytest.mark.parametrize("p", range(7))
def test_c_recurrence_rows(p):
    for m in range(2, p + 3):
        res = c_recurrence_residual(p, m)
        assert res.identity is Identity.C_RECURRENCE
        assert res.residual == 0
        assert res.passed


def test_c_recurrence_domain():
    with pytest.raises(ValueError):
        c_recurrence_residual(-1, 2)
    with pytest.raises(ValueError):
        c_recurrence_residual(2, 1)
    with pytest.raises(ValueError):
        c_recurrence_residual(2, 5)


def test_terminating_3f2_rows():
    for q in range(2, 9):
        for m in range(1, q // 2 + 1):
            for n in range(q - 2 * m + 1):
                res = terminating_3f2_residual(q, m, n)
                assert res.identity is Identity.TERMINATING_3F2
                assert res.residual == 0
                assert res.passed


def test_terminating_3f2_domain():
    with pytest.raises(ValueError, match="m >= 1"):
        terminating_3f2_residual(4, 0, 0)
    with pytest.raises(ValueError, match="n must be >= 0"):
        terminating_3f2_residual(4, 1, -1)
    with pytest.raises(ValueError, match="q >= 2m"):
        terminating_3f2_residual(3, 1, 2)


# --------------------------------------------------------------------------
# suite runner


def test_run_suite_small_grid_all_pass():
    results = run_suite(max_p=1, max_ell=8, z_values=(1.0, 5.0))
    assert results
    assert all(isinstance(r, RelationResidual) for r in results)
    assert all(r.passed for r in results)
    seen = {r.identity for r in results}
    assert seen == set(Identity)


def test_run_suite_is_deterministic():
    first = run_suite(max_p=0, max_ell=4, z_values=(2.0,))
    second = run_suite(max_p=0, max_ell=4, z_values=(2.0,))
    assert first == second


def test_run_suite_rejects_empty_grid():
    with pytest.raises(ValueError):
        run_suite(max_p=0, max_ell=4, z_values=())
