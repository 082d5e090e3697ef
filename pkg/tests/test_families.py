"""Family constructors, theta closed forms, and the theorem-level predicates."""

import random
from fractions import Fraction

import pytest

from liefol.algebra import ConstraintError, MetricFrame, StructureError, jacobi_residual
from liefol.families import (
    FamilyId,
    FamilySpec,
    assemble_family_table,
    build_family,
    build_so2_raw_setup,
    closed_form_minimal,
    closed_form_theta,
    closed_form_totally_geodesic,
    family_basis_names,
    family_dimension,
    family_parameter_names,
    so2_conformality_constraint,
    totally_geodesic_conditions,
)
from liefol.geometry import classify

F = Fraction

ALL_FAMILIES = list(FamilyId)
SEMISIMPLE = [FamilyId.SU2, FamilyId.SL2R, FamilyId.SU2xSU2, FamilyId.SU2xSL2R]
CIRCLE = [FamilyId.SU2xSO2, FamilyId.SL2RxSO2]


class TestSpecCreation:
    def test_defaults_to_zero_and_riemannian(self):
        spec = FamilySpec.create("su2")
        assert all(v == 0 for v in spec.params.values())
        assert spec.signature.is_riemannian
        assert tuple(spec.params) == family_parameter_names(FamilyId.SU2)

    def test_unknown_parameter_rejected(self):
        with pytest.raises(StructureError, match="unknown parameter"):
            FamilySpec.create("su2", {"s14": 1})

    def test_unknown_family_rejected(self):
        with pytest.raises(StructureError, match="unknown family"):
            FamilySpec.create("so3")

    def test_signature_length_checked(self):
        with pytest.raises(StructureError):
            FamilySpec.create("su2", signature=(1, 1, 1))

    def test_rational_strings_accepted(self):
        spec = FamilySpec.create("sl2r", {"b11": "3/4", "rho": "-2"})
        assert spec.params["b11"] == F(3, 4)
        assert spec.params["rho"] == F(-2)

    def test_theta4_defaults_to_determined_value(self):
        spec = FamilySpec.create("su2xso2", {"x1": 1, "y2": 1, "rho": 2, "t24": 2})
        assert spec.params["theta4"] == F(0)  # rho*t14/(x1+y2) with t14 = 0
        # rho = t14 = 1, x1 = y2 = 1, y1 = 1, x2 = -1 (Riemannian class):
        # the residual relations force t24 = 0 and theta4 = rho*t14/2 = 1/2.
        spec2 = FamilySpec.create(
            "su2xso2", {"x1": 1, "y2": 1, "y1": 1, "x2": -1, "t14": 1, "rho": 1}
        )
        assert spec2.params["theta4"] == F(1, 2)
        build_family(spec2)  # feasible stratum with rho, t14, theta4 all nonzero

    def test_basis_names_and_dims(self):
        assert family_dimension(FamilyId.SU2xSU2) == 8
        assert family_basis_names(FamilyId.SU2xSO2) == ("A", "B", "C", "T", "X", "Y")


class TestClosedFormTheta:
    def test_zero_params_zero_theta(self):
        assert closed_form_theta(FamilySpec.create("su2")) == (F(0), F(0), F(0))

    def test_su2_substitution(self):
        # b11 = 2, c22 = 3, rho = 0: only the middle entry survives, = b11*c22/2.
        spec = FamilySpec.create("su2", {"b11": 2, "c22": 3})
        assert closed_form_theta(spec) == (F(0), F(3), F(0))

    def test_sl2r_sign_pattern(self):
        spec = FamilySpec.create("sl2r", {"rho": 1, "c12": 1})
        # theta1 = (-rho*c12 - b11*c21 + b21*c11)/2 = -1/2
        assert closed_form_theta(spec)[0] == F(-1, 2)

    def test_su2xsl2r_theta4(self):
        spec = FamilySpec.create("su2xsl2r", {"rho": 1, "t15": 1})
        theta = closed_form_theta(spec)
        assert theta[3] == F(-1, 2)
        assert theta[:3] == (F(0), F(0), F(0))

    def test_circle_family_length_four(self):
        spec = FamilySpec.create("su2xso2", {"b11": 1})
        assert len(closed_form_theta(spec)) == 4


class TestBuildFamily:
    def test_su2_zero_params_is_direct_product(self):
        setup = build_family(FamilySpec.create("su2"))
        for i in range(3):
            assert not any(setup.tensor.row(i, 3))
            assert not any(setup.tensor.row(i, 4))
        assert not any(setup.tensor.row(3, 4))

    def test_su2xsu2_rows(self):
        setup = build_family(FamilySpec.create("su2xsu2", {"b11": 1, "s14": 1}))
        assert setup.tensor.row(0, 6) == (F(0), F(-1), F(0), F(0), F(0), F(0), F(0), F(0))
        assert setup.tensor.row(1, 6) == (F(1), F(0), F(0), F(0), F(0), F(0), F(0), F(0))
        assert setup.tensor.row(3, 6) == (F(0), F(0), F(0), F(0), F(-1), F(0), F(0), F(0))
        assert setup.tensor.row(4, 6) == (F(0), F(0), F(0), F(1), F(0), F(0), F(0), F(0))

    def test_sl2rxso2_t_row(self):
        spec = FamilySpec.create("sl2rxso2", {"x1": 1, "y2": 1, "c12": 1})
        setup = build_family(spec)
        row = setup.tensor.row(3, 4)  # [T, X]
        assert row[0] == F(-1, 2)
        assert row[4] == F(1)

    @pytest.mark.parametrize("family", ALL_FAMILIES)
    def test_random_draws_satisfy_jacobi(self, family):
        from liefol.verifier import _draw_semisimple_params, _draw_so2_params

        rng = random.Random(f"families-{family.value}")
        for _ in range(25):
            if family in CIRCLE:
                sig = tuple(rng.choice((1, -1)) for _ in range(6))
                s = sig[-2] * sig[-1]
                base, x2s, _ = _draw_so2_params(rng, family, 8, (s,))
                spec = FamilySpec.create(family, {**base, "x2": x2s[s]}, sig)
            else:
                dim = family_dimension(family)
                sig = tuple(rng.choice((1, -1)) for _ in range(dim))
                params = {
                    name: F(rng.randint(-8, 8), rng.randint(1, 8))
                    for name in family_parameter_names(family)
                }
                spec = FamilySpec.create(family, params, sig)
            setup = build_family(spec)
            assert jacobi_residual(setup.tensor).is_zero

    def test_semisimple_tables_ignore_signature(self):
        params = {"b11": 1, "c22": F(2, 3), "rho": F(-1, 5)}
        t1 = build_family(FamilySpec.create("su2", params, (1,) * 5)).tensor
        t2 = build_family(FamilySpec.create("su2", params, (1, -1, -1, 1, -1))).tensor
        assert t1 == t2


class TestCircleConstraints:
    def test_lemma_relations_rejected(self):
        with pytest.raises(ConstraintError) as err:
            build_family(FamilySpec.create("su2xso2", {"x1": 1, "y2": 2}))
        assert err.value.relation == "x1 = y2"
        with pytest.raises(ConstraintError) as err:
            build_family(FamilySpec.create("su2xso2", {"x2": 1}))
        assert err.value.relation == "eps_X*x2 + eps_Y*y1 = 0"

    def test_residual_relation_rejected(self):
        # x1 = y2 = 1 with t14 = 1 violates t14*y2 = (rho + t24)*y1.
        with pytest.raises(ConstraintError) as err:
            build_family(FamilySpec.create("su2xso2", {"x1": 1, "y2": 1, "t14": 1}))
        assert "t14*y2" in err.value.relation

    def test_theta4_constraint_checked(self):
        # x1 = 0 stratum: theta4 free, but rho*t14 must vanish.
        with pytest.raises(ConstraintError) as err:
            build_family(FamilySpec.create("su2xso2", {"rho": 1, "t14": 1}))
        assert "theta4" in err.value.relation
        # and a wrong explicit theta4 on the determined stratum is rejected
        with pytest.raises(ConstraintError):
            build_family(
                FamilySpec.create("su2xso2", {"x1": 1, "y2": 1, "theta4": 5})
            )

    def test_feasible_nontrivial_strata_build(self):
        # x1 != 0 with t24 = rho (y1 = x2 = 0).
        spec = FamilySpec.create(
            "su2xso2", {"x1": 2, "y2": 2, "rho": F(1, 3), "t24": F(1, 3), "b11": 1}
        )
        setup = build_family(spec)
        assert jacobi_residual(setup.tensor).is_zero
        # mixed-horizontal stratum with eps_X eps_Y = -1: t14 = t24, rho = 0.
        spec2 = FamilySpec.create(
            "su2xso2",
            {"x1": 1, "y2": 1, "y1": 1, "x2": 1, "t14": F(1, 2), "t24": F(1, 2)},
            signature=(1, 1, 1, 1, 1, -1),
        )
        assert jacobi_residual(build_family(spec2).tensor).is_zero

    def test_variant_switch(self):
        spec = FamilySpec.create("sl2rxso2", {"x1": 1, "y2": 1, "c11": 1})
        tx = assemble_family_table(spec, table_variant="tx")
        ty = assemble_family_table(spec, table_variant="ty")
        assert jacobi_residual(tx).is_zero
        assert not jacobi_residual(ty).is_zero
        assert build_family(spec).tensor == tx
        with pytest.raises(ConstraintError):
            build_family(spec, table_variant="ty")
        with pytest.raises(StructureError, match="table_variant"):
            build_family(FamilySpec.create("su2"), table_variant="ty")


class TestSo2ConformalityConstraint:
    def test_plain_cases(self):
        frame = MetricFrame((1, 1, 1, 1, 1, 1))
        assert so2_conformality_constraint(frame, 5, 0, 0, 5)
        assert not so2_conformality_constraint(frame, 5, 3, 3, 5)

    def test_mixed_signature_cancellation(self):
        frame = MetricFrame((1, 1, 1, 1, 1, -1))
        assert so2_conformality_constraint(frame, 2, 3, 3, 2)
        frame2 = MetricFrame((1, 1, 1, 1, 1, 1))
        assert not so2_conformality_constraint(frame2, 2, 3, 3, 2)


class TestClosedFormMinimal:
    def test_semisimple_always_minimal(self):
        for family in SEMISIMPLE:
            spec = FamilySpec.create(family, {"b11": 7, "rho": 3})
            assert closed_form_minimal(spec)

    def test_circle_families_need_zero_t(self):
        assert not closed_form_minimal(FamilySpec.create("su2xso2", {"t14": 1}))
        assert not closed_form_minimal(FamilySpec.create("sl2rxso2", {"t24": F(1, 2)}))
        assert closed_form_minimal(FamilySpec.create("sl2rxso2", {"b11": 9}))


class TestClosedFormTotallyGeodesic:
    def test_su2_riemannian_always(self):
        rng = random.Random(11)
        for _ in range(10):
            params = {
                name: F(rng.randint(-9, 9), rng.randint(1, 9))
                for name in family_parameter_names(FamilyId.SU2)
            }
            assert closed_form_totally_geodesic(FamilySpec.create("su2", params))

    def test_sl2r_riemannian_b11_breaks(self):
        assert not closed_form_totally_geodesic(FamilySpec.create("sl2r", {"b11": 1}))
        assert not closed_form_totally_geodesic(FamilySpec.create("sl2r", {"b21": 1}))
        assert not closed_form_totally_geodesic(FamilySpec.create("sl2r", {"c11": 1}))

    def test_sl2r_riemannian_c12_does_not_break(self):
        # The gamma2 pair pairs with eps_C - eps_B, which vanishes at the
        # Riemannian signature; verified against the geometric classifier.
        spec = FamilySpec.create("sl2r", {"c12": 1})
        assert closed_form_totally_geodesic(spec)
        assert classify(build_family(spec)).totally_geodesic

    def test_su2xsu2_mixed_signature(self):
        spec = FamilySpec.create("su2xsu2", {"b11": 1}, (1, -1, 1, 1, 1, 1, 1, 1))
        assert not closed_form_totally_geodesic(spec)

    def test_condition_labels_match_fast_predicate(self):
        rng = random.Random(12)
        from liefol.verifier import _draw_semisimple_params, _draw_so2_params

        for family in ALL_FAMILIES:
            for _ in range(10):
                dim = family_dimension(family)
                sig = tuple(rng.choice((1, -1)) for _ in range(dim))
                if family in CIRCLE:
                    s = sig[-2] * sig[-1]
                    base, x2s, _ = _draw_so2_params(rng, family, 5, (s,))
                    spec = FamilySpec.create(family, {**base, "x2": x2s[s]}, sig)
                else:
                    spec = FamilySpec.create(
                        family, _draw_semisimple_params(rng, family, 5), sig
                    )
                listed = all(v == 0 for _, v in totally_geodesic_conditions(spec))
                assert listed == closed_form_totally_geodesic(spec)

    def test_circle_family_x_conditions(self):
        # Nontrivially conformal: x1 != 0 couples to the block coefficients.
        spec = FamilySpec.create(
            "su2xso2", {"x1": 1, "y2": 1, "rho": 0, "t24": 0, "c12": 1}
        )
        assert not closed_form_totally_geodesic(spec)  # x1*c12 + y1*c22 = 1
        report = classify(build_family(spec))
        assert not report.totally_geodesic


class TestRawAnsatz:
    def test_only_circle_families(self):
        with pytest.raises(StructureError):
            build_so2_raw_setup(FamilyId.SU2, (1,) * 5, {})

    def test_lemma_biconditional_spot_checks(self):
        rng = random.Random(13)
        for _ in range(20):
            sig = tuple(rng.choice((1, -1)) for _ in range(6))
            s = sig[-2] * sig[-1]
            coeffs = {
                name: F(rng.randint(-5, 5), rng.randint(1, 5))
                for name in ("t11", "t12", "t23", "theta1", "theta4", "a12", "b23", "rho")
            }
            x1 = F(rng.randint(-5, 5), rng.randint(1, 5))
            y1 = F(rng.randint(-5, 5), rng.randint(1, 5))
            good = dict(coeffs, x1=x1, y2=x1, y1=y1, x2=-s * y1)
            setup = build_so2_raw_setup(FamilyId.SU2xSO2, sig, good)
            assert classify(setup, require_jacobi=False).conformal
            bad = dict(coeffs, x1=x1, y2=x1 + 1, y1=y1, x2=-s * y1)
            setup_bad = build_so2_raw_setup(FamilyId.SL2RxSO2, sig, bad)
            assert not classify(setup_bad, require_jacobi=False).conformal
