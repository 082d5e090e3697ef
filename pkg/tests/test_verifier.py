"""Theta oracle, sweep harness, counterexample search."""

import json
import random
from fractions import Fraction

import pytest

from liefol.algebra import StructureError
from liefol.families import (
    FamilyId,
    FamilySpec,
    build_family,
    build_so2_raw_setup,
    closed_form_theta,
    family_dimension,
    family_parameter_names,
)
from liefol.geometry import classify
from liefol.verifier import (
    SweepConfig,
    enumerate_signatures,
    find_conjecture_counterexamples,
    oracle_conformal_from_definition,
    oracle_solve_theta,
    run_sweep,
    _draw_so2_params,
)

F = Fraction


class TestThetaOracle:
    def test_zero_params_unique_zero(self):
        sol = oracle_solve_theta(FamilySpec.create("su2"))
        assert sol.status == "unique"
        assert sol.theta == (F(0), F(0), F(0))

    def test_su2_matches_closed_form(self):
        spec = FamilySpec.create("su2", {"b11": 2, "c22": 3})
        sol = oracle_solve_theta(spec)
        assert sol.status == "unique"
        assert sol.theta == closed_form_theta(spec) == (F(0), F(3), F(0))

    def test_circle_family_free_direction(self):
        spec = FamilySpec.create("su2xso2", {"b11": 1, "c22": F(1, 2), "t14": 1})
        sol = oracle_solve_theta(spec)
        assert sol.status == "affine"
        assert sol.dimension == 1
        assert sol.free_directions == ((F(0), F(0), F(0), F(1)),)
        assert sol.theta[:3] == closed_form_theta(spec)[:3]

    def test_circle_family_determined_theta4(self):
        spec = FamilySpec.create(
            "su2xso2", {"x1": 1, "y2": 1, "y1": 1, "x2": -1, "t14": 1, "rho": 1}
        )
        sol = oracle_solve_theta(spec)
        assert sol.status == "unique"
        assert sol.theta[3] == F(1, 2) == spec.params["theta4"]

    def test_infeasible_parameters_detected(self):
        # x1 = 0 stratum with x2 = 1, y1 = -1 (Riemannian lemma ok), t14 = 1:
        # the X component of the (T, X, Y) identity cannot be fixed by theta.
        spec = FamilySpec.create("su2xso2", {"x2": 1, "y1": -1, "t14": 1})
        sol = oracle_solve_theta(spec)
        assert sol.status == "infeasible"

    def test_sl2rxso2_rejected_variant_infeasible(self):
        spec = FamilySpec.create("sl2rxso2", {"x1": 1, "y2": 1, "c11": 1})
        assert oracle_solve_theta(spec, table_variant="tx").status != "infeasible"
        assert oracle_solve_theta(spec, table_variant="ty").status == "infeasible"

    @pytest.mark.parametrize("family", list(FamilyId))
    def test_matches_closed_form_on_random_specs(self, family):
        rng = random.Random(f"oracle-{family.value}")
        from liefol.verifier import _draw_semisimple_params

        for _ in range(8):
            dim = family_dimension(family)
            sig = tuple(rng.choice((1, -1)) for _ in range(dim))
            if family in (FamilyId.SU2xSO2, FamilyId.SL2RxSO2):
                s = sig[-2] * sig[-1]
                base, x2s, _ = _draw_so2_params(rng, family, 6, (s,))
                spec = FamilySpec.create(family, {**base, "x2": x2s[s]}, sig)
            else:
                spec = FamilySpec.create(family, _draw_semisimple_params(rng, family, 6), sig)
            sol = oracle_solve_theta(spec)
            closed = closed_form_theta(spec)
            if sol.status == "unique":
                assert sol.theta == closed
            else:
                assert sol.status == "affine"
                assert sol.dimension == 1
                # the closed form lies on the solution line (theta4 direction)
                assert sol.theta[:3] == closed[:3]
                assert sol.free_directions[0][:3] == (F(0), F(0), F(0))


class TestSignatureEnumeration:
    def test_all_mode_counts(self):
        config = SweepConfig(family=FamilyId.SU2, samples=1, seed=0)
        assert len(enumerate_signatures(config)) == 32

    def test_riemannian_mode(self):
        config = SweepConfig(
            family=FamilyId.SU2, samples=1, seed=0, signature_mode="riemannian-only"
        )
        assert enumerate_signatures(config) == ((1, 1, 1, 1, 1),)

    def test_fixed_mode_validation(self):
        with pytest.raises(StructureError):
            SweepConfig(family=FamilyId.SU2, samples=1, seed=0, signature_mode="fixed")
        with pytest.raises(StructureError):
            SweepConfig(
                family=FamilyId.SU2,
                samples=1,
                seed=0,
                signature_mode="fixed",
                fixed_signatures=((1, 1, 1),),
            )

    def test_config_validation(self):
        with pytest.raises(StructureError):
            SweepConfig(family=FamilyId.SU2, samples=0, seed=0)
        with pytest.raises(StructureError):
            SweepConfig(family=FamilyId.SU2, samples=1, seed=0, parameter_range=0)


class TestRunSweep:
    def test_su2_all_signatures_agrees(self):
        report = run_sweep(SweepConfig(family=FamilyId.SU2, samples=60, seed=3))
        assert report.total_cases == 60 * 32
        assert report.agreements == report.total_cases
        assert report.disagreements == ()
        assert report.flag_counts["conformal"] == report.total_cases
        assert report.flag_counts["semiRiemannian"] == report.total_cases
        assert report.flag_counts["minimal"] == report.total_cases
        assert report.minimality_counterexample_count == 0

    def test_su2_riemannian_only_all_geodesic(self):
        report = run_sweep(
            SweepConfig(
                family=FamilyId.SU2, samples=80, seed=4, signature_mode="riemannian-only"
            )
        )
        assert report.flag_counts["totallyGeodesic"] == report.total_cases
        assert report.tg_counterexample_count == 0

    def test_fixed_split_signature_yields_counterexamples(self):
        config = SweepConfig(
            family=FamilyId.SU2,
            samples=40,
            seed=5,
            signature_mode="fixed",
            fixed_signatures=((1, -1, 1, 1, 1),),
        )
        report = run_sweep(config)
        assert report.disagreements == ()
        assert report.tg_counterexample_count > 0
        entry = report.tg_counterexamples[0]
        assert entry["compactType"] is True
        assert entry["violatedCondition"] is not None

    def test_circle_family_minimality_biconditional_exercised(self):
        report = run_sweep(SweepConfig(family=FamilyId.SU2xSO2, samples=60, seed=6))
        assert report.disagreements == ()
        assert 0 < report.flag_counts["minimal"] < report.total_cases
        assert report.resampled_draws >= 0

    def test_determinism_byte_identical(self):
        config = SweepConfig(family=FamilyId.SL2R, samples=40, seed=42)
        a = run_sweep(config).to_json()
        b = run_sweep(config).to_json()
        assert a == b

    def test_json_fields_pinned(self):
        report = run_sweep(SweepConfig(family=FamilyId.SU2, samples=5, seed=0))
        doc = json.loads(report.to_json())
        for key in (
            "totalCases",
            "agreements",
            "disagreements",
            "conjectureCounterexamples",
            "minimalityCounterexamples",
        ):
            assert key in doc
        assert doc["agreements"] + len(doc["disagreements"]) == doc["totalCases"]


class TestSo2Sampling:
    def test_draws_satisfy_constraints(self):
        rng = random.Random(9)
        for _ in range(30):
            base, x2s, _ = _draw_so2_params(rng, FamilyId.SU2xSO2, 8, (1, -1))
            assert base["y2"] == base["x1"]
            for s, x2 in x2s.items():
                assert x2 == -s * base["y1"]
                spec = FamilySpec.create(
                    FamilyId.SU2xSO2,
                    {
                        name: ({**base, "x2": x2}[name])
                        for name in family_parameter_names(FamilyId.SU2xSO2)
                    },
                    (1, 1, 1, 1, 1, s),
                )
                build_family(spec)  # must not raise


class TestCounterexampleSearch:
    def test_su2_split_signature_finds_witnesses(self):
        config = SweepConfig(
            family=FamilyId.SU2,
            samples=25,
            seed=7,
            signature_mode="fixed",
            fixed_signatures=((1, -1, 1, 1, 1),),
        )
        hits = find_conjecture_counterexamples(config)
        assert hits
        for entry in hits[:5]:
            spec = FamilySpec.create(
                FamilyId.SU2,
                {k: F(v) if "/" not in v else F(*map(int, v.split("/"))) for k, v in entry["params"].items()},
                tuple(entry["signature"]),
            )
            report = classify(build_family(spec))
            assert report.conformal and not report.totally_geodesic
            assert report.minimal
            assert entry["compactType"] is True

    def test_named_example_is_a_counterexample(self):
        spec = FamilySpec.create("su2", {"b11": 1}, (1, -1, 1, 1, 1))
        report = classify(build_family(spec))
        assert report.conformal and report.semi_riemannian
        assert not report.totally_geodesic
        assert report.bv[(0, 1)][3] == F(-1)  # sff_V(A, B) = -eps_X X

    def test_riemannian_mode_empty_for_su2(self):
        config = SweepConfig(
            family=FamilyId.SU2, samples=25, seed=8, signature_mode="riemannian-only"
        )
        assert find_conjecture_counterexamples(config) == []

    def test_su2xsu2_split_second_block(self):
        # eps_T = -eps_R with t14 != 0 breaks geodesy in the second block.
        sig = (1, 1, 1, 1, 1, -1, 1, 1)
        spec = FamilySpec.create("su2xsu2", {"t14": 1}, sig)
        report = classify(build_family(spec))
        assert report.conformal and report.semi_riemannian and report.minimal
        assert not report.totally_geodesic
        pairs = [pair for pair, _ in report.totally_geodesic_witnesses]
        assert (3, 5) in pairs  # sff_V(R, T) != 0
        config = SweepConfig(
            family=FamilyId.SU2xSU2,
            samples=10,
            seed=8,
            signature_mode="fixed",
            fixed_signatures=(sig,),
        )
        hits = find_conjecture_counterexamples(config)
        assert hits
        assert all(entry["compactType"] is True for entry in hits)

    def test_circle_families_rejected(self):
        config = SweepConfig(family=FamilyId.SU2xSO2, samples=5, seed=0)
        with pytest.raises(StructureError, match="semisimple"):
            find_conjecture_counterexamples(config)

    def test_sl2r_riemannian_still_finds_geodesy_failures(self):
        config = SweepConfig(
            family=FamilyId.SL2R, samples=25, seed=9, signature_mode="riemannian-only"
        )
        hits = find_conjecture_counterexamples(config)
        assert hits
        assert all(entry["compactType"] is False for entry in hits)
        assert all(entry["minimal"] for entry in hits)


class TestConformalityOracle:
    def test_agrees_with_classifier(self):
        rng = random.Random(10)
        from liefol.verifier import _draw_semisimple_params

        for _ in range(15):
            family = rng.choice(list(FamilyId))
            dim = family_dimension(family)
            sig = tuple(rng.choice((1, -1)) for _ in range(dim))
            if family in (FamilyId.SU2xSO2, FamilyId.SL2RxSO2):
                s = sig[-2] * sig[-1]
                base, x2s, _ = _draw_so2_params(rng, family, 5, (s,))
                spec = FamilySpec.create(family, {**base, "x2": x2s[s]}, sig)
            else:
                spec = FamilySpec.create(family, _draw_semisimple_params(rng, family, 5), sig)
            setup = build_family(spec)
            report = classify(setup, require_jacobi=False)
            by_definition, vector = oracle_conformal_from_definition(setup)
            assert by_definition == report.conformal
            if by_definition:
                assert vector == report.conformal_vector

    def test_detects_non_conformal_raw_tables(self):
        setup = build_so2_raw_setup(FamilyId.SU2xSO2, (1,) * 6, {"x1": 3, "y2": 1})
        ok, vector = oracle_conformal_from_definition(setup)
        assert not ok and vector is None
        assert not classify(setup, require_jacobi=False).conformal
