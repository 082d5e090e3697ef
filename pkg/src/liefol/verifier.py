"""Independent oracles and seeded sweep harnesses.

The sweeps restate the classification theorems as machine-checked instances:
every sampled family member is classified geometrically (second fundamental
forms) and compared against the closed-form predicates, recording any
disagreement verbatim.  The theta oracle re-derives the [X, Y] coefficients by
brute-force Jacobi expansion and an exact linear solve, independently of the
closed formulas it cross-checks.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import (
    FoliationSetup,
    MetricFrame,
    StructureError,
    StructureTensor,
    format_scalar,
    jacobi_residual,
    killing_form,
)
from .families import (
    FamilyId,
    FamilySpec,
    assemble_family_table,
    build_family,
    closed_form_minimal,
    closed_form_totally_geodesic,
    family_basis_names,
    family_dimension,
    family_parameter_names,
    totally_geodesic_conditions,
)
from .geometry import FoliationReport, classify, second_fundamental_form_horizontal
from .linalg import is_negative_definite, solve_linear_system

ZERO = Fraction(0)

_SO2_FAMILIES = (FamilyId.SU2xSO2, FamilyId.SL2RxSO2)
_SEMISIMPLE_FAMILIES = (FamilyId.SU2, FamilyId.SL2R, FamilyId.SU2xSU2, FamilyId.SU2xSL2R)
_COMPACT_FAMILIES = (FamilyId.SU2, FamilyId.SU2xSU2)

# Detailed disagreement/counterexample entries kept per report; totals are exact.
DETAIL_CAP = 100

_SIGNATURE_MODES = ("all", "riemannian-only", "fixed")


@dataclass(frozen=True)
class SweepConfig:
    family: FamilyId
    samples: int
    seed: int
    parameter_range: int = 10
    signature_mode: str = "all"
    fixed_signatures: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        if self.samples < 1:
            raise StructureError("samples must be >= 1")
        if self.parameter_range < 1:
            raise StructureError("parameter_range must be >= 1")
        if self.signature_mode not in _SIGNATURE_MODES:
            raise StructureError(
                f"signature_mode must be one of {_SIGNATURE_MODES}, got {self.signature_mode!r}"
            )
        dim = family_dimension(self.family)
        if self.signature_mode == "fixed":
            if not self.fixed_signatures:
                raise StructureError("fixed signature mode needs at least one signature")
            for sig in self.fixed_signatures:
                MetricFrame(tuple(sig))
                if len(sig) != dim:
                    raise StructureError(
                        f"fixed signature {sig} has length {len(sig)}, family needs {dim}"
                    )
        elif self.fixed_signatures:
            raise StructureError("fixed_signatures only allowed with signature_mode='fixed'")


def enumerate_signatures(config: SweepConfig) -> tuple[tuple[int, ...], ...]:
    dim = family_dimension(config.family)
    if config.signature_mode == "all":
        return tuple(itertools.product((1, -1), repeat=dim))
    if config.signature_mode == "riemannian-only":
        return ((1,) * dim,)
    return config.fixed_signatures


@dataclass(frozen=True)
class SweepReport:
    config: SweepConfig
    signatures_per_draw: int
    total_cases: int
    agreements: int
    disagreements: tuple[dict, ...]
    tg_counterexamples: tuple[dict, ...]
    tg_counterexample_count: int
    minimality_counterexamples: tuple[dict, ...]
    minimality_counterexample_count: int
    resampled_draws: int
    flag_counts: dict

    @property
    def disagreement_count(self) -> int:
        return self.total_cases - self.agreements

    def to_json_dict(self) -> dict:
        cfg = {
            "family": self.config.family.value,
            "samples": self.config.samples,
            "seed": self.config.seed,
            "parameterRange": self.config.parameter_range,
            "signatureMode": self.config.signature_mode,
        }
        if self.config.fixed_signatures:
            cfg["fixedSignatures"] = [list(sig) for sig in self.config.fixed_signatures]
        return {
            "config": cfg,
            "signaturesPerDraw": self.signatures_per_draw,
            "totalCases": self.total_cases,
            "agreements": self.agreements,
            "disagreements": list(self.disagreements),
            "conjectureCounterexamples": list(self.tg_counterexamples),
            "conjectureCounterexampleCount": self.tg_counterexample_count,
            "minimalityCounterexamples": list(self.minimality_counterexamples),
            "minimalityCounterexampleCount": self.minimality_counterexample_count,
            "resampledDraws": self.resampled_draws,
            "flagCounts": dict(self.flag_counts),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2) + "\n"


def _sample_rng(seed: int, index: int) -> random.Random:
    # Per-sample stream derived from (seed, index): evaluation order never
    # changes the draws, so parallel evaluation would not change the report.
    return random.Random(f"{seed}:{index}")


def _draw_scalar(rng: random.Random, bound: int) -> Fraction:
    # p/q with p in [-bound, bound], q in [1, bound]; zeroed with probability
    # 1/4 so degenerate strata of the piecewise-linear predicates get hit.
    if rng.random() < 0.25:
        return ZERO
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def _draw_semisimple_params(rng: random.Random, family: FamilyId, bound: int) -> dict:
    return {name: _draw_scalar(rng, bound) for name in family_parameter_names(family)}


def _so2_feasible(base: dict, x2_by_class: dict) -> bool:
    x1, y1 = base["x1"], base["y1"]
    t14, t24, rho = base["t14"], base["t24"], base["rho"]
    if t14 * x1 - (rho + t24) * y1 != 0:
        return False
    if x1 == 0 and rho * t14 != 0:
        return False
    for x2 in x2_by_class.values():
        if t14 * x2 + rho * x1 - t24 * x1 != 0:
            return False
    return True


def _draw_so2_params(
    rng: random.Random, family: FamilyId, bound: int, classes: Sequence[int]
) -> tuple[dict, dict, int]:
    """Rejection-sample the Jacobi-feasible stratum; returns (params, x2 per
    eps_X*eps_Y class, rejected attempts)."""
    shared = ("b11", "b21", "c11", "c12", "c21", "c22", "rho")
    attempts = 0
    while True:
        base = {name: _draw_scalar(rng, bound) for name in shared}
        x1 = _draw_scalar(rng, bound)
        y1 = _draw_scalar(rng, bound)
        base.update(x1=x1, y1=y1, y2=x1)
        base["t14"] = _draw_scalar(rng, bound)
        base["t24"] = _draw_scalar(rng, bound)
        theta4_free = _draw_scalar(rng, bound)
        x2_by_class = {s: -s * y1 for s in classes}
        if _so2_feasible(base, x2_by_class):
            if x1 + base["y2"] != 0:
                base["theta4"] = base["rho"] * base["t14"] / (x1 + base["y2"])
            else:
                base["theta4"] = theta4_free
            return base, x2_by_class, attempts
        attempts += 1
        if attempts > 100_000:
            raise RuntimeError("so2 sampling failed to find a feasible draw")


def _ordered_params(family: FamilyId, params: dict) -> dict:
    return {name: params[name] for name in family_parameter_names(family)}


def describe_spec(spec: FamilySpec) -> dict:
    return {
        "family": spec.family.value,
        "params": {name: format_scalar(value) for name, value in spec.params.items()},
        "signature": list(spec.signature.epsilon),
    }


def _witness_entry(spec: FamilySpec, report: FoliationReport) -> dict:
    names = family_basis_names(spec.family)
    entry = describe_spec(spec)
    conditions = totally_geodesic_conditions(spec)
    violated = next((label for label, value in conditions if value != 0), None)
    witness = report.totally_geodesic_witnesses
    entry["violatedCondition"] = violated
    if witness:
        (i, j), vec = witness[0]
        entry["witnessPair"] = [names[i], names[j]]
        entry["witnessValue"] = [format_scalar(v) for v in vec]
    return entry


def run_sweep(config: SweepConfig) -> SweepReport:
    """Classify every sampled (draw, signature) case both ways and compare.

    Deterministic given the config (including the seed); disagreements are the
    machine-checked failures of the family's classification statements and are
    expected to be empty.
    """
    family = config.family
    dim = family_dimension(family)
    vertical = tuple(range(dim - 2))
    horizontal = (dim - 2, dim - 1)
    signatures = enumerate_signatures(config)
    is_so2 = family in _SO2_FAMILIES
    track_conjectures = family in _SEMISIMPLE_FAMILIES
    compact_type = family in _COMPACT_FAMILIES

    disagreements: list[dict] = []
    tg_details: list[dict] = []
    tg_count = 0
    minimality_details: list[dict] = []
    minimality_count = 0
    resampled = 0
    total = 0
    flag_counts = {"conformal": 0, "semiRiemannian": 0, "minimal": 0, "totallyGeodesic": 0}

    classes = tuple(sorted({sig[-2] * sig[-1] for sig in signatures}))
    for index in range(config.samples):
        rng = _sample_rng(config.seed, index)
        if is_so2:
            base, x2_by_class, attempts = _draw_so2_params(
                rng, family, config.parameter_range, classes
            )
            resampled += attempts
            tensor_by_class: dict[int, StructureTensor] = {}
            for s in classes:
                repr_sig = next(sig for sig in signatures if sig[-2] * sig[-1] == s)
                spec_s = FamilySpec.create(
                    family, _ordered_params(family, {**base, "x2": x2_by_class[s]}), repr_sig
                )
                tensor_by_class[s] = build_family(spec_s).tensor
        else:
            params = _draw_semisimple_params(rng, family, config.parameter_range)
            spec0 = FamilySpec.create(family, params, signatures[0])
            tensor = build_family(spec0).tensor

        for sig in signatures:
            if is_so2:
                s = sig[-2] * sig[-1]
                case_params = _ordered_params(family, {**base, "x2": x2_by_class[s]})
                case_tensor = tensor_by_class[s]
            else:
                case_params = params
                case_tensor = tensor
            spec = FamilySpec.create(family, case_params, sig)
            setup = FoliationSetup(case_tensor, spec.signature, vertical, horizontal)
            report = classify(setup, require_jacobi=False)
            cf_minimal = closed_form_minimal(spec)
            cf_tg = closed_form_totally_geodesic(spec)
            expected_semi = (spec.params["x1"] == 0) if is_so2 else True

            total += 1
            for flag, value in (
                ("conformal", report.conformal),
                ("semiRiemannian", report.semi_riemannian),
                ("minimal", report.minimal),
                ("totallyGeodesic", report.totally_geodesic),
            ):
                if value:
                    flag_counts[flag] += 1

            agrees = (
                report.conformal
                and report.semi_riemannian == expected_semi
                and report.minimal == cf_minimal
                and report.totally_geodesic == cf_tg
            )
            if not agrees:
                entry = describe_spec(spec)
                entry["geometric"] = {
                    "conformal": report.conformal,
                    "semiRiemannian": report.semi_riemannian,
                    "minimal": report.minimal,
                    "totallyGeodesic": report.totally_geodesic,
                }
                entry["closedForm"] = {
                    "conformal": True,
                    "semiRiemannian": expected_semi,
                    "minimal": cf_minimal,
                    "totallyGeodesic": cf_tg,
                }
                disagreements.append(entry)

            if track_conjectures and report.conformal:
                if not report.totally_geodesic:
                    tg_count += 1
                    if len(tg_details) < DETAIL_CAP:
                        detail = _witness_entry(spec, report)
                        detail["compactType"] = compact_type
                        tg_details.append(detail)
                if not report.minimal:
                    minimality_count += 1
                    if len(minimality_details) < DETAIL_CAP:
                        detail = describe_spec(spec)
                        detail["meanCurvature"] = [
                            format_scalar(v) for v in report.mean_curvature
                        ]
                        minimality_details.append(detail)

    return SweepReport(
        config=config,
        signatures_per_draw=len(signatures),
        total_cases=total,
        agreements=total - len(disagreements),
        disagreements=tuple(disagreements),
        tg_counterexamples=tuple(tg_details),
        tg_counterexample_count=tg_count,
        minimality_counterexamples=tuple(minimality_details),
        minimality_counterexample_count=minimality_count,
        resampled_draws=resampled,
        flag_counts=flag_counts,
    )


def find_conjecture_counterexamples(config: SweepConfig) -> list[dict]:
    """Search for conformal, semisimple-vertical members that are not totally geodesic.

    Only meaningful for the semisimple families (the premise needs a
    semisimple subgroup); every hit is rebuilt from scratch and re-verified
    through the geometric classifier before being returned.
    """
    family = config.family
    if family not in _SEMISIMPLE_FAMILIES:
        raise StructureError(
            f"{family.value} has a non-semisimple vertical subalgebra; "
            "the conjecture premise requires a semisimple one"
        )
    signatures = enumerate_signatures(config)
    results: list[dict] = []
    for index in range(config.samples):
        rng = _sample_rng(config.seed, index)
        params = _draw_semisimple_params(rng, family, config.parameter_range)
        for sig in signatures:
            spec = FamilySpec.create(family, params, sig)
            setup = build_family(spec)
            report = classify(setup, require_jacobi=False)
            if not (report.conformal and not report.totally_geodesic):
                continue
            kform = killing_form(setup.tensor, setup.vertical)
            entry = _witness_entry(spec, report)
            entry["compactType"] = is_negative_definite(kform)
            entry["semisimpleVertical"] = True
            entry["minimal"] = report.minimal
            results.append(entry)
    return results


@dataclass(frozen=True)
class ThetaSolution:
    """Solution set of the [X, Y] coefficients under the Jacobi identity."""

    status: str  # "unique" | "affine" | "infeasible"
    theta: tuple[Fraction, ...] | None
    free_directions: tuple[tuple[Fraction, ...], ...]

    @property
    def dimension(self) -> int:
        return len(self.free_directions)


def _jacobi_flat(tensor: StructureTensor) -> list[Fraction]:
    report = jacobi_residual(tensor)
    lookup = dict(report.violations)
    dim = tensor.dim
    flat: list[Fraction] = []
    zero_row = (ZERO,) * dim
    for i in range(dim):
        for j in range(i + 1, dim):
            for k in range(j + 1, dim):
                flat.extend(lookup.get((i, j, k), zero_row))
    return flat


def oracle_solve_theta(spec: FamilySpec, *, table_variant: str = "tx") -> ThetaSolution:
    """Solve for the [X, Y] vertical coefficients directly from the Jacobi identity.

    The residual is affine in theta (theta only enters the [X, Y] row, and the
    vertical factor it multiplies is central or a bracket partner at most
    once), so probing theta = 0 and the unit vectors assembles an exact linear
    system.  Independent of closed_form_theta.
    """
    m = family_dimension(spec.family) - 2
    zero_theta = (ZERO,) * m
    base = _jacobi_flat(assemble_family_table(spec, table_variant=table_variant, theta_override=zero_theta))
    columns = []
    one = Fraction(1)
    for pos in range(m):
        probe = tuple(one if t == pos else ZERO for t in range(m))
        flat = _jacobi_flat(
            assemble_family_table(spec, table_variant=table_variant, theta_override=probe)
        )
        columns.append([f - b for f, b in zip(flat, base)])
    rows = [[columns[c][r] for c in range(m)] for r in range(len(base))]
    rhs = [-b for b in base]
    solution = solve_linear_system(rows, rhs)
    if solution.status == "infeasible":
        return ThetaSolution("infeasible", None, ())
    return ThetaSolution(solution.status, solution.particular, solution.nullspace)


def oracle_conformal_from_definition(
    setup: FoliationSetup,
) -> tuple[bool, tuple[Fraction, ...] | None]:
    """Definition-level conformality: a single vertical V with sff_H = g (x) V.

    Checks the three independent horizontal pairs directly against a candidate
    V; cross-checks the frame criteria used by classify.
    """
    bh = second_fundamental_form_horizontal(setup)
    eps_x = setup.eps(setup.x_index)
    eps_y = setup.eps(setup.y_index)
    candidate = tuple(eps_x * v for v in bh.xx)  # g(X,X) V = sff_H(X,X)
    if any(bh.xy):
        return False, None
    if any(b != eps_y * v for b, v in zip(bh.yy, candidate)):
        return False, None
    return True, candidate
