"""Constructors for the six classified foliation families and their closed-form predicates.

Each family fixes a basis (A, B, C[, R, S, T | , T], X, Y) with the vertical
subalgebra spanned by everything except the horizontal pair {X, Y}.  The two
simple 3-dimensional block types differ in one bracket sign ([B,C] = +-2A) and
in the sign pattern of the [A, X]-type mixed rows; the theta coefficients of
[X, Y] are determined by the Jacobi identity and carry a closed form per block.

For the families with a central circle factor T, the Jacobi identity imposes
three relations beyond the conformality constraint (x1 = y2 and
eps_X x2 + eps_Y y1 = 0):

    t14*x2 + rho*y2 - t24*x1 = 0
    t14*y2 - (rho + t24)*y1 = 0
    (x1 + y2)*theta4 = rho*t14

Constructors reject parameter sets violating any of these, naming the relation.
theta4 is determined when x1 + y2 != 0 and free otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Mapping, Sequence

from .algebra import (
    ConstraintError,
    FoliationSetup,
    MetricFrame,
    ScalarLike,
    StructureError,
    StructureTensor,
    as_scalar,
    jacobi_residual,
)

ZERO = Fraction(0)
HALF = Fraction(1, 2)
TWO = Fraction(2)


class FamilyId(str, Enum):
    SU2 = "su2"
    SL2R = "sl2r"
    SU2xSU2 = "su2xsu2"
    SU2xSL2R = "su2xsl2r"
    SU2xSO2 = "su2xso2"
    SL2RxSO2 = "sl2rxso2"

    @classmethod
    def parse(cls, text: str) -> "FamilyId":
        try:
            return cls(text.lower())
        except ValueError:
            known = ", ".join(f.value for f in cls)
            raise StructureError(f"unknown family {text!r}; known families: {known}") from None


# (block types, has circle factor). Block types drive bracket signs and the
# theta closed form; offsets are 0 and 3.
_BLOCKS = {
    FamilyId.SU2: (("su2",), False),
    FamilyId.SL2R: (("sl2r",), False),
    FamilyId.SU2xSU2: (("su2", "su2"), False),
    FamilyId.SU2xSL2R: (("su2", "sl2r"), False),
    FamilyId.SU2xSO2: (("su2",), True),
    FamilyId.SL2RxSO2: (("sl2r",), True),
}

_BASIS_NAMES = {
    FamilyId.SU2: ("A", "B", "C", "X", "Y"),
    FamilyId.SL2R: ("A", "B", "C", "X", "Y"),
    FamilyId.SU2xSU2: ("A", "B", "C", "R", "S", "T", "X", "Y"),
    FamilyId.SU2xSL2R: ("A", "B", "C", "R", "S", "T", "X", "Y"),
    FamilyId.SU2xSO2: ("A", "B", "C", "T", "X", "Y"),
    FamilyId.SL2RxSO2: ("A", "B", "C", "T", "X", "Y"),
}

_BLOCK1_PARAMS = ("b11", "b21", "c11", "c12", "c21", "c22")
_BLOCK2_PARAMS = ("s14", "s24", "t14", "t15", "t24", "t25")
_SO2_PARAMS = ("x1", "x2", "y1", "y2", "t14", "t24", "theta4")


def family_dimension(family: FamilyId) -> int:
    return len(_BASIS_NAMES[family])


def family_basis_names(family: FamilyId) -> tuple[str, ...]:
    return _BASIS_NAMES[family]


def family_parameter_names(family: FamilyId) -> tuple[str, ...]:
    blocks, has_so2 = _BLOCKS[family]
    names = _BLOCK1_PARAMS + (_BLOCK2_PARAMS if len(blocks) == 2 else ())
    names = names + ("rho",)
    if has_so2:
        names = names + _SO2_PARAMS
    return names


@dataclass(frozen=True)
class FamilySpec:
    """A family id, its free coefficients, and a signature for the full algebra."""

    family: FamilyId
    params: dict[str, Fraction]
    signature: MetricFrame

    def __post_init__(self):
        expected = family_parameter_names(self.family)
        if tuple(self.params.keys()) != expected:
            extra = set(self.params) - set(expected)
            missing = set(expected) - set(self.params)
            raise StructureError(
                f"{self.family.value} parameters must be exactly {expected} in order"
                + (f"; unexpected {sorted(extra)}" if extra else "")
                + (f"; missing {sorted(missing)}" if missing else "")
            )
        if any(not isinstance(v, Fraction) for v in self.params.values()):
            raise StructureError("parameters must be exact rationals; use FamilySpec.create")
        if self.signature.dim != family_dimension(self.family):
            raise StructureError(
                f"signature has dim {self.signature.dim}, "
                f"{self.family.value} needs {family_dimension(self.family)}"
            )

    @classmethod
    def create(
        cls,
        family: FamilyId | str,
        params: Mapping[str, ScalarLike] | None = None,
        signature: MetricFrame | Sequence[int] | None = None,
        *,
        float_tolerance: Fraction | None = None,
    ) -> "FamilySpec":
        """Normalize: unknown names rejected, missing names default to zero.

        For the circle-factor families theta4 defaults to its determined value
        rho*t14/(x1 + y2) when x1 + y2 != 0, and to 0 (the free direction)
        otherwise.
        """
        fam = FamilyId.parse(family) if isinstance(family, str) else family
        dim = family_dimension(fam)
        if signature is None:
            frame = MetricFrame((1,) * dim)
        elif isinstance(signature, MetricFrame):
            frame = signature
        else:
            frame = MetricFrame(tuple(int(e) for e in signature))
        given = dict(params or {})
        expected = family_parameter_names(fam)
        unknown = set(given) - set(expected)
        if unknown:
            raise StructureError(
                f"unknown parameter(s) {sorted(unknown)} for family {fam.value}; "
                f"expected a subset of {expected}"
            )
        values = {
            name: as_scalar(given[name], float_tolerance=float_tolerance) if name in given else ZERO
            for name in expected
        }
        if "theta4" in expected and "theta4" not in given:
            span = values["x1"] + values["y2"]
            if span:
                values["theta4"] = values["rho"] * values["t14"] / span
        return cls(fam, values, frame)

    def param(self, name: str) -> Fraction:
        return self.params[name]


def _theta_block_su2(bx, c1x, c2x, by, c1y, c2y, rho) -> tuple[Fraction, Fraction, Fraction]:
    return (
        HALF * (-rho * c2x + bx * c1y - by * c1x),
        HALF * (rho * c1x + bx * c2y - by * c2x),
        HALF * (-rho * bx + c1x * c2y - c1y * c2x),
    )


def _theta_block_sl2(bx, c1x, c2x, by, c1y, c2y, rho) -> tuple[Fraction, Fraction, Fraction]:
    return (
        HALF * (-rho * c2x - bx * c1y + by * c1x),
        HALF * (-rho * c1x - bx * c2y + by * c2x),
        HALF * (rho * bx - c1x * c2y + c2x * c1y),
    )


def _block_params(spec: FamilySpec, block_index: int) -> tuple[Fraction, ...]:
    names = _BLOCK1_PARAMS if block_index == 0 else _BLOCK2_PARAMS
    b_x, b_y, c1_x, c2_x, c1_y, c2_y = (spec.params[n] for n in names)
    return b_x, c1_x, c2_x, b_y, c1_y, c2_y


def closed_form_theta(spec: FamilySpec) -> tuple[Fraction, ...]:
    """The [X, Y] vertical coefficients: 3 per simple block, plus theta4 for circle factors."""
    blocks, has_so2 = _BLOCKS[spec.family]
    rho = spec.params["rho"]
    theta: list[Fraction] = []
    for idx, kind in enumerate(blocks):
        fn = _theta_block_su2 if kind == "su2" else _theta_block_sl2
        bx, c1x, c2x, by, c1y, c2y = _block_params(spec, idx)
        theta.extend(fn(bx, c1x, c2x, by, c1y, c2y, rho))
    if has_so2:
        theta.append(spec.params["theta4"])
    return tuple(theta)


def so2_conformality_constraint(
    signature: MetricFrame, x1: ScalarLike, y1: ScalarLike, x2: ScalarLike, y2: ScalarLike
) -> bool:
    """Exact test of x1 = y2 and eps_X x2 + eps_Y y1 = 0 (X, Y = last two frame slots)."""
    eps_x, eps_y = signature.epsilon[-2], signature.epsilon[-1]
    x1, y1, x2, y2 = (as_scalar(v) for v in (x1, y1, x2, y2))
    return x1 == y2 and eps_x * x2 + eps_y * y1 == 0


def so2_residual_relations(spec: FamilySpec) -> list[tuple[str, Fraction]]:
    """The circle-factor Jacobi relations beyond the conformality constraint.

    Each entry is (relation text, residual value); the table is a Lie algebra
    iff every residual vanishes (given the conformality constraint and the
    closed-form thetas).
    """
    p = spec.params
    x1, x2, y1, y2 = p["x1"], p["x2"], p["y1"], p["y2"]
    t14, t24, rho, theta4 = p["t14"], p["t24"], p["rho"], p["theta4"]
    return [
        ("t14*x2 + rho*y2 - t24*x1 = 0", t14 * x2 + rho * y2 - t24 * x1),
        ("t14*y2 - (rho + t24)*y1 = 0", t14 * y2 - (rho + t24) * y1),
        ("(x1 + y2)*theta4 = rho*t14", (x1 + y2) * theta4 - rho * t14),
    ]


def _simple_block_rows(
    rows: dict, kind: str, offset: int, h_index: int, beta, gamma1, gamma2
) -> None:
    """Mixed rows [A,h], [B,h], [C,h] of one simple block (su2 flips the [A,h] sign)."""
    a, b, c = offset, offset + 1, offset + 2
    sign = -1 if kind == "su2" else 1

    def vec(*pairs):
        out = [ZERO] * rows["__dim__"]
        for idx, val in pairs:
            out[idx] = val
        return out

    rows[(a, h_index)] = vec((b, sign * beta), (c, sign * gamma1))
    rows[(b, h_index)] = vec((a, beta), (c, -gamma2))
    rows[(c, h_index)] = vec((a, gamma1), (b, gamma2))


def _base_block_rows(rows: dict, kind: str, offset: int) -> None:
    a, b, c = offset, offset + 1, offset + 2
    dim = rows["__dim__"]

    def vec(idx, val):
        out = [ZERO] * dim
        out[idx] = val
        return out

    rows[(a, b)] = vec(c, TWO)
    rows[(a, c)] = vec(b, -TWO)  # [C, A] = 2B
    rows[(b, c)] = vec(a, TWO if kind == "su2" else -TWO)


def _so2_row_pattern(
    family: FamilyId, table_variant: str, spec: FamilySpec, u: Fraction, v: Fraction
) -> tuple[Fraction, Fraction, Fraction]:
    """A, B, C components of a [T, h] row with horizontal coefficients (u, v)."""
    p = spec.params
    pa = -HALF * (u * p["c12"] + v * p["c22"])
    qb = HALF * (u * p["c11"] + v * p["c21"])
    rc = -HALF * (u * p["b11"] + v * p["b21"])
    if family is FamilyId.SL2RxSO2 and table_variant == "tx":
        qb, rc = -qb, -rc
    return pa, qb, rc


def assemble_family_table(
    spec: FamilySpec,
    *,
    table_variant: str = "tx",
    theta_override: Sequence[Fraction] | None = None,
) -> StructureTensor:
    """Assemble the bracket table without any Jacobi or constraint validation.

    `table_variant` only matters for the sl2r x so2 family, whose two candidate
    sign patterns for the [T, X] / [T, Y] rows are labelled "tx" (the pattern
    the Jacobi identity selects) and "ty" (the rejected one); see build_family.
    `theta_override` substitutes arbitrary [X, Y] vertical coefficients in
    place of the closed form (used by the theta-solving oracle).
    """
    if table_variant not in ("tx", "ty"):
        raise StructureError(f"table_variant must be 'tx' or 'ty', got {table_variant!r}")
    blocks, has_so2 = _BLOCKS[spec.family]
    dim = family_dimension(spec.family)
    rows: dict = {"__dim__": dim}
    x_index, y_index = dim - 2, dim - 1
    for idx, kind in enumerate(blocks):
        offset = 3 * idx
        _base_block_rows(rows, kind, offset)
        bx, c1x, c2x, by, c1y, c2y = _block_params(spec, idx)
        _simple_block_rows(rows, kind, offset, x_index, bx, c1x, c2x)
        _simple_block_rows(rows, kind, offset, y_index, by, c1y, c2y)

    theta = theta_override if theta_override is not None else closed_form_theta(spec)
    if len(theta) != dim - 2:
        raise StructureError(f"theta must have {dim - 2} entries, got {len(theta)}")
    xy = [ZERO] * dim
    xy[x_index] = spec.params["rho"]
    for k, th in enumerate(theta):
        xy[k] = th
    rows[(x_index, y_index)] = xy

    if has_so2:
        t_index = 3
        p = spec.params
        for h_index, (u, v, t_diag) in (
            (x_index, (p["x1"], p["y1"], p["t14"])),
            (y_index, (p["x2"], p["y2"], p["t24"])),
        ):
            pa, qb, rc = _so2_row_pattern(spec.family, table_variant, spec, u, v)
            row = [ZERO] * dim
            row[0], row[1], row[2] = pa, qb, rc
            row[t_index] = t_diag
            row[x_index] = u
            row[y_index] = v
            rows[(t_index, h_index)] = row

    del rows["__dim__"]
    return StructureTensor.from_rows(dim, rows)


def _family_setup(spec: FamilySpec, tensor: StructureTensor) -> FoliationSetup:
    dim = tensor.dim
    return FoliationSetup(
        tensor=tensor,
        frame=spec.signature,
        vertical=tuple(range(dim - 2)),
        horizontal=(dim - 2, dim - 1),
    )


def build_family(spec: FamilySpec, *, table_variant: str = "auto") -> FoliationSetup:
    """Build the foliation setup for a family spec; the result satisfies Jacobi.

    Circle-factor families are validated against the conformality constraint
    (x1 = y2, eps_X x2 + eps_Y y1 = 0) and the three residual Jacobi relations;
    violations raise ConstraintError carrying the failed relation.

    For sl2r x so2 the default "auto" adopts whichever printed sign pattern of
    the [T, .] rows makes the Jacobi residual vanish; pass table_variant "tx"
    or "ty" to force a candidate (use assemble_family_table to inspect a
    candidate without validation).
    """
    blocks, has_so2 = _BLOCKS[spec.family]
    if has_so2:
        p = spec.params
        eps_x = spec.signature.epsilon[-2]
        eps_y = spec.signature.epsilon[-1]
        if p["x1"] != p["y2"]:
            raise ConstraintError(
                "x1 = y2", f"conformality constraint violated: x1 = {p['x1']}, y2 = {p['y2']}"
            )
        if eps_x * p["x2"] + eps_y * p["y1"] != 0:
            raise ConstraintError(
                "eps_X*x2 + eps_Y*y1 = 0",
                f"conformality constraint violated: "
                f"({eps_x})*{p['x2']} + ({eps_y})*{p['y1']} != 0",
            )
        for relation, value in so2_residual_relations(spec):
            if value:
                raise ConstraintError(relation, f"Jacobi-infeasible parameters: {relation} fails (residual {value})")
    variants = ("tx",)
    if spec.family is FamilyId.SL2RxSO2:
        if table_variant == "auto":
            variants = ("tx", "ty")
        else:
            variants = (table_variant,)
    elif table_variant != "auto":
        raise StructureError("table_variant is only meaningful for the sl2r x so2 family")

    last_report = None
    for variant in variants:
        tensor = assemble_family_table(spec, table_variant=variant)
        last_report = jacobi_residual(tensor)
        if last_report.is_zero:
            return _family_setup(spec, tensor)
    raise ConstraintError(
        "jacobi residual = 0",
        f"assembled table fails the Jacobi identity (max residual {last_report.max_abs} "
        f"at triple {last_report.worst_triple()}; variants tried: {variants})",
    )


def closed_form_minimal(spec: FamilySpec) -> bool:
    """Minimality criterion: unconditional for semisimple verticals, t14 = t24 = 0 otherwise."""
    _, has_so2 = _BLOCKS[spec.family]
    if not has_so2:
        return True
    return spec.params["t14"] == 0 and spec.params["t24"] == 0


def _block_tg_conditions(
    spec: FamilySpec, kind: str, offset: int, block_index: int
) -> list[tuple[str, Fraction]]:
    eps = spec.signature.epsilon
    names = _BASIS_NAMES[spec.family]
    ea, eb, ec = eps[offset], eps[offset + 1], eps[offset + 2]
    na, nb, nc = names[offset], names[offset + 1], names[offset + 2]
    bx, c1x, c2x, by, c1y, c2y = _block_params(spec, block_index)
    pnames = _BLOCK1_PARAMS if block_index == 0 else _BLOCK2_PARAMS
    # su2-type rows pair with differences of causal characters, the sl2r-type
    # [A,.] rows flip to sums; the gamma2 pair keeps the difference either way.
    s = -1 if kind == "su2" else 1
    sign_ab = "-" if s < 0 else "+"
    return [
        (f"(eps_{nb} {sign_ab} eps_{na}) * {pnames[0]}", (eb + s * ea) * bx),
        (f"(eps_{nb} {sign_ab} eps_{na}) * {pnames[1]}", (eb + s * ea) * by),
        (f"(eps_{nc} {sign_ab} eps_{na}) * {pnames[2]}", (ec + s * ea) * c1x),
        (f"(eps_{nc} {sign_ab} eps_{na}) * {pnames[4]}", (ec + s * ea) * c1y),
        (f"(eps_{nc} - eps_{nb}) * {pnames[3]}", (ec - eb) * c2x),
        (f"(eps_{nc} - eps_{nb}) * {pnames[5]}", (ec - eb) * c2y),
    ]


def totally_geodesic_conditions(spec: FamilySpec) -> list[tuple[str, Fraction]]:
    """The family's exact condition list: totally geodesic iff every value is zero."""
    blocks, has_so2 = _BLOCKS[spec.family]
    conditions: list[tuple[str, Fraction]] = []
    for idx, kind in enumerate(blocks):
        conditions.extend(_block_tg_conditions(spec, kind, 3 * idx, idx))
    if has_so2:
        p = spec.params
        conditions.append(("t14", p["t14"]))
        conditions.append(("t24", p["t24"]))
        for u_name, v_name in (("x1", "y1"), ("x2", "y2")):
            u, v = p[u_name], p[v_name]
            for lhs, rhs in (("c12", "c22"), ("c11", "c21"), ("b11", "b21")):
                conditions.append(
                    (f"{u_name}*{lhs} + {v_name}*{rhs}", u * p[lhs] + v * p[rhs])
                )
    return conditions


def closed_form_totally_geodesic(spec: FamilySpec) -> bool:
    # Same predicate as totally_geodesic_conditions, short-circuited and
    # label-free for sweep loops (the factors eps_i +- eps_j are 0 or +-2).
    blocks, has_so2 = _BLOCKS[spec.family]
    eps = spec.signature.epsilon
    p = spec.params
    for idx, kind in enumerate(blocks):
        offset = 3 * idx
        s = -1 if kind == "su2" else 1
        ea, eb, ec = eps[offset], eps[offset + 1], eps[offset + 2]
        bx, c1x, c2x, by, c1y, c2y = _block_params(spec, idx)
        if (eb + s * ea) and (bx or by):
            return False
        if (ec + s * ea) and (c1x or c1y):
            return False
        if (ec - eb) and (c2x or c2y):
            return False
    if has_so2:
        if p["t14"] or p["t24"]:
            return False
        for u_name, v_name in (("x1", "y1"), ("x2", "y2")):
            u, v = p[u_name], p[v_name]
            if not (u or v):
                continue
            for lhs, rhs in (("c12", "c22"), ("c11", "c21"), ("b11", "b21")):
                if u * p[lhs] + v * p[rhs]:
                    return False
    return True


_RAW_SO2_COEFFS = (
    "a11", "a12", "a13", "a14", "a21", "a22", "a23", "a24",
    "b11", "b12", "b13", "b14", "b21", "b22", "b23", "b24",
    "c11", "c12", "c13", "c14", "c21", "c22", "c23", "c24",
    "t11", "t12", "t13", "t14", "t21", "t22", "t23", "t24",
    "x1", "x2", "y1", "y2", "rho", "theta1", "theta2", "theta3", "theta4",
)


def build_so2_raw_setup(
    family: FamilyId,
    signature: MetricFrame | Sequence[int],
    coeffs: Mapping[str, ScalarLike],
) -> FoliationSetup:
    """The unreduced circle-factor ansatz: generic vertical-valued mixed rows.

    No Jacobi constraints are imposed (the result is usually not a Lie
    algebra); this is the table on which the conformality criterion
    x1 = y2, eps_X x2 + eps_Y y1 = 0 is a biconditional.  Classify it with
    require_jacobi=False.
    """
    if family not in (FamilyId.SU2xSO2, FamilyId.SL2RxSO2):
        raise StructureError("raw ansatz only exists for the circle-factor families")
    unknown = set(coeffs) - set(_RAW_SO2_COEFFS)
    if unknown:
        raise StructureError(f"unknown raw coefficients {sorted(unknown)}")
    v = {name: as_scalar(coeffs.get(name, ZERO)) for name in _RAW_SO2_COEFFS}
    frame = signature if isinstance(signature, MetricFrame) else MetricFrame(tuple(int(e) for e in signature))
    if frame.dim != 6:
        raise StructureError("circle-factor families are six dimensional")
    dim = 6
    rows: dict = {"__dim__": dim}
    kind = "su2" if family is FamilyId.SU2xSO2 else "sl2r"
    _base_block_rows(rows, kind, 0)
    del rows["__dim__"]

    def vec(entries):
        out = [ZERO] * dim
        for idx, val in entries:
            out[idx] = val
        return out

    for row_idx, prefix in ((0, "a"), (1, "b"), (2, "c")):
        rows[(row_idx, 4)] = vec(
            [(k, v[f"{prefix}1{k + 1}"]) for k in range(4)]
        )
        rows[(row_idx, 5)] = vec(
            [(k, v[f"{prefix}2{k + 1}"]) for k in range(4)]
        )
    rows[(3, 4)] = vec(
        [(k, v[f"t1{k + 1}"]) for k in range(4)] + [(4, v["x1"]), (5, v["y1"])]
    )
    rows[(3, 5)] = vec(
        [(k, v[f"t2{k + 1}"]) for k in range(4)] + [(4, v["x2"]), (5, v["y2"])]
    )
    rows[(4, 5)] = vec(
        [(0, v["theta1"]), (1, v["theta2"]), (2, v["theta3"]), (3, v["theta4"]), (4, v["rho"])]
    )
    tensor = StructureTensor.from_rows(dim, rows)
    return FoliationSetup(tensor=tensor, frame=frame, vertical=(0, 1, 2, 3), horizontal=(4, 5))
