"""Exact structure-constant algebra: bracket tables, Jacobi residuals, Killing forms.

Everything here is exact rational arithmetic (`fractions.Fraction`).  The
classification predicates downstream are algebraic identities, so no floats
enter the core; float input must pass through :func:`as_scalar` with an
explicit tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Scalar = Fraction
ScalarLike = Union[Fraction, int, str, float]

ZERO = Fraction(0)


class StructureError(ValueError):
    """Invalid algebraic input: bad shapes, antisymmetry or partition violations."""


class JacobiError(ValueError):
    """An operation required a Lie algebra but the table fails the Jacobi identity."""


class ConstraintError(StructureError):
    """A family constraint is violated; `relation` names the failed relation."""

    def __init__(self, relation: str, message: str | None = None):
        super().__init__(message or f"constraint violated: {relation}")
        self.relation = relation


def as_scalar(value: ScalarLike, *, float_tolerance: Fraction | None = None) -> Fraction:
    """Convert a value to an exact rational.

    Strings must be integer or "p/q" literals.  Floats are rejected unless
    `float_tolerance` is given, in which case the nearest rational within the
    tolerance (smallest denominator) is returned.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise StructureError(f"not a scalar: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if any(ch in text for ch in ".eE") and not text.lstrip("+-").isdigit():
            raise StructureError(f"not an exact rational literal: {value!r}")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise StructureError(f"not an exact rational literal: {value!r}") from exc
    if isinstance(value, float):
        if float_tolerance is None:
            raise StructureError(
                f"float {value!r} rejected: exact pipeline, pass float_tolerance to convert"
            )
        tol = Fraction(float_tolerance)
        if tol <= 0:
            raise StructureError("float_tolerance must be positive")
        exact = Fraction(value)
        approx = exact.limit_denominator(max(1, math.ceil(1 / tol)))
        if abs(approx - exact) > tol:
            raise StructureError(f"no rational within {tol} of {value!r}")
        return approx
    raise StructureError(f"not a scalar: {value!r}")


def format_scalar(value: Fraction) -> str:
    """Render a rational as "p" or "p/q" (the canonical exact text form)."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _as_vector(entries: Iterable[ScalarLike], dim: int, what: str) -> tuple[Fraction, ...]:
    vec = tuple(as_scalar(v) for v in entries)
    if len(vec) != dim:
        raise StructureError(f"{what} has length {len(vec)}, expected {dim}")
    return vec


@dataclass(frozen=True)
class StructureTensor:
    """Antisymmetric bracket coefficients c[i][j][k]: [e_i, e_j] = sum_k c[i][j][k] e_k."""

    dim: int
    c: tuple[tuple[tuple[Fraction, ...], ...], ...]

    def __post_init__(self):
        if self.dim < 1:
            raise StructureError(f"dim must be positive, got {self.dim}")
        if len(self.c) != self.dim or any(
            len(row) != self.dim or any(len(v) != self.dim for v in row) for row in self.c
        ):
            raise StructureError("structure table is not dim x dim x dim")
        for i in range(self.dim):
            for j in range(i, self.dim):
                for k in range(self.dim):
                    if self.c[i][j][k] != -self.c[j][i][k]:
                        raise StructureError(
                            f"antisymmetry violated at c[{i}][{j}][{k}] "
                            f"(= {self.c[i][j][k]}, mirror {self.c[j][i][k]})"
                        )

    @classmethod
    def from_rows(cls, dim: int, rows: Mapping[tuple[int, int], Sequence[ScalarLike]]) -> "StructureTensor":
        """Build from bracket rows for pairs i < j; the mirror rows are implied.

        This is antisymmetric completion of sparse input, not correction: a
        full table passed to the constructor is still rejected if asymmetric.
        """
        table = [[[ZERO] * dim for _ in range(dim)] for _ in range(dim)]
        for (i, j), coeffs in rows.items():
            if not (0 <= i < dim and 0 <= j < dim):
                raise StructureError(f"bracket pair ({i}, {j}) out of range for dim {dim}")
            if i >= j:
                raise StructureError(f"bracket pair ({i}, {j}) must have i < j")
            vec = _as_vector(coeffs, dim, f"bracket [e_{i}, e_{j}]")
            table[i][j] = list(vec)
            table[j][i] = [-v for v in vec]
        frozen = tuple(tuple(tuple(v) for v in row) for row in table)
        return cls(dim, frozen)

    def row(self, i: int, j: int) -> tuple[Fraction, ...]:
        """Coefficient vector of [e_i, e_j]."""
        return self.c[i][j]

    def bracket(self, u: Sequence[ScalarLike], v: Sequence[ScalarLike]) -> tuple[Fraction, ...]:
        """Bilinear extension: [u, v] = sum_ij u_i v_j [e_i, e_j]."""
        uu = _as_vector(u, self.dim, "left bracket argument")
        vv = _as_vector(v, self.dim, "right bracket argument")
        out = [ZERO] * self.dim
        for i, ui in enumerate(uu):
            if not ui:
                continue
            rows_i = self.c[i]
            for j, vj in enumerate(vv):
                if not vj:
                    continue
                coeff = ui * vj
                for k, cijk in enumerate(rows_i[j]):
                    if cijk:
                        out[k] += coeff * cijk
        return tuple(out)

    def bracket_with_basis(self, u: Sequence[Fraction], k: int) -> tuple[Fraction, ...]:
        """[u, e_k] for a coefficient vector u (hot path, no revalidation)."""
        out = [ZERO] * self.dim
        for m, um in enumerate(u):
            if not um:
                continue
            for t, cmkt in enumerate(self.c[m][k]):
                if cmkt:
                    out[t] += um * cmkt
        return tuple(out)


@dataclass(frozen=True)
class JacobiReport:
    """Jacobi residual of a bracket table: per-triple cyclic sums and their max."""

    dim: int
    max_abs: Fraction
    violations: tuple[tuple[tuple[int, int, int], tuple[Fraction, ...]], ...]

    @property
    def is_zero(self) -> bool:
        return self.max_abs == 0

    def worst_triple(self) -> tuple[int, int, int] | None:
        if not self.violations:
            return None
        return max(self.violations, key=lambda item: max(abs(x) for x in item[1]))[0]


def jacobi_residual(tensor: StructureTensor) -> JacobiReport:
    """Residual R(i,j,k) = [[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j].

    Zero on every triple iff the table is a Lie algebra.  Only nonzero triples
    (i < j < k) are materialized in the report.
    """
    dim = tensor.dim
    c = tensor.c
    max_abs = ZERO
    violations = []
    for i in range(dim):
        for j in range(i + 1, dim):
            for k in range(j + 1, dim):
                res = list(tensor.bracket_with_basis(c[i][j], k))
                for t, val in enumerate(tensor.bracket_with_basis(c[j][k], i)):
                    res[t] += val
                for t, val in enumerate(tensor.bracket_with_basis(c[k][i], j)):
                    res[t] += val
                if any(res):
                    violations.append(((i, j, k), tuple(res)))
                    local = max(abs(x) for x in res)
                    if local > max_abs:
                        max_abs = local
    return JacobiReport(dim, max_abs, tuple(violations))


def _check_subalgebra(tensor: StructureTensor, indices: Sequence[int]) -> tuple[int, ...]:
    idx = tuple(indices)
    if len(set(idx)) != len(idx):
        raise StructureError(f"duplicate indices in {idx}")
    if any(not (0 <= i < tensor.dim) for i in idx):
        raise StructureError(f"indices {idx} out of range for dim {tensor.dim}")
    inside = set(idx)
    for a in idx:
        for b in idx:
            for k, coeff in enumerate(tensor.c[a][b]):
                if coeff and k not in inside:
                    raise StructureError(
                        f"indices {idx} not closed under bracket: "
                        f"[e_{a}, e_{b}] has e_{k} component {coeff}"
                    )
    return idx


def killing_form(tensor: StructureTensor, indices: Sequence[int]) -> tuple[tuple[Fraction, ...], ...]:
    """K(a, b) = trace(ad_a . ad_b) of the subalgebra spanned by `indices`.

    The indices must be closed under the bracket; the trace runs over the
    subalgebra basis only.
    """
    idx = _check_subalgebra(tensor, indices)
    c = tensor.c
    matrix = []
    for a in idx:
        row = []
        for b in idx:
            total = ZERO
            for m in idx:
                # ad_b e_m = [e_b, e_m], then the e_m-component of ad_a of that.
                w = c[b][m]
                for t, wt in enumerate(w):
                    if wt:
                        total += wt * c[a][t][m]
            row.append(total)
        matrix.append(tuple(row))
    return tuple(matrix)


def is_semisimple(tensor: StructureTensor, indices: Sequence[int]) -> bool:
    """True iff the Killing form of the subalgebra is nondegenerate (exact determinant)."""
    from .linalg import determinant

    return determinant(killing_form(tensor, indices)) != 0


@dataclass(frozen=True)
class MetricFrame:
    """Orthonormal frame of a nondegenerate diagonal metric; epsilon[i] = g(e_i, e_i) = +-1."""

    epsilon: tuple[int, ...]

    def __post_init__(self):
        if not self.epsilon:
            raise StructureError("metric frame must have positive dimension")
        if any(e not in (1, -1) for e in self.epsilon):
            raise StructureError(f"causal characters must be +1 or -1, got {self.epsilon}")

    @property
    def dim(self) -> int:
        return len(self.epsilon)

    @property
    def is_riemannian(self) -> bool:
        return all(e == 1 for e in self.epsilon)

    def inner(self, u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
        """g(u, v) = sum_a epsilon_a u_a v_a."""
        total = ZERO
        for ea, ua, va in zip(self.epsilon, u, v):
            if ua and va:
                total += ea * ua * va
        return total


@dataclass(frozen=True)
class FoliationSetup:
    """A bracket table + metric + split into a vertical subalgebra and a horizontal pair."""

    tensor: StructureTensor
    frame: MetricFrame
    vertical: tuple[int, ...]
    horizontal: tuple[int, int]

    def __post_init__(self):
        dim = self.tensor.dim
        if dim < 3:
            raise StructureError(f"setup needs dim >= 3 (codimension two with leaves), got {dim}")
        if self.frame.dim != dim:
            raise StructureError(
                f"metric frame dim {self.frame.dim} does not match tensor dim {dim}"
            )
        if len(self.horizontal) != 2:
            raise StructureError("horizontal part must be exactly two indices")
        combined = tuple(self.vertical) + tuple(self.horizontal)
        if sorted(combined) != list(range(dim)):
            raise StructureError(
                f"vertical {self.vertical} + horizontal {self.horizontal} "
                f"must partition 0..{dim - 1}"
            )
        if not self.vertical:
            raise StructureError("vertical part must be nonempty")
        hset = set(self.horizontal)
        for a in self.vertical:
            for b in self.vertical:
                for k in hset:
                    if self.tensor.c[a][b][k]:
                        raise StructureError(
                            f"vertical indices do not span a subalgebra: "
                            f"[e_{a}, e_{b}] has horizontal e_{k} component"
                        )

    @property
    def dim(self) -> int:
        return self.tensor.dim

    @property
    def x_index(self) -> int:
        return self.horizontal[0]

    @property
    def y_index(self) -> int:
        return self.horizontal[1]

    def eps(self, i: int) -> int:
        return self.frame.epsilon[i]


def bracket(setup: FoliationSetup, u: Sequence[ScalarLike], v: Sequence[ScalarLike]) -> tuple[Fraction, ...]:
    """Bilinear bracket of coefficient vectors in the setup's algebra."""
    return setup.tensor.bracket(u, v)
