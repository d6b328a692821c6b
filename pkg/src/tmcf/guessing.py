"""Recover algebraic relations for expansion series by exact GF(2) linear algebra.

Given a series x and a relation degree g, the solver looks for polynomials
B_0..B_g of degree at most D, not all zero, with sum_j B_j x^j = 0 to high
order.  Unknowns are the individual GF(2) coefficient bits; conditions are
vanishing coefficients of the combination, taken from the top exponent down.
The returned relation is degree-minimized, checked against a fresh expansion
at doubled precision, and (for the quartic case) compared with the closed
form after primitive-part normalization.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from .certificate import Certificate
from .gf2 import LaurentZ, PolyZ
from .identities import quartic_coeffs_upper
from .linalg import nullspace

CERT_SCHEMA = "tmcf.guess/1"


class EmptyKernelError(ValueError):
    """No relation exists within the attempted degree bound and precision."""

    def __init__(self, relation_degree: int, degree_bound: int, conditions: int):
        super().__init__(
            f"no degree-{relation_degree} relation with coefficient degrees "
            f"<= {degree_bound} under {conditions} vanishing conditions"
        )
        self.relation_degree = relation_degree
        self.degree_bound = degree_bound
        self.conditions = conditions


class AmbiguousKernelError(ValueError):
    """More than one candidate survived degree minimization."""

    def __init__(self, dimension: int, degree: int):
        super().__init__(
            f"kernel dimension {dimension} at minimized coefficient degree {degree}"
        )
        self.dimension = dimension
        self.degree = degree


@dataclass(frozen=True)
class GuessProblem:
    a: PolyZ
    b: PolyZ
    degree_bound: int
    precision: int
    relation_degree: int = 4

    def __post_init__(self):
        unknowns = (self.relation_degree + 1) * (self.degree_bound + 1)
        if self.precision < unknowns + 16:
            raise ValueError(
                f"precision {self.precision} leaves the system underdetermined "
                f"(need at least {unknowns + 16})"
            )


@dataclass(frozen=True)
class GuessResult:
    problem: GuessProblem
    coefficients: tuple[PolyZ, ...]
    vanishing_order: int
    residual_zero_within: bool
    matches_closed_form: bool
    minimized_degree: int

    def primitive_coefficients(self) -> tuple[PolyZ, ...]:
        return primitive_part(self.coefficients)


def primitive_part(coeffs) -> tuple[PolyZ, ...]:
    g = PolyZ(0)
    for c in coeffs:
        g = g.gcd(c)
    if not g:
        raise ValueError("all coefficients are zero")
    return tuple(c // g for c in coeffs)


def _series_powers(x: LaurentZ, g: int) -> list[LaurentZ]:
    powers = [LaurentZ(1, 0, True), x]
    for _ in range(2, g + 1):
        powers.append(powers[-1] * x)
    return powers


def _condition_rows(
    powers: list[LaurentZ], degree_bound: int, top: int, count: int
) -> list[int]:
    """One row per exponent e = top, top-1, ...; bit (j*(D+1)+t) is the
    coefficient of z^e in z^t * x^j."""
    rows = []
    width = degree_bound + 1
    for e in range(top, top - count, -1):
        row = 0
        for j, p in enumerate(powers):
            for t in range(width):
                if p.coeff(e - t):
                    row |= 1 << (j * width + t)
        rows.append(row)
    return rows


def _kernel_at_degree(
    powers: list[LaurentZ], t_bound: int, top: int, count: int
) -> list[int]:
    rows = _condition_rows(powers, t_bound, top, count)
    return nullspace(rows, len(powers) * (t_bound + 1))


def solve_relation(
    series_at: Callable[[int], LaurentZ],
    relation_degree: int,
    degree_bound: int,
    precision: int,
) -> tuple[tuple[PolyZ, ...], int, bool, int]:
    """Find the degree-minimized relation; returns
    (coefficients, vanishing_order, residual_zero_within, minimized_degree).

    The honest vanishing order is measured on a fresh expansion with twice
    the conditions; by construction it is at least `precision`, and a
    shortfall means the solution merely overfit the first window.
    """
    g, d_cap = relation_degree, degree_bound
    depth = 2 * precision + d_cap + 16
    x = series_at(depth)
    powers = _series_powers(x, g)
    top = d_cap  # B_0 alone reaches exponent d_cap

    full = _kernel_at_degree(powers, d_cap, top, precision)
    if not full:
        raise EmptyKernelError(g, d_cap, precision)
    t_min = next(
        t for t in range(d_cap + 1) if _kernel_at_degree(powers, t, t, precision)
    )
    kernel = _kernel_at_degree(powers, t_min, t_min, precision)
    if len(kernel) > 1:
        raise AmbiguousKernelError(len(kernel), t_min)
    vec = min(kernel)

    width = t_min + 1
    coeffs = tuple(
        PolyZ((vec >> (j * width)) & ((1 << width) - 1)) for j in range(g + 1)
    )

    # honest recheck on the doubled window
    residual = LaurentZ.from_poly(coeffs[0])
    for c, p in zip(coeffs[1:], powers[1:]):
        residual = residual + LaurentZ.from_poly(c) * p
    if residual.is_zero_within():
        zero_within = True
        order = t_min - residual.horizon
    else:
        zero_within = False
        order = t_min - residual.top
    if not zero_within and order < precision:
        raise ArithmeticError(
            f"relation overfit its window: order {order} < {precision}"
        )
    return coeffs, order, zero_within, t_min


def closed_form_vector(a: PolyZ, b: PolyZ) -> tuple[PolyZ, ...]:
    return tuple(c.subst(a, b) for c in quartic_coeffs_upper())


def guess_quartic(problem: GuessProblem) -> GuessResult:
    """Recover the quartic relation for the pair expansion and compare its
    primitive part with the closed-form coefficients."""
    from .analysis import xi_series

    if problem.relation_degree != 4:
        raise ValueError("quartic guessing fixes the relation degree at 4")
    a, b = problem.a, problem.b
    coeffs, order, zero_within, t_min = solve_relation(
        lambda prec: xi_series(a, b, prec),
        4,
        problem.degree_bound,
        problem.precision,
    )
    closed = closed_form_vector(a, b)
    max_closed = max(c.degree for c in closed)
    matches = primitive_part(coeffs) == primitive_part(closed)

    # the closed-form vector must itself satisfy the conditions whenever the
    # degree bound accommodates it
    if problem.degree_bound >= max_closed:
        depth = 2 * problem.precision + problem.degree_bound + 16
        x = xi_series(a, b, depth)
        residual = LaurentZ.from_poly(closed[0])
        for c, p in zip(closed[1:], _series_powers(x, 4)[1:]):
            residual = residual + LaurentZ.from_poly(c) * p
        if not residual.is_zero_within():
            raise ArithmeticError("closed-form coefficients fail on the expansion")

    return GuessResult(
        problem=problem,
        coefficients=coeffs,
        vanishing_order=order,
        residual_zero_within=zero_within,
        matches_closed_form=matches,
        minimized_degree=t_min,
    )


def suggested_degree_bound(a: PolyZ, b: PolyZ) -> int:
    """Smallest bound that can hold the closed-form coefficients."""
    return max(c.degree for c in closed_form_vector(a, b))


def default_problem(a: PolyZ, b: PolyZ, degree_bound: int | None = None) -> GuessProblem:
    d_cap = suggested_degree_bound(a, b) if degree_bound is None else degree_bound
    precision = 5 * (d_cap + 1) + 32
    return GuessProblem(a=a, b=b, degree_bound=d_cap, precision=precision)


# ---------------------------------------------------------------------------
# Certificates.


def result_payload(r: GuessResult) -> dict:
    return {
        "schema": CERT_SCHEMA,
        "a": str(r.problem.a),
        "b": str(r.problem.b),
        "a_hex": r.problem.a.to_hex(),
        "b_hex": r.problem.b.to_hex(),
        "degree_bound": r.problem.degree_bound,
        "precision": r.problem.precision,
        "relation_degree": r.problem.relation_degree,
        "coefficients": [str(c) for c in r.coefficients],
        "coefficients_hex": [c.to_hex() for c in r.coefficients],
        "minimized_degree": r.minimized_degree,
        "vanishing_order": r.vanishing_order,
        "residual_zero_within": r.residual_zero_within,
        "matches_closed_form": r.matches_closed_form,
    }


def emit_certificate(r: GuessResult, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(result_payload(r), sort_keys=True, indent=2) + "\n")
    return path


def verify_certificate(data: dict | str | Path) -> Certificate:
    """Re-expand the series at the recorded parameters and re-check the
    stored relation from scratch."""
    from .analysis import xi_series
    import time

    t0 = time.perf_counter()
    if not isinstance(data, dict):
        data = json.loads(Path(data).read_text())
    if data.get("schema") != CERT_SCHEMA:
        raise ValueError("not a relation certificate")
    a = PolyZ.parse(data["a_hex"])
    b = PolyZ.parse(data["b_hex"])
    coeffs = [PolyZ.parse(h) for h in data["coefficients_hex"]]
    precision = int(data["precision"])
    depth = 2 * precision + int(data["degree_bound"]) + 16
    x = xi_series(a, b, depth)
    powers = _series_powers(x, len(coeffs) - 1)
    residual = LaurentZ.from_poly(coeffs[0])
    for c, p in zip(coeffs[1:], powers[1:]):
        residual = residual + LaurentZ.from_poly(c) * p
    matches = primitive_part(coeffs) == primitive_part(closed_form_vector(a, b))
    residuals = {
        "relation": residual,
        "closed-form-match": matches == bool(data["matches_closed_form"]),
    }
    return Certificate.from_residuals(
        "relation-certificate",
        {"a": str(a), "b": str(b), "degree_bound": data["degree_bound"]},
        residuals,
        details={"vanishing_order": data["vanishing_order"]},
        wall_time_s=time.perf_counter() - t0,
    )
