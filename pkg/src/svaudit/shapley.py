"""Exact Shapley values for feature attribution under the uniform distribution.

The characteristic function is the conditional average phi(S): the mean class
value over all points that agree with the instance on S. Every quantity is an
exact rational; the efficiency identity

    sum_i Sv(i) + phi(empty) = kappa(v)

must hold with residual exactly 0 and is carried in every report.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .errors import CapacityError, InputError
from .models import ExplanationProblem, cube_size, sum_kappa_over_cube
from .rat import rat_json, rat_str

# Coalition iteration is O(2^m); refuse beyond this many features.
COALITION_CAP = 24


def phi(problem: ExplanationProblem, S, backend: str = "auto") -> Fraction:
    """Average class value over the points agreeing with the instance on S."""
    S = problem.space.validate_subset(S)
    total = sum_kappa_over_cube(problem.model, S, problem.point, backend=backend)
    return Fraction(total, cube_size(problem.space, S))


def varsigma(m: int, size: int) -> Fraction:
    """Coalition weight |S|!(m-|S|-1)!/m! as an exact rational."""
    return Fraction(factorial(size) * factorial(m - size - 1), factorial(m))


@dataclass(frozen=True)
class SvReport:
    """Per-feature exact Shapley values plus the efficiency residual."""

    values: tuple[Fraction, ...]
    phi_empty: Fraction
    predicted: int
    residual: Fraction

    def to_json_dict(self) -> dict:
        return {
            "sv": [dict(feature=i + 1, **rat_json(q)) for i, q in enumerate(self.values)],
            "phi_empty": rat_json(self.phi_empty),
            "residual": rat_str(self.residual),
        }


def shapley_values(problem: ExplanationProblem, backend: str = "auto",
                   cap: int = COALITION_CAP) -> SvReport:
    """Exact Shapley value of every feature.

    ``backend`` picks how phi is evaluated: ``enumerate`` walks cubes point
    by point, ``paths`` counts models on trees/diagrams, ``auto`` chooses by
    representation. All backends give identical rationals.
    """
    m = problem.m
    if m > cap:
        raise CapacityError(f"{m} features exceed the coalition cap {cap}")
    if backend not in ("auto", "enumerate", "paths"):
        raise InputError(f"unknown backend {backend!r}")

    phis = [None] * (1 << m)
    for mask in range(1 << m):
        S = frozenset(i for i in range(m) if mask >> i & 1)
        phis[mask] = phi(problem, S, backend=backend)

    weight = [varsigma(m, k) for k in range(m)]
    values = []
    for i in range(m):
        bit = 1 << i
        total = Fraction(0)
        for mask in range(1 << m):
            if mask & bit:
                continue
            total += weight[mask.bit_count()] * (phis[mask | bit] - phis[mask])
        values.append(total)

    phi_empty = phis[0]
    residual = sum(values, Fraction(0)) + phi_empty - problem.predicted
    return SvReport(tuple(values), phi_empty, problem.predicted, residual)


def validate_efficiency(problem: ExplanationProblem, report: SvReport) -> Fraction:
    """Residual of the efficiency identity for a report; the contract is 0."""
    total = sum(report.values, Fraction(0)) + report.phi_empty
    return total - problem.model.evaluate(problem.point)
