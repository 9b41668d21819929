"""Abductive and contrastive explanations, enumeration, feature relevancy.

A feature set S is prediction-sufficient when every point agreeing with the
instance on S keeps the predicted class; an AXp is a subset-minimal such set.
Dually, S is counterfactual-sufficient when freeing S alone admits a point
with a different class; a CXp is a subset-minimal such set. The two families
are minimal hitting sets of each other, which the duality-driven enumerator
exploits: it proposes minimal hitting sets of the CXps found so far, and each
proposal either is a new AXp or yields a counterexample point whose changed
features minimize to a new CXp.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import CapacityError, InputError
from .models import ExplanationProblem, find_counterexample

# Refuse to enumerate explanation families above this many features.
EXPLAIN_CAP = 20


def is_sufficient(problem: ExplanationProblem, S) -> bool:
    """Weak abductive predicate: fixing S to the instance values forces the class."""
    S = problem.space.validate_subset(S)
    return find_counterexample(problem.model, S, problem.point, problem.predicted) is None


def is_counterfactual(problem: ExplanationProblem, S) -> bool:
    """Weak contrastive predicate: freeing S alone can change the class."""
    S = problem.space.validate_subset(S)
    rest = frozenset(range(problem.m)) - S
    return find_counterexample(problem.model, rest, problem.point, problem.predicted) is not None


def one_axp(problem: ExplanationProblem, elimination_order=None) -> frozenset[int]:
    """Deletion-based extraction of one AXp (default order: ascending index)."""
    order = _elimination_order(problem, elimination_order)
    X = set(range(problem.m))
    for t in order:
        if is_sufficient(problem, X - {t}):
            X.discard(t)
    return frozenset(X)


def one_cxp(problem: ExplanationProblem, elimination_order=None) -> frozenset[int]:
    """Deletion-based extraction of one CXp (default order: ascending index)."""
    order = _elimination_order(problem, elimination_order)
    Y = set(range(problem.m))
    for t in order:
        if is_counterfactual(problem, Y - {t}):
            Y.discard(t)
    return frozenset(Y)


def _elimination_order(problem, order):
    if order is None:
        return list(range(problem.m))
    order = list(order)
    if sorted(order) != list(range(problem.m)):
        raise InputError("elimination order must be a permutation of the features")
    return order


def minimal_hitting_sets(family) -> list[frozenset[int]]:
    """All minimal hitting sets of a family of nonempty sets.

    Berge's incremental algorithm with minimization after every step; for the
    empty family the only minimal hitting set is the empty set.
    """
    hs = [frozenset()]
    for S in family:
        if not S:
            raise InputError("cannot hit an empty set")
        nxt = []
        for H in hs:
            if H & S:
                nxt.append(H)
            else:
                nxt.extend(H | {e} for e in sorted(S))
        hs = _minimal_only(nxt)
    return sorted(hs, key=_set_key)


def _minimal_only(sets):
    uniq = sorted(set(sets), key=len)
    out = []
    for s in uniq:
        if not any(t < s for t in out):
            out.append(s)
    return out


def _set_key(s):
    return tuple(sorted(s))


def enumerate_explanations(problem: ExplanationProblem, engine: str = "duality",
                           cap: int = EXPLAIN_CAP):
    """Complete AXp and CXp families, both sorted lexicographically.

    ``brute`` filters all 2^m subsets through the sufficiency predicates and
    serves as the oracle; ``duality`` runs the hitting-set loop. The two
    engines return identical families.
    """
    if problem.m > cap:
        raise CapacityError(f"{problem.m} features exceed the enumeration cap {cap}")
    if engine == "brute":
        axps, cxps = _enumerate_brute(problem)
    elif engine == "duality":
        axps, cxps = _enumerate_duality(problem)
    else:
        raise InputError(f"unknown engine {engine!r}")
    return tuple(sorted(axps, key=_set_key)), tuple(sorted(cxps, key=_set_key))


def _enumerate_brute(problem):
    m = problem.m
    cache = {}

    def waxp(S):
        if S not in cache:
            cache[S] = is_sufficient(problem, S)
        return cache[S]

    def wcxp(S):
        return not waxp(frozenset(range(m)) - S)

    subsets = [frozenset(c) for r in range(m + 1)
               for c in itertools.combinations(range(m), r)]
    axps = [S for S in subsets
            if waxp(S) and all(not waxp(S - {t}) for t in S)]
    cxps = [S for S in subsets
            if wcxp(S) and all(not wcxp(S - {t}) for t in S)]
    return axps, cxps


def _enumerate_duality(problem):
    axps, cxps = [], []
    axp_set = set()
    while True:
        candidate = next((H for H in minimal_hitting_sets(cxps) if H not in axp_set), None)
        if candidate is None:
            return axps, cxps
        cex = find_counterexample(problem.model, candidate, problem.point, problem.predicted)
        if cex is None:
            # a sufficient minimal hitting set of known CXps is already an
            # AXp: removing any element would leave a sufficient set, which
            # hits every CXp, contradicting hitting-set minimality
            axps.append(candidate)
            axp_set.add(candidate)
        else:
            diff = {i for i in range(problem.m) if cex[i] != problem.point[i]}
            Y = set(diff)
            for t in sorted(diff):
                if is_counterfactual(problem, Y - {t}):
                    Y.discard(t)
            cxps.append(frozenset(Y))


@dataclass(frozen=True)
class RelevancyReport:
    """Complete explanation families plus the relevancy partition they induce."""

    axps: tuple[frozenset[int], ...]
    cxps: tuple[frozenset[int], ...]
    relevant: frozenset[int]
    necessary: frozenset[int]
    irrelevant: frozenset[int]

    def to_json_dict(self) -> dict:
        return {
            "axps": [_ext(s) for s in self.axps],
            "cxps": [_ext(s) for s in self.cxps],
            "relevant": _ext(self.relevant),
            "necessary": _ext(self.necessary),
            "irrelevant": _ext(self.irrelevant),
        }


def _ext(features):
    return [i + 1 for i in sorted(features)]


def relevancy_report(problem: ExplanationProblem, engine: str = "duality",
                     cap: int = EXPLAIN_CAP) -> RelevancyReport:
    """Classify every feature as relevant (in some AXp), necessary (in all)
    or irrelevant (in none)."""
    axps, cxps = enumerate_explanations(problem, engine=engine, cap=cap)
    relevant = frozenset().union(*axps)
    necessary = frozenset(range(problem.m)).intersection(*axps)
    irrelevant = frozenset(range(problem.m)) - relevant
    return RelevancyReport(axps, cxps, relevant, necessary, irrelevant)


def axp_rule(problem: ExplanationProblem, X) -> str:
    """Render an AXp as the logic rule it stands for.

    Raises InputError when X is not actually an AXp of the problem.
    """
    X = problem.space.validate_subset(X)
    if not is_sufficient(problem, X):
        raise InputError(f"{sorted(i + 1 for i in X)} is not prediction-sufficient")
    for t in X:
        if is_sufficient(problem, X - {t}):
            raise InputError(f"{sorted(i + 1 for i in X)} is not subset-minimal")
    names = problem.space.feature_names
    literals = " AND ".join(f"{names[i]}={problem.point[i]}" for i in sorted(X))
    return f"IF {literals} THEN class={problem.predicted}"
