"""Independent brute-force oracles used to check the library's engines.

Everything here works on a bare callable fn(point) -> class plus the domain
sizes, straight from the definitions, so no library code path is reused on
the oracle side of any comparison.
"""

import itertools
from fractions import Fraction
from math import factorial

from svaudit.models import DecisionTree, DTLeaf, DTNode, FeatureSpace, TabularClassifier


def all_points(domains):
    return itertools.product(*(range(d) for d in domains))


def o_phi(fn, domains, v, S):
    axes = [(v[i],) if i in S else range(d) for i, d in enumerate(domains)]
    pts = list(itertools.product(*axes))
    return Fraction(sum(fn(p) for p in pts), len(pts))


def o_shapley(fn, domains, v):
    m = len(domains)
    out = []
    for i in range(m):
        rest = [j for j in range(m) if j != i]
        total = Fraction(0)
        for r in range(m):
            for comb in itertools.combinations(rest, r):
                S = frozenset(comb)
                w = Fraction(factorial(r) * factorial(m - r - 1), factorial(m))
                total += w * (o_phi(fn, domains, v, S | {i}) - o_phi(fn, domains, v, S))
        out.append(total)
    return tuple(out)


def o_waxp(fn, domains, v, X):
    c = fn(tuple(v))
    return all(fn(x) == c
               for x in all_points(domains)
               if all(x[i] == v[i] for i in X))


def o_wcxp(fn, domains, v, Y):
    c = fn(tuple(v))
    return any(fn(x) != c
               for x in all_points(domains)
               if all(x[i] == v[i] for i in range(len(domains)) if i not in Y))


def o_axps(fn, domains, v):
    m = len(domains)
    subsets = [frozenset(c) for r in range(m + 1)
               for c in itertools.combinations(range(m), r)]
    return sorted((S for S in subsets
                   if o_waxp(fn, domains, v, S)
                   and all(not o_waxp(fn, domains, v, S - {t}) for t in S)),
                  key=lambda s: tuple(sorted(s)))


def o_cxps(fn, domains, v):
    m = len(domains)
    subsets = [frozenset(c) for r in range(m + 1)
               for c in itertools.combinations(range(m), r)]
    return sorted((S for S in subsets
                   if o_wcxp(fn, domains, v, S)
                   and all(not o_wcxp(fn, domains, v, S - {t}) for t in S)),
                  key=lambda s: tuple(sorted(s)))


def o_adversarial(fn, domains, v, A):
    """Does some point differing from v on exactly A flip the class?"""
    c = fn(tuple(v))
    for x in all_points(domains):
        if fn(x) != c and frozenset(i for i in range(len(domains)) if x[i] != v[i]) == A:
            return True
    return False


def o_minimal_adversarial_sets(fn, domains, v):
    m = len(domains)
    found = []
    for r in range(1, m + 1):
        for comb in itertools.combinations(range(m), r):
            A = frozenset(comb)
            if any(B < A for B in found):
                continue
            if o_adversarial(fn, domains, v, A):
                found.append(A)
    return sorted(found, key=lambda s: tuple(sorted(s)))


def check_mutual_mhs(axps, cxps):
    """Each family must consist of minimal hitting sets of the other."""
    if not axps or not cxps:
        return False
    for fam_a, fam_b in ((axps, cxps), (cxps, axps)):
        for s in fam_a:
            if any(not (s & t) for t in fam_b):
                return False
            for e in s:
                if all((s - {e}) & t for t in fam_b):
                    return False
    return True


# ---------------------------------------------------------------------------
# Random model generators (seeded, deterministic)
# ---------------------------------------------------------------------------

def random_space(rng, max_features=6, domain_pool=(2, 2, 2, 3)):
    m = rng.randint(2, max_features)
    return FeatureSpace(tuple(rng.choice(domain_pool) for _ in range(m)))


def random_table(rng, space=None, classes=3, **space_args):
    if space is None:
        space = random_space(rng, **space_args)
    while True:
        values = tuple(rng.randrange(classes) for _ in range(space.size))
        if len(set(values)) >= 2:
            return TabularClassifier(space, values)


def random_problem(rng, **kwargs):
    table = random_table(rng, **kwargs)
    point = tuple(rng.randrange(d) for d in table.space.domain_sizes)
    from svaudit.models import ExplanationProblem
    return ExplanationProblem.of(table, point)


def random_dt(rng, space, classes=3, stop=0.25):
    """Random read-once set-labelled tree over the given space (non-constant)."""

    def partition(values):
        values = list(values)
        rng.shuffle(values)
        k = rng.randint(1, len(values))
        groups = [[] for _ in range(k)]
        for j, val in enumerate(values):
            groups[j % k].append(val)
        return [frozenset(g) for g in groups]

    def grow(avail, depth):
        if not avail or depth == 0 or rng.random() < stop:
            return DTLeaf(rng.randrange(classes))
        f = rng.choice(sorted(avail))
        groups = partition(range(space.domain_sizes[f]))
        edges = tuple((g, grow(avail - {f}, depth - 1)) for g in groups)
        return DTNode(f, edges)

    while True:
        root = grow(frozenset(range(space.m)), space.m)
        if isinstance(root, DTNode):
            classes_seen = set()

            def leaves(node):
                if isinstance(node, DTLeaf):
                    classes_seen.add(node.class_value)
                else:
                    for _, ch in node.edges:
                        leaves(ch)

            leaves(root)
            if len(classes_seen) >= 2:
                return DecisionTree(space, root)
