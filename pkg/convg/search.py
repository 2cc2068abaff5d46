"""
Enumeration, random generation and counterexample search.

Small carriers are swept exhaustively; larger ones are sampled with a
counter-based generator so that every instance can be rebuilt from
``(seed, counter)`` alone.
"""

import functools
import itertools
import logging
import string

import numpy as np
from tqdm import tqdm

from .compactness import verify_compactness_theorem
from .constructions import coproduct, final, product
from .exceptions import FalsificationError, InputError, TooLarge
from .filters import Carrier
from .spaces import (LIMIT_AXIOMS, Axiom, Preconvergence, check_axiom,
                     convergence_hulls, from_topology, lattice_op, open_sets,
                     ultrafilter_meet)
from .utils import (bits, canonical_order, check_size, full_mask,
                    image_table, iter_submasks, popcount, subset_index,
                    superset_or)

logger = logging.getLogger(__name__)

__all__ = ["EXHAUSTIVE_POINTS", "DEFAULT_BUDGET", "PROPERTIES",
           "THEOREM_PROPERTIES", "SearchSpec", "Witness", "default_carrier",
           "count_spaces", "enumerate_spaces", "random_space",
           "set_partitions", "search_counterexample", "replay_witness"]

# Carriers up to this size are enumerated rather than sampled.
EXHAUSTIVE_POINTS = 3

DEFAULT_BUDGET = 10000

# Random 2-covers are checked against maps into targets of up to this size.
TARGET_POINTS = 3


def default_carrier(n):
    """Points ``a, b, c, ...`` (``x26, x27, ...`` past the alphabet)."""
    letters = string.ascii_lowercase
    return Carrier([letters[i] if i < 26 else "x{0}".format(i)
                    for i in range(n)])


def count_spaces(n):
    """The number of limit tables on n points, (2^n)^(2^n - 1)."""
    return (1 << n) ** ((1 << n) - 1)


def _axioms(constraints):
    return frozenset(Axiom(a) for a in (constraints or ()))


def enumerate_spaces(n, constraints=(), carrier=None):
    """
    Every preconvergence on n points satisfying the constraints.

    Entries are filled in size-then-index order of their bases, each taking
    its admissible values in increasing order; centered and isotone
    constraints prune while filling, the others filter complete tables.

    Args:
        n (int): Carrier size, at most ``EXHAUSTIVE_POINTS``.
        constraints (Optional[iterable]): Axioms every table must satisfy.
        carrier (Optional[Carrier]): Labels; default ``a, b, ...``.

    Yields:
        L (Preconvergence): The tables, in a fixed order.
    """
    if n > EXHAUSTIVE_POINTS:
        raise TooLarge("spaces are enumerated up to {0} points".format(
            EXHAUSTIVE_POINTS))
    constraints = _axioms(constraints)
    carrier = carrier or default_carrier(n)
    centered = Axiom.CENTERED in constraints
    isotone = Axiom.ISOTONE in constraints
    rest = constraints - {Axiom.CENTERED, Axiom.ISOTONE}
    order = canonical_order(n)
    full = full_mask(n)
    table = np.zeros(1 << n, dtype=np.int64)

    def choices(A):
        allowed = full
        if isotone and popcount(A) > 1:
            for i in bits(A):
                allowed &= int(table[A ^ (1 << i)])
        required = A if centered and popcount(A) == 1 else 0
        if required & ~allowed:
            return []
        free = allowed & ~required
        return sorted(required | s for s in iter_submasks(free, nonempty=False))

    def fill(k):
        if k == len(order):
            L = Preconvergence(carrier, table)
            if all(check_axiom(L, a) for a in rest):
                yield L
            return
        A = order[k]
        for value in choices(A):
            table[A] = value
            for L in fill(k + 1):
                yield L
        table[A] = 0

    return fill(0)


def _generator(seed, counter):
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence([int(seed), int(counter)])))


def _closure_axioms(constraints):
    constraints = set(constraints)
    if Axiom.STABLE in constraints:
        constraints |= {Axiom.CENTERED, Axiom.ISOTONE}
    if Axiom.PSEUDOTOPOLOGICAL in constraints:
        constraints.add(Axiom.ISOTONE)
    return constraints


def _close(carrier, table, constraints):
    n = carrier.size
    idx = subset_index(n)
    while True:
        before = table.copy()
        if Axiom.CENTERED in constraints:
            for x in range(n):
                table[1 << x] |= 1 << x
        if Axiom.ISOTONE in constraints:
            table = superset_or(table, n)
            table[0] = 0
        if Axiom.KENT in constraints:
            for x in range(n):
                kept = ((table >> x) & 1) << x
                np.bitwise_or.at(table, idx | (1 << x), kept)
            table[0] = 0
        if Axiom.PRETOPOLOGICAL in constraints:
            hulls = convergence_hulls(Preconvergence(carrier, table))
            for x, V in enumerate(hulls):
                if V:
                    table[V] |= 1 << x
        if Axiom.PSEUDOTOPOLOGICAL in constraints:
            table |= ultrafilter_meet(Preconvergence(carrier, table))
        if Axiom.STABLE in constraints:
            # the limit-modification formula; centered and isotone hold here
            hulls = convergence_hulls(Preconvergence(carrier, table))
            table = np.zeros_like(table)
            for x, V in enumerate(hulls):
                table |= ((idx & ~np.int64(V)) == 0).astype(np.int64) << x
            table[0] = 0
        if Axiom.TOPOLOGICAL in constraints:
            L = Preconvergence(carrier, table)
            table = from_topology(open_sets(L)).limits.copy()
        if np.array_equal(before, table):
            return table


def random_space(n, seed=0, constraints=(), counter=0, density=.3,
                 carrier=None):
    """
    A random preconvergence closed under the requested axioms.

    Each limit bit is drawn independently, then the table is closed: points
    are added to their ultrafilter limits (centered), limits are pushed
    down to sub-bases (isotone), and so on until nothing changes. Stability
    also closes under centered and isotone.

    Args:
        n (int): Carrier size.
        seed (Optional[int]): The generator key.
        constraints (Optional[iterable]): Axioms to enforce.
        counter (Optional[int]): Instance number under the same seed.
        density (Optional[float]): Probability of each limit bit before
            closing. Default is 0.3.
        carrier (Optional[Carrier]): Labels; default ``a, b, ...``.

    Returns:
        L (Preconvergence): A space passing every requested axiom.
    """
    check_size(n)
    requested = _axioms(constraints)
    closing = _closure_axioms(requested)
    carrier = carrier or default_carrier(n)
    rng = _generator(seed, counter)
    draws = rng.random((1 << n, n)) < density
    table = (draws.astype(np.int64) << np.arange(n, dtype=np.int64)).sum(
        axis=1).astype(np.int64)
    table[0] = 0
    table = _close(carrier, table, closing)
    L = Preconvergence(carrier, table)
    for axiom in requested:
        if not check_axiom(L, axiom):
            logger.error("closure under %s failed for seed %s counter %s",
                         axiom.value, seed, counter)
            raise FalsificationError("closed table fails {0}".format(
                axiom.value))
    return L


def set_partitions(n):
    """
    Every partition of 0..n-1 as a block index per point.

    Block indices are numbered by first appearance, so the blocks come
    ordered by their lowest point.
    """
    def grow(prefix, blocks):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for b in range(blocks + 1):
            for p in grow(prefix + [b], max(blocks, b + 1)):
                yield p
    return grow([], 0)


class SearchSpec(object):
    """
    What to search for and how hard.

    Args:
        property (str): One of ``PROPERTIES``.
        max_points (int): Largest carrier tried.
        seed (Optional[int]): Generator key for sampled carriers.
        budget (Optional[int]): Candidate spaces to examine.
        constraints (Optional[iterable]): Axioms candidates must satisfy;
            default depends on the property.
        min_points (Optional[int]): Smallest carrier tried. Default is 1.

    """

    def __init__(self, property, max_points, seed=0, budget=DEFAULT_BUDGET,
                 constraints=None, min_points=1):
        if property not in PROPERTIES:
            raise InputError("unknown property {0!r}; choose from {1}".format(
                property, ", ".join(sorted(PROPERTIES))))
        if max_points < 1 or budget < 1:
            raise InputError("max_points and budget must be positive")
        if not 1 <= min_points <= max_points:
            raise InputError("min_points must lie in 1..max_points")
        self.property = property
        self.max_points = int(max_points)
        self.min_points = int(min_points)
        self.seed = int(seed)
        self.budget = int(budget)
        if constraints is None:
            constraints = PROPERTIES[property].constraints
        self.constraints = _axioms(constraints)

    def __repr__(self):
        return "SearchSpec({0!r}, max_points={1}, seed={2}, budget={3})".format(
            self.property, self.max_points, self.seed, self.budget)


class Witness(object):
    """
    A concrete instance violating a searched property.

    Args:
        property (str): The property name.
        spaces (list): The spaces involved, candidate first.
        maps (list): Map graphs involved.
        details (dict): What failed, in labels.
        seed (int): The search seed.
        instance (int): Index of the candidate within the search.
        context (Optional[dict]): Extra masks needed to replay the check.

    """

    def __init__(self, property, spaces, maps, details, seed, instance,
                 context=None):
        self.property = property
        self.spaces = list(spaces)
        self.maps = [tuple(g) for g in maps]
        self.details = details
        self.seed = seed
        self.instance = instance
        self.context = dict(context or {})

    @property
    def theorem(self):
        """True when the property is guaranteed, so the witness falsifies."""
        return self.property in THEOREM_PROPERTIES

    def __repr__(self):
        return "Witness({0!r}, instance={1}, details={2!r})".format(
            self.property, self.instance, self.details)


@functools.lru_cache(maxsize=None)
def _limit_spaces(n):
    return tuple(enumerate_spaces(n, LIMIT_AXIOMS))


def _small_targets():
    return [L for m in range(1, TARGET_POINTS + 1) for L in _limit_spaces(m)]


def _loss_table(X, Y, graph):
    """``lost[A]`` holds the limits x of A with f(x) not a limit of f[A]."""
    img = image_table(graph, X.size)
    reached = Y.limits[img]
    lost = np.zeros(1 << X.size, dtype=np.int64)
    for x, y in enumerate(graph):
        lost |= (((X.limits >> x) & 1) & ~((reached >> y) & 1)) << x
    return lost


def _piece_ok(lost, S, idx):
    return not np.any(lost[(idx & ~np.int64(S)) == 0] & S)


class _Property(object):
    constraints = LIMIT_AXIOMS

    def instances(self, X, search):
        yield [X], [], {}

    def check(self, spaces, maps, context):
        raise NotImplementedError


class _Stability(_Property):
    constraints = (Axiom.CENTERED, Axiom.ISOTONE)

    def check(self, spaces, maps, context):
        verdict = check_axiom(spaces[0], Axiom.STABLE)
        if not verdict:
            return {"witness": verdict.witness}


def _limit_failure(L):
    for axiom in LIMIT_AXIOMS:
        verdict = check_axiom(L, axiom)
        if not verdict:
            return {"axiom": axiom.value, "witness": verdict.witness}


class _QuotientLimit(_Property):

    def instances(self, X, search):
        for graph in set_partitions(X.size):
            if max(graph) + 1 < X.size:
                yield [X], [graph], {}

    def check(self, spaces, maps, context):
        X, graph = spaces[0], maps[0]
        blocks = max(graph) + 1 if graph else 0
        classes = [[X.carrier.labels[x] for x in range(X.size)
                    if graph[x] == b] for b in range(blocks)]
        labels = [c[0] if len(c) == 1 else "[" + ",".join(c) + "]"
                  for c in classes]
        Q = final([(graph, X)], Carrier(labels))
        failure = _limit_failure(Q)
        if failure:
            failure["classes"] = classes
            return failure


class _Pasting(_Property):
    """Closed (or not) 2-covers and maps into small limit targets."""

    def __init__(self, closed, stable, theorem):
        self.closed = closed
        self.stable = stable
        self.theorem = theorem
        if not stable:
            self.constraints = (Axiom.CENTERED, Axiom.ISOTONE)

    def _covers(self, X):
        full = X.carrier.full
        opens = open_sets(X)
        closed = {S: opens.is_open(full ^ S) for S in range(1, full + 1)}
        out = []
        for A in range(1, full + 1):
            for B in range(A, full + 1):
                if A | B != full:
                    continue
                both = closed[A] and closed[B]
                if both == self.closed:
                    out.append((A, B))
        return out

    def instances(self, X, search):
        if not self.stable and check_axiom(X, Axiom.STABLE):
            return
        covers = self._covers(X)
        if not covers:
            return
        idx = subset_index(X.size)
        for Y in search.targets(X.size):
            for graph in itertools.product(range(Y.size), repeat=X.size):
                lost = _loss_table(X, Y, graph)
                if not np.any(lost):
                    continue
                for A, B in covers:
                    if _piece_ok(lost, A, idx) and _piece_ok(lost, B, idx):
                        yield [X, Y], [graph], {"A": A, "B": B}

    def check(self, spaces, maps, context):
        X, Y = spaces
        graph = maps[0]
        A, B = context["A"], context["B"]
        if not self.stable and check_axiom(X, Axiom.STABLE):
            return None
        full = X.carrier.full
        if A | B != full:
            return None
        opens = open_sets(X)
        both = opens.is_open(full ^ A) and opens.is_open(full ^ B)
        if both != self.closed:
            return None
        lost = _loss_table(X, Y, graph)
        idx = subset_index(X.size)
        if not (_piece_ok(lost, A, idx) and _piece_ok(lost, B, idx)):
            return None
        if not np.any(lost):
            return None
        bad = [int(m) for m in np.nonzero(lost)[0]]
        first = min(bad, key=lambda m: (popcount(m), bits(m)))
        return {"A": X.carrier.labels_of(A), "B": X.carrier.labels_of(B),
                "base": X.carrier.labels_of(first),
                "x": X.carrier.labels_of(lost[first])[0]}


class _Partnered(_Property):
    """Binary constructions of limit spaces that must stay limit spaces."""

    def __init__(self, build, same_size):
        self.build = build
        self.same_size = same_size

    def instances(self, X, search):
        partners = (search.partners(X.size) if self.same_size
                    else _small_targets())
        for Z in partners:
            yield [X, Z], [], {}

    def check(self, spaces, maps, context):
        return _limit_failure(self.build(*spaces))


class _CompactnessTheorem(_Property):
    constraints = (Axiom.ISOTONE,)

    def check(self, spaces, maps, context):
        try:
            report = verify_compactness_theorem(spaces[0], samples=256)
        except FalsificationError as err:
            return {"error": str(err)}
        if not report.agreement:
            return {"compact": report.compact,
                    "systems_cover": report.systems_cover}


PROPERTIES = {
    "stability": _Stability(),
    "quotient-limit": _QuotientLimit(),
    "pasting-closed": _Pasting(closed=False, stable=True, theorem=False),
    "pasting-stability": _Pasting(closed=True, stable=False, theorem=False),
    "pasting": _Pasting(closed=True, stable=True, theorem=True),
    "sup-limit": _Partnered(
        lambda X, Z: lattice_op("sup", [X, Z], X.carrier), same_size=True),
    "product-limit": _Partnered(lambda X, Z: product([X, Z]),
                                same_size=False),
    "coproduct-limit": _Partnered(lambda X, Z: coproduct([X, Z]),
                                  same_size=False),
    "compactness-theorem": _CompactnessTheorem(),
}

# Properties guaranteed by a theorem; any witness falsifies it.
THEOREM_PROPERTIES = frozenset(["pasting", "sup-limit", "product-limit",
                                "coproduct-limit", "compactness-theorem"])


class _Search(object):

    def __init__(self, spec):
        self.spec = spec
        self.counter = 0

    def candidates(self, n):
        if n <= EXHAUSTIVE_POINTS:
            for L in enumerate_spaces(n, self.spec.constraints):
                yield L
        else:
            while True:
                self.counter += 1
                yield random_space(n, self.spec.seed, self.spec.constraints,
                                   counter=self.counter)

    def partners(self, n):
        if n <= EXHAUSTIVE_POINTS:
            return _limit_spaces(n)
        return [random_space(n, self.spec.seed, LIMIT_AXIOMS,
                             counter=self.counter + (1 << 32))]

    def targets(self, n):
        return _small_targets()


def search_counterexample(spec, progress=False):
    """
    Look for an instance violating a property.

    Carriers are tried from ``min_points`` to ``max_points``; on each, the
    candidate spaces, then covers, targets and maps are scanned in a fixed
    order, so the first witness is reproducible.

    Args:
        spec (SearchSpec): What to search.
        progress (Optional[bool]): Show a progress bar. Default is False.

    Returns:
        witness (Witness or None): The first violation within the budget.
    """
    prop = PROPERTIES[spec.property]
    search = _Search(spec)
    examined = 0
    bar = tqdm(total=spec.budget, disable=not progress)
    try:
        for n in range(spec.min_points, spec.max_points + 1):
            for X in search.candidates(n):
                if examined >= spec.budget:
                    logger.info("budget of %d spaces spent", spec.budget)
                    return None
                examined += 1
                bar.update(1)
                for spaces, maps, context in prop.instances(X, search):
                    details = prop.check(spaces, maps, context)
                    if details is None:
                        continue
                    w = Witness(spec.property, spaces, maps, details,
                                spec.seed, examined - 1, context)
                    if w.theorem:
                        logger.error("%s falsified: %s", spec.property,
                                     details)
                    else:
                        logger.info("%s witness on %d points after %d "
                                    "spaces", spec.property, n, examined)
                    return w
            logger.debug("%s: %d points done", spec.property, n)
    finally:
        bar.close()
    return None


def replay_witness(w):
    """
    Re-run the property check on a witness.

    Returns:
        same (bool): True when the check reports the stored violation.
    """
    prop = PROPERTIES[w.property]
    return prop.check(w.spaces, w.maps, w.context) == w.details
