"""
Preconvergences on finite carriers.

A preconvergence assigns to every proper filter its set of limit points. On
a finite carrier the filters are the nonempty subsets (their bases), so a
preconvergence is a table ``limits`` of length 2^n with ``limits[A]`` the
mask of points the filter generated by A converges to, and ``limits[0] = 0``.

This module classifies tables against the standard axioms, orders them,
computes inherence, adherence and the induced topology, and provides the
topological, limit and convergence modifications.
"""

import enum
import itertools
import logging
from collections import namedtuple

import matplotlib.pyplot as plt
import networkx as nx
import numpy as np
import pandas as pd

from .exceptions import (CarrierMismatch, FalsificationError, InputError,
                         NotAConvergence, TooLarge)
from .filters import Carrier, PointSet, PrincipalFilter
from .utils import (Verdict, bits, canonical_order, check_size, full_mask,
                    lowest_bit, popcount, subset_index, superset_or)

logger = logging.getLogger(__name__)

__all__ = ["Axiom", "Order", "LIMIT_AXIOMS", "Preconvergence", "FiniteTopology",
           "AxiomReport", "SetClass", "discrete_topology", "indiscrete_topology",
           "all_topologies", "from_topology", "check_axiom", "axiom_report",
           "compare", "lattice_op", "convergence_hulls", "inherence",
           "adherence", "open_sets", "classify_set",
           "topological_modification", "limit_modification",
           "convergence_modification", "specialization_graph", "is_limit_space",
           "ultrafilter_meet"]


class Axiom(enum.Enum):
    CENTERED = "centered"
    ISOTONE = "isotone"
    STABLE = "stable"
    KENT = "kent"
    PRETOPOLOGICAL = "pretopological"
    PSEUDOTOPOLOGICAL = "pseudotopological"
    TOPOLOGICAL = "topological"


class Order(enum.Enum):
    FINER = "finer"
    COARSER = "coarser"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


LIMIT_AXIOMS = (Axiom.CENTERED, Axiom.ISOTONE, Axiom.STABLE)

SetClass = namedtuple("SetClass", ["open", "closed"])


def _mask(S):
    return S.mask if isinstance(S, PointSet) else int(S)


def _first(masks):
    """The first mask of a collection in size-then-index order."""
    return min((int(m) for m in masks), key=lambda m: (popcount(m), bits(m)))


class Preconvergence(object):
    """
    A limit table on a finite carrier.

    The table is read-only once built; every operation returns a new space.

    Args:
        carrier (Carrier): The points.
        limits (array): Length 2^n; ``limits[A]`` is the limit mask of the
            filter with base A. ``limits[0]`` must be 0.
        name (Optional[str]): A display name, carried into documents.
        metadata (Optional[dict]): Free-form document fields such as a
            description or provenance.

    """

    def __init__(self, carrier, limits, name=None, metadata=None):
        check_size(carrier.size)
        table = np.array(limits, dtype=np.int64)
        if table.shape != (1 << carrier.size,):
            raise InputError("a table on {0} points needs {1} entries".format(
                carrier.size, 1 << carrier.size))
        if table[0] != 0:
            raise InputError("the empty set is not a filter base")
        if np.any(table < 0) or np.any(table & ~np.int64(carrier.full)):
            raise InputError("limit entries must be subsets of the carrier")
        table.setflags(write=False)
        self.carrier = carrier
        self.limits = table
        self.name = name
        self.metadata = dict(metadata or {})
        self._report = None
        self._hulls = None

    @classmethod
    def from_sets(cls, carrier, entries, name=None):
        """
        Build a table from ``{base labels: limit labels}``; missing bases
        get no limits.
        """
        table = np.zeros(1 << carrier.size, dtype=np.int64)
        for base, lim in entries.items():
            A = carrier.mask(base)
            if A == 0:
                raise InputError("the empty set is not a filter base")
            table[A] = carrier.mask(lim)
        return cls(carrier, table, name=name)

    @classmethod
    def chaotic(cls, carrier):
        """Every filter converges to every point."""
        table = np.full(1 << carrier.size, carrier.full, dtype=np.int64)
        table[0] = 0
        return cls(carrier, table)

    @classmethod
    def empty(cls, carrier):
        """No filter converges."""
        return cls(carrier, np.zeros(1 << carrier.size, dtype=np.int64))

    @property
    def size(self):
        return self.carrier.size

    def limit(self, A):
        """The limit set of the filter with base A, as a PointSet."""
        A = _mask(A)
        if A == 0:
            raise InputError("the empty set is not a filter base")
        return PointSet(self.carrier, self.limits[A])

    def converges(self, F, x):
        """True when the filter F (or base mask) converges to point index x."""
        base = F.base if isinstance(F, PrincipalFilter) else _mask(F)
        return bool((self.limits[base] >> x) & 1)

    def relabel(self, carrier, name=None):
        """The same table over a carrier of equal size with other labels."""
        if carrier.size != self.carrier.size:
            raise CarrierMismatch("relabelling needs equal sizes")
        return Preconvergence(carrier, self.limits, name=name)

    def __eq__(self, other):
        if isinstance(other, Preconvergence):
            return (self.carrier == other.carrier and
                    np.array_equal(self.limits, other.limits))
        return NotImplemented

    def __hash__(self):
        return hash((self.carrier, self.limits.tobytes()))

    def __repr__(self):
        return "Preconvergence({0}{1})".format(
            self.name + ", " if self.name else "", list(self.carrier.labels))

    def to_frame(self):
        """
        The limit table as a boolean DataFrame.

        Returns:
            frame (DataFrame): One row per nonempty base in size-then-index
                order, one column per point.
        """
        order = canonical_order(self.size)
        rows = [[bool((self.limits[A] >> x) & 1) for x in range(self.size)]
                for A in order]
        return pd.DataFrame(rows, columns=list(self.carrier.labels),
                            index=[self.carrier.format(A) for A in order])

    def table_plot(self, return_fig=False):
        """
        Make a plot of the limit table: filled cells mark convergence.

        """
        frame = self.to_frame()
        fig = plt.figure(figsize=(2 + .6 * self.size, 1 + .3 * len(frame)))
        plt.imshow(frame.values.astype(int), cmap="Greys", aspect="auto",
                   vmin=0, vmax=1)
        plt.xticks(range(self.size), frame.columns)
        plt.yticks(range(len(frame)), frame.index)
        plt.xlabel("limit point")
        plt.ylabel("filter base")
        plt.subplots_adjust(left=.3, bottom=.15)
        if return_fig:
            return fig


class FiniteTopology(object):
    """
    A topology on a finite carrier, given by its open sets.

    Args:
        carrier (Carrier): The points.
        opens (iterable): Open sets as masks or PointSets. Must contain the
            empty set and the carrier and be closed under unions and
            intersections.

    """

    def __init__(self, carrier, opens):
        masks = sorted(set(_mask(U) for U in opens))
        family = frozenset(masks)
        full = carrier.full
        if 0 not in family or full not in family:
            raise InputError("a topology contains the empty set and the carrier")
        for U, V in itertools.combinations(masks, 2):
            if U | V not in family or U & V not in family:
                raise InputError("{0} and {1} break closure".format(
                    carrier.format(U), carrier.format(V)))
        self.carrier = carrier
        self.opens = tuple(masks)
        self._family = family
        neighborhoods = []
        for x in range(carrier.size):
            U = full
            for V in masks:
                if (V >> x) & 1:
                    U &= V
            neighborhoods.append(U)
        self.neighborhoods = tuple(neighborhoods)

    def __len__(self):
        return len(self.opens)

    def __contains__(self, S):
        return _mask(S) in self._family

    def __eq__(self, other):
        if isinstance(other, FiniteTopology):
            return self.carrier == other.carrier and self.opens == other.opens
        return NotImplemented

    def __hash__(self):
        return hash((self.carrier, self.opens))

    def __repr__(self):
        return "FiniteTopology({0})".format(
            ", ".join(self.carrier.format(U) for U in self.opens))

    def is_open(self, S):
        return _mask(S) in self._family

    def minimal_neighborhood(self, x):
        """The smallest open set containing point index x."""
        return self.neighborhoods[x]

    def interior(self, S):
        S = _mask(S)
        return PointSet(self.carrier, sum(
            1 << x for x in range(self.carrier.size)
            if (S >> x) & 1 and self.neighborhoods[x] & ~S == 0))

    def closure(self, S):
        S = _mask(S)
        return PointSet(self.carrier, sum(
            1 << x for x in range(self.carrier.size)
            if self.neighborhoods[x] & S))


def discrete_topology(carrier):
    return FiniteTopology(carrier, range(1 << carrier.size))


def indiscrete_topology(carrier):
    return FiniteTopology(carrier, [0, carrier.full])


def all_topologies(carrier):
    """
    Every topology on a carrier of at most four points.

    Families are enumerated over the subsets other than the empty set and
    the carrier, so the result comes in a fixed order.
    """
    n = carrier.size
    if n > 4:
        raise TooLarge("topologies are enumerated up to 4 points")
    full = carrier.full
    middle = [m for m in range(1, full)]
    found = []
    for code in range(1 << len(middle)):
        family = {0, full}
        family.update(m for k, m in enumerate(middle) if (code >> k) & 1)
        closed = all(U | V in family and U & V in family
                     for U in family for V in family)
        if closed:
            found.append(FiniteTopology(carrier, family))
    return found


def from_topology(tau):
    """
    The convergence of a topology: A converges to x when A lies inside the
    minimal open neighbourhood of x.

    Args:
        tau (FiniteTopology): The topology.

    Returns:
        L (Preconvergence): The induced table.
    """
    n = tau.carrier.size
    idx = subset_index(n)
    table = np.zeros(1 << n, dtype=np.int64)
    for x, U in enumerate(tau.neighborhoods):
        table |= ((idx & ~np.int64(U)) == 0).astype(np.int64) << x
    table[0] = 0
    return Preconvergence(tau.carrier, table)


def convergence_hulls(L):
    """
    For every point x, the union V_x of all bases converging to x.

    Returns:
        hulls (array): ``hulls[x]`` is V_x; 0 when nothing converges to x.
    """
    if L._hulls is None:
        idx = subset_index(L.size)
        hulls = np.zeros(L.size, dtype=np.int64)
        for x in range(L.size):
            hit = ((L.limits >> x) & 1).astype(bool)
            if np.any(hit):
                hulls[x] = np.bitwise_or.reduce(idx[hit])
        hulls.setflags(write=False)
        L._hulls = hulls
    return L._hulls


def ultrafilter_meet(L):
    """``meet[A]`` is the intersection of the limits of u_x over x in A."""
    n = L.size
    idx = subset_index(n)
    meet = np.full(1 << n, full_mask(n), dtype=np.int64)
    for i in range(n):
        has = ((idx >> i) & 1).astype(bool)
        meet[has] &= L.limits[1 << i]
    meet[0] = 0
    return meet


def _labels(L, mask):
    return L.carrier.labels_of(mask)


def _point(L, x):
    return L.carrier.labels[x]


def _check_centered(L):
    for x in range(L.size):
        if not (L.limits[1 << x] >> x) & 1:
            return Verdict(False, {"x": _point(L, x)})
    return Verdict(True)


def _check_isotone(L):
    n = L.size
    idx = subset_index(n)
    lim = L.limits
    bad = []
    for i in range(n):
        A = idx[(((idx >> i) & 1) == 1) & (idx != (1 << i))]
        B = A ^ (1 << i)
        lost = lim[A] & ~lim[B]
        bad.extend(zip(A[lost != 0].tolist(), B[lost != 0].tolist()))
    if not bad:
        return Verdict(True)
    A, B = min(bad, key=lambda p: (popcount(p[0]), bits(p[0]),
                                   popcount(p[1]), bits(p[1])))
    x = lowest_bit(lim[A] & ~lim[B])
    return Verdict(False, {"A": _labels(L, A), "B": _labels(L, B),
                           "x": _point(L, x)})


def _check_stable(L, isotone):
    lim = L.limits
    order = canonical_order(L.size)
    for x in range(L.size):
        converging = [A for A in order if (lim[A] >> x) & 1]
        if not converging:
            continue
        if isotone:
            # under isotony it is enough that the running union converges
            U = converging[0]
            for A in converging[1:]:
                if not (lim[U | A] >> x) & 1:
                    return Verdict(False, {"A": _labels(L, U),
                                           "B": _labels(L, A),
                                           "x": _point(L, x)})
                U |= A
        else:
            for A, B in itertools.combinations(converging, 2):
                if not (lim[A | B] >> x) & 1:
                    return Verdict(False, {"A": _labels(L, A),
                                           "B": _labels(L, B),
                                           "x": _point(L, x)})
    return Verdict(True)


def _check_kent(L):
    idx = subset_index(L.size)
    lim = L.limits
    for x in range(L.size):
        has = ((lim >> x) & 1) == 1
        kept = ((lim[idx | (1 << x)] >> x) & 1) == 1
        bad = idx[has & ~kept]
        if len(bad):
            A = _first(bad)
            return Verdict(False, {"A": _labels(L, A), "x": _point(L, x)})
    return Verdict(True)


def _check_pseudotopological(L):
    meet = ultrafilter_meet(L)
    diff = np.nonzero(meet != L.limits)[0]
    if len(diff) == 0:
        return Verdict(True)
    A = _first(diff)
    x = lowest_bit(meet[A] ^ L.limits[A])
    return Verdict(False, {"A": _labels(L, A), "x": _point(L, x)})


def _check_pretopological(L):
    hulls = convergence_hulls(L)
    for x in range(L.size):
        V = int(hulls[x])
        if V and not (L.limits[V] >> x) & 1:
            return Verdict(False, {"x": _point(L, x), "V": _labels(L, V)})
    return Verdict(True)


def _check_topological(L):
    T = topological_modification(L, check=False)
    diff = np.nonzero(T.limits != L.limits)[0]
    if len(diff) == 0:
        return Verdict(True)
    order = sorted((int(A) for A in diff),
                   key=lambda m: (popcount(m), bits(m)))
    A = order[0]
    return Verdict(False, {"A": _labels(L, A),
                           "limits": _labels(L, L.limits[A]),
                           "induced": _labels(L, T.limits[A]),
                           "bases": [_labels(L, B) for B in order]})


def check_axiom(L, axiom):
    """
    Decide one axiom at the filter level.

    Args:
        L (Preconvergence): The space.
        axiom (Axiom or str): Which axiom.

    Returns:
        verdict (Verdict): Truthy when the axiom holds; otherwise the
            witness names the offending bases and point.
    """
    axiom = Axiom(axiom)
    if axiom is Axiom.CENTERED:
        return _check_centered(L)
    if axiom is Axiom.ISOTONE:
        return _check_isotone(L)
    if axiom is Axiom.STABLE:
        return _check_stable(L, bool(_check_isotone(L)))
    if axiom is Axiom.KENT:
        return _check_kent(L)
    if axiom is Axiom.PRETOPOLOGICAL:
        return _check_pretopological(L)
    if axiom is Axiom.PSEUDOTOPOLOGICAL:
        return _check_pseudotopological(L)
    return _check_topological(L)


class AxiomReport(object):
    """
    All seven axiom verdicts of one space.

    Args:
        verdicts (dict): ``Axiom -> Verdict``.

    """

    def __init__(self, verdicts):
        self.verdicts = dict(verdicts)

    def __getitem__(self, axiom):
        return self.verdicts[Axiom(axiom)]

    def holds(self, *axioms):
        return all(self.verdicts[Axiom(a)].holds for a in axioms)

    @property
    def is_convergence(self):
        return self.holds(Axiom.CENTERED, Axiom.ISOTONE)

    @property
    def is_limit(self):
        return self.holds(*LIMIT_AXIOMS)

    def to_dict(self):
        out = {}
        for axiom, verdict in self.verdicts.items():
            out[axiom.value] = {"holds": verdict.holds,
                                "witness": verdict.witness}
        return out

    def to_frame(self):
        return pd.DataFrame(
            [[a.value, v.holds, v.witness] for a, v in self.verdicts.items()],
            columns=["axiom", "holds", "witness"]).set_index("axiom")

    def notes(self):
        """Dependency notes that qualify the flags."""
        if not self.holds(Axiom.ISOTONE):
            return ["stable is only meaningful for isotone spaces"]
        return []


def _meta_violations(report):
    holds = report.holds
    out = []
    if holds(Axiom.TOPOLOGICAL) and not holds(Axiom.PRETOPOLOGICAL,
                                               *LIMIT_AXIOMS):
        out.append("topological without pretopological and limit axioms")
    if holds(Axiom.PSEUDOTOPOLOGICAL) and not holds(Axiom.ISOTONE,
                                                    Axiom.STABLE):
        out.append("pseudotopological without isotone and stable")
    if holds(Axiom.ISOTONE, Axiom.PRETOPOLOGICAL) and not holds(
            Axiom.PSEUDOTOPOLOGICAL):
        out.append("isotone pretopological but not pseudotopological")
    return out


def axiom_report(L):
    """
    Check every axiom and the implications between them.

    The report is cached on the space.

    Returns:
        report (AxiomReport): One Verdict per axiom.
    """
    if L._report is None:
        report = AxiomReport({a: check_axiom(L, a) for a in Axiom})
        broken = _meta_violations(report)
        if broken:
            logger.error("axiom implications fail on %r: %s", L, broken)
            raise FalsificationError("; ".join(broken))
        L._report = report
    return L._report


def is_limit_space(L):
    return axiom_report(L).is_limit


def _same_carrier(L, M):
    if L.carrier != M.carrier:
        raise CarrierMismatch("{0!r} and {1!r} live on different carriers"
                              .format(L, M))


def compare(L, M):
    """
    Where L sits relative to M.

    Returns:
        order (Order): ``FINER`` when every limit of L is a limit of M,
            ``COARSER`` for the converse, ``EQUAL`` or ``INCOMPARABLE``.
    """
    _same_carrier(L, M)
    below = not np.any(L.limits & ~M.limits)
    above = not np.any(M.limits & ~L.limits)
    if below and above:
        return Order.EQUAL
    if below:
        return Order.FINER
    if above:
        return Order.COARSER
    return Order.INCOMPARABLE


def lattice_op(kind, family, carrier):
    """
    Supremum or infimum of a family of preconvergences.

    Args:
        kind (str): ``"sup"`` (entrywise intersection, chaotic for an empty
            family) or ``"inf"`` (entrywise union, empty for an empty family).
        family (list): Preconvergences on ``carrier``.
        carrier (Carrier): The common carrier.

    """
    for L in family:
        if L.carrier != carrier:
            raise CarrierMismatch("every member must live on the carrier")
    if kind == "sup":
        table = Preconvergence.chaotic(carrier).limits.copy()
        for L in family:
            table &= L.limits
    elif kind == "inf":
        table = np.zeros(1 << carrier.size, dtype=np.int64)
        for L in family:
            table |= L.limits
    else:
        raise InputError("kind must be 'sup' or 'inf', not {0!r}".format(kind))
    return Preconvergence(carrier, table)


def inherence(L, S):
    """Points all of whose converging filters contain S."""
    S = _mask(S)
    hulls = convergence_hulls(L)
    return PointSet(L.carrier, sum(1 << x for x in range(L.size)
                                   if int(hulls[x]) & ~S == 0))


def adherence(L, S):
    """Union of the limits of the filters meshing with S."""
    S = _mask(S)
    idx = subset_index(L.size)
    hit = L.limits[(idx & S) != 0]
    out = int(np.bitwise_or.reduce(hit)) if len(hit) else 0
    return PointSet(L.carrier, out)


def open_sets(L):
    """
    The induced topology: S is open when S lies in its own inherence.

    Returns:
        tau (FiniteTopology): The open sets.
    """
    n = L.size
    idx = subset_index(n)
    hulls = convergence_hulls(L)
    ok = np.ones(1 << n, dtype=bool)
    for x in range(n):
        inside = ((idx >> x) & 1) == 1
        ok &= ~inside | ((np.int64(hulls[x]) & ~idx) == 0)
    try:
        return FiniteTopology(L.carrier, idx[ok].tolist())
    except InputError as err:
        logger.error("open sets of %r are not a topology", L)
        raise FalsificationError(str(err))


def classify_set(L, S):
    """
    Whether S is open and whether it is closed.

    For isotone spaces closedness is cross-checked against "every filter
    inside S has its limits inside S".

    Returns:
        cls (SetClass): ``(open, closed)``.
    """
    S = _mask(S)
    full = L.carrier.full
    is_open = S & ~inherence(L, S).mask == 0
    comp = full ^ S
    is_closed = comp & ~inherence(L, comp).mask == 0
    if axiom_report(L).holds(Axiom.ISOTONE):
        sub = [A for A in range(1, full + 1) if A & ~S == 0]
        by_limits = all(int(L.limits[A]) & ~S == 0 for A in sub)
        if by_limits != is_closed:
            logger.error("closedness of %s disagrees on %r",
                         L.carrier.format(S), L)
            raise FalsificationError("closed-set characterisations disagree")
    return SetClass(bool(is_open), bool(is_closed))


def topological_modification(L, check=True):
    """
    The convergence of the induced topology.

    The result is always at least as coarse as L; with ``check`` on, this is
    verified for convergences.
    """
    T = from_topology(open_sets(L))
    if check and axiom_report(L).is_convergence:
        if compare(L, T) not in (Order.FINER, Order.EQUAL):
            logger.error("topological modification of %r is not coarser", L)
            raise FalsificationError("topological modification is not coarser")
    return T


def limit_modification(L):
    """
    The greatest limit convergence coarser than or equal to L.

    A base A converges to x when A lies inside V_x, the union of every base
    converging to x in L.

    Args:
        L (Preconvergence): A centered, isotone space.

    Returns:
        M (Preconvergence): A limit convergence.
    """
    if not axiom_report(L).is_convergence:
        raise NotAConvergence("limit modification needs a centered, "
                              "isotone space")
    n = L.size
    idx = subset_index(n)
    table = np.zeros(1 << n, dtype=np.int64)
    for x, V in enumerate(convergence_hulls(L)):
        table |= ((idx & ~np.int64(V)) == 0).astype(np.int64) << x
    table[0] = 0
    return Preconvergence(L.carrier, table)


def convergence_modification(L):
    """
    The finest centered, isotone space coarser than or equal to L.

    Each point is added to the limits of its ultrafilter, then limits are
    pushed down from every base to its nonempty subsets.
    """
    table = np.array(L.limits, copy=True)
    for x in range(L.size):
        table[1 << x] |= 1 << x
    table = superset_or(table, L.size)
    table[0] = 0
    return Preconvergence(L.carrier, table)


def specialization_graph(L):
    """
    The specialisation preorder of the induced topology.

    Args:
        L (Preconvergence or FiniteTopology): The space or topology.

    Returns:
        graph (DiGraph): Nodes are labels; an edge x -> y means x lies in
            the closure of {y}. Self-loops are omitted.
    """
    tau = L if isinstance(L, FiniteTopology) else open_sets(L)
    labels = tau.carrier.labels
    graph = nx.DiGraph()
    graph.add_nodes_from(labels)
    for y in range(len(labels)):
        closure = tau.closure(1 << y).mask
        for x in bits(closure):
            if x != y:
                graph.add_edge(labels[x], labels[y])
    return graph
