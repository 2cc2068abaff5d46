"""
Carriers, subsets and proper filters on finite sets.

On a finite set every proper filter is principal, so a filter is stored as
its base (the intersection of all its members) and nothing else.
"""

import numpy as np

from .exceptions import (CarrierMismatch, EmptyBase, EmptyPreimage, InputError,
                         NoFIP, UnknownLabel)
from .utils import (bits, canonical_order, full_mask, lowest_bit, popcount,
                    preimage_mask, image_mask, subset_index)

__all__ = ["Carrier", "PointSet", "PrincipalFilter", "FiniteMap",
           "make_filter", "principal_ultrafilter", "finer", "image_filter",
           "preimage_filter", "is_ultrafilter", "satisfies_trichotomy",
           "intersect_filters", "mesh", "fip_extend", "filter_members",
           "is_proper_filter_family", "filter_from_family"]


class Carrier(object):
    """
    A finite, labelled point set.

    Args:
        labels (list): Distinct point names. Point i is ``labels[i]``.

    """

    __slots__ = ("labels", "_index")

    def __init__(self, labels):
        labels = tuple(str(label) for label in labels)
        index = {}
        for i, label in enumerate(labels):
            if label in index:
                raise InputError("duplicate point label {0!r}".format(label))
            index[label] = i
        self.labels = labels
        self._index = index

    @property
    def size(self):
        return len(self.labels)

    @property
    def full(self):
        return full_mask(len(self.labels))

    def __len__(self):
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __eq__(self, other):
        if isinstance(other, Carrier):
            return self.labels == other.labels
        return NotImplemented

    def __hash__(self):
        return hash(self.labels)

    def __repr__(self):
        return "Carrier({0!r})".format(list(self.labels))

    def index(self, label):
        try:
            return self._index[str(label)]
        except KeyError:
            raise UnknownLabel("{0!r} is not a point of {1!r}".format(
                label, self))

    def mask(self, labels):
        """The bitmask of a collection of labels."""
        out = 0
        for label in labels:
            out |= 1 << self.index(label)
        return out

    def subset(self, labels):
        """The PointSet holding ``labels``."""
        return PointSet(self, self.mask(labels))

    def labels_of(self, mask):
        return [self.labels[i] for i in bits(mask)]

    def format(self, mask):
        """Render a mask as ``{a,b}``."""
        return "{" + ",".join(self.labels_of(mask)) + "}"


class PointSet(object):
    """
    A subset of a carrier, compared extensionally.

    Args:
        carrier (Carrier): The universe.
        mask (int): Bit i set when point i belongs to the subset.

    """

    __slots__ = ("carrier", "mask")

    def __init__(self, carrier, mask):
        mask = int(mask)
        if mask < 0 or mask > carrier.full:
            raise InputError("mask {0} does not fit a carrier of {1} points"
                             .format(mask, carrier.size))
        self.carrier = carrier
        self.mask = mask

    @property
    def labels(self):
        return self.carrier.labels_of(self.mask)

    def __len__(self):
        return popcount(self.mask)

    def __iter__(self):
        return iter(self.labels)

    def __contains__(self, label):
        return bool((self.mask >> self.carrier.index(label)) & 1)

    def __bool__(self):
        return self.mask != 0

    def __eq__(self, other):
        if isinstance(other, PointSet):
            return self.carrier == other.carrier and self.mask == other.mask
        return NotImplemented

    def __hash__(self):
        return hash((self.carrier, self.mask))

    def __repr__(self):
        return "PointSet({0})".format(self.carrier.format(self.mask))

    def _other(self, other):
        if other.carrier != self.carrier:
            raise CarrierMismatch("subsets live on different carriers")
        return other.mask

    def issubset(self, other):
        m = self._other(other)
        return self.mask & ~m == 0

    def union(self, other):
        return PointSet(self.carrier, self.mask | self._other(other))

    def intersection(self, other):
        return PointSet(self.carrier, self.mask & self._other(other))

    def complement(self):
        return PointSet(self.carrier, self.carrier.full ^ self.mask)


class PrincipalFilter(object):
    """
    The proper filter of all supersets of a nonempty base.

    Use ``make_filter`` to build one; the constructor takes the raw mask.

    Args:
        carrier (Carrier): The universe.
        base (int): Mask of the base. Must be nonempty.

    """

    __slots__ = ("carrier", "base")

    def __init__(self, carrier, base):
        base = int(base)
        if base == 0:
            raise EmptyBase("a proper filter needs a nonempty base")
        if base & ~carrier.full:
            raise InputError("base does not fit the carrier")
        self.carrier = carrier
        self.base = base

    @property
    def base_set(self):
        return PointSet(self.carrier, self.base)

    def __contains__(self, subset):
        mask = subset.mask if isinstance(subset, PointSet) else int(subset)
        return self.base & ~mask == 0

    def __eq__(self, other):
        if isinstance(other, PrincipalFilter):
            return self.carrier == other.carrier and self.base == other.base
        return NotImplemented

    def __hash__(self):
        return hash((self.carrier, self.base))

    def __repr__(self):
        return "PrincipalFilter(up {0})".format(self.carrier.format(self.base))


class FiniteMap(object):
    """
    A total map between two carriers.

    Args:
        source (Carrier): The domain.
        target (Carrier): The codomain.
        graph (sequence): ``graph[i]`` is the target index of source point i.

    """

    __slots__ = ("source", "target", "graph")

    def __init__(self, source, target, graph):
        graph = tuple(int(y) for y in graph)
        if len(graph) != source.size:
            raise InputError("a map must be defined on every source point")
        if any(y < 0 or y >= target.size for y in graph):
            raise InputError("map values must be target points")
        self.source = source
        self.target = target
        self.graph = graph

    @classmethod
    def from_labels(cls, source, target, mapping):
        """Build a map from a ``{source label: target label}`` dict."""
        graph = [None] * source.size
        for key, value in mapping.items():
            graph[source.index(key)] = target.index(value)
        if any(y is None for y in graph):
            raise InputError("the map is not total on its source")
        return cls(source, target, graph)

    def __call__(self, i):
        return self.graph[i]

    def __eq__(self, other):
        if isinstance(other, FiniteMap):
            return (self.source == other.source and
                    self.target == other.target and self.graph == other.graph)
        return NotImplemented

    def __hash__(self):
        return hash((self.source, self.target, self.graph))

    def image(self, mask):
        return image_mask(mask, self.graph)

    def preimage(self, mask):
        return preimage_mask(mask, self.graph)


def _check_same(*carriers):
    first = carriers[0]
    for other in carriers[1:]:
        if other != first:
            raise CarrierMismatch("{0!r} and {1!r} differ".format(first, other))


def make_filter(base):
    """
    The filter generated by a nonempty subset.

    Args:
        base (PointSet): The base.

    Returns:
        F (PrincipalFilter): The filter of all supersets of ``base``.
    """
    return PrincipalFilter(base.carrier, base.mask)


def principal_ultrafilter(carrier, label):
    """The ultrafilter of all subsets containing ``label``."""
    return PrincipalFilter(carrier, 1 << carrier.index(label))


def finer(F, G):
    """True when every member of G belongs to F, i.e. base(F) is in base(G)."""
    _check_same(F.carrier, G.carrier)
    return F.base & ~G.base == 0


def image_filter(f, F):
    """
    The filter generated by the images of the members of F.

    Args:
        f (FiniteMap): A map whose source is the carrier of F.
        F (PrincipalFilter): The filter.

    Returns:
        G (PrincipalFilter): The filter generated by f[base(F)].
    """
    _check_same(f.source, F.carrier)
    return PrincipalFilter(f.target, f.image(F.base))


def preimage_filter(f, G):
    """
    The filter generated by the preimages of the members of G.

    Raises:
        EmptyPreimage: When some member (equivalently the base) of G has an
            empty preimage.
    """
    _check_same(f.target, G.carrier)
    base = f.preimage(G.base)
    if base == 0:
        raise EmptyPreimage("no source point maps into {0}".format(
            G.carrier.format(G.base)))
    return PrincipalFilter(f.source, base)


def is_ultrafilter(F):
    return popcount(F.base) == 1


def satisfies_trichotomy(F):
    """Check that exactly one of A and its complement belongs to F, for all A."""
    n = F.carrier.size
    idx = subset_index(n)
    comp = full_mask(n) ^ idx
    inside = (idx & F.base) == F.base
    outside = (comp & F.base) == F.base
    return bool(np.all(inside ^ outside))


def intersect_filters(F, G):
    """The family F ∩ G, generated by the union of the bases."""
    _check_same(F.carrier, G.carrier)
    return PrincipalFilter(F.carrier, F.base | G.base)


def mesh(F, S):
    """True when every member of F meets S."""
    _check_same(F.carrier, S.carrier)
    return F.base & S.mask != 0


def fip_extend(family, carrier=None):
    """
    Extend a family with the finite intersection property to an ultrafilter.

    The ultrafilter chosen is the one at the lowest-index point common to
    every member.

    Args:
        family (list): PointSets.
        carrier (Optional[Carrier]): Needed only when the family is empty.

    Returns:
        u (PrincipalFilter): A principal ultrafilter containing the family.
    """
    if carrier is None:
        if not family:
            raise InputError("an empty family needs an explicit carrier")
        carrier = family[0].carrier
    _check_same(carrier, *[S.carrier for S in family])
    common = carrier.full
    for S in family:
        common &= S.mask
    if common == 0:
        raise NoFIP("the family has empty intersection")
    return PrincipalFilter(carrier, 1 << lowest_bit(common))


def filter_members(F):
    """All members of F, in size-then-index order."""
    return [PointSet(F.carrier, m) for m in canonical_order(F.carrier.size)
            if F.base & ~m == 0]


def is_proper_filter_family(carrier, family):
    """
    Decide whether a family of masks is a proper filter.

    The family must be nonempty, omit the empty set, and be closed under
    binary intersection and under supersets.
    """
    members = set(int(m) for m in family)
    if not members or 0 in members:
        return False
    for m in members:
        for k in members:
            if m & k not in members:
                return False
    full = carrier.full
    for m in members:
        rest = full ^ m
        for i in bits(rest):
            if m | (1 << i) not in members:
                return False
    return True


def filter_from_family(carrier, family):
    """
    The principal filter equal to a proper filter given by its members.

    Raises:
        InputError: When the family is not a proper filter.
    """
    if not is_proper_filter_family(carrier, family):
        raise InputError("the family is not a proper filter")
    base = carrier.full
    for m in family:
        base &= int(m)
    return PrincipalFilter(carrier, base)
