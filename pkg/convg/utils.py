"""
Bit-indexed subset helpers shared by every module.

A subset of an n-point carrier is an integer whose bit i is set when point
i belongs to it. Limit tables are int64 numpy arrays of length 2^n indexed
by these masks, so most table-wide operations below are vectorised.
"""

import numpy as np

from .exceptions import TooLarge

__all__ = ["MAX_POINTS", "Verdict", "check_size", "full_mask", "subset_index",
           "bits", "popcount", "lowest_bit", "iter_submasks", "canonical_order",
           "image_mask", "preimage_mask", "image_table", "pull_back",
           "subset_or", "superset_or", "point_masks"]

# Largest carrier for which a full 2^n limit table is materialised.
MAX_POINTS = 20


def check_size(n, limit=MAX_POINTS, what="carrier"):
    """
    Refuse to build tables that would not fit in memory.

    Args:
        n (int): The number of points.
        limit (Optional[int]): The largest accepted size. Default is
            ``MAX_POINTS``.
        what (Optional[str]): What is being sized, for the error message.

    """
    if n > limit:
        raise TooLarge("{0} with {1} points exceeds the limit of {2}".format(
            what, n, limit))


def full_mask(n):
    return (1 << n) - 1


def subset_index(n):
    """
    Every mask of an n-point carrier.

    Args:
        n (int): The number of points.

    Returns:
        idx (array): ``np.arange(2**n)`` as int64.
    """
    check_size(n)
    return np.arange(1 << n, dtype=np.int64)


def bits(mask):
    """Indices of the set bits of ``mask``, in increasing order."""
    mask = int(mask)
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def popcount(mask):
    return bin(int(mask)).count("1")


def lowest_bit(mask):
    """Index of the lowest set bit, or -1 for the empty mask."""
    mask = int(mask)
    return (mask & -mask).bit_length() - 1


def iter_submasks(mask, nonempty=True):
    """
    Iterate over the submasks of ``mask`` in decreasing numeric order.

    Args:
        mask (int): The mask.
        nonempty (Optional[bool]): Skip the empty submask. Default is True.

    """
    mask = int(mask)
    sub = mask
    while sub:
        yield sub
        sub = (sub - 1) & mask
    if not nonempty:
        yield 0


def canonical_order(n):
    """
    Nonempty masks ordered by size, then lexicographically by point index.

    This is the order used for subset keys in serialised documents and for
    every "first witness" reported by the library.
    """
    check_size(n)
    return sorted(range(1, 1 << n), key=lambda m: (popcount(m), bits(m)))


def image_mask(mask, graph):
    """The image f[S] of the subset ``mask`` under the map ``graph``."""
    out = 0
    for i in bits(mask):
        out |= 1 << graph[i]
    return out


def preimage_mask(mask, graph):
    """The preimage f^-1[S] of the target subset ``mask``."""
    mask = int(mask)
    out = 0
    for i, y in enumerate(graph):
        if (mask >> y) & 1:
            out |= 1 << i
    return out


def image_table(graph, n):
    """
    Images of every subset of the source carrier.

    Args:
        graph (sequence): ``graph[i]`` is the target index of source point i.
        n (int): The source carrier size (``len(graph)``).

    Returns:
        img (array): ``img[A]`` is the mask of f[A]; ``img[0] == 0``.
    """
    idx = subset_index(n)
    img = np.zeros(1 << n, dtype=np.int64)
    for i, y in enumerate(graph):
        img |= ((idx >> i) & 1) << int(y)
    return img


def pull_back(masks, graph):
    """
    Elementwise preimages of an array of target masks.

    Args:
        masks (array): Target-carrier masks.
        graph (sequence): The map, as target indices of source points.

    Returns:
        out (array): ``out[k]`` is the preimage of ``masks[k]``.
    """
    masks = np.asarray(masks, dtype=np.int64)
    out = np.zeros_like(masks)
    for x, y in enumerate(graph):
        out |= ((masks >> int(y)) & 1) << x
    return out


def subset_or(values, n):
    """
    Zeta transform over subsets: ``out[A]`` is the OR of ``values[B]`` for
    all B contained in A.
    """
    out = np.array(values, copy=True)
    idx = subset_index(n)
    for i in range(n):
        has = ((idx >> i) & 1).astype(bool)
        out[has] |= out[idx[has] ^ (1 << i)]
    return out


def superset_or(values, n):
    """
    Zeta transform over supersets: ``out[A]`` is the OR of ``values[B]`` for
    all B containing A.
    """
    out = np.array(values, copy=True)
    idx = subset_index(n)
    for i in range(n):
        lacks = ((idx >> i) & 1) == 0
        out[lacks] |= out[idx[lacks] | (1 << i)]
    return out


def point_masks(n):
    """Singleton masks ``1 << i`` for every point i."""
    return [1 << i for i in range(n)]


class Verdict(object):
    """
    The outcome of a checkable property, with evidence when it fails.

    A Verdict is truthy exactly when the property holds, so it can be used
    directly in ``if`` statements and ``assert``s.

    Args:
        holds (bool): Whether the property holds.
        witness (Optional[dict]): Points and subsets exhibiting a failure.
    """

    __slots__ = ("holds", "witness")

    def __init__(self, holds, witness=None):
        self.holds = bool(holds)
        self.witness = witness

    def __bool__(self):
        return self.holds

    def __eq__(self, other):
        if isinstance(other, Verdict):
            return self.holds == other.holds and self.witness == other.witness
        return NotImplemented

    def __hash__(self):
        return hash(self.holds)

    def __repr__(self):
        if self.holds:
            return "Verdict(True)"
        return "Verdict(False, witness={0!r})".format(self.witness)
