"""
Compactness and convergence systems.

A space is compact when every proper filter has a convergent refinement.
A convergence system is a family of subsets such that every convergent
filter contains one of its members. For isotone spaces, compactness holds
exactly when every convergence system has a finite subcover; on a finite
carrier that means every convergence system covers the carrier.
"""

import itertools
import logging
from collections import namedtuple

import numpy as np

from .constructions import is_continuous
from .exceptions import (FalsificationError, InputError, NotContinuous,
                         NotIsotone, NotValidated, PreconditionFailed,
                         TooLarge)
from .filters import PointSet
from .spaces import Axiom, check_axiom
from .utils import (Verdict, bits, canonical_order, lowest_bit, popcount,
                    subset_index, subset_or)

logger = logging.getLogger(__name__)

__all__ = ["MAX_FAMILY_POINTS", "ConvergenceSystem", "CompactnessReport",
           "is_compact", "noncompact_base", "is_convergence_system",
           "covers", "finite_subcover", "ultrafilter_system",
           "verify_compactness_theorem", "preimage_system", "image_compact"]

# Largest carrier whose 2^(2^n) families are enumerated exhaustively.
MAX_FAMILY_POINTS = 3


def _masks(L, family):
    out = []
    for C in family:
        if isinstance(C, PointSet):
            out.append(C.mask)
        elif isinstance(C, (int, np.integer)):
            out.append(int(C))
        else:
            out.append(L.carrier.mask(C))
    for m in out:
        if m < 0 or m & ~L.carrier.full:
            raise InputError("family members must be subsets of the carrier")
    return out


def noncompact_base(L):
    """
    The first base with no convergent nonempty subset, or None.
    """
    converging = (L.limits != 0).astype(np.int64)
    converging[0] = 0
    below = subset_or(converging, L.size)
    bad = np.nonzero(below == 0)[0]
    bad = bad[bad != 0]
    if len(bad) == 0:
        return None
    return min((int(A) for A in bad), key=lambda m: (popcount(m), bits(m)))


def is_compact(L):
    """True when every nonempty base contains a convergent nonempty base."""
    return noncompact_base(L) is None


def is_convergence_system(L, family):
    """
    Check that every convergent base lies inside some family member.

    Args:
        L (Preconvergence): The space.
        family (list): PointSets, masks or label lists.

    Returns:
        verdict (Verdict): On failure the witness is the first uncovered
            convergent base A and one of its limits x.
    """
    masks = _masks(L, family)
    idx = subset_index(L.size)
    inside = np.zeros(1 << L.size, dtype=bool)
    for C in masks:
        inside |= (idx & ~np.int64(C)) == 0
    bad = np.nonzero((L.limits != 0) & ~inside)[0]
    if len(bad) == 0:
        return Verdict(True)
    A = min((int(m) for m in bad), key=lambda m: (popcount(m), bits(m)))
    return Verdict(False, {"A": L.carrier.labels_of(A),
                           "x": L.carrier.labels[lowest_bit(L.limits[A])]})


def covers(L, family):
    """True when the members of the family cover the carrier."""
    union = 0
    for C in _masks(L, family):
        union |= C
    return union == L.carrier.full


class ConvergenceSystem(object):
    """
    A family of subsets of a space, validated on demand.

    Args:
        space (Preconvergence): The space.
        family (list): PointSets, masks or label lists. Order and repeats
            are kept.

    """

    def __init__(self, space, family):
        self.space = space
        self.family = tuple(_masks(space, family))
        self.validated = False

    @property
    def members(self):
        return [PointSet(self.space.carrier, m) for m in self.family]

    def validate(self):
        """Run ``is_convergence_system`` and remember a pass."""
        verdict = is_convergence_system(self.space, self.family)
        self.validated = verdict.holds
        return verdict

    def covers(self):
        return covers(self.space, self.family)

    def __repr__(self):
        return "ConvergenceSystem({0})".format(", ".join(
            self.space.carrier.format(m) for m in self.family))


def finite_subcover(L, system):
    """
    A smallest subfamily covering the carrier.

    Members are tried in canonical order (size, then point index), so ties
    go to the lexicographically first subfamily.

    Args:
        L (Preconvergence): The space.
        system (ConvergenceSystem): A validated system on L.

    Returns:
        cover (list or None): PointSets, or None when no subfamily covers.
    """
    if not system.validated:
        raise NotValidated("validate the convergence system first")
    full = L.carrier.full
    rank = {m: k for k, m in enumerate(canonical_order(L.size))}
    members = sorted(system.family, key=lambda m: rank.get(m, -1))
    for r in range(len(members) + 1):
        for combo in itertools.combinations(members, r):
            union = 0
            for C in combo:
                union |= C
            if union == full:
                return [PointSet(L.carrier, C) for C in combo]
    if is_compact(L):
        logger.error("compact %r has a convergence system without subcover",
                     L)
        raise FalsificationError("a convergence system of a compact space "
                                 "has no finite subcover")
    return None


def ultrafilter_system(L, x):
    """
    Every subset missing the point x (a label or index).

    When the ultrafilter at x does not converge and L is isotone this is a
    convergence system that does not cover the carrier.
    """
    x = L.carrier.index(x) if isinstance(x, str) else int(x)
    return ConvergenceSystem(L, [m for m in range(1 << L.size)
                                 if not (m >> x) & 1])


CompactnessReport = namedtuple("CompactnessReport", [
    "compact", "systems_cover", "agreement", "systems", "witness"])


def _family_batch(L, codes):
    """Validity and coverage of the families encoded by ``codes``."""
    n = L.size
    idx = subset_index(n)
    member = ((codes[:, None] >> idx[None, :]) & 1).astype(np.int64)
    contains = ((idx[None, :] & ~idx[:, None]) == 0).astype(np.int64)
    inside = (member @ contains) > 0
    converging = L.limits != 0
    valid = np.all(inside[:, converging], axis=1)
    union = np.bitwise_or.reduce(np.where(member == 1, idx[None, :], 0),
                                 axis=1)
    return valid, union == L.carrier.full


def verify_compactness_theorem(L, samples=None, seed=0):
    """
    Check compactness against "every convergence system covers".

    Up to ``MAX_FAMILY_POINTS`` points every family of subsets is tried;
    larger carriers need ``samples`` random families.

    Args:
        L (Preconvergence): An isotone space.
        samples (Optional[int]): Random families to draw above the
            exhaustive size.
        seed (Optional[int]): Seed for the sampled families.

    Returns:
        report (CompactnessReport): The two verdicts, whether they agree,
            the number of convergence systems seen and, for a non-compact
            space, the uncovering system built from a divergent ultrafilter.
    """
    n = L.size
    if not check_axiom(L, Axiom.ISOTONE):
        raise NotIsotone("the compactness theorem needs an isotone space")
    exhaustive = n <= MAX_FAMILY_POINTS
    if exhaustive:
        codes = np.arange(1 << (1 << n), dtype=np.int64)
    elif samples:
        if n > 5:
            raise TooLarge("families of subsets are sampled up to 5 points")
        rng = np.random.Generator(np.random.Philox(key=seed))
        codes = rng.integers(0, 1 << (1 << n), size=samples, dtype=np.uint64)
        codes = codes.astype(np.int64)
    else:
        raise TooLarge("exhaustive family search stops at {0} points".format(
            MAX_FAMILY_POINTS))
    valid, cover = _family_batch(L, codes)
    systems_cover = bool(np.all(cover[valid]))
    compact = is_compact(L)
    if compact and not systems_cover:
        logger.error("compact %r has an uncovering convergence system", L)
        raise FalsificationError("compact space with a non-covering system")
    witness = None
    if not compact:
        x = next(i for i in range(n) if L.limits[1 << i] == 0)
        witness = ultrafilter_system(L, x)
        if not witness.validate() or witness.covers():
            logger.error("ultrafilter system at %s fails on %r",
                         L.carrier.labels[x], L)
            raise FalsificationError("the divergent-ultrafilter system is "
                                     "not an uncovering convergence system")
        if not exhaustive:
            systems_cover = False
    return CompactnessReport(compact, systems_cover, compact == systems_cover,
                             int(np.count_nonzero(valid)), witness)


def preimage_system(f, system):
    """
    Pull a convergence system back along a continuous map.

    Args:
        f (SpaceMap): A continuous map.
        system (ConvergenceSystem): A validated system on ``f.target``.

    Returns:
        pulled (ConvergenceSystem): The preimages, validated on ``f.source``.
    """
    if not is_continuous(f):
        raise NotContinuous("convergence systems pull back along continuous "
                            "maps only")
    if not system.validated or system.space.carrier != f.target.carrier:
        raise NotValidated("the system must be validated on the target")
    pulled = ConvergenceSystem(f.source, [f.carrier_map.preimage(C)
                                          for C in system.family])
    if not pulled.validate():
        logger.error("preimage system of %r is invalid", system)
        raise FalsificationError("the preimage of a convergence system is "
                                 "not a convergence system")
    return pulled


def image_compact(f):
    """
    Compactness of the target of a continuous surjection with compact source.

    Returns:
        compact (bool): Always True; a failure raises
            ``FalsificationError``.
    """
    if not is_continuous(f):
        raise PreconditionFailed("the map is not continuous")
    if f.carrier_map.image(f.source.carrier.full) != f.target.carrier.full:
        raise PreconditionFailed("the map is not onto")
    if not is_compact(f.source):
        raise PreconditionFailed("the source is not compact")
    if not is_compact(f.target):
        logger.error("continuous image of compact %r is not compact",
                     f.source)
        raise FalsificationError("continuous image of a compact space is "
                                 "not compact")
    return True
