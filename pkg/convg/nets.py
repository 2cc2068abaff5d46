"""
Finite directed sets and nets.

Nets are only ever quantified over small explicit domains here. Their job is
to re-derive axiom verdicts independently of the filter-level reductions in
``convg.spaces``; see ``NetOracle``.
"""

import functools
import itertools
import logging

import numpy as np

from .exceptions import (CarrierMismatch, DomainMismatch, EmptyDomain,
                         InputError, NotDirected)
from .filters import (Carrier, PrincipalFilter, filter_members, finer,
                      is_ultrafilter)
from .utils import bits, check_size, full_mask

logger = logging.getLogger(__name__)

__all__ = ["DirectedSet", "Net", "LEFT", "RIGHT", "ORACLE_DOMAIN_SIZE",
           "check_directed", "induced_filter", "is_subnet", "mix",
           "canonical_net", "constant_net", "lift_to_common_domain",
           "directed_preorders", "NetOracle", "oracle_for"]

# Largest explicit net domain the oracle quantifies over.
ORACLE_DOMAIN_SIZE = 4

LEFT = "left"
RIGHT = "right"


def check_directed(relation):
    """
    Decide whether a square boolean table is a directed preorder.

    Args:
        relation (array): ``relation[a, b]`` is True when a <= b.

    Returns:
        directed (bool): True when the table is reflexive, transitive and
            every pair has an upper bound. The empty table is directed.
    """
    rel = np.asarray(relation, dtype=bool)
    if rel.ndim != 2 or rel.shape[0] != rel.shape[1]:
        raise InputError("a preorder table must be square")
    if rel.shape[0] == 0:
        return True
    r = rel.astype(np.int64)
    if not np.all(np.diag(rel)):
        return False
    if np.any(((r @ r) > 0) & ~rel):
        return False
    return bool(np.all((r @ r.T) > 0))


class DirectedSet(object):
    """
    A finite directed preorder on 0..m-1.

    Args:
        relation (array): An m x m boolean table, ``relation[a, b]`` meaning
            a <= b.

    """

    __slots__ = ("relation",)

    def __init__(self, relation):
        rel = np.array(relation, dtype=bool)
        if not check_directed(rel):
            raise NotDirected("the relation is not a directed preorder")
        rel.setflags(write=False)
        self.relation = rel

    @property
    def size(self):
        return self.relation.shape[0]

    def __len__(self):
        return self.relation.shape[0]

    def __eq__(self, other):
        if isinstance(other, DirectedSet):
            return np.array_equal(self.relation, other.relation)
        return NotImplemented

    def __hash__(self):
        return hash(self.relation.tobytes())

    def __repr__(self):
        return "DirectedSet(size={0})".format(self.size)

    @classmethod
    def chain(cls, m):
        """The total order 0 <= 1 <= ... <= m-1."""
        idx = np.arange(m)
        return cls(idx[:, None] <= idx[None, :])

    @classmethod
    def indiscrete(cls, m):
        """Every element below every other."""
        return cls(np.ones((m, m), dtype=bool))

    def product(self, other):
        """Componentwise order on pairs, pair (d, e) at index d * |E| + e."""
        return DirectedSet(np.kron(self.relation, other.relation).astype(bool))


class Net(object):
    """
    A function from a directed set into a carrier.

    Args:
        domain (DirectedSet): The index set.
        carrier (Carrier): Where the net takes its values.
        values (sequence): Point index of each domain element.

    """

    __slots__ = ("domain", "carrier", "values")

    def __init__(self, domain, carrier, values):
        values = tuple(int(v) for v in values)
        if len(values) != domain.size:
            raise InputError("a net needs a value at every domain element")
        if any(v < 0 or v >= carrier.size for v in values):
            raise InputError("net values must be carrier points")
        self.domain = domain
        self.carrier = carrier
        self.values = values

    def __call__(self, d):
        return self.values[d]

    def __eq__(self, other):
        if isinstance(other, Net):
            return (self.domain == other.domain and
                    self.carrier == other.carrier and
                    self.values == other.values)
        return NotImplemented

    def __hash__(self):
        return hash((self.domain, self.carrier, self.values))

    def __repr__(self):
        return "Net({0})".format(
            ",".join(self.carrier.labels[v] for v in self.values))

    def tails(self):
        """Mask of {phi(e) : e >= d} for every d."""
        return _tail_masks(self.domain.relation,
                           np.int64(1) << np.array(self.values, dtype=np.int64))


def _tail_masks(rel, valbits):
    masked = np.where(rel, valbits[..., None, :], np.int64(0))
    return np.bitwise_or.reduce(masked, axis=-1)


def _induced_bases(rel, valbits):
    """Bases of the induced filters of a batch of valuations on one domain."""
    return np.bitwise_and.reduce(_tail_masks(rel, valbits), axis=-1)


def induced_filter(phi):
    """
    The filter generated by the tails of a net.

    Args:
        phi (Net): The net.

    Returns:
        F (PrincipalFilter): Generated by the smallest tail, which is the
            intersection of all tails since the domain is directed.
    """
    if phi.domain.size == 0:
        raise EmptyDomain("a net on an empty domain induces no filter")
    tails = phi.tails()
    return PrincipalFilter(phi.carrier, int(np.bitwise_and.reduce(tails)))


def is_subnet(psi, phi):
    """True when the filter of phi is contained in the filter of psi."""
    if psi.carrier != phi.carrier:
        raise CarrierMismatch("nets take values in different carriers")
    return finer(induced_filter(psi), induced_filter(phi))


def mix(phi, psi, selector):
    """
    Pointwise selection between two nets on a shared domain.

    Args:
        phi (Net): The left net.
        psi (Net): The right net.
        selector (sequence): ``LEFT`` or ``RIGHT`` for each domain element.

    Returns:
        rho (Net): ``rho(d)`` is ``phi(d)`` or ``psi(d)`` as selected.
    """
    if phi.domain != psi.domain:
        raise DomainMismatch("lift both nets to a common domain first")
    if phi.carrier != psi.carrier:
        raise CarrierMismatch("nets take values in different carriers")
    selector = list(selector)
    if len(selector) != phi.domain.size:
        raise DomainMismatch("the selector must cover the domain")
    values = []
    for d, side in enumerate(selector):
        if side == LEFT:
            values.append(phi.values[d])
        elif side == RIGHT:
            values.append(psi.values[d])
        else:
            raise InputError("selector entries are 'left' or 'right'")
    return Net(phi.domain, phi.carrier, values)


def constant_net(domain, carrier, point):
    """The net that is constantly ``point`` (an index) on ``domain``."""
    return Net(domain, carrier, [point] * domain.size)


def lift_to_common_domain(phi, psi):
    """
    Re-index two nets over the product of their domains.

    The lifted nets induce the same filters as the originals.

    Returns:
        (phi2, psi2) (tuple): Nets on ``phi.domain.product(psi.domain)``.
    """
    domain = phi.domain.product(psi.domain)
    m = psi.domain.size
    left = [phi.values[k // m] for k in range(domain.size)]
    right = [psi.values[k % m] for k in range(domain.size)]
    return Net(domain, phi.carrier, left), Net(domain, psi.carrier, right)


def canonical_net(F):
    """
    A net whose induced filter is F.

    The domain is the set of pairs (x, M) with x in M and M in F, ordered by
    reverse inclusion of M; the net sends (x, M) to x.
    """
    pairs = [(x, M.mask) for M in filter_members(F) for x in bits(M.mask)]
    masks = np.array([M for _, M in pairs], dtype=np.int64)
    rel = (masks[None, :] & ~masks[:, None]) == 0
    return Net(DirectedSet(rel), F.carrier, [x for x, _ in pairs])


@functools.lru_cache(maxsize=None)
def directed_preorders(m):
    """
    Every directed preorder on 0..m-1.

    Args:
        m (int): Domain size, at least 1.

    Returns:
        domains (tuple): DirectedSet instances in a fixed order.
    """
    check_size(m, ORACLE_DOMAIN_SIZE + 1, "net domain")
    off = [(a, b) for a in range(m) for b in range(m) if a != b]
    found = []
    for code in range(1 << len(off)):
        rel = np.eye(m, dtype=bool)
        for k, (a, b) in enumerate(off):
            if (code >> k) & 1:
                rel[a, b] = True
        if check_directed(rel):
            found.append(DirectedSet(rel))
    return tuple(found)


def _valuations(n, m):
    return np.array(list(itertools.product(range(n), repeat=m)),
                    dtype=np.int64).reshape(-1, m)


class NetOracle(object):
    """
    Axiom verdicts computed by quantifying over explicit nets.

    The oracle fixes a carrier size and collects, once, every net on every
    directed domain with at most ``max_domain`` elements (one representative
    per induced filter), the subnet relation between those representatives,
    the induced filters of all mixings on domains of size at most three plus
    the 4-chain and the 4-element indiscrete domain, and the tails of the
    canonical net of every filter.

    Args:
        n (int): Carrier size.
        max_domain (Optional[int]): Largest domain. Default is
            ``ORACLE_DOMAIN_SIZE``.

    """

    def __init__(self, n, max_domain=ORACLE_DOMAIN_SIZE):
        check_size(n, 3, "oracle carrier")
        self.n = n
        self.max_domain = max_domain
        self.carrier = Carrier([str(i) for i in range(n)])
        self.representatives = {}
        for m in range(1, max_domain + 1):
            vals = _valuations(n, m)
            valbits = np.int64(1) << vals
            for domain in directed_preorders(m):
                bases = _induced_bases(domain.relation, valbits)
                for k, base in enumerate(bases):
                    self.representatives.setdefault(
                        int(base), (domain, tuple(vals[k])))
        self.bases = np.array(sorted(self.representatives), dtype=np.int64)
        nets = [self.net(b, self.carrier) for b in self.bases]
        # subnets[i, j]: net i is a subnet of net j
        self.subnets = np.array([[is_subnet(psi, phi) for phi in nets]
                                 for psi in nets], dtype=bool)
        self.ultranets = np.array([is_ultrafilter(induced_filter(phi))
                                   for phi in nets], dtype=bool)

        mix_domains = [d for m in range(1, min(3, max_domain) + 1)
                       for d in directed_preorders(m)]
        if max_domain >= 4:
            mix_domains += [DirectedSet.chain(4), DirectedSet.indiscrete(4)]
        triples = set()
        for domain in mix_domains:
            triples.update(self._mixing_triples(domain))
        self.mixing_triples = np.array(sorted(triples),
                                       dtype=np.int64).reshape(-1, 3)
        self._joins = {}

        # eventually[b, U]: the canonical net of the filter on b is
        # eventually in U
        subsets = np.arange(1 << n, dtype=np.int64)
        self.eventually = np.zeros((1 << n, 1 << n), dtype=bool)
        for b in self.bases:
            tails = canonical_net(PrincipalFilter(self.carrier, b)).tails()
            inside = (tails[:, None] & ~subsets[None, :]) == 0
            self.eventually[b] = np.any(inside, axis=0)
        logger.debug("net oracle on %d points: %d induced filters, "
                     "%d mixing triples", n, len(self.bases),
                     len(self.mixing_triples))

    def _mixing_triples(self, domain):
        m = domain.size
        rel = domain.relation
        valbits = np.int64(1) << _valuations(self.n, m)
        sel = ((np.arange(1 << m)[:, None] >> np.arange(m)[None, :]) & 1)
        sel = sel.astype(bool)
        left = valbits[:, None, None, :]
        right = valbits[None, :, None, :]
        rho = np.where(sel[None, None, :, :], left, right)
        base_phi = _induced_bases(rel, valbits)
        a = np.broadcast_to(base_phi[:, None, None], rho.shape[:3])
        b = np.broadcast_to(base_phi[None, :, None], rho.shape[:3])
        r = _induced_bases(rel, rho)
        codes = np.stack([a.ravel(), b.ravel(), r.ravel()], axis=1)
        return set(map(tuple, np.unique(codes, axis=0).tolist()))

    def net(self, base, carrier):
        """The representative net whose induced filter has ``base``."""
        domain, values = self.representatives[int(base)]
        return Net(domain, carrier, values)

    def join(self, a, b):
        """
        Base of a mixing that visits both nets cofinally.

        Both representatives are lifted to a common domain, doubled by an
        indiscrete pair, and mixed taking the left net on one copy and the
        right net on the other.
        """
        key = (int(a), int(b))
        if key not in self._joins:
            phi, psi = lift_to_common_domain(self.net(a, self.carrier),
                                             self.net(b, self.carrier))
            pair = constant_net(DirectedSet.indiscrete(2), self.carrier, 0)
            phi, _ = lift_to_common_domain(phi, pair)
            psi, _ = lift_to_common_domain(psi, pair)
            selector = [LEFT if k % 2 == 0 else RIGHT
                        for k in range(phi.domain.size)]
            rho = mix(phi, psi, selector)
            self._joins[key] = induced_filter(rho).base
        return self._joins[key]

    def check(self, space, axiom):
        """
        Decide an axiom by quantifying over the collected nets.

        Args:
            space (Preconvergence): The space; its carrier size must be n.
            axiom (str or Axiom): The axiom name.

        Returns:
            holds (bool): The verdict.
        """
        name = getattr(axiom, "value", axiom)
        if space.carrier.size != self.n:
            raise CarrierMismatch("oracle built for {0} points".format(self.n))
        lim = np.asarray(space.limits)
        return bool(getattr(self, "_" + name)(lim))

    def _centered(self, lim):
        for x in range(self.n):
            # a constant net induces the ultrafilter at its value
            if not (lim[1 << x] >> x) & 1:
                return False
        return True

    def _isotone(self, lim):
        B = self.bases
        psi, phi = np.nonzero(self.subnets)
        return bool(np.all(lim[B[phi]] & ~lim[B[psi]] == 0))

    def _stable(self, lim):
        a, b, r = self.mixing_triples.T
        return bool(np.all(lim[a] & lim[b] & ~lim[r] == 0))

    def _kent(self, lim):
        a, b, r = self.mixing_triples.T
        for x in range(self.n):
            pick = b == (1 << x)
            lost = ((lim[a[pick]] >> x) & 1) & ~((lim[r[pick]] >> x) & 1)
            if np.any(lost):
                return False
        return True

    def _pseudotopological(self, lim):
        B = self.bases
        full = np.int64(full_mask(self.n))
        for j, base in enumerate(B):
            # a net converges exactly where all its ultra-subnets converge
            ultra = self.subnets[:, j] & self.ultranets
            common = np.bitwise_and.reduce(lim[B[ultra]], initial=full)
            if lim[base] != common:
                return False
        return True

    def _pretopological(self, lim):
        for x in range(self.n):
            converging = [int(b) for b in self.bases if (lim[b] >> x) & 1]
            if not converging:
                continue
            widest = converging[0]
            for b in converging[1:]:
                widest = self.join(widest, b)
            if not (lim[widest] >> x) & 1:
                return False
        return True

    def _topological(self, lim):
        B = self.bases
        ev = self.eventually
        subsets = np.arange(1 << self.n, dtype=np.int64)
        # U is open when every net converging into U is eventually in U
        reaches = (lim[B][:, None] & subsets[None, :]) != 0
        is_open = np.all(ev[B] | ~reaches, axis=0)
        opens = subsets[is_open]
        for b in B:
            eventually = 0
            for x in range(self.n):
                around = opens[(opens >> x) & 1 == 1]
                if np.all(ev[b, around]):
                    eventually |= 1 << x
            if lim[b] != eventually:
                return False
        return True


@functools.lru_cache(maxsize=None)
def oracle_for(n):
    """A cached ``NetOracle`` for carriers of n points."""
    return NetOracle(n)
