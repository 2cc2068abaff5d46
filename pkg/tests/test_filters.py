import itertools

import pytest
from hypothesis import given, strategies as st

import convg as cg

AB = cg.Carrier(["a", "b"])
ABC = cg.Carrier(["a", "b", "c"])


def up(carrier, labels):
    return cg.make_filter(carrier.subset(labels))


def members(F):
    return [S.labels for S in cg.filter_members(F)]


def test_carrier():
    assert ABC.index("c") == 2
    assert ABC.mask(["a", "c"]) == 0b101
    assert ABC.format(0b110) == "{b,c}"
    with pytest.raises(cg.UnknownLabel):
        ABC.index("z")
    with pytest.raises(cg.InputError):
        cg.Carrier(["a", "a"])


def test_point_sets():
    S = ABC.subset(["a", "b"])
    T = ABC.subset(["b", "c"])
    assert S.intersection(T).labels == ["b"]
    assert S.union(T) == ABC.subset(["a", "b", "c"])
    assert S.complement().labels == ["c"]
    assert not S.issubset(T)
    with pytest.raises(cg.CarrierMismatch):
        S.union(AB.subset(["a"]))


def test_make_filter():
    assert members(up(AB, ["a"])) == [["a"], ["a", "b"]]
    assert members(up(AB, ["a", "b"])) == [["a", "b"]]
    with pytest.raises(cg.EmptyBase):
        up(AB, [])


def test_finer():
    Fa, Fb, Fab = up(AB, ["a"]), up(AB, ["b"]), up(AB, ["a", "b"])
    assert cg.finer(Fa, Fab)
    assert cg.finer(Fa, Fa)
    assert not cg.finer(Fa, Fb)
    assert not cg.finer(Fab, Fa)


def test_image_filter():
    identity = cg.FiniteMap(AB, AB, [0, 1])
    to_a = cg.FiniteMap(AB, AB, [0, 0])
    to_b = cg.FiniteMap.from_labels(AB, AB, {"a": "b", "b": "b"})
    for F in (up(AB, ["a"]), up(AB, ["b"]), up(AB, ["a", "b"])):
        assert cg.image_filter(identity, F) == F
    assert cg.image_filter(to_a, up(AB, ["a", "b"])) == up(AB, ["a"])
    assert members(cg.image_filter(to_b, up(AB, ["a"]))) == [["b"],
                                                            ["a", "b"]]


def test_preimage_filter():
    identity = cg.FiniteMap(AB, AB, [0, 1])
    to_a = cg.FiniteMap(AB, AB, [0, 0])
    G = up(AB, ["b"])
    assert cg.preimage_filter(identity, G) == G
    assert cg.preimage_filter(to_a, up(AB, ["a"])) == up(AB, ["a", "b"])
    with pytest.raises(cg.EmptyPreimage):
        cg.preimage_filter(to_a, G)


def test_ultrafilters():
    assert cg.is_ultrafilter(up(AB, ["a"]))
    assert not cg.is_ultrafilter(up(AB, ["a", "b"]))
    one = cg.Carrier(["a"])
    assert cg.is_ultrafilter(up(one, ["a"]))
    assert cg.principal_ultrafilter(ABC, "b") == up(ABC, ["b"])
    for base in range(1, 8):
        F = cg.PrincipalFilter(ABC, base)
        assert cg.satisfies_trichotomy(F) == cg.is_ultrafilter(F)


def test_intersect_filters():
    Fa, Fb, Fab = up(AB, ["a"]), up(AB, ["b"]), up(AB, ["a", "b"])
    assert cg.intersect_filters(Fa, Fb) == Fab
    assert cg.intersect_filters(Fa, Fa) == Fa
    assert cg.intersect_filters(Fa, Fab) == Fab


def test_mesh():
    Fa = up(AB, ["a"])
    assert cg.mesh(Fa, AB.subset(["a", "b"]))
    assert not cg.mesh(Fa, AB.subset(["b"]))
    for base in range(1, 4):
        assert cg.mesh(cg.PrincipalFilter(AB, base), AB.subset(["a", "b"]))


def test_fip_extend():
    u = cg.fip_extend([ABC.subset(["a", "b"]), ABC.subset(["b", "c"])])
    assert u == cg.principal_ultrafilter(ABC, "b")
    assert cg.fip_extend([ABC.subset(["a", "b", "c"])]) == up(ABC, ["a"])
    assert cg.fip_extend([], carrier=ABC) == up(ABC, ["a"])
    with pytest.raises(cg.NoFIP):
        cg.fip_extend([ABC.subset(["a"]), ABC.subset(["b"])])
    with pytest.raises(cg.InputError):
        cg.fip_extend([])


def test_filters_are_principal():
    # every proper filter on three points is the upset of its intersection
    subsets = range(8)
    count = 0
    for r in range(1, 9):
        for family in itertools.combinations(subsets, r):
            if cg.is_proper_filter_family(ABC, family):
                F = cg.filter_from_family(ABC, family)
                assert sorted(S.mask for S in cg.filter_members(F)) == \
                    sorted(family)
                count += 1
    assert count == 7
    with pytest.raises(cg.InputError):
        cg.filter_from_family(ABC, [1, 2])


@given(st.integers(1, 7), st.integers(1, 7))
def test_intersection_is_coarser(a, b):
    F, G = cg.PrincipalFilter(ABC, a), cg.PrincipalFilter(ABC, b)
    H = cg.intersect_filters(F, G)
    assert cg.finer(F, H) and cg.finer(G, H)
    assert set(S.mask for S in cg.filter_members(H)) == \
        set(S.mask for S in cg.filter_members(F)) & \
        set(S.mask for S in cg.filter_members(G))


if __name__ == "__main__":
    test_carrier()
    test_point_sets()
    test_make_filter()
    test_finer()
    test_image_filter()
    test_preimage_filter()
    test_ultrafilters()
    test_intersect_filters()
    test_mesh()
    test_fip_extend()
    test_filters_are_principal()
    test_intersection_is_coarser()
