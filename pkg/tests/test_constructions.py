import itertools

import pytest

import convg as cg
from convg.search import enumerate_spaces, random_space

AB = cg.Carrier(["a", "b"])
ABC = cg.Carrier(["a", "b", "c"])


def fixtures():
    return {name: cg.load_fixture(name) for name in cg.FIXTURES}


def all_maps(X, Y):
    for graph in itertools.product(range(Y.size), repeat=X.size):
        yield cg.SpaceMap(X, Y, graph)


def test_is_continuous():
    spaces = fixtures()
    for L in spaces.values():
        assert cg.is_continuous(cg.identity_map(L))
        for y in range(2):
            assert cg.is_continuous(cg.SpaceMap(L, spaces["S2"], [y] * L.size))
    f = cg.SpaceMap(spaces["C2"], spaces["D2"], [0, 1])
    verdict = cg.is_continuous(f)
    assert not verdict
    assert f.continuity is False
    w = verdict.witness
    C2, D2 = spaces["C2"], spaces["D2"]
    assert w["x"] in C2.limit(AB.subset(w["A"]))
    assert w["fx"] not in D2.limit(AB.subset(w["fA"]))


def test_is_continuous_at():
    spaces = fixtures()
    f = cg.SpaceMap(spaces["C2"], spaces["D2"], [0, 1])
    assert not cg.is_continuous_at(f, "a")
    E = cg.Preconvergence.empty(AB)
    assert cg.is_continuous_at(cg.SpaceMap(E, spaces["D2"], [1, 0]), "a")
    # continuous everywhere exactly when continuous
    for X, Y in [(spaces["P3"], spaces["S2"]), (spaces["W3"], spaces["S2"])]:
        for f in all_maps(X, Y):
            everywhere = all(cg.is_continuous_at(f, x) for x in range(X.size))
            assert everywhere == cg.is_continuous(f).holds


def test_continuity_composes():
    for k in range(30):
        X = random_space(3, seed=3, counter=k)
        Y = random_space(2, seed=4, counter=k)
        Z = random_space(2, seed=5, counter=k)
        for f in all_maps(X, Y):
            if not cg.is_continuous(f):
                continue
            for g in all_maps(Y, Z):
                if cg.is_continuous(g):
                    assert cg.is_continuous(cg.compose(f, g))


def test_initial_and_final():
    S2, D2 = cg.load_fixture("S2"), cg.load_fixture("D2")
    assert cg.initial([(range(2), S2)], AB) == S2
    assert cg.initial([], AB) == cg.Preconvergence.chaotic(AB)
    assert cg.final([(range(2), S2)], AB) == S2
    assert cg.final([], AB) == cg.Preconvergence.empty(AB)
    point = cg.Carrier(["*"])
    collapsed = cg.final([([0, 0], D2)], point)
    assert collapsed.limit(1).labels == ["*"]
    with pytest.raises(cg.ShapeMismatch):
        cg.initial([([0], S2)], AB)
    with pytest.raises(cg.ShapeMismatch):
        cg.final([([0, 2], S2)], AB)
    with pytest.raises(cg.ShapeMismatch):
        cg.initial([([0, 1], cg.subspace(S2, AB.subset(["a"])))], AB)
    with pytest.raises(cg.ShapeMismatch):
        cg.initial([([0, -1], S2)], AB)


def test_initial_and_final_are_extremal():
    candidates = list(enumerate_spaces(2))
    others = [cg.load_fixture(x) for x in ("S2", "D2", "C2", "W3")]
    for Y in others:
        for graph in itertools.product(range(Y.size), repeat=2):
            I = cg.initial([(graph, Y)], AB)
            for M in candidates:
                continuous = cg.is_continuous(cg.SpaceMap(M, Y, graph))
                finer = not (M.limits & ~I.limits).any()
                assert continuous == finer, (graph, Y, M)
    for X in others:
        for graph in itertools.product(range(2), repeat=X.size):
            F = cg.final([(graph, X)], AB)
            for M in candidates:
                continuous = cg.is_continuous(cg.SpaceMap(X, M, graph))
                coarser = not (F.limits & ~M.limits).any()
                assert continuous == coarser, (graph, X, M)


def test_restriction_to_open_sets():
    for k in range(200):
        X = random_space(3, seed=41, counter=k)
        Y = random_space(2, seed=42, counter=k)
        opens = cg.open_sets(X)
        for f in all_maps(X, Y):
            for S in opens.opens:
                if S == 0 or not cg.is_continuous(cg.restrict(f, S)):
                    continue
                for x in cg.bits(S):
                    assert cg.is_continuous_at(f, x), (X, Y, f.graph, S)


def test_subspace():
    S2, P3 = cg.load_fixture("S2"), cg.load_fixture("P3")
    assert cg.subspace(S2, AB.full) == S2
    sub = cg.subspace(S2, AB.subset(["b"]))
    assert sub.carrier.labels == ("b",)
    assert sub.limit(1).labels == ["b"]
    sub = cg.subspace(P3, ABC.subset(["a", "b"]))
    expected = cg.Preconvergence.from_sets(
        AB, {"a": "a", "b": "ab", "ab": "a"})
    assert sub == expected
    with pytest.raises(cg.EmptySubset):
        cg.subspace(S2, 0)


def test_product():
    D2, S2 = cg.load_fixture("D2"), cg.load_fixture("S2")
    P = cg.product([D2, D2])
    assert P.carrier.labels == ("(a,a)", "(a,b)", "(b,a)", "(b,b)")
    for A in range(1, 16):
        expected = A if A in (1, 2, 4, 8) else 0
        assert P.limits[A] == expected
    for j in range(2):
        assert cg.is_continuous(cg.projection(P, j))
    Q = cg.product([S2, D2])
    assert cg.is_limit_space(Q)
    single = cg.product([S2])
    assert single.limits.tolist() == S2.limits.tolist()


def test_quotient():
    D2, S2 = cg.load_fixture("D2"), cg.load_fixture("S2")
    Q = cg.quotient(D2, [["a", "b"]])
    assert Q.carrier.labels == ("[a,b]",)
    assert Q.limit(1).labels == ["[a,b]"]
    assert cg.quotient(S2, [["a"], ["b"]]) == S2
    q = cg.quotient_map(cg.load_fixture("P3"), [["a", "c"], ["b"]])
    assert q.target.carrier.labels == ("[a,c]", "b")
    assert cg.is_continuous(q)
    with pytest.raises(cg.InvalidPartition):
        cg.quotient(D2, [["a"]])
    with pytest.raises(cg.InvalidPartition):
        cg.quotient(D2, [["a", "b"], ["b"]])


def test_coproduct():
    S2, D2 = cg.load_fixture("S2"), cg.load_fixture("D2")
    C = cg.coproduct([S2])
    assert C == S2.relabel(cg.Carrier(["a_0", "b_0"]))
    C = cg.coproduct([S2, D2])
    assert C.carrier.labels == ("a_0", "b_0", "a_1", "b_1")
    assert cg.is_limit_space(C)
    for j in range(2):
        assert cg.is_continuous(cg.inclusion(C, j))
    # a filter spread over both summands converges nowhere
    assert C.limit(C.carrier.subset(["b_0", "a_1"])).labels == []


def test_universal_property():
    D2, S2 = cg.load_fixture("D2"), cg.load_fixture("S2")
    P = cg.product([D2, D2])
    diagonal = cg.SpaceMap(D2, P, [0, 3])
    maps = [(P.projections[0], D2), (P.projections[1], D2)]
    assert cg.verify_universal_property("initial", diagonal, maps)
    for X in (S2, D2, cg.load_fixture("C2")):
        for g in all_maps(X, P):
            assert cg.verify_universal_property("initial", g, maps)
    P3 = cg.load_fixture("P3")
    q = cg.quotient_map(P3, [["a", "b"], ["c"]])
    for g in all_maps(q.target, S2):
        assert cg.verify_universal_property("final", g, [(q.graph, P3)])
    with pytest.raises(cg.ShapeMismatch):
        cg.verify_universal_property("initial", diagonal, [([0], D2)])
    with pytest.raises(cg.InputError):
        cg.verify_universal_property("middle", diagonal, maps)


def test_glue_discrete():
    D2, S2 = cg.load_fixture("D2"), cg.load_fixture("S2")
    left = cg.subspace(D2, AB.subset(["a"]))
    right = cg.subspace(D2, AB.subset(["b"]))
    for y, z in itertools.product(range(2), repeat=2):
        result = cg.glue(cg.SpaceMap(left, S2, [y]),
                         cg.SpaceMap(right, S2, [z]), D2, S2)
        assert result.verdict
        assert result.hypotheses_hold
        assert result.map.graph == (y, z)


def test_glue_sierpinski():
    S2, D2 = cg.load_fixture("S2"), cg.load_fixture("D2")
    piece = cg.subspace(S2, AB.subset(["b"]))
    whole = cg.subspace(S2, AB.full)
    fA = cg.SpaceMap(piece, D2, [1])
    result = cg.glue(fA, cg.SpaceMap(whole, D2, [0, 1]), S2, D2)
    assert not result.verdict
    assert not result.hypotheses_hold
    assert result.violations == ["the piece on B is not continuous"]
    with pytest.raises(cg.HypothesisViolation):
        cg.glue(fA, cg.SpaceMap(whole, D2, [0, 1]), S2, D2, strict=True)
    result = cg.glue(fA, cg.SpaceMap(whole, D2, [1, 1]), S2, D2)
    assert result.verdict and result.hypotheses_hold


def test_glue_errors():
    D2 = cg.load_fixture("D2")
    left = cg.subspace(D2, AB.subset(["a"]))
    with pytest.raises(cg.CoverGap):
        cg.glue(cg.SpaceMap(left, D2, [0]), cg.SpaceMap(left, D2, [0]), D2, D2)
    with pytest.raises(cg.Disagreement):
        cg.glue(cg.SpaceMap(left, D2, [0]), cg.SpaceMap(
            cg.subspace(D2, AB.full), D2, [1, 1]), D2, D2)


def test_pasting_on_three_points():
    targets = list(enumerate_spaces(2, cg.LIMIT_AXIOMS))
    for k, X in enumerate(enumerate_spaces(3, cg.LIMIT_AXIOMS)):
        if k % 8:
            continue
        opens = cg.open_sets(X)
        closed = [S for S in range(1, 8) if opens.is_open(7 ^ S)]
        for A, B in itertools.combinations_with_replacement(closed, 2):
            if A | B != 7:
                continue
            for Y in targets:
                for f in all_maps(X, Y):
                    fA, fB = cg.restrict(f, A), cg.restrict(f, B)
                    if cg.is_continuous(fA) and cg.is_continuous(fB):
                        assert cg.glue(fA, fB, X, Y).verdict


def test_pasting_on_random_limit_spaces():
    for k in range(200):
        X = random_space(1 + k % 4, seed=51, constraints=cg.LIMIT_AXIOMS,
                         counter=k)
        full = X.carrier.full
        opens = cg.open_sets(X)
        closed = [S for S in range(1, full) if opens.is_open(full ^ S)]
        covers = [(A, B) for A, B in itertools.combinations(closed, 2)
                  if A | B == full]
        if not covers:
            continue
        targets = [random_space(m, seed=52, constraints=cg.LIMIT_AXIOMS,
                                counter=k) for m in (1, 2, 3)]
        for Y in targets:
            for f in all_maps(X, Y):
                for A, B in covers:
                    fA, fB = cg.restrict(f, A), cg.restrict(f, B)
                    if cg.is_continuous(fA) and cg.is_continuous(fB):
                        assert cg.glue(fA, fB, X, Y).verdict, (X, Y, A, B)


def test_map_helpers():
    S2, D2, P3 = (cg.load_fixture(x) for x in ("S2", "D2", "P3"))
    f = cg.SpaceMap.from_labels(P3, S2, {"a": "b", "b": "b", "c": "a"})
    assert f("c") == 0
    assert f.to_labels() == {"a": "b", "b": "b", "c": "a"}
    g = cg.corestrict(cg.SpaceMap(D2, P3, [2, 1]), ABC.subset(["b", "c"]))
    assert g.target.carrier.labels == ("b", "c")
    assert g.graph == (1, 0)
    with pytest.raises(cg.InputError):
        cg.corestrict(cg.SpaceMap(D2, P3, [0, 1]), ABC.subset(["b"]))
    h = cg.product_map(cg.identity_map(S2), cg.SpaceMap(D2, D2, [1, 0]))
    assert h.graph == (1, 0, 3, 2)
    assert cg.is_continuous(h)
    with pytest.raises(cg.CarrierMismatch):
        cg.compose(cg.identity_map(S2), cg.identity_map(P3))


def test_modified_maps_stay_continuous():
    spaces = list(fixtures().values())
    for X, Y in itertools.product(spaces, repeat=2):
        for f in all_maps(X, Y):
            if not cg.is_continuous(f):
                continue
            for kind in ("topological", "limit"):
                assert cg.is_continuous(cg.modified_map(f, kind)), (f, kind)
    with pytest.raises(cg.InputError):
        cg.modified_map(cg.identity_map(spaces[0]), "pretopological")


if __name__ == "__main__":
    test_is_continuous()
    test_is_continuous_at()
    test_continuity_composes()
    test_initial_and_final()
    test_initial_and_final_are_extremal()
    test_restriction_to_open_sets()
    test_subspace()
    test_product()
    test_quotient()
    test_coproduct()
    test_universal_property()
    test_glue_discrete()
    test_glue_sierpinski()
    test_glue_errors()
    test_pasting_on_three_points()
    test_pasting_on_random_limit_spaces()
    test_map_helpers()
    test_modified_maps_stay_continuous()
