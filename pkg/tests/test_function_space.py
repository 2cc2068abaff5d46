import itertools

import pytest

import convg as cg
from convg.search import enumerate_spaces, random_space

AB = cg.Carrier(["a", "b"])
ABC = cg.Carrier(["a", "b", "c"])


def small_limit_spaces():
    spaces = []
    for n in (1, 2):
        spaces.extend(enumerate_spaces(n, cg.LIMIT_AXIOMS))
    return spaces


def test_continuous_maps():
    D2, C2 = cg.load_fixture("D2"), cg.load_fixture("C2")
    assert len(cg.continuous_maps(D2, D2)) == 4
    constants = cg.continuous_maps(C2, D2)
    assert [f.graph for f in constants] == [(0, 0), (1, 1)]
    point = cg.Preconvergence.chaotic(cg.Carrier(["*"]))
    for name in cg.FIXTURES:
        assert len(cg.continuous_maps(cg.load_fixture(name), point)) == 1


def test_continuous_convergence_on_discrete():
    D2 = cg.load_fixture("D2")
    C = cg.continuous_convergence(D2, D2)
    assert C.carrier.labels == ("a:a,b:a", "a:a,b:b", "a:b,b:a", "a:b,b:b")
    for G in range(1, 16):
        expected = G if G in (1, 2, 4, 8) else 0
        assert C.limits[G] == expected
    assert C.index_of((1, 0)) == 2
    assert C.index_of((2, 0)) is None
    assert C.function(1) == cg.identity_map(D2)
    frame = cg.function_table(C)
    assert frame.loc["a:b,b:a"].tolist() == ["b", "a"]


def test_continuous_convergence_from_chaotic():
    C = cg.continuous_convergence(cg.load_fixture("C2"), cg.load_fixture("D2"))
    assert C.size == 2
    assert C.limits.tolist() == [0, 1, 2, 0]


def test_function_space_too_large():
    D3 = cg.from_topology(cg.discrete_topology(ABC))
    with pytest.raises(cg.TooLarge):
        cg.continuous_convergence(D3, D3)


def test_exponential_law_on_small_spaces():
    spaces = small_limit_spaces()
    assert len(spaces) == 5
    for X, Y in itertools.product(spaces, repeat=2):
        C = cg.continuous_convergence(X, Y)
        assert cg.is_limit_space(C)
        ev = cg.eval_map(X, Y)
        assert cg.is_continuous(ev)
        assert cg.verify_evaluation_coarsest(X, Y)
        assert cg.curry(ev).graph == tuple(range(C.size))


def test_hom_sets_match():
    spaces = small_limit_spaces()
    for Z, X, Y in itertools.product(spaces, repeat=3):
        uncurried, curried = cg.hom_set_sizes(Z, X, Y)
        assert uncurried == curried


def test_curry_uncurry_inverse():
    spaces = small_limit_spaces()
    for Z, X, Y in itertools.product(spaces, repeat=3):
        for h in cg.continuous_maps(cg.product([Z, X]), Y):
            k = cg.curry(h)
            assert cg.uncurry(k).graph == h.graph
            assert cg.curry(cg.uncurry(k)).graph == k.graph


def test_uncurry_constant():
    S2, D2 = cg.load_fixture("S2"), cg.load_fixture("D2")
    C = cg.continuous_convergence(S2, D2)
    for j in range(C.size):
        k = cg.SpaceMap(D2, C, [j, j])
        h = cg.uncurry(k)
        P = h.source
        assert list(h.graph) == [C.functions[j][x] for x in P.projections[1]]


def test_curry_errors():
    C2, D2 = cg.load_fixture("C2"), cg.load_fixture("D2")
    with pytest.raises(cg.ShapeMismatch):
        cg.curry(cg.identity_map(D2))
    with pytest.raises(cg.ShapeMismatch):
        cg.uncurry(cg.identity_map(D2))
    P = cg.product([C2, D2])
    with pytest.raises(cg.NotContinuous):
        cg.curry(cg.SpaceMap(P, D2, P.projections[0]))


def test_composition_continuity():
    point = cg.Preconvergence.chaotic(cg.Carrier(["*"]))
    S2 = cg.load_fixture("S2")
    assert cg.verify_composition_continuity(S2, S2, point)
    for k in range(10):
        X, Y, Z = (random_space(2, seed=s, counter=k,
                                constraints=cg.LIMIT_AXIOMS)
                   for s in (11, 12, 13))
        assert cg.verify_composition_continuity(X, Y, Z), (X, Y, Z)


if __name__ == "__main__":
    test_continuous_maps()
    test_continuous_convergence_on_discrete()
    test_continuous_convergence_from_chaotic()
    test_function_space_too_large()
    test_exponential_law_on_small_spaces()
    test_hom_sets_match()
    test_curry_uncurry_inverse()
    test_uncurry_constant()
    test_curry_errors()
    test_composition_continuity()
