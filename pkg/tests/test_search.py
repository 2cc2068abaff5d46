import pytest

import convg as cg
from convg.search import (SearchSpec, count_spaces, enumerate_spaces,
                          random_space, replay_witness, search_counterexample,
                          set_partitions)


def test_enumerate_counts():
    assert len(list(enumerate_spaces(1))) == 2
    assert len(list(enumerate_spaces(1, [cg.Axiom.CENTERED]))) == 1
    assert len(list(enumerate_spaces(2))) == 64
    for n in (1, 2):
        assert len(list(enumerate_spaces(n))) == count_spaces(n)
    with pytest.raises(cg.TooLarge):
        next(enumerate_spaces(4))


def test_enumeration_is_deterministic_and_filtered():
    first = [L.limits.tolist() for L in enumerate_spaces(2, ["kent"])]
    second = [L.limits.tolist() for L in enumerate_spaces(2, ["kent"])]
    assert first == second
    for L in enumerate_spaces(2, ["kent"]):
        assert cg.check_axiom(L, cg.Axiom.KENT)
    assert len(first) < 64


def test_random_space():
    L = random_space(4, seed=5, counter=2)
    M = random_space(4, seed=5, counter=2)
    assert L == M
    for counter in range(200):
        L = random_space(4, seed=9, constraints=cg.LIMIT_AXIOMS,
                         counter=counter)
        assert cg.is_limit_space(L)
    L = random_space(3, seed=1, constraints=["pretopological"])
    assert cg.check_axiom(L, cg.Axiom.PRETOPOLOGICAL)


def test_set_partitions():
    parts = list(set_partitions(3))
    assert len(parts) == 5
    assert parts[0] == (0, 0, 0)
    assert (0, 1, 2) in parts
    assert len(list(set_partitions(4))) == 15


def test_search_spec():
    spec = SearchSpec("stability", 3)
    assert spec.constraints == frozenset([cg.Axiom.CENTERED,
                                          cg.Axiom.ISOTONE])
    with pytest.raises(cg.InputError):
        SearchSpec("nonsense", 3)
    with pytest.raises(cg.InputError):
        SearchSpec("stability", 0)
    with pytest.raises(cg.InputError):
        SearchSpec("stability", 2, min_points=3)
    with pytest.raises(cg.InputError):
        SearchSpec("stability", 2, budget=0)


def test_stability_witness():
    w = search_counterexample(SearchSpec("stability", 3, min_points=3))
    assert w is not None
    assert not w.theorem
    L = w.spaces[0]
    assert L.size == 3
    witness = w.details["witness"]
    A, B = L.carrier.mask(witness["A"]), L.carrier.mask(witness["B"])
    x = L.carrier.index(witness["x"])
    assert L.converges(A, x) and L.converges(B, x)
    assert not L.converges(A | B, x)
    assert replay_witness(w)
    # W3 is one such space
    assert not cg.check_axiom(cg.load_fixture("W3"), cg.Axiom.STABLE)


def test_pasting_needs_closed_pieces():
    w = search_counterexample(SearchSpec("pasting-closed", 2))
    assert w is not None
    X, Y = w.spaces
    assert X.size == 2
    assert replay_witness(w)
    A, B = w.context["A"], w.context["B"]
    assert A | B == X.carrier.full
    opens = cg.open_sets(X)
    assert not (opens.is_open(X.carrier.full ^ A) and
                opens.is_open(X.carrier.full ^ B))
    f = cg.SpaceMap(X, Y, w.maps[0])
    assert not cg.is_continuous(f)
    assert cg.is_continuous(cg.restrict(f, A))
    assert cg.is_continuous(cg.restrict(f, B))


def test_pasting_needs_stability():
    w = search_counterexample(SearchSpec("pasting-stability", 3,
                                         budget=100))
    if w is not None:
        X = w.spaces[0]
        assert not cg.check_axiom(X, cg.Axiom.STABLE)
        assert replay_witness(w)


def test_quotient_limit_is_reported():
    w = search_counterexample(SearchSpec("quotient-limit", 3, budget=200))
    if w is not None:
        assert replay_witness(w)
        assert "classes" in w.details


@pytest.mark.parametrize("prop", ["pasting", "sup-limit", "product-limit",
                                  "coproduct-limit", "compactness-theorem"])
def test_theorems_hold_on_small_spaces(prop):
    assert search_counterexample(SearchSpec(prop, 2)) is None


def test_theorems_hold_on_random_spaces():
    spec = SearchSpec("sup-limit", 4, min_points=4, seed=17, budget=300)
    assert search_counterexample(spec) is None
    spec = SearchSpec("compactness-theorem", 4, min_points=4, seed=17,
                      budget=50)
    assert search_counterexample(spec) is None


def test_pasting_targets_reach_three_points():
    w = search_counterexample(SearchSpec("pasting", 4, min_points=4, seed=3,
                                         budget=5))
    assert w is None
    assert max(Y.size for Y in cg.search._small_targets()) == 3


def test_budget_stops_search():
    assert search_counterexample(SearchSpec("stability", 3, budget=1)) is None


def test_replay_detects_tampering():
    w = search_counterexample(SearchSpec("stability", 3, min_points=3))
    X = w.spaces[0]
    w.spaces[0] = cg.limit_modification(X)
    assert not replay_witness(w)


if __name__ == "__main__":
    test_enumerate_counts()
    test_enumeration_is_deterministic_and_filtered()
    test_random_space()
    test_set_partitions()
    test_search_spec()
    test_stability_witness()
    test_pasting_needs_closed_pieces()
    test_pasting_needs_stability()
    test_quotient_limit_is_reported()
    for prop in ["pasting", "sup-limit", "product-limit", "coproduct-limit",
                 "compactness-theorem"]:
        test_theorems_hold_on_small_spaces(prop)
    test_theorems_hold_on_random_spaces()
    test_pasting_targets_reach_three_points()
    test_budget_stops_search()
    test_replay_detects_tampering()
