from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from monadcolim.base import (
    BaseMor, FinGraph, FinSet, InjectionWitness, SortedFinSet, Converged, Exhausted,
    chain_colimit, coequalize_morphisms, coproduct, factorize, initial, morphisms, quotient,
    small_graphs, small_sets,
)
from monadcolim.errors import MixedVariants, NonMonoInChain


def one_loop():
    return FinGraph(["v"], ["l"], {"l": "v"}, {"l": "v"})


# -- objects and morphisms ----------------------------------------------------


def test_duplicate_atoms_rejected():
    with pytest.raises(ValueError):
        FinSet(["a", "a"])


def test_graph_structure_must_be_total():
    with pytest.raises(ValueError):
        FinGraph(["v"], ["e"], {}, {"e": "v"})


def test_graph_morphism_must_commute_with_source():
    X = FinGraph(["u", "v"], ["e"], {"e": "u"}, {"e": "v"})
    Y = one_loop()
    with pytest.raises(ValueError):
        BaseMor(X, X, {"V": {"u": "v", "v": "u"}, "E": {"e": "e"}})
    f = BaseMor(X, Y, {"V": {"u": "v", "v": "v"}, "E": {"e": "l"}})
    assert f.is_epi() and not f.is_mono()


def test_morphism_count_between_sets():
    assert len(list(morphisms(FinSet("ab"), FinSet("xyz")))) == 9
    assert len(list(morphisms(FinSet([]), FinSet("xy")))) == 1


# -- coproduct ----------------------------------------------------------------


def test_coproduct_of_two_sets():
    total, injs = coproduct([FinSet(["a"]), FinSet(["b", "c"])])
    assert total.size() == 3
    assert len(injs) == 2 and all(w.mono_checked for w in injs)


def test_empty_coproduct_is_initial():
    total, injs = coproduct([])
    assert total.is_empty() and injs == []
    assert total == initial()


def test_coproduct_of_loop_graphs():
    total, injs = coproduct([one_loop(), one_loop()])
    assert len(total["V"]) == 2 and len(total["E"]) == 2
    assert all(total.source(e) == total.target(e) for e in total["E"])


def test_coproduct_mixed_variants():
    with pytest.raises(MixedVariants):
        coproduct([FinSet(["a"]), one_loop()])


@given(st.lists(st.integers(0, 4), min_size=1, max_size=4))
def test_coproduct_injections_disjoint_and_jointly_surjective(sizes):
    parts = [FinSet([f"x{i}" for i in range(n)]) for n in sizes]
    total, injs = coproduct(parts)
    images = [w.mor.image("*") for w in injs]
    assert sum(len(i) for i in images) == total.size()
    assert set().union(*images) == set(total["*"])


# -- coequalizers --------------------------------------------------------------


def closure_oracle(atoms, pairs):
    """Equivalence classes generated by ``pairs`` by naive repeated merging."""
    classes = [{a} for a in atoms]
    for a, b in pairs:
        ca = next(c for c in classes if a in c)
        cb = next(c for c in classes if b in c)
        if ca is not cb:
            classes.remove(cb)
            ca |= cb
    return {frozenset(c) for c in classes}


def test_coequalize_equal_pair_is_identity():
    f = BaseMor(FinSet(["e"]), FinSet(["f1", "f2"]), {"*": {"e": "f1"}})
    Q, q = coequalize_morphisms(f, f)
    assert Q == f.cod and q.is_iso()


def test_coequalize_one_merge():
    X, Y = FinSet(["e"]), FinSet(["f1", "f2"])
    f = BaseMor(X, Y, {"*": {"e": "f1"}})
    g = BaseMor(X, Y, {"*": {"e": "f2"}})
    Q, q = coequalize_morphisms(f, g)
    assert Q.size() == 1 and q.is_epi()


def test_coequalize_graph_retargets_edges():
    # merging the loop vertex u with w forces the edge w -> x to start at the class of u
    Y = FinGraph(["u", "w", "x"], ["l", "e"], {"l": "u", "e": "w"}, {"l": "u", "e": "x"})
    P = FinGraph(["p"], [], {}, {})
    f = BaseMor(P, Y, {"V": {"p": "u"}, "E": {}})
    g = BaseMor(P, Y, {"V": {"p": "w"}, "E": {}})
    Q, q = coequalize_morphisms(f, g)
    assert len(Q["V"]) == 2 and len(Q["E"]) == 2
    V, E = q.maps["V"], q.maps["E"]
    assert Q.source(E["e"]) == V["u"] == Q.target(E["l"])
    assert Q.target(E["e"]) == V["x"]


def test_quotient_of_graph_merges_edge_ends():
    # identifying two parallel edges identifies their endpoints
    Y = FinGraph(["a", "b", "c", "d"], ["e1", "e2"], {"e1": "a", "e2": "c"}, {"e1": "b", "e2": "d"})
    Q, q = quotient(Y, {"E": [("e1", "e2")]})
    assert len(Q["V"]) == 2 and len(Q["E"]) == 1


@settings(max_examples=150)
@given(st.integers(1, 6), st.data())
def test_coequalizer_matches_closure_oracle(n, data):
    Y = FinSet([f"y{i}" for i in range(n)])
    m = data.draw(st.integers(0, 6))
    X = FinSet([f"x{i}" for i in range(m)])
    fi = data.draw(st.lists(st.integers(0, n - 1), min_size=m, max_size=m))
    gi = data.draw(st.lists(st.integers(0, n - 1), min_size=m, max_size=m))
    f = BaseMor(X, Y, {"*": {f"x{i}": f"y{j}" for i, j in enumerate(fi)}})
    g = BaseMor(X, Y, {"*": {f"x{i}": f"y{j}" for i, j in enumerate(gi)}})
    Q, q = coequalize_morphisms(f, g)
    assert q.is_epi()
    classes = {}
    for y in Y:
        classes.setdefault(q.apply(y), set()).add(y)
    expected = closure_oracle(list(Y), [(f"y{a}", f"y{b}") for a, b in zip(fi, gi)])
    assert {frozenset(c) for c in classes.values()} == expected
    assert f.then(q) == g.then(q)


# -- factorization -------------------------------------------------------------


def test_factorize_injective_gives_iso():
    f = BaseMor(FinSet("ab"), FinSet("abc"), {"*": {"a": "a", "b": "b"}})
    fac = factorize(f)
    assert fac.e.is_iso() and fac.m.mono_checked


def test_factorize_constant_map():
    f = BaseMor(FinSet("abc"), FinSet("xy"), {"*": {"a": "x", "b": "x", "c": "x"}})
    fac = factorize(f)
    assert fac.e.cod.size() == 1
    assert fac.e.then(fac.m.mor) == f
    s = fac.section()
    assert s.then(fac.e) == BaseMor.identity(fac.e.cod)


def test_factorize_graph_collapsing_loops():
    X = FinGraph(["v"], ["l1", "l2"], {"l1": "v", "l2": "v"}, {"l1": "v", "l2": "v"})
    Y = FinGraph(["w", "z"], ["k", "j"], {"k": "w", "j": "z"}, {"k": "w", "j": "z"})
    f = BaseMor(X, Y, {"V": {"v": "w"}, "E": {"l1": "k", "l2": "k"}})
    fac = factorize(f)
    img = fac.e.cod
    assert len(img["V"]) == 1 and len(img["E"]) == 1
    assert img.source("k") == img.target("k")
    assert fac.m.mono_checked


@given(st.integers(0, 4), st.integers(1, 4), st.data())
def test_factorize_property(m, n, data):
    X = FinSet([f"x{i}" for i in range(m)])
    Y = FinSet([f"y{i}" for i in range(n)])
    idx = data.draw(st.lists(st.integers(0, n - 1), min_size=m, max_size=m))
    f = BaseMor(X, Y, {"*": {f"x{i}": f"y{j}" for i, j in enumerate(idx)}})
    fac = factorize(f)
    assert fac.e.is_epi() and fac.m.mor.is_mono()
    assert fac.e.then(fac.m.mor) == f
    assert fac.section().then(fac.e) == BaseMor.identity(fac.e.cod)


# -- chains ----------------------------------------------------------------------


def _inclusion_chain(sizes):
    objs = [FinSet([f"a{i}" for i in range(n)]) for n in sizes]
    return [InjectionWitness.of(BaseMor.inclusion(a, b)) for a, b in zip(objs, objs[1:])], objs


def test_constant_chain_converges_at_zero():
    links, objs = _inclusion_chain([2, 2, 2])
    res = chain_colimit(links, budget=5)
    assert res.status == Converged(0) and res.obj == objs[0]


def test_growing_chain_exhausts():
    links, objs = _inclusion_chain([1, 3, 9, 513])
    res = chain_colimit(links, budget=3)
    assert res.status == Exhausted(3)
    assert res.obj.truncated and res.stage_sizes == [1, 3, 9, 513]


def test_chain_stabilizing_at_two():
    links, objs = _inclusion_chain([1, 2, 4, 4, 4])
    res = chain_colimit(links, budget=8)
    assert res.status == Converged(2) and res.obj == objs[2]


def test_empty_chain_is_initial():
    res = chain_colimit([], budget=3)
    assert res.obj.is_empty() and res.converged


def test_chain_rejects_non_mono():
    f = BaseMor(FinSet("ab"), FinSet("x"), {"*": {"a": "x", "b": "x"}})
    with pytest.raises(NonMonoInChain):
        chain_colimit([InjectionWitness.of(f)], budget=2)


# -- variants --------------------------------------------------------------------


def test_sorted_sets_mono_is_per_sort():
    X = SortedFinSet({"s": ["a"], "t": ["b", "c"]})
    Y = SortedFinSet({"s": ["a"], "t": ["d"]})
    f = BaseMor(X, Y, {"s": {"a": "a"}, "t": {"b": "d", "c": "d"}})
    assert not f.is_mono() and f.is_epi()


def test_small_object_enumerations():
    assert [X.size() for X in small_sets(3)] == [0, 1, 2, 3]
    # graphs with |V| + |E| <= 2 up to isomorphism: empty, point, two points, one loop
    assert len(small_graphs(2)) == 4
