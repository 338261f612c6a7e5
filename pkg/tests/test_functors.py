from __future__ import annotations

import pytest

from monadcolim.base import (
    GRAPH, BaseMor, Converged, Exhausted, FinSet, SortedFinSet, initial, small_graphs, small_sets,
)
from monadcolim.errors import BudgetExhausted
from monadcolim.functors import (
    Constant, DropOne, Identity, NonemptyPowersetFunctor, Pairing, Polynomial,
    free_algebra, free_algebra_chain, functor_law_check, initial_algebra, is_prefixpoint,
)
from monadcolim.graphs import functor_K, functor_L, one_loop_graph


E = FinSet(["e"])


def test_constant_functor_chain_converges_in_one_step():
    ch = free_algebra_chain(Constant(E), FinSet(["a", "b"]), budget=5)
    assert ch.status == Converged(1)
    assert ch.carrier.size() == 3


def test_free_algebra_decomposes():
    # W = X + H W via the inverse of the bijective link
    H = Polynomial({"c": 0, "u": 1})
    with pytest.raises(BudgetExhausted):
        free_algebra(H, FinSet(["a"]), budget=4)
    fa = free_algebra(Constant(E), FinSet(["a"]))
    W = fa.carrier
    assert fa.unit.is_mono() and fa.structure.is_mono()
    assert fa.unit.image("*") | fa.structure.image("*") == set(W["*"])
    assert not fa.unit.image("*") & fa.structure.image("*")


def test_initial_algebra_of_constant():
    res = initial_algebra(Constant(E))
    assert res.carrier.size() == 1
    assert res.structure.then(res.structure_inverse) == BaseMor.identity(res.structure.dom)
    assert res.structure_inverse.then(res.structure) == BaseMor.identity(res.carrier)


def test_initial_algebra_of_componentwise_pairing():
    H = Pairing([("s", "t", Constant(E)), ("t", "s", Constant(E))])
    zero = SortedFinSet({"s": [], "t": []})
    res = initial_algebra(H, zero)
    assert len(res.carrier["s"]) == 1 and len(res.carrier["t"]) == 1


def test_initial_algebra_of_L_is_not_found():
    with pytest.raises(BudgetExhausted) as err:
        initial_algebra(functor_L(), initial(GRAPH), budget=4)
    # 0, then L0 = one vertex with one loop, then 2 and 4 and 16 vertices
    assert [p["V"] for p in err.value.profile] == [0, 1, 2, 4, 16]


def test_L_chain_grows():
    ch = free_algebra_chain(functor_L(), one_loop_graph(), budget=3)
    assert ch.status == Exhausted(3)
    assert ch.sizes("V") == [1, 3, 9, 513]


def test_prefixpoints():
    assert is_prefixpoint(Constant(E), FinSet(["a"]))
    assert is_prefixpoint(Identity(), FinSet(["a", "b"])).witness.is_iso()
    assert not is_prefixpoint(NonemptyPowersetFunctor(), FinSet(["a", "b"]))
    assert not is_prefixpoint(NonemptyPowersetFunctor(), FinSet(["a", "b", "c"]))


def test_prefixpoint_convergence_bound():
    # Z a prefixpoint with Z + X ~= Z by cardinality: the chain on X converges within |Z| steps
    H = Constant(FinSet(["e1", "e2"]))
    for Z in small_sets(4):
        for X in small_sets(2):
            if is_prefixpoint(H, Z) and Z.size() >= X.size() + 2:
                ch = free_algebra_chain(H, X, budget=Z.size() + 1)
                assert ch.converged and ch.status.level <= Z.size()


def test_functor_laws_clean_and_negative_control():
    samples = small_sets(2)
    assert functor_law_check(Constant(E), samples).ok
    assert functor_law_check(NonemptyPowersetFunctor(), samples).ok
    assert not functor_law_check(DropOne(Identity()), samples).ok


def test_graph_functor_K_lawful():
    rep = functor_law_check(functor_K(), small_graphs(3, max_loops=2))
    assert rep.ok, rep.violations[:3]
