from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from monadcolim.base import FinSet, small_sets
from monadcolim.colimits import (
    DiagramOfMonads, check_colimit_universal, cocone_check, coequalize_monads,
    colimit_weakly_terminal, cointersection, empty_colimit, minimality_check,
)
from monadcolim.errors import BudgetExhausted, FillInFailure, NotWeaklyTerminal
from monadcolim.factorization import factorize_monad_morphism
from monadcolim.graphs import free_monads_H_K, one_loop_graph
from monadcolim.laws import monad_law_check, morphism_law_check
from monadcolim.monads import MonadMorphism, builtin_monad, exception_map

SAMPLES = small_sets(3)


def exc(*names):
    return builtin_monad("exception", exceptions=list(names))


def merge_pair():
    S, T = exc("e"), exc("f1", "f2")
    return exception_map(S, T, {"e": "f1"}, "p"), exception_map(S, T, {"e": "f2"}, "q")


# -- coequalizers ---------------------------------------------------------------------


def test_equal_pair_gives_the_target():
    p, _ = merge_pair()
    res = coequalize_monads(p, p)
    for A in SAMPLES:
        assert res.monad.obj(A).size() == p.target.obj(A).size()
        assert res.projection.component(A).is_iso()


def test_merge_pair_laws_cocone_and_minimality():
    res = coequalize_monads(*merge_pair())
    assert monad_law_check(res.monad, SAMPLES).ok
    assert morphism_law_check(res.projection, SAMPLES).ok
    assert cocone_check(res, SAMPLES).ok
    for A in small_sets(2):
        assert minimality_check(res, A).ok


def test_merge_pair_universal_and_junk_control():
    res = coequalize_monads(*merge_pair())
    assert check_colimit_universal(res, small_sets(1), bound=2).ok
    rep = check_colimit_universal(res, [FinSet(["a"])], bound=2, junk=True)
    assert not rep.ok


def test_non_parallel_pair_rejected():
    p, _ = merge_pair()
    r = exception_map(exc("e"), exc("g"), {"e": "g"}, "r")
    with pytest.raises(ValueError):
        coequalize_monads(p, r)


def classes_oracle(n, pairs):
    """Number of classes of {0..n-1} under the equivalence generated by ``pairs``."""
    label = list(range(n))
    for a, b in pairs:
        la, lb = label[a], label[b]
        label = [la if x == lb else x for x in label]
    return len(set(label))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 3), st.integers(1, 4), st.data())
def test_exception_coequalizer_matches_class_count(m, n, data):
    E = [f"e{i}" for i in range(m)]
    F = [f"f{i}" for i in range(n)]
    pi = data.draw(st.lists(st.integers(0, n - 1), min_size=m, max_size=m))
    qi = data.draw(st.lists(st.integers(0, n - 1), min_size=m, max_size=m))
    S, T = exc(*E), exc(*F)
    p = exception_map(S, T, {e: F[j] for e, j in zip(E, pi)}, "p")
    q = exception_map(S, T, {e: F[j] for e, j in zip(E, qi)}, "q")
    res = coequalize_monads(p, q)
    k = classes_oracle(n, list(zip(pi, qi)))
    for A in small_sets(2):
        assert res.monad.obj(A).size() == A.size() + k


# -- cointersections ------------------------------------------------------------------


def test_cointersection_of_one_morphism_is_its_target():
    E3 = exc("e1", "e2", "e3")
    m = exception_map(E3, exc("e1", "e3"), {"e1": "e1", "e2": "e1", "e3": "e3"}, "m")
    res = cointersection([m], small_sets(2))
    for A in SAMPLES:
        assert res.monad.obj(A).size() == A.size() + 2


def test_cointersection_of_identical_quotients():
    E3 = exc("e1", "e2", "e3")
    m = exception_map(E3, exc("e1", "e3"), {"e1": "e1", "e2": "e1", "e3": "e3"}, "m")
    res = cointersection([m, m], small_sets(2))
    for A in SAMPLES:
        assert res.monad.obj(A).size() == A.size() + 2


def test_cointersection_merging_overlapping_pairs():
    # identifying {e1, e2} and {e2, e3} leaves a single exception
    E3 = exc("e1", "e2", "e3")
    m12 = exception_map(E3, exc("e1", "e3"), {"e1": "e1", "e2": "e1", "e3": "e3"}, "m12")
    m23 = exception_map(E3, exc("e1", "e2"), {"e1": "e1", "e2": "e2", "e3": "e2"}, "m23")
    res = cointersection([m12, m23], small_sets(2))
    assert [res.monad.obj(A).size() for A in SAMPLES] == [1, 2, 3, 4]
    assert cocone_check(res, small_sets(2)).ok
    assert monad_law_check(res.monad, small_sets(2)).ok


def test_cointersection_needs_surjections():
    incl = exception_map(exc("e"), exc("e", "f"), {"e": "e"}, "incl")
    with pytest.raises(ValueError):
        cointersection([incl], small_sets(1))


# -- weakly terminal diagrams ---------------------------------------------------------


def test_single_node_diagram_is_the_node():
    T = exc("f")
    res = colimit_weakly_terminal(DiagramOfMonads([T]), 0)
    assert [res.monad.obj(A).size() for A in SAMPLES] == [1, 2, 3, 4]


def test_diagram_colimit_equals_coequalizer():
    p, q = merge_pair()
    d = DiagramOfMonads([p.source, p.target]).add(0, 1, p).add(0, 1, q)
    via_diagram = colimit_weakly_terminal(d, 1)
    via_pair = coequalize_monads(p, q)
    for A in SAMPLES:
        assert via_diagram.monad.reflection(A).proj == via_pair.monad.reflection(A).proj
    assert cocone_check(via_diagram, SAMPLES).ok


def test_span_has_no_weakly_terminal_node():
    S = exc("e")
    u = exception_map(S, exc("f"), {"e": "f"}, "u")
    v = exception_map(S, exc("g"), {"e": "g"}, "v")
    d = DiagramOfMonads([S, u.target, v.target]).add(0, 1, u).add(0, 2, v)
    for j in (0, 1, 2):
        with pytest.raises(NotWeaklyTerminal):
            colimit_weakly_terminal(d, j)


def test_empty_diagram_gives_identity():
    res = empty_colimit()
    for A in SAMPLES:
        assert res.monad.obj(A).size() == A.size()


# -- divergence and fill-in failure -----------------------------------------------------


def test_graph_sigma_tau_reflection_diverges():
    _, _, sb, tb = free_monads_H_K()
    res = coequalize_monads(sb, tb, budget=3)
    with pytest.raises(BudgetExhausted) as err:
        res.monad.obj(one_loop_graph())
    prof = err.value.profile
    assert len(prof) == 3 and all(a < b for a, b in zip(prof, prof[1:]))


def test_non_multiplicative_map_has_no_fill_in():
    # (m, a) |-> (phi m, a) with phi = 0, 1, 1 on Z3 does not respect multiplication
    W = builtin_monad("writer", order=3)
    phi = {0: 0, 1: 1, 2: 1}
    f = MonadMorphism(W, W, lambda X, s, x: (phi[x[0]], x[1]), "phi")
    with pytest.raises(FillInFailure):
        factorize_monad_morphism(f, small_sets(1))
