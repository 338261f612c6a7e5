from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from monadcolim.base import BaseMor, Converged, Exhausted, FinSet, Inj, small_sets
from monadcolim.coproduct import (
    Base, CoproductMonad, JunkExtended, Layer, MultiAlgebraTarget, build_HA, compact_pair_check,
    coproduct_chain, decomposition_check, verify_universal,
)
from monadcolim.errors import NotSeparated
from monadcolim.laws import monad_law_check
from monadcolim.monads import EMAlgebra, builtin_monad
from monadcolim.presented import PresentedMonad
from monadcolim.separated import unit_complement

SETS = small_sets(2)


def exc(*names):
    return builtin_monad("exception", exceptions=list(names))


def sep(T, samples=SETS):
    return unit_complement(T, samples)


def free(op, depth):
    return PresentedMonad.free({op: 1}, depth=depth)


# -- H_A --------------------------------------------------------------------------


def test_HA_two_exceptions_on_empty_family():
    H = build_HA([sep(exc("e")), sep(exc("f1", "f2"))], FinSet(["a"]))
    X, Y = H(H.empty_family())
    assert {x.elem for x in X} == {Inj(1, "e")}
    assert {y.elem for y in Y} == {Inj(1, "f1"), Inj(1, "f2")}


def test_HA_single_monad_is_constant_in_the_family():
    H = build_HA([sep(free("s", 2))], FinSet(["a"]), depth=2)
    first = H(H.empty_family())
    assert H(first) == first
    assert [repr(x.elem) for x in first[0]] == ["s(a)", "s(s(a))"]


def test_HA_free_pair_depth_one():
    H = build_HA([sep(free("s", 1)), sep(free("t", 1))], FinSet(["a"]), depth=1)
    X, Y = H(H.empty_family())
    assert [repr(x.elem) for x in X] == ["s(a)"]
    assert [repr(y.elem) for y in Y] == ["t(a)"]


# -- chains -----------------------------------------------------------------------


def test_exception_pair_converges():
    st_ = coproduct_chain([sep(exc("e")), sep(exc("f"))], FinSet(["a"]), budget=5, stop=False)
    # X_1 = E, Y_1 = F and every later level repeats them
    assert st_.status == Converged(1)
    assert st_.profile == [[0, 0]] + [[1, 1]] * 5


def test_single_exception_converges_at_once():
    st_ = coproduct_chain([sep(exc("e"))], FinSet(["a"]))
    assert st_.converged and st_.components[0].size() == 1


def blocks_oracle(depth, k):
    """Words over {s, t} starting with s, length 1..depth, with at most k maximal blocks."""
    n = 0
    for length in range(1, depth + 1):
        for word in itertools.product("st", repeat=length - 1):
            w = "s" + "".join(word)
            runs = 1 + sum(a != b for a, b in zip(w, w[1:]))
            n += runs <= k
    return n


def test_free_pair_chain_grows_by_alternation():
    st_ = coproduct_chain([sep(free("s", 6)), sep(free("t", 6))], FinSet(["a"]),
                          budget=3, depth=6)
    assert st_.status == Exhausted(3)
    assert [p[0] for p in st_.profile] == [blocks_oracle(6, k) for k in range(4)]
    assert [p[0] for p in st_.profile] == [p[1] for p in st_.profile]


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 2))
def test_chain_levels_are_monotone_and_stable(ne, nf, na):
    E = exc(*[f"e{i}" for i in range(ne)])
    F = exc(*[f"f{i}" for i in range(nf)])
    A = FinSet([f"a{i}" for i in range(na)])
    st_ = coproduct_chain([sep(E), sep(F)], A, budget=5, stop=False)
    for lo, hi in zip(st_.levels, st_.levels[1:]):
        for x, y in zip(lo, hi):
            assert set(x.atoms()) <= set(y.atoms())
    k = st_.status.level
    for later in st_.levels[k:]:
        assert later == st_.levels[k]


def test_terminal_summand_is_rejected():
    with pytest.raises(NotSeparated):
        CoproductMonad([sep(exc("e")), sep(builtin_monad("terminal"))])


# -- coproduct monad ----------------------------------------------------------------


def test_exception_coproduct_laws_and_decomposition():
    R = CoproductMonad([sep(exc("e1", "e2")), sep(exc("f"))])
    assert monad_law_check(R, small_sets(2)).ok
    for A in small_sets(3):
        assert decomposition_check(R, A).ok


def test_free_coproduct_laws_and_decomposition():
    R = CoproductMonad([sep(free("s", 3)), sep(free("t", 3))], depth=3)
    assert monad_law_check(R, small_sets(1)).ok
    assert decomposition_check(R, FinSet(["a"])).ok


def test_writer_exception_coproduct_carrier():
    W = builtin_monad("writer", order=2)
    R = CoproductMonad([sep(W), sep(exc("e"))])
    RA = R.obj(FinSet(["a"]))
    # M x (A + E) for M = Z2
    assert RA.size() == 4
    assert monad_law_check(R, small_sets(1)).ok


# -- extension to homomorphisms ----------------------------------------------------


def test_extend_identity_target_gives_identity():
    R = CoproductMonad([sep(exc("e")), sep(exc("f"))])
    A = FinSet(["a"])
    RA = R.obj(A)
    target = MultiAlgebraTarget(RA, R.structures())
    h = R.extend_to_hom(R.unit(A), target)
    assert h == BaseMor.identity(RA)


def test_extend_to_singleton_is_constant():
    R = CoproductMonad([sep(exc("e")), sep(exc("f"))])
    A, B = FinSet(["a", "b"]), FinSet(["*"])
    SE, SF = R.seps[0].monad, R.seps[1].monad
    target = MultiAlgebraTarget(B, [next(SE.em_algebras(B)), next(SF.em_algebras(B))])
    f = BaseMor(A, B, {"*": {"a": "*", "b": "*"}})
    h = R.extend_to_hom(f, target)
    assert set(h.maps["*"].values()) == {"*"}


def test_extend_writer_exception_by_hand():
    W, E = builtin_monad("writer", order=2), exc("e")
    R = CoproductMonad([sep(W), sep(E)])
    A, B = FinSet(["a"]), FinSet(["b0", "b1"])
    flip = {"b0": "b1", "b1": "b0"}
    act = EMAlgebra(W, B, {"*": {(m, b): (flip[b] if m else b) for m in (0, 1) for b in B}})
    point = EMAlgebra(E, B, {"*": {Inj(0, "b0"): "b0", Inj(0, "b1"): "b1", Inj(1, "e"): "b0"}})
    f = BaseMor(A, B, {"*": {"a": "b1"}})
    h = R.extend_to_hom(f, MultiAlgebraTarget(B, [act, point])).maps["*"]
    exc_atom = Layer(1, Inj(1, "e"))
    # level 1: h(a) = f(a), h(e) = the chosen point; level 2: the Z2 action flips
    assert h[Base("a")] == "b1"
    assert h[exc_atom] == "b0"
    assert h[Layer(0, (1, Base("a")))] == "b0"
    assert h[Layer(0, (1, exc_atom))] == "b1"
    assert verify_universal(R, [A], targets=[MultiAlgebraTarget(B, [act, point])]).ok


# -- universal property --------------------------------------------------------------


def test_universal_exception_pair():
    R = CoproductMonad([sep(exc("e1", "e2")), sep(exc("f"))])
    assert verify_universal(R, SETS, bound=2).ok


def test_universal_bound_one():
    R = CoproductMonad([sep(exc("e")), sep(exc("f"))])
    assert verify_universal(R, SETS, bound=1).ok


def test_universal_junk_atom_is_caught():
    R = JunkExtended([sep(exc("e")), sep(exc("f"))])
    rep = verify_universal(R, [FinSet(["a"])], bound=2)
    assert not rep.ok
    assert any(v.law == "number of mediating homomorphisms" for v in rep.violations)


# -- compact pair -----------------------------------------------------------------------


def test_compact_pair_exceptions():
    S, T = sep(exc("e")), sep(exc("f1", "f2"))
    rep = compact_pair_check(S, T, FinSet(["a"]), budget=4)
    assert rep.ok
    assert rep.initial["SbarTbar"].size() == 1 and rep.initial["TbarSbar"].size() == 2


def test_compact_pair_symmetric():
    S = sep(exc("e"))
    rep = compact_pair_check(S, S, FinSet(["a"]), budget=3)
    assert rep.ok
    assert rep.initial["SbarTbar"].size() == rep.initial["TbarSbar"].size() == 1


def test_compact_pair_free():
    rep = compact_pair_check(sep(free("s", 3)), sep(free("t", 3)), FinSet(["a"]), budget=4, depth=3)
    assert rep.ok and rep.agreements
