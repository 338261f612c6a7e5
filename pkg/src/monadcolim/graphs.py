"""Powerset-of-loops functors on finite graphs and the divergence demonstrations.

For a graph ``X`` let ``P`` be the set of all subsets of its loops.

* ``H X``: vertices ``P``, no edges.
* ``K X``: vertices ``P + P``, one edge ``M: (0, M) -> (1, M)`` per subset.
* ``L X``: vertices and edges ``P``, every edge a loop.

``sigma, tau: H -> K`` pick the two copies; identifying them in ``K X``
turns every edge into a loop, which gives ``L X``.  The free-algebra chains
of ``H`` and ``K`` stop after one step, whereas the chain of ``L`` grows
like an iterated exponential.
"""

from __future__ import annotations

from dataclasses import dataclass

from .base import (
    GRAPH, BaseMor, BaseObj, Converged, FinGraph, Inj, coequalize_morphisms, small_graphs,
)
from .free import FreeMonad, induced_morphism
from .functors import Endofunctor, Sum, all_subsets, free_algebra_chain


@dataclass(frozen=True)
class LoopSet:
    graph: BaseObj
    loops: tuple

    @classmethod
    def of(cls, X: BaseObj) -> "LoopSet":
        return cls(X, loops(X))


def loops(X: BaseObj) -> tuple:
    """Edges whose source and target coincide, in carrier order."""
    src, tgt = X.structure["src"][2], X.structure["tgt"][2]
    return tuple(e for e in X["E"] if src[e] == tgt[e])


def _image(f, M):
    return frozenset(f("E", e) for e in M)


class _LoopFunctor(Endofunctor):
    def _subsets(self, X):
        if X.kind != GRAPH:
            raise ValueError(f"{self.name} acts on graphs")
        return all_subsets(loops(X))


class LoopsH(_LoopFunctor):
    name = "H"

    def obj(self, X):
        return FinGraph(self._subsets(X), [], {}, {})

    def fmap(self, f, sort, x):
        return _image(f, x)

    def size_hint(self, X):
        return 2 ** len(loops(X))


class LoopsK(_LoopFunctor):
    name = "K"

    def obj(self, X):
        P = self._subsets(X)
        return FinGraph([Inj(0, M) for M in P] + [Inj(1, M) for M in P], P,
                        {M: Inj(0, M) for M in P}, {M: Inj(1, M) for M in P})

    def fmap(self, f, sort, x):
        if sort == "V":
            return Inj(x.index, _image(f, x.atom))
        return _image(f, x)

    def size_hint(self, X):
        return 3 * 2 ** len(loops(X))


class LoopsL(_LoopFunctor):
    name = "L"

    def obj(self, X):
        P = self._subsets(X)
        return FinGraph(P, P, {M: M for M in P}, {M: M for M in P})

    def fmap(self, f, sort, x):
        return _image(f, x)

    def size_hint(self, X):
        return 2 * 2 ** len(loops(X))


def functor_H() -> Endofunctor:
    return LoopsH()


def functor_K() -> Endofunctor:
    return LoopsK()


def functor_L() -> Endofunctor:
    return LoopsL()


class NatTrans:
    """A natural transformation given elementwise: ``alpha(sort, h)``."""

    def __init__(self, source: Endofunctor, target: Endofunctor, fn, name: str):
        self.source = source
        self.target = target
        self.fn = fn
        self.name = name

    def __call__(self, sort, h):
        return self.fn(sort, h)

    def component(self, X: BaseObj) -> BaseMor:
        S, T = self.source.obj(X), self.target.obj(X)
        return BaseMor(S, T, {s: {h: self.fn(s, h) for h in S[s]} for s in S.sorts})

    def naturality_holds(self, f: BaseMor) -> bool:
        lhs = self.component(f.dom).then(self.target.mor(f))
        rhs = self.source.mor(f).then(self.component(f.cod))
        return lhs == rhs


def transformations_sigma_tau() -> tuple[NatTrans, NatTrans]:
    H, K = functor_H(), functor_K()
    sigma = NatTrans(H, K, lambda s, M: Inj(0, M), "sigma")
    tau = NatTrans(H, K, lambda s, M: Inj(1, M), "tau")
    return sigma, tau


def hat_H() -> Endofunctor:
    """``H + H + H + K``."""
    return Sum([functor_H(), functor_H(), functor_H(), functor_K()])


def split_epis() -> tuple[NatTrans, NatTrans, NatTrans]:
    """``sigma0 = [sigma, sigma, tau, id]``, ``tau0 = [tau, sigma, tau, id]`` and the
    common section (the fourth injection ``K -> H + H + H + K``)."""
    Hh, K = hat_H(), functor_K()
    sigma, tau = transformations_sigma_tau()

    def pick(first):
        def fn(s, u):
            if u.index == 3:
                return u.atom
            alpha = (first, sigma, tau)[u.index]
            return alpha(s, u.atom)
        return fn

    s0 = NatTrans(Hh, K, pick(sigma), "sigma0")
    t0 = NatTrans(Hh, K, pick(tau), "tau0")
    section = NatTrans(K, Hh, lambda s, k: Inj(3, k), "in3")
    return s0, t0, section


def one_loop_graph() -> FinGraph:
    return FinGraph(["v"], ["l"], {"l": "v"}, {"l": "v"})


def pushout_is_L(alpha: NatTrans, beta: NatTrans, X: BaseObj) -> bool:
    """Is the coequalizer of ``alpha_X, beta_X`` isomorphic to ``L X`` via ``(i, M) |-> M``?"""
    Q, q = coequalize_morphisms(alpha.component(X), beta.component(X))
    LX = functor_L().obj(X)
    try:
        iso = BaseMor(Q, LX, {"V": {v: v.atom for v in Q["V"]}, "E": {e: e for e in Q["E"]}})
    except ValueError:
        return False
    return iso.is_iso()


def graph_label(X: BaseObj) -> str:
    return f"V{len(X['V'])} E{len(X['E'])} loops{len(loops(X))}"


def _status(chain) -> str:
    st = chain.status
    return f"Converged({st.level})" if isinstance(st, Converged) else f"Exhausted({st.steps})"


def demo_no_coequalizer(budget: int = 3, samples=None) -> dict:
    """Chains of H and K on sample graphs and of L on the one-loop graph."""
    samples = samples if samples is not None else small_graphs(3)
    report = {"H": [], "K": []}
    for name, F in (("H", functor_H()), ("K", functor_K())):
        for X in samples:
            ch = free_algebra_chain(F, X, budget=max(budget, 2))
            report[name].append({"graph": repr(X), "label": graph_label(X), "status": _status(ch),
                                 "vertex_counts": ch.sizes("V")})
    seed = one_loop_graph()
    ch = free_algebra_chain(functor_L(), seed, budget=budget)
    counts = ch.sizes("V")
    report["L"] = {
        "seed": repr(seed),
        "status": _status(ch),
        "vertex_counts": counts,
        "loop_counts": [len(loops(W)) for W in ch.stages],
        "strictly_increasing": all(a < b for a, b in zip(counts, counts[1:])),
        "growth_law_holds": all(counts[k + 1] == 1 + 2 ** len(loops(ch.stages[k]))
                                for k in range(len(counts) - 1)),
    }
    report["verdict"] = ("no initial algebra of L found within budget; this is evidence only, "
                         "non-existence is a known theorem and is not proved by this run")
    return report


def demo_no_cointersection(budget: int = 3, samples=None) -> dict:
    samples = samples if samples is not None else small_graphs(3)
    s0, t0, section = split_epis()
    K = functor_K()
    report = {"section_checks": [], "pushout_equals_L": []}
    for X in samples:
        ident = BaseMor.identity(K.obj(X))
        report["section_checks"].append({
            "graph": repr(X),
            "sigma0_section": section.component(X).then(s0.component(X)) == ident,
            "tau0_section": section.component(X).then(t0.component(X)) == ident,
        })
        report["pushout_equals_L"].append({"graph": repr(X), "equal": pushout_is_L(s0, t0, X)})
    report["L"] = demo_no_coequalizer(budget, samples=[])["L"]
    report["verdict"] = demo_no_coequalizer(budget, samples=[])["verdict"]
    return report


def free_monads_H_K():
    """``F_H``, ``F_K`` and the induced ``sigma-bar, tau-bar: F_H -> F_K``."""
    FH, FK = FreeMonad(functor_H()), FreeMonad(functor_K())
    sigma, tau = transformations_sigma_tau()
    sb = induced_morphism(FH, FK, sigma, "sigma_bar")
    tb = induced_morphism(FH, FK, tau, "tau_bar")
    return FH, FK, sb, tb
