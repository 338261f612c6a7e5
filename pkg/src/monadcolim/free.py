"""Free monads of endofunctors whose free algebras are reached by a finite chain."""

from __future__ import annotations

from typing import Callable

from .base import Inj, coproduct, empty_like
from .errors import BudgetExhausted
from .functors import ATOM_CEILING, DEFAULT_BUDGET, Endofunctor
from .monads import NOT_UNIT, Monad, MonadMorphism


class FreeMonad(Monad):
    """``F X = X + H(F X)`` realised literally as a fixed point.

    Elements are ``Inj(0, x)`` (a generator) and ``Inj(1, h)`` with ``h`` an
    element of ``H`` applied to the carrier itself.  The carrier is found by
    iterating ``C -> X + H C`` from the empty object; this requires ``H`` to
    send inclusions to inclusions (identity on elements), which is checked
    at every step.
    """

    def __init__(self, H: Endofunctor, budget: int = DEFAULT_BUDGET,
                 ceiling: int = ATOM_CEILING, name: str | None = None):
        super().__init__()
        self.H = H
        self.budget = budget
        self.ceiling = ceiling
        self.name = name or f"F_{H.name}"
        self.profiles: dict = {}

    def _obj(self, X):
        return self._build(X, self.ceiling)

    def obj_within(self, X, ceiling):
        hit = self._cache.get(X)
        if hit is None:
            self.check_variant(X)
            hit = self._build(X, min(ceiling, self.ceiling))
            self._cache[X] = hit
        return hit

    def _build(self, X, ceiling):
        C = empty_like(X)
        profile = [0]
        for _ in range(self.budget):
            hint = self.H.size_hint(C)
            if hint is not None and hint > ceiling:
                raise BudgetExhausted(f"{self.name} at an object of sizes {X.sizes()}: next stage has {_fmt(hint)} atoms",
                                      profile + [hint])
            nxt = coproduct([X, self.H.obj(C)], X.kind, X.sorts)[0]
            if not all(nxt.has(s, a) for s, a in C.atoms()):
                raise ValueError(f"{self.H.name} does not send inclusions to inclusions")
            profile.append(nxt.size())
            if nxt == C:
                self.profiles[X] = profile
                return C
            C = nxt
        raise BudgetExhausted(f"{self.name} at an object of sizes {X.sizes()}: no fixed point within {self.budget} steps",
                              profile)

    def _unit(self, X, sort, x):
        return Inj(0, x)

    def _join(self, X, sort, tt):
        if tt.index == 0:
            return tt.atom
        return Inj(1, self.H.fmap(lambda s, t: self._join(X, s, t), sort, tt.atom))

    def _fmap(self, f, sort, t):
        if t.index == 0:
            return Inj(0, f(sort, t.atom))
        return Inj(1, self.H.fmap(lambda s, u: self._fmap(f, s, u), sort, t.atom))

    def support(self, sort, t):
        if t.index == 0:
            return [(sort, t.atom)]
        out = []
        for s, u in _h_support(self.H, sort, t.atom):
            out.extend(self.support(s, u))
        return list(dict.fromkeys(out))

    def unit_preimage(self, sort, t, X=None):
        return t.atom if isinstance(t, Inj) and t.index == 0 else NOT_UNIT

    def size_hint(self, X):
        return None


def _fmt(n: int) -> str:
    return str(n) if n < 10 ** 12 else f"about 10^{len(str(n)) - 1}"


def _h_support(H: Endofunctor, sort, h):
    seen = []
    H.fmap(lambda s, a: seen.append((s, a)) or a, sort, h)
    return seen


def induced_morphism(F: FreeMonad, G: FreeMonad, alpha: Callable, name: str = "alpha") -> MonadMorphism:
    """The monad morphism ``F_H -> F_K`` induced by a natural ``alpha: H -> K``.

    ``alpha(sort, h)`` sends an element of ``H Y`` to one of ``K Y``.
    """

    def fn(X, sort, t):
        if t.index == 0:
            return t
        inner = F.H.fmap(lambda s, u: fn(X, s, u), sort, t.atom)
        return Inj(1, alpha(sort, inner))

    return MonadMorphism(F, G, fn, name)
