"""Separated monads: ``S = Id + S-bar`` with the unit as one coproduct injection."""

from __future__ import annotations

from typing import Callable, Sequence

from .base import BaseMor, BaseObj, monos
from .errors import NonMonicUnit, NotSeparated
from .monads import NOT_UNIT, Monad
from .presented import PresentedMonad


class SeparatedRep:
    """A monad together with its unit complement.

    ``complement(Y)`` is ``S Y`` minus the image of the unit, as a
    subobject; on monos it acts by restriction of ``S``.  ``working`` is the
    monad used for element computations (presented monads lose their depth
    bound there, since bounds are imposed by the caller).
    """

    def __init__(self, monad: Monad, checked_on: Sequence[BaseObj] = ()):
        self.monad = monad
        self.checked_on = list(checked_on)
        if isinstance(monad, PresentedMonad):
            self.working = monad.with_depth(None)
        else:
            self.working = monad

    @property
    def name(self) -> str:
        return self.monad.name

    def is_unit(self, sort, t, X: BaseObj | None = None) -> bool:
        return self.working.unit_preimage(sort, t, X) is not NOT_UNIT

    def complement(self, Y: BaseObj) -> BaseObj:
        SY = self.monad.obj(Y)
        parts = {s: [t for t in SY[s] if not self.is_unit(s, t, Y)] for s in SY.sorts}
        structure = {n: (src, tgt, {a: table[a] for a in parts[src]})
                     for n, (src, tgt, table) in SY.structure.items()}
        try:
            return BaseObj.build(SY.kind, parts, structure, truncated=SY.truncated)
        except ValueError as exc:
            raise NotSeparated(f"{self.name}: unit complement at {Y!r} is not a subobject") from exc

    def complement_upto(self, Y: BaseObj, w: Callable, bound: int | None) -> dict:
        """Complement elements over ``Y`` with layer weight ``<= bound``.

        Returns ``sort -> {element: weight}``.  ``w(sort, atom)`` gives the
        weights of the generators.
        """
        if isinstance(self.working, PresentedMonad):
            if bound is None:
                raise ValueError(f"{self.name} is infinite; a depth bound is needed")
            return self.working.complement_upto(Y, w, bound)
        comp = self.complement(Y)
        out = {}
        for s in comp.sorts:
            row = {}
            for t in comp[s]:
                k = self.working.weight(s, t, w)
                if bound is None or k <= bound:
                    row[t] = k
            out[s] = row
        return out

    def restrict(self, m: BaseMor) -> BaseMor:
        """``S-bar m``: the restriction of ``S m`` to the complements (monos only)."""
        dom, cod = self.complement(m.dom), self.complement(m.cod)
        maps = {s: {t: self.monad.fmap(m, s, t) for t in dom[s]} for s in dom.sorts}
        return BaseMor(dom, cod, maps)

    def __repr__(self):
        return f"Separated({self.name})"


def unit_complement(T: Monad, samples: Sequence[BaseObj]) -> SeparatedRep:
    """Compute and certify the unit complement of ``T`` on the sample objects.

    Raises ``NonMonicUnit`` when some unit component is not injective and
    ``NotSeparated`` when the complement is not a subobject or is not
    preserved by ``T`` on sample monos.
    """
    rep = SeparatedRep(T, samples)
    for X in samples:
        eta = T.unit(X)
        if not eta.is_mono():
            raise NonMonicUnit(f"{T.name}: unit at {X!r} is not injective")
        TX = T.obj(X)
        image = {s: set(eta.maps[s].values()) for s in X.sorts}
        for s in TX.sorts:
            for t in TX[s]:
                if (t in image[s]) != rep.is_unit(s, t, X):
                    raise NotSeparated(f"{T.name}: unit membership of {t!r} is inconsistent")
        rep.complement(X)
    for X in samples:
        for Y in samples:
            for m in monos(X, Y):
                Tm = T.mor(m)
                if not Tm.is_mono():
                    raise NotSeparated(f"{T.name} does not preserve the mono {m!r}")
                try:
                    rep.restrict(m)
                except ValueError as exc:
                    raise NotSeparated(f"{T.name}: complement not preserved by {m!r}") from exc
    return rep
