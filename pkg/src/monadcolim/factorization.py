"""Image factorization of monad morphisms: ``f = m . e`` through the image monad."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .base import BaseObj
from .errors import FillInFailure
from .monads import OVERFLOW, FnMap, Monad, MonadMorphism
from .report import LawReport


class ImageMonad(Monad):
    """``R A`` = image of ``f_A: S A -> T A``.

    The unit is ``e . eta^S``.  The multiplication is the diagonal fill-in:
    ``mu^R (w) = e (mu^S (z))`` for any ``z`` in ``S S A`` with
    ``(e * e)(z) = w``; every preimage must give the same value.
    """

    def __init__(self, f: MonadMorphism, name: str | None = None):
        super().__init__()
        self.f = f
        self.S, self.T = f.source, f.target
        self.name = name or f"Im({f.name})"
        self.variants = tuple(v for v in self.S.variants if v in self.T.variants)
        self._fill: dict = {}

    def _obj(self, A):
        comp = self.f.component(A)
        TA = comp.cod
        carrier = {s: [b for b in TA[s] if b in comp.image(s)] for s in TA.sorts}
        structure = {n: (src, tgt, {a: table[a] for a in carrier[src]})
                     for n, (src, tgt, table) in TA.structure.items()}
        truncated = self.S.obj(A).truncated or TA.truncated
        return BaseObj.build(TA.kind, carrier, structure, truncated)

    def e_elem(self, A, sort, s):
        return self.f.elem(A, sort, s)

    def fill_in(self, A: BaseObj) -> dict:
        """``{(sort, w): value}`` on ``R R A``; raises ``FillInFailure`` if ill-defined."""
        hit = self._fill.get(A)
        if hit is not None:
            return hit
        S = self.S
        RA = self.obj(A)
        SA = S.obj(A)
        SSA = S.obj(SA)
        eA = FnMap(lambda s, x: self.f.elem(A, s, x), RA, SA)
        table: dict = {}
        for s in SSA.sorts:
            for z in SSA[s]:
                inner = S.fmap(eA, s, z)                       # S(e_A)(z) in S(R A)
                w = OVERFLOW if inner is OVERFLOW else self.f.elem(RA, s, inner)
                v = self.f.elem(A, s, S.join_elem(A, s, z))
                if w is OVERFLOW or v is OVERFLOW:
                    continue
                prev = table.setdefault((s, w), v)
                if prev != v:
                    raise FillInFailure(f"fill-in at {A!r} sends {w!r} to both {prev!r} and {v!r}")
        self._fill[A] = table
        return table

    def _unit(self, A, sort, a):
        return self.f.elem(A, sort, self.S.unit_elem(A, sort, a))

    def _join(self, A, sort, ww):
        return self.fill_in(A).get((sort, ww), OVERFLOW)

    def _fmap(self, g, sort, r):
        return self.T.fmap(g, sort, r)

    def support(self, sort, r):
        return self.T.support(sort, r)

    def size_hint(self, X):
        return self.T.size_hint(X)


@dataclass
class MonadFactorization:
    e: MonadMorphism
    m: MonadMorphism
    R: ImageMonad
    report: LawReport


def factorize_monad_morphism(f: MonadMorphism, samples: Sequence[BaseObj]) -> MonadFactorization:
    """Factor ``f`` as a componentwise surjection followed by a componentwise injection.

    The report checks surjectivity of ``e``, injectivity of ``m``, ``m . e = f``,
    that the fill-in is the restriction of ``mu^T`` to the image (a second,
    independent route to ``mu^R``), and that ``e`` and ``m`` preserve the
    monad structure.
    """
    R = ImageMonad(f)
    e = MonadMorphism(f.source, R, f.fn, f"e({f.name})")
    m = MonadMorphism(R, f.target, lambda X, s, r: r, f"m({f.name})")
    report = LawReport(f"factorization of {f.name}")
    T = f.target
    for A in samples:
        ec, mc = e.component(A), m.component(A)
        ok_e = all(v is OVERFLOW or R.obj(A).has(s, v) for s, t in ec.maps.items() for v in t.values())
        report.expect("e lands in the image", A, ok_e, True)
        report.expect("e surjective", A, all(set(R.obj(A)[s]) <= set(ec.maps[s].values())
                                             for s in R.obj(A).sorts), True)
        report.expect("m injective", A, mc.is_mono(), True)
        report.expect("m . e = f", A, ec.then(mc).maps, f.component(A).maps)
        RA = R.obj(A)
        incl = FnMap(lambda s, r: r, T.obj(A), RA)
        for (s, w), v in R.fill_in(A).items():
            via_T = T.join_elem(A, s, T.fmap(incl, s, w))
            if via_T is OVERFLOW:
                report.excused += 1
                continue
            report.expect("fill-in equals restricted multiplication of the target", (A, w), v, via_T)
        RRA = R.obj(RA)
        table = R.fill_in(A)
        missing = [w for s in RRA.sorts for w in RRA[s] if (s, w) not in table]
        if missing and not (RA.truncated or RRA.truncated):
            report.fail("e * e surjective", A, f"no preimage for {missing[:3]!r}")
    return MonadFactorization(e, m, R, report)
