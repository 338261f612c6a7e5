"""Exhaustive (with seeded sampling fallback) checks of monad and morphism laws."""

from __future__ import annotations

import itertools
import random
from typing import Iterable, Sequence

from .base import GRAPH, SET, BaseMor, BaseObj, morphisms, small_objects
from .monads import OVERFLOW, FnMap, Monad, MonadMorphism
from .report import LawReport

EXHAUSTIVE_LIMIT = 200_000
SAMPLES_PER_LAW = 3000
MAX_MAPS = 4000


def sample_objects(kind: str, sizes: Sequence[int], sorts: Sequence[str] = ("s", "t"),
                   max_loops: int = 2) -> list[BaseObj]:
    """Base objects whose size (``|V| + |E|`` for graphs) is one of ``sizes``."""
    wanted = set(sizes)
    objs = small_objects(kind, max(wanted), sorts)
    out = [X for X in objs if X.size() in wanted]
    if kind == GRAPH:
        out = [X for X in out
               if sum(X.source(e) == X.target(e) for e in X.edges) <= max_loops]
    return out


def _excused(*values) -> bool:
    return any(v is OVERFLOW for v in values)


def _well_formed(report: LawReport, law: str, mor: BaseMor):
    if any(v is OVERFLOW for t in mor.maps.values() for v in t.values()):
        report.excused += 1
        return
    report.checked += 1
    try:
        BaseMor(mor.dom, mor.cod, mor.maps)
    except ValueError as exc:
        report.fail(law, mor.dom, str(exc))


def _compare(report: LawReport, law: str, where, lhs, rhs):
    if _excused(lhs, rhs):
        report.excused += 1
    else:
        report.expect(law, where, lhs, rhs)


def _elements_of_T(T: Monad, Y: BaseObj, rng: random.Random, limit: int, count: int):
    """All elements of ``T Y`` if there are at most ``limit``, else a seeded sample."""
    hint = T.size_hint(Y)
    if hint is None and Y.size() > 64:
        hint = limit + 1
    if hint is not None and hint > limit:
        for s in Y.sorts:
            if not Y[s]:
                continue
            for _ in range(count):
                yield s, T.random_element(Y, s, rng), True
        return
    TY = T.obj(Y)
    for s in TY.sorts:
        for t in TY[s]:
            yield s, t, False


def monad_law_check(T: Monad, samples: Sequence[BaseObj], seed: int = 0,
                    limit: int = EXHAUSTIVE_LIMIT, max_maps: int = MAX_MAPS,
                    compositions: bool = True) -> LawReport:
    """Unit laws, associativity, naturality of unit and multiplication, functoriality.

    Every element is checked when the relevant ``T`` power has at most
    ``limit`` elements; otherwise associativity is checked on a seeded
    random sample (noted in the report).
    """
    report = LawReport(f"monad {T.name}")
    rng = random.Random(seed)
    sampled = False
    for X in samples:
        TX = T.obj(X)
        TTX = T.obj(TX)
        _well_formed(report, "unit is a morphism", T.unit(X))
        _well_formed(report, "multiplication is a morphism", T.mult(X))
        for s in TX.sorts:
            for t in TX[s]:
                _compare(report, "left unit", (X, t),
                         T.join_elem(X, s, T.unit_elem(TX, s, t)), t)
                eta = FnMap(lambda s_, a: T.unit_elem(X, s_, a), TX, X)
                _compare(report, "right unit", (X, t), T.join_elem(X, s, T.fmap(eta, s, t)), t)
        mu = FnMap(lambda s_, a: T.join_elem(X, s_, a), TX, TTX)
        for s, ttt, was_sampled in _elements_of_T(T, TTX, rng, limit, SAMPLES_PER_LAW):
            sampled |= was_sampled
            lhs = T.join_elem(X, s, T.join_elem(TX, s, ttt))
            rhs = T.join_elem(X, s, T.fmap(mu, s, ttt))
            _compare(report, "associativity", (X, ttt), lhs, rhs)
    if sampled:
        report.notes.append(f"associativity sampled (seed {seed}) where T^3 exceeds {limit} elements")
        report.exhaustive = False
    _naturality(T, samples, report, max_maps, compositions)
    return report


def _sample_maps(samples, max_maps):
    out = []
    for X, Y in itertools.product(samples, repeat=2):
        for f in morphisms(X, Y):
            out.append(f)
            if len(out) >= max_maps:
                return out, True
    return out, False


def _naturality(T: Monad, samples, report: LawReport, max_maps: int, compositions: bool):
    maps, capped = _sample_maps(samples, max_maps)
    if capped:
        report.notes.append(f"naturality checked on the first {max_maps} sample morphisms")
        report.exhaustive = False
    Tmaps = {}
    for f in maps:
        X, Y = f.dom, f.cod
        Tf = T.mor(f)
        Tmaps[id(f)] = Tf
        _well_formed(report, "functor on morphisms", Tf)
        for s in X.sorts:
            for x in X[s]:
                _compare(report, "unit naturality", (f, x),
                         T.fmap(f, s, T.unit_elem(X, s, x)), T.unit_elem(Y, s, f(s, x)))
        TX, TY = T.obj(X), T.obj(Y)
        TTX = T.obj(TX)
        Tf_map = FnMap(lambda s_, a: T.fmap(f, s_, a), TY, TX)
        for s in TTX.sorts:
            for tt in TTX[s]:
                _compare(report, "multiplication naturality", (f, tt),
                         T.fmap(f, s, T.join_elem(X, s, tt)),
                         T.join_elem(Y, s, T.fmap(Tf_map, s, tt)))
        if f.dom == f.cod and f.is_identity_on_atoms():
            _compare(report, "preserves identities", f, Tf.maps, BaseMor.identity(TX).maps)
    if not compositions:
        return
    by_dom = {}
    for f in maps:
        by_dom.setdefault(f.dom, []).append(f)
    done = 0
    for f in maps:
        for g in by_dom.get(f.cod, []):
            if done >= max_maps:
                report.notes.append(f"composition checks capped at {max_maps}")
                report.exhaustive = False
                return
            done += 1
            lhs = T.mor(f.then(g)).maps
            Tf, Tg = Tmaps[id(f)].maps, Tmaps[id(g)].maps
            rhs = {s: {a: (OVERFLOW if b is OVERFLOW else Tg[s].get(b, OVERFLOW))
                       for a, b in t.items()} for s, t in Tf.items()}
            if any(v is OVERFLOW for t in rhs.values() for v in t.values()):
                report.excused += 1
                continue
            _compare(report, "preserves composition", (f, g), lhs, rhs)


def morphism_law_check(f: MonadMorphism, samples: Sequence[BaseObj],
                       max_maps: int = MAX_MAPS) -> LawReport:
    """Unit and multiplication preservation and naturality of ``f: S -> T``."""
    S, T = f.source, f.target
    report = LawReport(f"morphism {f.name}: {S.name} -> {T.name}")
    for X in samples:
        _well_formed(report, "component is a morphism", f.component(X))
        for s in X.sorts:
            for x in X[s]:
                _compare(report, "preserves unit", (X, x),
                         f.elem(X, s, S.unit_elem(X, s, x)), T.unit_elem(X, s, x))
        SX = S.obj(X)
        SSX = S.obj(SX)
        fX = FnMap(lambda s_, a: f.elem(X, s_, a), T.obj(X), SX)
        for s in SSX.sorts:
            for z in SSX[s]:
                lhs = f.elem(X, s, S.join_elem(X, s, z))
                rhs = T.join_elem(X, s, T.fmap(fX, s, f.elem(SX, s, z)))
                _compare(report, "preserves multiplication", (X, z), lhs, rhs)
    maps, capped = _sample_maps(samples, max_maps)
    if capped:
        report.notes.append(f"naturality checked on the first {max_maps} sample morphisms")
        report.exhaustive = False
    for g in maps:
        SX = S.obj(g.dom)
        for s in SX.sorts:
            for a in SX[s]:
                _compare(report, "naturality", (g, a),
                         T.fmap(g, s, f.elem(g.dom, s, a)), f.elem(g.cod, s, S.fmap(g, s, a)))
    return report


def free_monad_decomposition_check(F, sizes: Iterable[int] = (0, 1, 2),
                                   depths: Iterable[int] = (0, 1, 2, 3)) -> LawReport:
    """``F A = A + H(F A)`` at every truncation depth, and ``F m`` injective for injective ``m``.

    ``F`` is a presented monad without rules.  At depth ``d`` the carrier must
    be exactly the generators (first, via the unit) followed by the
    operation nodes over the depth ``d - 1`` carrier.
    """
    from .base import monos
    from .terms import App, Var
    if not F.presentation.is_free:
        raise ValueError("decomposition check needs a presentation without rules")
    report = LawReport(f"free monad decomposition {F.name}")
    sig = F.signature
    objs = [X for X in small_objects(SET, max(sizes)) if X.size() in set(sizes)]
    for d in depths:
        Fd = F.with_depth(d)
        prev = F.with_depth(d - 1) if d > 0 else None
        for A in objs:
            carrier = Fd.obj(A)
            gens = [Var(a) for a in A]
            layer = []
            if prev is not None:
                below = prev.obj(A)["*"]
                for op in sig.ops.values():
                    for args in itertools.product(below, repeat=op.arity):
                        layer.append(App(op.name, args))
            elif d == 0:
                layer = []
            expected = gens + layer
            report.expect("carrier = generators + operation layer", (A, d),
                          sorted(map(repr, carrier["*"])), sorted(map(repr, expected)))
            report.expect("generators and layer disjoint", (A, d),
                          len(set(gens) & set(layer)), 0)
            unit = Fd.unit(A)
            report.expect("unit is the generator injection", (A, d),
                          [unit.apply(a) for a in A], gens)
            report.expect("unit injective", (A, d), unit.is_mono(), True)
        for X in objs:
            for Y in objs:
                for m in monos(X, Y):
                    Fm = Fd.mor(m)
                    _well_formed(report, "F m is a morphism", Fm)
                    report.expect("F preserves monos", (m, d), Fm.is_mono(), True)
    return report
