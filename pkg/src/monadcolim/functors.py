"""Endofunctors on the finite base categories, free-algebra chains, initial algebras."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .base import (
    GRAPH, SET, SORTED, STAR, BaseMor, BaseObj, ChainColimit, Converged, Exhausted,
    FinSet, Inj, InjectionWitness, coproduct, coproduct_mor, initial, morphisms,
)
from .errors import BudgetExhausted, MonoViolation
from .report import LawReport

DEFAULT_BUDGET = 16
ATOM_CEILING = 10**6


class Endofunctor:
    """An endofunctor given elementwise.

    Subclasses implement ``obj`` and ``fmap(f, sort, x)``, where ``f`` is
    anything callable as ``f(sort, atom)``.  ``mor`` assembles the table.
    """

    name = "H"
    preserves_monos_claimed = True

    def obj(self, X: BaseObj) -> BaseObj:
        raise NotImplementedError

    def fmap(self, f, sort: str, x):
        raise NotImplementedError

    def mor(self, f: BaseMor) -> BaseMor:
        dom, cod = self.obj(f.dom), self.obj(f.cod)
        maps = {s: {x: self.fmap(f, s, x) for x in dom[s]} for s in dom.sorts}
        return BaseMor(dom, cod, maps, check=False)

    def size_hint(self, X: BaseObj) -> int | None:
        """Number of atoms of ``obj(X)`` if cheaply known, else None."""
        return None

    def __repr__(self):
        return self.name


class Constant(Endofunctor):
    def __init__(self, value: BaseObj, name: str | None = None):
        self.value = value
        self.name = name or f"const{value!r}"

    def obj(self, X):
        return self.value

    def fmap(self, f, sort, x):
        return x

    def size_hint(self, X):
        return self.value.size()


class Identity(Endofunctor):
    name = "Id"

    def obj(self, X):
        return X

    def fmap(self, f, sort, x):
        return f(sort, x)

    def size_hint(self, X):
        return X.size()


def nonempty_subsets(atoms: Sequence) -> list[frozenset]:
    return [frozenset(c) for r in range(1, len(atoms) + 1)
            for c in itertools.combinations(atoms, r)]


def all_subsets(atoms: Sequence) -> list[frozenset]:
    return [frozenset()] + nonempty_subsets(atoms)


class NonemptyPowersetFunctor(Endofunctor):
    """Nonempty subsets, sortwise; direct image on morphisms."""

    name = "P+"

    def obj(self, X):
        if X.kind == GRAPH:
            raise ValueError("the nonempty powerset functor is defined on (sorted) sets only")
        return BaseObj.build(X.kind, {s: nonempty_subsets(X[s]) for s in X.sorts})

    def fmap(self, f, sort, x):
        return frozenset(f(sort, a) for a in x)

    def size_hint(self, X):
        return sum(2 ** len(X[s]) - 1 for s in X.sorts)


class Polynomial(Endofunctor):
    """``X |-> sum_op X^arity`` on finite sets; elements are ``(op, args)``."""

    def __init__(self, arities: dict[str, int], name: str | None = None):
        self.arities = dict(arities)
        self.name = name or "Poly(" + ",".join(f"{o}/{n}" for o, n in self.arities.items()) + ")"

    def obj(self, X):
        if X.kind != SET:
            raise ValueError("polynomial functors act on finite sets")
        atoms = [(op, args) for op, n in self.arities.items()
                 for args in itertools.product(X[STAR], repeat=n)]
        return FinSet(atoms)

    def fmap(self, f, sort, x):
        op, args = x
        return (op, tuple(f(sort, a) for a in args))

    def size_hint(self, X):
        n = len(X[STAR])
        return sum(n ** k for k in self.arities.values())


class Sum(Endofunctor):
    """Pointwise coproduct of functors."""

    def __init__(self, parts: Sequence[Endofunctor]):
        self.parts = list(parts)
        self.name = " + ".join(p.name for p in self.parts)
        self.preserves_monos_claimed = all(p.preserves_monos_claimed for p in self.parts)

    def obj(self, X):
        return coproduct([p.obj(X) for p in self.parts], X.kind, X.sorts)[0]

    def fmap(self, f, sort, x):
        return type(x)(x.index, self.parts[x.index].fmap(f, sort, x.atom))

    def size_hint(self, X):
        hints = [p.size_hint(X) for p in self.parts]
        return None if None in hints else sum(hints)


class Pairing(Endofunctor):
    """Endofunctor of sorted sets acting on each sort separately.

    Sort ``target`` of the result is ``F(X restricted to sort source)`` for
    each ``(target, source, F)`` entry; ``F`` is a functor on finite sets.
    This models functors on a finite power of the set category, e.g.
    ``(V, W) |-> (F W, G V)``.
    """

    def __init__(self, entries: Sequence[tuple[str, str, Endofunctor]]):
        self.entries = list(entries)
        self.name = "<" + ", ".join(f"{F.name}({src})" for _, src, F in self.entries) + ">"

    def obj(self, X):
        parts = {}
        for tgt, src, F in self.entries:
            parts[tgt] = F.obj(FinSet(X[src]))[STAR]
        return BaseObj.build(SORTED, parts)

    def fmap(self, f, sort, x):
        for tgt, src, F in self.entries:
            if tgt == sort:
                return F.fmap(lambda _s, a, src=src: f(src, a), STAR, x)
        raise KeyError(sort)


class DropOne(Endofunctor):
    """Wraps a functor and silently loses one entry of every morphism table.

    Used as a negative control for the functor law checks.
    """

    def __init__(self, inner: Endofunctor):
        self.inner = inner
        self.name = f"broken({inner.name})"

    def obj(self, X):
        return self.inner.obj(X)

    def fmap(self, f, sort, x):
        return self.inner.fmap(f, sort, x)

    def mor(self, f):
        m = self.inner.mor(f)
        maps = {s: dict(t) for s, t in m.maps.items()}
        for s, t in maps.items():
            if t:
                t.pop(next(iter(t)))
                break
        return BaseMor(m.dom, m.cod, maps, check=False)


@dataclass(frozen=True)
class HAlgebra:
    carrier: BaseObj
    structure: BaseMor


# ---------------------------------------------------------------------------
# chains


@dataclass
class FreeAlgebraChain:
    """Stages ``W_0, W_1, ...`` and links of a free-algebra chain."""

    stages: list[BaseObj]
    links: list[InjectionWitness]
    status: Converged | Exhausted
    profile: list[dict] = field(default_factory=list)

    @property
    def converged(self) -> bool:
        return isinstance(self.status, Converged)

    def sizes(self, sort: str | None = None) -> list[int]:
        if sort is None:
            return [W.size() for W in self.stages]
        return [len(W[sort]) for W in self.stages]

    @property
    def carrier(self) -> BaseObj:
        if not self.converged:
            raise BudgetExhausted("chain did not converge", self.profile)
        return self.stages[self.status.level]

    def colimit(self) -> ChainColimit:
        if self.converged:
            return ChainColimit(self.carrier, self.status, self.sizes())
        return ChainColimit(self.stages[-1].with_truncation(True), self.status, self.sizes())


@dataclass(frozen=True)
class FreeAlgebra:
    """A converged free algebra ``W ~= X + H W`` with both directions."""

    carrier: BaseObj
    unit: BaseMor        # X -> W
    structure: BaseMor   # H W -> W
    decompose: BaseMor   # W -> X + H W (the bijective link)


def _run_chain(H: Endofunctor, first: BaseObj, step: Callable, first_link: Callable,
               next_link: Callable, budget: int, ceiling: int) -> FreeAlgebraChain:
    stages = [first]
    links: list[InjectionWitness] = []
    profile = [first.sizes()]
    for k in range(budget):
        hint = H.size_hint(stages[-1])
        if hint is not None and hint > ceiling:
            return FreeAlgebraChain(stages, links, Exhausted(k), profile
                                    + [{"atoms_hint": hint}])
        nxt = step(stages[-1])
        link = first_link(nxt) if k == 0 else next_link(links[-1].mor, nxt)
        w = InjectionWitness.of(link)
        if not w.mono_checked:
            raise MonoViolation(f"{H.name}: link {k} of the chain is not injective")
        stages.append(nxt)
        links.append(w)
        profile.append(nxt.sizes())
        if link.is_epi():
            return FreeAlgebraChain(stages, links, Converged(k), profile)
    return FreeAlgebraChain(stages, links, Exhausted(budget), profile)


def free_algebra_chain(H: Endofunctor, X: BaseObj, budget: int = DEFAULT_BUDGET,
                       ceiling: int = ATOM_CEILING) -> FreeAlgebraChain:
    """``W_0 = X``, ``W_{i+1} = X + H W_i`` with links ``inl`` then ``id + H w``.

    Stops at the first bijective link (``Converged(k)``, stage ``k`` is the
    free algebra) or after ``budget`` links / when the next stage would
    exceed ``ceiling`` atoms (``Exhausted``).
    """

    def step(W):
        return coproduct([X, H.obj(W)], X.kind, X.sorts)[0]

    def first_link(W1):
        return BaseMor(X, W1, {s: {a: Inj(0, a) for a in X[s]} for s in X.sorts}, check=False)

    def next_link(prev, nxt):
        return coproduct_mor([BaseMor.identity(X), H.mor(prev)])

    return _run_chain(H, X, step, first_link, next_link, budget, ceiling)


def free_algebra(H: Endofunctor, X: BaseObj, budget: int = DEFAULT_BUDGET) -> FreeAlgebra:
    """The free ``H``-algebra on ``X`` read off a converged chain."""
    chain = free_algebra_chain(H, X, budget)
    if not chain.converged:
        raise BudgetExhausted(f"free {H.name}-algebra on {X!r} not reached in {budget} steps",
                              chain.profile)
    k = chain.status.level
    W = chain.stages[k]
    link = chain.links[k].mor
    back = link.inverse()
    HW = H.obj(W)
    unit = BaseMor(X, W, {s: {a: back(s, Inj(0, a)) for a in X[s]} for s in X.sorts})
    structure = BaseMor(HW, W, {s: {h: back(s, Inj(1, h)) for h in HW[s]} for s in HW.sorts})
    return FreeAlgebra(W, unit, structure, link)


@dataclass(frozen=True)
class InitialAlgebraResult:
    carrier: BaseObj
    structure: BaseMor          # H carrier -> carrier
    structure_inverse: BaseMor  # carrier -> H carrier
    stage: int


def initial_chain(H: Endofunctor, zero: BaseObj | None = None, budget: int = DEFAULT_BUDGET,
                  ceiling: int = ATOM_CEILING) -> FreeAlgebraChain:
    """The chain ``0 -> H0 -> HH0 -> ...`` (free-algebra chain on 0, with ``0 + Z = Z``)."""
    zero = zero if zero is not None else initial()

    if not zero.is_empty():
        raise ValueError("the initial chain starts from an empty object")

    def first_link(W1):
        return BaseMor.from_initial(W1)

    def next_link(prev, nxt):
        return H.mor(prev)

    return _run_chain(H, zero, H.obj, first_link, next_link, budget, ceiling)


def initial_algebra(H: Endofunctor, zero: BaseObj | None = None,
                    budget: int = DEFAULT_BUDGET) -> InitialAlgebraResult:
    """Initial algebra via the chain from 0, with Lambek invertibility verified."""
    chain = initial_chain(H, zero, budget)
    if not chain.converged:
        raise BudgetExhausted(f"no initial {H.name}-algebra within {budget} steps",
                              chain.profile)
    k = chain.status.level
    carrier = chain.stages[k]
    inverse = chain.links[k].mor           # carrier -> H carrier
    structure = inverse.inverse()
    assert inverse.then(structure) == BaseMor.identity(carrier)
    assert structure.then(inverse) == BaseMor.identity(structure.dom)
    return InitialAlgebraResult(carrier, structure, inverse, k)


@dataclass(frozen=True)
class Prefixpoint:
    holds: bool
    witness: BaseMor | None = None

    def __bool__(self):
        return self.holds


def is_prefixpoint(H: Endofunctor, Z: BaseObj, ceiling: int = ATOM_CEILING) -> Prefixpoint:
    """Does a mono ``H Z -> Z`` exist?  Returns the witness when it does."""
    hint = H.size_hint(Z)
    if hint is not None and (hint > ceiling or (Z.kind == SET and hint > Z.size())):
        return Prefixpoint(False)
    HZ = H.obj(Z)
    if Z.kind != GRAPH:
        if any(len(HZ[s]) > len(Z[s]) for s in Z.sorts):
            return Prefixpoint(False)
        maps = {s: dict(zip(HZ[s], Z[s])) for s in Z.sorts}
        return Prefixpoint(True, BaseMor(HZ, Z, maps))
    for m in morphisms(HZ, Z):
        if m.is_mono():
            return Prefixpoint(True, m)
    return Prefixpoint(False)


def functor_law_check(H: Endofunctor, samples: Sequence[BaseObj],
                      max_compositions: int = 20000) -> LawReport:
    """Identity, composition and (if claimed) mono preservation on all sample maps."""
    report = LawReport(f"functor {H.name}")
    maps = {(i, j): list(morphisms(X, Y)) for i, X in enumerate(samples)
            for j, Y in enumerate(samples)}
    images = {}

    def image(key, n, f):
        if (key, n) not in images:
            m = H.mor(f)
            try:
                BaseMor(m.dom, m.cod, m.maps)
            except ValueError as exc:
                report.fail("well-formed", f, str(exc))
            images[(key, n)] = m
        return images[(key, n)]

    for i, X in enumerate(samples):
        report.expect("identity", X, H.mor(BaseMor.identity(X)).maps,
                      BaseMor.identity(H.obj(X)).maps)
    for key, fs in maps.items():
        for n, f in enumerate(fs):
            m = image(key, n, f)
            report.checked += 1
            if H.preserves_monos_claimed and f.is_mono() and not m.is_mono():
                report.fail("mono preservation", f, f"{H.name} f is not injective")
    done = 0
    for (i, j), fs in maps.items():
        for k in range(len(samples)):
            for n, f in enumerate(fs):
                for p, g in enumerate(maps[(j, k)]):
                    if done >= max_compositions:
                        report.notes.append(f"composition checks capped at {max_compositions}")
                        report.exhaustive = False
                        return report
                    done += 1
                    lhs = H.mor(f.then(g)).maps
                    rhs = image((i, j), n, f).maps
                    gm = image((j, k), p, g).maps
                    composed = {s: {a: gm[s].get(b) for a, b in t.items()} for s, t in rhs.items()}
                    report.expect("composition", (f, g), lhs, composed)
    return report
