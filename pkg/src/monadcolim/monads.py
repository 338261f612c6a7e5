"""Monads on finite base categories, given elementwise, and monad morphisms."""

from __future__ import annotations

import itertools
import random
from typing import Callable, Hashable, Iterable, Iterator, Sequence

from .base import (
    GRAPH, SET, SORTED, STAR, BaseMor, BaseObj, FinSet, Inj, coproduct, empty_like, terminal_like,
)
from .errors import BudgetExhausted
from .functors import Endofunctor, nonempty_subsets


class _Overflow:
    """Result of an operation whose value exceeds a depth bound."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "OVERFLOW"

    def __reduce__(self):
        return (_Overflow, ())


OVERFLOW = _Overflow()


class _NotUnit:
    def __repr__(self):
        return "NOT_UNIT"


NOT_UNIT = _NotUnit()


class _Overflowed(Exception):
    pass


class FnMap:
    """A map given by a function ``fn(sort, atom)``, optionally with its codomain."""

    def __init__(self, fn: Callable, cod: BaseObj | None = None, dom: BaseObj | None = None):
        self.fn = fn
        self.cod = cod
        self.dom = dom

    def __call__(self, sort, atom):
        return self.fn(sort, atom)


class _Guard:
    def __init__(self, f):
        self.f = f
        self.cod = getattr(f, "cod", None)
        self.dom = getattr(f, "dom", None)

    def __call__(self, sort, atom):
        v = self.f(sort, atom)
        if v is OVERFLOW:
            raise _Overflowed
        return v


class Monad:
    """A monad presented by its action on elements.

    Subclasses implement ``_obj``, ``_unit``, ``_join`` and ``_fmap``.  The
    public ``unit``/``mult``/``mor`` assemble full morphism tables.  Elements
    whose value would exceed a truncation bound come back as ``OVERFLOW``.
    """

    name = "T"
    variants: tuple = (SET, SORTED, GRAPH)
    exact = True

    def __init__(self):
        self._cache: dict = {}

    # -- to implement ---------------------------------------------------
    def _obj(self, X: BaseObj) -> BaseObj:
        raise NotImplementedError

    def _unit(self, X: BaseObj, sort: str, x):
        raise NotImplementedError

    def _join(self, X: BaseObj, sort: str, tt):
        raise NotImplementedError

    def _fmap(self, f, sort: str, t):
        raise NotImplementedError

    def support(self, sort: str, t) -> Iterable[tuple[str, Hashable]]:
        """Generators an element depends on, as ``(sort, atom)`` pairs."""
        raise NotImplementedError

    def unit_preimage(self, sort: str, t, X: BaseObj | None = None):
        """``x`` with ``t = unit(x)``, or ``NOT_UNIT``."""
        return NOT_UNIT

    # -- public API -----------------------------------------------------
    def check_variant(self, X: BaseObj):
        if X.kind not in self.variants:
            raise ValueError(f"{self.name} is not defined on {X.kind} objects")

    def obj(self, X: BaseObj) -> BaseObj:
        hit = self._cache.get(X)
        if hit is None:
            self.check_variant(X)
            hit = self._obj(X)
            self._cache[X] = hit
        return hit

    def obj_within(self, X: BaseObj, ceiling: int) -> BaseObj:
        """``obj(X)``, refusing (``BudgetExhausted``) when it would exceed ``ceiling`` atoms."""
        hint = self.size_hint(X)
        if hint is not None and hint > ceiling:
            raise BudgetExhausted(f"{self.name}: value would have {hint} atoms", [hint])
        TX = self.obj(X)
        if TX.size() > ceiling:
            raise BudgetExhausted(f"{self.name}: value has {TX.size()} atoms", [TX.size()])
        return TX

    def unit_elem(self, X, sort, x):
        return self._unit(X, sort, x)

    def join_elem(self, X, sort, tt):
        if tt is OVERFLOW:
            return OVERFLOW
        try:
            return self._join(X, sort, tt)
        except _Overflowed:
            return OVERFLOW

    def fmap(self, f, sort, t):
        if t is OVERFLOW:
            return OVERFLOW
        try:
            return self._fmap(_Guard(f), sort, t)
        except _Overflowed:
            return OVERFLOW

    def bind(self, X, sort, t, k: Callable):
        """``join(T k (t))`` with ``k(sort, atom)`` landing in ``T X``."""
        return self.join_elem(X, sort, self.fmap(k, sort, t))

    def unit(self, X: BaseObj) -> BaseMor:
        TX = self.obj(X)
        return BaseMor(X, TX, {s: {x: self._unit(X, s, x) for x in X[s]} for s in X.sorts},
                       check=False)

    def mult(self, X: BaseObj) -> BaseMor:
        TX = self.obj(X)
        TTX = self.obj(TX)
        return BaseMor(TTX, TX, {s: {tt: self.join_elem(X, s, tt) for tt in TTX[s]}
                                 for s in TTX.sorts}, check=False)

    def mor(self, f: BaseMor) -> BaseMor:
        dom, cod = self.obj(f.dom), self.obj(f.cod)
        return BaseMor(dom, cod, {s: {t: self.fmap(f, s, t) for t in dom[s]} for s in dom.sorts},
                       check=False)

    def weight(self, sort, t, w: Callable) -> int:
        """Layer depth of an element given depths ``w(sort, atom)`` of its generators."""
        x = self.unit_preimage(sort, t)
        if x is not NOT_UNIT:
            return w(sort, x)
        return 1 + max((w(s, a) for s, a in self.support(sort, t)), default=0)

    def elements_upto(self, Y: BaseObj, depth: int | None = None) -> dict:
        """Elements of ``T Y`` used when enumerating algebra conditions."""
        TY = self.obj(Y)
        return {s: list(TY[s]) for s in TY.sorts}

    def size_hint(self, X: BaseObj) -> int | None:
        return None

    def random_element(self, Y: BaseObj, sort: str, rng: random.Random):
        return rng.choice(self.obj(Y)[sort])

    def em_algebras(self, B: BaseObj) -> Iterator["EMAlgebra"]:
        """Every Eilenberg-Moore algebra structure on ``B`` (exhaustive)."""
        TB = self.obj(B)
        fixed = {s: {self._unit(B, s, b): b for b in B[s]} for s in B.sorts}
        free = [(s, t) for s in TB.sorts for t in TB[s] if t not in fixed[s]]
        TTB = self.obj(TB)
        for values in itertools.product(*[B[s] for s, _ in free]):
            table = {s: dict(fixed[s]) for s in B.sorts}
            for (s, t), v in zip(free, values):
                table[s][t] = v
            try:
                a = BaseMor(TB, B, table)
            except ValueError:
                continue
            if all(table[s][self.join_elem(B, s, ttt)] == table[s][self.fmap(a, s, ttt)]
                   for s in TTB.sorts for ttt in TTB[s]):
                yield EMAlgebra(self, B, table)

    def as_functor(self) -> Endofunctor:
        return MonadFunctor(self)

    def __repr__(self):
        return self.name


class EMAlgebra:
    """An Eilenberg-Moore algebra ``(B, a: T B -> B)``; callable on elements."""

    def __init__(self, monad: Monad, carrier: BaseObj, table: dict | None = None,
                 fn: Callable | None = None, label: str = ""):
        self.monad = monad
        self.carrier = carrier
        self.table = table
        self.fn = fn
        self.label = label

    def __call__(self, sort, t):
        if self.table is not None:
            return self.table[sort][t]
        return self.fn(sort, t)

    def __repr__(self):
        if self.label:
            return self.label
        if self.table is not None:
            return "alg{" + ", ".join(f"{t!r}->{b!r}" for s in self.table
                                      for t, b in self.table[s].items()) + "}"
        return f"alg({self.monad.name} on {self.carrier!r})"


class MonadFunctor(Endofunctor):
    """The underlying endofunctor of a monad."""

    def __init__(self, monad: Monad):
        self.monad = monad
        self.name = monad.name

    def obj(self, X):
        return self.monad.obj(X)

    def fmap(self, f, sort, x):
        return self.monad.fmap(f, sort, x)

    def size_hint(self, X):
        return self.monad.size_hint(X)


# ---------------------------------------------------------------------------
# builtins


def _as_obj(E, like: str = SET) -> BaseObj:
    if isinstance(E, BaseObj):
        return E
    return FinSet(list(E))


class IdentityMonad(Monad):
    name = "Id"

    def _obj(self, X):
        return X

    def _unit(self, X, sort, x):
        return x

    def _join(self, X, sort, tt):
        return tt

    def _fmap(self, f, sort, t):
        return f(sort, t)

    def support(self, sort, t):
        return [(sort, t)]

    def unit_preimage(self, sort, t, X=None):
        return t

    def size_hint(self, X):
        return X.size()


class ExceptionMonad(Monad):
    """``X |-> X + E``; with ``zero=True`` the variant sending 0 to 0.

    Elements are ``Inj(0, x)`` (a value) and ``Inj(1, e)`` (an exception).
    """

    def __init__(self, E, zero: bool = False, name: str | None = None):
        super().__init__()
        self.E = _as_obj(E)
        self.zero = zero
        base = "Exception0" if zero else "Exception"
        self.name = name or f"{base}({', '.join(str(a) for _, a in self.E.atoms())})"

    def check_variant(self, X):
        if not X.same_variant(self.E):
            raise ValueError(f"{self.name} has exceptions of variant {self.E.kind}{self.E.sorts}, "
                             f"got {X.kind}{X.sorts}")

    def _obj(self, X):
        if self.zero and X.is_empty():
            return empty_like(X)
        return coproduct([X, self.E])[0]

    def _unit(self, X, sort, x):
        return Inj(0, x)

    def _join(self, X, sort, tt):
        return tt.atom if tt.index == 0 else tt

    def _fmap(self, f, sort, t):
        return Inj(0, f(sort, t.atom)) if t.index == 0 else t

    def support(self, sort, t):
        return [(sort, t.atom)] if t.index == 0 else []

    def unit_preimage(self, sort, t, X=None):
        return t.atom if isinstance(t, Inj) and t.index == 0 else NOT_UNIT

    def size_hint(self, X):
        return 0 if self.zero and X.is_empty() else X.size() + self.E.size()


class TerminalMonad(Monad):
    """Constantly the terminal object; with ``zero=True``, 0 is sent to 0."""

    def __init__(self, zero: bool = False):
        super().__init__()
        self.zero = zero
        self.name = "Terminal0" if zero else "Terminal"

    def _obj(self, X):
        if self.zero and X.is_empty():
            return empty_like(X)
        return terminal_like(X)

    def _unit(self, X, sort, x):
        return STAR

    def _join(self, X, sort, tt):
        return STAR

    def _fmap(self, f, sort, t):
        return STAR

    def support(self, sort, t):
        return []

    def unit_preimage(self, sort, t, X=None):
        if X is not None and len(X[sort]) == 1:
            return X[sort][0]
        return NOT_UNIT

    def size_hint(self, X):
        return 0 if self.zero and X.is_empty() else len(X.sorts)


def _product_obj(X: BaseObj, n: int) -> BaseObj:
    parts = {s: list(itertools.product(X[s], repeat=n)) for s in X.sorts}
    structure = {name: (src, tgt, {t: tuple(table[a] for a in t) for t in parts[src]})
                 for name, (src, tgt, table) in X.structure.items()}
    return BaseObj.build(X.kind, parts, structure)


class ReaderMonad(Monad):
    """``X |-> X^E`` for a finite nonempty label set ``E`` (tuples indexed by E)."""

    def __init__(self, E: Sequence, name: str | None = None):
        super().__init__()
        self.E = tuple(E)
        if not self.E:
            raise ValueError("the reader monad needs a nonempty environment")
        self.name = name or f"Reader({', '.join(map(str, self.E))})"

    def _obj(self, X):
        return _product_obj(X, len(self.E))

    def _unit(self, X, sort, x):
        return (x,) * len(self.E)

    def _join(self, X, sort, tt):
        return tuple(tt[i][i] for i in range(len(self.E)))

    def _fmap(self, f, sort, t):
        return tuple(f(sort, x) for x in t)

    def support(self, sort, t):
        return [(sort, x) for x in dict.fromkeys(t)]

    def unit_preimage(self, sort, t, X=None):
        return t[0] if isinstance(t, tuple) and t and all(x == t[0] for x in t) else NOT_UNIT

    def size_hint(self, X):
        return sum(len(X[s]) ** len(self.E) for s in X.sorts)


class WriterMonad(Monad):
    """``X |-> M x X`` for a finite monoid ``M`` given by its table.

    ``table[i][j]`` is the index of ``elements[i] * elements[j]``; the unit is
    ``elements[unit]``.  The table is not validated here, so a table that is
    not a monoid yields a structure that fails the law checks.
    """

    def __init__(self, elements: Sequence, table: Sequence[Sequence[int]], unit: int = 0,
                 name: str | None = None):
        super().__init__()
        self.elements = tuple(elements)
        self.table = tuple(tuple(row) for row in table)
        n = len(self.elements)
        if len(self.table) != n or any(len(r) != n for r in self.table):
            raise ValueError("monoid table must be square over the elements")
        self.e = self.elements[unit]
        self._pos = {m: i for i, m in enumerate(self.elements)}
        self.name = name or f"Writer({', '.join(map(str, self.elements))})"

    @classmethod
    def cyclic(cls, n: int) -> "WriterMonad":
        return cls(list(range(n)), [[(i + j) % n for j in range(n)] for i in range(n)],
                   name=f"Writer(Z{n})")

    def op(self, m, n):
        return self.elements[self.table[self._pos[m]][self._pos[n]]]

    def _obj(self, X):
        parts = {s: [(m, x) for m in self.elements for x in X[s]] for s in X.sorts}
        structure = {name: (src, tgt, {(m, a): (m, table[a]) for (m, a) in parts[src]})
                     for name, (src, tgt, table) in X.structure.items()}
        return BaseObj.build(X.kind, parts, structure)

    def _unit(self, X, sort, x):
        return (self.e, x)

    def _join(self, X, sort, tt):
        m, (n, x) = tt
        return (self.op(m, n), x)

    def _fmap(self, f, sort, t):
        return (t[0], f(sort, t[1]))

    def support(self, sort, t):
        return [(sort, t[1])]

    def unit_preimage(self, sort, t, X=None):
        return t[1] if isinstance(t, tuple) and len(t) == 2 and t[0] == self.e else NOT_UNIT

    def size_hint(self, X):
        return len(self.elements) * X.size()


class NonemptyPowersetMonad(Monad):
    """Nonempty finite subsets with union as multiplication (sets and sorted sets)."""

    name = "P+"
    variants = (SET, SORTED)

    def _obj(self, X):
        return BaseObj.build(X.kind, {s: nonempty_subsets(X[s]) for s in X.sorts})

    def _unit(self, X, sort, x):
        return frozenset([x])

    def _join(self, X, sort, tt):
        return frozenset().union(*tt)

    def _fmap(self, f, sort, t):
        return frozenset(f(sort, x) for x in t)

    def support(self, sort, t):
        return [(sort, x) for x in t]

    def unit_preimage(self, sort, t, X=None):
        return next(iter(t)) if isinstance(t, frozenset) and len(t) == 1 else NOT_UNIT

    def size_hint(self, X):
        total = 0
        for s in X.sorts:
            total += 2 ** len(X[s]) - 1
        return total

    def random_element(self, Y, sort, rng):
        atoms = Y[sort]
        while True:
            pick = frozenset(a for a in atoms if rng.random() < 0.5)
            if pick:
                return pick


def builtin_monad(kind: str, base: str = SET, **params) -> Monad:
    """Construct one of the builtin monads by name.

    ``kind`` is one of ``exception``, ``exception0``, ``terminal``,
    ``terminal0``, ``reader``, ``writer``, ``powerset``, ``identity``.
    """
    kind = kind.lower()
    if kind in ("exception", "exception0"):
        E = params.get("exceptions", params.get("E", ()))
        if not isinstance(E, BaseObj) and base == GRAPH:
            E = _graph_of_points(E)
        elif not isinstance(E, BaseObj) and base == SORTED:
            E = _sorted_exceptions(E, params.get("sorts", ("s", "t")))
        return ExceptionMonad(E, zero=kind.endswith("0"))
    if kind in ("terminal", "terminal0"):
        return TerminalMonad(zero=kind.endswith("0"))
    if kind == "reader":
        return ReaderMonad(params.get("environment", params.get("E", ("r0", "r1"))))
    if kind == "writer":
        if "table" in params:
            return WriterMonad(params["elements"], params["table"], params.get("unit", 0))
        return WriterMonad.cyclic(params.get("order", 2))
    if kind == "powerset":
        if base == GRAPH:
            raise ValueError("the nonempty powerset monad is only provided on (sorted) sets")
        return NonemptyPowersetMonad()
    if kind == "identity":
        return IdentityMonad()
    raise ValueError(f"unknown builtin monad {kind!r}")


def _sorted_exceptions(E, sorts) -> BaseObj:
    """A list puts the same exceptions in every sort; a mapping gives them per sort."""
    from .base import SortedFinSet
    if isinstance(E, dict):
        return SortedFinSet({s: list(E.get(s, ())) for s in sorts})
    return SortedFinSet({s: list(E) for s in sorts})


def _graph_of_points(E) -> BaseObj:
    from .base import FinGraph
    return FinGraph(list(E), [], {}, {})


# ---------------------------------------------------------------------------
# monad morphisms


class MonadMorphism:
    """A family ``f_X: S X -> T X`` given elementwise by ``fn(X, sort, s)``."""

    def __init__(self, source: Monad, target: Monad, fn: Callable, name: str = "f"):
        self.source = source
        self.target = target
        self.fn = fn
        self.name = name

    def elem(self, X, sort, s):
        if s is OVERFLOW:
            return OVERFLOW
        return self.fn(X, sort, s)

    def component(self, X: BaseObj) -> BaseMor:
        SX, TX = self.source.obj(X), self.target.obj(X)
        return BaseMor(SX, TX, {s: {a: self.elem(X, s, a) for a in SX[s]} for s in SX.sorts},
                       check=False)

    def then(self, other: "MonadMorphism") -> "MonadMorphism":
        return MonadMorphism(self.source, other.target,
                             lambda X, s, a: other.elem(X, s, self.elem(X, s, a)),
                             f"{other.name}.{self.name}")

    def __repr__(self):
        return f"{self.name}: {self.source.name} -> {self.target.name}"


def identity_morphism(T: Monad) -> MonadMorphism:
    return MonadMorphism(T, T, lambda X, s, t: t, f"id_{T.name}")


def exception_map(S: ExceptionMonad, T: ExceptionMonad, table: dict, name: str = "u") -> MonadMorphism:
    """The morphism ``X + E -> X + F`` induced by a map of exception objects."""
    for _, e in S.E.atoms():
        if e not in table:
            raise ValueError(f"exception map missing {e!r}")

    def fn(X, sort, t):
        if t.index == 0:
            return t
        return Inj(1, table[t.atom])

    return MonadMorphism(S, T, fn, name)
