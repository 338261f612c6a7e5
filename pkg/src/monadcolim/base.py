"""Finite base categories: finite sets, finite many-sorted sets, finite graphs.

Every object is stored uniformly as a many-sorted carrier plus (for graphs)
the structure maps ``src, tgt: E -> V``.  Morphisms are per-sort function
tables.  The helpers here (coproducts, quotients, image factorizations,
colimits of finite chains of monos) are what the monad constructions are
built from.
"""

from __future__ import annotations

import itertools
import string
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Iterator, Mapping, Sequence

from scipy.cluster.hierarchy import DisjointSet

from .errors import MixedVariants, NonMonoInChain

SET = "set"
SORTED = "sorted"
GRAPH = "graph"
STAR = "*"

Atom = Hashable


@dataclass(frozen=True, order=False)
class Inj:
    """Coproduct tag: ``atom`` seen inside summand number ``index``."""

    index: int
    atom: Atom

    def __repr__(self):
        return f"{self.index}:{self.atom!r}"


class BaseObj:
    """A finite object of one of the three base-category variants.

    ``parts`` maps each sort to an ordered, duplicate-free tuple of atoms.
    ``structure`` maps a structure-map name to ``(src_sort, tgt_sort, table)``.
    Equality ignores atom order and the ``truncated`` marker.
    """

    __slots__ = ("kind", "parts", "structure", "truncated", "_index", "_key")

    def __init__(self, kind: str, parts: Mapping[str, Sequence[Atom]],
                 structure: Mapping[str, tuple] | None = None,
                 truncated: bool = False):
        self.kind = kind
        self.parts = {s: tuple(atoms) for s, atoms in parts.items()}
        self.structure = dict(structure or {})
        self.truncated = truncated
        self._index = {}
        for s, atoms in self.parts.items():
            idx = {a: i for i, a in enumerate(atoms)}
            if len(idx) != len(atoms):
                raise ValueError(f"duplicate atoms in sort {s!r}")
            self._index[s] = idx
        for name, (src, tgt, table) in self.structure.items():
            if set(table) != set(self._index[src]):
                raise ValueError(f"structure map {name!r} is not total")
            for v in table.values():
                if v not in self._index[tgt]:
                    raise ValueError(f"structure map {name!r} leaves {tgt!r}")
        self._key = (
            kind,
            tuple((s, frozenset(a)) for s, a in self.parts.items()),
            tuple(sorted((n, frozenset(t.items())) for n, (_, _, t) in self.structure.items())),
        )

    @staticmethod
    def build(kind: str, parts, structure=None, truncated=False) -> "BaseObj":
        """Construct an object of the given variant from raw parts."""
        cls = _KIND_CLASS[kind]
        obj = cls.__new__(cls)
        BaseObj.__init__(obj, kind, parts, structure, truncated)
        return obj

    @property
    def sorts(self) -> tuple[str, ...]:
        return tuple(self.parts)

    def __getitem__(self, sort: str) -> tuple:
        return self.parts[sort]

    def has(self, sort: str, atom: Atom) -> bool:
        return atom in self._index[sort]

    def index(self, sort: str, atom: Atom) -> int:
        return self._index[sort][atom]

    def atoms(self) -> Iterator[tuple[str, Atom]]:
        for s, atoms in self.parts.items():
            for a in atoms:
                yield s, a

    def size(self) -> int:
        return sum(len(a) for a in self.parts.values())

    def sizes(self) -> dict[str, int]:
        return {s: len(a) for s, a in self.parts.items()}

    def is_empty(self) -> bool:
        return self.size() == 0

    def same_variant(self, other: "BaseObj") -> bool:
        return self.kind == other.kind and self.sorts == other.sorts

    def struct(self, name: str, atom: Atom) -> Atom:
        return self.structure[name][2][atom]

    def with_truncation(self, truncated: bool) -> "BaseObj":
        return BaseObj.build(self.kind, self.parts, self.structure, truncated)

    def __eq__(self, other):
        return isinstance(other, BaseObj) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        mark = ", truncated" if self.truncated else ""
        if self.kind == SET:
            return "{" + ", ".join(map(repr, self.parts[STAR])) + "}" + mark
        if self.kind == GRAPH:
            src, tgt = self.structure["src"][2], self.structure["tgt"][2]
            edges = ", ".join(f"{e!r}:{src[e]!r}->{tgt[e]!r}" for e in self.parts["E"])
            return f"Graph(V={list(self.parts['V'])!r}, E=[{edges}]{mark})"
        inner = "; ".join(f"{s}: {list(a)!r}" for s, a in self.parts.items())
        return f"Sorted({inner}{mark})"


class FinSet(BaseObj):
    """A finite set (single sort ``'*'``)."""

    def __init__(self, atoms: Iterable[Atom] = (), truncated: bool = False):
        super().__init__(SET, {STAR: tuple(atoms)}, None, truncated)

    @property
    def elements(self) -> tuple:
        return self.parts[STAR]

    def __len__(self):
        return len(self.parts[STAR])

    def __iter__(self):
        return iter(self.parts[STAR])


class SortedFinSet(BaseObj):
    """A finite many-sorted set over a finite sort list."""

    def __init__(self, parts: Mapping[str, Iterable[Atom]], truncated: bool = False):
        super().__init__(SORTED, {s: tuple(a) for s, a in parts.items()}, None, truncated)


class FinGraph(BaseObj):
    """A finite directed multigraph with total source and target maps."""

    def __init__(self, vertices: Iterable[Atom] = (), edges: Iterable[Atom] = (),
                 source: Mapping | None = None, target: Mapping | None = None,
                 truncated: bool = False):
        source = dict(source or {})
        target = dict(target or {})
        super().__init__(GRAPH, {"V": tuple(vertices), "E": tuple(edges)},
                         {"src": ("E", "V", source), "tgt": ("E", "V", target)},
                         truncated)

    @property
    def vertices(self) -> tuple:
        return self.parts["V"]

    @property
    def edges(self) -> tuple:
        return self.parts["E"]

    def source(self, e):
        return self.structure["src"][2][e]

    def target(self, e):
        return self.structure["tgt"][2][e]


_KIND_CLASS = {SET: FinSet, SORTED: SortedFinSet, GRAPH: FinGraph}


def empty_like(obj: BaseObj) -> BaseObj:
    """The initial object of ``obj``'s variant (same sorts, no atoms)."""
    parts = {s: () for s in obj.sorts}
    structure = {n: (src, tgt, {}) for n, (src, tgt, _) in obj.structure.items()}
    return BaseObj.build(obj.kind, parts, structure)


def initial(kind: str = SET, sorts: Sequence[str] | None = None) -> BaseObj:
    if kind == SET:
        return FinSet()
    if kind == GRAPH:
        return FinGraph()
    return SortedFinSet({s: () for s in (sorts or ())})


def terminal_like(obj: BaseObj, atom: Atom = STAR) -> BaseObj:
    """The terminal object of ``obj``'s variant: one atom per sort."""
    parts = {s: (atom,) for s in obj.sorts}
    structure = {n: (src, tgt, {atom: atom}) for n, (src, tgt, _) in obj.structure.items()}
    return BaseObj.build(obj.kind, parts, structure)


class BaseMor:
    """A morphism of finite objects given by per-sort tables.

    With ``check=True`` the table is validated: total on ``dom``, landing in
    ``cod`` and commuting with the structure maps.
    """

    __slots__ = ("dom", "cod", "maps")

    def __init__(self, dom: BaseObj, cod: BaseObj, maps: Mapping[str, Mapping], check: bool = True):
        self.dom = dom
        self.cod = cod
        self.maps = {s: dict(maps.get(s, {})) for s in dom.sorts}
        if check:
            self._check()

    def _check(self):
        if not self.dom.same_variant(self.cod):
            raise MixedVariants(f"{self.dom.kind} -> {self.cod.kind}")
        for s in self.dom.sorts:
            table = self.maps[s]
            if len(table) != len(self.dom[s]) or any(not self.dom.has(s, a) for a in table):
                raise ValueError(f"morphism not total on sort {s!r}")
            for a, b in table.items():
                if not self.cod.has(s, b):
                    raise ValueError(f"image {b!r} of {a!r} not in codomain sort {s!r}")
        for name, (src, tgt, table) in self.dom.structure.items():
            ctable = self.cod.structure[name][2]
            for a, b in table.items():
                if self.maps[tgt][b] != ctable[self.maps[src][a]]:
                    raise ValueError(f"morphism does not commute with {name!r} at {a!r}")

    @classmethod
    def of_set(cls, dom: BaseObj, cod: BaseObj, mapping: Mapping, check: bool = True) -> "BaseMor":
        return cls(dom, cod, {STAR: mapping}, check)

    @classmethod
    def from_fn(cls, dom: BaseObj, cod: BaseObj, fn: Callable[[str, Atom], Atom],
                check: bool = True) -> "BaseMor":
        return cls(dom, cod, {s: {a: fn(s, a) for a in dom[s]} for s in dom.sorts}, check)

    @classmethod
    def identity(cls, obj: BaseObj) -> "BaseMor":
        return cls(obj, obj, {s: {a: a for a in obj[s]} for s in obj.sorts}, check=False)

    @classmethod
    def inclusion(cls, sub: BaseObj, sup: BaseObj) -> "BaseMor":
        return cls(sub, sup, {s: {a: a for a in sub[s]} for s in sub.sorts})

    @classmethod
    def from_initial(cls, cod: BaseObj) -> "BaseMor":
        return cls(empty_like(cod), cod, {})

    def __call__(self, sort: str, atom: Atom) -> Atom:
        return self.maps[sort][atom]

    def apply(self, atom: Atom) -> Atom:
        """Single-sorted shorthand."""
        return self.maps[STAR][atom]

    def then(self, other: "BaseMor") -> "BaseMor":
        """Diagrammatic composite: first ``self``, then ``other``."""
        if self.cod != other.dom:
            raise ValueError("morphisms are not composable")
        maps = {s: {a: other.maps[s][b] for a, b in self.maps[s].items()} for s in self.dom.sorts}
        return BaseMor(self.dom, other.cod, maps, check=False)

    def is_mono(self) -> bool:
        return all(len(set(t.values())) == len(t) for t in self.maps.values())

    def is_epi(self) -> bool:
        return all(set(self.maps[s].values()) == set(self.cod[s]) for s in self.dom.sorts)

    def is_iso(self) -> bool:
        return self.is_mono() and self.is_epi()

    def is_identity_on_atoms(self) -> bool:
        return all(a == b for t in self.maps.values() for a, b in t.items())

    def inverse(self) -> "BaseMor":
        if not self.is_iso():
            raise ValueError("morphism is not invertible")
        maps = {s: {b: a for a, b in t.items()} for s, t in self.maps.items()}
        return BaseMor(self.cod, self.dom, maps, check=False)

    def image(self, sort: str) -> set:
        return set(self.maps[sort].values())

    def __eq__(self, other):
        return (isinstance(other, BaseMor) and self.dom == other.dom
                and self.cod == other.cod and self.maps == other.maps)

    def __hash__(self):
        return hash((self.dom, self.cod))

    def __repr__(self):
        inner = "; ".join(
            f"{s}: " + ", ".join(f"{a!r}->{b!r}" for a, b in t.items()) for s, t in self.maps.items())
        return f"BaseMor({inner})"


@dataclass(frozen=True)
class InjectionWitness:
    """A morphism together with the outcome of its injectivity check."""

    mor: BaseMor
    mono_checked: bool

    @classmethod
    def of(cls, mor: BaseMor) -> "InjectionWitness":
        return cls(mor, mor.is_mono())


def _check_variants(parts: Sequence[BaseObj]):
    for p in parts[1:]:
        if not p.same_variant(parts[0]):
            raise MixedVariants(f"cannot combine {parts[0].kind}{parts[0].sorts} "
                                f"with {p.kind}{p.sorts}")


def coproduct(parts: Sequence[BaseObj], kind: str = SET,
              sorts: Sequence[str] | None = None) -> tuple[BaseObj, list[InjectionWitness]]:
    """Disjoint union with atoms tagged ``Inj(i, atom)``.

    ``kind``/``sorts`` only matter for the empty coproduct, which is the
    initial object of that variant.
    """
    parts = list(parts)
    if not parts:
        return initial(kind, sorts), []
    _check_variants(parts)
    first = parts[0]
    carrier = {s: [Inj(i, a) for i, p in enumerate(parts) for a in p[s]] for s in first.sorts}
    structure = {
        name: (src, tgt, {Inj(i, a): Inj(i, p.structure[name][2][a])
                          for i, p in enumerate(parts) for a in p[src]})
        for name, (src, tgt, _) in first.structure.items()
    }
    total = BaseObj.build(first.kind, carrier, structure,
                          truncated=any(p.truncated for p in parts))
    injections = []
    for i, p in enumerate(parts):
        mor = BaseMor(p, total, {s: {a: Inj(i, a) for a in p[s]} for s in p.sorts}, check=False)
        injections.append(InjectionWitness.of(mor))
    assert all(w.mono_checked for w in injections)
    return total, injections


def coproduct_mor(mors: Sequence[BaseMor]) -> BaseMor:
    """``f_0 + f_1 + ...`` between the tagged coproducts of domains and codomains."""
    dom, _ = coproduct([f.dom for f in mors])
    cod, _ = coproduct([f.cod for f in mors])
    maps = {s: {Inj(i, a): Inj(i, b) for i, f in enumerate(mors) for a, b in f.maps[s].items()}
            for s in dom.sorts}
    return BaseMor(dom, cod, maps, check=False)


def copair(mors: Sequence[BaseMor], cod: BaseObj) -> BaseMor:
    """``[f_0, f_1, ...]`` out of the tagged coproduct of the domains."""
    dom, _ = coproduct([f.dom for f in mors], cod.kind, cod.sorts)
    maps = {s: {Inj(i, a): b for i, f in enumerate(mors) for a, b in f.maps[s].items()}
            for s in dom.sorts}
    return BaseMor(dom, cod, maps)


class Partition:
    """Per-sort union-find over the atoms of one object."""

    def __init__(self, obj: BaseObj):
        self.obj = obj
        self.sets = {s: DisjointSet(obj[s]) for s in obj.sorts}

    def merge(self, sort, a, b) -> bool:
        ds = self.sets[sort]
        if ds.connected(a, b):
            return False
        ds.merge(a, b)
        return True

    def close_under_structure(self):
        changed = True
        while changed:
            changed = False
            for name, (src, tgt, table) in self.obj.structure.items():
                for block in self.sets[src].subsets():
                    images = [table[a] for a in block]
                    for b in images[1:]:
                        changed |= self.merge(tgt, images[0], b)

    def representatives(self) -> dict[str, dict]:
        """Map each atom to the least (first in carrier order) atom of its class."""
        reps = {}
        for s in self.obj.sorts:
            best = {}
            rep = {}
            for a in self.obj[s]:
                root = self.sets[s][a]
                best.setdefault(root, a)
                rep[a] = best[root]
            reps[s] = rep
        return reps


def quotient(obj: BaseObj, pairs: Mapping[str, Iterable[tuple]]) -> tuple[BaseObj, BaseMor]:
    """Quotient by the least congruence containing ``pairs``.

    For graphs the equivalence is closed under ``src`` and ``tgt`` so the
    quotient is again a graph.  Each class is named by its first atom in
    carrier order; returns the quotient object and the (surjective) map.
    """
    part = Partition(obj)
    for s, ps in pairs.items():
        for a, b in ps:
            part.merge(s, a, b)
    part.close_under_structure()
    reps = part.representatives()
    carrier = {s: [a for a in obj[s] if reps[s][a] == a] for s in obj.sorts}
    structure = {name: (src, tgt, {a: reps[tgt][table[a]] for a in carrier[src]})
                 for name, (src, tgt, table) in obj.structure.items()}
    q = BaseObj.build(obj.kind, carrier, structure)
    return q, BaseMor(obj, q, reps)


def coequalize_morphisms(f: BaseMor, g: BaseMor) -> tuple[BaseObj, BaseMor]:
    """Coequalizer of a parallel pair: the quotient merging ``f(x)`` with ``g(x)``."""
    if f.dom != g.dom or f.cod != g.cod:
        raise ValueError("coequalize_morphisms needs a parallel pair")
    pairs = {s: [(f.maps[s][x], g.maps[s][x]) for x in f.dom[s]] for s in f.dom.sorts}
    return quotient(f.cod, pairs)


class NoSection(Exception):
    """The surjection has no structure-preserving section."""


@dataclass(frozen=True)
class Factorization:
    """``f = m . e`` with ``e`` surjective and ``m`` injective."""

    e: BaseMor
    m: InjectionWitness

    def section(self) -> BaseMor:
        """A section of ``e`` choosing the least preimage of every atom.

        Always exists for (many-sorted) sets; for graphs it exists only if the
        chosen preimages happen to form a graph morphism.
        """
        maps = {}
        for s in self.e.dom.sorts:
            chosen = {}
            for a in self.e.dom[s]:
                chosen.setdefault(self.e.maps[s][a], a)
            maps[s] = chosen
        try:
            return BaseMor(self.e.cod, self.e.dom, maps)
        except ValueError as exc:
            raise NoSection(str(exc)) from exc


def factorize(f: BaseMor) -> Factorization:
    """Image factorization of a morphism."""
    carrier = {s: [b for b in f.cod[s] if b in f.image(s)] for s in f.cod.sorts}
    structure = {name: (src, tgt, {a: table[a] for a in carrier[src]})
                 for name, (src, tgt, table) in f.cod.structure.items()}
    img = BaseObj.build(f.cod.kind, carrier, structure)
    e = BaseMor(f.dom, img, f.maps, check=False)
    m = InjectionWitness.of(BaseMor.inclusion(img, f.cod))
    return Factorization(e, m)


@dataclass(frozen=True)
class Converged:
    """Chain status: the link out of stage ``level`` is bijective."""

    level: int


@dataclass(frozen=True)
class Exhausted:
    """Chain status: no bijective link within ``steps`` links."""

    steps: int


@dataclass
class ChainColimit:
    obj: BaseObj
    status: Converged | Exhausted
    stage_sizes: list[int] = field(default_factory=list)

    @property
    def converged(self) -> bool:
        return isinstance(self.status, Converged)


def chain_colimit(chain: Sequence[InjectionWitness], budget: int) -> ChainColimit:
    """Colimit of a finite chain of injections ``W_0 -> W_1 -> ...``.

    Only the first ``budget`` links are inspected.  The result is stage ``k``
    for the first bijective link ``k``; otherwise the last inspected stage,
    flagged as truncated.  The empty chain has the initial object as colimit.
    """
    if not chain:
        return ChainColimit(initial(), Converged(0), [0])
    for i, w in enumerate(chain):
        if not w.mor.is_mono():
            raise NonMonoInChain(f"link {i} is not injective")
        if i and w.mor.dom != chain[i - 1].mor.cod:
            raise ValueError(f"links {i - 1} and {i} are not composable")
    sizes = [chain[0].mor.dom.size()]
    for k, w in enumerate(chain[:budget]):
        if w.mor.is_epi():
            return ChainColimit(w.mor.dom, Converged(k), sizes)
        sizes.append(w.mor.cod.size())
    steps = min(budget, len(chain))
    last = chain[steps - 1].mor.cod
    return ChainColimit(last.with_truncation(True), Exhausted(steps), sizes)


# ---------------------------------------------------------------------------
# small objects and exhaustive morphism enumeration

def atom_names(n: int, prefix: str = "") -> list[str]:
    letters = string.ascii_lowercase
    if not prefix and n <= len(letters):
        return list(letters[:n])
    return [f"{prefix or 'a'}{i}" for i in range(n)]


def small_sets(max_size: int) -> list[FinSet]:
    return [FinSet(atom_names(n)) for n in range(max_size + 1)]


def small_sorted_sets(sorts: Sequence[str], max_size: int) -> list[SortedFinSet]:
    out = []
    for counts in itertools.product(range(max_size + 1), repeat=len(sorts)):
        if sum(counts) <= max_size:
            out.append(SortedFinSet({s: [f"{s}{i}" for i in range(c)] for s, c in zip(sorts, counts)}))
    return out


def small_graphs(max_size: int, max_loops: int | None = None) -> list[FinGraph]:
    """All graphs with ``|V| + |E| <= max_size`` up to isomorphism."""
    out = []
    seen = set()
    for nv in range(max_size + 1):
        for ne in range(max_size - nv + 1):
            if ne and not nv:
                continue
            pairs = list(itertools.product(range(nv), repeat=2))
            for edges in itertools.combinations_with_replacement(pairs, ne):
                canon = min(tuple(sorted((p[s], p[t]) for s, t in edges))
                            for p in itertools.permutations(range(nv)))
                if (nv, canon) in seen:
                    continue
                seen.add((nv, canon))
                if max_loops is not None and sum(s == t for s, t in canon) > max_loops:
                    continue
                vs = [f"v{i}" for i in range(nv)]
                es = [f"e{i}" for i in range(ne)]
                out.append(FinGraph(vs, es, {e: vs[s] for e, (s, _) in zip(es, canon)},
                                    {e: vs[t] for e, (_, t) in zip(es, canon)}))
    return out


def small_objects(kind: str, max_size: int, sorts: Sequence[str] = ("s", "t")) -> list[BaseObj]:
    if kind == SET:
        return small_sets(max_size)
    if kind == SORTED:
        return small_sorted_sets(sorts, max_size)
    if kind == GRAPH:
        return small_graphs(max_size)
    raise ValueError(f"unknown variant {kind!r}")


def morphisms(dom: BaseObj, cod: BaseObj) -> Iterator[BaseMor]:
    """Every morphism ``dom -> cod``, enumerated exhaustively."""
    if not dom.same_variant(cod):
        raise MixedVariants("morphisms between different variants")
    if dom.kind != GRAPH:
        sorts = dom.sorts
        choices = [itertools.product(cod[s], repeat=len(dom[s])) for s in sorts]
        for combo in itertools.product(*[list(c) for c in choices]):
            maps = {s: dict(zip(dom[s], images)) for s, images in zip(sorts, combo)}
            yield BaseMor(dom, cod, maps, check=False)
        return
    src, tgt = dom.structure["src"][2], dom.structure["tgt"][2]
    csrc, ctgt = cod.structure["src"][2], cod.structure["tgt"][2]
    by_ends = {}
    for e in cod["E"]:
        by_ends.setdefault((csrc[e], ctgt[e]), []).append(e)
    for vimg in itertools.product(cod["V"], repeat=len(dom["V"])):
        vmap = dict(zip(dom["V"], vimg))
        cands = [by_ends.get((vmap[src[e]], vmap[tgt[e]]), []) for e in dom["E"]]
        for eimg in itertools.product(*cands):
            yield BaseMor(dom, cod, {"V": vmap, "E": dict(zip(dom["E"], eimg))}, check=False)


def monos(dom: BaseObj, cod: BaseObj) -> Iterator[BaseMor]:
    return (f for f in morphisms(dom, cod) if f.is_mono())
