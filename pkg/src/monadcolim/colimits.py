"""Coequalizers, cointersections and weakly-terminal colimits of monads.

Each construction is a reflection of the free algebra ``(T A, mu_A)`` into
a full subcategory of ``T``-algebras cut out by a condition on the
structure map.  On (sorted) sets the reflection is a quotient of ``T A``;
it is found by alternating congruence closure with a re-test of the
condition until nothing changes.  When ``T`` does not send the quotient map
onto ``T Q`` (possible for graphs) the carrier is enlarged to ``T Q`` and
the process repeats; this is where divergence shows up.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .base import BaseMor, BaseObj, Partition, morphisms, quotient, small_objects
from .errors import BudgetExhausted, NotWeaklyTerminal
from .functors import DEFAULT_BUDGET
from .monads import OVERFLOW, FnMap, IdentityMonad, Monad, MonadMorphism
from .report import LawReport
from .universal import Constraint, solve_maps

# A condition takes the current quotient ``Q`` and its algebra structure
# ``b(sort, w)`` (``w`` in ``T Q``) and returns atom pairs ``(sort, q1, q2)``
# of ``Q`` that must be identified.
Condition = Callable[[BaseObj, Callable], list]

# Carriers are quotients of T A, so anything much larger than the inputs is
# a sign of divergence rather than a useful result.
REFLECTION_CEILING = 20_000


@dataclass
class Reflection:
    """The reflection of ``(T A, mu_A)`` computed at one object ``A``."""

    A: BaseObj
    carrier: BaseObj                 # the quotient Q
    proj: dict                       # sort -> {t in T A: q}
    section: dict                    # sort -> {q: least t in T A over q}
    structure: dict                  # sort -> {w in T Q: q}
    rounds: int = 0                  # condition rounds that produced merges
    closure_passes: int = 0
    enlargements: int = 0
    profile: list = field(default_factory=list)

    def b(self, sort, w):
        return self.structure[sort].get(w, OVERFLOW)


def _merge_all(part: Partition, pairs) -> int:
    n = 0
    for s, x, y in pairs:
        if x is OVERFLOW or y is OVERFLOW:
            continue
        n += part.merge(s, x, y)
    return n


def reflect(T: Monad, A: BaseObj, condition: Condition, budget: int = DEFAULT_BUDGET,
            ceiling: int = REFLECTION_CEILING) -> Reflection:
    """Least quotient algebra of ``(T A, mu)`` satisfying ``condition``.

    Raises ``BudgetExhausted`` (with the carrier-size profile) when the
    rounds exceed ``budget``, the carrier exceeds ``ceiling`` or ``T`` itself
    gives up on an enlarged carrier.
    """
    profile: list = []
    try:
        return _reflect(T, A, condition, budget, ceiling, profile)
    except BudgetExhausted as exc:
        if getattr(exc, "origin", None) == "reflect":
            raise
        err = BudgetExhausted(f"reflection at {A!r} stopped: {exc}", profile)
        err.origin = "reflect"
        raise err from exc


def _exhausted(message, profile):
    err = BudgetExhausted(message, profile)
    err.origin = "reflect"
    return err


def _reflect(T, A, condition, budget, ceiling, profile) -> Reflection:
    B = A
    C = T.obj_within(A, ceiling)
    hom = {s: {t: t for t in C[s]} for s in C.sorts}      # T A -> C, an algebra map
    part = Partition(C)
    rounds = passes = enlargements = 0
    profile.append(C.size())
    while True:
        if rounds + enlargements > budget:
            raise _exhausted(f"reflection at {A!r} did not stabilise within {budget} rounds",
                             profile)
        # congruence closure: u, u' in T C with T pi(u) = T pi(u') force mu(u) ~ mu(u')
        TC = T.obj_within(C, ceiling * 4)
        while True:
            passes += 1
            part.close_under_structure()
            Q, pi = quotient(C, {s: [(a, part.sets[s][a]) for a in C[s]] for s in C.sorts})
            groups: dict = {}
            merged = 0
            for s in TC.sorts:
                for u in TC[s]:
                    key = T.fmap(pi, s, u)
                    m = T.join_elem(B, s, u)
                    if key is OVERFLOW or m is OVERFLOW:
                        continue
                    prev = groups.setdefault((s, key), m)
                    merged += part.merge(s, prev, m)
            if not merged:
                break
        b = {s: {} for s in Q.sorts}
        for (s, w), m in groups.items():
            b[s][w] = pi(s, m)
        TQ = T.obj_within(Q, ceiling)
        missing = [(s, w) for s in TQ.sorts for w in TQ[s] if w not in b[s]]
        if missing:
            # T pi is not onto T Q: continue in the free algebra on Q
            enlargements += 1
            g = FnMap(lambda s, x: pi(s, T.unit_elem(B, s, x)), Q, B)
            C2 = TQ
            if C2.size() > ceiling:
                profile.append(C2.size())
                raise _exhausted(f"reflection at {A!r}: carrier exceeds {ceiling} atoms", profile)
            part2 = Partition(C2)
            for s in C.sorts:
                for c in C[s]:
                    lhs, rhs = T.unit_elem(Q, s, pi(s, c)), T.fmap(g, s, c)
                    if rhs is not OVERFLOW:
                        part2.merge(s, lhs, rhs)
            hom = {s: {t: T.fmap(g, s, c) for t, c in hom[s].items()} for s in hom}
            B, C, part = Q, C2, part2
            profile.append(C.size())
            continue
        pairs = condition(Q, lambda s, w: b[s].get(w, OVERFLOW))
        if _merge_all(part, pairs) == 0:
            break
        rounds += 1
    proj = {s: {t: pi(s, c) for t, c in hom[s].items() if c is not OVERFLOW} for s in hom}
    section: dict = {s: {} for s in Q.sorts}
    for s in proj:
        for t, q in proj[s].items():
            section[s].setdefault(q, t)
    return Reflection(A, Q.with_truncation(T.obj(A).truncated), proj, section, b,
                      rounds, passes, enlargements, profile)


class ReflectedMonad(Monad):
    """``R A`` = reflection of the free ``T``-algebra on ``A``.

    ``condition`` cuts out the subcategory; unit, multiplication and the
    functor action are induced from ``T`` through the projections.
    """

    def __init__(self, T: Monad, condition: Condition, budget: int = DEFAULT_BUDGET,
                 name: str | None = None):
        super().__init__()
        self.T = T
        self.condition = condition
        self.budget = budget
        self.name = name or f"R({T.name})"
        self.variants = T.variants
        self.reflections: dict = {}

    def reflection(self, A: BaseObj) -> Reflection:
        r = self.reflections.get(A)
        if r is None:
            r = reflect(self.T, A, self.condition, self.budget)
            self.reflections[A] = r
        return r

    def _obj(self, A):
        return self.reflection(A).carrier

    def _unit(self, A, sort, a):
        return self.reflection(A).proj[sort].get(self.T.unit_elem(A, sort, a), OVERFLOW)

    def _join(self, A, sort, rr):
        RA = self.obj(A)
        t = self.reflection(RA).section[sort][rr]
        return self.reflection(A).b(sort, t)

    def _fmap(self, f, sort, r):
        cod = getattr(f, "cod", None)
        if cod is None:
            raise ValueError(f"{self.name} needs the codomain of a map to act on it")
        dom = getattr(f, "dom", None)
        src = self._owner(sort, r, dom)
        t = self.reflection(src).section[sort][r]
        image = self.T.fmap(f, sort, t)
        if image is OVERFLOW:
            return OVERFLOW
        return self.reflection(cod).proj[sort].get(image, OVERFLOW)

    def _owner(self, sort, r, dom):
        if dom is not None:
            return dom
        hits = [A for A, ref in self.reflections.items() if r in ref.section.get(sort, {})]
        if len(hits) != 1:
            raise ValueError(f"cannot tell which object {r!r} belongs to")
        return hits[0]

    def support(self, sort, r):
        return []

    def size_hint(self, X):
        return self.T.size_hint(X)

    def projection(self) -> MonadMorphism:
        return MonadMorphism(self.T, self,
                             lambda X, s, t: self.reflection(X).proj[s].get(t, OVERFLOW),
                             f"proj_{self.name}")


# ---------------------------------------------------------------------------
# conditions


def _pair_condition(p: MonadMorphism, q: MonadMorphism) -> Condition:
    """``b . p_Q = b . q_Q``."""
    S = p.source

    def cond(Q, b):
        out = []
        SQ = S.obj(Q)
        for s in SQ.sorts:
            for x in SQ[s]:
                out.append((s, b(s, p.elem(Q, s, x)), b(s, q.elem(Q, s, x))))
        return out

    return cond


def _factor_condition(es: Sequence[MonadMorphism]) -> Condition:
    """``b`` is constant on the fibres of every ``(e_i)_Q``."""

    def cond(Q, b):
        out = []
        T = es[0].source
        TQ = T.obj(Q)
        for e in es:
            seen: dict = {}
            for s in TQ.sorts:
                for w in TQ[s]:
                    k = (s, e.elem(Q, s, w))
                    if k in seen:
                        out.append((s, b(s, seen[k]), b(s, w)))
                    else:
                        seen[k] = w
        return out

    return cond


def _join_conditions(conds: Sequence[Condition]) -> Condition:
    def cond(Q, b):
        return [pair for c in conds for pair in c(Q, b)]
    return cond


# ---------------------------------------------------------------------------
# constructions


@dataclass
class ColimitResult:
    monad: ReflectedMonad
    projection: MonadMorphism
    injections: list                 # one monad morphism per diagram node
    diagram: "DiagramOfMonads"
    report: LawReport = None

    @property
    def name(self):
        return self.monad.name


@dataclass
class Arrow:
    source: int
    target: int
    morphism: MonadMorphism


@dataclass
class DiagramOfMonads:
    nodes: list
    arrows: list = field(default_factory=list)

    def add(self, i: int, j: int, f: MonadMorphism) -> "DiagramOfMonads":
        self.arrows.append(Arrow(i, j, f))
        return self

    def paths_to(self, j: int) -> dict:
        """A chosen composite ``node -> j`` for every node that has one (BFS, shortest)."""
        paths = {j: None}          # None stands for the identity
        todo = deque([j])
        while todo:
            l = todo.popleft()
            for a in self.arrows:
                if a.target == l and a.source not in paths:
                    rest = paths[l]
                    paths[a.source] = a.morphism if rest is None else a.morphism.then(rest)
                    todo.append(a.source)
        return paths


def _apply(path, X, s, x):
    return x if path is None else path.elem(X, s, x)


def _diagram_condition(d: DiagramOfMonads, j: int, paths: dict) -> Condition:
    """For every arrow ``f: i -> l``: ``b . P_i = b . P_l . f`` on ``T_i Q``."""

    def cond(Q, b):
        out = []
        for a in d.arrows:
            Si = d.nodes[a.source]
            SQ = Si.obj(Q)
            for s in SQ.sorts:
                for x in SQ[s]:
                    lhs = _apply(paths[a.source], Q, s, x)
                    rhs = _apply(paths[a.target], Q, s, a.morphism.elem(Q, s, x))
                    out.append((s, b(s, lhs), b(s, rhs)))
        return out

    return cond


def colimit_weakly_terminal(d: DiagramOfMonads, j: int, budget: int = DEFAULT_BUDGET,
                            name: str | None = None) -> ColimitResult:
    """Colimit of a diagram in which every node reaches node ``j``."""
    paths = d.paths_to(j)
    lacking = [i for i in range(len(d.nodes)) if i not in paths]
    if lacking:
        raise NotWeaklyTerminal(f"nodes {lacking} have no arrow into node {j}")
    T = d.nodes[j]
    R = ReflectedMonad(T, _diagram_condition(d, j, paths), budget, name or f"colim@{T.name}")
    proj = R.projection()
    injections = [proj if paths[i] is None else paths[i].then(proj) for i in range(len(d.nodes))]
    for i, f in enumerate(injections):
        f.name = f"in{i}"
    return ColimitResult(R, proj, injections, d)


def coequalize_monads(p: MonadMorphism, q: MonadMorphism, budget: int = DEFAULT_BUDGET,
                      name: str | None = None) -> ColimitResult:
    """Coequalizer of a parallel pair ``p, q: S -> T``."""
    if p.source is not q.source or p.target is not q.target:
        raise ValueError("coequalize_monads needs a parallel pair")
    T = p.target
    R = ReflectedMonad(T, _pair_condition(p, q), budget, name or f"coeq({p.name},{q.name})")
    proj = R.projection()
    d = DiagramOfMonads([p.source, T]).add(0, 1, p).add(0, 1, q)
    return ColimitResult(R, proj, [p.then(proj), proj], d)


def cointersection(es: Sequence[MonadMorphism], samples: Sequence[BaseObj],
                   budget: int = DEFAULT_BUDGET, name: str | None = None) -> ColimitResult:
    """Wide pushout of morphisms with surjective components out of a common source."""
    if not es:
        raise ValueError("cointersection needs at least one morphism")
    T = es[0].source
    if any(e.source is not T for e in es):
        raise ValueError("cointersection needs a common source")
    for e in es:
        for X in samples:
            if not e.component(X).is_epi():
                raise ValueError(f"{e.name} is not surjective at {X!r}")
    R = ReflectedMonad(T, _factor_condition(es), budget, name or "cointersection")
    proj = R.projection()
    d = DiagramOfMonads([T] + [e.target for e in es])
    for k, e in enumerate(es):
        d.add(0, k + 1, e)
    # the induced map from the codomain of e_k: a section of e_k followed by the projection
    injections = [proj]
    for k, e in enumerate(es):
        injections.append(_through_section(e, proj, f"in{k + 1}"))
    return ColimitResult(R, proj, injections, d)


def _through_section(e: MonadMorphism, proj: MonadMorphism, name: str) -> MonadMorphism:
    def fn(X, s, y):
        comp = e.component(X)
        for t, v in comp.maps[s].items():
            if v == y:
                return proj.elem(X, s, t)
        return OVERFLOW
    return MonadMorphism(e.target, proj.target, fn, name)


def empty_colimit() -> ColimitResult:
    """The colimit of the empty diagram: the identity monad."""
    Id = IdentityMonad()
    return ColimitResult(Id, None, [], DiagramOfMonads([]))


# ---------------------------------------------------------------------------
# verification


@dataclass
class MultiAlgebra:
    carrier: BaseObj
    structures: list                 # one EM algebra per node

    def triangles_hold(self, d: DiagramOfMonads) -> bool:
        B = self.carrier
        for a in d.arrows:
            Ti = d.nodes[a.source]
            TB = Ti.obj(B)
            for s in TB.sorts:
                for x in TB[s]:
                    if self.structures[a.source](s, x) != self.structures[a.target](
                            s, a.morphism.elem(B, s, x)):
                        return False
        return True

    def __repr__(self):
        return f"({self.carrier!r}; {', '.join(map(repr, self.structures))})"


def multi_algebras(d: DiagramOfMonads, bound: int, kind: str = "set"):
    """Every multi-algebra for ``d`` on a carrier of size at most ``bound``."""
    for B in small_objects(kind, bound):
        algs = [list(T.em_algebras(B)) for T in d.nodes]
        for combo in itertools.product(*algs):
            m = MultiAlgebra(B, list(combo))
            if m.triangles_hold(d):
                yield m


def cocone_check(res: ColimitResult, samples: Sequence[BaseObj]) -> LawReport:
    """``in_l . f = in_i`` for every arrow ``f: i -> l`` and ``proj`` coequalizes."""
    report = LawReport(f"cocone of {res.name}")
    for a in res.diagram.arrows:
        via = a.morphism.then(res.injections[a.target])
        for X in samples:
            report.expect(f"triangle {a.source}->{a.target}", X,
                          via.component(X).maps, res.injections[a.source].component(X).maps)
    return report


def check_colimit_universal(res: ColimitResult, samples: Sequence[BaseObj], bound: int = 2,
                            targets=None, junk: bool = False) -> LawReport:
    """Existence and uniqueness of mediating maps out of ``R A``.

    For a multi-algebra ``(B, a_i)`` and ``f: A -> B`` the solver looks for
    every ``h: R A -> B`` with ``h . eta^R = f`` and ``h`` a homomorphism for
    each induced structure ``mu^R . (in_i)_{R A}``.  Exactly one must exist
    and it must agree with the map read off the reflection.  With
    ``junk=True`` an unconstrained atom is added to ``R A``; uniqueness must
    then fail (negative control).
    """
    R, d = res.monad, res.diagram
    report = LawReport(f"universal property of {res.name} (targets of size <= {bound})")
    kind = samples[0].kind if samples else "set"
    if targets is None:
        targets = list(multi_algebras(d, bound, kind))
    if not targets:
        report.notes.append("no multi-algebra targets within the bound")
    for A in samples:
        RA = R.obj(A)
        dom = RA
        if junk:
            parts = {s: list(RA[s]) for s in RA.sorts}
            parts[RA.sorts[0]].append("__junk__")
            dom = BaseObj.build(RA.kind, parts, RA.structure)
        hom_elems = []
        for i, inj in enumerate(res.injections):
            Ti = d.nodes[i]
            TRA = Ti.obj(RA)
            for s in TRA.sorts:
                for x in TRA[s]:
                    lhs = R.join_elem(A, s, inj.elem(RA, s, x))
                    if lhs is OVERFLOW:
                        report.excused += 1
                        continue
                    hom_elems.append((i, s, x, lhs))
        for target in targets:
            B = target.carrier
            for f in morphisms(A, B):
                cs = [Constraint(frozenset([(s, R.unit_elem(A, s, a))]),
                                 lambda g, s=s, a=a: g[(s, R.unit_elem(A, s, a))] == f(s, a),
                                 f"extends at {a!r}")
                      for s in A.sorts for a in A[s]]
                for i, s, x, lhs in hom_elems:
                    Ti = d.nodes[i]
                    needed = frozenset([(s, lhs)] + [(s_, y) for s_, y in _atoms_in(Ti, RA, s, x)])

                    def check(g, i=i, s=s, x=x, lhs=lhs, Ti=Ti):
                        image = Ti.fmap(lambda s_, y: g[(s_, y)], s, x)
                        return g[(s, lhs)] == target.structures[i](s, image)

                    cs.append(Constraint(needed, check, f"hom {i} at {x!r}"))
                where = (A, target, f)
                sols = solve_maps(dom, B, cs, limit=2)
                report.expect("number of mediating homomorphisms", where, len(sols), 1)
                if len(sols) == 1 and not junk and d.nodes:
                    report.expect("search agrees with the reflection", where, sols[0],
                                  _mediating(res, A, f, target))
    return report


def _atoms_in(T: Monad, Y: BaseObj, sort, x):
    """Atoms of ``Y`` that ``x`` in ``T Y`` depends on (by probing the functor action)."""
    seen = []
    T.fmap(FnMap(lambda s, a: seen.append((s, a)) or a, T.obj(Y), Y), sort, x)
    return [(s, a) for s, a in dict.fromkeys(seen) if Y.has(s, a)]


def _mediating(res: ColimitResult, A, f, target) -> dict:
    """``h(r) = a_j(T_j f (t))`` for a preimage ``t`` of ``r`` in ``T_j A``."""
    R = res.monad
    T = R.T
    j = next(i for i, inj in enumerate(res.injections) if inj.source is T)
    ref = R.reflection(A)
    out = {}
    for s in ref.carrier.sorts:
        for r in ref.carrier[s]:
            t = ref.section[s][r]
            out[(s, r)] = target.structures[j](s, T.fmap(f, s, t))
    return out


def minimality_check(res: ColimitResult, A: BaseObj, limit: int = 12) -> LawReport:
    """Among all quotients of ``T A`` whose induced algebra exists and satisfies
    the condition, the computed one must be the finest.  Brute force over set
    partitions, so only for single-sorted ``T A`` with at most ``limit`` atoms.
    """
    from .base import FinSet
    R = res.monad
    T = R.T
    TA = T.obj(A)
    report = LawReport(f"minimality of {res.name} at {A!r}")
    if TA.kind != "set" or TA.size() > limit:
        report.notes.append("skipped: carrier too large or not a plain set")
        report.exhaustive = False
        return report
    atoms = list(TA["*"])
    ours = _blocks(R.reflection(A).proj["*"])
    valid = []
    for blocks in _set_partitions(atoms):
        label = {a: bl[0] for bl in blocks for a in bl}
        Q = FinSet(sorted({label[a] for a in atoms}, key=atoms.index))
        pi = BaseMor.of_set(TA, Q, label)
        b = _induced(T, A, TA, Q, pi)
        if b is None:
            continue
        pairs = R.condition(Q, lambda s, w: b.get(w, OVERFLOW))
        if all(x == y for _, x, y in pairs if x is not OVERFLOW and y is not OVERFLOW):
            valid.append(_blocks(label))
    report.expect("computed quotient is a valid one", A, ours in valid, True)
    for v in valid:
        report.expect("every valid quotient is coarser", A, _refines(ours, v), True)
    return report


def _induced(T, A, TA, Q, pi):
    TTA = T.obj(TA)
    b: dict = {}
    for u in TTA["*"]:
        key = T.fmap(pi, "*", u)
        val = pi("*", T.join_elem(A, "*", u))
        if b.setdefault(key, val) != val:
            return None
    if set(b) != set(T.obj(Q)["*"]):
        return None
    return b


def _blocks(label: dict) -> frozenset:
    groups: dict = {}
    for a, q in label.items():
        groups.setdefault(q, set()).add(a)
    return frozenset(frozenset(g) for g in groups.values())


def _refines(fine: frozenset, coarse: frozenset) -> bool:
    return all(any(bl <= c for c in coarse) for bl in fine)


def _set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for k in range(len(part)):
            yield part[:k] + [[first] + part[k]] + part[k + 1:]
