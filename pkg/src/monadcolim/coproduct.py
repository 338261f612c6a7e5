"""Coproducts of separated monads by mutual recursion of unit complements.

For separated ``S_i = Id + S-bar_i`` the coproduct at ``A`` is
``A + sum_i X_i`` where the family ``(X_i)`` is the least solution of
``X_i = S-bar_i(A + sum_{j != i} X_j)``.  The solution is computed as the
chain from the empty family.  Atoms are tagged ``Base(a)`` for the
generators and ``Layer(i, x)`` for an element ``x`` of the ``i``-th
complement, so connecting maps are inclusions of atom sets.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .base import (
    BaseMor, BaseObj, Converged, Exhausted, empty_like, morphisms, small_objects,
)
from .errors import BudgetExhausted, NonMonoInChain
from .functors import DEFAULT_BUDGET
from .monads import NOT_UNIT, OVERFLOW, Monad, MonadMorphism
from .report import LawReport
from .separated import SeparatedRep
from .universal import Constraint, solve_maps


@dataclass(frozen=True)
class Base:
    """A generator of the coproduct carrier."""

    atom: object

    def __repr__(self):
        return str(self.atom)


@dataclass(frozen=True)
class Layer:
    """An element of the ``index``-th unit complement, over lower atoms."""

    index: int
    elem: object

    def __repr__(self):
        return f"[{self.index}|{self.elem!r}]"


def _assemble(A: BaseObj, layers: Sequence[BaseObj], skip: int | None = None,
              truncated: bool = False) -> BaseObj:
    """``A + sum_{j != skip} layers[j]`` with ``Base``-tagged generators."""
    parts = {s: [Base(a) for a in A[s]] for s in A.sorts}
    for j, X in enumerate(layers):
        if j == skip:
            continue
        for s in A.sorts:
            parts[s].extend(X[s])
    structure = {}
    for name, (src, tgt, table) in A.structure.items():
        t = {Base(a): Base(b) for a, b in table.items()}
        for j, X in enumerate(layers):
            if j != skip:
                t.update(X.structure[name][2])
        structure[name] = (src, tgt, t)
    return BaseObj.build(A.kind, parts, structure, truncated)


@dataclass
class ChainState:
    """Levels of the mutual-recursion chain; ``levels[k][i]`` is ``X_i`` at level ``k``."""

    base: BaseObj
    levels: list[list[BaseObj]]
    status: Converged | Exhausted
    truncated: bool = False
    profile: list[list[int]] = field(default_factory=list)

    @property
    def converged(self) -> bool:
        return isinstance(self.status, Converged)

    @property
    def components(self) -> list[BaseObj]:
        if not self.converged:
            raise BudgetExhausted("coproduct chain did not converge", self.profile)
        return self.levels[self.status.level]


@dataclass(frozen=True)
class LayeredCarrier:
    base: BaseObj
    layers: tuple
    assembled: BaseObj
    unit: BaseMor                   # base -> assembled
    layer_injections: tuple         # layers[i] -> assembled


class HA:
    """The endofunctor ``(X_i) |-> (S-bar_i(A + sum_{j != i} X_j))`` on families."""

    def __init__(self, seps: Sequence[SeparatedRep], A: BaseObj, depth: int | None = None):
        self.seps = list(seps)
        self.A = A
        self.depth = depth
        self.weights: dict = {}

    def weight(self, sort, atom) -> int:
        if isinstance(atom, Base):
            return 0
        return self.weights[(sort, atom)]

    def Y(self, family: Sequence[BaseObj], i: int) -> BaseObj:
        return _assemble(self.A, family, skip=i)

    def component(self, i: int, Y: BaseObj, bound: int | None) -> BaseObj:
        sep = self.seps[i]
        elems = sep.complement_upto(Y, self.weight, bound)
        parts = {s: [Layer(i, x) for x in elems.get(s, {})] for s in Y.sorts}
        for s in Y.sorts:
            for x, w in elems.get(s, {}).items():
                self.weights[(s, Layer(i, x))] = w
        structure = {}
        if Y.structure:
            SY = sep.monad.obj(Y)
            for name, (src, tgt, table) in SY.structure.items():
                structure[name] = (src, tgt, {Layer(i, x): Layer(i, table[x])
                                              for x in elems.get(src, {})})
        return BaseObj.build(Y.kind, parts, structure)

    def __call__(self, family: Sequence[BaseObj], bound: int | None = None) -> list[BaseObj]:
        bound = self.depth if bound is None else bound
        return [self.component(i, self.Y(family, i), bound) for i in range(len(self.seps))]

    def empty_family(self) -> list[BaseObj]:
        return [empty_like(self.A) for _ in self.seps]


def build_HA(seps: Sequence[SeparatedRep], A: BaseObj, depth: int | None = None) -> HA:
    for sep in seps:
        if A.kind not in sep.monad.variants:
            raise ValueError(f"{sep.name} is not defined on {A.kind} objects")
    return HA(seps, A, depth)


def _sizes(family):
    return [X.size() for X in family]


def _included(small: BaseObj, big: BaseObj) -> bool:
    return all(big.has(s, a) for s, a in small.atoms())


def coproduct_chain(seps: Sequence[SeparatedRep], A: BaseObj, budget: int = DEFAULT_BUDGET,
                    depth: int | None = None, stop: bool = True) -> ChainState:
    """Run the chain of ``H_A`` from the empty family.

    ``Converged(k)``: every connecting inclusion from level ``k`` is
    bijective.  With a layer-weight bound ``depth`` the state is flagged
    ``truncated`` when some complement element of weight ``depth + 1`` exists.
    With ``stop=False`` all ``budget`` levels are produced.
    """
    H = build_HA(seps, A, depth)
    family = H.empty_family()
    levels = [family]
    profile = [_sizes(family)]
    status: Converged | Exhausted = Exhausted(budget)
    for k in range(budget):
        nxt = H(family)
        for i, (old, new) in enumerate(zip(family, nxt)):
            if not _included(old, new):
                raise NonMonoInChain(f"component {i} shrank between levels {k} and {k + 1}")
        levels.append(nxt)
        profile.append(_sizes(nxt))
        if isinstance(status, Exhausted) and all(o == n for o, n in zip(family, nxt)):
            status = Converged(k)
            if stop:
                break
        family = nxt
    truncated = False
    if isinstance(status, Converged) and depth is not None:
        comps = levels[status.level]
        for i in range(len(seps)):
            wider = H.component(i, H.Y(comps, i), depth + 1)
            if wider.size() > comps[i].size():
                truncated = True
                break
    state = ChainState(A, levels, status, truncated, profile)
    state.weights = H.weights
    return state


class CoproductMonad(Monad):
    """The coproduct of separated monads, assembled level by level.

    ``depth`` bounds the total layer weight of carrier elements (needed when
    a summand is infinite); results beyond it are ``OVERFLOW``.
    """

    def __init__(self, seps: Sequence[SeparatedRep], depth: int | None = None,
                 budget: int = DEFAULT_BUDGET, name: str | None = None):
        super().__init__()
        self.seps = list(seps)
        self.depth = depth
        self.budget = budget
        self.name = name or " + ".join(s.name for s in self.seps)
        self.variants = tuple(v for v in ("set", "sorted", "graph")
                              if all(v in s.monad.variants for s in self.seps))
        self._chains: dict = {}
        self._weights: dict = {}

    # -- carrier ------------------------------------------------------------
    def chain(self, A: BaseObj) -> ChainState:
        st = self._chains.get(A)
        if st is None:
            st = coproduct_chain(self.seps, A, self.budget, self.depth)
            self._chains[A] = st
        return st

    def carrier(self, A: BaseObj) -> LayeredCarrier:
        st = self.chain(A)
        layers = st.components
        R = _assemble(A, layers, truncated=st.truncated)
        unit = BaseMor(A, R, {s: {a: Base(a) for a in A[s]} for s in A.sorts}, check=False)
        injs = tuple(BaseMor.inclusion(X, R) for X in layers)
        return LayeredCarrier(A, tuple(layers), R, unit, injs)

    def _obj(self, A):
        st = self.chain(A)
        if not st.converged:
            raise BudgetExhausted(f"{self.name} at {A!r}: chain did not converge within "
                                  f"{self.budget} levels", st.profile)
        return self.carrier(A).assembled

    # -- weights ------------------------------------------------------------
    def atom_weight(self, sort, r) -> int:
        if isinstance(r, Base):
            return 0
        key = (sort, r)
        w = self._weights.get(key)
        if w is None:
            w = self.seps[r.index].working.weight(sort, r.elem, self.atom_weight)
            self._weights[key] = w
        return w

    # -- algebra structures ---------------------------------------------------
    def sigma(self, i: int, sort, s):
        """The ``S_i``-algebra structure of the carrier, on an element of ``S_i(carrier)``."""
        S = self.seps[i].working

        def phi(s_, r):
            if isinstance(r, Layer) and r.index == i:
                return r.elem
            return S.unit_elem(None, s_, r)

        z = S.bind(None, sort, s, phi)
        if z is OVERFLOW:
            return OVERFLOW
        y = S.unit_preimage(sort, z)
        if y is not NOT_UNIT:
            return y
        out = Layer(i, z)
        if self.depth is not None and self.atom_weight(sort, out) > self.depth:
            return OVERFLOW
        return out

    def structures(self) -> list[Callable]:
        return [lambda s, t, i=i: self.sigma(i, s, t) for i in range(len(self.seps))]

    def extend(self, f: Callable, betas: Sequence[Callable]) -> Callable:
        """``h = [f, (h_i)]`` with ``h(Layer(i, x)) = beta_i(S_i h (x))``, memoised."""
        memo: dict = {}

        def h(sort, r):
            key = (sort, r)
            if key in memo:
                return memo[key]
            if isinstance(r, Base):
                v = f(sort, r.atom)
            elif isinstance(r, Layer):
                inner = self.seps[r.index].working.fmap(h, sort, r.elem)
                v = OVERFLOW if inner is OVERFLOW else betas[r.index](sort, inner)
            else:
                raise KeyError(f"{r!r} is not a coproduct atom")
            memo[key] = v
            return v

        return h

    def extend_to_hom(self, f: BaseMor, target: "MultiAlgebraTarget") -> BaseMor:
        """The unique multi-algebra homomorphism ``R A -> B`` extending ``f: A -> B``."""
        h = self.extend(f, target.structures)
        R = self.obj(f.dom)
        return BaseMor(R, target.carrier, {s: {r: h(s, r) for r in R[s]} for s in R.sorts},
                       check=False)

    # -- monad structure ------------------------------------------------------
    def _unit(self, A, sort, a):
        return Base(a)

    def _join(self, A, sort, rr):
        return self.extend(lambda s, r: r, self.structures())(sort, rr)

    def _fmap(self, f, sort, r):
        return self.extend(lambda s, a: Base(f(s, a)), self.structures())(sort, r)

    def support(self, sort, r):
        if isinstance(r, Base):
            return [(sort, r.atom)]
        out = []
        for s, a in self.seps[r.index].working.support(sort, r.elem):
            out.extend(self.support(s, a))
        return list(dict.fromkeys(out))

    def unit_preimage(self, sort, r, X=None):
        return r.atom if isinstance(r, Base) else NOT_UNIT

    def injection(self, i: int) -> MonadMorphism:
        """The coproduct injection ``S_i -> R``."""
        S = self.seps[i].working

        def fn(A, sort, s):
            return self.sigma(i, sort, S.fmap(lambda s_, a: Base(a), sort, s))

        return MonadMorphism(self.seps[i].monad, self, fn, f"in{i}")

    def copair(self, target: Monad, fs: Sequence[MonadMorphism], name: str = "copair") -> MonadMorphism:
        """The monad morphism ``R -> T`` induced by morphisms ``S_i -> T``."""

        def fn(A, sort, r):
            TA = target.obj(A)
            betas = [lambda s, t, f=f: target.join_elem(A, s, f.elem(TA, s, t)) for f in fs]
            return self.extend(lambda s, a: target.unit_elem(A, s, a), betas)(sort, r)

        return MonadMorphism(self, target, fn, name)


def coproduct_monad(seps: Sequence[SeparatedRep], budget: int = DEFAULT_BUDGET,
                    depth: int | None = None) -> CoproductMonad:
    return CoproductMonad(seps, depth, budget)


class JunkExtended(CoproductMonad):
    """A coproduct carrier with one unconstrained extra atom (negative control)."""

    JUNK = Base("__junk__")

    def _obj(self, A):
        R = super()._obj(A)
        parts = {s: list(R[s]) for s in R.sorts}
        parts[R.sorts[0]].append(self.JUNK)
        return BaseObj.build(R.kind, parts, R.structure, R.truncated)


# ---------------------------------------------------------------------------
# verification


@dataclass
class MultiAlgebraTarget:
    carrier: BaseObj
    structures: list
    law_checked: bool = True

    def __repr__(self):
        return f"({self.carrier!r}; {', '.join(map(repr, self.structures))})"


def multi_algebra_targets(seps: Sequence[SeparatedRep], bound: int, kind: str = "set"):
    """Every multi-algebra on base objects of size at most ``bound``."""
    for B in small_objects(kind, bound):
        algs = [list(sep.monad.em_algebras(B)) for sep in seps]
        for combo in itertools.product(*algs):
            yield MultiAlgebraTarget(B, list(combo))


def _hom_constraints(R: CoproductMonad, A: BaseObj, RA: BaseObj, f, target, report):
    cons = [Constraint(frozenset([(s, Base(a))]),
                       lambda g, s=s, a=a: g[(s, Base(a))] == f(s, a), f"extends at {a}")
            for s in A.sorts for a in A[s]]
    for i, sep in enumerate(R.seps):
        S = sep.working
        elems = S.elements_upto(RA, 1)
        beta = target.structures[i]
        for s, ts in elems.items():
            for t in ts:
                lhs = R.sigma(i, s, t)
                if lhs is OVERFLOW:
                    report.excused += 1
                    continue
                if not RA.has(s, lhs):
                    continue
                needed = frozenset([(s, lhs)] + list(S.support(s, t)))

                def check(g, s=s, t=t, lhs=lhs, S=S, beta=beta):
                    return g[(s, lhs)] == beta(s, S.fmap(lambda s_, a: g[(s_, a)], s, t))

                cons.append(Constraint(needed, check, f"hom {i} at {t!r}"))
    return cons


def verify_universal(R: CoproductMonad, samples: Sequence[BaseObj], bound: int = 2,
                     targets: Sequence[MultiAlgebraTarget] | None = None) -> LawReport:
    """Existence (by the recursion) and uniqueness (by exhaustive search) of mediating maps."""
    report = LawReport(f"universal property of {R.name} (targets of size <= {bound})")
    kind = samples[0].kind if samples else "set"
    if targets is None:
        targets = list(multi_algebra_targets(R.seps, bound, kind))
    for A in samples:
        RA = R.obj(A)
        for target in targets:
            B = target.carrier
            for f in morphisms(A, B):
                h = R.extend(f, target.structures)
                where = (A, target, f)
                cons = _hom_constraints(R, A, RA, f, target, report)
                try:
                    hmap = {(s, r): h(s, r) for s in RA.sorts for r in RA[s]}
                except KeyError as exc:
                    hmap = None
                    report.fail("recursion defined on every atom", where, f"no value at {exc}")
                if hmap is not None:
                    ok = all(c.check(hmap) for c in cons)
                    report.expect("recursion gives a homomorphism extending f", where, ok, True)
                sols = solve_maps(RA, B, cons, limit=2)
                report.expect("number of mediating homomorphisms", where, len(sols), 1)
                if len(sols) == 1 and hmap is not None:
                    report.expect("search agrees with recursion", where, sols[0], hmap)
    return report


def decomposition_check(R: CoproductMonad, A: BaseObj) -> LawReport:
    """``Y_i + X_i ~= S_i Y_i`` on the converged family, both directions."""
    report = LawReport(f"layer decomposition of {R.name} at {A!r}")
    st = R.chain(A)
    comps = st.components
    H = build_HA(R.seps, A, R.depth)
    H.weights = dict(st.weights)
    for i, sep in enumerate(R.seps):
        Y = H.Y(comps, i)
        forward = {}
        for s in Y.sorts:
            for y in Y[s]:
                forward[(s, y)] = sep.working.unit_elem(Y, s, y)
            for x in comps[i][s]:
                forward[(s, x)] = x.elem
        if R.depth is None:
            SY = sep.monad.obj(Y)
            target = {(s, t) for s in SY.sorts for t in SY[s]}
        else:
            comp = sep.complement_upto(Y, H.weight, R.depth)
            target = {(s, sep.working.unit_elem(Y, s, y)) for s in Y.sorts for y in Y[s]}
            target |= {(s, t) for s, row in comp.items() for t in row}
        image = {(k[0], v) for k, v in forward.items()}
        report.expect(f"component {i}: map into S_i Y_i injective", A,
                      len(image), len(forward))
        report.expect(f"component {i}: map into S_i Y_i surjective", A, image, target)
        back = {}
        for (s, t) in target:
            y = sep.working.unit_preimage(s, t, Y)
            back[(s, t)] = y if y is not NOT_UNIT else Layer(i, t)
        report.expect(f"component {i}: inverse round trip", A,
                      all(back[(k[0], v)] == k[1] for k, v in forward.items()), True)
    return report


@dataclass
class CompactPairReport:
    agreements: list = field(default_factory=list)   # (label, stage, equal?)
    profiles: dict = field(default_factory=dict)
    initial: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(eq for _, _, eq in self.agreements)


def compact_pair_check(S: SeparatedRep, T: SeparatedRep, A: BaseObj, budget: int = 4,
                       depth: int | None = None) -> CompactPairReport:
    """Compare the composite chains ``Z -> S-bar(A + T-bar(A + Z))`` (and the
    symmetric one) with the two components of the mutual-recursion chain."""
    st = coproduct_chain([S, T], A, budget=2 * budget + 1, depth=depth, stop=False)
    H = build_HA([S, T], A, depth)
    rep = CompactPairReport()

    def composite(first, second):
        # Z |-> first-bar(A + second-bar(A + Z)), built with the same tags
        i, j = first, second
        Z = empty_like(A)
        stages = [Z]
        odd = []
        for _ in range(budget):
            inner = H.component(j, _only(A, Z, i, 2), depth)
            odd.append(inner)
            Z = H.component(i, _only(A, inner, j, 2), depth)
            stages.append(Z)
        return stages, odd

    for i, j in ((0, 1), (1, 0)):
        stages, odd = composite(i, j)
        label = "SbarTbar" if i == 0 else "TbarSbar"
        rep.profiles[label] = [Z.size() for Z in stages]
        for k, Z in enumerate(stages):
            rep.agreements.append((f"{label} stage {k} = component {i} at level {2 * k}", k,
                                   Z == st.levels[2 * k][i]))
        for k, W in enumerate(odd):
            rep.agreements.append((f"{label} inner stage {k} = component {j} at level {2 * k + 1}",
                                   k, W == st.levels[2 * k + 1][j]))
        conv = next((k for k in range(len(stages) - 1) if stages[k] == stages[k + 1]), None)
        rep.initial[label] = None if conv is None else stages[conv]
    rep.profiles["mutual"] = st.profile
    return rep


def _only(A: BaseObj, X: BaseObj, index: int, n: int) -> BaseObj:
    """``A + X`` where ``X`` sits in slot ``index`` of an ``n``-family."""
    family = [empty_like(A) for _ in range(n)]
    family[index] = X
    return _assemble(A, family)
