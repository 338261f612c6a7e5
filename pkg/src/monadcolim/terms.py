"""First-order terms, signatures, rewrite rules and normal-form enumeration."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Iterator, Mapping, Sequence

from .base import STAR
from .errors import NonTerminatingRules, SpecError


@dataclass(frozen=True)
class Var:
    """A generator (an atom of the object the term lives over)."""

    atom: Hashable
    sort: str = STAR

    def __repr__(self):
        return str(self.atom) if self.sort == STAR else f"{self.atom}:{self.sort}"


@dataclass(frozen=True)
class App:
    op: str
    args: tuple = ()

    def __repr__(self):
        if not self.args:
            return self.op
        return f"{self.op}({', '.join(map(repr, self.args))})"


@dataclass(frozen=True)
class PVar:
    """A pattern variable of a rewrite rule."""

    name: str

    def __repr__(self):
        return f"?{self.name}"


@dataclass(frozen=True)
class OpSym:
    name: str
    arg_sorts: tuple
    sort: str = STAR

    @property
    def arity(self) -> int:
        return len(self.arg_sorts)


class Signature:
    """Finitely many operation symbols with (sorted) arities."""

    def __init__(self, ops: Iterable[OpSym], sorts: Sequence[str] = (STAR,)):
        self.sorts = tuple(sorts)
        self.ops: dict[str, OpSym] = {}
        for op in ops:
            if op.name in self.ops:
                raise ValueError(f"duplicate operation symbol {op.name!r}")
            for s in op.arg_sorts + (op.sort,):
                if s not in self.sorts:
                    raise ValueError(f"operation {op.name!r} uses unknown sort {s!r}")
            self.ops[op.name] = op

    @classmethod
    def single(cls, arities: Mapping[str, int]) -> "Signature":
        """Single-sorted signature from ``name -> arity``."""
        for name, n in arities.items():
            if n < 0:
                raise ValueError(f"negative arity for {name!r}")
        return cls([OpSym(name, (STAR,) * n) for name, n in arities.items()])

    def union(self, other: "Signature") -> "Signature":
        sorts = self.sorts + tuple(s for s in other.sorts if s not in self.sorts)
        return Signature(list(self.ops.values()) + list(other.ops.values()), sorts)

    def __contains__(self, name):
        return name in self.ops

    def __repr__(self):
        return "Signature(" + ", ".join(f"{o.name}/{o.arity}" for o in self.ops.values()) + ")"


Term = object  # Var | App | PVar


def depth(t) -> int:
    if isinstance(t, App):
        return 1 + max((depth(a) for a in t.args), default=0)
    return 0


def size(t) -> int:
    if isinstance(t, App):
        return 1 + sum(size(a) for a in t.args)
    return 1


def leaves(t) -> Iterator:
    if isinstance(t, App):
        for a in t.args:
            yield from leaves(a)
    else:
        yield t


def substitute(t, fn: Callable):
    """Replace every leaf ``v`` (Var or PVar) by ``fn(v)``."""
    if isinstance(t, App):
        return App(t.op, tuple(substitute(a, fn) for a in t.args))
    return fn(t)


def match(pattern, term, binding: dict | None = None) -> dict | None:
    binding = {} if binding is None else binding
    if isinstance(pattern, PVar):
        bound = binding.get(pattern.name)
        if bound is None:
            binding[pattern.name] = term
            return binding
        return binding if bound == term else None
    if isinstance(pattern, App):
        if not isinstance(term, App) or term.op != pattern.op or len(term.args) != len(pattern.args):
            return None
        for p, t in zip(pattern.args, term.args):
            if match(p, t, binding) is None:
                return None
        return binding
    return binding if pattern == term else None


def instantiate(pattern, binding: Mapping):
    return substitute(pattern, lambda v: binding[v.name] if isinstance(v, PVar) else v)


def pvars(t) -> set[str]:
    return {v.name for v in leaves(t) if isinstance(v, PVar)}


@dataclass(frozen=True)
class Rule:
    lhs: object
    rhs: object

    def __post_init__(self):
        if not isinstance(self.lhs, App):
            raise ValueError("rule left-hand sides must be operation terms")
        if not pvars(self.rhs) <= pvars(self.lhs):
            raise ValueError(f"rule {self} introduces variables on the right")

    def __repr__(self):
        return f"{self.lhs!r} -> {self.rhs!r}"


class Presentation:
    """A signature with oriented equations, normalised leftmost-innermost.

    ``weights`` gives the termination measure: the weighted node count of a
    term (operation ``op`` counts ``weights.get(op, 1)``, leaves count 1).
    Every rewrite step must strictly decrease it.
    """

    def __init__(self, signature: Signature, rules: Sequence[Rule] = (),
                 weights: Mapping[str, int] | None = None):
        self.signature = signature
        self.rules = list(rules)
        self.weights = dict(weights or {})
        self._nf: dict = {}
        for r in self.rules:
            _check_sorts(signature, r.lhs)
            _check_sorts(signature, r.rhs)

    @property
    def is_free(self) -> bool:
        return not self.rules

    def measure(self, t) -> int:
        if isinstance(t, App):
            return self.weights.get(t.op, 1) + sum(self.measure(a) for a in t.args)
        return 1

    def root_step(self, t):
        """Rewrite ``t`` at the root with the first applicable rule, or return None."""
        for rule in self.rules:
            b = match(rule.lhs, t)
            if b is not None:
                out = instantiate(rule.rhs, b)
                if self.measure(out) >= self.measure(t):
                    raise NonTerminatingRules(
                        f"rule {rule!r} does not decrease the measure on {t!r}")
                return out
        return None

    def normalize(self, t):
        if not self.rules or not isinstance(t, App):
            return t
        hit = self._nf.get(t)
        if hit is not None:
            return hit
        cur = App(t.op, tuple(self.normalize(a) for a in t.args))
        step = self.root_step(cur)
        out = cur if step is None else self.normalize(step)
        if len(self._nf) < 500_000:
            self._nf[t] = out
        return out

    def is_root_normal(self, t) -> bool:
        return not any(match(r.lhs, t) is not None for r in self.rules)

    def is_normal(self, t) -> bool:
        if isinstance(t, App):
            return self.is_root_normal(t) and all(self.is_normal(a) for a in t.args)
        return True

    def critical_pairs(self) -> list[tuple]:
        """All critical pairs ``(overlap, left, right)`` between the rules."""
        out = []
        for i, r1 in enumerate(self.rules):
            for j, r2 in enumerate(self.rules):
                a = _rename(r1, "1")
                b = _rename(r2, "2")
                for pos, sub in _positions(a.lhs):
                    if not isinstance(sub, App):
                        continue
                    if i == j and pos == ():
                        continue
                    u = unify(sub, b.lhs)
                    if u is None:
                        continue
                    overlap = _resolve(a.lhs, u)
                    left = _resolve(a.rhs, u)
                    right = _resolve(_replace(a.lhs, pos, b.rhs), u)
                    out.append((overlap, left, right))
        return out

    def local_confluence(self) -> list[tuple]:
        """Critical pairs whose normal forms differ (empty list = locally confluent)."""
        bad = []
        for overlap, left, right in self.critical_pairs():
            l, r = self.normalize(left), self.normalize(right)
            if l != r:
                bad.append((overlap, l, r))
        return bad

    def union(self, other: "Presentation") -> "Presentation":
        return Presentation(self.signature.union(other.signature), self.rules + other.rules,
                            {**self.weights, **other.weights})

    def __repr__(self):
        return f"Presentation({self.signature!r}, rules={self.rules!r})"


def _check_sorts(sig: Signature, t):
    if isinstance(t, App):
        op = sig.ops.get(t.op)
        if op is None:
            raise ValueError(f"unknown operation {t.op!r}")
        if op.arity != len(t.args):
            raise ValueError(f"{t.op!r} expects {op.arity} arguments")
        for a in t.args:
            _check_sorts(sig, a)


def _rename(rule: Rule, suffix: str) -> Rule:
    fn = lambda v: PVar(v.name + "_" + suffix) if isinstance(v, PVar) else v
    return Rule(substitute(rule.lhs, fn), substitute(rule.rhs, fn))


def _positions(t, pos=()):
    yield pos, t
    if isinstance(t, App):
        for k, a in enumerate(t.args):
            yield from _positions(a, pos + (k,))


def _replace(t, pos, new):
    if not pos:
        return new
    args = list(t.args)
    args[pos[0]] = _replace(args[pos[0]], pos[1:], new)
    return App(t.op, tuple(args))


def _walk(t, subst):
    while isinstance(t, PVar) and t.name in subst:
        t = subst[t.name]
    return t


def _resolve(t, subst):
    t = _walk(t, subst)
    if isinstance(t, App):
        return App(t.op, tuple(_resolve(a, subst) for a in t.args))
    return t


def _occurs(name, t, subst) -> bool:
    t = _walk(t, subst)
    if isinstance(t, PVar):
        return t.name == name
    if isinstance(t, App):
        return any(_occurs(name, a, subst) for a in t.args)
    return False


def unify(s, t, subst: dict | None = None) -> dict | None:
    """Syntactic most general unifier of two patterns (triangular form)."""
    subst = {} if subst is None else subst
    stack = [(s, t)]
    while stack:
        a, b = stack.pop()
        a, b = _walk(a, subst), _walk(b, subst)
        if a == b:
            continue
        if isinstance(a, PVar):
            if _occurs(a.name, b, subst):
                return None
            subst[a.name] = b
        elif isinstance(b, PVar):
            stack.append((b, a))
        elif isinstance(a, App) and isinstance(b, App):
            if a.op != b.op or len(a.args) != len(b.args):
                return None
            stack.extend(zip(a.args, b.args))
        else:
            return None
    return subst


# ---------------------------------------------------------------------------
# enumeration


def enumerate_normal_forms(presentation: Presentation, leaves_by_sort: Mapping[str, Sequence],
                           max_depth: int, leaf_weight: Callable | None = None) -> dict:
    """Normal forms over the given leaves, by weighted depth.

    ``leaf_weight(leaf)`` is the depth a leaf counts for (default 0); an
    operation node adds 1 to the largest weighted depth of its arguments
    (constants have depth 1).  Returns ``sort -> {term: weighted depth}``
    for all normal forms of weighted depth ``<= max_depth``, in order of
    increasing depth.
    """
    sig = presentation.signature
    lw = leaf_weight or (lambda v: 0)
    exact: dict[str, list[list]] = {s: [[] for _ in range(max_depth + 1)] for s in sig.sorts}
    for s, ls in leaves_by_sort.items():
        for v in ls:
            w = lw(v)
            if w <= max_depth:
                exact.setdefault(s, [[] for _ in range(max_depth + 1)])[w].append(v)
    for k in range(1, max_depth + 1):
        for op in sig.ops.values():
            if op.arity == 0:
                if k == 1:
                    t = App(op.name)
                    if presentation.is_root_normal(t):
                        exact[op.sort][1].append(t)
                continue
            pools = [[(t, w) for w in range(k) for t in exact[s][w]] for s in op.arg_sorts]
            for combo in itertools.product(*pools):
                if max(w for _, w in combo) != k - 1:
                    continue
                t = App(op.name, tuple(t for t, _ in combo))
                if presentation.is_root_normal(t):
                    exact[op.sort][k].append(t)
    return {s: {t: w for w in range(max_depth + 1) for t in levels[w]}
            for s, levels in exact.items()}


def exists_normal_form_at(presentation: Presentation, leaves_by_sort, d: int) -> bool:
    """Is there a normal form of depth exactly ``d + 1`` (unweighted)?"""
    sig = presentation.signature
    if d < 0:
        return any(leaves_by_sort.get(s) for s in sig.sorts)
    nfs = enumerate_normal_forms(presentation, leaves_by_sort, d)
    by = {s: [(t, w) for t, w in nfs.get(s, {}).items()] for s in sig.sorts}
    for op in sig.ops.values():
        if op.arity == 0:
            if d == 0 and presentation.is_root_normal(App(op.name)):
                return True
            continue
        pools = [by[s] for s in op.arg_sorts]
        for combo in itertools.product(*pools):
            if max(w for _, w in combo) != d:
                continue
            if presentation.is_root_normal(App(op.name, tuple(t for t, _ in combo))):
                return True
    return False


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(->|→)|([(),])|([^\s(),]+))")


def _tokens(text: str) -> list[str]:
    out, pos = [], 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise SpecError(f"cannot tokenize {text[pos:]!r}")
        out.append(m.group(1) or m.group(2) or m.group(3))
        pos = m.end()
    return out


def parse_term(text: str, signature: Signature, var: Callable[[str], object] = PVar):
    """Parse ``op(t, ...)`` syntax; unknown identifiers become ``var(name)``."""
    toks = _tokens(text)
    t, rest = _parse(toks, signature, var)
    if rest:
        raise SpecError(f"trailing input {' '.join(rest)!r} in {text!r}")
    return t


def _parse(toks, sig, var):
    if not toks:
        raise SpecError("unexpected end of term")
    head, rest = toks[0], toks[1:]
    if head in ("(", ")", ",", "->", "→"):
        raise SpecError(f"unexpected {head!r}")
    if head not in sig:
        if rest and rest[0] == "(":
            raise SpecError(f"unknown operation {head!r}")
        return var(head), rest
    op = sig.ops[head]
    if op.arity == 0:
        if rest and rest[0] == "(":
            if len(rest) > 1 and rest[1] == ")":
                rest = rest[2:]
            else:
                raise SpecError(f"constant {head!r} takes no arguments")
        return App(head), rest
    if not rest or rest[0] != "(":
        raise SpecError(f"{head!r} needs {op.arity} arguments")
    rest = rest[1:]
    args = []
    while True:
        a, rest = _parse(rest, sig, var)
        args.append(a)
        if not rest:
            raise SpecError("unclosed parenthesis")
        if rest[0] == ")":
            rest = rest[1:]
            break
        if rest[0] != ",":
            raise SpecError(f"expected ',' or ')' but got {rest[0]!r}")
        rest = rest[1:]
    if len(args) != op.arity:
        raise SpecError(f"{head!r} expects {op.arity} arguments, got {len(args)}")
    return App(head, tuple(args)), rest


def parse_rule(text: str, signature: Signature) -> Rule:
    toks = _tokens(text)
    arrows = [i for i, t in enumerate(toks) if t in ("->", "→")]
    if len(arrows) != 1:
        raise SpecError(f"rule {text!r} needs exactly one arrow")
    k = arrows[0]
    lhs, rest = _parse(toks[:k], signature, PVar)
    if rest:
        raise SpecError(f"trailing input in left-hand side of {text!r}")
    rhs, rest = _parse(toks[k + 1:], signature, PVar)
    if rest:
        raise SpecError(f"trailing input in right-hand side of {text!r}")
    try:
        return Rule(lhs, rhs)
    except ValueError as exc:
        raise SpecError(str(exc)) from exc
