"""Monads presented by a signature and a terminating rewrite system."""

from __future__ import annotations

import itertools
from typing import Callable, Iterator

from .base import SET, SORTED, STAR, BaseObj
from .monads import NOT_UNIT, EMAlgebra, Monad, _Overflowed
from .terms import (
    App, PVar, Presentation, Signature, Var, depth, enumerate_normal_forms,
    exists_normal_form_at, leaves, substitute,
)


class PresentedMonad(Monad):
    """``T A`` = normal forms of terms over ``A`` of depth at most ``depth``.

    Values are flagged ``truncated`` when a normal form of depth
    ``depth + 1`` exists.  Multiplication substitutes and normalises; a
    result deeper than the bound is ``OVERFLOW``.  With ``depth=None`` the
    element operations are unbounded but objects cannot be materialised.
    """

    variants = (SET, SORTED)

    def __init__(self, presentation: Presentation, depth: int | None = 3, name: str | None = None):
        super().__init__()
        self.presentation = presentation
        self.depth = depth
        ops = ",".join(presentation.signature.ops)
        self.name = name or (f"Free({ops})" if presentation.is_free else f"Pres({ops})")
        if depth is not None:
            self.name += f"@{depth}"

    @classmethod
    def free(cls, arities: dict, depth: int | None = 3, name: str | None = None) -> "PresentedMonad":
        return cls(Presentation(Signature.single(arities)), depth, name)

    def with_depth(self, depth: int | None) -> "PresentedMonad":
        base = self.name.split("@")[0]
        return PresentedMonad(self.presentation, depth, base)

    @property
    def signature(self) -> Signature:
        return self.presentation.signature

    def _leaves(self, X: BaseObj) -> dict:
        return {s: [Var(a, s) for a in X[s]] for s in X.sorts}

    def check_variant(self, X):
        super().check_variant(X)
        if tuple(X.sorts) != tuple(self.signature.sorts) and X.kind == SORTED:
            raise ValueError(f"{self.name} has sorts {self.signature.sorts}, got {X.sorts}")

    def _obj(self, X):
        if self.depth is None:
            raise ValueError(f"{self.name} has no depth bound; its values are infinite")
        leaves_ = self._leaves(X)
        nfs = enumerate_normal_forms(self.presentation, leaves_, self.depth)
        truncated = exists_normal_form_at(self.presentation, leaves_, self.depth)
        return BaseObj.build(X.kind, {s: list(nfs.get(s, {})) for s in X.sorts},
                             truncated=truncated)

    def _bounded(self, t):
        t = self.presentation.normalize(t)
        if self.depth is not None and depth(t) > self.depth:
            raise _Overflowed
        return t

    def _unit(self, X, sort, x):
        return Var(x, sort)

    def _join(self, X, sort, tt):
        return self._bounded(substitute(tt, lambda v: v.atom))

    def _fmap(self, f, sort, t):
        return self._bounded(substitute(t, lambda v: Var(f(v.sort, v.atom), v.sort)))

    def support(self, sort, t):
        return list(dict.fromkeys((v.sort, v.atom) for v in leaves(t)))

    def unit_preimage(self, sort, t, X=None):
        return t.atom if isinstance(t, Var) else NOT_UNIT

    def weight(self, sort, t, w):
        if isinstance(t, Var):
            return w(t.sort, t.atom)
        return 1 + max((self.weight(None, a, w) for a in t.args), default=0)

    def elements_upto(self, Y, depth_=None):
        d = depth_ if self.depth is None else (self.depth if depth_ is None else min(depth_, self.depth))
        if d is None:
            raise ValueError("an enumeration depth is needed")
        nfs = enumerate_normal_forms(self.presentation, self._leaves(Y), d)
        return {s: list(nfs.get(s, {})) for s in Y.sorts}

    def complement_upto(self, Y: BaseObj, w: Callable, bound: int) -> dict:
        """Non-generator normal forms over ``Y`` of weighted depth ``<= bound``."""
        nfs = enumerate_normal_forms(self.presentation, self._leaves(Y), bound,
                                     leaf_weight=lambda v: w(v.sort, v.atom))
        return {s: {t: d for t, d in nfs.get(s, {}).items() if not isinstance(t, Var)}
                for s in Y.sorts}

    def size_hint(self, X):
        return None

    def evaluate(self, interp: dict, t):
        if isinstance(t, Var):
            return t.atom
        return interp[t.op][tuple(self.evaluate(interp, a) for a in t.args)]

    def interpretations(self, B: BaseObj) -> Iterator[dict]:
        """All operation tables on ``B`` satisfying the rules."""
        sig = self.signature
        ops = list(sig.ops.values())
        choices = []
        for op in ops:
            domain = list(itertools.product(*[B[s] for s in op.arg_sorts]))
            choices.append([dict(zip(domain, vals))
                            for vals in itertools.product(B[op.sort], repeat=len(domain))])
        for combo in itertools.product(*choices):
            interp = {op.name: table for op, table in zip(ops, combo)}
            if self._satisfies_rules(interp, B):
                yield interp

    def _satisfies_rules(self, interp, B) -> bool:
        for rule in self.presentation.rules:
            sorts = _pattern_sorts(rule.lhs, self.signature)
            names = sorted(sorts)
            for vals in itertools.product(*[B[sorts[n]] for n in names]):
                env = dict(zip(names, vals))
                if _eval_pattern(interp, rule.lhs, env) != _eval_pattern(interp, rule.rhs, env):
                    return False
        return True

    def em_algebras(self, B):
        for interp in self.interpretations(B):
            yield EMAlgebra(self, B, fn=lambda s, t, i=interp: self.evaluate(i, t),
                            label="{" + "; ".join(f"{op}: {_fmt_table(tab)}"
                                                  for op, tab in interp.items()) + "}")


def _fmt_table(tab: dict) -> str:
    return ", ".join(f"{'.'.join(map(str, k)) or '()'}->{v}" for k, v in tab.items())


def _pattern_sorts(t, sig: Signature, expected: str = STAR, out: dict | None = None) -> dict:
    out = {} if out is None else out
    if isinstance(t, PVar):
        out.setdefault(t.name, expected)
    elif isinstance(t, App):
        op = sig.ops[t.op]
        for a, s in zip(t.args, op.arg_sorts):
            _pattern_sorts(a, sig, s, out)
    return out


def _eval_pattern(interp, t, env):
    if isinstance(t, PVar):
        return env[t.name]
    return interp[t.op][tuple(_eval_pattern(interp, a, env) for a in t.args)]
