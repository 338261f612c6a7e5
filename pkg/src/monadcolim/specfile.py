"""Loading monad and diagram descriptions from YAML files.

Grammar (version 1)::

    version: 1
    base: set | sorted | graph          # default: set
    sorts: [s, t]                       # sorted sets only
    monads:
      NAME:
        kind: exception | exception0 | terminal | terminal0 | reader
              | writer | powerset | identity | presentation | free
        exceptions: [e1, e2]            # exception, exception0
        environment: [r0, r1]           # reader
        order: 2                        # writer: cyclic group Z_n, or
        elements: [0, 1]                #   an explicit monoid table
        table: [[0, 1], [1, 0]]
        unit: 0
        ops: {s: 1, c: 0}               # presentation (single-sorted), or
        ops: {f: {args: [s], sort: t}}  #   sorted operations
        rules: ["s(s(x)) -> s(x)"]
        weights: {s: 1}
        depth: 3
        functor: H | K | L              # free (graphs)
    arrows:
      NAME:
        from: MONAD
        to: MONAD
        map: {e: f1}                    # exception -> exception or constants
        ops: {s: s}                     # presentation -> presentation renaming
        transformation: sigma | tau     # free H -> free K on graphs
    coproduct: [MONAD, ...]
    coequalizer: [ARROW, ARROW]
    cointersection: [ARROW, ...]
    colimit: {nodes: [MONAD, ...], arrows: [ARROW, ...], terminal: MONAD}

Every problem is reported as ``SpecError``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .base import GRAPH, SET, SORTED
from .errors import SpecError
from .monads import (
    OVERFLOW, ExceptionMonad, MonadMorphism, builtin_monad, exception_map, identity_morphism,
)
from .presented import PresentedMonad
from .terms import App, OpSym, Presentation, Signature, Var, depth, parse_rule

VERSION = 1
BUILTIN = {"exception", "exception0", "terminal", "terminal0", "reader", "writer",
           "powerset", "identity"}


@dataclass
class LoadedSpec:
    base: str
    sorts: tuple
    monads: dict
    arrows: dict
    coproduct: list = field(default_factory=list)
    coequalizer: list = field(default_factory=list)
    cointersection: list = field(default_factory=list)
    colimit: dict | None = None
    source: str = ""


def load_spec(path, depth: int | None = None) -> LoadedSpec:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SpecError(f"cannot read {path}: {exc}") from exc
    return parse_spec(text, str(path), depth)


def parse_spec(text: str, source: str = "<string>", depth: int | None = None) -> LoadedSpec:
    """Parse a spec; ``depth`` overrides the depth bound of every presentation."""
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise SpecError(f"{source}: not valid YAML: {exc}") from exc
    if not isinstance(doc, dict):
        raise SpecError(f"{source}: top level must be a mapping")
    if doc.get("version") != VERSION:
        raise SpecError(f"{source}: expected 'version: {VERSION}', got {doc.get('version')!r}")
    base = doc.get("base", SET)
    if base not in (SET, SORTED, GRAPH):
        raise SpecError(f"{source}: unknown base {base!r}")
    sorts = tuple(doc.get("sorts", ["s", "t"] if base == SORTED else []))
    monads_doc = _mapping(doc.get("monads", {}), "monads")
    monads = {name: _monad(name, body, base, sorts, depth) for name, body in monads_doc.items()}
    arrows = {name: _arrow(name, body, monads)
              for name, body in _mapping(doc.get("arrows", {}), "arrows").items()}
    spec = LoadedSpec(base, sorts, monads, arrows, source=source)
    spec.coproduct = [_lookup(monads, n, "monad") for n in _list(doc.get("coproduct", []), "coproduct")]
    spec.coequalizer = [_lookup(arrows, n, "arrow") for n in _list(doc.get("coequalizer", []), "coequalizer")]
    if spec.coequalizer and len(spec.coequalizer) != 2:
        raise SpecError("coequalizer needs exactly two arrows")
    spec.cointersection = [_lookup(arrows, n, "arrow")
                           for n in _list(doc.get("cointersection", []), "cointersection")]
    if "colimit" in doc:
        c = _mapping(doc["colimit"], "colimit")
        nodes = _list(c.get("nodes", []), "colimit.nodes")
        for n in nodes:
            _lookup(monads, n, "monad")
        names = _list(c.get("arrows", []), "colimit.arrows")
        terminal = c.get("terminal")
        if terminal is not None and terminal not in nodes:
            raise SpecError(f"colimit terminal {terminal!r} is not a node")
        spec.colimit = {"nodes": nodes, "arrows": names, "terminal": terminal}
        for n in names:
            a = _lookup(arrows, n, "arrow")
            if a.source_name not in nodes or a.target_name not in nodes:
                raise SpecError(f"arrow {n!r} leaves the colimit diagram")
    return spec


def _mapping(x, where):
    if not isinstance(x, dict):
        raise SpecError(f"{where} must be a mapping")
    return x


def _list(x, where):
    if not isinstance(x, list):
        raise SpecError(f"{where} must be a list")
    return x


def _lookup(table, name, what):
    if name not in table:
        raise SpecError(f"unknown {what} {name!r}")
    return table[name]


def _monad(name, body, base, sorts, depth=None):
    body = _mapping(body, f"monad {name}")
    kind = body.get("kind")
    try:
        if kind in BUILTIN:
            params = {k: v for k, v in body.items() if k != "kind"}
            if base == SORTED:
                params.setdefault("sorts", sorts)
            T = builtin_monad(kind, base, **params)
        elif kind == "presentation":
            T = _presented(body, base, sorts, depth)
        elif kind == "free":
            T = _graph_free(body, base)
        else:
            raise SpecError(f"monad {name}: unknown kind {kind!r}")
    except SpecError:
        raise
    except (ValueError, TypeError, KeyError) as exc:
        raise SpecError(f"monad {name}: {exc}") from exc
    T.spec_name = name
    return T


def _presented(body, base, sorts, depth=None):
    if base == GRAPH:
        raise SpecError("presentations are only supported over set and sorted bases")
    ops = _mapping(body.get("ops", {}), "ops")
    if base == SET:
        if not all(isinstance(v, int) for v in ops.values()):
            raise SpecError("single-sorted ops need integer arities")
        sig = Signature.single(ops)
    else:
        syms = []
        for op, d in ops.items():
            d = _mapping(d, f"op {op}")
            syms.append(OpSym(op, tuple(d.get("args", [])), d.get("sort", sorts[0])))
        sig = Signature(syms, sorts)
    rules = [parse_rule(r, sig) for r in _list(body.get("rules", []), "rules")]
    weights = body.get("weights")
    pres = Presentation(sig, rules, weights)
    return PresentedMonad(pres, depth if depth is not None else body.get("depth", 3))


def _graph_free(body, base):
    from .free import FreeMonad
    from .graphs import functor_H, functor_K, functor_L
    if base != GRAPH:
        raise SpecError("kind 'free' takes a graph functor and needs base: graph")
    functors = {"H": functor_H, "K": functor_K, "L": functor_L}
    name = body.get("functor")
    if name not in functors:
        raise SpecError(f"unknown graph functor {name!r}")
    return FreeMonad(functors[name](), budget=body.get("budget", 16))


class SpecArrow(MonadMorphism):
    source_name: str = ""
    target_name: str = ""


def _arrow(name, body, monads):
    body = _mapping(body, f"arrow {name}")
    src_name, tgt_name = body.get("from"), body.get("to")
    S, T = _lookup(monads, src_name, "monad"), _lookup(monads, tgt_name, "monad")
    try:
        f = _arrow_morphism(name, body, S, T)
    except SpecError:
        raise
    except (ValueError, KeyError) as exc:
        raise SpecError(f"arrow {name}: {exc}") from exc
    arrow = SpecArrow(f.source, f.target, f.fn, name)
    arrow.source_name, arrow.target_name = src_name, tgt_name
    return arrow


def _arrow_morphism(name, body, S, T):
    if S is T and not body.get("map") and not body.get("ops"):
        f = identity_morphism(S)
        f.name = name
        return f
    if "transformation" in body:
        from .free import FreeMonad, induced_morphism
        from .graphs import transformations_sigma_tau
        sigma, tau = transformations_sigma_tau()
        alpha = {"sigma": sigma, "tau": tau}.get(body["transformation"])
        if alpha is None or not (isinstance(S, FreeMonad) and isinstance(T, FreeMonad)):
            raise SpecError(f"arrow {name}: transformation must be sigma or tau between free monads")
        if S.H.name != "H" or T.H.name != "K":
            raise SpecError(f"arrow {name}: sigma and tau go from the free monad on H to that on K")
        return induced_morphism(S, T, alpha, name)
    if isinstance(S, ExceptionMonad):
        table = _mapping(body.get("map", {}), f"arrow {name} map")
        if isinstance(T, ExceptionMonad):
            return exception_map(S, T, table, name)
        if isinstance(T, PresentedMonad):
            return _exception_to_constants(name, S, T, table)
    if isinstance(S, PresentedMonad) and isinstance(T, PresentedMonad):
        return _renaming(name, S, T, _mapping(body.get("ops", {}), f"arrow {name} ops"))
    raise SpecError(f"arrow {name}: no supported way to map {S.name} to {T.name}")


def _exception_to_constants(name, S, T, table):
    for e, c in table.items():
        op = T.signature.ops.get(c)
        if op is None or op.arity != 0:
            raise SpecError(f"arrow {name}: {c!r} is not a constant of {T.name}")
    exceptions = S.E[S.E.sorts[0]]
    missing = [e for e in exceptions if e not in table]
    if missing:
        raise SpecError(f"arrow {name}: no constant for {missing}")

    def fn(X, sort, t):
        return Var(t.atom, sort) if t.index == 0 else App(table[t.atom])

    return MonadMorphism(S, T, fn, name)


def _renaming(name, S, T, ops):
    ren = {op: ops.get(op, op) for op in S.signature.ops}
    for a, b in ren.items():
        if b not in T.signature.ops or T.signature.ops[b].arity != S.signature.ops[a].arity:
            raise SpecError(f"arrow {name}: {a!r} has no matching operation {b!r} in {T.name}")

    def rename(t):
        if isinstance(t, App):
            return App(ren[t.op], tuple(rename(a) for a in t.args))
        return t

    def fn(X, sort, t):
        nf = T.presentation.normalize(rename(t))
        return OVERFLOW if T.depth is not None and depth(nf) > T.depth else nf

    return MonadMorphism(S, T, fn, name)
