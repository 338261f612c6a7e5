"""Command-line front end.

Exit codes: 0 success, 1 law violation, 2 unreadable or malformed input,
3 a monad is not separated, 4 a budget ran out or a result is truncated.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from .base import BaseObj, Converged
from .coproduct import Base, CoproductMonad, compact_pair_check, verify_universal
from .errors import BudgetExhausted, NotSeparated, SpecError
from .laws import monad_law_check, morphism_law_check, sample_objects
from .monads import Monad
from .presented import PresentedMonad
from .separated import unit_complement
from .specfile import LoadedSpec, load_spec

EXIT_OK, EXIT_LAW, EXIT_PARSE, EXIT_SEPARATED, EXIT_BUDGET = 0, 1, 2, 3, 4
DEFAULT_BUDGET = 16


@dataclass
class RunConfig:
    command: str
    specs: list = field(default_factory=list)
    budget: int | None = None
    depth: int | None = None
    sizes: tuple = (0, 1, 2)
    format: str = "text"
    seed: int = 0
    bound: int = 2

    def __post_init__(self):
        if self.budget is not None and self.budget < 1:
            raise SpecError("--budget must be at least 1")
        if self.depth is not None and self.depth < 0:
            raise SpecError("--depth must be nonnegative")
        if not self.sizes:
            raise SpecError("--sizes must not be empty")


@dataclass
class Outcome:
    code: int
    payload: dict
    lines: list


def _atoms(X: BaseObj) -> dict:
    return {s: [repr(a) for a in X[s]] for s in X.sorts}


def _samples(spec: LoadedSpec, cfg: RunConfig, cap: int | None = None):
    sizes = [k for k in cfg.sizes if cap is None or k <= cap] or [min(cfg.sizes)]
    return sample_objects(spec.base, sizes, spec.sorts or ("s", "t"))


def _load(cfg: RunConfig) -> LoadedSpec:
    if len(cfg.specs) != 1:
        raise SpecError("exactly one spec file is expected")
    return load_spec(cfg.specs[0], cfg.depth)


# ---------------------------------------------------------------------------
# commands


def cmd_check_laws(cfg: RunConfig) -> Outcome:
    spec = _load(cfg)
    samples = _samples(spec, cfg)
    reports = [monad_law_check(T, samples, seed=cfg.seed) for T in spec.monads.values()]
    reports += [morphism_law_check(f, samples) for f in spec.arrows.values()]
    payload = {"command": "check-laws", "reports": [r.as_dict() for r in reports]}
    code = EXIT_OK if all(r.ok for r in reports) else EXIT_LAW
    return Outcome(code, payload, [str(r) for r in reports])


def _depth_of(monads) -> int | None:
    ds = [T.depth for T in monads if isinstance(T, PresentedMonad) and T.depth is not None]
    return max(ds) if ds else None


def _as_term(r):
    from .terms import Var, substitute
    if isinstance(r, Base):
        return Var(r.atom)
    return substitute(r.elem, lambda v: _as_term(v.atom))


def _union_oracle(monads, A: BaseObj, d: int):
    """Normal forms over the union of free single-sorted signatures (or ``None``)."""
    from .terms import Presentation, Var, enumerate_normal_forms
    if not all(isinstance(T, PresentedMonad) and T.presentation.is_free for T in monads):
        return None
    sig = monads[0].signature
    for T in monads[1:]:
        sig = sig.union(T.signature)
    nfs = enumerate_normal_forms(Presentation(sig), {s: [Var(a, s) for a in A[s]] for s in A.sorts}, d)
    return {s: set(nfs.get(s, {})) for s in A.sorts}


def cmd_coproduct(cfg: RunConfig) -> Outcome:
    spec = _load(cfg)
    monads = spec.coproduct or list(spec.monads.values())
    samples = _samples(spec, cfg)
    seps = [unit_complement(T, samples) for T in monads]
    depth = cfg.depth if cfg.depth is not None else _depth_of(monads)
    budget = cfg.budget or DEFAULT_BUDGET
    R = CoproductMonad(seps, depth=depth, budget=budget)
    objects, lines, code = [], [f"coproduct {R.name}"], EXIT_OK
    for A in samples:
        st = R.chain(A)
        entry = {"object": repr(A), "profile": st.profile, "truncated": st.truncated}
        if isinstance(st.status, Converged):
            entry["status"] = f"Converged({st.status.level})"
            RA = R.obj(A)
            entry["carrier"] = _atoms(RA)
            lines.append(f"  {A!r}: {entry['status']}, {RA.size()} atoms"
                         + (", truncated" if st.truncated else "") + f": {RA!r}")
        else:
            entry["status"] = f"Exhausted({st.status.steps})"
            lines.append(f"  {A!r}: {entry['status']}, profile {st.profile}")
            code = EXIT_BUDGET
        if st.truncated:
            code = EXIT_BUDGET
            entry["per_depth"] = []
            for d in range(depth + 1):
                Rd = CoproductMonad(seps, depth=d, budget=budget)
                carrier = Rd.obj(A)
                row = {"depth": d, "atoms": carrier.size()}
                oracle = _union_oracle(monads, A, d)
                if oracle is not None:
                    ours = {s: {_as_term(r) for r in carrier[s]} for s in carrier.sorts}
                    row["oracle_atoms"] = sum(len(v) for v in oracle.values())
                    row["agrees_with_term_oracle"] = ours == oracle
                entry["per_depth"].append(row)
            lines.append(f"    per depth: {entry['per_depth']}")
        objects.append(entry)
    payload = {"command": "coproduct", "monad": R.name, "objects": objects}
    if code == EXIT_OK or all("carrier" in o for o in objects):
        small = [A for A in samples if A.size() <= 1]
        rep = verify_universal(R, small, bound=cfg.bound)
        payload["universal"] = rep.as_dict()
        lines.append(str(rep))
        if not rep.ok:
            code = EXIT_LAW
        if len(seps) == 2:
            pairs = []
            for A in small:
                cp = compact_pair_check(seps[0], seps[1], A, budget=min(budget, 4), depth=depth)
                pairs.append({"object": repr(A), "agree": cp.ok, "profiles": cp.profiles})
            payload["compact_pair"] = pairs
            lines.append(f"compact pair agreement: {all(p['agree'] for p in pairs)}")
    return Outcome(code, payload, lines)


def _reflection_report(name, res, samples, cfg, kind) -> Outcome:
    from .colimits import check_colimit_universal, cocone_check
    R = res.monad
    objects, lines = [], [f"{kind} {R.name}"]
    try:
        for A in samples:
            RA = R.obj(A)
            ref = R.reflection(A)
            objects.append({"object": repr(A), "carrier": _atoms(RA), "rounds": ref.rounds,
                            "profile": ref.profile})
            lines.append(f"  {A!r}: {RA!r} ({ref.rounds} refinement rounds)")
    except BudgetExhausted as exc:
        payload = {"command": name, "monad": R.name, "objects": objects,
                   "exhausted": str(exc), "profile": exc.profile}
        lines.append(f"budget exhausted: {exc}")
        lines.append(f"  growth profile: {exc.profile}")
        return Outcome(EXIT_BUDGET, payload, lines)
    reports = [monad_law_check(R, samples, seed=cfg.seed),
               morphism_law_check(res.projection, samples),
               cocone_check(res, samples),
               check_colimit_universal(res, [A for A in samples if A.size() <= 1], bound=cfg.bound)]
    payload = {"command": name, "monad": R.name, "objects": objects,
               "reports": [r.as_dict() for r in reports]}
    lines += [str(r) for r in reports]
    code = EXIT_OK if all(r.ok for r in reports) else EXIT_LAW
    if any(o.get("truncated") for o in objects) or any(R.obj(A).truncated for A in samples):
        code = max(code, EXIT_BUDGET)
    return Outcome(code, payload, lines)


def cmd_coequalizer(cfg: RunConfig) -> Outcome:
    from .colimits import coequalize_monads
    spec = _load(cfg)
    if len(spec.coequalizer) != 2:
        raise SpecError("the input file has no 'coequalizer' pair")
    p, q = spec.coequalizer
    res = coequalize_monads(p, q, budget=cfg.budget or DEFAULT_BUDGET)
    return _reflection_report("coequalizer", res, _samples(spec, cfg), cfg, "coequalizer")


def cmd_cointersection(cfg: RunConfig) -> Outcome:
    from .colimits import cointersection
    spec = _load(cfg)
    if not spec.cointersection:
        raise SpecError("the input file has no 'cointersection' list")
    samples = _samples(spec, cfg)
    res = cointersection(spec.cointersection, samples, budget=cfg.budget or DEFAULT_BUDGET)
    return _reflection_report("cointersection", res, samples, cfg, "cointersection")


def cmd_colimit(cfg: RunConfig) -> Outcome:
    from .colimits import DiagramOfMonads, coequalize_monads, colimit_weakly_terminal
    spec = _load(cfg)
    if spec.colimit is None:
        raise SpecError("the input file has no 'colimit' section")
    names = spec.colimit["nodes"]
    index = {n: i for i, n in enumerate(names)}
    d = DiagramOfMonads([spec.monads[n] for n in names])
    for a in spec.colimit["arrows"]:
        f = spec.arrows[a]
        d.add(index[f.source_name], index[f.target_name], f)
    budget = cfg.budget or DEFAULT_BUDGET
    samples = _samples(spec, cfg)
    terminal = spec.colimit["terminal"]
    if terminal is None:
        terminal = next((n for n in names if len(d.paths_to(index[n])) == len(names)), None)
    if terminal is not None:
        res = colimit_weakly_terminal(d, index[terminal], budget)
        return _reflection_report("colimit", res, samples, cfg, "colimit")
    # coproduct of the nodes, then the coequalizer of the pair induced by the arrows
    seps = [unit_complement(T, samples) for T in d.nodes]
    depth = cfg.depth if cfg.depth is not None else _depth_of(d.nodes)
    C = CoproductMonad(seps, depth=depth, budget=budget)
    if not d.arrows:
        res = coequalize_monads(_identity(C), _identity(C), budget)
    else:
        src = CoproductMonad([unit_complement(d.nodes[a.source], samples) for a in d.arrows],
                             depth=depth, budget=budget)
        p = src.copair(C, [a.morphism.then(C.injection(a.target)) for a in d.arrows], "p")
        q = src.copair(C, [C.injection(a.source) for a in d.arrows], "q")
        res = coequalize_monads(p, q, budget)
    return _reflection_report("colimit", res, samples, cfg, "colimit")


def _identity(T: Monad):
    from .monads import identity_morphism
    return identity_morphism(T)


def cmd_counterexample(cfg: RunConfig) -> Outcome:
    from .graphs import demo_no_coequalizer, demo_no_cointersection
    budget = cfg.budget if cfg.budget is not None else 3
    coeq = demo_no_coequalizer(budget)
    coint = demo_no_cointersection(budget)
    L = coeq["L"]
    lines = [
        "functor  seed            status         vertex counts",
        *[f"H        {r['label']:<15} {r['status']:<14} {r['vertex_counts']}" for r in coeq["H"]],
        *[f"K        {r['label']:<15} {r['status']:<14} {r['vertex_counts']}" for r in coeq["K"]],
        f"L        one loop        {L['status']:<14} {L['vertex_counts']}",
        f"L strictly increasing: {L['strictly_increasing']}; growth law 1 + 2^loops: {L['growth_law_holds']}",
        "split epis have sections: "
        + str(all(c["sigma0_section"] and c["tau0_section"] for c in coint["section_checks"])),
        "componentwise pushout equals L: " + str(all(c["equal"] for c in coint["pushout_equals_L"])),
        f"verdict: {coeq['verdict']}",
    ]
    payload = {"command": "counterexample", "budget": budget, "no_coequalizer": coeq,
               "no_cointersection": coint}
    return Outcome(EXIT_OK, payload, lines)


COMMANDS = {
    "check-laws": cmd_check_laws,
    "coproduct": cmd_coproduct,
    "coequalizer": cmd_coequalizer,
    "cointersection": cmd_cointersection,
    "colimit": cmd_colimit,
    "counterexample": cmd_counterexample,
}


def _sizes(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="monadcolim",
                                 description="Colimits of finitary monads on finite base objects.")
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("specs", nargs="*", help="YAML spec file (not needed for counterexample)")
    ap.add_argument("--budget", type=int, default=None)
    ap.add_argument("--depth", type=int, default=None)
    ap.add_argument("--sizes", type=_sizes, default=(0, 1, 2))
    ap.add_argument("--format", choices=("text", "structured"), default="text")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--bound", type=int, default=2, help="carrier bound for universal checks")
    return ap


def run(argv=None) -> Outcome:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(args.command, args.specs, args.budget, args.depth, args.sizes,
                        args.format, args.seed, args.bound)
        return COMMANDS[args.command](cfg)
    except SpecError as exc:
        return Outcome(EXIT_PARSE, {"error": "parse", "detail": str(exc)}, [f"error: {exc}"])
    except NotSeparated as exc:
        return Outcome(EXIT_SEPARATED, {"error": "not separated", "detail": str(exc)},
                       [f"not separated: {exc}"])
    except BudgetExhausted as exc:
        return Outcome(EXIT_BUDGET, {"error": "budget exhausted", "detail": str(exc),
                                     "profile": exc.profile},
                       [f"budget exhausted: {exc}", f"  growth profile: {exc.profile}"])


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = run(argv)
    if args.format == "structured":
        print(json.dumps({"exit_code": out.code, **out.payload}, indent=2, default=str))
    else:
        print("\n".join(out.lines))
    return out.code


if __name__ == "__main__":
    sys.exit(main())
