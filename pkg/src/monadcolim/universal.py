"""Exhaustive search for algebra homomorphisms out of a finite carrier.

The solver knows nothing about how a carrier was built: it assigns a value
to every atom and prunes with whatever constraints are fully assigned.  The
assignment order is chosen greedily so that constraints complete early.  It is the independent side of the existence/uniqueness
checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .base import BaseObj


@dataclass
class Constraint:
    needed: frozenset          # (sort, atom) pairs
    check: Callable[[dict], bool]
    label: str = ""


def solve_maps(dom: BaseObj, cod: BaseObj, constraints: Sequence[Constraint],
               limit: int = 2) -> list[dict]:
    """Maps ``dom -> cod`` (sortwise, as ``{(sort, atom): value}``) satisfying all constraints.

    Stops after ``limit`` solutions.
    """
    atoms = [(s, a) for s in dom.sorts for a in dom[s]]
    known = set(atoms)
    for c in constraints:
        if any(k not in known for k in c.needed):
            raise KeyError(f"constraint {c.label} mentions atoms outside the domain")
    order = _greedy_order(atoms, constraints)
    pos = {k: i for i, k in enumerate(order)}
    buckets: list[list[Constraint]] = [[] for _ in order]
    always: list[Constraint] = []
    for c in constraints:
        if not c.needed:
            always.append(c)
            continue
        buckets[max(pos[k] for k in c.needed)].append(c)
    g: dict = {}
    if not all(c.check(g) for c in always):
        return []
    out: list[dict] = []

    def go(i: int):
        if len(out) >= limit:
            return
        if i == len(order):
            out.append(dict(g))
            return
        s, a = order[i]
        for v in cod[s]:
            g[(s, a)] = v
            if all(c.check(g) for c in buckets[i]):
                go(i + 1)
            if len(out) >= limit:
                break
        g.pop((s, a), None)

    go(0)
    return out


def _greedy_order(atoms: list, constraints: Sequence[Constraint]) -> list:
    """Next atom: the one completing the most constraints, then the one
    touching the most partly assigned constraints, then carrier order."""
    needed = [c.needed for c in constraints if c.needed]
    missing = [set(n) for n in needed]
    touching: dict = {k: [] for k in atoms}
    for i, m in enumerate(missing):
        for k in m:
            touching[k].append(i)
    rank = {k: i for i, k in enumerate(atoms)}

    def score(k):
        done = sum(1 for i in touching[k] if len(missing[i]) == 1)
        partial = sum(1 for i in touching[k] if len(missing[i]) < len(needed[i]))
        return (-done, -partial, rank[k])

    left = set(atoms)
    order = []
    while left:
        k = min(left, key=score)
        left.discard(k)
        order.append(k)
        for i in touching[k]:
            missing[i].discard(k)
    return order
