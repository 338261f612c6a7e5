"""Loop functors on graphs: H and K settle after one step while L explodes.

The identification of the two copies in K X is L X, and the free-algebra
chain of L on the one-loop graph has 1, 3, 9, 513 vertices.  The next stage
would have 1 + 2^513 vertices.  The reflection computing the coequalizer of
the induced free monad maps keeps growing until the budget runs out.
"""

from __future__ import annotations

from monadcolim.colimits import coequalize_monads
from monadcolim.errors import BudgetExhausted
from monadcolim.graphs import demo_no_coequalizer, free_monads_H_K, one_loop_graph


def main(budget: int = 3):
    rep = demo_no_coequalizer(budget)
    for name in ("H", "K"):
        for row in rep[name]:
            print(f"{name}  {row['label']:<16} {row['status']:<14} {row['vertex_counts']}")
    L = rep["L"]
    print(f"L  one loop         {L['status']:<14} {L['vertex_counts']}")
    _, _, sb, tb = free_monads_H_K()
    res = coequalize_monads(sb, tb, budget=budget)
    try:
        res.monad.obj(one_loop_graph())
    except BudgetExhausted as exc:
        print(f"reflection: {exc}; profile {exc.profile}")
    print(rep["verdict"])


if __name__ == "__main__":
    main()
