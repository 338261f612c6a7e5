"""The coproduct of two free unary monads grows by alternating layers.

Each level of the chain allows one more block of sigma or tau, so the
carrier at depth d holds every word over {sigma, tau} of length at most d.
"""

from __future__ import annotations

from monadcolim.base import FinSet, small_sets
from monadcolim.coproduct import CoproductMonad, coproduct_chain
from monadcolim.presented import PresentedMonad
from monadcolim.separated import unit_complement


def main(depth: int = 4):
    samples = small_sets(1)
    seps = [unit_complement(PresentedMonad.free({op: 1}, depth=depth), samples)
            for op in ("sigma", "tau")]
    A = FinSet(["a"])
    st = coproduct_chain(seps, A, budget=depth + 2, depth=depth)
    print(f"chain status {st.status}, component sizes per level {st.profile}")
    for d in range(depth + 1):
        R = CoproductMonad(seps, depth=d)
        print(f"depth {d}: {R.obj(A).size()} terms (2^{d + 1} - 1 = {2 ** (d + 1) - 1})")


if __name__ == "__main__":
    main()
