"""Coproduct of two exception monads, built from unit complements.

Run with ``python3 demos/exception_coproduct.py``.
"""

from __future__ import annotations

from monadcolim.base import FinSet, small_sets
from monadcolim.coproduct import CoproductMonad, verify_universal
from monadcolim.laws import monad_law_check
from monadcolim.monads import builtin_monad
from monadcolim.separated import unit_complement


def main():
    samples = small_sets(2)
    E = builtin_monad("exception", exceptions=["e1", "e2"])
    F = builtin_monad("exception", exceptions=["f"])
    R = CoproductMonad([unit_complement(E, samples), unit_complement(F, samples)])
    for A in small_sets(3):
        st = R.chain(A)
        print(f"{A!r:>20}  {st.status}  profile {st.profile}  carrier {R.obj(A)!r}")
    print(monad_law_check(R, samples))
    print(verify_universal(R, [FinSet(["a"])], bound=2))


if __name__ == "__main__":
    main()
