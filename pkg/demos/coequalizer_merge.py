"""Coequalizer of two exception maps by congruence closure on the free algebra."""

from __future__ import annotations

from monadcolim.base import small_sets
from monadcolim.colimits import check_colimit_universal, cocone_check, coequalize_monads
from monadcolim.monads import builtin_monad, exception_map


def main():
    S = builtin_monad("exception", exceptions=["e"])
    T = builtin_monad("exception", exceptions=["f1", "f2"])
    p = exception_map(S, T, {"e": "f1"}, "p")
    q = exception_map(S, T, {"e": "f2"}, "q")
    res = coequalize_monads(p, q)
    for A in small_sets(3):
        ref = res.monad.reflection(A)
        print(f"{A!r:>20}  |T A| = {T.obj(A).size()}  ->  {ref.carrier!r}  ({ref.rounds} rounds)")
    print(cocone_check(res, small_sets(2)))
    print(check_colimit_universal(res, small_sets(1), bound=2))


if __name__ == "__main__":
    main()
