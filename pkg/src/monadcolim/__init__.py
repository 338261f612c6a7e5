"""Colimits of finitary monads over finite sets, sorted sets and graphs."""

from .base import (
    Converged, Exhausted, FinGraph, FinSet, Inj, SortedFinSet, BaseMor, BaseObj,
    coequalize_morphisms, coproduct, factorize, quotient,
)
from .colimits import (
    DiagramOfMonads, check_colimit_universal, coequalize_monads, cointersection,
    colimit_weakly_terminal,
)
from .coproduct import (
    CoproductMonad, compact_pair_check, coproduct_chain, coproduct_monad, verify_universal,
)
from .errors import (
    BudgetExhausted, FillInFailure, NonMonicUnit, NotSeparated, NotWeaklyTerminal, SpecError,
)
from .factorization import factorize_monad_morphism
from .free import FreeMonad
from .functors import free_algebra, free_algebra_chain, initial_algebra, is_prefixpoint
from .graphs import demo_no_coequalizer, demo_no_cointersection, functor_H, functor_K, functor_L
from .laws import monad_law_check, morphism_law_check
from .monads import (
    ExceptionMonad, IdentityMonad, MonadMorphism, NonemptyPowersetMonad, ReaderMonad,
    TerminalMonad, WriterMonad, builtin_monad, exception_map,
)
from .presented import PresentedMonad
from .separated import unit_complement

__version__ = "0.1.0"

__all__ = [
    "Converged",
    "Exhausted",
    "FinGraph",
    "FinSet",
    "Inj",
    "SortedFinSet",
    "BaseMor",
    "BaseObj",
    "coequalize_morphisms",
    "coproduct",
    "factorize",
    "quotient",
    "DiagramOfMonads",
    "check_colimit_universal",
    "coequalize_monads",
    "cointersection",
    "colimit_weakly_terminal",
    "CoproductMonad",
    "compact_pair_check",
    "coproduct_chain",
    "coproduct_monad",
    "verify_universal",
    "BudgetExhausted",
    "FillInFailure",
    "NonMonicUnit",
    "NotSeparated",
    "NotWeaklyTerminal",
    "SpecError",
    "factorize_monad_morphism",
    "FreeMonad",
    "free_algebra",
    "free_algebra_chain",
    "initial_algebra",
    "is_prefixpoint",
    "demo_no_coequalizer",
    "demo_no_cointersection",
    "functor_H",
    "functor_K",
    "functor_L",
    "monad_law_check",
    "morphism_law_check",
    "ExceptionMonad",
    "IdentityMonad",
    "MonadMorphism",
    "NonemptyPowersetMonad",
    "ReaderMonad",
    "TerminalMonad",
    "WriterMonad",
    "builtin_monad",
    "exception_map",
    "PresentedMonad",
    "unit_complement",
]
