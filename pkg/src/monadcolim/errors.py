"""Exception types raised by the constructions."""

from __future__ import annotations


class MonadColimError(Exception):
    """Base class for every error raised by this package."""


class MixedVariants(MonadColimError):
    """Objects from different base-category variants were combined."""


class NonMonoInChain(MonadColimError):
    """A chain link that should be injective is not."""


class MonoViolation(MonadColimError):
    """An endofunctor claimed to preserve monos mapped one to a non-mono."""


class BudgetExhausted(MonadColimError):
    """A chain or closure did not stabilise within its step/atom budget.

    ``profile`` carries the growth profile observed so far so that the
    divergence evidence stays inspectable.
    """

    def __init__(self, message: str, profile=None):
        super().__init__(message)
        self.profile = list(profile or [])


class NotSeparated(MonadColimError):
    """A monad has no unit complement on the sampled objects."""


class NonMonicUnit(NotSeparated):
    """The unit of a monad is not injective on some sampled object."""


class NonTerminatingRules(MonadColimError):
    """A rewrite step failed to decrease the termination measure."""


class FillInFailure(MonadColimError):
    """The diagonal fill-in of a factorization is not well defined."""


class NotWeaklyTerminal(MonadColimError):
    """The chosen node of a diagram does not receive an arrow from every node."""


class SpecError(MonadColimError):
    """A monad/diagram spec file could not be parsed."""
