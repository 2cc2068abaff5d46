"""
Exceptions raised by convg.

Input and precondition failures derive from ``InputError`` (and therefore
``ValueError``). A ``FalsificationError`` means a postcondition that a
theorem guarantees did not hold; the command line maps it to exit code 3.
"""


class ConvergenceError(Exception):
    """Base class for every error raised by convg."""


class InputError(ConvergenceError, ValueError):
    """A caller supplied something the operation cannot accept."""


class FalsificationError(ConvergenceError, AssertionError):
    """A theorem-guaranteed postcondition failed on a concrete instance."""


# core filters
class EmptyBase(InputError):
    pass


class CarrierMismatch(InputError):
    pass


class EmptyPreimage(InputError):
    pass


class NoFIP(InputError):
    pass


# nets
class EmptyDomain(InputError):
    pass


class NotDirected(InputError):
    pass


class DomainMismatch(InputError):
    pass


# spaces and constructions
class NotAConvergence(InputError):
    pass


class EmptySubset(InputError):
    pass


class InvalidPartition(InputError):
    pass


class ShapeMismatch(InputError):
    pass


class CoverGap(InputError):
    pass


class Disagreement(InputError):
    pass


class HypothesisViolation(InputError):
    pass


class NotContinuous(InputError):
    pass


# compactness
class NotValidated(InputError):
    pass


class NotIsotone(InputError):
    pass


class PreconditionFailed(InputError):
    pass


# sizes
class TooLarge(InputError):
    pass


# space documents
class SchemaError(InputError):
    pass


class UnknownLabel(InputError):
    pass


class DuplicateKey(InputError):
    pass


class BadSubsetKey(InputError):
    pass
