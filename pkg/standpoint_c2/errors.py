"""Exception hierarchy for standpoint_c2.

Every error is a ValueError. Subclasses name the failure kind.
"""


class StandpointError(ValueError):
    """Base class for all library errors."""


class SignatureError(StandpointError):
    """Predicate arity or name-kind clash."""


class NotC2Error(StandpointError):
    """Input uses more than the two variables x, y or predicates of arity > 2."""


class NotFrugalError(StandpointError):
    """Input is not a frugal monodic C2 sentence."""


class FreeVariableError(StandpointError):
    """A sentence was expected but the formula has free variables."""


class UnassignedVariableError(StandpointError):
    """A free variable has no value in the assignment."""


class ModalOperatorError(StandpointError):
    """A standpoint modality reached plain first-order evaluation."""


class NonRigidError(StandpointError):
    """A designated E-predicate varies across precisifications."""


class ClosureTooLarge(StandpointError):
    """A permutational closure exceeds its configured guard."""


class NotPowerOfTwo(StandpointError):
    """Stacking needs 2^m precisifications."""


class NotAStackModel(StandpointError):
    """Extraction precondition failed or the extracted structure is not isomorphic."""


class NotAModel(StandpointError):
    """Witness selection was handed a structure that does not satisfy the sentence."""


class SearchBudgetExceeded(StandpointError):
    """Bounded search ran out of nodes before exhausting its space."""


class UntranslatableRIA(StandpointError):
    """Role chain of length >= 2 cannot be expressed with two variables."""


class IrregularRIA(StandpointError):
    """Role chain violates its order side conditions."""


class NotSHShaped(StandpointError):
    """Role chain is neither a hierarchy nor a transitivity axiom."""
