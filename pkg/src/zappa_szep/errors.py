"""Exception types shared across the package."""

from __future__ import annotations


class ZappaSzepError(Exception):
    """Base class for every error raised by this package."""


class ShapeMismatch(ZappaSzepError, ValueError):
    pass


class InvalidParameter(ZappaSzepError, ValueError):
    pass


class IndexOutOfRange(ZappaSzepError, IndexError):
    pass


class NotAGroup(ZappaSzepError):
    """A multiplication table failed one of the group axioms.

    ``reason`` is one of ``no-identity``, ``not-latin``, ``not-associative``,
    ``no-inverse``; ``witness`` is a tuple of element indices exhibiting it.
    """

    def __init__(self, reason: str, witness: tuple = ()):
        self.reason = reason
        self.witness = tuple(int(w) for w in witness)
        super().__init__(f"{reason} (witness {self.witness})")


class NotASubgroup(ZappaSzepError):
    pass


class NotAbelian(ZappaSzepError):
    pass


class NotAHomomorphism(ZappaSzepError):
    def __init__(self, witness: tuple = ()):
        self.witness = tuple(int(w) for w in witness)
        super().__init__(f"map is not multiplicative at {self.witness}")


class InvalidMatchedPair(ZappaSzepError):
    def __init__(self, report):
        self.report = report
        super().__init__(f"matched pair fails {', '.join(report.failed())}")


class ProductNotAGroup(ZappaSzepError):
    pass


class NotExactFactorization(ZappaSzepError):
    pass


class NotAnAction(ZappaSzepError):
    pass


class InconsistentRules(ZappaSzepError):
    pass


class IncompleteRules(ZappaSzepError):
    pass


class NotAbelianInputs(ZappaSzepError):
    pass


class DomainMismatch(ZappaSzepError):
    pass


class NotCentral(ZappaSzepError):
    def __init__(self, element: int):
        self.element = int(element)
        super().__init__(f"g^-1 theta(g) is not central for g = {self.element}")


class ConditionsFailed(ZappaSzepError):
    def __init__(self, report):
        self.report = report
        super().__init__(f"quadruple fails {', '.join(report.failed())}")


class MixedSources(ZappaSzepError):
    pass


class TheoremViolation(ZappaSzepError):
    def __init__(self, message: str, report=None):
        self.report = report
        super().__init__(message)


class NotOddPrime(InvalidParameter):
    pass


class GuardExceeded(ZappaSzepError):
    pass


class ClaimFailed(ZappaSzepError):
    def __init__(self, report):
        self.report = report
        names = [c.name for c in report.claims if not c.passed]
        super().__init__(f"claims failed: {', '.join(names)}")
