"""Exception hierarchy.

Every domain failure carries a stable ``name`` used by the CLI reports.
"""


class SuperCharError(Exception):
    """Base class of all domain errors raised by the package."""

    @property
    def name(self) -> str:
        return type(self).__name__


class NotInvariant(SuperCharError):
    pass


class NotScalar(SuperCharError):
    pass


class NotProportional(SuperCharError):
    pass


class SignatureMismatch(SuperCharError):
    pass


class NonDominant(SuperCharError):
    pass


class NonIntegral(SuperCharError):
    pass


class Atypical(SuperCharError):
    pass


class RootsCoincide(SuperCharError):
    pass


class NotBranchCompatible(SuperCharError):
    pass


class MultiplicityAmbiguity(SuperCharError):
    pass


class IncompleteDecomposition(SuperCharError):
    pass


class ConsistencyFailure(SuperCharError):
    pass


class ParseError(SuperCharError):
    pass


class UnsupportedFormat(SuperCharError):
    pass
