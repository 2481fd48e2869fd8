"""Exception hierarchy.

Domain errors are conditions of the mathematical input (a prime equal to the
characteristic, a field that is not small, ...).  Resource errors mean an exact
answer could not be produced within the configured effort.  The CLI maps the
two families to distinct exit codes.
"""


class MinkcremError(Exception):
    """Base class for every error raised by this package."""


class DomainError(MinkcremError):
    pass


class ResourceLimit(MinkcremError):
    pass


class FactorizationBudgetExceeded(ResourceLimit):
    def __init__(self, n, budget):
        super().__init__(f"cofactor {n} survived a factorization budget of {budget} iterations")
        self.n = n
        self.budget = budget


class CharacteristicExclusion(DomainError):
    def __init__(self, ell, char):
        super().__init__(f"ell={ell} equals the characteristic of the field")
        self.ell = ell
        self.char = char


class UnderdeterminedField(DomainError):
    pass


class LargeTMiss(DomainError):
    """The prime is absent from an explicit table whose untabulated primes all have t > 6.

    The bound exponent at such a prime is 0; only the exact value of t is unknown.
    """

    def __init__(self, ell):
        super().__init__(f"ell={ell} is not tabulated; only t > 6 is known")
        self.ell = ell


class NotSmall(DomainError):
    pass


class InadmissibleInvariants(DomainError):
    pass


class InvalidPrimePower(DomainError):
    pass


class DescriptorParseError(DomainError):
    def __init__(self, text, pos, msg):
        super().__init__(f"{msg} at position {pos} in {text!r}")
        self.text = text
        self.pos = pos


class TableFormatError(DomainError):
    """Malformed or unreadable explicit invariant table."""


class PreconditionError(DomainError):
    pass


class SizeLimit(DomainError):
    pass


class InvariantViolation(MinkcremError):
    """An internal consistency check failed; this is a bug, not bad input."""
