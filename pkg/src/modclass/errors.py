"""Exception hierarchy for modclass."""


class ModclassError(Exception):
    """Base class for all errors raised by the package."""


class InvalidSpec(ModclassError):
    pass


class AxiomViolation(ModclassError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class CapExceeded(ModclassError):
    """A configured size cap was hit; the computation is out of desk scale."""


class SizeLimit(CapExceeded):
    pass


class LatticeTooLarge(CapExceeded):
    pass


class HomSpaceTooLarge(CapExceeded):
    pass


class HullPostconditionFailure(ModclassError):
    pass


class ChainViolation(ModclassError):
    pass


class PreconditionViolated(ModclassError):
    pass


class NotCommutative(ModclassError):
    pass


class RingMismatch(ModclassError):
    pass
