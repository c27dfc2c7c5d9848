"""Exception types. Every error carries enough text to name the failed check."""


class MemsdynError(ValueError):
    """Base class for all package errors."""


class ParamOutOfRange(MemsdynError):
    pass


class NegativeD(MemsdynError):
    pass


class NotHermitian(MemsdynError):
    pass


class TraceNotOne(MemsdynError):
    pass


class NotPSD(MemsdynError):
    pass


class Unphysical(NotPSD):
    """A parametrized state whose matrix has a negative eigenvalue."""


class NotXForm(MemsdynError):
    pass


class UnsupportedFamily(MemsdynError):
    pass


class OptimizerFailure(RuntimeError):
    """Discord refinement did not converge within its iteration budget."""
