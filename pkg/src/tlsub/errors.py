"""Exception types raised by the tlsub modules."""


class TlsubError(Exception):
    """Base class for all tlsub errors."""


class NotAProjection(TlsubError):
    """A matrix handed to a projection-only routine fails P*=P or P^2=P."""


class NotTemperleyLieb(TlsubError):
    """The square of the anti-linear operator is not a scalar multiple of a unitary."""


class BadCoefficients(TlsubError):
    """Coefficient vector violates |a_i * a_{m-i+1}| = 1."""


class TauUndefined(TlsubError):
    """a_i * conj(a_{m-i+1}) is not a constant in {-1, +1}, so the sign tau
    (and with it the Fock-operator relation suite) is undefined."""


class MemoryBudgetExceeded(TlsubError):
    """The requested tensor-power level would allocate more scalars than the budget."""


class ProjectionDrift(TlsubError):
    """Accumulated numerical error destroyed a projection identity or a rank certificate."""


class TruncationTooSmall(TlsubError):
    """The representation-sum truncation does not cover the requested multiplicity."""


class UsageError(TlsubError):
    """Invalid command-line input; the message names the offending flag."""
