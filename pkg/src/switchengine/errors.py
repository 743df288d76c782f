"""Exception types shared across the package."""


class DomainError(ValueError):
    """A scalar argument lies outside its admissible range."""


class NotHermitian(ValueError):
    """A matrix expected to be Hermitian is not, beyond tolerance."""


class DimensionMismatch(ValueError):
    """Operands have incompatible shapes."""


class NotPositive(ValueError):
    """A constructed density operator has a negative eigenvalue."""


class AngleDomainError(ValueError):
    """A circuit rotation angle would be complex for the requested parameters."""


class CircuitWidthError(ValueError):
    """A preparation needs more qubits than the simulator allows."""


class InfeasibleError(ValueError):
    """No parameter value satisfies the heat-engine constraints."""


class ConsistencyError(RuntimeError):
    """Two independent evaluations of the same quantity disagree."""
