"""Gate-level simulation of the switch engine."""

from .builders import (CircuitMode, Stroke, conditional_medium_states, engine_circuit,
                       generalized_rotation, generalized_rotation_angles, literal_angles,
                       prep_circuit)
from .gates import (Circuit, Gate, GateKind, from_text, reduced_density, statevector_run,
                    to_text)
from .tomography import TomographyEstimate, sample_and_tomograph

__all__ = [
    "Circuit", "CircuitMode", "Gate", "GateKind", "Stroke", "TomographyEstimate",
    "conditional_medium_states", "engine_circuit", "from_text", "generalized_rotation",
    "generalized_rotation_angles", "literal_angles", "prep_circuit", "reduced_density",
    "sample_and_tomograph", "statevector_run", "to_text",
]
