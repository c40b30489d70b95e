"""Three-qubit Bell nonlocality toolkit.

Evaluates and maximizes the Svetlichny and NS2 99th-facet Bell operators
over projective measurements, computes entanglement and discord measures,
applies single-qubit noise channels, and decides hybrid-local-model
membership of behaviors by linear programming.
"""

from . import bell, channels, entangle, polytope, qalg, states, workflows

__all__ = ["bell", "channels", "entangle", "polytope", "qalg", "states", "workflows"]

__version__ = "0.1.0"
