"""Quantum evolution generators built from Hopf-algebra adjoint actions."""

__version__ = "0.1.0"

from .classify import gksl_decompose, positivity_witness, preservation_tests
from .constraints import lindblad_feasibility, solve_prescription
from .dynamics import (
    PRESETS,
    HamiltonianSpec,
    PrescriptionCoeffs,
    build_generator,
    evolve,
    hamiltonian_for,
)
from .models import MODEL_IDS, audit_model, build_model
from .modelfile import load_model

__all__ = [
    "__version__",
    "MODEL_IDS",
    "PRESETS",
    "HamiltonianSpec",
    "PrescriptionCoeffs",
    "audit_model",
    "build_generator",
    "build_model",
    "evolve",
    "gksl_decompose",
    "hamiltonian_for",
    "lindblad_feasibility",
    "load_model",
    "positivity_witness",
    "preservation_tests",
    "solve_prescription",
]
