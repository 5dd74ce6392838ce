"""Composite pulse sequences that amplify control errors in two- and three-level systems.

The usual entry points are :func:`make_case1` / :func:`make_case2` for the
pulse families, :func:`compose` for N-pulse sequences, :func:`sweep` and
:func:`reproduce_table` for error profiles and FWHM tables.
"""

from .analysis import (
    DegenerateProfile,
    SweepConfig,
    SweepResult,
    fwhm,
    q_sensitivity,
    reproduce_table,
    scan_fwhm,
    sweep,
)
from .composite import (
    SequenceEvaluator,
    SequenceResult,
    compose,
    detuning_sequence_population,
    perturbative_population,
    pi_sequence_population,
    sequence_first_column,
)
from .core import (
    CayleyKlein,
    ErrorModel,
    Pulse,
    SequenceSpec,
    SU2FormError,
    apply_error,
    cayley_klein_of,
    flip_phase,
    unitarity_defect,
)
from .majorana import lift, populations_from_ck, populations_from_reduced, reduce
from .propagate import IntegrationError, IntegratorConfig, propagate, propagate_analytic, propagate_numeric
from .pulses import invert_sta, make_case1, make_case2, sta_angles, time_reverse_pair

__version__ = "0.1.0"

__all__ = [
    "CayleyKlein",
    "DegenerateProfile",
    "ErrorModel",
    "IntegrationError",
    "IntegratorConfig",
    "Pulse",
    "SU2FormError",
    "SequenceEvaluator",
    "SequenceResult",
    "SequenceSpec",
    "SweepConfig",
    "SweepResult",
    "apply_error",
    "cayley_klein_of",
    "compose",
    "detuning_sequence_population",
    "flip_phase",
    "fwhm",
    "invert_sta",
    "lift",
    "make_case1",
    "make_case2",
    "perturbative_population",
    "pi_sequence_population",
    "populations_from_ck",
    "populations_from_reduced",
    "propagate",
    "propagate_analytic",
    "propagate_numeric",
    "q_sensitivity",
    "reduce",
    "reproduce_table",
    "scan_fwhm",
    "sequence_first_column",
    "sta_angles",
    "sweep",
    "time_reverse_pair",
    "unitarity_defect",
]
