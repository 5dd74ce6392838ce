"""Domain types and the small amount of matrix algebra shared by every module.

Units: the pulse width ``T`` is fixed to 1 and ``hbar = 1``.  Times are
multiples of ``T``; Rabi frequencies and detunings are in rad per ``T``.

Error magnitudes (``ErrorModel.magnitude``) may be scalars or 1-D arrays.  An
array magnitude turns every downstream propagator into a stack of matrices
with a leading batch axis, which is how the sweeps evaluate a whole error grid
in one integration.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

ArrayLike = Union[float, np.ndarray]
Envelope = Callable[[np.ndarray], np.ndarray]

CASE1 = "case1"
CASE2 = "case2"

RABI_GLOBAL = "rabi_global"
DETUNING_STATIC = "detuning_static"
RABI_ARM = "rabi_arm"

FIXED_P = "fixed_p"
FIXED_S = "fixed_s"
ALTERNATING_START_S = "alternating_start_s"

SAME = "same"
ALTERNATING = "alternating"
FIXED_ORDER = "fixed"
ALTERNATE_TIME_REVERSAL = "alternate_time_reversal"


class SU2FormError(ValueError):
    """Raised when a 2x2 matrix is not of the Cayley-Klein form [[a, b], [-b*, a*]]."""


def zero_envelope(t):
    return np.zeros_like(np.asarray(t, dtype=float))


def constant_envelope(value: float) -> Envelope:
    def envelope(t):
        return np.full_like(np.asarray(t, dtype=float), value)

    return envelope


def _scaled(scale, values):
    # scalar scale keeps the shape of `values`; array scale adds a leading batch axis
    scale = np.asarray(scale, dtype=float)
    if scale.ndim == 0:
        return float(scale) * values
    return np.multiply.outer(scale, values)


@dataclass(frozen=True, eq=False)
class Pulse:
    """A single control segment on the window ``[t0, tf]``.

    ``omega_p``, ``omega_s`` and ``delta`` are the bare envelopes.  The
    perturbations and the phase flip live in ``sign``, ``scale_p``, ``scale_s``
    and ``detuning_shift`` so that the bare shapes stay untouched; use
    :meth:`rabi_p`, :meth:`rabi_s` and :meth:`detuning` to evaluate the
    effective values.

    For ``case1`` pulses the pump and Stokes envelopes coincide (the reduced
    pair ``(Omega, Delta)``), ``delta`` is ``Delta = Delta_p = -Delta_s`` and
    ``Delta_1 = 2 Delta``.  For ``case2`` pulses ``delta`` is identically zero.
    """

    kind: str
    t0: float
    tf: float
    omega_p: Envelope
    omega_s: Envelope
    delta: Envelope = zero_envelope
    label: str = ""
    constant: bool = False
    sign: float = 1.0
    scale_p: ArrayLike = 1.0
    scale_s: ArrayLike = 1.0
    detuning_shift: ArrayLike = 0.0

    def __post_init__(self):
        if self.kind not in (CASE1, CASE2):
            raise ValueError(f"unknown pulse kind {self.kind!r}")
        if not self.tf > self.t0:
            raise ValueError(f"empty window [{self.t0}, {self.tf}]")
        if self.kind == CASE1:
            if self.omega_s is not self.omega_p:
                raise ValueError("case1 pulses share one Rabi envelope")
            if not np.array_equal(np.asarray(self.scale_p), np.asarray(self.scale_s)):
                raise ValueError("case1 pulses scale both arms together")
        elif self.delta is not zero_envelope or np.any(np.asarray(self.detuning_shift) != 0):
            raise ValueError("case2 pulses are one-photon resonant (no detuning)")

    @classmethod
    def case1(cls, omega: Envelope, delta: Envelope, t0: float, tf: float, label: str = "",
              constant: bool = False) -> "Pulse":
        return cls(CASE1, float(t0), float(tf), omega, omega, delta, label=label, constant=constant)

    @classmethod
    def case2(cls, omega_p: Envelope, omega_s: Envelope, t0: float, tf: float, label: str = "",
              constant: bool = False) -> "Pulse":
        return cls(CASE2, float(t0), float(tf), omega_p, omega_s, label=label, constant=constant)

    @property
    def duration(self) -> float:
        return self.tf - self.t0

    @property
    def batch_shape(self) -> tuple:
        return np.broadcast(np.asarray(self.scale_p), np.asarray(self.scale_s),
                            np.asarray(self.detuning_shift)).shape

    def rabi_p(self, t):
        return _scaled(np.multiply(self.sign, self.scale_p), self.omega_p(np.asarray(t, dtype=float)))

    def rabi_s(self, t):
        return _scaled(np.multiply(self.sign, self.scale_s), self.omega_s(np.asarray(t, dtype=float)))

    def detuning(self, t):
        base = self.delta(np.asarray(t, dtype=float))
        shift = np.asarray(self.detuning_shift, dtype=float)
        if shift.ndim == 0:
            return base + float(shift)
        return np.add.outer(shift, base)

    def replace(self, **changes) -> "Pulse":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True, eq=False)
class ErrorModel:
    """Perturbation channel applied to each pulse of a sequence.

    ``rabi_global`` scales both Rabi envelopes by ``1 + magnitude``;
    ``detuning_static`` adds ``magnitude`` to the detuning; ``rabi_arm`` scales
    a single arm, chosen by ``assignment``.
    """

    channel: str
    magnitude: ArrayLike = 0.0
    assignment: str = FIXED_P

    def __post_init__(self):
        if self.channel not in (RABI_GLOBAL, DETUNING_STATIC, RABI_ARM):
            raise ValueError(f"unknown error channel {self.channel!r}")
        if self.assignment not in (FIXED_P, FIXED_S, ALTERNATING_START_S):
            raise ValueError(f"unknown error assignment {self.assignment!r}")

    @classmethod
    def rabi(cls, lam: ArrayLike) -> "ErrorModel":
        return cls(RABI_GLOBAL, lam)

    @classmethod
    def detuning(cls, delta: ArrayLike) -> "ErrorModel":
        return cls(DETUNING_STATIC, delta)

    @classmethod
    def arm(cls, eta: ArrayLike, assignment: str = FIXED_P) -> "ErrorModel":
        return cls(RABI_ARM, eta, assignment)

    def with_magnitude(self, magnitude: ArrayLike) -> "ErrorModel":
        return dataclasses.replace(self, magnitude=magnitude)

    def arm_for(self, pulse_index: int) -> str:
        """Arm (``"p"`` or ``"s"``) perturbed on the pulse at 1-based ``pulse_index``."""
        if self.assignment == FIXED_P:
            return "p"
        if self.assignment == FIXED_S:
            return "s"
        return "s" if pulse_index % 2 == 1 else "p"


@dataclass(frozen=True)
class SequenceSpec:
    """N contiguous copies of one pulse under a phase policy and an ordering policy.

    With ``phase_policy="alternating"`` every even-numbered pulse has both Rabi
    envelopes negated.  With ``order_policy="alternate_time_reversal"`` every
    even-numbered pulse is also time reversed (case2 only).
    """

    n_pulses: int
    phase_policy: str = SAME
    order_policy: str = FIXED_ORDER

    def __post_init__(self):
        if int(self.n_pulses) != self.n_pulses or self.n_pulses < 1:
            raise ValueError("n_pulses must be a positive integer")
        if self.phase_policy not in (SAME, ALTERNATING):
            raise ValueError(f"unknown phase policy {self.phase_policy!r}")
        if self.order_policy not in (FIXED_ORDER, ALTERNATE_TIME_REVERSAL):
            raise ValueError(f"unknown order policy {self.order_policy!r}")


@dataclass(frozen=True, eq=False)
class CayleyKlein:
    """Cayley-Klein pair of an SU(2) propagator ``[[a, b], [-b*, a*]]``."""

    a: complex | np.ndarray
    b: complex | np.ndarray

    def __post_init__(self):
        norm = np.abs(self.a) ** 2 + np.abs(self.b) ** 2
        if np.any(np.abs(norm - 1.0) > 1e-8):
            raise ValueError(f"|a|^2 + |b|^2 = {norm} is not 1")

    @property
    def a_r(self):
        return np.real(self.a)

    @property
    def a_i(self):
        return np.imag(self.a)

    def matrix(self) -> np.ndarray:
        return su2_matrix(self.a, self.b)


def su2_matrix(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return np.stack([np.stack([a, b], -1), np.stack([-b.conj(), a.conj()], -1)], -2)


def unitarity_defect(U) -> float | np.ndarray:
    """Max-norm of ``U^dagger U - I``; stacks of matrices give one value per matrix."""
    U = np.asarray(U, dtype=complex)
    if U.ndim < 2 or U.shape[-1] != U.shape[-2] or U.shape[-1] not in (2, 3):
        raise ValueError(f"expected square 2x2 or 3x3 matrices, got shape {U.shape}")
    gram = np.swapaxes(U.conj(), -1, -2) @ U
    defect = np.abs(gram - np.eye(U.shape[-1])).max(axis=(-2, -1))
    return float(defect) if defect.ndim == 0 else defect


def cayley_klein_of(U, tol: float = 1e-8) -> CayleyKlein:
    """Read ``(a, b)`` off a 2x2 unitary, rejecting anything outside SU(2)."""
    U = np.asarray(U, dtype=complex)
    if U.shape[-2:] != (2, 2):
        raise ValueError(f"expected 2x2 matrices, got shape {U.shape}")
    if np.any(np.asarray(unitarity_defect(U)) > tol):
        raise SU2FormError("matrix is not unitary")
    a, b = U[..., 0, 0], U[..., 0, 1]
    if np.any(np.abs(U[..., 1, 0] + b.conj()) > tol) or np.any(np.abs(U[..., 1, 1] - a.conj()) > tol):
        raise SU2FormError("matrix is unitary but not of the form [[a, b], [-b*, a*]]")
    if a.ndim == 0:
        return CayleyKlein(complex(a), complex(b))
    return CayleyKlein(a, b)


def flip_phase(pulse: Pulse) -> Pulse:
    """Shift the carrier phase by pi, i.e. negate both Rabi envelopes."""
    return pulse.replace(sign=-pulse.sign)


def apply_error(pulse: Pulse, error: ErrorModel | None, pulse_index: int = 1) -> Pulse:
    """Return ``pulse`` perturbed by ``error`` at 1-based position ``pulse_index``."""
    if pulse_index < 1:
        raise ValueError("pulse_index is 1-based")
    if error is None:
        return pulse
    factor = 1.0 + np.asarray(error.magnitude, dtype=float)
    if error.channel == RABI_GLOBAL:
        return pulse.replace(scale_p=pulse.scale_p * factor, scale_s=pulse.scale_s * factor)
    if error.channel == DETUNING_STATIC:
        if pulse.kind != CASE1:
            raise ValueError("static detuning errors are defined for case1 pulses only")
        return pulse.replace(detuning_shift=pulse.detuning_shift + np.asarray(error.magnitude, dtype=float))
    if pulse.kind == CASE1:
        raise ValueError("single-arm Rabi errors need independent pump and Stokes envelopes (case2)")
    if error.arm_for(pulse_index) == "p":
        return pulse.replace(scale_p=pulse.scale_p * factor)
    return pulse.replace(scale_s=pulse.scale_s * factor)
