"""Propagators: fixed-step RK4 on ``i dU/dt = H(t) U`` plus closed forms for constant drives.

The Hamiltonians handled here are all real and are written as

    H_b(t) = sum_k coef[b, k] * env_k(t) * G_k

with fixed real generators ``G_k``, bare envelope samples ``env_k(t)`` and one
coefficient row per batch element.  Error grids therefore cost one kernel call
and share the envelope samples.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numba
import numpy as np

from .core import (
    CASE1,
    CayleyKlein,
    ErrorModel,
    Pulse,
    apply_error,
    unitarity_defect,
)

SQRT2 = math.sqrt(2.0)
STEPS_ENV_VAR = "PULSEFORGE_STEPS"

# reduced two-level system, H = 1/2 [[-Delta, Omega/sqrt2], [Omega/sqrt2, Delta]]
_X2 = np.array([[0.0, 1.0], [1.0, 0.0]]) / (2.0 * SQRT2)
_Z2 = np.array([[-0.5, 0.0], [0.0, 0.5]])
# three-level system, H = 1/2 [[-2 Delta, Omega_p, 0], [Omega_p, 0, Omega_s], [0, Omega_s, 2 Delta]]
_P3 = np.array([[0.0, 0.5, 0.0], [0.5, 0.0, 0.0], [0.0, 0.0, 0.0]])
_S3 = np.array([[0.0, 0.0, 0.0], [0.0, 0.0, 0.5], [0.0, 0.5, 0.0]])
_Z3 = np.diag([-1.0, 0.0, 1.0])


class IntegrationError(RuntimeError):
    """The integrated propagator drifted out of the unitary group."""


@dataclass(frozen=True)
class IntegratorConfig:
    steps_per_T: int = 4000
    unitarity_tolerance: float = 1e-8

    def __post_init__(self):
        if self.steps_per_T < 100:
            raise ValueError(f"steps_per_T must be at least 100, got {self.steps_per_T}")

    @classmethod
    def from_env(cls) -> "IntegratorConfig":
        """Default config, with ``PULSEFORGE_STEPS`` overriding the step density."""
        steps = os.environ.get(STEPS_ENV_VAR)
        return cls(steps_per_T=int(steps)) if steps else cls()


def n_steps(duration: float, cfg: IntegratorConfig) -> int:
    return max(1, int(math.ceil(duration * cfg.steps_per_T - 1e-9)))


@numba.njit(cache=True)
def _fill_h(H, env_row, coef_row, gens):
    d = H.shape[0]
    for i in range(d):
        for j in range(d):
            H[i, j] = 0.0
    for k in range(gens.shape[0]):
        c = coef_row[k] * env_row[k]
        if c != 0.0:
            for i in range(d):
                for j in range(d):
                    H[i, j] += c * gens[k, i, j]


@numba.njit(cache=True)
def _minus_i_h_times(out, H, V):
    d = H.shape[0]
    for i in range(d):
        for j in range(d):
            acc = 0.0j
            for m in range(d):
                acc += H[i, m] * V[m, j]
            out[i, j] = -1.0j * acc


@numba.njit(cache=True)
def _rk4_kernel(env, coef, gens, h):
    # env: (2n+1, K) samples at t0 + j*h/2; coef: (B, K); gens: (K, d, d)
    n = (env.shape[0] - 1) // 2
    d = gens.shape[1]
    B = coef.shape[0]
    out = np.empty((B, d, d), dtype=np.complex128)
    H0 = np.empty((d, d))
    Hm = np.empty((d, d))
    H1 = np.empty((d, d))
    U = np.empty((d, d), dtype=np.complex128)
    tmp = np.empty((d, d), dtype=np.complex128)
    k1 = np.empty((d, d), dtype=np.complex128)
    k2 = np.empty((d, d), dtype=np.complex128)
    k3 = np.empty((d, d), dtype=np.complex128)
    k4 = np.empty((d, d), dtype=np.complex128)
    for b in range(B):
        for i in range(d):
            for j in range(d):
                U[i, j] = 1.0 if i == j else 0.0
        _fill_h(H0, env[0], coef[b], gens)
        for s in range(n):
            _fill_h(Hm, env[2 * s + 1], coef[b], gens)
            _fill_h(H1, env[2 * s + 2], coef[b], gens)
            _minus_i_h_times(k1, H0, U)
            for i in range(d):
                for j in range(d):
                    tmp[i, j] = U[i, j] + 0.5 * h * k1[i, j]
            _minus_i_h_times(k2, Hm, tmp)
            for i in range(d):
                for j in range(d):
                    tmp[i, j] = U[i, j] + 0.5 * h * k2[i, j]
            _minus_i_h_times(k3, Hm, tmp)
            for i in range(d):
                for j in range(d):
                    tmp[i, j] = U[i, j] + h * k3[i, j]
            _minus_i_h_times(k4, H1, tmp)
            for i in range(d):
                for j in range(d):
                    U[i, j] += h / 6.0 * (k1[i, j] + 2.0 * k2[i, j] + 2.0 * k3[i, j] + k4[i, j])
            for i in range(d):
                for j in range(d):
                    H0[i, j] = H1[i, j]
        out[b] = U
    return out


def _flat(x, shape):
    return np.broadcast_to(np.asarray(x, dtype=float), shape).reshape(-1)


def _generator_terms(pulse: Pulse, reduced: bool):
    """Bare envelopes, generators and per-batch coefficients for ``pulse``."""
    shape = pulse.batch_shape
    sign = float(pulse.sign)
    if pulse.kind == CASE1:
        X, Z = (_X2, _Z2) if reduced else (_P3 + _S3, _Z3)
        envelopes = [pulse.omega_p, pulse.delta, np.ones_like]
        coef = np.stack([sign * _flat(pulse.scale_p, shape), _flat(1.0, shape),
                         _flat(pulse.detuning_shift, shape)], axis=1)
        gens = np.stack([X, Z, Z])
    else:
        envelopes = [pulse.omega_p, pulse.omega_s]
        coef = np.stack([sign * _flat(pulse.scale_p, shape), sign * _flat(pulse.scale_s, shape)], axis=1)
        gens = np.stack([_P3, _S3])
    return envelopes, coef, gens, shape


def propagate_numeric(pulse: Pulse, error: ErrorModel | None = None, cfg: IntegratorConfig | None = None,
                      *, pulse_index: int = 1, reduced: bool = True) -> np.ndarray:
    """Integrate the propagator of ``pulse`` (perturbed by ``error``) over its window.

    Case1 pulses are integrated in the reduced two-level picture unless
    ``reduced=False``, which integrates the full three-level Hamiltonian with
    ``Omega_p = Omega_s`` and ``diag(-Delta, 0, Delta)``.  Case2 pulses are
    always three-level.

    Returns a ``(d, d)`` matrix, or ``batch_shape + (d, d)`` when the error
    magnitude (or the pulse's scales) are arrays.

    Raises
    ------
    IntegrationError
        If any returned matrix has unitarity defect above
        ``cfg.unitarity_tolerance``.
    """
    cfg = cfg or IntegratorConfig.from_env()
    pulse = apply_error(pulse, error, pulse_index)
    envelopes, coef, gens, shape = _generator_terms(pulse, reduced)
    n = n_steps(pulse.duration, cfg)
    h = pulse.duration / n
    t = pulse.t0 + 0.5 * h * np.arange(2 * n + 1)
    env = np.stack([np.broadcast_to(np.asarray(f(t), dtype=float), t.shape) for f in envelopes], axis=1)
    U = _rk4_kernel(np.ascontiguousarray(env), np.ascontiguousarray(coef), np.ascontiguousarray(gens), h)
    defect = np.max(unitarity_defect(U))
    if not defect <= cfg.unitarity_tolerance:
        raise IntegrationError(
            f"unitarity defect {defect:.3e} exceeds {cfg.unitarity_tolerance:.1e} for pulse "
            f"{pulse.label or pulse.kind!r} ({n} steps); increase steps_per_T")
    return U.reshape(shape + U.shape[-2:])


def propagate_constant_two_level(omega, delta, duration) -> CayleyKlein:
    """Closed-form Cayley-Klein pair for constant ``Omega`` and ``Delta`` in the reduced picture.

    With ``W = omega*duration/sqrt2``, ``d = delta*duration`` and
    ``G = sqrt(W**2 + d**2)``::

        a = cos(G/2) + i (d/G) sin(G/2),    b = -i (W/G) sin(G/2)

    Inputs broadcast; ``G = 0`` gives the identity.
    """
    W = np.asarray(omega, dtype=float) * duration / SQRT2
    d = np.asarray(delta, dtype=float) * duration
    G = np.hypot(W, d)
    # sin(G/2)/G -> 1/2 as G -> 0
    half_sinc = 0.5 * np.sinc(G / (2.0 * np.pi))
    a = np.cos(G / 2.0) + 1j * d * half_sinc
    b = -1j * W * half_sinc
    if np.ndim(a) == 0:
        return CayleyKlein(complex(a), complex(b))
    return CayleyKlein(a, b)


def propagate_constant_three_level(omega_p, omega_s, duration) -> np.ndarray:
    """``exp(-i H2 duration)`` for constant pump and Stokes amplitudes on one-photon resonance.

    Writing ``H2 = (R/2) M`` with ``R = sqrt(Omega_p**2 + Omega_s**2)``, the
    matrix ``M`` satisfies ``M**3 = M`` so that, with ``A = R*duration/2``,
    ``exp(-i A M) = 1 - i sin(A) M + (cos(A) - 1) M**2``.
    """
    P = np.asarray(omega_p, dtype=float)
    S = np.asarray(omega_s, dtype=float)
    P, S = np.broadcast_arrays(P, S)
    R = np.hypot(P, S)
    A = R * duration / 2.0
    safe = np.where(R > 0, R, 1.0)
    p = np.where(R > 0, P / safe, 0.0)
    s = np.where(R > 0, S / safe, 0.0)
    sinA, cm1 = np.sin(A), np.cos(A) - 1.0
    U = np.zeros(P.shape + (3, 3), dtype=complex)
    U[..., 0, 0] = 1.0 + cm1 * p * p
    U[..., 1, 1] = np.cos(A)
    U[..., 2, 2] = 1.0 + cm1 * s * s
    U[..., 0, 1] = U[..., 1, 0] = -1j * sinA * p
    U[..., 1, 2] = U[..., 2, 1] = -1j * sinA * s
    U[..., 0, 2] = U[..., 2, 0] = cm1 * p * s
    return U


def propagate_analytic(pulse: Pulse, error: ErrorModel | None = None, *, pulse_index: int = 1,
                       reduced: bool = True) -> np.ndarray:
    """Closed-form propagator of a constant pulse, same conventions as :func:`propagate_numeric`."""
    if not pulse.constant:
        raise ValueError(f"pulse {pulse.label!r} is not constant")
    pulse = apply_error(pulse, error, pulse_index)
    t = np.array([pulse.t0])
    if pulse.kind == CASE1:
        omega = pulse.rabi_p(t)[..., 0]
        delta = pulse.detuning(t)[..., 0]
        ck = propagate_constant_two_level(omega, delta, pulse.duration)
        U = ck.matrix()
        if not reduced:
            from .majorana import lift
            U = lift(ck)
    else:
        U = propagate_constant_three_level(pulse.rabi_p(t)[..., 0], pulse.rabi_s(t)[..., 0], pulse.duration)
    return np.broadcast_to(U, pulse.batch_shape + U.shape[-2:]).copy()


def propagate(pulse: Pulse, error: ErrorModel | None = None, cfg: IntegratorConfig | None = None,
              *, pulse_index: int = 1, reduced: bool = True, method: str = "auto") -> np.ndarray:
    """Dispatch to the closed form for constant pulses (``method="auto"``) or force one route."""
    if method not in ("auto", "numeric", "analytic"):
        raise ValueError(f"unknown method {method!r}")
    if method == "analytic" or (method == "auto" and pulse.constant):
        return propagate_analytic(pulse, error, pulse_index=pulse_index, reduced=reduced)
    return propagate_numeric(pulse, error, cfg, pulse_index=pulse_index, reduced=reduced)
