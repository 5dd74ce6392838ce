"""N-pulse sequences: numeric composition and the closed-form populations used as oracles."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import eval_chebyt, eval_chebyu

from .core import (
    ALTERNATE_TIME_REVERSAL,
    ALTERNATING,
    CASE1,
    RABI_ARM,
    SAME,
    CayleyKlein,
    ErrorModel,
    Pulse,
    SequenceSpec,
    flip_phase,
)
from .majorana import populations_from_reduced
from .propagate import IntegratorConfig, propagate
from .pulses import time_reverse_pair


@dataclass(frozen=True, eq=False)
class SequenceResult:
    """Total and per-pulse propagators of a sequence, plus populations reached from ``|1>``.

    For case1 pulses the propagators are the reduced 2x2 ones; populations are
    always three-level.
    """

    total: np.ndarray
    per_pulse: list
    populations_from_1: tuple
    reduced: bool


def _populations(total, reduced):
    if reduced:
        return populations_from_reduced(total)
    col = np.abs(total[..., :, 0]) ** 2
    return col[..., 0], col[..., 1], col[..., 2]


class SequenceEvaluator:
    """Sequence populations as a function of the error magnitude.

    Single-pulse propagators are memoized per (pulse variant, magnitude) so
    that sequences of different length, and repeated evaluations at the same
    error value, reuse the integrations.
    """

    def __init__(self, pulse: Pulse, spec: SequenceSpec, error: ErrorModel | None = None,
                 cfg: IntegratorConfig | None = None, method: str = "auto"):
        if spec.order_policy == ALTERNATE_TIME_REVERSAL and pulse.kind == CASE1:
            raise ValueError("alternating time order is defined for case2 pulses only")
        self.pulse = pulse
        self.spec = spec
        self.error = error
        self.cfg = cfg or IntegratorConfig.from_env()
        self.method = method
        self.reduced = pulse.kind == CASE1
        self._memo: dict = {}

    def _variant(self, k: int):
        flip = self.spec.phase_policy == ALTERNATING and k % 2 == 0
        rev = self.spec.order_policy == ALTERNATE_TIME_REVERSAL and k % 2 == 0
        arm = self.error.arm_for(k) if self.error is not None and self.error.channel == RABI_ARM else None
        # parity fixes the arm for alternating assignments; index 1 or 2 reproduces it
        index = 1 if arm is None else (1 if arm == self.error.arm_for(1) else 2)
        return (flip, rev, arm), index

    def _single(self, key, index, magnitudes):
        flip, rev, _ = key
        memo = self._memo.setdefault(key, {})
        missing = sorted({m for m in magnitudes if m not in memo})
        if missing:
            pulse = self.pulse
            if flip:
                pulse = flip_phase(pulse)
            if rev:
                pulse = time_reverse_pair(pulse)
            if self.error is None:
                if len(missing) != 1 or missing[0] != 0.0:
                    raise ValueError("nonzero magnitudes need an error model")
                Us = propagate(pulse, None, self.cfg, pulse_index=index, method=self.method)[None]
            else:
                err = self.error.with_magnitude(np.array(missing))
                Us = propagate(pulse, err, self.cfg, pulse_index=index, method=self.method)
            for m, U in zip(missing, Us):
                memo[m] = U
        return np.stack([memo[m] for m in magnitudes])

    def per_pulse(self, magnitudes, n_pulses: int | None = None) -> list:
        """Propagators of pulses 1..N, each of shape ``(len(magnitudes), d, d)``."""
        mags = [float(m) for m in np.atleast_1d(np.asarray(magnitudes, dtype=float))]
        n = n_pulses or self.spec.n_pulses
        out, seen = [], {}
        for k in range(1, n + 1):
            key, index = self._variant(k)
            if key not in seen:
                seen[key] = self._single(key, index, mags)
            out.append(seen[key])
        return out

    def total(self, magnitudes, n_pulses: int | None = None) -> np.ndarray:
        per = self.per_pulse(magnitudes, n_pulses)
        U = per[0]
        for Uk in per[1:]:
            U = Uk @ U
        return U

    def populations(self, magnitudes, n_pulses: int | None = None):
        return _populations(self.total(magnitudes, n_pulses), self.reduced)


def compose(pulse: Pulse, spec: SequenceSpec, error: ErrorModel | None = None,
            cfg: IntegratorConfig | None = None, *, method: str = "auto") -> SequenceResult:
    """Propagate ``spec.n_pulses`` contiguous copies of ``pulse``.

    Pulse ``k`` (1-based) is derived from ``pulse`` by, in order: a phase flip
    when the phase policy alternates and ``k`` is even; time reversal of the
    pump/Stokes pair when the order policy alternates and ``k`` is even; and
    the error perturbation for position ``k``.  The total propagator is
    ``U_N ... U_2 U_1``.  A scalar error magnitude gives unbatched results.
    """
    scalar = error is None or np.ndim(error.magnitude) == 0
    mags = 0.0 if error is None else error.magnitude
    ev = SequenceEvaluator(pulse, spec, error, cfg, method)
    per = ev.per_pulse(mags)
    total = per[0]
    for Uk in per[1:]:
        total = Uk @ total
    if scalar:
        per = [U[0] for U in per]
        total = total[0]
    return SequenceResult(total, per, _populations(total, ev.reduced), ev.reduced)


def pi_sequence_population(N: int, lam):
    """Transfer (odd ``N``) or return (even ``N``) population of a same-phase pi-pulse train."""
    if N < 1:
        raise ValueError("N must be positive")
    return np.cos(N * np.asarray(lam, dtype=float) * np.pi / 2.0) ** 4


@dataclass(frozen=True, eq=False)
class ClosedFormParams:
    """Angles and Chebyshev ratios of an N-pulse power of one SU(2) propagator.

    ``E = sin(n Theta)/sin(Theta)``, ``D = sin(N vartheta)/sin(vartheta)`` and
    ``F = cos((n + 1/2) Theta)/cos(Theta/2)`` with ``n = N // 2``.  They are
    evaluated as Chebyshev polynomials of ``cos(Theta) = 1 - 2 a_i**2`` and
    ``cos(vartheta) = a_r``, which removes the singularities at
    ``Theta = 0`` and ``vartheta = 0, pi``.
    """

    Theta: np.ndarray
    vartheta: np.ndarray
    E: np.ndarray
    D: np.ndarray
    F: np.ndarray
    N: int

    @classmethod
    def from_ck(cls, ck: CayleyKlein, N: int) -> "ClosedFormParams":
        if N < 1:
            raise ValueError("N must be positive")
        a_r, a_i = np.asarray(ck.a_r, dtype=float), np.asarray(ck.a_i, dtype=float)
        n = N // 2
        c = 1.0 - 2.0 * a_i**2
        Theta = 2.0 * np.arcsin(np.minimum(np.abs(a_i), 1.0))
        vartheta = np.arccos(np.clip(a_r, -1.0, 1.0))
        E = eval_chebyu(n - 1, c) if n >= 1 else np.zeros_like(c)
        F = eval_chebyu(n, c) - E
        D = eval_chebyu(N - 1, a_r)
        return cls(Theta, vartheta, E, D, F, N)


def sequence_first_column(ck: CayleyKlein, N: int, policy: str):
    """First column ``(U11, U21)`` of the N-pulse two-level propagator, in closed form.

    ``policy="alternating"`` starts with phase 0 on pulse 1; ``"same"`` uses
    ``U**N``.
    """
    p = ClosedFormParams.from_ck(ck, N)
    a = np.asarray(ck.a, dtype=complex)
    b = np.asarray(ck.b, dtype=complex)
    a_r, a_i = a.real, a.imag
    if policy == ALTERNATING:
        if N % 2 == 0:
            c = 1.0 - 2.0 * a_i**2
            U11 = eval_chebyt(N // 2, c) + 2j * a_r * a_i * p.E
            U21 = 2j * b.conj() * a_i * p.E
        else:
            U11 = a * p.F + 2j * a_i * p.E
            U21 = -b.conj() * p.F
    elif policy == SAME:
        U11 = eval_chebyt(N, a_r) + 1j * a_i * p.D
        U21 = -b.conj() * p.D
    else:
        raise ValueError(f"unknown phase policy {policy!r}")
    return U11, U21


def _observable(N, observable):
    if observable == "auto":
        return "p3" if N % 2 else "p1"
    if observable not in ("p1", "p3"):
        raise ValueError(f"unknown observable {observable!r}")
    return observable


def detuning_sequence_population(ck: CayleyKlein, N: int, policy: str, observable: str = "auto"):
    """Closed-form three-level population after N pulses with single-pulse pair ``ck``.

    ``observable="auto"`` returns ``P3`` for odd ``N`` (transfer) and ``P1``
    for even ``N`` (return).  For odd ``N`` the alternating branch is
    ``|b|^4 cos^4(N Theta/2) / cos^4(Theta/2)``; the same-phase branch is
    ``|b|^4 sin^4(N vartheta)/sin^4(vartheta)`` (``P3``) or
    ``(1 - |b|^2 sin^2(N vartheta)/sin^2(vartheta))^2`` (``P1``).
    """
    U11, U21 = sequence_first_column(ck, N, policy)
    if _observable(N, observable) == "p1":
        return np.abs(U11) ** 4
    return np.abs(U21) ** 4


def perturbative_population(ck: CayleyKlein, N: int, policy: str):
    """Leading-order expansion of :func:`detuning_sequence_population` around ``a = 0``.

    Alternating phases: ``1 - 2 N^2 a_i^2``.  Same phases: ``1 - 2 N^2 a_r^2``
    (even N) or ``1 - 2 N^2 a_r^2 - 2 a_i^2`` (odd N).  Clamped to [0, 1].
    """
    a_r, a_i = np.asarray(ck.a_r, dtype=float), np.asarray(ck.a_i, dtype=float)
    if policy == ALTERNATING:
        p = 1.0 - 2.0 * N**2 * a_i**2
    elif policy == SAME:
        p = 1.0 - 2.0 * N**2 * a_r**2
        if N % 2:
            p = p - 2.0 * a_i**2
    else:
        raise ValueError(f"unknown phase policy {policy!r}")
    return np.clip(p, 0.0, 1.0)
