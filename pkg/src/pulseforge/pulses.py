"""Pulse families for both Hamiltonian cases, including the invariant-based STA pulse."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .core import CASE2, Pulse, constant_envelope

SQRT2 = np.sqrt(2.0)

CASE1_KINDS = ("pi", "flat_pi", "chirped_gaussian", "allen_eberly", "sta", "resonant_gaussian")
CASE2_KINDS = ("cds", "stirap_gaussian", "stirap_sech", "stirap_sin", "stirap_sin2")

# Half-widths (in units of T) of the symmetric integration windows.  The
# resonant Gaussian is deliberately truncated at 2T: the static-detuning
# profiles depend on how long the free precession in the tails lasts, and 2T
# is the window that reproduces the published FWHM tables.
CASE1_HALF_WINDOWS = {"chirped_gaussian": 5.0, "allen_eberly": 10.0, "resonant_gaussian": 2.0}

# Pump/Stokes windows.  Gaussian and sech pairs run Stokes first
# (counterintuitive order) and leave tails below 1e-6 of the peak.
CASE2_WINDOWS = {
    "cds": (0.0, 1.0),
    "stirap_gaussian": (-4.0, 6.0),
    "stirap_sech": (-15.0, 20.0),
    "stirap_sin": (0.0, 1.0),
    "stirap_sin2": (0.0, 1.0),
}


def _sech(x):
    return 1.0 / np.cosh(x)


def make_case1(kind: str, T: float = 1.0, *, n: float = 0.5, window: tuple[float, float] | None = None) -> Pulse:
    """Case1 pulse of the given family.

    Parameters
    ----------
    kind : str
        One of ``pi``, ``flat_pi`` (both the flat pulse of area pi,
        ``Omega = sqrt2 pi / T`` on ``[0, T]``), ``chirped_gaussian``,
        ``allen_eberly``, ``sta`` or ``resonant_gaussian``.
    T : float
        Pulse width.
    n : float
        Free parameter of the STA phase Ansatz (``kind="sta"`` only).
    window : (float, float), optional
        Override of the integration window (ignored for ``sta``, whose
        angles are pinned to ``[0, T]``).
    """
    if kind in ("pi", "flat_pi"):
        omega = constant_envelope(SQRT2 * np.pi / T)
        return Pulse.case1(omega, constant_envelope(0.0), *(window or (0.0, T)), label=kind, constant=True)
    if kind == "sta":
        return invert_sta(n, T)
    if kind not in CASE1_HALF_WINDOWS:
        raise ValueError(f"unknown case1 pulse kind {kind!r}; expected one of {CASE1_KINDS}")
    half = CASE1_HALF_WINDOWS[kind] * T
    t0, tf = window or (-half, half)
    if kind == "chirped_gaussian":
        def omega(t):
            return 2.0 * SQRT2 * np.exp(-(t / T) ** 2) / T

        def delta(t):
            return SQRT2 * t / T**2
    elif kind == "allen_eberly":
        def omega(t):
            return np.sqrt(6.0) * _sech(t / T) / T

        def delta(t):
            return SQRT2 * np.tanh(t / T) / T
    else:
        def omega(t):
            return np.sqrt(2.0 * np.pi) * np.exp(-(t / T) ** 2) / T

        delta = constant_envelope(0.0)
    return Pulse.case1(omega, delta, t0, tf, label=kind)


@dataclass(frozen=True, eq=False)
class StaAngles:
    """Invariant angles of the STA construction sampled at times ``t``.

    ``theta`` and ``gamma`` are the polar and azimuthal angles of the
    invariant's eigenvectors and ``epsilon_plus`` the Lewis-Riesenfeld phase
    of ``|phi_+>``.
    """

    t: np.ndarray
    theta: np.ndarray
    gamma: np.ndarray
    n: float
    epsilon_plus: np.ndarray


def _sta_x(theta, n):
    # gamma = -arccot(x)
    return 2.0 * (1.0 + 2.0 * n * np.cos(2.0 * theta)) * np.sin(theta)


def sta_angles(n: float, t, T: float = 1.0) -> StaAngles:
    t = np.asarray(t, dtype=float)
    theta = np.pi * t / T
    gamma = -(np.pi / 2.0 - np.arctan(_sta_x(theta, n)))
    return StaAngles(t, theta, gamma, float(n), -theta - n * np.sin(2.0 * theta))


def sta_phase_rate(n: float, t, T: float = 1.0):
    """``d epsilon_plus / dt = theta_dot cos(gamma) / (2 sin(theta) sin(gamma))``, evaluated literally.

    Removable 0/0 at ``t = 0`` and ``t = T``; callers integrate over open intervals.
    """
    a = sta_angles(n, t, T)
    return (np.pi / T) * np.cos(a.gamma) / (2.0 * np.sin(a.theta) * np.sin(a.gamma))


def integrate_sta_phase(n: float, t, T: float = 1.0) -> np.ndarray:
    """Lewis-Riesenfeld phase of ``|phi_+>`` obtained by quadrature of :func:`sta_phase_rate`."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    def rate(s):
        return float(sta_phase_rate(n, s, T))

    out = [quad(rate, 0.0, ti, epsabs=1e-12, epsrel=1e-12)[0] if ti > 0 else 0.0 for ti in t]
    return np.asarray(out)


def invert_sta(n: float, T: float = 1.0, grid: int = 4001) -> Pulse:
    """Inverse-engineer ``(Omega, Delta)`` from the invariant angles.

    With ``theta = pi t / T`` and ``gamma = -arccot(x)``,
    ``x = 2 (1 + 2 n cos 2 theta) sin theta``, the invariant constraints give::

        Omega = -sqrt2 theta_dot / sin(gamma) = sqrt2 theta_dot sqrt(1 + x**2)
        Delta = -Omega cot(theta) cos(gamma) / sqrt2 - gamma_dot
              = -2 theta_dot (1 + 2 n cos 2 theta) cos(theta) - x_dot / (1 + x**2)

    The second forms are the analytic continuations through ``theta = 0, pi``,
    so the endpoints need no special casing and ``gamma_dot`` is exact.
    """
    if not np.isfinite(n):
        raise ValueError("STA parameter n must be finite")
    if grid < 1000:
        raise ValueError("grid must have at least 1000 samples")
    n = float(n)
    theta_dot = np.pi / T

    probe = sta_angles(n, np.linspace(0.0, T, grid)[1:-1], T)
    if not np.all(np.isfinite(probe.gamma)) or np.min(np.abs(np.sin(probe.gamma))) < 1e-12:
        raise ValueError(f"sin(gamma) vanishes for n={n}; Omega would be singular")

    def omega(t):
        x = _sta_x(np.pi * np.asarray(t, dtype=float) / T, n)
        return SQRT2 * theta_dot * np.sqrt(1.0 + x * x)

    def delta(t):
        theta = np.pi * np.asarray(t, dtype=float) / T
        c2 = 1.0 + 2.0 * n * np.cos(2.0 * theta)
        x = 2.0 * c2 * np.sin(theta)
        x_dot = 2.0 * theta_dot * (-4.0 * n * np.sin(2.0 * theta) * np.sin(theta) + c2 * np.cos(theta))
        return -2.0 * theta_dot * c2 * np.cos(theta) - x_dot / (1.0 + x * x)

    return Pulse.case1(omega, delta, 0.0, T, label=f"sta(n={n:g})")


def make_case2(kind: str, T: float = 1.0, *, window: tuple[float, float] | None = None) -> Pulse:
    """Pump/Stokes pair with peak amplitude ``Omega0 = sqrt2 pi / T``."""
    if kind not in CASE2_WINDOWS:
        raise ValueError(f"unknown case2 pulse kind {kind!r}; expected one of {CASE2_KINDS}")
    omega0 = SQRT2 * np.pi / T
    t0, tf = window or tuple(w * T for w in CASE2_WINDOWS[kind])
    if kind == "cds":
        env = constant_envelope(omega0)
        return Pulse.case2(env, env, t0, tf, label=kind, constant=True)
    if kind == "stirap_gaussian":
        def omega_p(t):
            return omega0 * np.exp(-(t / T - 2.0) ** 2)

        def omega_s(t):
            return omega0 * np.exp(-(t / T) ** 2)
    elif kind == "stirap_sech":
        def omega_p(t):
            return omega0 * _sech(t / T - 5.0)

        def omega_s(t):
            return omega0 * _sech(t / T)
    elif kind == "stirap_sin":
        def omega_p(t):
            return omega0 * np.sin(np.pi * t / T)

        def omega_s(t):
            return omega0 * np.cos(np.pi * t / T)
    else:
        def omega_p(t):
            return omega0 * np.sin(np.pi * t / T) ** 2

        def omega_s(t):
            return omega0 * np.cos(np.pi * t / T) ** 2
    return Pulse.case2(omega_p, omega_s, t0, tf, label=kind)


def _mirrored(f, t0, tf):
    def g(t):
        return f(t0 + tf - np.asarray(t, dtype=float))

    return g


def time_reverse_pair(pulse: Pulse) -> Pulse:
    """Play the pump/Stokes pair backwards in time over the same window.

    Both envelopes are mirrored about the window midpoint, which exchanges
    the time order of P and S.  For the delayed Gaussian and sech pairs this is
    the same as swapping the two envelopes.  Combined with a phase flip, the
    mirrored pulse is the exact inverse of the original one.
    """
    if pulse.kind != CASE2:
        raise ValueError("time reversal of the pair is defined for case2 pulses")
    if pulse.constant:
        return pulse
    label = pulse.label[:-2] if pulse.label.endswith("~r") else pulse.label + "~r"
    return pulse.replace(omega_p=_mirrored(pulse.omega_p, pulse.t0, pulse.tf),
                         omega_s=_mirrored(pulse.omega_s, pulse.t0, pulse.tf), label=label)


__all__ = [
    "CASE1_KINDS",
    "CASE2_KINDS",
    "StaAngles",
    "integrate_sta_phase",
    "invert_sta",
    "make_case1",
    "make_case2",
    "sta_angles",
    "sta_phase_rate",
    "time_reverse_pair",
]
