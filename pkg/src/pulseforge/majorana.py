"""Spin-1 / spin-1/2 correspondence for case1 pulses.

A case1 pulse drives the three-level Hamiltonian
``1/2 [[-2 Delta, Omega, 0], [Omega, 0, Omega], [0, Omega, 2 Delta]]``, which is
the spin-1 representation of the two-level Hamiltonian
``1/2 [[-Delta, Omega/sqrt2], [Omega/sqrt2, Delta]]``.  Everything about the
three-level dynamics can therefore be read off the two-level Cayley-Klein pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import CASE1, CayleyKlein, Pulse

SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True, eq=False)
class ReducedPulse:
    omega: Callable
    delta: Callable
    t0: float
    tf: float

    def hamiltonian(self, t) -> np.ndarray:
        """Two-level Hamiltonian at time(s) ``t``; shape ``(..., 2, 2)``."""
        w = np.asarray(self.omega(t), dtype=float) / SQRT2
        d = np.asarray(self.delta(t), dtype=float)
        w, d = np.broadcast_arrays(w, d)
        return 0.5 * np.stack([np.stack([-d, w], -1), np.stack([w, d], -1)], -2)


def reduce(pulse: Pulse) -> ReducedPulse:
    """Effective two-level pulse of a case1 pulse, perturbations included."""
    if pulse.kind != CASE1:
        raise ValueError("only case1 pulses have a two-level reduction")
    return ReducedPulse(pulse.rabi_p, pulse.detuning, pulse.t0, pulse.tf)


def lift(ck: CayleyKlein) -> np.ndarray:
    """Three-level propagator built from a two-level Cayley-Klein pair.

    This is the symmetric square of ``[[a, b], [-b*, a*]]``: the corner
    element is ``(-b*)**2``, not ``-(b*)**2``.
    """
    a = np.asarray(ck.a, dtype=complex)
    b = np.asarray(ck.b, dtype=complex)
    ac, bc = a.conj(), b.conj()
    r2 = SQRT2
    rows = [
        [a * a, r2 * a * b, b * b],
        [-r2 * a * bc, np.abs(a) ** 2 - np.abs(b) ** 2, r2 * ac * b],
        [bc * bc, -r2 * ac * bc, ac * ac],
    ]
    return np.stack([np.stack(row, -1) for row in rows], -2)


def populations_from_ck(ck: CayleyKlein):
    """Level populations ``(P1, P2, P3)`` reached from ``|1>``."""
    pg = np.abs(ck.a) ** 2
    pe = np.abs(ck.b) ** 2
    return pg * pg, 2.0 * pg * pe, pe * pe


def populations_from_reduced(U):
    """Same as :func:`populations_from_ck` but straight from (a stack of) 2x2 propagators.

    Only the first column is used, so this also accepts propagators that are
    unitary but carry a global phase.
    """
    U = np.asarray(U)
    pg = np.abs(U[..., 0, 0]) ** 2
    pe = np.abs(U[..., 1, 0]) ** 2
    return pg * pg, 2.0 * pg * pe, pe * pe
