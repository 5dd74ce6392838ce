"""Invariant groups run by ``pulseforge validate``.

Each group returns a :class:`GroupResult`; exceptions inside a group (for
example a rejected integrator configuration) count as a failure of that
group only.  Samples come from a fixed seed so the output is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .analysis import q_sensitivity
from .composite import SequenceEvaluator, detuning_sequence_population, pi_sequence_population
from .core import (
    ALTERNATE_TIME_REVERSAL,
    ALTERNATING,
    FIXED_P,
    FIXED_S,
    SAME,
    ErrorModel,
    SequenceSpec,
    cayley_klein_of,
    unitarity_defect,
)
from .majorana import lift, populations_from_reduced
from .propagate import IntegratorConfig, propagate, propagate_numeric
from .pulses import CASE1_KINDS, CASE2_KINDS, integrate_sta_phase, make_case1, make_case2, sta_angles

SEED = 20240611


@dataclass(frozen=True)
class GroupResult:
    group: str
    passed: bool
    detail: str


def _verdict(group, worst, tol, what="max deviation"):
    return GroupResult(group, bool(worst <= tol), f"{what} {worst:.1e} (tol {tol:.0e})")


def check_unitarity(cfg=None):
    cfg = cfg or IntegratorConfig.from_env()
    lam = np.linspace(-0.5, 0.5, 5)
    worst = 0.0
    for kind in CASE1_KINDS:
        worst = max(worst, np.max(unitarity_defect(propagate_numeric(make_case1(kind), ErrorModel.rabi(lam), cfg))))
    for kind in CASE2_KINDS:
        U = propagate_numeric(make_case2(kind), ErrorModel.arm(lam), cfg)
        worst = max(worst, np.max(unitarity_defect(U)))
    return _verdict("unitarity", worst, 1e-8, "max defect")


def check_oracle_equivalence(cfg=None, samples: int = 40):
    """Closed-form sequence populations against numeric composition."""
    cfg = cfg or IntegratorConfig.from_env()
    rng = np.random.default_rng(SEED)
    worst = 0.0
    flat = make_case1("flat_pi")
    for policy in (ALTERNATING, SAME):
        ev = SequenceEvaluator(flat, SequenceSpec(9, policy), ErrorModel.detuning(0.0), cfg, method="numeric")
        deltas = rng.uniform(-3.0, 3.0, samples // 4)
        for N in rng.integers(1, 10, size=2):
            pops = ev.populations(deltas, n_pulses=int(N))
            U1 = propagate(flat, ErrorModel.detuning(deltas), method="analytic")
            closed = detuning_sequence_population(cayley_klein_of(U1), int(N), policy)
            worst = max(worst, np.max(np.abs(pops[2 if N % 2 else 0] - closed)))
    lam = rng.uniform(-0.5, 0.5, samples // 2)
    ev = SequenceEvaluator(make_case1("pi"), SequenceSpec(9, SAME), ErrorModel.rabi(0.0), cfg, method="numeric")
    for N in (1, 4, 7):
        pops = ev.populations(lam, n_pulses=N)
        worst = max(worst, np.max(np.abs(pops[2 if N % 2 else 0] - pi_sequence_population(N, lam))))
    # constant case2 drive against the matrix exponential
    p = make_case2("cds")
    U = propagate_numeric(p, None, cfg)
    H = 0.5 * np.sqrt(2.0) * np.pi * np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]])
    worst = max(worst, np.max(np.abs(U - expm(-1j * H))))
    return _verdict("oracle-equivalence", worst, 1e-6)


def check_majorana(cfg=None):
    cfg = cfg or IntegratorConfig.from_env()
    rng = np.random.default_rng(SEED + 1)
    worst = 0.0
    for kind in CASE1_KINDS:
        pulse = make_case1(kind)
        for err in (ErrorModel.rabi(rng.uniform(-0.5, 0.5, 3)), ErrorModel.detuning(rng.uniform(-1.0, 1.0, 3))):
            U2 = propagate_numeric(pulse, err, cfg)
            U3 = propagate_numeric(pulse, err, cfg, reduced=False)
            two = np.stack(populations_from_reduced(U2))
            three = np.abs(U3[..., :, 0]).T ** 2
            worst = max(worst, np.max(np.abs(two - three)))
            worst = max(worst, np.max(np.abs(lift(cayley_klein_of(U2)) - U3)))
    return _verdict("majorana", worst, 1e-7)


def check_identities(cfg=None):
    cfg = cfg or IntegratorConfig.from_env()
    worst = 0.0
    lam = np.linspace(-0.5, 0.5, 5)
    for kind in CASE1_KINDS:
        ev = SequenceEvaluator(make_case1(kind), SequenceSpec(2, ALTERNATING), ErrorModel.rabi(0.0), cfg)
        worst = max(worst, np.max(np.abs(ev.total(lam) - np.eye(2))))
    for assignment in (FIXED_P, FIXED_S):
        ev = SequenceEvaluator(make_case2("cds"), SequenceSpec(2, ALTERNATING), ErrorModel.arm(0.0, assignment), cfg)
        worst = max(worst, np.max(np.abs(ev.total(lam) - np.eye(3))))
    for kind in CASE2_KINDS:
        ev = SequenceEvaluator(make_case2(kind), SequenceSpec(2, ALTERNATING, ALTERNATE_TIME_REVERSAL), None, cfg)
        worst = max(worst, np.max(np.abs(ev.total(0.0) - np.eye(3))))
    return _verdict("identities", worst, 1e-7)


def check_expansions():
    flat = make_case1("flat_pi")
    worst = 0.0
    delta = np.linspace(-0.05, 0.05, 41)
    ck = cayley_klein_of(propagate(flat, ErrorModel.detuning(delta), method="analytic"))
    for N in range(1, 10):
        exact = detuning_sequence_population(ck, N, ALTERNATING)
        worst = max(worst, np.max(np.abs(exact - (1.0 - 2.0 * N**2 * ck.a_i**2))))
    return _verdict("expansions", worst, 5e-3)


def check_sta_phase(cfg=None):
    cfg = cfg or IntegratorConfig.from_env()
    t = np.linspace(0.0, 1.0, 21)
    worst = 0.0
    for n in (0.0, 0.25, 0.5):
        worst = max(worst, np.max(np.abs(integrate_sta_phase(n, t) - sta_angles(n, t).epsilon_plus)))
    U = propagate_numeric(make_case1("sta", n=0.5), None, cfg)
    worst = max(worst, abs(populations_from_reduced(U)[2] - 1.0))
    return _verdict("sta-phase", worst, 1e-6)


def check_q_sensitivity(cfg=None):
    cfg = cfg or IntegratorConfig.from_env()
    q_pi = q_sensitivity(make_case1("pi"), cfg=cfg)
    q_sta = q_sensitivity(make_case1("sta", n=0.5), cfg=cfg)
    ok = abs(q_pi - np.pi**2 / 4) <= 1e-3 and abs(q_sta - 1.91) <= 0.05
    return GroupResult("q_s", ok, f"pi {q_pi:.4f} (expect {np.pi**2 / 4:.4f}), sta(n=0.5) {q_sta:.4f} (expect 1.91)")


GROUPS = (
    ("unitarity", check_unitarity),
    ("oracle-equivalence", check_oracle_equivalence),
    ("majorana", check_majorana),
    ("identities", check_identities),
    ("expansions", check_expansions),
    ("sta-phase", check_sta_phase),
    ("q_s", check_q_sensitivity),
)


def run_all() -> list:
    results = []
    for name, check in GROUPS:
        try:
            results.append(check())
        except Exception as exc:  # a broken group must not hide the others
            results.append(GroupResult(name, False, f"{type(exc).__name__}: {exc}"))
    return results
