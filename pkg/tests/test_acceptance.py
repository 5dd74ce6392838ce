"""Acceptance criteria, each at its stated tolerance.

Every check is logged through the ``record`` fixture; the terminal summary
prints one PASS/FAIL line per criterion after the run.
"""

import time

import numpy as np
import pytest

from pulseforge import cli
from pulseforge.analysis import TABLES, q_sensitivity
from pulseforge.composite import SequenceEvaluator, detuning_sequence_population, pi_sequence_population
from pulseforge.core import ErrorModel, SequenceSpec, cayley_klein_of
from pulseforge.majorana import populations_from_reduced
from pulseforge.propagate import propagate, propagate_numeric
from pulseforge.pulses import CASE1_KINDS, CASE2_KINDS, make_case1, make_case2

pytestmark = pytest.mark.acceptance


def _cells(table_id, schemes):
    return [(table_id, col.scheme, i) for col in TABLES[table_id]["columns"] if col.scheme in schemes
            for i in range(3)]


def _check_cell(criterion, table_id, scheme, i, table_column, record):
    cells, _ = table_column(table_id, scheme)
    c = cells[i]
    computed = "n/a" if c.computed is None else f"{c.computed:.4f}"
    record(criterion, c.passed, f"{scheme} N={c.N} computed {computed} vs {c.paper} ({c.tolerance})")
    assert c.passed, f"{scheme} N={c.N}: computed {computed}, reference {c.paper}, {c.tolerance} {c.note}"


# 1 ------------------------------------------------------------------------------

@pytest.mark.parametrize("table_id, scheme, i", _cells(1, {"pi-S"}))
def test_criterion_01_pi_same_phase_widths(table_id, scheme, i, table_column, record):
    _check_cell(1, table_id, scheme, i, table_column, record)


def test_criterion_01_runtime(table_column, record):
    _, seconds = table_column(1, "pi-S")
    record(1, seconds < 1.0, f"pi-S column in {seconds:.3f} s")
    assert seconds < 1.0


# 2 ------------------------------------------------------------------------------

_T1_NUMERIC = {"Gaussian-S", "AE-S", "STA-S"}


@pytest.mark.parametrize("table_id, scheme, i", _cells(1, _T1_NUMERIC))
def test_criterion_02_shaped_pulse_widths(table_id, scheme, i, table_column, record):
    _check_cell(2, table_id, scheme, i, table_column, record)


def test_criterion_02_runtime(table_column, record):
    seconds = sum(table_column(1, s)[1] for s in _T1_NUMERIC)
    record(2, seconds < 60.0, f"numeric Table 1 columns in {seconds:.1f} s")
    assert seconds < 60.0


# 3 ------------------------------------------------------------------------------

@pytest.mark.parametrize("table_id, scheme, i", _cells(2, {"Flat pi-A", "Flat pi-S", "Gaussian-A", "Gaussian-S"}))
def test_criterion_03_detuning_widths(table_id, scheme, i, table_column, record):
    _check_cell(3, table_id, scheme, i, table_column, record)


# 4 ------------------------------------------------------------------------------

@pytest.mark.parametrize("table_id, scheme, i", _cells(3, {c.scheme for c in TABLES[3]["columns"]}))
def test_criterion_04_three_level_widths(table_id, scheme, i, table_column, record):
    _check_cell(4, table_id, scheme, i, table_column, record)


# 5 ------------------------------------------------------------------------------

def test_criterion_05_sta_sensitivity(record):
    start = time.perf_counter()
    q = q_sensitivity(make_case1("sta", n=0.5))
    seconds = time.perf_counter() - start
    ok = abs(q - 1.91) <= 0.05 and seconds < 5.0
    record(5, ok, f"q_s = {q:.4f} in {seconds:.2f} s")
    assert abs(q - 1.91) <= 0.05
    assert seconds < 5.0


# 6 ------------------------------------------------------------------------------

def _identity_gap(total):
    d = total.shape[-1]
    return float(np.max(np.abs(total - np.eye(d))))


@pytest.mark.parametrize("kind", CASE1_KINDS)
def test_criterion_06a_alternating_even_case1(kind, record):
    lam = np.linspace(-0.5, 0.5, 21)
    ev = SequenceEvaluator(make_case1(kind), SequenceSpec(8, "alternating"), ErrorModel.rabi(0.0))
    gap = max(_identity_gap(ev.total(lam, n_pulses=N)) for N in (2, 4, 6, 8))
    record(6, gap <= 1e-7, f"(a) {kind}: {gap:.1e}")
    assert gap <= 1e-7


@pytest.mark.parametrize("assignment", ["fixed_p", "fixed_s"])
def test_criterion_06b_cds_fixed_error_pair(assignment, record):
    eta = np.linspace(-0.5, 0.5, 21)
    ev = SequenceEvaluator(make_case2("cds"), SequenceSpec(2, "alternating"), ErrorModel.arm(0.0, assignment))
    gap = _identity_gap(ev.total(eta))
    record(6, gap <= 1e-7, f"(b) cds {assignment}: {gap:.1e}")
    assert gap <= 1e-7


@pytest.mark.parametrize("kind", CASE2_KINDS[1:])
def test_criterion_06c_stirap_return(kind, record):
    ev = SequenceEvaluator(make_case2(kind), SequenceSpec(2, "alternating", "alternate_time_reversal"))
    gap = _identity_gap(ev.total(0.0))
    record(6, gap <= 1e-7, f"(c) {kind}: {gap:.1e}")
    assert gap <= 1e-7


# 7 ------------------------------------------------------------------------------

def test_criterion_07_oracle_equivalence(record):
    rng = np.random.default_rng(7)
    families = [
        ("flat_pi", "alternating", "detuning"),
        ("flat_pi", "same", "detuning"),
        ("resonant_gaussian", "alternating", "detuning"),
        ("resonant_gaussian", "same", "detuning"),
        ("pi", "same", "rabi"),
    ]
    worst, count = 0.0, 0
    for kind, policy, channel in families:
        pulse = make_case1(kind)
        error = ErrorModel.detuning(0.0) if channel == "detuning" else ErrorModel.rabi(0.0)
        ev = SequenceEvaluator(pulse, SequenceSpec(9, policy), error, method="numeric")
        Ns = rng.integers(1, 10, size=40)
        values = rng.uniform(-1.0, 1.0, 40) if channel == "detuning" else rng.uniform(-0.5, 0.5, 40)
        for N in np.unique(Ns):
            x = values[Ns == N]
            pops = ev.populations(x, n_pulses=int(N))
            numeric = pops[2] if N % 2 else pops[0]
            if channel == "rabi":
                closed = pi_sequence_population(int(N), x)
            else:
                ck = cayley_klein_of(propagate(pulse, ErrorModel.detuning(x), method="numeric"))
                closed = detuning_sequence_population(ck, int(N), policy)
            worst = max(worst, float(np.max(np.abs(numeric - closed))))
            count += len(x)
    record(7, worst <= 1e-6 and count == 200, f"{count} samples, max deviation {worst:.1e}")
    assert count == 200
    assert worst <= 1e-6


# 8 ------------------------------------------------------------------------------

@pytest.mark.parametrize("kind", CASE1_KINDS)
def test_criterion_08_majorana_consistency(kind, record):
    rng = np.random.default_rng(8)
    pulse = make_case1(kind)
    worst = 0.0
    for err in (ErrorModel.rabi(rng.uniform(-0.5, 0.5, 10)), ErrorModel.detuning(rng.uniform(-2.0, 2.0, 10))):
        two = np.stack(populations_from_reduced(propagate_numeric(pulse, err)), axis=-1)
        three = np.abs(propagate_numeric(pulse, err, reduced=False)[..., :, 0]) ** 2
        worst = max(worst, float(np.max(np.abs(two - three))))
    record(8, worst <= 1e-7, f"{kind}: {worst:.1e}")
    assert worst <= 1e-7


# 9 ------------------------------------------------------------------------------

def test_criterion_09_perturbative_expansion(record):
    delta = np.linspace(-0.05, 0.05, 101)
    ck = cayley_klein_of(propagate(make_case1("flat_pi"), ErrorModel.detuning(delta)))
    worst = 0.0
    for N in range(1, 10):
        exact = detuning_sequence_population(ck, N, "alternating")
        worst = max(worst, float(np.max(np.abs(exact - (1 - 2 * N**2 * ck.a_i**2)))))
    record(9, worst <= 5e-3, f"max deviation {worst:.1e}")
    assert worst <= 5e-3


# 10 -----------------------------------------------------------------------------

@pytest.mark.parametrize("table_id", [1, 2])
def test_criterion_10_table_determinism(table_id, tmp_path, record, capsys):
    outputs = []
    for run in ("a", "b"):
        out_dir = tmp_path / run
        cli.main(["table", "--id", str(table_id), "--out-dir", str(out_dir)])
        outputs.append((out_dir / f"table{table_id}.csv").read_bytes())
    capsys.readouterr()
    same = outputs[0] == outputs[1]
    record(10, same, f"table {table_id} CSV {'identical' if same else 'differs'} across runs")
    assert same
