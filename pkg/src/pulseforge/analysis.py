"""Error sweeps, FWHM extraction, the q_s sensitivity and the FWHM tables."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .composite import (
    SequenceEvaluator,
    detuning_sequence_population,
    pi_sequence_population,
)
from .core import (
    ALTERNATE_TIME_REVERSAL,
    ALTERNATING,
    ALTERNATING_START_S,
    CASE1,
    DETUNING_STATIC,
    FIXED_S,
    SAME,
    ErrorModel,
    Pulse,
    SequenceSpec,
)
from .propagate import IntegrationError, IntegratorConfig, propagate, propagate_constant_two_level
from .pulses import CASE1_HALF_WINDOWS, make_case1, make_case2

DEFAULT_GRIDS = {DETUNING_STATIC: (-3.0, 3.0, 3001)}
DEFAULT_RABI_GRID = (-0.5, 0.5, 2001)


class DegenerateProfile(ValueError):
    """The population at zero error is too small for a meaningful half maximum."""


def default_grid(channel: str) -> tuple:
    return DEFAULT_GRIDS.get(channel, DEFAULT_RABI_GRID)


@dataclass(frozen=True, eq=False)
class SweepConfig:
    pulse: Pulse
    spec: SequenceSpec
    error: ErrorModel
    grid: tuple = None
    observable: str = "auto"
    method: str = "auto"

    def __post_init__(self):
        if self.grid is None:
            object.__setattr__(self, "grid", default_grid(self.error.channel))
        lo, hi, points = self.grid
        if points < 1 or int(points) != points or points % 2 == 0:
            raise ValueError("grid needs an odd number of points so that 0 is on the grid")
        if not math.isclose(lo, -hi, abs_tol=1e-12):
            raise ValueError("grid must be symmetric about 0")
        if self.observable not in ("auto", "p1", "p3"):
            raise ValueError(f"unknown observable {self.observable!r}")

    @property
    def errors(self) -> np.ndarray:
        lo, hi, points = self.grid
        x = np.linspace(lo, hi, int(points))
        x[len(x) // 2] = 0.0
        return x

    @property
    def observable_index(self) -> int:
        obs = self.observable
        if obs == "auto":
            obs = "p3" if self.spec.n_pulses % 2 else "p1"
        return 0 if obs == "p1" else 2


@dataclass(frozen=True, eq=False)
class SweepResult:
    errors: np.ndarray
    populations: np.ndarray
    peak: float
    fwhm: Optional[float] = None
    evaluate: Optional[Callable] = field(default=None, repr=False)


def sequence_evaluator(cfg: SweepConfig, integrator: IntegratorConfig | None = None) -> Callable:
    """Population of the configured observable as a vectorized function of the error value."""
    ev = SequenceEvaluator(cfg.pulse, cfg.spec, cfg.error, integrator, cfg.method)
    index = cfg.observable_index

    def evaluate(x):
        return np.asarray(ev.populations(np.atleast_1d(np.asarray(x, dtype=float)))[index])

    return evaluate


def sweep(cfg: SweepConfig, integrator: IntegratorConfig | None = None, chunk: int = 512) -> SweepResult:
    """Populations over the configured error grid, with their FWHM."""
    evaluate = sequence_evaluator(cfg, integrator)
    x = cfg.errors
    parts = []
    for i in range(0, len(x), chunk):
        try:
            parts.append(evaluate(x[i:i + chunk]))
        except IntegrationError as exc:
            raise IntegrationError(f"{exc} (error values {x[i]:g} to {x[min(i + chunk, len(x)) - 1]:g})") from exc
    pops = np.concatenate(parts)
    result = SweepResult(x, pops, float(pops[len(x) // 2]), evaluate=evaluate)
    try:
        width = fwhm(result)
    except DegenerateProfile:
        width = None
    return SweepResult(x, pops, result.peak, width, evaluate)


def _bisect_crossing(evaluate, inside, outside, half, tol):
    while abs(outside - inside) > tol:
        mid = 0.5 * (inside + outside)
        if float(evaluate(np.array([mid]))[0]) > half:
            inside = mid
        else:
            outside = mid
    return 0.5 * (inside + outside)


def _interp_crossing(x_in, y_in, x_out, y_out, half):
    return x_in + (half - y_in) * (x_out - x_in) / (y_out - y_in)


def fwhm(result: SweepResult, tol: float = 1e-6) -> Optional[float]:
    """Width between the innermost half-maximum crossings on either side of zero.

    The half maximum is half the population at zero error.  Crossings are
    bracketed by scanning the grid outward from zero and then refined by
    bisection on ``result.evaluate`` (linear interpolation when no evaluator
    is attached).  Returns ``None`` when a side has no crossing on the grid.
    """
    x, y = np.asarray(result.errors), np.asarray(result.populations)
    i0 = int(np.argmin(np.abs(x)))
    peak = float(y[i0])
    if peak < 0.5:
        raise DegenerateProfile(f"population {peak:.3g} at zero error; the sequence fails without error")
    half = 0.5 * peak
    edges = []
    for step in (1, -1):
        i = i0
        while 0 <= i + step < len(x) and y[i + step] > half:
            i += step
        j = i + step
        if not 0 <= j < len(x):
            return None
        if result.evaluate is not None:
            edges.append(_bisect_crossing(result.evaluate, x[i], x[j], half, tol))
        else:
            edges.append(_interp_crossing(x[i], y[i], x[j], y[j], half))
    return float(edges[0] - edges[1])


def scan_fwhm(evaluate: Callable, step: float, limit: float, tol: float = 1e-6, chunk: int = 16) -> Optional[float]:
    """FWHM without a precomputed grid: scan outward from zero in chunks, then bisect.

    Only the points up to the first crossing on each side are evaluated,
    which makes this much cheaper than a full sweep for narrow profiles.
    """
    peak = float(evaluate(np.array([0.0]))[0])
    if peak < 0.5:
        raise DegenerateProfile(f"population {peak:.3g} at zero error; the sequence fails without error")
    half = 0.5 * peak
    n_max = int(round(limit / step))
    edges = []
    for sign in (1.0, -1.0):
        inside, outside, k = 0.0, None, 0
        while outside is None and k < n_max:
            ks = np.arange(k + 1, min(k + chunk, n_max) + 1)
            xs = sign * step * ks
            ys = evaluate(xs)
            below = np.nonzero(ys <= half)[0]
            if below.size:
                first = below[0]
                outside = xs[first]
                inside = xs[first - 1] if first > 0 else inside
            else:
                inside = xs[-1]
            k = ks[-1]
        if outside is None:
            return None
        edges.append(_bisect_crossing(evaluate, inside, outside, half, tol))
    return float(edges[0] - edges[1])


def q_sensitivity(pulse: Pulse, h: float = 1e-3, cfg: IntegratorConfig | None = None,
                  retries: int = 4, rtol: float = 0.01) -> float:
    """``-1/2 d^2 P / d lambda^2`` at ``lambda = 0`` for the two-level transition probability.

    Central second difference with step ``h``, accepted once it agrees with
    the step ``h/2`` estimate to ``rtol``; otherwise ``h`` is halved and the
    check repeated up to ``retries`` times.
    """
    if pulse.kind != CASE1:
        raise ValueError("q_s is defined for case1 pulses")
    for _ in range(retries + 1):
        lam = np.array([-h, -h / 2, 0.0, h / 2, h])
        U = propagate(pulse, ErrorModel.rabi(lam), cfg)
        P = np.abs(U[:, 1, 0]) ** 2
        q_h = -(P[4] - 2.0 * P[2] + P[0]) / (2.0 * h * h)
        q_h2 = -(P[3] - 2.0 * P[2] + P[1]) / (2.0 * (h / 2) ** 2)
        if abs(q_h - q_h2) <= rtol * max(abs(q_h2), 1e-4):
            return float(q_h)
        h /= 2.0
    raise RuntimeError(f"q_s finite difference did not stabilize (last estimates {q_h:.6g}, {q_h2:.6g})")


# --- FWHM tables ---------------------------------------------------------------

@dataclass(frozen=True)
class Tolerance:
    kind: str  # "abs" or "rel"
    value: float

    def accepts(self, computed: float, reference: float) -> bool:
        dev = abs(computed - reference)
        return dev <= self.value + 1e-12 if self.kind == "abs" else dev <= self.value * abs(reference) + 1e-12

    def __str__(self):
        return f"{self.kind}<={self.value:g}"


@dataclass(frozen=True, eq=False)
class TableColumn:
    scheme: str
    pulse: Callable[[], Pulse]
    phase: str
    error: ErrorModel
    paper: tuple
    tolerance: Tolerance
    order: str = "fixed"
    closed_form: Optional[Callable] = None  # (N) -> evaluate(x)
    remark: str = ""

    def evaluator(self, n_max: int, integrator=None) -> Callable:
        if self.closed_form is not None:
            return self.closed_form
        spec = SequenceSpec(n_max, self.phase, self.order)
        ev = SequenceEvaluator(self.pulse(), spec, self.error, integrator)

        def for_n(N):
            def evaluate(x):
                pops = ev.populations(np.atleast_1d(np.asarray(x, dtype=float)), n_pulses=N)
                return np.asarray(pops[2] if N % 2 else pops[0])

            return evaluate

        return for_n


def _pi_closed_form(N):
    return lambda lam: pi_sequence_population(N, lam)


def _flat_pi_closed_form(policy):
    def for_n(N):
        def evaluate(delta):
            ck = propagate_constant_two_level(np.sqrt(2.0) * np.pi, np.asarray(delta, dtype=float), 1.0)
            return np.asarray(detuning_sequence_population(ck, N, policy))

        return evaluate

    return for_n


_RABI = ErrorModel.rabi(0.0)
_DET = ErrorModel.detuning(0.0)
_ARM_ALT = ErrorModel.arm(0.0, ALTERNATING_START_S)
_ARM_S = ErrorModel.arm(0.0, FIXED_S)
_REL10 = Tolerance("rel", 0.10)
_GAUSS_WINDOW = "resonant Gaussian window [-{0:g}T, {0:g}T]".format(CASE1_HALF_WINDOWS["resonant_gaussian"])

TABLES = {
    1: {
        "N": (5, 7, 9),
        "step": 1e-3,
        "limit": 0.5,
        "columns": [
            TableColumn("pi-S", lambda: make_case1("pi"), SAME, _RABI, (0.146, 0.104, 0.082),
                        Tolerance("abs", 0.002), closed_form=_pi_closed_form),
            TableColumn("Gaussian-S", lambda: make_case1("chirped_gaussian"), SAME, _RABI,
                        (0.153, 0.109, 0.084), _REL10),
            TableColumn("AE-S", lambda: make_case1("allen_eberly"), SAME, _RABI, (0.233, 0.162, 0.123), _REL10),
            TableColumn("STA-S", lambda: make_case1("sta", n=0.5), SAME, _RABI, (0.165, 0.117, 0.091), _REL10),
        ],
    },
    2: {
        "N": (5, 7, 9),
        "step": 5e-3,
        "limit": 3.0,
        "columns": [
            TableColumn("Flat pi-A", lambda: make_case1("flat_pi"), ALTERNATING, _DET, (0.72, 0.52, 0.40),
                        Tolerance("abs", 0.02), closed_form=_flat_pi_closed_form(ALTERNATING)),
            TableColumn("Flat pi-S", lambda: make_case1("flat_pi"), SAME, _DET, (2.21, 1.91, 1.71),
                        Tolerance("abs", 0.02), closed_form=_flat_pi_closed_form(SAME)),
            TableColumn("Gaussian-A", lambda: make_case1("resonant_gaussian"), ALTERNATING, _DET,
                        (0.32, 0.22, 0.17), _REL10, remark=_GAUSS_WINDOW),
            TableColumn("Gaussian-S", lambda: make_case1("resonant_gaussian"), SAME, _DET,
                        (0.68, 0.58, 0.52), Tolerance("rel", 0.15), remark=_GAUSS_WINDOW),
        ],
    },
    3: {
        "N": (4, 6, 8),
        "step": 1e-3,
        "limit": 0.5,
        "columns": [
            TableColumn("CDS-SF", lambda: make_case2("cds"), SAME, _ARM_S, (0.369, 0.225, 0.184),
                        Tolerance("abs", 0.01)),
            TableColumn("CDS-AA", lambda: make_case2("cds"), ALTERNATING, _ARM_ALT, (0.406, 0.264, 0.198),
                        Tolerance("abs", 0.01)),
            TableColumn("CDS-SA", lambda: make_case2("cds"), SAME, _ARM_ALT, (0.267, 0.178, 0.184),
                        Tolerance("abs", 0.01)),
            TableColumn("Gaussian-AA", lambda: make_case2("stirap_gaussian"), ALTERNATING, _ARM_ALT,
                        (0.206, 0.137, 0.103), _REL10, order=ALTERNATE_TIME_REVERSAL),
            TableColumn("sech-AA", lambda: make_case2("stirap_sech"), ALTERNATING, _ARM_ALT,
                        (0.120, 0.080, 0.060), _REL10, order=ALTERNATE_TIME_REVERSAL),
            TableColumn("sin-AA", lambda: make_case2("stirap_sin"), ALTERNATING, _ARM_ALT,
                        (0.561, 0.375, 0.282), _REL10, order=ALTERNATE_TIME_REVERSAL),
            TableColumn("sin2-AA", lambda: make_case2("stirap_sin2"), ALTERNATING, _ARM_ALT,
                        (0.720, 0.482, 0.362), _REL10, order=ALTERNATE_TIME_REVERSAL),
        ],
    },
}


@dataclass(frozen=True)
class TableCell:
    table: int
    scheme: str
    N: int
    computed: Optional[float]
    paper: float
    tolerance: Tolerance
    note: str = ""

    @property
    def abs_dev(self) -> Optional[float]:
        return None if self.computed is None else abs(self.computed - self.paper)

    @property
    def rel_dev(self) -> Optional[float]:
        return None if self.computed is None else abs(self.computed - self.paper) / abs(self.paper)

    @property
    def passed(self) -> bool:
        return self.computed is not None and self.tolerance.accepts(self.computed, self.paper)


def table_column_fwhm(table_id: int, scheme: str, integrator: IntegratorConfig | None = None,
                      tolerance: Tolerance | None = None) -> list:
    """Compute one column of a FWHM table; returns one :class:`TableCell` per N."""
    table = TABLES[table_id]
    column = next((c for c in table["columns"] if c.scheme == scheme), None)
    if column is None:
        raise KeyError(f"table {table_id} has no column {scheme!r}")
    for_n = column.evaluator(max(table["N"]), integrator)
    cells = []
    for N, paper in zip(table["N"], column.paper):
        note = column.remark
        try:
            width = scan_fwhm(for_n(N), table["step"], table["limit"])
            if width is None:
                note = "; ".join(filter(None, [note, "no half-maximum crossing inside the error range"]))
        except DegenerateProfile as exc:
            width, note = None, "; ".join(filter(None, [note, f"degenerate: {exc}"]))
        cells.append(TableCell(table_id, scheme, N, width, paper, tolerance or column.tolerance, note))
    return cells


def reproduce_table(table_id: int, integrator: IntegratorConfig | None = None,
                    tolerance: Tolerance | None = None) -> list:
    """Every cell of FWHM table 1, 2 or 3, column by column."""
    if table_id not in TABLES:
        raise ValueError(f"unknown table {table_id}; expected 1, 2 or 3")
    cells = []
    for column in TABLES[table_id]["columns"]:
        cells.extend(table_column_fwhm(table_id, column.scheme, integrator, tolerance))
    return cells


__all__ = [
    "DegenerateProfile",
    "SweepConfig",
    "SweepResult",
    "TABLES",
    "TableCell",
    "Tolerance",
    "default_grid",
    "fwhm",
    "q_sensitivity",
    "reproduce_table",
    "scan_fwhm",
    "sequence_evaluator",
    "sweep",
    "table_column_fwhm",
]
