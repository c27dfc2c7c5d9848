"""Time sweeps, phi-window search and entanglement sudden-death detection.

Window searches scan a uniform pre-grid for changes of a boolean predicate
and then bisect each bracket for 60 iterations, so the returned endpoints
are far tighter than the requested resolution.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

import numpy as np

from . import correlations as corr
from .dynamics import (
    PAPER,
    PHYSICAL,
    HamiltonianSpec,
    evolve,
    paper_evolved_state,
    paper_linear_entropy,
)
from .errors import ParamOutOfRange
from .linalg import herm_eig
from .states import PSD_TOL, StateSpec, rho_m_matrix

PHYSICALITY = "physicality"
VIOLATION = "violation"
SUDDEN_DEATH = "sudden-death"

PRE_GRID = 2048
BISECT_ITERS = 60
DEFAULT_SAMPLES = 400
TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class Window:
    lo: float
    hi: float
    kind: str

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"empty window ({self.lo}, {self.hi})")

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)


@dataclass(frozen=True)
class SweepSpec:
    state: StateSpec
    ham: HamiltonianSpec
    t_grid: tuple
    mode: str = PHYSICAL
    # paper mode only: run the discord optimizer on the printed matrix
    force_discord: bool = False

    def __post_init__(self):
        grid = np.asarray(self.t_grid, dtype=float)
        if grid.ndim != 1 or len(grid) == 0:
            raise ParamOutOfRange("t_grid must be a nonempty 1-D sequence")
        if not np.all(np.isfinite(grid)) or np.any(np.diff(grid) <= 0):
            raise ParamOutOfRange("t_grid must be finite and strictly ascending")
        if self.mode not in (PHYSICAL, PAPER):
            raise ParamOutOfRange(f"unknown mode {self.mode!r}")
        object.__setattr__(self, "t_grid", tuple(float(t) for t in grid))


@dataclass(frozen=True)
class SweepRow:
    t: float
    report: corr.CorrelationReport
    physical: bool = True
    # paper mode: printed S(t), and its excess over the physical S_L
    paper_linear_entropy: Optional[float] = None
    divergence: Optional[float] = None
    matrix: Optional[np.ndarray] = field(default=None, repr=False, compare=False)


def time_grid(j: float = 1.0, samples: int = DEFAULT_SAMPLES, t_max: Optional[float] = None) -> tuple:
    """Uniform grid of ``samples`` times covering Jt in [0, 2 pi] by default."""
    if samples < 1:
        raise ParamOutOfRange("samples must be >= 1")
    if t_max is None:
        t_max = TWO_PI / abs(j) if j else TWO_PI
    if samples == 1:
        return (0.0,)
    return tuple(np.linspace(0.0, t_max, samples))


def _state_at(spec: SweepSpec, rho0, t: float) -> np.ndarray:
    if spec.mode == PHYSICAL:
        return evolve(rho0, spec.ham, t).m
    return paper_evolved_state(spec.state, spec.ham, t)


def evaluate_row(spec: SweepSpec, rho0, t: float) -> SweepRow:
    if spec.mode == PHYSICAL:
        rho_t = evolve(rho0, spec.ham, t)
        return SweepRow(t, corr.report(rho_t), True, matrix=rho_t.m)
    m = paper_evolved_state(spec.state, spec.ham, t)
    rep = corr.raw_report(m)
    if spec.force_discord:
        rep = corr.raw_report(m, with_discord=True)
    s_paper = paper_linear_entropy(spec.state, t, spec.ham.j * spec.ham.j_scale)
    s_phys = corr.linear_entropy(rho0)
    return SweepRow(t, rep, rep.physical, s_paper, s_paper - s_phys, matrix=m)


def time_sweep(spec: SweepSpec) -> List[SweepRow]:
    """One row per grid time, in grid order."""
    # paper mode compares against the unvalidated initial matrix, so figure
    # parameters sitting just outside a physical window still run
    rho0 = spec.state.build() if spec.mode == PHYSICAL else spec.state.matrix()
    return [evaluate_row(spec, rho0, t) for t in spec.t_grid]


def _bisect(pred: Callable[[float], bool], a: float, b: float, iters: int = BISECT_ITERS) -> float:
    pa = pred(a)
    for _ in range(iters):
        mid = 0.5 * (a + b)
        if pred(mid) == pa:
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)


def predicate_windows(
    pred: Callable[[float], bool], lo: float, hi: float, kind: str, n: int = PRE_GRID, closed: bool = True
) -> List[Window]:
    """Maximal sub-intervals of [lo, hi] on which ``pred`` holds.

    ``closed=False`` treats ``hi`` as excluded (periodic domain); the scan then
    stops one grid step short of ``hi``.
    """
    xs = np.linspace(lo, hi, n + 1 if closed else n, endpoint=closed)
    flags = [bool(pred(float(x))) for x in xs]
    out = []
    start = lo if flags[0] else None
    for k in range(1, len(xs)):
        if flags[k] == flags[k - 1]:
            continue
        edge = _bisect(pred, float(xs[k - 1]), float(xs[k]))
        if flags[k]:
            start = edge
        else:
            out.append(Window(start, edge, kind))
            start = None
    if start is not None:
        if not closed and not pred(hi):
            # periodic domain: the last true stretch may end inside the final step
            end = _bisect(pred, float(xs[-1]), hi)
        else:
            end = hi
        if end > start:
            out.append(Window(start, end, kind))
    return out


def _check_resolution(resolution):
    if not 0 < resolution <= 1e-3:
        raise ParamOutOfRange(f"resolution={resolution} must be in (0, 1e-3]")


def _rho_m_min_eig(c, s):
    def f(phi):
        return float(herm_eig(rho_m_matrix(c, s, phi)).eigenvalues[0])

    return f


def phi_window_physical(c: float, s: float, resolution: float = 1e-3) -> List[Window]:
    """phi-intervals in [0, 2 pi) where rho^m(c, s, phi) is a valid state."""
    _check_resolution(resolution)
    rho_m_matrix(c, s, 0.0)  # NegativeD check
    min_eig = _rho_m_min_eig(c, s)
    return predicate_windows(lambda p: min_eig(p) >= -PSD_TOL, 0.0, TWO_PI, PHYSICALITY, closed=False)


def phi_window_violation(c: float, s: float, resolution: float = 1e-3) -> List[Window]:
    """phi-intervals where rho^m is physical and violates CHSH (M > 1)."""
    _check_resolution(resolution)
    rho_m_matrix(c, s, 0.0)
    min_eig = _rho_m_min_eig(c, s)

    def pred(phi):
        return min_eig(phi) >= -PSD_TOL and corr.horodecki_m(rho_m_matrix(c, s, phi)) > 1.0

    return predicate_windows(pred, 0.0, TWO_PI, VIOLATION, closed=False)


def sudden_death_intervals(
    rows: Sequence[SweepRow], threshold: float = 1e-9, *, spec: SweepSpec
) -> List[Window]:
    """Maximal t-intervals where the concurrence is at most ``threshold``.

    Brackets come from ``rows``; endpoints are bisected on the exactly
    evolved state produced by ``spec``, never interpolated.
    """
    if not rows:
        return []
    ts = [r.t for r in rows]
    dead = [r.report.concurrence <= threshold for r in rows]
    rho0 = spec.state.build() if spec.mode == PHYSICAL else None

    def pred(t):
        m = _state_at(spec, rho0, t)
        c = corr.concurrence(m) if spec.mode == PHYSICAL else corr.concurrence_raw(m)
        return c <= threshold

    out = []
    start = ts[0] if dead[0] else None
    for k in range(1, len(ts)):
        if dead[k] == dead[k - 1]:
            continue
        edge = _bisect(pred, ts[k - 1], ts[k])
        if dead[k]:
            start = edge
        else:
            out.append(Window(start, edge, SUDDEN_DEATH))
            start = None
    if start is not None and ts[-1] > start:
        out.append(Window(start, ts[-1], SUDDEN_DEATH))
    return out
