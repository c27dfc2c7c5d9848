"""State families: MEMS, Werner, rho^n and the two-parameter rho^m.

All constructors return a validated :class:`DensityMatrix`. The MEMS
constructor can also reproduce the uncorrected low-gamma branch as it is
usually misprinted (corner weight gamma/2 on the |11> population); such
states are tagged ``"as-printed"`` and skip only the trace check.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import NegativeD, NotHermitian, NotPSD, ParamOutOfRange, TraceNotOne, Unphysical
from .linalg import HERMITIAN_TOL, SX, I2, as_matrix, herm_eig, hermiticity_error, kron

TRACE_TOL = 1e-10
PSD_TOL = 1e-9
MEMS_SPLIT = 2.0 / 3.0

MEMS = "mems"
WERNER = "werner"
RHO_N = "rho-n"
RHO_M = "rho-m"
FAMILIES = (MEMS, WERNER, RHO_N, RHO_M)

AS_PRINTED = "as-printed"


@dataclass(frozen=True)
class DensityMatrix:
    m: np.ndarray
    tag: Optional[str] = None
    min_eigenvalue: float = 0.0
    trace_error: float = 0.0
    hermitian_error: float = 0.0

    def __post_init__(self):
        self.m.setflags(write=False)

    @property
    def eigenvalues(self) -> np.ndarray:
        return herm_eig(self.m).eigenvalues


@dataclass(frozen=True)
class StateSpec:
    """A family tag plus the parameters that family needs.

    ``gamma`` is used by MEMS/Werner, ``c`` by rho-n/rho-m, and ``s``/``phi``
    by rho-m only. ``theta`` is the coherence phase of rho-n/rho-m.
    """

    family: str
    gamma: Optional[float] = None
    c: Optional[float] = None
    s: Optional[float] = None
    phi: Optional[float] = None
    theta: float = 0.0
    as_printed: bool = field(default=False, compare=False)

    def __post_init__(self):
        required = {
            MEMS: ("gamma",),
            WERNER: ("gamma",),
            RHO_N: ("c",),
            RHO_M: ("c", "s", "phi"),
        }
        if self.family not in required:
            raise ParamOutOfRange(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        for name in required[self.family]:
            if getattr(self, name) is None:
                raise ParamOutOfRange(f"family {self.family} requires parameter {name!r}")
        for name in ("gamma", "c", "s", "phi"):
            if name not in required[self.family] and getattr(self, name) is not None:
                raise ParamOutOfRange(f"family {self.family} does not take parameter {name!r}")

    def build(self) -> DensityMatrix:
        if self.family == MEMS:
            return make_mems(self.gamma, as_printed=self.as_printed)
        if self.family == WERNER:
            return make_werner(self.gamma)
        if self.family == RHO_N:
            return make_rho_n(self.c, self.theta)
        return make_rho_m(self.c, self.s, self.phi, self.theta)

    def matrix(self) -> np.ndarray:
        """The family matrix without any physicality check."""
        if self.family == MEMS:
            return mems_matrix(self.gamma, self.as_printed)
        if self.family == WERNER:
            return self.gamma * bell_phi_plus() + (1 - self.gamma) / 4 * np.eye(4, dtype=complex)
        if self.family == RHO_N:
            q = 0.5 * self.c * np.exp(1j * self.theta)
            if self.c < MEMS_SPLIT:
                return _inner_x(1 / 3, q, 1 / 3, 1 / 3)
            return _inner_x(self.c / 2, q, self.c / 2, 1 - self.c)
        return rho_m_matrix(self.c, self.s, self.phi, self.theta)


def validate_state(m, *, skip_trace: bool = False, tag: Optional[str] = None) -> DensityMatrix:
    """Wrap ``m`` as a DensityMatrix after checking Hermiticity, trace and PSD."""
    m = np.array(as_matrix(m, 4))
    herr = hermiticity_error(m)
    if herr > HERMITIAN_TOL:
        raise NotHermitian(f"NotHermitian: max|m - m^dagger| = {herr:.3e} > {HERMITIAN_TOL:g}")
    tr = np.trace(m)
    terr = abs(tr - 1.0)
    if terr > TRACE_TOL and not skip_trace:
        raise TraceNotOne(f"TraceNotOne: trace = {tr.real:.12g} (deviation {terr:.3e})")
    lo = float(herm_eig(m).eigenvalues[0])
    if lo < -PSD_TOL:
        raise NotPSD(f"NotPSD: min eigenvalue {lo:.6e} < -{PSD_TOL:g}")
    return DensityMatrix(m, tag=tag, min_eigenvalue=lo, trace_error=float(terr), hermitian_error=herr)


def _check_unit(name, x, lo=0.0, hi=1.0):
    if x is None or not np.isfinite(x) or not lo <= x <= hi:
        raise ParamOutOfRange(f"{name}={x} outside [{lo}, {hi}]")


def mems_matrix(gamma: float, as_printed: bool = False) -> np.ndarray:
    g = gamma
    if g >= MEMS_SPLIT:
        m = np.diag([g / 2, 1 - g, 0.0, g / 2]).astype(complex)
    else:
        # as printed, the |11> population reads gamma/2 (trace 2/3 + gamma/2)
        m = np.diag([1 / 3, 1 / 3, 0.0, g / 2 if as_printed else 1 / 3]).astype(complex)
    m[0, 3] = m[3, 0] = g / 2
    return m


def make_mems(gamma: float, as_printed: bool = False) -> DensityMatrix:
    """Maximally entangled mixed state, branch chosen by gamma vs 2/3."""
    _check_unit("gamma", gamma)
    printed = as_printed and gamma < MEMS_SPLIT
    return validate_state(
        mems_matrix(gamma, as_printed), skip_trace=printed, tag=AS_PRINTED if printed else None
    )


def bell_phi_plus() -> np.ndarray:
    v = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
    return np.outer(v, v.conj())


def make_werner(gamma: float) -> DensityMatrix:
    _check_unit("gamma", gamma)
    return validate_state(StateSpec(WERNER, gamma=gamma).matrix())


def _inner_x(p, q, r, corner_44) -> np.ndarray:
    m = np.zeros((4, 4), dtype=complex)
    m[1, 1], m[2, 2], m[3, 3] = p, r, corner_44
    m[1, 2] = q
    m[2, 1] = np.conj(q)
    return m


def make_rho_n(c: float, theta: float = 0.0) -> DensityMatrix:
    if c is None or not 0.0 < c < 1.0:
        raise ParamOutOfRange(f"c={c} outside (0, 1)")
    return validate_state(StateSpec(RHO_N, c=c, theta=theta).matrix())


def d_parameter(c: float, s: float) -> float:
    return -c * c / 12 - s / 8 + 1 / 9


def s_max(c: float) -> float:
    """Largest linear entropy compatible with concurrence ``c``."""
    _check_unit("c", c)
    if c < MEMS_SPLIT:
        return 8 / 9 - 2 / 3 * c * c
    return 8 / 3 * c * (1 - c)


C_MAX_RHO_M = 1 / np.sqrt(2)


def rho_m_matrix(c: float, s: float, phi: float, theta: float = 0.0) -> np.ndarray:
    """Unvalidated rho^m matrix. Raises NegativeD when D(c, s) < 0."""
    d = d_parameter(c, s)
    if d < 0:
        raise NegativeD(f"NegativeD: D(c={c}, s={s}) = {d:.6e} < 0")
    rd = np.sqrt(d)
    sp, cp = np.sin(phi), np.cos(phi)
    r3 = np.sqrt(3.0)
    return _inner_x(
        1 / 3 + rd * (sp + r3 * cp),
        0.5 * c * np.exp(1j * theta),
        1 / 3 + rd * (sp - r3 * cp),
        1 / 3 - 2 * rd * sp,
    )


def make_rho_m(c: float, s: float, phi: float, theta: float = 0.0) -> DensityMatrix:
    if c is None or not 0.0 < c <= C_MAX_RHO_M + 1e-15:
        raise ParamOutOfRange(f"c={c} outside (0, 1/sqrt(2)]")
    _check_unit("s", s)
    if not np.isfinite(phi) or not np.isfinite(theta):
        raise ParamOutOfRange("phi and theta must be finite")
    m = rho_m_matrix(c, s, phi, theta)
    lo = float(herm_eig(m).eigenvalues[0])
    if lo < -PSD_TOL:
        raise Unphysical(
            f"Unphysical: min eigenvalue {lo:.6e} < -{PSD_TOL:g} (phi={phi} outside the admissible window)"
        )
    return validate_state(m)


def swap_unitary() -> np.ndarray:
    """Permutation with rows (e3, e4, e1, e2); equals X on qubit A."""
    return kron(SX, I2)
