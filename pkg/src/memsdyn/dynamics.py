"""XX Ising dynamics with a uniform z field.

Two evolution modes exist. ``PHYSICAL`` conjugates the state with the exact
propagator. ``PAPER`` returns the reference closed-form evolved matrices and
linear entropies verbatim, typos included, so they can be compared against
the physical result. Paper-mode matrices are raw arrays and are never assumed
to be valid states.
"""

from dataclasses import dataclass

import numpy as np

from .correlations import is_x_form
from .errors import NotXForm, ParamOutOfRange, UnsupportedFamily
from .linalg import PAULIS, I2, SZ, as_matrix, dagger, expm_i, kron
from .states import (
    MEMS,
    MEMS_SPLIT,
    RHO_M,
    RHO_N,
    DensityMatrix,
    StateSpec,
    validate_state,
)

PHYSICAL = "physical"
PAPER = "paper"
MODES = (PHYSICAL, PAPER)

# (c, s) pairs of the three printed rho^m instances, indexed 1..3
RHO_M_VARIANTS = {1: (0.5, 1 / 8), 2: (0.5, 1 / 2), 3: (0.5, 7 / 10)}


@dataclass(frozen=True)
class HamiltonianSpec:
    j: float = 1.0
    b: float = 0.0
    # multiplies J before building H; 1.0 keeps the inner-block angle at J*t
    j_scale: float = 1.0

    def __post_init__(self):
        if not (np.isfinite(self.j) and np.isfinite(self.b) and np.isfinite(self.j_scale)):
            raise ParamOutOfRange("J and B must be finite")


def build_hamiltonian(spec: HamiltonianSpec) -> np.ndarray:
    """H = (J/2)(XX + YY) + B(Z1 + Z2)."""
    sx, sy, _ = PAULIS
    j = spec.j * spec.j_scale
    return 0.5 * j * (np.kron(sx, sx) + np.kron(sy, sy)) + spec.b * (kron(SZ, I2) + kron(I2, SZ))


def propagator(spec: HamiltonianSpec, t: float) -> np.ndarray:
    return expm_i(build_hamiltonian(spec), t)


def evolve(rho, spec: HamiltonianSpec, t: float) -> DensityMatrix:
    if not np.isfinite(t):
        raise ParamOutOfRange(f"t={t} is not finite")
    m = rho.m if isinstance(rho, DensityMatrix) else as_matrix(rho, 4)
    u = propagator(spec, t)
    out = u @ m @ dagger(u)
    tag = rho.tag if isinstance(rho, DensityMatrix) else None
    return validate_state(out, skip_trace=tag is not None, tag=tag)


def x_form_evolve(m, spec: HamiltonianSpec, t: float) -> np.ndarray:
    """Analytic U(t) m U(t)^dagger for an X-form matrix."""
    m = as_matrix(m, 4)
    if not is_x_form(m):
        raise NotXForm("closed-form evolution needs an X-form matrix")
    jt = spec.j * spec.j_scale * t
    c2, s2 = np.cos(jt) ** 2, np.sin(jt) ** 2
    p, r, q = m[1, 1], m[2, 2], m[1, 2]
    out = np.zeros((4, 4), dtype=complex)
    out[0, 0], out[3, 3] = m[0, 0], m[3, 3]
    out[0, 3] = m[0, 3] * np.exp(-4j * spec.b * t)
    out[3, 0] = np.conj(out[0, 3])
    # the Im(q) terms vanish for real coherences (theta = 0) only
    s2jt = np.sin(2 * jt)
    out[1, 1] = p * c2 + r * s2 - s2jt * q.imag
    out[2, 2] = p * s2 + r * c2 + s2jt * q.imag
    out[1, 2] = c2 * q + s2 * np.conj(q) + 0.5j * s2jt * (p - r)
    out[2, 1] = np.conj(out[1, 2])
    return out


def closed_form_evolve(state: StateSpec, spec: HamiltonianSpec, t: float) -> DensityMatrix:
    if state.family not in (MEMS, RHO_N, RHO_M):
        raise UnsupportedFamily(
            f"closed-form evolution covers mems, rho-n and rho-m, not {state.family}; use evolve()"
        )
    rho = state.build()
    return validate_state(x_form_evolve(rho.m, spec, t), skip_trace=rho.tag is not None, tag=rho.tag)


def rho_m_variant(state: StateSpec) -> int:
    """Which of the three printed rho^m instances ``state`` is (1, 2 or 3)."""
    if state.family == RHO_M and state.theta == 0.0:
        for k, (c, s) in RHO_M_VARIANTS.items():
            if np.isclose(state.c, c, rtol=0, atol=1e-12) and np.isclose(state.s, s, rtol=0, atol=1e-12):
                return k
    raise UnsupportedFamily(
        "paper-mode rho-m needs theta=0, c=1/2 and s in {1/8, 1/2, 7/10}; "
        f"got c={state.c}, s={state.s}, theta={state.theta}"
    )


def _check_paper_mems(state: StateSpec):
    if state.family != MEMS or not state.gamma < MEMS_SPLIT:
        raise UnsupportedFamily("paper-mode MEMS covers only the gamma < 2/3 branch")


def paper_evolved_state(state: StateSpec, spec: HamiltonianSpec, t: float) -> np.ndarray:
    """Printed closed-form rho(t), transcribed verbatim. Returns a raw matrix."""
    jt = spec.j * spec.j_scale * t
    m = np.zeros((4, 4), dtype=complex)
    if state.family == MEMS:
        _check_paper_mems(state)
        g = state.gamma
        m[0, 0] = m[3, 3] = 1 / 3
        m[0, 3] = 0.5 * g * np.exp(-4j * spec.b * t)
        m[3, 0] = 0.5 * g * np.exp(4j * spec.b * t)
        m[1, 1] = np.cos(jt) ** 2 / 3
        m[2, 2] = np.sin(jt) ** 2 / 3
        m[1, 2] = 1j * np.sin(2 * jt) / 6
        m[2, 1] = -1j * np.sin(2 * jt) / 6
        return m
    variant = rho_m_variant(state)
    phi = state.phi
    if variant == 1:
        x = np.sqrt(129) * np.cos(2 * jt) * np.cos(phi)
        y = np.sqrt(43) * np.sin(phi)
        m[1, 1] = (x + y + 8) / 24
        m[1, 2] = (6 + 1j * x) / 24
        m[2, 1] = (6 - 1j * x) / 24
        m[2, 2] = (-x + y + 8) / 24
        m[3, 3] = (4 - y) / 12
        return m
    if variant == 2:
        a = np.sqrt(3) / 6 * np.cos(2 * jt) * np.cos(phi) + np.sin(phi)
        b = np.sqrt(3) * 1j / 6 * np.cos(phi) + np.sin(2 * jt)
        m[1, 1], m[2, 2] = 1 / 3 + a, 1 / 3 - a
        m[1, 2], m[2, 1] = 1 / 4 + b, 1 / 4 - b
        return m
    g = np.sqrt(30) / 60 * np.cos(2 * jt) * np.cos(phi) + np.sqrt(10) / 60 * np.sin(phi)
    h = 1j * np.cos(phi) * np.sin(2 * jt) / (2 * np.sqrt(30))
    m[1, 1], m[2, 2] = 1 / 3 + g, 1 / 3 - g
    m[1, 2], m[2, 1] = 1 / 4 + h, 1 / 4 - h
    return m


def paper_linear_entropy(state: StateSpec, t: float, j: float = 1.0) -> float:
    """Printed closed-form S(t), evaluated as written.

    The rho_3^m expression has an unbalanced bracket; it is read as
    (1/60)(-cos^2(2Jt) cos^2(phi) - sin^2(phi) + 40).
    """
    jt = j * t
    if state.family == MEMS:
        _check_paper_mems(state)
        return (25 - np.cos(4 * jt)) / 36
    variant = rho_m_variant(state)
    cc = np.cos(2 * jt) ** 2 * np.cos(state.phi) ** 2
    ss = np.sin(state.phi) ** 2
    if variant == 1:
        return (-43 * cc - 43 * ss + 64) / 96
    if variant == 2:
        return (-cc - ss + 4) / 6
    return (-cc - ss + 40) / 60


def paper_mode_supported(state: StateSpec) -> bool:
    try:
        if state.family == MEMS:
            _check_paper_mems(state)
        else:
            rho_m_variant(state)
    except UnsupportedFamily:
        return False
    return True

