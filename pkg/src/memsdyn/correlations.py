"""Scalar correlation measures for two-qubit states.

Entropies are in bits. Discord measures qubit A projectively and minimizes
the conditional entropy of B over the Bloch sphere: the three coordinate
axes, then a 64 x 128 spherical grid, then Nelder-Mead refinement from the
best grid point.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize

from .errors import NotPSD, NotXForm, OptimizerFailure
from .linalg import PAULIS, SYSTEM_A, SYSTEM_B, SY, as_matrix, herm_eig, matrix_sqrt_psd, partial_trace, purity
from .states import PSD_TOL, DensityMatrix

GRID_POLAR = 64
GRID_AZIMUTH = 128
REFINE_FATOL = 1e-10
REFINE_MAXITER = 200
DISCORD_CLAMP = 1e-9
ZERO_PROB = 1e-14
X_FORM_TOL = 1e-12

_YY = np.kron(SY, SY)
_SWAP = np.eye(4)[[0, 2, 1, 3]].astype(complex)


def _mat(rho) -> np.ndarray:
    return rho.m if isinstance(rho, DensityMatrix) else as_matrix(rho)


class BlochVector(NamedTuple):
    nx: float
    ny: float
    nz: float

    @classmethod
    def from_angles(cls, polar, azimuth):
        return cls(
            math.sin(polar) * math.cos(azimuth),
            math.sin(polar) * math.sin(azimuth),
            math.cos(polar),
        )

    @classmethod
    def normalized(cls, v):
        v = np.asarray(v, dtype=float)
        n = np.linalg.norm(v)
        if not n > 0:
            raise ValueError("measurement axis must be nonzero")
        return cls(*(v / n))


AXES = {
    "x": BlochVector(1.0, 0.0, 0.0),
    "y": BlochVector(0.0, 1.0, 0.0),
    "z": BlochVector(0.0, 0.0, 1.0),
}


def _entropy_of(w) -> float:
    w = np.clip(np.real(w), 0.0, 1.0)
    w = w[w > 0]
    return float(-np.sum(w * np.log2(w)))


def vn_entropy(m) -> float:
    w = herm_eig(_mat(m)).eigenvalues
    if w[0] < -PSD_TOL:
        raise NotPSD(f"NotPSD: min eigenvalue {w[0]:.6e}")
    return _entropy_of(w)


def linear_entropy(rho) -> float:
    return 4.0 / 3.0 * (1.0 - purity(_mat(rho)))


def spin_flip(rho) -> np.ndarray:
    return _YY @ np.conj(_mat(rho)) @ _YY


def _require_psd(m):
    w = herm_eig(m).eigenvalues
    if w[0] < -PSD_TOL:
        raise NotPSD(f"NotPSD: min eigenvalue {w[0]:.6e}")


def concurrence(rho, fast_path: bool = True) -> float:
    """Wootters concurrence.

    X-form inputs take the closed form; it stays accurate on rank-deficient
    states, where sqrt(rho) turns round-off eigenvalues of order 1e-17 into
    errors of order 1e-9. Everything else goes through
    :func:`wootters_concurrence`.
    """
    m = _mat(rho)
    _require_psd(m)
    if fast_path and is_x_form(m):
        return concurrence_x(m)
    return wootters_concurrence(m)


def wootters_concurrence(rho) -> float:
    """General route via the Hermitian form sqrt(rho) rho~ sqrt(rho)."""
    m = _mat(rho)
    _require_psd(m)
    r = matrix_sqrt_psd(m)
    mu = herm_eig(r @ spin_flip(m) @ r).eigenvalues
    lam = np.sqrt(np.clip(mu, 0.0, None))[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def concurrence_raw(m) -> float:
    """Wootters formula on an arbitrary 4x4 array (no physicality assumed).

    Used for printed matrices that may be non-Hermitian; the eigenvalues of
    rho rho~ are taken from the general eigensolver and clamped to be real
    and non-negative.
    """
    m = as_matrix(m, 4)
    mu = np.linalg.eigvals(m @ spin_flip(m))
    lam = np.sort(np.sqrt(np.clip(np.real(mu), 0.0, None)))[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def _non_x_magnitude(m) -> float:
    off = np.array(m, dtype=complex)
    for i in range(4):
        off[i, i] = 0
    off[0, 3] = off[3, 0] = off[1, 2] = off[2, 1] = 0
    return float(np.max(np.abs(off)))


def is_x_form(m, tol=X_FORM_TOL) -> bool:
    return _non_x_magnitude(m) <= tol


def check_x_form(m, tol=X_FORM_TOL):
    worst = _non_x_magnitude(m)
    if worst > tol:
        raise NotXForm(f"NotXForm: largest non-X entry {worst:.3e}")


def concurrence_x(rho) -> float:
    m = _mat(rho)
    check_x_form(m)
    d = np.clip(np.real(np.diag(m)), 0.0, None)
    return float(
        2.0
        * max(
            0.0,
            abs(m[0, 3]) - math.sqrt(d[1] * d[2]),
            abs(m[1, 2]) - math.sqrt(d[0] * d[3]),
        )
    )


def _conditional_entropies(m, n) -> np.ndarray:
    """Vectorized sum_k p_k S(rho_B|k) for unit axes ``n`` of shape (N, 3)."""
    n = np.atleast_2d(n)
    r = m.reshape(2, 2, 2, 2)
    # Tr_A[(P x I) rho (P x I)] = Tr_A[(P x I) rho] since P^2 = P, and
    # P = (I + n.sigma)/2 is linear in n: reduce each Pauli once.
    ops = np.stack([np.eye(2), *PAULIS])
    blocks = np.einsum("nka,abkc->nbc", ops, r)  # (4, 2, 2)
    rest = np.tensordot(n.astype(complex), blocks[1:], axes=(1, 0))
    total = np.zeros(len(n))
    for sign in (1.0, -1.0):
        sub = 0.5 * (blocks[0] + sign * rest)
        p = np.real(sub[:, 0, 0] + sub[:, 1, 1])
        gap = np.sqrt(np.real(sub[:, 0, 0] - sub[:, 1, 1]) ** 2 + 4 * np.abs(sub[:, 0, 1]) ** 2)
        ok = p > ZERO_PROB
        safe_p = np.where(ok, p, 1.0)
        for lam in ((p + gap) / 2, (p - gap) / 2):
            x = np.clip(lam / safe_p, 0.0, 1.0)
            with np.errstate(divide="ignore", invalid="ignore"):
                h = np.where(x > 0, -x * np.log2(np.where(x > 0, x, 1.0)), 0.0)
            total += np.where(ok, p * h, 0.0)
    return total


def _oriented(m, side):
    if side == SYSTEM_A:
        return m
    if side == SYSTEM_B:
        return _SWAP @ m @ _SWAP
    raise ValueError(f"side must be 'A' or 'B', got {side!r}")


def conditional_entropy(rho, axis: BlochVector, side: str = SYSTEM_A) -> float:
    """Average entropy of the unmeasured qubit after measuring ``side`` along ``axis``."""
    m = _mat(rho)
    _require_psd(m)
    n = np.asarray(BlochVector.normalized(axis), dtype=float)
    return float(_conditional_entropies(_oriented(m, side), n)[0])


def _sphere_grid(n_polar, n_azimuth):
    polar = np.arange(n_polar) * (np.pi / n_polar)
    azimuth = np.arange(n_azimuth) * (2 * np.pi / n_azimuth)
    tp, ta = np.meshgrid(polar, azimuth, indexing="ij")
    tp, ta = tp.ravel(), ta.ravel()
    axes = np.stack([np.sin(tp) * np.cos(ta), np.sin(tp) * np.sin(ta), np.cos(tp)], axis=1)
    return tp, ta, axes


@dataclass(frozen=True)
class DiscordResult:
    discord: float
    axis: BlochVector
    conditional_entropy: float
    refine_iterations: int


def minimize_conditional_entropy(m, side: str = SYSTEM_A):
    """Best measurement axis and its conditional entropy.

    Ties are broken by candidate order (x, y, z, grid in index order,
    refinement), so the result is deterministic.
    """
    m = _oriented(m, side)
    cand = np.array([AXES["x"], AXES["y"], AXES["z"]], dtype=float)
    cvals = _conditional_entropies(m, cand)
    best_i = int(np.argmin(cvals))
    best_val, best_axis = float(cvals[best_i]), cand[best_i]

    tp, ta, grid = _sphere_grid(GRID_POLAR, GRID_AZIMUTH)
    gvals = _conditional_entropies(m, grid)
    gi = int(np.argmin(gvals))
    if gvals[gi] < best_val:
        best_val, best_axis = float(gvals[gi]), grid[gi]

    def objective(x):
        axis = np.array(BlochVector.from_angles(x[0], x[1]))
        return float(_conditional_entropies(m, axis)[0])

    x0 = np.array([tp[gi], ta[gi]])
    step = np.array([np.pi / GRID_POLAR, 2 * np.pi / GRID_AZIMUTH])
    simplex = np.array([x0, x0 + [step[0], 0.0], x0 + [0.0, step[1]]])
    res = minimize(
        objective,
        x0,
        method="Nelder-Mead",
        options={
            "initial_simplex": simplex,
            "fatol": REFINE_FATOL,
            "xatol": np.inf,
            "maxiter": REFINE_MAXITER,
        },
    )
    if not res.success:
        raise OptimizerFailure(f"OptimizerFailure: {res.message} after {res.nit} iterations")
    if res.fun < best_val:
        best_val = float(res.fun)
        best_axis = np.array(BlochVector.from_angles(*res.x))
    return best_val, BlochVector(*map(float, best_axis)), int(res.nit)


def discord_details(rho, side: str = SYSTEM_A) -> DiscordResult:
    m = _mat(rho)
    _require_psd(m)
    measured = partial_trace(m, side)
    cond, axis, nit = minimize_conditional_entropy(m, side)
    q = vn_entropy(measured) - vn_entropy(m) + cond
    if -DISCORD_CLAMP <= q < 0:
        q = 0.0
    return DiscordResult(q, axis, cond, nit)


def quantum_discord(rho, side: str = SYSTEM_A) -> float:
    return discord_details(rho, side).discord


def correlation_matrix(rho) -> np.ndarray:
    m = _mat(rho)
    return np.array([[np.real(np.trace(m @ np.kron(a, b))) for b in PAULIS] for a in PAULIS])


def horodecki_m(rho) -> float:
    """Sum of the two largest eigenvalues of T^T T; CHSH is violated iff > 1."""
    t = correlation_matrix(rho)
    w = np.linalg.eigvalsh(t.T @ t)
    return float(w[-1] + w[-2])


def lambda_param(rho) -> float:
    return float((1.0 - 2.0 * np.real(_mat(rho)[3, 3])) ** 2)


def x_state_m(rho) -> float:
    """Closed form C^2 + max(C^2, lambda) for single-sector X states."""
    m = _mat(rho)
    check_x_form(m)
    if abs(m[0, 3]) > 1e-12 and abs(m[1, 2]) > 1e-12:
        raise NotXForm("NotXForm: both coherence sectors are populated")
    c = concurrence_x(m)
    return c * c + max(c * c, lambda_param(m))


@dataclass(frozen=True)
class CorrelationReport:
    concurrence: float
    discord: float
    linear_entropy: float
    purity: float
    horodecki_m: float
    lam: float
    bell_violated: bool
    min_eigenvalue: float
    physical: bool = True


def report(rho, *, with_discord: bool = True, side: str = SYSTEM_A) -> CorrelationReport:
    m = _mat(rho)
    w = herm_eig(m).eigenvalues
    if w[0] < -PSD_TOL:
        raise NotPSD(f"NotPSD: min eigenvalue {w[0]:.6e}")
    hm = horodecki_m(m)
    p = purity(m)
    return CorrelationReport(
        concurrence=concurrence(m),
        discord=quantum_discord(m, side) if with_discord else float("nan"),
        linear_entropy=4.0 / 3.0 * (1.0 - p),
        purity=p,
        horodecki_m=hm,
        lam=lambda_param(m),
        bell_violated=hm > 1.0,
        min_eigenvalue=float(w[0]),
    )


def raw_report(m, *, with_discord: bool = False, side: str = SYSTEM_A) -> CorrelationReport:
    """Report for a matrix that may not be a valid state.

    Concurrence, purity, M and lambda are formulas on any matrix; the minimum
    eigenvalue is that of the Hermitian part. Discord is only attempted when
    asked for, and then on the Hermitian part.
    """
    m = as_matrix(m, 4)
    herm = 0.5 * (m + m.conj().T)
    w = np.linalg.eigvalsh(herm)
    hm = horodecki_m(m)
    p = purity(m)
    physical = (
        float(np.max(np.abs(m - m.conj().T))) <= 1e-10
        and abs(np.trace(m) - 1) <= 1e-10
        and w[0] >= -PSD_TOL
    )
    q = float("nan")
    if with_discord:
        q = quantum_discord(herm, side)
    return CorrelationReport(
        concurrence=concurrence_raw(m),
        discord=q,
        linear_entropy=4.0 / 3.0 * (1.0 - p),
        purity=p,
        horodecki_m=hm,
        lam=lambda_param(m),
        bell_violated=hm > 1.0,
        min_eigenvalue=float(w[0]),
        physical=bool(physical),
    )
