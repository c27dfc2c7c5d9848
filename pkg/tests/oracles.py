"""Reference computations that share no code path with the package.

Everything here is brute force: explicit index loops, general (non-Hermitian)
eigensolvers, scipy's Pade exponential, and a dense Bloch-sphere grid for
discord written in the correlation-tensor picture rather than with projectors.
"""

import numpy as np
import scipy.linalg

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


def kron_loops(a, b):
    out = np.zeros((4, 4), dtype=complex)
    for i1 in range(2):
        for i2 in range(2):
            for j1 in range(2):
                for j2 in range(2):
                    out[2 * i1 + i2, 2 * j1 + j2] = a[i1, j1] * b[i2, j2]
    return out


def ptrace_loops(m, keep):
    out = np.zeros((2, 2), dtype=complex)
    for x in range(2):
        for y in range(2):
            for k in range(2):
                if keep == "A":
                    out[x, y] += m[2 * x + k, 2 * y + k]
                else:
                    out[x, y] += m[2 * k + x, 2 * k + y]
    return out


def expm_pade(h, t):
    return scipy.linalg.expm(-1j * np.asarray(h) * t)


def wootters_eigvals(m):
    """Concurrence from eigenvalues of the non-Hermitian product rho rho~."""
    yy = np.kron(SY, SY)
    flip = yy @ m.conj() @ yy
    mu = np.linalg.eigvals(m @ flip)
    lam = np.sort(np.sqrt(np.abs(mu.real)))[::-1]
    return max(0.0, lam[0] - lam[1] - lam[2] - lam[3])


def _h2(p):
    p = np.clip(p, 0.0, 1.0)
    out = np.zeros_like(p)
    for q in (p, 1 - p):
        ok = q > 0
        out[ok] -= q[ok] * np.log2(q[ok])
    return out


def _entropy(m):
    w = np.clip(np.linalg.eigvals(m).real, 0, 1)
    w = w[w > 1e-300]
    return float(-np.sum(w * np.log2(w)))


def bloch_data(m):
    paulis = (SX, SY, SZ)
    eye = np.eye(2)
    a = np.array([np.trace(m @ np.kron(s, eye)).real for s in paulis])
    b = np.array([np.trace(m @ np.kron(eye, s)).real for s in paulis])
    t = np.array([[np.trace(m @ np.kron(s, u)).real for u in paulis] for s in paulis])
    return a, b, t


def conditional_entropy_bloch(m, n):
    """S(B | measure A along n) from Bloch data: post-measurement Bloch vector of B
    is (b +/- T^T n) / (1 +/- a.n)."""
    a, b, t = bloch_data(m)
    n = np.atleast_2d(n)
    an = n @ a
    tn = n @ t
    total = np.zeros(len(n))
    for sg in (1.0, -1.0):
        p = (1 + sg * an) / 2
        ok = p > 1e-14
        v = (b + sg * tn) / np.where(ok, 2 * p, 1.0)[:, None]
        r = np.linalg.norm(v, axis=1)
        total += np.where(ok, p * _h2((1 + r) / 2), 0.0)
    return total


def discord_grid(m, n_polar=1024, n_azimuth=2048, chunk=64):
    """Discord (bits, measuring A) minimized over a dense polar x azimuth grid.

    The conditional entropy is even in n, and n -> -n maps grid point (k, l)
    to (n_polar - k, l + n_azimuth / 2), so rows k <= n_polar / 2 already
    attain the full-grid minimum.
    """
    m = np.asarray(m, dtype=complex)
    polar = np.arange(n_polar // 2 + 1) * np.pi / n_polar
    az = np.arange(n_azimuth) * 2 * np.pi / n_azimuth
    best = np.inf
    for k in range(0, len(polar), chunk):
        th = polar[k:k + chunk, None]
        n = np.stack(
            [np.sin(th) * np.cos(az), np.sin(th) * np.sin(az), np.cos(th) * np.ones_like(az)], axis=-1
        ).reshape(-1, 3)
        best = min(best, float(conditional_entropy_bloch(m, n).min()))
    rho_a = ptrace_loops(m, "A")
    return _entropy(rho_a) - _entropy(m) + best


def random_x_state(rng):
    d = rng.dirichlet(np.ones(4))
    m = np.diag(d).astype(complex)
    m[0, 3] = np.sqrt(d[0] * d[3]) * rng.uniform() * np.exp(2j * np.pi * rng.uniform())
    m[1, 2] = np.sqrt(d[1] * d[2]) * rng.uniform() * np.exp(2j * np.pi * rng.uniform())
    m[3, 0], m[2, 1] = np.conj(m[0, 3]), np.conj(m[1, 2])
    return m


def random_density(rng, rank=4):
    g = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
    m = g @ g.conj().T
    return m / np.trace(m).real


def random_qubit_state(rng):
    v = rng.normal(size=3)
    v *= rng.uniform() / np.linalg.norm(v)
    return 0.5 * (np.eye(2) + v[0] * SX + v[1] * SY + v[2] * SZ)


def random_unitary2(rng):
    q, r = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
    return q * (np.diag(r) / np.abs(np.diag(r)))
