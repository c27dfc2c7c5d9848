"""Cross-module property checks run by ``memsdyn validate``."""

from dataclasses import dataclass
from typing import List

import numpy as np

from . import correlations as corr
from .dynamics import HamiltonianSpec, closed_form_evolve, evolve, paper_evolved_state
from .errors import MemsdynError
from .linalg import dagger, purity
from .states import (
    MEMS,
    RHO_M,
    RHO_N,
    StateSpec,
    make_mems,
    make_rho_m,
    make_rho_n,
    s_max,
    swap_unitary,
)
from .sweeps import phi_window_physical, phi_window_violation


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


def _mems(gamma, as_printed):
    return make_mems(gamma, as_printed=as_printed)


def check_trace(as_printed=False):
    worst = max(abs(np.trace(_mems(g, as_printed).m) - 1) for g in (0.2, 0.4, 0.6, 0.8))
    return worst < 1e-10, f"max |Tr - 1| = {worst:.3e}"


def check_unitary_equivalence(as_printed=False):
    u = swap_unitary()
    worst = 0.0
    for g in (0.7, 0.8, 0.9, 0.2, 0.4, 0.6):
        rot = u @ _mems(g, as_printed).m @ dagger(u)
        worst = max(worst, np.linalg.norm(rot - make_rho_n(g, 0.0).m))
    return worst < 1e-12, f"max Frobenius distance = {worst:.3e}"


def check_evolved_mems(as_printed=False):
    worst = 0.0
    for g in (0.2, 0.6):
        for b in (0.0, 1.0):
            ham = HamiltonianSpec(1.0, b)
            spec = StateSpec(MEMS, gamma=g)
            for t in np.linspace(0, 2 * np.pi, 20):
                got = evolve(_mems(g, as_printed), ham, t).m
                worst = max(worst, np.max(np.abs(got - paper_evolved_state(spec, ham, t))))
    return worst < 1e-12, f"max entry deviation = {worst:.3e}"


def _family_grid(as_printed=False):
    yield StateSpec(MEMS, gamma=0.4, as_printed=as_printed)
    yield StateSpec(MEMS, gamma=0.8)
    yield StateSpec(RHO_N, c=0.5, theta=0.7)
    yield StateSpec(RHO_N, c=0.8)
    yield StateSpec(RHO_M, c=0.5, s=1 / 8, phi=0.6)
    yield StateSpec(RHO_M, c=0.5, s=1 / 2, phi=1.2)
    yield StateSpec(RHO_M, c=0.5, s=7 / 10, phi=3.0)


def check_purity_invariance(as_printed=False):
    worst = 0.0
    for st in _family_grid(as_printed):
        rho = st.build()
        for t in (0.3, 1.7, 5.0):
            worst = max(worst, abs(purity(evolve(rho, HamiltonianSpec(1.0, 0.5), t).m) - purity(rho.m)))
    return worst < 1e-12, f"max purity drift = {worst:.3e}"


def check_closed_form(as_printed=False):
    worst = 0.0
    for st in _family_grid(as_printed):
        rho = st.build()
        for j in (0.5, 1.0, 2.0):
            for b in (0.0, 1.0):
                ham = HamiltonianSpec(j, b)
                for t in np.linspace(0, 2 * np.pi, 20):
                    worst = max(worst, np.max(np.abs(closed_form_evolve(st, ham, t).m - evolve(rho, ham, t).m)))
    return worst < 1e-12, f"max entry deviation = {worst:.3e}"


def check_field_independence(as_printed=False, fields=(0.0, 0.5, 2.0)):
    worst = 0.0
    for st in (StateSpec(MEMS, gamma=0.3, as_printed=as_printed), StateSpec(RHO_M, c=0.5, s=0.5, phi=1.2)):
        rho = st.build()
        for t in (0.4, 1.1):
            vals = []
            for b in fields:
                r = evolve(rho, HamiltonianSpec(1.0, b), t)
                vals.append((corr.concurrence(r), corr.quantum_discord(r), corr.linear_entropy(r)))
            vals = np.array(vals)
            worst = max(worst, float(np.max(np.ptp(vals, axis=0))))
    return worst < 1e-9, f"max spread over B = {worst:.3e}"


def check_entropy_identities(as_printed=False):
    worst = 0.0
    for s in (1 / 8, 1 / 2, 7 / 10):
        (w, *_) = phi_window_physical(0.5, s)
        for phi in np.linspace(w.lo, w.hi, 7)[1:-1]:
            worst = max(worst, abs(corr.linear_entropy(make_rho_m(0.5, s, phi)) - s))
    for c in np.linspace(0.02, 0.98, 25):
        worst = max(worst, abs(corr.linear_entropy(make_rho_n(c)) - s_max(c)))
    return worst < 1e-12, f"max identity residual = {worst:.3e}"


def check_concurrence_paths(as_printed=False):
    rng = np.random.default_rng(0)
    worst = 0.0
    for _ in range(200):
        d = rng.dirichlet(np.ones(4))
        m = np.diag(d).astype(complex)
        m[0, 3] = np.sqrt(d[0] * d[3]) * rng.uniform() * np.exp(2j * np.pi * rng.uniform())
        m[1, 2] = np.sqrt(d[1] * d[2]) * rng.uniform() * np.exp(2j * np.pi * rng.uniform())
        m[3, 0], m[2, 1] = np.conj(m[0, 3]), np.conj(m[1, 2])
        worst = max(worst, abs(corr.wootters_concurrence(m) - corr.concurrence_x(m)))
    return worst < 1e-10, f"max |C - C_x| = {worst:.3e}"


def check_windows(as_printed=False):
    (w1, *_) = phi_window_violation(0.5, 1 / 8)
    (w2, *_) = phi_window_violation(0.5, 1 / 2)
    w3 = phi_window_violation(0.5, 7 / 10)
    ok = (
        abs(w1.lo - 0.5466) < 5e-3
        and abs(w1.hi - 0.65605) < 1e-3
        and abs(w2.lo - 0.926) < 5e-3
        and not w3
    )
    return ok, f"rho1m ({w1.lo:.6f}, {w1.hi:.6f}); rho2m onset {w2.lo:.6f}; rho3m windows {len(w3)}"


CHECKS: List[tuple] = [
    ("trace of MEMS branches", check_trace),
    ("swap unitary maps MEMS onto rho-n", check_unitary_equivalence),
    ("evolved MEMS matches closed form", check_evolved_mems),
    ("purity invariance under evolution", check_purity_invariance),
    ("closed-form evolution equals propagator", check_closed_form),
    ("field independence of C, Q, S_L", check_field_independence),
    ("linear-entropy identities", check_entropy_identities),
    ("X-state concurrence equals Wootters", check_concurrence_paths),
    ("phi windows", check_windows),
]


def run_checks(as_printed: bool = False, fields=(0.0, 0.5, 2.0)) -> List[CheckResult]:
    out = []
    for name, fn in CHECKS:
        kwargs = {"as_printed": as_printed}
        if fn is check_field_independence:
            kwargs["fields"] = fields
        try:
            ok, detail = fn(**kwargs)
        except MemsdynError as exc:
            ok, detail = False, str(exc)
        out.append(CheckResult(name, bool(ok), detail))
    return out

