import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from memsdyn import correlations as corr
from memsdyn.correlations import AXES, BlochVector
from memsdyn.dynamics import HamiltonianSpec, evolve
from memsdyn.errors import NegativeD, NotPSD, NotXForm, Unphysical
from memsdyn.linalg import SYSTEM_B, kron
from memsdyn.states import bell_phi_plus, make_mems, make_rho_m, make_rho_n, make_werner

from oracles import (
    conditional_entropy_bloch,
    random_density,
    random_qubit_state,
    random_unitary2,
    random_x_state,
    wootters_eigvals,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)

# discord values from the 1024 x 2048 Bloch-grid oracle in oracles.py
ORACLE_DISCORD = [
    (lambda: make_werner(1 / 3).m, 0.12581458369391108),
    (lambda: make_werner(0.5).m, 0.26248318376373414),
    (lambda: make_rho_m(0.5, 1 / 8, 0.6).m, 0.2940326036162942),
    (lambda: evolve(make_mems(0.0), HamiltonianSpec(1, 0), 0.5).m, 0.25924923898745356),
]


def test_vn_entropy_values():
    assert corr.vn_entropy(bell_phi_plus()) == pytest.approx(0.0, abs=1e-12)
    assert corr.vn_entropy(np.eye(4) / 4) == pytest.approx(2.0)
    assert corr.vn_entropy(np.diag([0.5, 0.5, 0, 0])) == pytest.approx(1.0)


def test_vn_entropy_rejects_non_psd():
    with pytest.raises(NotPSD):
        corr.vn_entropy(np.diag([0.5, 0.5, 0.5, -0.5]))


def test_linear_entropy_values():
    assert corr.linear_entropy(np.eye(4) / 4) == pytest.approx(1.0)
    assert corr.linear_entropy(bell_phi_plus()) == pytest.approx(0.0, abs=1e-14)
    for phi in (0.56, 0.6, 0.65):
        assert corr.linear_entropy(make_rho_m(0.5, 1 / 8, phi)) == pytest.approx(1 / 8, abs=1e-12)


@pytest.mark.parametrize(
    "m, expect",
    [
        (bell_phi_plus(), 1.0),
        (make_werner(0.8).m, 0.7),
        (make_rho_n(0.5, 1.2).m, 0.5),
        (np.eye(4) / 4, 0.0),
    ],
)
def test_concurrence_values(m, expect):
    assert corr.concurrence(m) == pytest.approx(expect, abs=1e-10)
    assert corr.concurrence(m, fast_path=False) == pytest.approx(expect, abs=1e-7)


@settings(max_examples=100)
@given(seeds)
def test_concurrence_matches_eigvals_oracle(seed):
    m = random_density(np.random.default_rng(seed))
    assert corr.concurrence(m) == pytest.approx(wootters_eigvals(m), abs=1e-9)


@settings(max_examples=100)
@given(seeds)
def test_x_fast_path_matches_general(seed):
    m = random_x_state(np.random.default_rng(seed))
    assert corr.concurrence_x(m) == pytest.approx(corr.wootters_concurrence(m), abs=1e-10)
    assert corr.concurrence_x(m) == pytest.approx(wootters_eigvals(m), abs=1e-9)


@settings(max_examples=50)
@given(seeds)
def test_concurrence_local_unitary_invariant(seed):
    rng = np.random.default_rng(seed)
    m = random_density(rng)
    u = kron(random_unitary2(rng), random_unitary2(rng))
    assert corr.concurrence(u @ m @ u.conj().T) == pytest.approx(corr.concurrence(m), abs=1e-9)


def test_concurrence_x_rejects_general():
    with pytest.raises(NotXForm):
        corr.concurrence_x(random_density(np.random.default_rng(1)))


def test_concurrence_raw_accepts_non_hermitian():
    m = np.eye(4, dtype=complex) / 4
    m[1, 2] = 0.1j
    assert corr.concurrence_raw(m) >= 0.0


def test_conditional_entropy_cases():
    rng = np.random.default_rng(5)
    a, b = random_qubit_state(rng), random_qubit_state(rng)
    sb = corr.vn_entropy(np.kron(np.eye(2), b) / 2)  # = 1 + S(b)
    for axis in AXES.values():
        assert corr.conditional_entropy(kron(a, b), axis) == pytest.approx(sb - 1, abs=1e-12)
    assert corr.conditional_entropy(bell_phi_plus(), AXES["z"]) == pytest.approx(0.0, abs=1e-12)
    w = make_werner(0.5).m
    assert corr.conditional_entropy(w, AXES["z"]) == pytest.approx(corr.conditional_entropy(w, AXES["x"]), abs=1e-14)


@settings(max_examples=50)
@given(seeds, st.floats(0, np.pi), st.floats(0, 2 * np.pi))
def test_conditional_entropy_matches_bloch_oracle(seed, polar, az):
    m = random_density(np.random.default_rng(seed))
    n = BlochVector.from_angles(polar, az)
    got = corr.conditional_entropy(m, n)
    assert got == pytest.approx(conditional_entropy_bloch(m, np.array(n))[0], abs=1e-12)


def test_bloch_vector_normalized():
    assert np.allclose(BlochVector.normalized([0, 0, 2]), [0, 0, 1])
    with pytest.raises(ValueError):
        BlochVector.normalized([0, 0, 0])


def test_discord_bell():
    assert corr.quantum_discord(bell_phi_plus()) == pytest.approx(1.0, abs=1e-6)
    assert corr.quantum_discord(bell_phi_plus(), SYSTEM_B) == pytest.approx(1.0, abs=1e-6)


@settings(max_examples=20)
@given(seeds)
def test_discord_zero_for_classical_states(seed):
    rng = np.random.default_rng(seed)
    diag = np.diag(rng.dirichlet(np.ones(4))).astype(complex)
    assert corr.quantum_discord(diag) == pytest.approx(0.0, abs=1e-8)
    prod = kron(random_qubit_state(rng), random_qubit_state(rng))
    assert corr.quantum_discord(prod) == pytest.approx(0.0, abs=1e-8)


@pytest.mark.parametrize("make, expect", ORACLE_DISCORD)
def test_discord_against_grid_oracle(make, expect):
    assert corr.quantum_discord(make()) == pytest.approx(expect, abs=1e-6)


@settings(max_examples=15)
@given(seeds)
def test_discord_local_unitary_invariant(seed):
    rng = np.random.default_rng(seed)
    m = random_x_state(rng)
    u = kron(random_unitary2(rng), random_unitary2(rng))
    assert corr.quantum_discord(u @ m @ u.conj().T) == pytest.approx(corr.quantum_discord(m), abs=1e-6)


def test_werner_separable_but_discordant():
    rep = corr.report(make_werner(1 / 3))
    assert rep.concurrence == pytest.approx(0.0, abs=1e-12)
    assert rep.discord > 0.1


def test_discord_details_axis_is_unit():
    res = corr.discord_details(make_werner(0.5))
    assert np.linalg.norm(res.axis) == pytest.approx(1.0)
    assert res.discord == pytest.approx(res.conditional_entropy + 1 - corr.vn_entropy(make_werner(0.5)), abs=1e-12)


def test_correlation_matrix_bell():
    assert np.allclose(corr.correlation_matrix(bell_phi_plus()), np.diag([1, -1, 1]), atol=1e-15)


def test_horodecki_values():
    assert corr.horodecki_m(bell_phi_plus()) == pytest.approx(2.0)
    assert corr.horodecki_m(np.eye(4) / 4) == pytest.approx(0.0, abs=1e-15)
    assert corr.horodecki_m(make_rho_m(0.5, 1 / 8, 0.6)) > 1.0
    # rho3^m peaks at phi = pi/2 with M = 1/4 + (1/3 + 2/(3 sqrt 10))^2 = 0.5461...
    peak = 0.25 + (1 / 3 + 2 / (3 * np.sqrt(10))) ** 2
    assert corr.horodecki_m(make_rho_m(0.5, 7 / 10, np.pi / 2)) == pytest.approx(peak, abs=1e-12)
    for phi in np.linspace(0, 2 * np.pi, 64, endpoint=False):
        assert corr.horodecki_m(make_rho_m(0.5, 7 / 10, phi)) <= peak + 1e-12


def test_lambda_param():
    m = np.zeros((4, 4))
    m[3, 3] = 0.5
    assert corr.lambda_param(m) == pytest.approx(0.0)
    assert corr.lambda_param(np.diag([1.0, 0, 0, 0])) == pytest.approx(1.0)


@settings(max_examples=50)
@given(st.floats(0.01, 0.7), st.floats(0, 2 * np.pi))
def test_x_state_m_matches_horodecki_for_rho_m(c, phi):
    try:
        rho = make_rho_m(c, 1 / 8, phi)
    except (NegativeD, Unphysical):
        return
    assert corr.x_state_m(rho) == pytest.approx(corr.horodecki_m(rho), abs=1e-12)


def test_x_state_m_bell():
    assert corr.x_state_m(bell_phi_plus()) == pytest.approx(2.0)
    with pytest.raises(NotXForm):
        corr.x_state_m(make_werner(0.5).m + _both_sectors())


def _both_sectors():
    m = np.zeros((4, 4), dtype=complex)
    m[1, 2] = m[2, 1] = 0.01
    return m


def test_report_maximally_mixed():
    rep = corr.report(np.eye(4) / 4)
    assert rep.concurrence == 0 and rep.discord == pytest.approx(0, abs=1e-12)
    assert rep.linear_entropy == pytest.approx(1.0)
    assert rep.purity == pytest.approx(0.25)
    assert rep.horodecki_m == pytest.approx(0.0, abs=1e-15)
    assert not rep.bell_violated


def test_report_bell():
    rep = corr.report(bell_phi_plus())
    assert rep.concurrence == pytest.approx(1.0)
    assert rep.discord == pytest.approx(1.0, abs=1e-6)
    assert rep.linear_entropy == pytest.approx(0.0, abs=1e-14)
    assert rep.horodecki_m == pytest.approx(2.0)
    assert rep.bell_violated


def test_raw_report_flags_unphysical():
    m = np.eye(4, dtype=complex) / 4
    m[1, 2] = 0.3j
    rep = corr.raw_report(m)
    assert not rep.physical
    assert np.isnan(rep.discord)
    assert corr.raw_report(np.eye(4) / 4).physical
