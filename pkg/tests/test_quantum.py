import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from parasphere.quantum import (
    GhzAngles,
    HardySolveError,
    Ket,
    basis_ket,
    expectation,
    ghz4_expectation,
    ghz4_state,
    hardy_amplitudes,
    hardy_closed_form,
    hardy_find_directions,
    hardy_roots,
    hardy_state,
    pauli_dot,
    singlet_state,
    spin_ket,
    tensor,
)

from conftest import unit_vectors
from oracles import kron_all, ket, projector_up, spin_op

THETAS = (0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4)
# |fourth amplitude| at the solved directions, frozen from the projector oracle
FROZEN_AMP4 = (0.13628723669750295, 0.24299687316326216, 0.2966386619182721, 0.2857018359018329,
               0.21611945834708177, 0.1150587755472395, 0.02806597906533028)


@given(unit_vectors(3), unit_vectors(3))
def test_singlet_correlation_against_explicit_operators(a, b):
    psi = (ket("01") - ket("10")) / np.sqrt(2)
    oracle = np.vdot(psi, kron_all([spin_op(a), spin_op(b)]) @ psi).real
    assert expectation(singlet_state(), tensor([pauli_dot(a), pauli_dot(b)])) == pytest.approx(oracle, abs=1e-12)
    assert oracle == pytest.approx(-a @ b, abs=1e-12)


def test_ghz_state_amplitudes():
    psi = ghz4_state()
    assert psi.amplitude("++--") == pytest.approx(1 / np.sqrt(2))
    assert psi.amplitude("--++") == pytest.approx(-1 / np.sqrt(2))
    assert psi.dim == 16


@given(st.lists(st.floats(0, np.pi), min_size=4, max_size=4),
       st.lists(st.floats(0, 2 * np.pi), min_size=4, max_size=4))
def test_ghz_expectation_against_kron_oracle(theta, phi):
    ang = GhzAngles(tuple(theta), tuple(phi))
    psi = (ket("0011") - ket("1100")) / np.sqrt(2)
    oracle = np.vdot(psi, kron_all([spin_op(n) for n in ang.directions()]) @ psi).real
    assert ghz4_expectation(theta, phi) == pytest.approx(oracle, abs=1e-12)


@given(unit_vectors(3))
def test_spin_kets_are_orthonormal_eigenvectors(n):
    up, down = spin_ket(n, +1), spin_ket(n, -1)
    np.testing.assert_allclose(pauli_dot(n) @ up, up, atol=1e-12)
    np.testing.assert_allclose(pauli_dot(n) @ down, -down, atol=1e-12)
    assert abs(np.vdot(up, down)) < 1e-12


def test_hardy_state_form():
    psi = hardy_state(0.5)
    c, s = np.cos(0.5), np.sin(0.5)
    assert psi.amplitude("++") == pytest.approx(-s / np.sqrt(1 + c * c))
    assert psi.amplitude("+-") == pytest.approx(psi.amplitude("-+"))
    assert psi.amplitude("--") == 0


@pytest.mark.parametrize("theta, frozen", list(zip(THETAS, FROZEN_AMP4)))
def test_hardy_directions(theta, frozen):
    sol = hardy_find_directions(theta)
    amps = hardy_amplitudes(theta, sol.a, sol.a2, sol.b, sol.b2)
    assert max(abs(z) for z in amps[:3]) < 1e-8
    assert abs(amps[3]) == pytest.approx(hardy_closed_form(theta), abs=1e-6)
    assert abs(amps[3]) == pytest.approx(frozen, abs=1e-12)
    # joint probability through explicit projectors agrees with |amplitude|^2
    psi = hardy_state(theta).amplitudes
    proj = np.kron(projector_up(sol.a2), projector_up(sol.b2))
    assert np.vdot(psi, proj @ psi).real == pytest.approx(abs(amps[3]) ** 2, abs=1e-12)


def test_hardy_roots_all_share_the_amplitude():
    roots = hardy_roots(0.7)
    assert len(roots) >= 2
    for r in roots:
        assert abs(hardy_amplitudes(0.7, r.a, r.a2, r.b, r.b2)[3]) == pytest.approx(hardy_closed_form(0.7), abs=1e-9)


def test_hardy_validation():
    with pytest.raises(ValueError):
        hardy_find_directions(0.0)
    with pytest.raises(HardySolveError):
        hardy_find_directions(0.5, tol=0.0)


def test_expectation_and_ket_validation():
    with pytest.raises(ValueError):
        Ket(np.array([1.0, 1.0]))
    with pytest.raises(ValueError):
        expectation(basis_ket("+"), np.array([[0, 1], [0, 0]]))
    with pytest.raises(ValueError):
        expectation(basis_ket("+"), np.eye(4))
    with pytest.raises(ValueError):
        tensor([])
    with pytest.raises(ValueError):
        pauli_dot([1.0, 1.0, 0.0])
    with pytest.raises(ValueError):
        GhzAngles((0.0,) * 3, (0.0,) * 4)
    with pytest.raises(ValueError):
        GhzAngles((np.nan,) * 4, (0.0,) * 4)
