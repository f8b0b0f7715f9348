import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fermispec.circuits import Circuit, cx, x
from fermispec.fft import fft_circuit
from fermispec.gaussian import (GaussianState, ParticleConservationError,
                                coupled_hamiltonian, dft_matrix,
                                evolve_gaussian, extract_mode_transform,
                                mode_propagator, momentum_occupations,
                                state_from_momentum_occupations, system_block,
                                transforms_equal_up_to_phase, vacuum_state)
from fermispec import statevector as sv

from strategies import pc_circuits


# ------------------------------------------------------- extraction

def test_extract_identity():
    assert np.allclose(extract_mode_transform(Circuit(4, ())), np.eye(4))


def test_extract_f2_is_dft2():
    from fermispec.fft import base_fft
    assert transforms_equal_up_to_phase(
        extract_mode_transform(base_fft(2)), dft_matrix(2), 1e-12)


def test_extract_compile9_is_dft9():
    t = extract_mode_transform(fft_circuit(9, 3))
    phase = t[0, 0] / dft_matrix(9)[0, 0]
    assert np.max(np.abs(t - phase * dft_matrix(9))) < 1e-10


def test_extract_rejects_non_conserving():
    with pytest.raises(ParticleConservationError):
        extract_mode_transform(Circuit(2, (cx(0, 1),)))
    with pytest.raises(ParticleConservationError):
        extract_mode_transform(Circuit(1, (x(0),)))


@given(pc_circuits)
@settings(max_examples=40)
def test_cross_oracle_sector_vs_dense(c):
    """Sector transfer == transfer inferred from dense single-excitation runs."""
    n = c.num_qubits
    t = extract_mode_transform(c)
    s = np.zeros((n, n), dtype=complex)
    for j in range(n):
        bits = [0] * n
        bits[j] = 1
        out = sv.run_circuit(c, sv.basis_state(n, bits)).ravel()
        for ell in range(n):
            s[ell, j] = out[1 << (n - 1 - ell)]
    vac = sv.run_circuit(c, sv.zero_state(n)).ravel()[0]
    t_dense = vac * s.conj().T
    assert np.max(np.abs(t - t_dense)) < 1e-11


@given(pc_circuits)
@settings(max_examples=30)
def test_transfer_is_unitary(c):
    t = extract_mode_transform(c)
    assert np.max(np.abs(t.conj().T @ t - np.eye(c.num_qubits))) < 1e-10


def test_cross_oracle_twelve_qubits():
    """Deterministic 12-qubit case of the sector/dense cross-oracle check."""
    from fermispec.circuits import Circuit, cz, fswap, givens, rz, s, swap, z
    rng = np.random.default_rng(99)
    n = 12
    gates = []
    for _ in range(40):
        a, b = rng.choice(n, size=2, replace=False)
        pick = rng.integers(5)
        if pick == 0:
            gates.append(givens(float(rng.uniform(-3, 3)), int(a), int(b)))
        elif pick == 1:
            gates.append(cz(int(a), int(b)))
        elif pick == 2:
            gates.append(fswap(int(a), int(b)))
        elif pick == 3:
            gates.append(rz(float(rng.uniform(-3, 3)), int(a)))
        else:
            gates.append(s(int(a)))
    c = Circuit(n, tuple(gates))
    t = extract_mode_transform(c)
    s_mat = np.zeros((n, n), dtype=complex)
    for j in range(n):
        bits = [0] * n
        bits[j] = 1
        out = sv.run_circuit(c, sv.basis_state(n, bits)).ravel()
        for ell in range(n):
            s_mat[ell, j] = out[1 << (n - 1 - ell)]
    vac = sv.run_circuit(c, sv.zero_state(n)).ravel()[0]
    assert np.max(np.abs(t - vac * s_mat.conj().T)) < 1e-11


# ------------------------------------------------------- Gaussian states

def test_evolve_identity_and_vacuum():
    state = state_from_momentum_occupations(np.array([1.0, 0.0, 0.5]))
    out = evolve_gaussian(state, np.eye(3))
    assert np.allclose(out.corr, state.corr)
    vac = vacuum_state(4)
    t = dft_matrix(4)
    assert np.max(np.abs(evolve_gaussian(vac, t).corr)) < 1e-14


def test_single_mode_spread_by_dft():
    n = 6
    corr = np.zeros((n, n), dtype=complex)
    corr[2, 2] = 1.0
    out = evolve_gaussian(GaussianState(corr), dft_matrix(n))
    assert np.max(np.abs(out.occupations() - 1 / n)) < 1e-12


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        evolve_gaussian(vacuum_state(3), np.eye(4))


def test_momentum_occupation_round_trip():
    rho = np.array([0.2, 0.9, 0.0, 1.0, 0.4])
    state = state_from_momentum_occupations(rho)
    assert np.max(np.abs(momentum_occupations(state) - rho)) < 1e-12


@given(st.integers(2, 8), st.data())
@settings(max_examples=30)
def test_purity_preserved(n, data):
    rho = np.array(data.draw(st.lists(st.sampled_from([0.0, 1.0]),
                                      min_size=n, max_size=n)))
    state = state_from_momentum_occupations(rho)
    h = coupled_hamiltonian(n, 1.0, 0.4, 0.7)[0::2, 0::2]  # any Hermitian works
    t = mode_propagator(h, 1.3)
    out = evolve_gaussian(state, t)
    c = out.corr
    assert np.max(np.abs(c @ c - c)) < 1e-10
    out.check()


# ------------------------------------------------------- coupled Hamiltonian

def test_decoupled_blocks_at_zero_epsilon():
    h = coupled_hamiltonian(5, 1.0, 0.0, 0.8)
    t = mode_propagator(h, 2.0)
    assert np.max(np.abs(t[0::2, 1::2])) < 1e-12
    assert np.max(np.abs(t[1::2, 0::2])) < 1e-12


def test_two_mode_mixing_amplitude():
    # nu = 0: each (c_j, d_j) pair mixes with |a'|^2 = sin^2(t*Omega0) eps^2/(w^2+eps^2)
    eps, omega, t = 0.7, 0.4, 2.3
    h = coupled_hamiltonian(3, 0.0, eps, omega)
    tr = mode_propagator(h, t)
    omega0 = 0.5 * np.sqrt(omega ** 2 + eps ** 2)
    want = np.sin(t * omega0) ** 2 * eps ** 2 / (omega ** 2 + eps ** 2)
    for j in range(3):
        assert abs(abs(tr[2 * j, 2 * j + 1]) ** 2 - want) < 1e-12


def test_system_block_spectrum():
    n = 200
    h = coupled_hamiltonian(n, 1.0, 0.0, 0.0)
    w = np.linalg.eigvalsh(system_block(h))
    ks = 2 * np.pi * np.arange(n) / n
    want = np.sort(2 * np.cos(ks))
    assert np.max(np.abs(w - want)) < 1e-10


def test_propagator_unitary():
    h = coupled_hamiltonian(4, 0.9, 0.3, 0.5)
    t = mode_propagator(h, 7.0)
    assert np.max(np.abs(t.conj().T @ t - np.eye(8))) < 1e-12
