import numpy as np
import pytest
from hypothesis import given

from fermispec.circuits import Circuit, cx, cy, cz, givens, rz, swap, x, z
from fermispec import statevector as sv

from strategies import any_circuits


def test_z_on_zero():
    psi = sv.run_circuit(Circuit(1, (z(0),)))
    assert np.allclose(psi, sv.zero_state(1))


def test_cz_on_11():
    psi = sv.basis_state(2, (1, 1))
    out = sv.apply_gate(psi, cz(0, 1))
    assert np.allclose(out, -sv.basis_state(2, (1, 1)))


def test_givens_convention():
    # GIVENS(pi/4) on |01> -> cos(pi/4)|01> + i sin(pi/4)|10>
    psi = sv.basis_state(2, (0, 1))
    out = sv.apply_gate(psi, givens(np.pi / 4, 0, 1))
    want = (np.cos(np.pi / 4) * sv.basis_state(2, (0, 1))
            + 1j * np.sin(np.pi / 4) * sv.basis_state(2, (1, 0)))
    assert np.allclose(out, want)


def test_givens_matches_matrix_exponential():
    from scipy.linalg import expm
    xx = np.kron([[0, 1], [1, 0]], [[0, 1], [1, 0]])
    yy = np.kron([[0, -1j], [1j, 0]], [[0, -1j], [1j, 0]])
    for theta in (0.3, -1.1, np.pi / 4):
        want = expm(1j * (xx + yy) * theta / 2)
        got = sv.gate_matrix(givens(theta, 0, 1))
        assert np.max(np.abs(want - got)) < 1e-12


def test_cy_equals_cz_after_cx():
    u = sv.circuit_unitary(Circuit(2, (cx(0, 1), cz(0, 1))))
    assert np.allclose(u, sv.gate_matrix(cy(0, 1)))


def test_fswap_is_swap_then_cz():
    from fermispec.circuits import fswap
    got = sv.gate_matrix(fswap(0, 1))
    want = sv.gate_matrix(swap(0, 1)) @ sv.gate_matrix(cz(0, 1))
    assert np.allclose(got, want)


def test_norm_preserved_random():
    rng = np.random.default_rng(0)
    psi = rng.normal(size=8) + 1j * rng.normal(size=8)
    psi = (psi / np.linalg.norm(psi)).reshape(2, 2, 2)
    c = Circuit(3, (givens(0.7, 0, 2), cz(1, 2), rz(0.3, 0), cx(2, 0)))
    out = sv.run_circuit(c, psi)
    assert abs(np.linalg.norm(out) - 1) < 1e-12


def test_occupations():
    c = Circuit(3, (x(1),))
    occ = sv.occupations(sv.run_circuit(c))
    assert np.allclose(occ, [0, 1, 0])


def test_occupations_batched():
    batch = np.stack([sv.basis_state(2, (0, 1)), sv.basis_state(2, (1, 1))], axis=-1)
    occ = sv.occupations(batch, num_qubits=2)
    assert occ.shape == (2, 2)
    assert np.allclose(occ, [[0, 1], [1, 1]])


def test_qubit_cap():
    with pytest.raises(ValueError):
        sv.zero_state(21)


def test_jw_anticommutation():
    n = 4
    ops = [sv.annihilation_operator(n, j) for j in range(n)]
    for i in range(n):
        for j in range(n):
            anti = ops[i] @ ops[j].conj().T + ops[j].conj().T @ ops[i]
            want = np.eye(2 ** n) if i == j else np.zeros((2 ** n, 2 ** n))
            assert np.max(np.abs(anti - want)) < 1e-12
            assert np.max(np.abs(ops[i] @ ops[j] + ops[j] @ ops[i])) < 1e-12


def test_momentum_mode_anticommutation():
    n = 4
    for m in range(n):
        k = 2 * np.pi * m / n
        ck = sv.momentum_annihilation(n, k)
        anti = ck @ ck.conj().T + ck.conj().T @ ck
        assert np.max(np.abs(anti - np.eye(2 ** n))) < 1e-12


@given(any_circuits)
def test_circuit_unitary_is_unitary(c):
    u = sv.circuit_unitary(c)
    dim = 2 ** c.num_qubits
    assert np.max(np.abs(u.conj().T @ u - np.eye(dim))) < 1e-10
