import numpy as np
import pytest

from tribell import qalg
from conftest import random_density_matrix, random_pure_state


def test_tensor_identity():
    assert np.allclose(qalg.tensor(qalg.IDENTITY_2, qalg.IDENTITY_2), np.eye(4))


def test_tensor_zz_diagonal_entry():
    zz = qalg.tensor(qalg.PAULI_Z, qalg.PAULI_Z)
    # |00> is the +1 eigenvector: diagonal entry at basis index 0 is +1
    assert zz[0, 0] == pytest.approx(1.0)


def test_tensor_xxx_ghz_expectation():
    # independent oracle: plain numpy kron chain and trace
    ghz = np.zeros(8, dtype=complex)
    ghz[0] = ghz[7] = 1 / np.sqrt(2)
    rho = np.outer(ghz, ghz.conj())
    xxx = np.kron(np.kron(qalg.PAULI_X, qalg.PAULI_X), qalg.PAULI_X)
    expected = np.trace(rho @ xxx).real
    assert expected == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(qalg.tensor(qalg.tensor(qalg.PAULI_X, qalg.PAULI_X), qalg.PAULI_X), xxx)


def test_tensor_rejects_overflow():
    with pytest.raises(ValueError):
        qalg.tensor(np.eye(4), np.eye(4))


def test_tensor_associativity(rng):
    mats = [
        (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))) for _ in range(3)
    ]
    left = qalg.tensor(qalg.tensor(mats[0], mats[1]), mats[2])
    right = qalg.tensor(mats[0], qalg.tensor(mats[1], mats[2]))
    assert np.max(np.abs(left - right)) <= 1e-14


def test_partial_trace_ghz_single_qubit():
    ghz = np.zeros(8, dtype=complex)
    ghz[0] = ghz[7] = 1 / np.sqrt(2)
    reduced = qalg.partial_trace(qalg.projector(ghz), keep=[1])
    assert np.allclose(reduced, np.eye(2) / 2, atol=1e-14)


def test_partial_trace_gghz_two_qubit_marginal():
    eta = 0.57
    psi = np.zeros(8, dtype=complex)
    psi[0], psi[7] = np.cos(eta), np.sin(eta)
    reduced = qalg.partial_trace(qalg.projector(psi), keep=[1, 2])
    expected = np.diag([np.cos(eta) ** 2, 0.0, 0.0, np.sin(eta) ** 2])
    assert np.allclose(reduced, expected, atol=1e-14)


def test_partial_trace_product_state():
    zero3 = np.zeros(8, dtype=complex)
    zero3[0] = 1.0
    reduced = qalg.partial_trace(qalg.projector(zero3), keep=[2, 3])
    expected = np.zeros((4, 4))
    expected[0, 0] = 1.0
    assert np.allclose(reduced, expected)


@pytest.mark.parametrize("keep", [[], [1, 2, 3], [0], [4]])
def test_partial_trace_invalid_subsets(keep):
    rho = np.eye(8) / 8
    with pytest.raises(ValueError):
        qalg.partial_trace(rho, keep=keep)


def test_partial_trace_preserves_trace_and_psd(rng):
    for _ in range(20):
        rho = random_density_matrix(rng)
        for keep in ([1], [2], [3], [1, 2], [1, 3], [2, 3]):
            red = qalg.partial_trace(rho, keep)
            assert np.trace(red).real == pytest.approx(1.0, abs=1e-12)
            assert np.linalg.eigvalsh(red).min() >= -1e-10


def test_partial_trace_sequential_matches_direct(rng):
    rho = random_density_matrix(rng)
    step = qalg.partial_trace_dims(qalg.partial_trace(rho, keep=[1, 2]), [2, 2], keep=[0])
    direct = qalg.partial_trace(rho, keep=[1])
    assert np.allclose(step, direct, atol=1e-13)


def test_hermitian_eigenvalues_basics():
    assert np.allclose(qalg.hermitian_eigenvalues(np.eye(2) / 2), [0.5, 0.5])
    assert np.allclose(qalg.hermitian_eigenvalues(qalg.PAULI_Z), [1.0, -1.0])
    eta = np.pi / 4
    diag = np.diag([np.cos(eta) ** 2, 0, 0, np.sin(eta) ** 2]).astype(complex)
    assert np.allclose(qalg.hermitian_eigenvalues(diag), [0.5, 0.5, 0.0, 0.0])


def test_hermitian_eigenvalues_rejects_non_hermitian():
    with pytest.raises(ValueError):
        qalg.hermitian_eigenvalues(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_eigenvalue_sum_matches_trace(rng):
    for _ in range(10):
        m = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
        m = m + m.conj().T
        evals = qalg.hermitian_eigenvalues(m)
        assert np.sum(evals) == pytest.approx(np.trace(m).real, abs=1e-10)
        assert np.all(np.diff(evals) <= 1e-12)  # descending


def test_entropy_edge_cases(rng):
    psi = random_pure_state(rng, dim=4)
    assert qalg.von_neumann_entropy(qalg.projector(psi)) == pytest.approx(0.0, abs=1e-10)
    assert qalg.von_neumann_entropy(np.eye(2) / 2) == pytest.approx(1.0)
    assert qalg.von_neumann_entropy(np.eye(8) / 8) == pytest.approx(3.0)


def test_entropy_zero_iff_pure(rng):
    for _ in range(20):
        psi = random_pure_state(rng)
        rho = qalg.projector(psi)
        assert qalg.von_neumann_entropy(rho) <= 1e-10
        assert qalg.hermitian_eigenvalues(rho)[0] == pytest.approx(1.0, abs=1e-10)


def test_check_density_matrix_rejects_bad_inputs():
    with pytest.raises(ValueError):
        qalg.check_density_matrix(np.eye(8))  # trace 8
    bad = np.eye(2) / 2
    bad = bad.astype(complex)
    bad[0, 1] = 0.5j  # not Hermitian
    with pytest.raises(ValueError):
        qalg.check_density_matrix(bad)
    with pytest.raises(ValueError):
        qalg.check_density_matrix(np.diag([1.5, -0.5]).astype(complex))


def test_check_state_vector_norm():
    with pytest.raises(ValueError):
        qalg.check_state_vector(np.array([1.0, 1.0]))


def test_permute_qubits_roundtrip(rng):
    rho = random_density_matrix(rng)
    swapped = qalg.permute_qubits(rho, (1, 3, 2))
    assert np.allclose(qalg.permute_qubits(swapped, (1, 3, 2)), rho)
    psi = random_pure_state(rng)
    assert np.allclose(
        qalg.permute_qubits(qalg.permute_qubits(psi, (2, 3, 1)), (3, 1, 2)), psi
    )


def test_bloch_helpers():
    v = qalg.bloch_vector(0.0, 0.0)
    assert np.allclose(v, [0, 0, 1])
    assert np.allclose(qalg.bloch_observable(v), qalg.PAULI_Z)
    plus, minus = qalg.bloch_projectors(v)
    assert np.allclose(plus + minus, np.eye(2))
    assert np.allclose(plus @ plus, plus, atol=1e-15)
