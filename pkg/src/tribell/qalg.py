"""Dense complex linear algebra for one-, two- and three-qubit systems.

Everything downstream (states, channels, Bell operators, discord) is built on
the small set of exact operations in this module: Kronecker products, partial
traces, Hermitian spectra and von Neumann entropy.

Basis convention: a three-qubit computational basis index is
``b = 4*q1 + 2*q2 + q3`` with qubit 1 the most significant bit, i.e. qubit 1
is the leftmost factor of every Kronecker product.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

# Tolerances for the structural invariants of density matrices and state
# vectors. Eigenvalues in [-EIG_CLAMP, 0) are treated as exact zeros before
# logs and square roots (floating-point PSD drift).
HERMITICITY_ATOL = 1e-12
TRACE_ATOL = 1e-12
PSD_ATOL = 1e-10
NORM_ATOL = 1e-12
EIG_CLAMP = 1e-10

MAX_DIM = 8

IDENTITY_2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)


def _as_square(m: np.ndarray, name: str = "matrix") -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m.view(float))):
        raise ValueError(f"{name} contains non-finite entries")
    return m


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with the left factor most significant.

    The result dimension is capped at 8 (three qubits); larger products are
    rejected rather than silently growing.
    """
    a = _as_square(a, "left factor")
    b = _as_square(b, "right factor")
    for m in (a, b):
        d = m.shape[0]
        if d & (d - 1) or d == 0:
            raise ValueError(f"dimension {d} is not a power of two")
    if a.shape[0] * b.shape[0] > MAX_DIM:
        raise ValueError(
            f"tensor product dimension {a.shape[0] * b.shape[0]} exceeds {MAX_DIM}"
        )
    return np.kron(a, b)


def tensor_all(*factors: np.ndarray) -> np.ndarray:
    """Left-associated Kronecker product of several factors."""
    if not factors:
        raise ValueError("at least one factor required")
    out = _as_square(factors[0])
    for f in factors[1:]:
        out = tensor(out, f)
    return out


def projector(psi: np.ndarray) -> np.ndarray:
    """Rank-1 projector |psi><psi| of a state vector."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    return np.outer(psi, psi.conj())


def is_hermitian(m: np.ndarray, atol: float = HERMITICITY_ATOL) -> bool:
    m = np.asarray(m, dtype=complex)
    return bool(np.max(np.abs(m - m.conj().T)) <= atol)


def check_state_vector(psi: np.ndarray, name: str = "state") -> np.ndarray:
    """Validate a pure-state vector: dim in {2,4,8}, unit norm to 1e-12."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if psi.shape[0] not in (2, 4, 8):
        raise ValueError(f"{name} dimension must be 2, 4 or 8, got {psi.shape[0]}")
    if not np.all(np.isfinite(psi.view(float))):
        raise ValueError(f"{name} contains non-finite amplitudes")
    norm_sq = float(np.vdot(psi, psi).real)
    if abs(norm_sq - 1.0) > NORM_ATOL:
        raise ValueError(f"{name} is not normalized: |psi|^2 = {norm_sq!r}")
    return psi


def check_density_matrix(rho: np.ndarray, name: str = "rho") -> np.ndarray:
    """Validate a density matrix: Hermitian, unit trace, PSD within tolerance."""
    rho = _as_square(rho, name)
    d = rho.shape[0]
    if d not in (2, 4, 8):
        raise ValueError(f"{name} dimension must be 2, 4 or 8, got {d}")
    if not is_hermitian(rho):
        raise ValueError(f"{name} is not Hermitian to {HERMITICITY_ATOL}")
    tr = complex(np.trace(rho))
    if abs(tr - 1.0) > TRACE_ATOL:
        raise ValueError(f"{name} trace is {tr!r}, expected 1")
    evals = np.linalg.eigvalsh(rho)
    if evals.min() < -PSD_ATOL:
        raise ValueError(f"{name} has negative eigenvalue {evals.min()!r}")
    return rho


def partial_trace_dims(
    rho: np.ndarray, dims: Sequence[int], keep: Sequence[int]
) -> np.ndarray:
    """Partial trace over a general tensor factorization.

    ``dims`` are subsystem dimensions in tensor order, ``keep`` the 0-based
    indices of the subsystems to retain (order preserved).
    """
    dims = list(dims)
    n = len(dims)
    keep = sorted(set(keep))
    if any(i < 0 or i >= n for i in keep):
        raise ValueError(f"keep indices {keep} out of range for {n} subsystems")
    rho = _as_square(rho)
    if rho.shape[0] != int(np.prod(dims)):
        raise ValueError(f"shape {rho.shape} does not match dims {dims}")
    reshaped = rho.reshape(tuple(dims) + tuple(dims))
    drop = [i for i in range(n) if i not in keep]
    for idx in sorted(drop, reverse=True):
        half = reshaped.ndim // 2
        reshaped = np.trace(reshaped, axis1=idx, axis2=idx + half)
        dims.pop(idx)
    d = int(np.prod(dims)) if dims else 1
    return reshaped.reshape(d, d)


def partial_trace(rho: np.ndarray, keep: Iterable[int]) -> np.ndarray:
    """Reduced state of an 8x8 three-qubit density matrix.

    ``keep`` is a non-empty proper subset of the 1-based qubit labels
    {1, 2, 3}; the qubit ordering of the result follows the input ordering.
    """
    keep_set = sorted(set(int(q) for q in keep))
    if not keep_set or not all(q in (1, 2, 3) for q in keep_set):
        raise ValueError(f"keep must be a non-empty subset of {{1,2,3}}, got {keep_set}")
    if len(keep_set) == 3:
        raise ValueError("keep must be a proper subset; nothing to trace out")
    rho = _as_square(rho, "rho")
    if rho.shape[0] != 8:
        raise ValueError(f"partial_trace expects an 8x8 matrix, got {rho.shape}")
    return partial_trace_dims(rho, [2, 2, 2], [q - 1 for q in keep_set])


def hermitian_eigenvalues(m: np.ndarray, atol: float = 1e-10) -> np.ndarray:
    """Real spectrum of a Hermitian matrix, sorted descending."""
    m = _as_square(m, "matrix")
    if not is_hermitian(m, atol=atol):
        raise ValueError("matrix is not Hermitian within tolerance")
    evals = np.linalg.eigvalsh(m)
    return evals[::-1].copy()


def clamp_spectrum(evals: np.ndarray) -> np.ndarray:
    """Zero out eigenvalues in [-EIG_CLAMP, 0) ahead of logs/square roots."""
    evals = np.asarray(evals, dtype=float).copy()
    mask = (evals < 0.0) & (evals >= -EIG_CLAMP)
    evals[mask] = 0.0
    return evals


def von_neumann_entropy(rho: np.ndarray) -> float:
    """Von Neumann entropy -sum(l log2 l) in bits, with 0*log0 := 0."""
    rho = _as_square(rho, "rho")
    evals = clamp_spectrum(np.linalg.eigvalsh(rho))
    positive = evals[evals > 0.0]
    return float(-np.sum(positive * np.log2(positive)))


def permute_qubits(state: np.ndarray, perm: Sequence[int]) -> np.ndarray:
    """Relabel the three qubits of a vector (8,) or matrix (8,8).

    ``perm`` lists, for each output slot, the 1-based input qubit placed
    there; e.g. ``(1, 3, 2)`` swaps qubits 2 and 3.
    """
    perm0 = [p - 1 for p in perm]
    if sorted(perm0) != [0, 1, 2]:
        raise ValueError(f"perm must be a permutation of (1,2,3), got {perm}")
    arr = np.asarray(state, dtype=complex)
    if arr.shape == (8,):
        return arr.reshape(2, 2, 2).transpose(perm0).reshape(8)
    if arr.shape == (8, 8):
        axes = perm0 + [p + 3 for p in perm0]
        return arr.reshape((2,) * 6).transpose(axes).reshape(8, 8)
    raise ValueError(f"expected shape (8,) or (8,8), got {arr.shape}")


def bloch_vector(theta: float, phi: float) -> np.ndarray:
    """Unit vector (sin t cos p, sin t sin p, cos t) on the Bloch sphere."""
    st = np.sin(theta)
    return np.array([st * np.cos(phi), st * np.sin(phi), np.cos(theta)])


def bloch_observable(v: np.ndarray) -> np.ndarray:
    """Dichotomic observable v . sigma for a Bloch unit vector."""
    v = np.asarray(v, dtype=float)
    if v.shape != (3,):
        raise ValueError(f"Bloch vector must have shape (3,), got {v.shape}")
    return v[0] * PAULI_X + v[1] * PAULI_Y + v[2] * PAULI_Z


def bloch_projectors(v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Projectors (I + v.sigma)/2 and (I - v.sigma)/2; outcome 0 is +1."""
    obs = bloch_observable(v)
    return (IDENTITY_2 + obs) / 2.0, (IDENTITY_2 - obs) / 2.0
