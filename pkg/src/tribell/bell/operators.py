"""Bell operators and their evaluation on quantum states.

Each operator is a signed sum of full correlators over dichotomic Bloch
observables, two settings per party:

* Svetlichny (three parties, hybrid-model bound 4):
    <X0Y0Z0> + <X1Y0Z0> - <X0Y1Z0> + <X1Y1Z0>
  + <X0Y0Z1> - <X1Y0Z1> + <X0Y1Z1> + <X1Y1Z1>
* NS2 99th facet (three parties, bound 3):
    <X1Y1> + <X0Y0Z0> + <Y1Z0> + <X1Z1> - <X0Y0Z1>
* CHSH (two parties, bound 2):
    <X0Y0> + <X0Y1> + <X1Y0> - <X1Y1>

A term slot of ``None`` means the identity on that party (a marginal
correlator). ``operator_value`` evaluates the printed term list directly by
8x8 (or 4x4) traces; ``make_batched_value`` precomputes the state's Pauli
correlation tensors once and evaluates batches of measurement angles with
tensor contractions, which is what the optimizer uses. The two paths agree
to machine precision.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .. import qalg


class BellKind(str, enum.Enum):
    SVETLICHNY = "svetlichny"
    NS99 = "ns99"
    CHSH = "chsh"


# (settings per party, sign); None = identity slot.
TERMS: dict[BellKind, tuple[tuple[tuple[int | None, ...], float], ...]] = {
    BellKind.SVETLICHNY: (
        ((0, 0, 0), 1.0),
        ((1, 0, 0), 1.0),
        ((0, 1, 0), -1.0),
        ((1, 1, 0), 1.0),
        ((0, 0, 1), 1.0),
        ((1, 0, 1), -1.0),
        ((0, 1, 1), 1.0),
        ((1, 1, 1), 1.0),
    ),
    BellKind.NS99: (
        ((1, 1, None), 1.0),
        ((0, 0, 0), 1.0),
        ((None, 1, 0), 1.0),
        ((1, None, 1), 1.0),
        ((0, 0, 1), -1.0),
    ),
    BellKind.CHSH: (
        ((0, 0), 1.0),
        ((0, 1), 1.0),
        ((1, 0), 1.0),
        ((1, 1), -1.0),
    ),
}

CLASSICAL_BOUND = {BellKind.SVETLICHNY: 4.0, BellKind.NS99: 3.0, BellKind.CHSH: 2.0}
N_PARTIES = {BellKind.SVETLICHNY: 3, BellKind.NS99: 3, BellKind.CHSH: 2}
VIOLATION_ATOL = 1e-9


@dataclass
class MeasurementScenario:
    """Bloch measurement axes: two per party, parametrized by (theta, phi).

    ``angles`` has shape (2 * n_parties, 2) ordered
    [A0, A1, B0, B1, (C0, C1)]; theta is the polar angle in [0, pi] and phi
    the azimuth in [0, 2 pi).
    """

    angles: np.ndarray

    def __post_init__(self):
        self.angles = np.asarray(self.angles, dtype=float)
        if self.angles.ndim != 2 or self.angles.shape[1] != 2 or self.angles.shape[0] % 2:
            raise ValueError(f"angles must have shape (2n, 2), got {self.angles.shape}")

    @property
    def n_parties(self) -> int:
        return self.angles.shape[0] // 2

    def vectors(self) -> np.ndarray:
        """Unit vectors, shape (2 * n_parties, 3)."""
        return np.array([qalg.bloch_vector(t, p) for t, p in self.angles])

    def vector(self, party: int, setting: int) -> np.ndarray:
        """Bloch vector for 0-based party index and setting 0/1."""
        return qalg.bloch_vector(*self.angles[2 * party + setting])

    def swap_parties(self, i: int, j: int) -> "MeasurementScenario":
        angles = self.angles.copy()
        angles[[2 * i, 2 * i + 1]], angles[[2 * j, 2 * j + 1]] = (
            self.angles[[2 * j, 2 * j + 1]].copy(),
            self.angles[[2 * i, 2 * i + 1]].copy(),
        )
        return MeasurementScenario(angles)

    @staticmethod
    def all_z(n_parties: int = 3) -> "MeasurementScenario":
        return MeasurementScenario(np.zeros((2 * n_parties, 2)))

    @staticmethod
    def from_flat(flat: np.ndarray) -> "MeasurementScenario":
        flat = np.asarray(flat, dtype=float).reshape(-1)
        return MeasurementScenario(flat.reshape(-1, 2))

    def flat(self) -> np.ndarray:
        return self.angles.reshape(-1).copy()


def canonicalize_angles(flat: np.ndarray) -> np.ndarray:
    """Wrap unconstrained (theta, phi) pairs into [0, pi] x [0, 2 pi)."""
    flat = np.asarray(flat, dtype=float).reshape(-1).copy()
    two_pi = 2.0 * math.pi
    for i in range(0, flat.size, 2):
        theta = flat[i] % two_pi
        phi = flat[i + 1]
        if theta > math.pi:
            theta = two_pi - theta
            phi += math.pi
        flat[i] = theta
        flat[i + 1] = phi % two_pi
    return flat


def correlator(rho: np.ndarray, obs) -> float:
    """Tr[rho (O1 x O2 x ...)] with O_i = v_i . sigma or the identity.

    ``obs`` is a sequence of Bloch vectors or ``None`` (identity slot);
    at least one slot must be a vector.
    """
    rho = np.asarray(rho, dtype=complex)
    n = round(math.log2(rho.shape[0]))
    if len(obs) != n:
        raise ValueError(f"expected {n} observable slots, got {len(obs)}")
    if all(v is None for v in obs):
        raise ValueError("at least one slot must carry an observable")
    op = None
    for v in obs:
        factor = qalg.IDENTITY_2 if v is None else qalg.bloch_observable(v)
        op = factor if op is None else np.kron(op, factor)
    value = complex(np.trace(rho @ op))
    return float(value.real)


def operator_value(rho: np.ndarray, scenario: MeasurementScenario, kind: BellKind) -> float:
    """Signed sum of correlators for the printed operator term list."""
    kind = BellKind(kind)
    n = N_PARTIES[kind]
    if scenario.n_parties != n:
        raise ValueError(f"{kind.value} needs {n} parties, scenario has {scenario.n_parties}")
    total = 0.0
    for slots, sign in TERMS[kind]:
        obs = [None if s is None else scenario.vector(p, s) for p, s in enumerate(slots)]
        total += sign * correlator(rho, obs)
    return total


def correlation_tensors(rho: np.ndarray, n_parties: int) -> dict:
    """Pauli correlation tensors of a state, keyed by active party tuple.

    For three parties: T3[i,j,k] = Tr[rho s_i x s_j x s_k] under key
    (0,1,2), and the pair tensors with an identity slot under (0,1), (0,2),
    (1,2). For two parties only the full (0,1) tensor is produced.
    """
    rho = np.asarray(rho, dtype=complex)
    paulis = np.stack(qalg.PAULIS)  # (3, 2, 2)
    if n_parties == 2:
        r = rho.reshape(2, 2, 2, 2)
        t = np.einsum("abde,ida,jeb->ij", r, paulis, paulis)
        return {(0, 1): np.ascontiguousarray(t.real)}
    if n_parties != 3:
        raise ValueError(f"unsupported party count {n_parties}")
    r = rho.reshape(2, 2, 2, 2, 2, 2)
    t3 = np.einsum("abcdef,ida,jeb,kfc->ijk", r, paulis, paulis, paulis)
    t_ab = np.einsum("abcdec,ida,jeb->ij", r, paulis, paulis)
    t_ac = np.einsum("abcdbf,ida,kfc->ik", r, paulis, paulis)
    t_bc = np.einsum("abcaef,jeb,kfc->jk", r, paulis, paulis)
    return {
        (0, 1, 2): np.ascontiguousarray(t3.real),
        (0, 1): np.ascontiguousarray(t_ab.real),
        (0, 2): np.ascontiguousarray(t_ac.real),
        (1, 2): np.ascontiguousarray(t_bc.real),
    }


def _fused_coefficient_tensor(rho: np.ndarray, kind: BellKind) -> np.ndarray:
    """Fold every operator term into one coefficient tensor.

    Party p is represented by an 8-vector concatenating the augmented
    Bloch vectors (vx, vy, vz, 1) of its two settings, so index
    4*s + component addresses setting s. Identity slots use the constant
    component of an arbitrary setting (0). The operator value is the full
    contraction of these per-party 8-vectors with the returned tensor of
    shape (8,) * n_parties.
    """
    n = N_PARTIES[kind]
    tensors = correlation_tensors(rho, n)
    fused = np.zeros((8,) * n)
    for slots, sign in TERMS[kind]:
        active = tuple(p for p, s in enumerate(slots) if s is not None)
        tensor = tensors[active]
        index_sets = []
        for p, s in enumerate(slots):
            if s is None:
                index_sets.append(np.array([3]))  # constant slot of setting 0
            else:
                index_sets.append(4 * s + np.arange(3))
        block = sign * tensor
        # Broadcast the term tensor into the slots of the fused tensor.
        expanded_shape = tuple(len(ix) for ix in index_sets)
        grid = np.ix_(*index_sets)
        fused[grid] += block.reshape(expanded_shape)
    return fused


def make_batched_value(rho: np.ndarray, kind: BellKind):
    """Closure evaluating the operator for batches of flat angle vectors.

    The returned function maps an array of shape (..., 4 * n_parties)
    holding [theta, phi] pairs in scenario order to operator values of
    shape (...). The state's correlation tensors are folded into a single
    coefficient tensor up front, so each call is one contraction.
    """
    kind = BellKind(kind)
    n = N_PARTIES[kind]
    fused = _fused_coefficient_tensor(rho, kind)
    fused_flat = fused.reshape(8, -1)  # (8, 64) or (8, 8)

    def value(angles: np.ndarray) -> np.ndarray:
        angles = np.asarray(angles, dtype=float)
        batch = angles.shape[:-1]
        theta = angles[..., 0::2]
        phi = angles[..., 1::2]
        st = np.sin(theta)
        aug = np.empty(batch + (2 * n, 4))
        aug[..., 0] = st * np.cos(phi)
        aug[..., 1] = st * np.sin(phi)
        aug[..., 2] = np.cos(theta)
        aug[..., 3] = 1.0
        party = aug.reshape(batch + (n, 8))
        # Contract one party at a time with plain matmuls.
        out = party[..., 0, :] @ fused_flat  # (..., 64) or (..., 8)
        if n == 3:
            out = out.reshape(batch + (8, 8))
            out = np.matmul(party[..., 1, None, :], out)[..., 0, :]
            return np.sum(out * party[..., 2, :], axis=-1)
        return np.sum(out * party[..., 1, :], axis=-1)

    return value


def behavior_correlators(table: np.ndarray) -> dict:
    """Correlators of a behavior table p[a,b,c,x,y,z].

    Returns full correlators E3[x,y,z] = sum (-1)^(a+b+c) p and the pair
    correlators with the unused party marginalized at its setting 0 (for
    no-signaling behaviors the choice of that setting is immaterial).
    """
    signs = np.array([1.0, -1.0])
    e3 = np.einsum("abcxyz,a,b,c->xyz", table, signs, signs, signs)
    e_ab = np.einsum("abcxy,a,b->xy", table[..., 0], signs, signs)
    e_ac = np.einsum("abcxz,a,c->xz", table[:, :, :, :, 0, :], signs, signs)
    e_bc = np.einsum("abcyz,b,c->yz", table[:, :, :, 0, :, :], signs, signs)
    return {(0, 1, 2): e3, (0, 1): e_ab, (0, 2): e_ac, (1, 2): e_bc}


def behavior_operator_value(table: np.ndarray, kind: BellKind) -> float:
    """Operator value of a fixed behavior table (no optimization)."""
    kind = BellKind(kind)
    if N_PARTIES[kind] != 3:
        raise ValueError("behavior tables are three-party objects")
    cors = behavior_correlators(np.asarray(table, dtype=float))
    total = 0.0
    for slots, sign in TERMS[kind]:
        active = tuple(p for p, s in enumerate(slots) if s is not None)
        idx = tuple(slots[p] for p in active)
        total += sign * float(cors[active][idx])
    return total
