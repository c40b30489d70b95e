"""Entanglement and quantum-correlation measures.

Wootters concurrence for two-qubit states, the three-tangle for pure
three-qubit states, quantum discord by explicit minimization over rank-1
projective measurements, and the discord monogamy score
delta_D = D(A:BC) - D(AB) - D(AC) with qubit A as the nodal observer.

All entropies and discords are in bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import qalg

# Measurement-minimization controls: dense (theta, phi) grid followed by a
# pattern search shrunk to steps below REFINE_STEP_TOL.
THETA_GRID = 64
PHI_GRID = 32
REFINE_STEP_TOL = 1e-10

_SIGMA_YY = np.kron(qalg.PAULI_Y, qalg.PAULI_Y)


def binary_entropy(x: float) -> float:
    """Binary entropy h(x) = -x log2 x - (1-x) log2 (1-x), in bits."""
    if x < -qalg.EIG_CLAMP or x > 1.0 + qalg.EIG_CLAMP:
        raise ValueError(f"binary entropy argument must lie in [0,1], got {x}")
    x = min(max(x, 0.0), 1.0)
    out = 0.0
    if x > 0.0:
        out -= x * math.log2(x)
    if x < 1.0:
        out -= (1.0 - x) * math.log2(1.0 - x)
    return out


def concurrence(rho: np.ndarray) -> float:
    """Wootters concurrence of a two-qubit density matrix.

    C = max(0, sqrt(m1) - sqrt(m2) - sqrt(m3) - sqrt(m4)) with m_i the
    descending eigenvalues of rho (Y x Y) rho* (Y x Y). The square roots
    are evaluated as the singular values of sqrt(rho) (Y x Y) sqrt(rho)*,
    which is numerically stable.
    """
    rho = qalg.check_density_matrix(rho, name="rho")
    if rho.shape[0] != 4:
        raise ValueError(f"concurrence expects a 4x4 matrix, got {rho.shape}")
    evals, vecs = np.linalg.eigh(rho)
    root = np.sqrt(np.maximum(qalg.clamp_spectrum(evals), 0.0))
    sqrt_rho = (vecs * root) @ vecs.conj().T
    m = sqrt_rho @ _SIGMA_YY @ sqrt_rho.conj()
    roots = np.sort(np.linalg.svd(m, compute_uv=False))[::-1]
    return float(max(0.0, roots[0] - roots[1] - roots[2] - roots[3]))


def three_tangle_pure(psi: np.ndarray) -> float:
    """Three-tangle tau = C^2_{1(23)} - C^2_{12} - C^2_{13} of a pure state.

    C^2_{1(23)} is computed as 4 det(rho_1). The result is clamped to [0, 1]
    at 1e-10 tolerance.
    """
    psi = qalg.check_state_vector(psi)
    if psi.shape[0] != 8:
        raise ValueError("three-tangle is defined for three-qubit pure states")
    rho = qalg.projector(psi)
    rho_1 = qalg.partial_trace(rho, keep=[1])
    c_sq_1_23 = 4.0 * float(np.linalg.det(rho_1).real)
    c_12 = concurrence(qalg.partial_trace(rho, keep=[1, 2]))
    c_13 = concurrence(qalg.partial_trace(rho, keep=[1, 3]))
    tau = c_sq_1_23 - c_12 * c_12 - c_13 * c_13
    if tau < -qalg.EIG_CLAMP or tau > 1.0 + qalg.EIG_CLAMP:
        raise ValueError(f"three-tangle {tau} outside [0,1] beyond tolerance")
    return float(min(max(tau, 0.0), 1.0))


def three_tangle_symmetric(
    a: float, b: float, c: float, d: float, h: float, gamma: float
) -> float:
    """Three-tangle of a|011> + b|101> + c|110> + d|000> + h e^{i gamma}|111>.

    tau = 4 d sqrt((d h^2 - 4 a b c)^2 + 16 a b c d h^2 cos^2(gamma)).
    """
    norm_sq = a * a + b * b + c * c + d * d + h * h
    if abs(norm_sq - 1.0) > 1e-10:
        raise ValueError(f"amplitudes not normalized: sum of squares = {norm_sq!r}")
    inner = (d * h * h - 4.0 * a * b * c) ** 2
    inner += 16.0 * a * b * c * d * h * h * math.cos(gamma) ** 2
    tau = 4.0 * d * math.sqrt(max(inner, 0.0))
    return float(min(max(tau, 0.0), 1.0))


def _conditional_entropy_batch(rho_r: np.ndarray, theta: np.ndarray, phi: np.ndarray):
    """Average post-measurement entropy of side A for a batch of B-axes.

    ``rho_r`` has shape (dA, 2, dA, 2); theta/phi are flat arrays of equal
    length. Returns the array of sum_i p_i S(rho_{A|i}).
    """
    ct = np.cos(theta / 2.0)
    st = np.sin(theta / 2.0)
    ph = np.exp(1j * phi)
    # Rows: the +outcome axis |n> and its orthogonal complement.
    n_plus = np.stack([ct, ph * st], axis=-1)
    n_minus = np.stack([st, -ph * ct], axis=-1)
    total = np.zeros(theta.shape[0])
    for n in (n_plus, n_minus):
        block = np.einsum("gb,abcd,gd->gac", n.conj(), rho_r, n)
        p = np.einsum("gaa->g", block).real
        evals = np.linalg.eigvalsh(block)
        with np.errstate(divide="ignore", invalid="ignore"):
            lam = np.where(evals > qalg.EIG_CLAMP, evals, 1.0)
            ent = -np.sum(np.where(evals > qalg.EIG_CLAMP, evals * np.log2(lam), 0.0), axis=-1)
        safe = p > 1e-14
        # S(rho_{A|i}) needs the normalized block; entropy of block/p is
        # ent/p + log2(p), and it enters weighted by p.
        total += np.where(safe, ent + p * np.log2(np.where(safe, p, 1.0)), 0.0)
    return total


def discord_numeric(
    rho: np.ndarray,
    dims: tuple[int, int] = (2, 2),
    measured: int = 1,
    theta_grid: int = THETA_GRID,
    phi_grid: int = PHI_GRID,
) -> float:
    """Quantum discord D(A|B) with rank-1 projective measurements on a qubit.

    ``dims`` gives the (A, B) factor dimensions of ``rho``; ``measured``
    selects the measured subsystem (0 or 1), which must be a single qubit.
    D = I - J = S(B) - S(AB) + min over axes of sum_i p_i S(rho_{A|i}),
    minimized on a theta x phi grid with local pattern-search refinement.
    """
    rho = qalg.check_density_matrix(rho)
    if int(np.prod(dims)) != rho.shape[0]:
        raise ValueError(f"dims {dims} do not factor dimension {rho.shape[0]}")
    if measured not in (0, 1):
        raise ValueError(f"measured must be 0 or 1, got {measured}")
    if dims[measured] != 2:
        raise ValueError(
            f"measured subsystem must be a single qubit, got dimension {dims[measured]}"
        )
    if measured == 0:
        # Reorder factors so the measured qubit is the trailing one.
        da, db = dims
        rho = (
            rho.reshape(da, db, da, db).transpose(1, 0, 3, 2).reshape(rho.shape)
        )
        dims = (db, da)
    d_a, d_b = dims
    rho_r = rho.reshape(d_a, d_b, d_a, d_b)

    s_ab = qalg.von_neumann_entropy(rho)
    rho_b = qalg.partial_trace_dims(rho, dims, keep=[1])
    s_b = qalg.von_neumann_entropy(rho_b)

    thetas = np.linspace(0.0, math.pi, theta_grid)
    phis = np.linspace(0.0, 2.0 * math.pi, phi_grid, endpoint=False)
    tg, pg = np.meshgrid(thetas, phis, indexing="ij")
    grid_vals = _conditional_entropy_batch(rho_r, tg.ravel(), pg.ravel())
    best_idx = int(np.argmin(grid_vals))
    best = float(grid_vals[best_idx])
    theta0 = float(tg.ravel()[best_idx])
    phi0 = float(pg.ravel()[best_idx])

    # Coordinate pattern search around the best grid node.
    step = max(thetas[1] - thetas[0], phis[1] - phis[0])
    point = np.array([theta0, phi0])

    def value(pt):
        return float(_conditional_entropy_batch(rho_r, pt[:1], pt[1:2])[0])

    while step > REFINE_STEP_TOL:
        improved = False
        for axis in (0, 1):
            for delta in (step, -step):
                cand = point.copy()
                cand[axis] += delta
                v = value(cand)
                if v < best - 1e-16:
                    best, point, improved = v, cand, True
        if not improved:
            step /= 2.0
    return s_b - s_ab + best


def pure_bipartite_discord(rho: np.ndarray, dims: tuple[int, int]) -> float:
    """Discord of a pure bipartite state: the entropy of either marginal."""
    rho = qalg.check_density_matrix(rho)
    purity = float(np.trace(rho @ rho).real)
    if abs(purity - 1.0) > 1e-9:
        raise ValueError(f"state is not pure (purity {purity})")
    rho_a = qalg.partial_trace_dims(rho, dims, keep=[0])
    return qalg.von_neumann_entropy(rho_a)


@dataclass
class MonogamyScore:
    """delta_D and its three discord components, all in bits."""

    delta_d: float
    d_a_bc: float
    d_ab: float
    d_ac: float


def discord_monogamy_score(psi: np.ndarray) -> MonogamyScore:
    """Discord monogamy score delta_D = D(A:BC) - D(AB) - D(AC) of a pure state.

    Qubit A (qubit 1) is the nodal observer: D(A:BC) is the discord of the
    pure A:BC split, which equals S(rho_A), and the pairwise discords are
    computed with the rank-1 measurement on the shared qubit A.
    """
    psi = qalg.check_state_vector(psi)
    if psi.shape[0] != 8:
        raise ValueError("monogamy score is defined for three-qubit pure states")
    rho = qalg.projector(psi)
    d_a_bc = qalg.von_neumann_entropy(qalg.partial_trace(rho, keep=[1]))
    rho_ab = qalg.partial_trace(rho, keep=[1, 2])
    rho_ac = qalg.partial_trace(rho, keep=[1, 3])
    d_ab = discord_numeric(rho_ab, dims=(2, 2), measured=0)
    d_ac = discord_numeric(rho_ac, dims=(2, 2), measured=0)
    return MonogamyScore(
        delta_d=d_a_bc - d_ab - d_ac, d_a_bc=d_a_bc, d_ab=d_ab, d_ac=d_ac
    )


def delta_d_gghz(eta: float) -> float:
    """Closed-form delta_D of a GGHZ state: h(cos^2 eta) in bits."""
    if not 0.0 <= eta <= math.pi / 4 + 1e-12:
        raise ValueError(f"eta must lie in [0, pi/4], got {eta}")
    c2 = math.cos(eta) ** 2
    s2 = math.sin(eta) ** 2
    out = 0.0
    if c2 > 0.0:
        out -= c2 * math.log2(c2)
    if s2 > 0.0:
        out -= s2 * math.log2(s2)
    return out


def delta_d_subclass_s(tau: float) -> float:
    """Closed-form delta_D of a subclass-S state as a function of tau.

    Printed form
      -[(1 - sqrt(1-tau)) ln((1 - sqrt(1-tau))/2)
        + (1 + sqrt(1-tau)) ln((1 + sqrt(1-tau))/2)] / ln 4,
    which reduces to the binary entropy of (1 - sqrt(1-tau))/2 in bits.
    """
    if not -1e-12 <= tau <= 1.0 + 1e-12:
        raise ValueError(f"tau must lie in [0,1], got {tau}")
    r = math.sqrt(max(1.0 - tau, 0.0))
    total = 0.0
    for sign in (-1.0, 1.0):
        w = 1.0 + sign * r
        if w > 0.0:
            total += w * math.log(w / 2.0)
    return -total / math.log(4.0)


def xstate_discord_subclass_s(l0: float, l3: float) -> float:
    """Closed-form discord of the AB marginal of a subclass-S state.

    The marginal is the X state
      l0^2 |00><00| + (1-l0^2)|11><11| + l0 l3 (|00><11| + |11><00|);
    with r = sqrt(1 + 4 l0^4 + 4 l0^2 (l3^2 - 1)) its discord is

      [-ln4 (l0^2 ln l0^2 + (1-l0^2) ln(1-l0^2))
       + ln2 ((1+r) ln((1+r)/2) + (1-r) ln((1-r)/2))] / (ln2 ln4)

    i.e. h(l0^2) - h((1+r)/2) in bits.
    """
    a = l0 * l0
    if not 0.0 <= a <= 1.0:
        raise ValueError(f"l0^2 must lie in [0,1], got {a}")
    r_sq = 1.0 + 4.0 * a * a + 4.0 * a * (l3 * l3 - 1.0)
    r = math.sqrt(max(r_sq, 0.0))
    ln2, ln4 = math.log(2.0), math.log(4.0)
    first = 0.0
    for w in (a, 1.0 - a):
        if w > 0.0:
            first += w * math.log(w)
    second = 0.0
    for sign in (1.0, -1.0):
        w = 1.0 + sign * r
        if w > 0.0:
            second += w * math.log(w / 2.0)
    return (-ln4 * first + ln2 * second) / (ln2 * ln4)
