"""Behaviors and LP membership oracles for hybrid local models.

A behavior is the table p(abc|xyz) of conditional outcome probabilities for
three parties with two settings and two outcomes each. Three models are
supported, each as the convex hull of an explicit vertex set:

* FULLY_LOCAL: products of deterministic single-party strategies (64).
* S2: for each bipartition, deterministic bipartite boxes with no
  constraint linking the pair's outputs to its inputs (a = f(x,y),
  b = g(x,y); 256 per pair) times deterministic third-party points.
* NS2: for each bipartition, the extremal no-signaling bipartite boxes
  (16 deterministic + 8 PR-type, enumerated exactly from the positivity,
  normalization and no-signaling constraints) times deterministic
  third-party points.

Membership is a pure feasibility question: nonnegative weights over the
union of the model's vertices that sum to one and reproduce the behavior.
It is decided by a self-contained phase-1 simplex with Bland's rule.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import qalg
from .bell.operators import MeasurementScenario

BEHAVIOR_SHAPE = (2, 2, 2, 2, 2, 2)  # indices (a, b, c, x, y, z)
NORMALIZATION_ATOL = 1e-10
POSITIVITY_ATOL = 1e-12
MEMBERSHIP_ATOL = 1e-8
LP_RESIDUAL_TARGET = 1e-9


class HybridKind(str, enum.Enum):
    FULLY_LOCAL = "fully_local"
    NS2 = "ns2"
    S2 = "s2"


class LPNumericalError(RuntimeError):
    """Simplex failed to terminate cleanly; distinct from infeasibility."""


@dataclass
class Behavior:
    """Conditional probability table p[a,b,c,x,y,z]."""

    table: np.ndarray

    def __post_init__(self):
        self.table = np.asarray(self.table, dtype=float)
        if self.table.shape != BEHAVIOR_SHAPE:
            raise ValueError(f"behavior table must have shape {BEHAVIOR_SHAPE}")
        if self.table.min() < -POSITIVITY_ATOL:
            raise ValueError(f"negative probability {self.table.min()!r}")
        sums = self.table.sum(axis=(0, 1, 2))
        if np.max(np.abs(sums - 1.0)) > NORMALIZATION_ATOL:
            raise ValueError("outcome distributions are not normalized per setting")

    def flat(self) -> np.ndarray:
        return self.table.reshape(-1)

    @staticmethod
    def from_flat(flat: np.ndarray) -> "Behavior":
        return Behavior(np.asarray(flat, dtype=float).reshape(BEHAVIOR_SHAPE))


def quantum_behavior(rho: np.ndarray, scenario: MeasurementScenario) -> Behavior:
    """Born-rule behavior p(abc|xyz) = Tr[rho P_a^x x P_b^y x P_c^z].

    Outcome 0 corresponds to the +1 eigenvalue of each Bloch observable.
    """
    rho = qalg.check_density_matrix(rho)
    if rho.shape[0] != 8 or scenario.n_parties != 3:
        raise ValueError("quantum_behavior expects a three-qubit state and scenario")
    projs = [
        [qalg.bloch_projectors(scenario.vector(party, setting)) for setting in (0, 1)]
        for party in range(3)
    ]
    table = np.empty(BEHAVIOR_SHAPE)
    for x, y, z in itertools.product((0, 1), repeat=3):
        for a, b, c in itertools.product((0, 1), repeat=3):
            op = np.kron(np.kron(projs[0][x][a], projs[1][y][b]), projs[2][z][c])
            table[a, b, c, x, y, z] = float(np.trace(rho @ op).real)
    return Behavior(table)


def save_behavior(behavior: Behavior, path) -> None:
    """Write one 'x y z a b c p' row per entry with 15 significant digits."""
    lines = ["# x y z a b c p(abc|xyz)"]
    for x, y, z in itertools.product((0, 1), repeat=3):
        for a, b, c in itertools.product((0, 1), repeat=3):
            p = behavior.table[a, b, c, x, y, z]
            lines.append(f"{x} {y} {z} {a} {b} {c} {p:.15g}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_behavior(path) -> Behavior:
    """Read the row-per-entry text format produced by ``save_behavior``."""
    table = np.full(BEHAVIOR_SHAPE, np.nan)
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.replace(",", " ").split()
        if len(parts) != 7:
            raise ValueError(f"behavior rows need 7 fields, got {raw!r}")
        x, y, z, a, b, c = (int(t) for t in parts[:6])
        table[a, b, c, x, y, z] = float(parts[6])
    if np.isnan(table).any():
        raise ValueError("behavior file does not cover all 64 entries")
    return Behavior(table)


# ---------------------------------------------------------------------------
# Vertex enumeration


def _single_party_strategies() -> list[tuple[int, int]]:
    """Deterministic single-party maps setting -> outcome, as (s0, s1)."""
    return [(s0, s1) for s0 in (0, 1) for s1 in (0, 1)]


def deterministic_local_vertices() -> np.ndarray:
    """All 64 products of deterministic single-party strategies, (64, 64)."""
    verts = []
    for fa, fb, fc in itertools.product(_single_party_strategies(), repeat=3):
        table = np.zeros(BEHAVIOR_SHAPE)
        for x, y, z in itertools.product((0, 1), repeat=3):
            table[fa[x], fb[y], fc[z], x, y, z] = 1.0
        verts.append(table.reshape(-1))
    return np.array(verts)


def _signaling_boxes() -> np.ndarray:
    """Deterministic bipartite boxes a = f(x,y), b = g(x,y), (256, 16).

    Box tables are indexed [a, b, x, y].
    """
    boxes = []
    inputs = list(itertools.product((0, 1), repeat=2))
    for outputs in itertools.product(itertools.product((0, 1), repeat=2), repeat=4):
        table = np.zeros((2, 2, 2, 2))
        for (x, y), (a, b) in zip(inputs, outputs):
            table[a, b, x, y] = 1.0
        boxes.append(table.reshape(-1))
    return np.array(boxes)


def _ns_equality_system() -> tuple[np.ndarray, np.ndarray]:
    """Normalization and no-signaling equalities over P[a,b,x,y] (rank 8)."""
    def idx(a, b, x, y):
        return ((a * 2 + b) * 2 + x) * 2 + y

    rows, rhs = [], []
    for x, y in itertools.product((0, 1), repeat=2):
        row = np.zeros(16)
        for a, b in itertools.product((0, 1), repeat=2):
            row[idx(a, b, x, y)] = 1.0
        rows.append(row)
        rhs.append(1.0)
    for a, x in itertools.product((0, 1), repeat=2):
        row = np.zeros(16)
        for b in (0, 1):
            row[idx(a, b, x, 0)] += 1.0
            row[idx(a, b, x, 1)] -= 1.0
        rows.append(row)
        rhs.append(0.0)
    for b, y in itertools.product((0, 1), repeat=2):
        row = np.zeros(16)
        for a in (0, 1):
            row[idx(a, b, 0, y)] += 1.0
            row[idx(a, b, 1, y)] -= 1.0
        rows.append(row)
        rhs.append(0.0)
    return np.array(rows), np.array(rhs)


def _verify_ns_box_exact(entries: tuple[Fraction, ...]) -> bool:
    eq, rhs = _ns_equality_system()
    for row, target in zip(eq, rhs):
        total = Fraction(0)
        for coeff, val in zip(row, entries):
            total += Fraction(int(round(coeff))) * val
        if total != Fraction(int(round(target))):
            return False
    return all(v >= 0 for v in entries)


def enumerate_ns_bipartite_boxes() -> np.ndarray:
    """Exact vertex enumeration of the 2-input/2-output NS polytope.

    Tries every choice of 8 probabilities forced to zero, solves the
    combined linear system, keeps unique nonnegative solutions and snaps
    them to exact quarters (all NS vertices are half-integer). Returns the
    (24, 16) array: 16 deterministic boxes and 8 PR-type boxes.
    """
    eq, rhs = _ns_equality_system()
    found: dict[tuple[Fraction, ...], np.ndarray] = {}
    for zero_set in itertools.combinations(range(16), 8):
        rows = np.vstack([eq, np.eye(16)[list(zero_set)]])
        targets = np.concatenate([rhs, np.zeros(8)])
        if np.linalg.matrix_rank(rows, tol=1e-9) < 16:
            continue
        sol, residual, *_ = np.linalg.lstsq(rows, targets, rcond=None)
        if np.max(np.abs(rows @ sol - targets)) > 1e-9:
            continue
        if sol.min() < -1e-9:
            continue
        snapped = tuple(Fraction(int(round(4.0 * v)), 4) for v in sol)
        if np.max(np.abs(sol - np.array([float(f) for f in snapped]))) > 1e-9:
            continue
        if not _verify_ns_box_exact(snapped):
            continue
        found.setdefault(snapped, np.array([float(f) for f in snapped]))
    boxes = np.array(sorted(found.values(), key=lambda v: tuple(v)))
    if boxes.shape != (24, 16):
        raise RuntimeError(f"NS vertex enumeration produced {boxes.shape[0]} boxes, expected 24")
    return boxes


def ns_bipartite_boxes() -> np.ndarray:
    """Cached (24, 16) NS extremal boxes; regenerated table with a test."""
    from ._ns_boxes import NS_BIPARTITE_BOXES

    return np.array(NS_BIPARTITE_BOXES, dtype=float)


def _pair_product_vertices(boxes: np.ndarray, bipartition: tuple[int, int]) -> np.ndarray:
    """Lift bipartite boxes times third-party deterministic points to behaviors.

    ``bipartition`` names the 0-based parties forming the pair, in order;
    the remaining party is deterministic.
    """
    solo = 3 - bipartition[0] - bipartition[1]
    verts = []
    for box_flat in boxes:
        box = box_flat.reshape(2, 2, 2, 2)  # [a_pair0, a_pair1, s_pair0, s_pair1]
        for f in _single_party_strategies():
            table = np.zeros(BEHAVIOR_SHAPE)
            for settings in itertools.product((0, 1), repeat=3):
                s_pair = (settings[bipartition[0]], settings[bipartition[1]])
                s_solo = settings[solo]
                for o_pair in itertools.product((0, 1), repeat=2):
                    prob = box[o_pair[0], o_pair[1], s_pair[0], s_pair[1]]
                    if prob == 0.0:
                        continue
                    outcome = [0, 0, 0]
                    outcome[bipartition[0]] = o_pair[0]
                    outcome[bipartition[1]] = o_pair[1]
                    outcome[solo] = f[s_solo]
                    table[tuple(outcome) + tuple(settings)] += prob
            verts.append(table.reshape(-1))
    return np.array(verts)


_BIPARTITIONS = ((0, 1), (0, 2), (1, 2))


def enumerate_vertices(kind: HybridKind) -> np.ndarray:
    """Vertex behaviors of a hybrid model, one row per vertex, shape (n, 64)."""
    kind = HybridKind(kind)
    if kind is HybridKind.FULLY_LOCAL:
        return deterministic_local_vertices()
    boxes = ns_bipartite_boxes() if kind is HybridKind.NS2 else _signaling_boxes()
    return np.vstack([_pair_product_vertices(boxes, pair) for pair in _BIPARTITIONS])


# ---------------------------------------------------------------------------
# Phase-1 simplex feasibility


def _phase1_simplex(A: np.ndarray, b: np.ndarray, max_iter: int = 50000):
    """Minimize the sum of artificials for A w = b, w >= 0 (Bland's rule).

    Returns (objective, w, iterations). Raises LPNumericalError if the
    iteration cap is hit.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float).copy()
    m, n = A.shape
    flip = b < 0
    A = A.copy()
    A[flip] *= -1.0
    b[flip] *= -1.0

    rows = np.hstack([A, np.eye(m)])
    rhs = b.copy()
    basis = np.arange(n, n + m)
    cost = np.zeros(n + m)
    cost[n:] = 1.0
    eps = 1e-11

    for iteration in range(max_iter):
        reduced = cost - cost[basis] @ rows
        entering_candidates = np.where(reduced < -eps)[0]
        if entering_candidates.size == 0:
            objective = float(cost[basis] @ rhs)
            w = np.zeros(n + m)
            w[basis] = rhs
            return objective, w[:n], iteration
        j = int(entering_candidates[0])  # Bland: smallest index
        col = rows[:, j]
        positive = col > eps
        if not positive.any():
            # Unbounded phase-1 cannot happen with bounded artificials.
            raise LPNumericalError("phase-1 simplex detected an unbounded direction")
        ratios = np.full(m, np.inf)
        ratios[positive] = rhs[positive] / col[positive]
        best = ratios.min()
        tie_rows = np.where(ratios <= best + 1e-15)[0]
        i = int(tie_rows[np.argmin(basis[tie_rows])])  # Bland tie-break
        pivot = rows[i, j]
        rows[i] /= pivot
        rhs[i] /= pivot
        for r in range(m):
            if r != i and abs(rows[r, j]) > 0.0:
                factor = rows[r, j]
                rows[r] -= factor * rows[i]
                rhs[r] -= factor * rhs[i]
        rhs = np.maximum(rhs, 0.0)
        basis[i] = j
    raise LPNumericalError(f"phase-1 simplex did not terminate in {max_iter} pivots")


@dataclass
class MembershipResult:
    """LP verdict: a witness decomposition or certified infeasibility."""

    inside: bool
    kind: HybridKind
    weights: np.ndarray | None
    phase1_objective: float
    residual: float
    iterations: int


def membership(behavior: Behavior, kind: HybridKind) -> MembershipResult:
    """Decide whether a behavior lies in the convex hull of a model's vertices.

    Feasibility of: nonnegative vertex weights, summing to one, reproducing
    all 64 probabilities to within 1e-8. Simplex breakdown raises
    LPNumericalError instead of being reported as infeasibility.
    """
    kind = HybridKind(kind)
    vertices = enumerate_vertices(kind)
    target = behavior.flat()
    A = np.vstack([vertices.T, np.ones((1, vertices.shape[0]))])
    b = np.concatenate([target, [1.0]])
    objective, weights, iterations = _phase1_simplex(A, b)
    if objective > MEMBERSHIP_ATOL:
        return MembershipResult(
            inside=False,
            kind=kind,
            weights=None,
            phase1_objective=objective,
            residual=math.inf,
            iterations=iterations,
        )
    weights = np.maximum(weights, 0.0)
    residual = float(np.max(np.abs(A @ weights - b)))
    if residual > MEMBERSHIP_ATOL:
        raise LPNumericalError(
            f"phase-1 reported feasible but residual {residual} exceeds {MEMBERSHIP_ATOL}"
        )
    return MembershipResult(
        inside=True,
        kind=kind,
        weights=weights,
        phase1_objective=objective,
        residual=residual,
        iterations=iterations,
    )
