"""Multi-start derivative-free maximization of Bell operators.

The 12 measurement angles (8 for CHSH) are optimized by a Nelder-Mead
simplex search run from many seeded random starting points. All restarts
are advanced in lockstep as one vectorized batch, which keeps the search
deterministic for a fixed seed regardless of how the work is scheduled.

Angles are unconstrained during the search and wrapped to canonical ranges
([0, pi] polar, [0, 2 pi) azimuth) only in the report.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .operators import (
    CLASSICAL_BOUND,
    N_PARTIES,
    VIOLATION_ATOL,
    BellKind,
    MeasurementScenario,
    canonicalize_angles,
    make_batched_value,
)

DEFAULT_RESTARTS = 64
DEFAULT_SEED = 1
SIMPLEX_DIAMETER_TOL = 1e-10
MAX_ITERATIONS = 2000
# If the two best restart outcomes disagree by more than this, the landscape
# was not reproducibly covered and the report is flagged unconverged.
RESTART_SPREAD_TOL = 1e-6


@dataclass
class OptimizeOptions:
    restarts: int = DEFAULT_RESTARTS
    seed: int = DEFAULT_SEED
    xatol: float = SIMPLEX_DIAMETER_TOL
    max_iter: int = MAX_ITERATIONS
    spread_tol: float = RESTART_SPREAD_TOL

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("at least one restart required")
        if self.max_iter < 1:
            raise ValueError("max_iter must be positive")


@dataclass
class ViolationReport:
    """Outcome of one multi-start maximization."""

    value: float
    scenario: MeasurementScenario
    operator: BellKind
    classical_bound: float
    violated: bool
    restarts_used: int
    converged: bool
    restart_values: np.ndarray = field(repr=False)


def _nelder_mead_batch(f, x0: np.ndarray, xatol: float, max_iter: int):
    """Minimize ``f`` from each row of ``x0`` with standard NM coefficients.

    ``f`` must accept arrays of shape (..., n). Returns (points, values) of
    the per-restart best vertices. A restart freezes once its simplex
    max-coordinate diameter drops below ``xatol``.
    """
    x0 = np.asarray(x0, dtype=float)
    n_restarts, dim = x0.shape
    alpha, gamma, beta, sigma = 1.0, 2.0, 0.5, 0.5
    init_step = 0.5

    all_simplex = np.repeat(x0[:, None, :], dim + 1, axis=1)
    for j in range(dim):
        all_simplex[:, j + 1, j] += init_step
    all_values = f(all_simplex)

    live = np.arange(n_restarts)  # rows still iterating
    simplex = all_simplex
    values = all_values
    for _ in range(max_iter):
        order = np.argsort(values, axis=1, kind="stable")
        simplex = np.take_along_axis(simplex, order[:, :, None], axis=1)
        values = np.take_along_axis(values, order, axis=1)

        diameter = np.max(np.abs(simplex[:, 1:, :] - simplex[:, :1, :]), axis=(1, 2))
        done = diameter <= xatol
        if done.any():
            all_simplex[live] = simplex
            all_values[live] = values
            keep = ~done
            live = live[keep]
            if live.size == 0:
                break
            simplex = simplex[keep].copy()
            values = values[keep].copy()

        best = simplex[:, 0, :]
        worst = simplex[:, -1, :]
        centroid = simplex[:, :-1, :].mean(axis=1)
        direction = centroid - worst
        candidates = np.stack(
            [
                centroid + alpha * direction,  # reflection
                centroid + gamma * direction,  # expansion
                centroid + beta * direction,  # outside contraction
                centroid - beta * direction,  # inside contraction
            ],
            axis=1,
        )
        cand_vals = f(candidates)
        f_r, f_e, f_oc, f_ic = (cand_vals[:, i] for i in range(4))
        f_second = values[:, -2]
        f_worst = values[:, -1]

        improves_best = f_r < values[:, 0]
        take_expansion = improves_best & (f_e < f_r)
        take_reflection = (improves_best & ~take_expansion) | (
            ~improves_best & (f_r < f_second)
        )
        outside = ~improves_best & ~(f_r < f_second) & (f_r < f_worst)
        take_outside = outside & (f_oc <= f_r)
        inside = ~improves_best & ~(f_r < f_second) & ~(f_r < f_worst)
        take_inside = inside & (f_ic < f_worst)
        shrink = (outside & ~take_outside) | (inside & ~take_inside)

        new_point = np.where(
            take_expansion[:, None],
            candidates[:, 1],
            np.where(
                take_reflection[:, None],
                candidates[:, 0],
                np.where(take_outside[:, None], candidates[:, 2], candidates[:, 3]),
            ),
        )
        new_value = np.where(
            take_expansion,
            f_e,
            np.where(take_reflection, f_r, np.where(take_outside, f_oc, f_ic)),
        )
        replace = ~shrink
        simplex[replace, -1, :] = new_point[replace]
        values[replace, -1] = new_value[replace]

        shrink_rows = np.where(shrink)[0]
        if shrink_rows.size:
            shrunk = best[shrink_rows, None, :] + sigma * (
                simplex[shrink_rows, 1:, :] - best[shrink_rows, None, :]
            )
            simplex[shrink_rows, 1:, :] = shrunk
            values[shrink_rows, 1:] = f(shrunk)

    if live.size:
        all_simplex[live] = simplex
        all_values[live] = values
    order = np.argsort(all_values, axis=1, kind="stable")
    all_simplex = np.take_along_axis(all_simplex, order[:, :, None], axis=1)
    all_values = np.take_along_axis(all_values, order, axis=1)
    return all_simplex[:, 0, :], all_values[:, 0]


def _initial_points(restarts: int, dim: int, seed: int) -> np.ndarray:
    """Seeded uniform starts, one independent substream per restart."""
    children = np.random.SeedSequence(seed).spawn(restarts)
    points = np.empty((restarts, dim))
    for i, child in enumerate(children):
        rng = np.random.Generator(np.random.PCG64(child))
        theta = rng.uniform(0.0, np.pi, size=dim // 2)
        phi = rng.uniform(0.0, 2.0 * np.pi, size=dim // 2)
        points[i, 0::2] = theta
        points[i, 1::2] = phi
    return points


def optimize_operator(
    rho: np.ndarray, kind: BellKind, options: OptimizeOptions | None = None
) -> ViolationReport:
    """Maximize a Bell operator over projective measurement angles.

    The reported value is a lower bound on the true projective maximum;
    ``converged`` is False when the two best restarts disagree by more than
    the spread tolerance. Identical seeds give bit-identical reports.
    """
    kind = BellKind(kind)
    options = options or OptimizeOptions()
    value_fn = make_batched_value(rho, kind)
    dim = 4 * N_PARTIES[kind]

    def negated(x):
        return -value_fn(x)

    x0 = _initial_points(options.restarts, dim, options.seed)
    points, neg_values = _nelder_mead_batch(
        negated, x0, xatol=options.xatol, max_iter=options.max_iter
    )
    restart_values = -neg_values
    best_index = int(np.argmax(restart_values))  # ties: lowest restart index
    best_value = float(restart_values[best_index])

    if options.restarts > 1:
        top_two = np.sort(restart_values)[-2:]
        converged = bool(top_two[1] - top_two[0] <= options.spread_tol)
    else:
        converged = True

    scenario = MeasurementScenario.from_flat(canonicalize_angles(points[best_index]))
    bound = CLASSICAL_BOUND[kind]
    return ViolationReport(
        value=best_value,
        scenario=scenario,
        operator=kind,
        classical_bound=bound,
        violated=bool(best_value > bound + VIOLATION_ATOL),
        restarts_used=options.restarts,
        converged=converged,
        restart_values=restart_values,
    )
