"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
report lines as they are produced. Every tolerance is pinned here.

Two checks compare against published numbers that our two independent
computation routes (closed-form expressions and the measurement-angle
optimizer, which agree with each other to ~1e-4) both contradict:
the rank-4 family's Svetlichny threshold (published 0.72, reproducible
0.62504) inside criterion 5, and the depolarized-GGHZ detection example
under the published closed-form matrix (Svetlichny is violated there, so
"the 99th facet fires while Svetlichny does not" fails) inside criterion 9;
likewise the rank-8 family's 99th-facet threshold (published 0.75843,
reproducible 0.76284, where even the published closed-form expression gives
2.98463 at the published threshold). These assertions are kept faithful to
the published numbers and fail honestly; the report lines carry the
recomputed evidence.
"""

import math

import numpy as np
import pytest

from tribell import channels, entangle, polytope, qalg, states, workflows
from tribell.bell import (
    BellKind,
    OptimizeOptions,
    behavior_operator_value,
    bound_b1_b3,
    bound_b2,
    bound_b4,
    bound_b5,
    ns99_mixed_bound,
    optimize_operator,
    visibility_threshold_ns99,
    visibility_threshold_svetlichny,
)
from tribell.polytope import Behavior, HybridKind
from tribell.workflows import ThresholdQuery
from conftest import random_density_matrix, random_pure_state

OPTS = OptimizeOptions(restarts=64, seed=1)


def _report(tag: str, ok: bool, detail: str) -> None:
    print(f"[{tag}] {'PASS' if ok else 'FAIL'} - {detail}")


def _opt(rho, kind, opts=OPTS):
    return optimize_operator(rho, kind, opts)


def test_criterion_01_gghz_bound_recovery():
    """20-point eta grid: optimizer matches both closed forms to 1e-3."""
    worst_ns = worst_sv = 0.0
    for eta in np.linspace(0.0, math.pi / 4, 20):
        tau = math.sin(2 * eta) ** 2
        rho = qalg.projector(states.gghz(float(eta)))
        ns = _opt(rho, BellKind.NS99).value
        sv = _opt(rho, BellKind.SVETLICHNY).value
        worst_ns = max(worst_ns, abs(ns - bound_b1_b3(tau)))
        worst_sv = max(worst_sv, abs(sv - bound_b2(tau)))
    ok = worst_ns <= 1e-3 and worst_sv <= 1e-3
    _report("A01", ok, f"gghz grid: worst ns99 diff {worst_ns:.2e}, svet diff {worst_sv:.2e} (tol 1e-3)")
    assert worst_ns <= 1e-3
    assert worst_sv <= 1e-3


def test_criterion_02_ms_bound_recovery():
    """20-point eta grid: NS99 matches 1+2 sqrt(1+sin^2 eta); 2<->3 swap equal."""
    worst = worst_swap = 0.0
    for eta in np.linspace(0.0, math.pi / 4, 20):
        psi = states.ms(float(eta))
        expected = 1 + 2 * math.sqrt(1 + math.sin(eta) ** 2)
        v = _opt(qalg.projector(psi), BellKind.NS99).value
        v_swapped = _opt(
            qalg.projector(qalg.permute_qubits(psi, (1, 3, 2))), BellKind.NS99
        ).value
        worst = max(worst, abs(v - expected))
        worst_swap = max(worst_swap, abs(v - v_swapped))
    ok = worst <= 1e-3 and worst_swap <= 1e-4
    _report("A02", ok, f"ms grid: worst bound diff {worst:.2e} (tol 1e-3), swap diff {worst_swap:.2e} (tol 1e-4)")
    assert worst <= 1e-3
    assert worst_swap <= 1e-4


def test_criterion_03_subclass_s_bounds():
    """50 random lambda triples: optimizer matches the piecewise bounds."""
    rng = np.random.default_rng(777)
    worst_ns = worst_sv = 0.0
    excess_ns = excess_sv = -1.0
    for _ in range(50):
        v = rng.normal(size=3)
        v /= np.linalg.norm(v)
        l0, l3, l4 = (float(x) for x in v)
        tau = 4 * l0 * l0 * l4 * l4
        c12 = 4 * l0 * l0 * l3 * l3
        rho = qalg.projector(states.extended_ghz(l0, l3, l4))
        ns = _opt(rho, BellKind.NS99).value
        sv = _opt(rho, BellKind.SVETLICHNY).value
        b_ns = max(3.0, bound_b5(tau, c12))
        b_sv = bound_b4(tau, c12)
        worst_ns = max(worst_ns, abs(ns - b_ns))
        worst_sv = max(worst_sv, abs(sv - b_sv))
        excess_ns = max(excess_ns, ns - b_ns)
        excess_sv = max(excess_sv, sv - b_sv)
    ok = worst_ns <= 2e-3 and worst_sv <= 2e-3 and excess_ns <= 1e-3 and excess_sv <= 1e-3
    _report(
        "A03",
        ok,
        f"subclass S (50 states): worst |diff| ns99 {worst_ns:.2e}, svet {worst_sv:.2e} "
        f"(tol 2e-3); max excess {max(excess_ns, excess_sv):.2e} (tol 1e-3)",
    )
    assert worst_ns <= 2e-3 and worst_sv <= 2e-3
    assert excess_ns <= 1e-3 and excess_sv <= 1e-3


def _bisect_threshold(family, operator, k=None):
    return workflows.threshold_bisect(
        ThresholdQuery(family=family, operator=operator, k=k, tol=2.5e-4, seed=1)
    ).p_star


def test_criterion_04_table1_thresholds():
    """rho2 and rho3^k thresholds within +-0.002 of the published values."""
    failures = []
    for spec in workflows.TABLE1_ROWS:
        for op, published in (
            (BellKind.NS99, spec.ns99_threshold),
            (BellKind.SVETLICHNY, spec.svetlichny_threshold),
        ):
            got = _bisect_threshold(spec.family, op, spec.k)
            diff = abs(got - published)
            line = f"{spec.label} {op.value}: recomputed {got:.6f} vs published {published:.6f} (|diff| {diff:.6f})"
            print("       " + line)
            if diff > 0.002:
                failures.append(line)
    _report("A04", not failures, f"table-1 thresholds within +-0.002: {8 - len(failures)}/8")
    assert not failures, failures


def test_criterion_05_table2_thresholds_and_bounds():
    """rho4..rho8 thresholds within +-0.002; closed forms track the optimizer."""
    failures = []
    for spec in workflows.TABLE2_ROWS:
        for op, published in (
            (BellKind.NS99, spec.ns99_threshold),
            (BellKind.SVETLICHNY, spec.svetlichny_threshold),
        ):
            got = _bisect_threshold(spec.family, op)
            diff = abs(got - published)
            line = f"{spec.label} {op.value}: recomputed {got:.6f} vs published {published:.6f} (|diff| {diff:.6f})"
            print("       " + line)
            if diff > 0.002:
                failures.append(line)
    worst_grid = 0.0
    for spec in workflows.TABLE2_ROWS:
        build = workflows.mixed_builder(spec.family)
        for p in np.linspace(0.0, 1.0, 10):
            opt_val = _opt(build(float(p)), BellKind.NS99).value
            worst_grid = max(worst_grid, abs(opt_val - ns99_mixed_bound(spec.family, float(p))))
    grid_ok = worst_grid <= 2e-3
    print(f"       closed-form vs optimizer on 10-point grids: worst diff {worst_grid:.2e} (tol 2e-3)")
    _report(
        "A05",
        not failures and grid_ok,
        f"table-2 thresholds within +-0.002: {10 - len(failures)}/10; bound grids ok: {grid_ok}",
    )
    assert grid_ok
    assert not failures, failures


def test_criterion_06_discord_pipeline():
    """Numeric monogamy score vs closed forms to 1e-5; classical marginals."""
    worst_gghz = 0.0
    for eta in np.linspace(0.0, math.pi / 4, 20):
        eta = float(eta)
        score = entangle.discord_monogamy_score(states.gghz(eta))
        worst_gghz = max(worst_gghz, abs(score.delta_d - entangle.delta_d_gghz(eta)))
    rng = np.random.default_rng(4242)
    worst_s = 0.0
    for _ in range(20):
        v = rng.normal(size=3)
        v /= np.linalg.norm(v)
        l0, l3, l4 = (float(x) for x in v)
        tau = 4 * l0 * l0 * l4 * l4
        score = entangle.discord_monogamy_score(states.extended_ghz(l0, l3, l4))
        worst_s = max(worst_s, abs(score.delta_d - entangle.delta_d_subclass_s(tau)))
    worst_marginal = 0.0
    for eta in np.linspace(0.0, math.pi / 4, 20):
        rho = qalg.projector(states.gghz(float(eta)))
        for keep in ([1, 2], [1, 3]):
            marg = qalg.partial_trace(rho, keep=keep)
            worst_marginal = max(worst_marginal, abs(entangle.discord_numeric(marg)))
    ok = worst_gghz <= 1e-5 and worst_s <= 1e-5 and worst_marginal <= 1e-8
    _report(
        "A06",
        ok,
        f"delta_D vs closed forms: gghz {worst_gghz:.2e}, subclass S {worst_s:.2e} (tol 1e-5); "
        f"gghz marginal discord {worst_marginal:.2e} (tol 1e-8)",
    )
    assert worst_gghz <= 1e-5
    assert worst_s <= 1e-5
    assert worst_marginal <= 1e-8


def test_criterion_07_visibility_thresholds():
    """Violation switches on across the closed-form visibility threshold."""
    cases = []
    for tau in (0.5, 1.0):
        for op, fn in (
            (BellKind.NS99, visibility_threshold_ns99),
            (BellKind.SVETLICHNY, visibility_threshold_svetlichny),
        ):
            if fn(tau) is None:
                continue  # svetlichny has no threshold below 1 at tau = 0.5
            check = workflows.visibility_check(op, tau, delta=0.01, seed=1)
            cases.append((tau, op, check))
            print(
                f"       tau={tau} {op.value}: alpha*={check.threshold:.5f} "
                f"below value {check.below_value:.6f} (viol {check.below_violates}), "
                f"above value {check.above_value:.6f} (viol {check.above_violates})"
            )
    ok = all(c.confirmed for _, _, c in cases) and len(cases) == 3
    _report("A07", ok, f"visibility flips across alpha* for {len(cases)} defined cases")
    assert len(cases) == 3
    for tau, op, check in cases:
        assert check.confirmed, (tau, op)


def test_criterion_08_detection_example():
    """0.966|000>+0.259|111>: the 99th facet fires, Svetlichny does not."""
    psi = states.pure_state([0.966, 0, 0, 0, 0, 0, 0, 0.259], normalize=True)
    rho = qalg.projector(psi)
    tau = entangle.three_tangle_pure(psi)
    ns = _opt(rho, BellKind.NS99)
    sv = _opt(rho, BellKind.SVETLICHNY)
    ok = ns.value > 3.0 and sv.value < 4.0 and tau < 1.0 / 3.0
    _report(
        "A08",
        ok,
        f"tau={tau:.4f}: ns99 {ns.value:.6f} (>3), svetlichny {sv.value:.6f} (<4)",
    )
    assert tau == pytest.approx(0.25, abs=5e-3)
    assert ns.value > 3.0
    assert sv.value < 4.0


def test_criterion_09_channel_example_claims():
    """Per-model verdicts for the four published noisy-state examples.

    The published claim is that the 99th facet is violated while Svetlichny
    is not. Both models are evaluated and reported; the closed-form model is
    required to agree with the claim where it exists (depolarized and damped
    GGHZ examples).
    """
    verdicts = workflows.channel_example_report(seed=1)
    for v in verdicts:
        print(
            f"       {v.example} [{v.model}]: ns99 {v.ns99_value:.6f} "
            f"({'VIOL' if v.ns99_violated else 'no viol'}), svet {v.svetlichny_value:.6f} "
            f"({'VIOL' if v.svetlichny_violated else 'no viol'}) -> claim holds: {v.claim_holds}"
        )
    closed = [v for v in verdicts if v.model == "closed_form"]
    assert len(closed) == 2  # both GGHZ-type examples carry a closed form
    failures = [v.example for v in closed if not v.claim_holds]
    _report(
        "A09",
        not failures,
        f"closed-form model agrees with the published claim for {2 - len(failures)}/2 examples",
    )
    assert not failures, failures


def test_criterion_10_polytope_consistency():
    """Deterministic strategies, NS2 facet validity, GHZ outside NS2."""
    local = polytope.enumerate_vertices(HybridKind.FULLY_LOCAL)
    assert local.shape[0] == 64
    ns_vals = [behavior_operator_value(v.reshape(polytope.BEHAVIOR_SHAPE), BellKind.NS99) for v in local]
    sv_vals = [
        behavior_operator_value(v.reshape(polytope.BEHAVIOR_SHAPE), BellKind.SVETLICHNY)
        for v in local
    ]
    dets_ok = max(ns_vals) == pytest.approx(3.0) and max(sv_vals) == pytest.approx(4.0)
    dets_ok = dets_ok and all(v <= 3 + 1e-12 for v in ns_vals) and all(v <= 4 + 1e-12 for v in sv_vals)

    ghz = qalg.projector(states.ghz_state())
    rep = _opt(ghz, BellKind.NS99)
    scenario = rep.scenario
    ghz_behavior = polytope.quantum_behavior(ghz, scenario)
    outside = not polytope.membership(ghz_behavior, HybridKind.NS2).inside

    rng = np.random.default_rng(2718)
    certified, violations = 0, 0
    candidates = [Behavior.from_flat(rng.dirichlet(np.ones(64)) @ local) for _ in range(4)]
    for alpha in (0.3, 0.6, 0.75, 0.9):
        candidates.append(
            polytope.quantum_behavior(states.white_noise_mix(ghz, alpha), scenario)
        )
    for beh in candidates:
        res = polytope.membership(beh, HybridKind.NS2)
        if res.inside:
            certified += 1
            if behavior_operator_value(beh.table, BellKind.NS99) > 3.0 + 1e-7:
                violations += 1
    ok = dets_ok and outside and certified >= 5 and violations == 0
    _report(
        "A10",
        ok,
        f"deterministic bounds attained: {dets_ok}; GHZ-optimal outside NS2: {outside}; "
        f"{certified} behaviors certified inside NS2, facet violations among them: {violations}",
    )
    assert dets_ok
    assert outside
    assert certified >= 5 and violations == 0


def test_criterion_11_property_suites():
    """100 randomized instances per property."""
    rng = np.random.default_rng(31415)

    worst_trace, worst_eig = 0.0, 0.0
    for _ in range(100):
        rho = random_density_matrix(rng)
        qubit = int(rng.integers(1, 4))
        strength = float(rng.uniform(0, 1))
        if rng.integers(2):
            out = channels.depolarize_qubit(rho, qubit, strength)
        else:
            out = channels.amplitude_damp_qubit(rho, qubit, strength)
        worst_trace = max(worst_trace, abs(np.trace(out).real - 1.0))
        worst_eig = min(worst_eig, float(np.linalg.eigvalsh(out).min()))
    channels_ok = worst_trace <= 1e-12 and worst_eig >= -1e-10

    perms = [(2, 1, 3), (3, 2, 1), (2, 3, 1), (1, 3, 2), (3, 1, 2)]
    worst_perm = 0.0
    for i in range(100):
        psi = random_pure_state(rng)
        tau = entangle.three_tangle_pure(psi)
        perm = perms[i % len(perms)]
        worst_perm = max(
            worst_perm, abs(entangle.three_tangle_pure(qalg.permute_qubits(psi, perm)) - tau)
        )
    tangle_ok = worst_perm <= 1e-9

    worst_pure, worst_diag = 0.0, 0.0
    for i in range(100):
        if i % 2 == 0:
            psi = random_pure_state(rng, dim=int(rng.choice([2, 4, 8])))
            worst_pure = max(worst_pure, abs(qalg.von_neumann_entropy(qalg.projector(psi))))
        else:
            probs = rng.dirichlet(np.ones(8))
            expected = float(-np.sum(probs[probs > 0] * np.log2(probs[probs > 0])))
            worst_diag = max(
                worst_diag, abs(qalg.von_neumann_entropy(np.diag(probs).astype(complex)) - expected)
            )
    entropy_ok = worst_pure <= 1e-10 and worst_diag <= 1e-10

    determinism_ok = True
    fast = OptimizeOptions(restarts=4, seed=11)
    for i in range(100):
        rho = random_density_matrix(rng, rank=int(rng.integers(1, 9)))
        kind = BellKind.NS99 if i % 2 == 0 else BellKind.SVETLICHNY
        r1 = optimize_operator(rho, kind, fast)
        r2 = optimize_operator(rho, kind, fast)
        if (
            r1.value != r2.value
            or not np.array_equal(r1.scenario.angles, r2.scenario.angles)
            or not np.array_equal(r1.restart_values, r2.restart_values)
        ):
            determinism_ok = False
            break

    ok = channels_ok and tangle_ok and entropy_ok and determinism_ok
    _report(
        "A11",
        ok,
        f"channels trace/PSD: {channels_ok} (trace {worst_trace:.1e}, eig {worst_eig:.1e}); "
        f"tangle permutation: {tangle_ok} ({worst_perm:.1e}); entropy: {entropy_ok}; "
        f"optimizer determinism: {determinism_ok}",
    )
    assert channels_ok
    assert tangle_ok
    assert entropy_ok
    assert determinism_ok
