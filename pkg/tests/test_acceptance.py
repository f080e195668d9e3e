"""Acceptance gate: every criterion at its stated tolerance, one line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the PASS/FAIL lines.
"""

import time

import numpy as np
import pytest

from retroq.equivalence import (
    ensemble_second_moment,
    ensemble_sqrt_moment,
    equivalent,
    oracle_equivalent,
)
from retroq.linalg import frobenius_distance
from retroq.model import (
    DensityOperator,
    basis_state,
    builtin_belief,
    depolarizing_channel,
    ensemble_to_belief,
    measure_z,
    pauli_eigenstates,
    projector,
    sic_states,
)
from retroq.retrodiction import petz_extended
from retroq.scenarios import recovery_curves, state_on_xz_circle, updated_beliefs_table
from retroq.sampling import random_ensemble
from retroq.verify import (
    belief_pairs,
    check_classical_marginal_invariance,
    check_classical_quantum_bridge,
    check_joint_prior_recovery,
    check_prior_recovery,
    check_sufficient_ancilla,
    check_sufficient_isometry,
    check_sufficient_reversible,
)

SEED = 1830


def _report(name: str, ok: bool, detail: str) -> bool:
    print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    return ok


def test_criterion_1_belief_update_table():
    start = time.perf_counter()
    report = updated_beliefs_table()
    elapsed = time.perf_counter() - start
    worst = report.max_deviation
    ok = worst <= 1e-9 and len(report.cells) == 16 and elapsed < 1.0
    assert _report("belief-update-table",
                   ok, f"16 cells, max deviation {worst:.3e} <= 1e-9, {elapsed:.3f}s < 1s")


def test_criterion_2_proper_improper_contrast():
    channel = measure_z()
    proper = builtin_belief("proper_01")
    entangled = builtin_belief("improper_phi_plus")
    evid = [DensityOperator(basis_state(i, 2)) for i in (0, 1)]
    pure = [projector(k) for k in pauli_eigenstates()[:2]]
    worst = 0.0
    for i in (0, 1):
        worst = max(worst, frobenius_distance(
            petz_extended(channel, proper, evid[i]).updated_s.matrix, pure[i]))
        worst = max(worst, frobenius_distance(
            petz_extended(channel, entangled, evid[i]).updated_s.matrix, np.eye(2) / 2.0))
    ok = worst <= 1e-10
    assert _report("proper-improper-contrast", ok, f"max deviation {worst:.3e} <= 1e-10")


def _direct_extended_update(kraus_ops, joint, dim_s, dim_r, sigma):
    """Independent dense evaluation of the extended update: local numpy only,
    no shared code with the engine (own sqrt, kron, adjoint, loop trace)."""

    def herm(m):
        return (m + m.conj().T) / 2.0

    def sqrtm_psd(m):
        w, v = np.linalg.eigh(herm(m))
        cut = m.shape[0] * 1e-12 * max(float(w[-1]), 0.0)
        w = np.where(w > cut, w, 0.0)
        return (v * np.sqrt(w)) @ v.conj().T

    def inv_sqrtm_support(m):
        w, v = np.linalg.eigh(herm(m))
        cut = m.shape[0] * 1e-12 * max(float(w[-1]), 0.0)
        inv = np.where(w > cut, 1.0 / np.sqrt(np.where(w > cut, w, 1.0)), 0.0)
        return (v * inv) @ v.conj().T

    marginal = np.zeros((dim_s, dim_s), dtype=complex)
    for i in range(dim_s):
        for j in range(dim_s):
            marginal[i, j] = sum(joint[i * dim_r + r, j * dim_r + r] for r in range(dim_r))
    forward = sum(k @ marginal @ k.conj().T for k in kraus_ops)
    w_half = inv_sqrtm_support(forward)
    core = sum(k.conj().T @ (w_half @ sigma @ w_half) @ k for k in kraus_ops)
    root = sqrtm_psd(joint)
    lifted = np.kron(core, np.eye(dim_r, dtype=complex))
    updated = root @ lifted @ root
    out = np.zeros((dim_s, dim_s), dtype=complex)
    for i in range(dim_s):
        for j in range(dim_s):
            out[i, j] = sum(updated[i * dim_r + r, j * dim_r + r] for r in range(dim_r))
    return out


def test_criterion_3_recovery_curves():
    samples = 256
    curves = {c.belief_name: c for c in recovery_curves(samples=samples)}
    channel = depolarizing_channel(0.1)
    worst_chan = 0.0
    for curve in curves.values():
        radii = np.linalg.norm(curve.channel_xz, axis=1)
        worst_chan = max(worst_chan, float(np.max(np.abs(radii - 0.9))))
    flat = np.linalg.norm(curves["flat"].recovered_xz, axis=1)
    flat_dev = float(np.max(np.abs(flat - 0.81)))
    improper_dev = float(np.max(np.linalg.norm(curves["improper_phi_plus"].recovered_xz, axis=1)))

    worst_direct = 0.0
    for name, curve in curves.items():
        belief = builtin_belief(name)
        for idx, theta in enumerate(curve.thetas):
            rho = state_on_xz_circle(float(theta))
            sigma = sum(k @ rho @ k.conj().T for k in channel.kraus_ops)
            direct = _direct_extended_update(channel.kraus_ops, belief.joint.matrix,
                                             belief.dim_s, belief.dim_r, sigma)
            x = float(np.trace(direct @ np.array([[0, 1], [1, 0]])).real)
            z = float(np.trace(direct @ np.array([[1, 0], [0, -1]])).real)
            gap = float(np.hypot(x - curve.recovered_xz[idx][0], z - curve.recovered_xz[idx][1]))
            worst_direct = max(worst_direct, gap)

    ok = (worst_chan <= 1e-9 and flat_dev <= 1e-9 and improper_dev <= 1e-10
          and worst_direct <= 1e-9)
    assert _report(
        "recovery-curves", ok,
        f"channel radius dev {worst_chan:.3e}, flat 0.81 dev {flat_dev:.3e}, "
        f"entangled collapse {improper_dev:.3e}, direct-evaluation gap {worst_direct:.3e} "
        f"({samples} samples x 4 panels)")


def test_criterion_4_oracle_agreement():
    rng = np.random.default_rng(SEED)
    pairs = 100
    start = time.perf_counter()
    agreed = 0
    for b1, b2 in belief_pairs(rng, pairs):
        by_signature = equivalent(b1, b2).equivalent
        by_oracle = oracle_equivalent(b1, b2, seed=int(rng.integers(0, 2**31))).equivalent
        agreed += int(by_signature == by_oracle)
    elapsed = time.perf_counter() - start
    ok = agreed == pairs and elapsed < 60.0
    assert _report("equivalence-oracle-agreement", ok,
                   f"{agreed}/{pairs} verdicts agree, {elapsed:.1f}s < 60s")


def test_criterion_5_two_design_signatures():
    report = equivalent(builtin_belief("xyz_design"), builtin_belief("sic_design"))
    swap = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            swap[i * 2 + j, j * 2 + i] = 1.0
    target = (np.eye(4) + swap) / 6.0
    xyz = ensemble_second_moment(_uniform_pure(pauli_eigenstates()))
    sic = ensemble_second_moment(_uniform_pure(sic_states()))
    moment_dev = max(frobenius_distance(xyz, target), frobenius_distance(sic, target))
    ok = report.signature_distance <= 1e-9 and moment_dev <= 1e-12
    assert _report("two-design-signatures", ok,
                   f"signature distance {report.signature_distance:.3e} <= 1e-9, "
                   f"second-moment identity dev {moment_dev:.3e} <= 1e-12")


def _uniform_pure(kets):
    from retroq.model import StateEnsemble

    p = 1.0 / len(kets)
    return StateEnsemble(tuple((DensityOperator(projector(k)), p) for k in kets))


@pytest.mark.parametrize("check, label", [
    (check_sufficient_ancilla, "ancilla-tensoring"),
    (check_sufficient_isometry, "register-isometry"),
    (check_sufficient_reversible, "reversible-register-channel"),
])
def test_criterion_6_signature_invariances(check, label):
    result = check(np.random.default_rng([SEED, _label_seed(label)]))
    assert _report(f"signature-invariance-{label}", result.passed,
                   f"50 random cases, {result.detail}")


def _label_seed(text: str) -> int:
    return sum(ord(c) for c in text)


def test_criterion_7_prior_recovery():
    r1 = check_prior_recovery(np.random.default_rng([SEED, 7]))
    r2 = check_joint_prior_recovery(np.random.default_rng([SEED, 8]))
    ok = r1.passed and r2.passed
    assert _report("prior-recovery", ok,
                   f"marginal: {r1.detail}; joint: {r2.detail} (50 cases each)")


def test_criterion_8_classical_invariance_and_bridge():
    r1 = check_classical_marginal_invariance(np.random.default_rng([SEED, 9]))
    r2 = check_classical_quantum_bridge(np.random.default_rng([SEED, 10]))
    ok = r1.passed and r2.passed
    assert _report("classical-marginal-invariance", ok,
                   f"1000 triples: {r1.detail}; diagonal bridge, 100 cases: {r2.detail}")


def test_criterion_9_ensemble_moment_consistency():
    rng = np.random.default_rng([SEED, 11])
    mismatches = 0
    for pure in (True, False):
        for _ in range(50):
            e1 = random_ensemble(rng, 2, int(rng.integers(1, 4)), pure=pure)
            e2 = random_ensemble(rng, 2, int(rng.integers(1, 4)), pure=pure)
            moment = ensemble_second_moment if pure else ensemble_sqrt_moment
            by_moment = frobenius_distance(moment(e1), moment(e2)) <= 1e-9
            by_signature = equivalent(ensemble_to_belief(e1),
                                      ensemble_to_belief(e2)).equivalent
            mismatches += int(by_moment != by_signature)
    ok = mismatches == 0
    assert _report("ensemble-moment-consistency", ok,
                   f"100 ensembles (50 pure + 50 mixed), {100 - mismatches}/100 decisions agree")
