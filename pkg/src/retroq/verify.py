"""Seeded invariant suite behind the ``verify`` subcommand.

Each check draws its own randomness from one generator, measures a worst-case
deviation and compares it to the stated tolerance. The battery is also reused
by the test suite; keep checks deterministic for a fixed seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from .classical import Distribution, StochasticMatrix, jeffrey_update, jeffrey_update_extended
from .equivalence import (
    ensemble_second_moment,
    ensemble_sqrt_moment,
    equivalent,
    extend_with_ancilla,
    isometry_on_register,
    oracle_equivalent,
    signature,
)
from .errors import RetroqError
from .linalg import (
    dag,
    double_ket,
    frobenius_distance,
    hermitize,
    partial_trace,
    psd_sqrt,
    support_inv_sqrt,
    tensor,
)
from .model import (
    Belief,
    DensityOperator,
    POVM,
    QuantumChannel,
    StateEnsemble,
    apply_channel,
    builtin_belief,
    ensemble_to_belief,
    measurement_channel,
    pauli_eigenstates,
    projector,
    sic_states,
    BUILTIN_BELIEF_NAMES,
)
from .retrodiction import petz, petz_extended
from .sampling import (
    haar_isometry,
    random_belief,
    random_channel,
    random_density,
    random_ensemble,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _deviation_check(name: str, worst: float, tol: float) -> CheckResult:
    return CheckResult(name, worst <= tol, f"max deviation {worst:.3e} (tolerance {tol:.1e})")


def check_psd_sqrt_squares(rng) -> CheckResult:
    worst = 0.0
    for dim in (2, 3, 4, 8, 16):
        for _ in range(10):
            m = random_density(rng, dim).matrix * rng.uniform(0.5, 4.0)
            s = psd_sqrt(m)
            worst = max(worst, frobenius_distance(s @ s, m))
    return _deviation_check("linalg-sqrt-squares-back", worst, 1e-9)


def check_support_inv_sqrt(rng) -> CheckResult:
    worst = 0.0
    for dim, rank in ((2, 1), (4, 2), (4, 4), (8, 3), (16, 16)):
        for _ in range(10):
            m = random_density(rng, dim, rank=rank).matrix
            w, v = np.linalg.eigh(m)
            proj = v[:, w > 1e-9] @ dag(v[:, w > 1e-9])
            s = support_inv_sqrt(m)
            worst = max(worst, frobenius_distance(s @ m @ s, proj))
    return _deviation_check("linalg-support-inv-sqrt-projector", worst, 1e-9)


def check_partial_trace_composes(rng) -> CheckResult:
    worst = 0.0
    for _ in range(20):
        dims = (2, 3, 2)
        m = random_density(rng, int(np.prod(dims))).matrix
        seq = partial_trace(partial_trace(m, dims, traced=(2,)), dims[:2], traced=(1,))
        both = partial_trace(m, dims, traced=(1, 2))
        worst = max(worst, frobenius_distance(seq, both))
        worst = max(worst, abs(float(np.trace(both).real) - float(np.trace(m).real)))
    return _deviation_check("linalg-partial-trace-composes", worst, 1e-12)


def check_double_ket_linear(rng) -> CheckResult:
    worst = 0.0
    for _ in range(20):
        dims = (2, 2)
        a = random_density(rng, 4).matrix
        b = random_density(rng, 4).matrix
        alpha = complex(rng.standard_normal(), rng.standard_normal())
        lhs = double_ket(alpha * a + b, dims)
        rhs = alpha * double_ket(a, dims) + double_ket(b, dims)
        worst = max(worst, float(np.linalg.norm(lhs - rhs)))
    return _deviation_check("linalg-double-ket-linear", worst, 1e-12)


def check_vectorization_consistency(rng) -> CheckResult:
    worst = 0.0
    for dim_s, dim_r in ((2, 1), (2, 2), (2, 3), (3, 2)):
        for _ in range(5):
            side = dim_s * dim_r
            a = rng.standard_normal((side, side)) + 1.0j * rng.standard_normal((side, side))
            v = double_ket(a, (dim_s, dim_r))
            back = partial_trace(np.outer(v, v.conj()), (dim_s, dim_r, dim_s, dim_r),
                                 traced=(2, 3))
            worst = max(worst, frobenius_distance(back, a @ dag(a)))
    return _deviation_check("linalg-vectorization-consistency", worst, 1e-10)


def check_random_channels_validate(rng) -> CheckResult:
    try:
        for _ in range(25):
            random_channel(rng, int(rng.integers(2, 5)), int(rng.integers(2, 5)))
    except RetroqError as err:
        return CheckResult("model-random-channels-validate", False, f"validation failed: {err}")
    return CheckResult("model-random-channels-validate", True, "25 random dilations validated CPTP")


def check_measurement_diagonal(rng) -> CheckResult:
    worst = 0.0
    for _ in range(10):
        dim = int(rng.integers(2, 4))
        effects = []
        remaining = np.eye(dim, dtype=np.complex128)
        for _ in range(dim - 1):
            w = rng.uniform(0.05, 0.3)
            e = w * random_density(rng, dim).matrix
            effects.append(e)
            remaining = remaining - e
        effects.append(remaining)
        povm = POVM(tuple(effects))
        channel = measurement_channel(povm)
        rho = random_density(rng, dim)
        out = apply_channel(channel, rho).matrix
        probs = np.array([float(np.trace(e @ rho.matrix).real) for e in povm.effects])
        worst = max(worst, frobenius_distance(out, np.diag(probs)))
    return _deviation_check("model-measurement-diagonal", worst, 1e-12)


def check_ensemble_marginal(rng) -> CheckResult:
    worst = 0.0
    for _ in range(10):
        ens = random_ensemble(rng, 2, int(rng.integers(1, 5)), pure=bool(rng.integers(0, 2)))
        belief = ensemble_to_belief(ens)
        worst = max(worst, frobenius_distance(belief.marginal_s().matrix, ens.average()))
    return _deviation_check("model-ensemble-marginal", worst, 1e-12)


def check_builtin_marginals(rng) -> CheckResult:
    worst = 0.0
    for name in BUILTIN_BELIEF_NAMES:
        marg = builtin_belief(name).marginal_s().matrix
        worst = max(worst, frobenius_distance(marg, np.eye(2) / 2.0))
    return _deviation_check("model-builtin-marginals-flat", worst, 1e-12)


def _random_full_rank_pair(rng):
    dim_in = int(rng.integers(2, 4))
    dim_out = int(rng.integers(2, 4))
    return random_channel(rng, dim_in, dim_out), random_density(rng, dim_in)


def check_prior_recovery(rng) -> CheckResult:
    worst = 0.0
    for _ in range(50):
        channel, prior = _random_full_rank_pair(rng)
        back = petz(channel, prior, apply_channel(channel, prior))
        worst = max(worst, frobenius_distance(back.matrix, prior.matrix))
    return _deviation_check("retrodiction-prior-recovery", worst, 1e-9)


def check_joint_prior_recovery(rng) -> CheckResult:
    worst = 0.0
    for _ in range(50):
        dim_r = int(rng.integers(1, 4))
        belief = random_belief(rng, 2, dim_r, kind="mixed")
        channel = random_channel(rng, 2, int(rng.integers(2, 4)))
        sigma = apply_channel(channel, belief.marginal_s())
        result = petz_extended(channel, belief, sigma)
        worst = max(worst, frobenius_distance(result.updated_joint.matrix, belief.joint.matrix))
    return _deviation_check("retrodiction-joint-prior-recovery", worst, 1e-9)


def check_purity_fixed_point(rng) -> CheckResult:
    worst = 0.0
    for _ in range(50):
        dim_r = int(rng.integers(1, 4))
        belief = random_belief(rng, 2, dim_r, kind="pure")
        channel = random_channel(rng, 2, int(rng.integers(2, 4)))
        forward = channel.apply_matrix(belief.marginal_s().matrix)
        sigma = DensityOperator(hermitize(forward))
        result = petz_extended(channel, belief, sigma)
        worst = max(worst, frobenius_distance(result.updated_joint.matrix, belief.joint.matrix))
    return _deviation_check("retrodiction-purity-fixed-point", worst, 1e-9)


def check_product_reduction(rng) -> CheckResult:
    worst = 0.0
    for _ in range(50):
        dim_r = int(rng.integers(1, 4))
        belief = random_belief(rng, 2, dim_r, kind="product")
        channel = random_channel(rng, 2, 2)
        sigma = random_density(rng, 2)
        ext = petz_extended(channel, belief, sigma).updated_s
        plain = petz(channel, belief.marginal_s(), sigma)
        worst = max(worst, frobenius_distance(ext.matrix, plain.matrix))
    return _deviation_check("retrodiction-product-reduction", worst, 1e-10)


def check_trace_preservation(rng) -> CheckResult:
    worst = 0.0
    for _ in range(50):
        dim_r = int(rng.integers(1, 4))
        belief = random_belief(rng, 2, dim_r, kind="mixed")
        channel = random_channel(rng, 2, int(rng.integers(2, 4)))
        sigma = random_density(rng, channel.dim_out)
        result = petz_extended(channel, belief, sigma)
        worst = max(worst, abs(result.updated_s.trace() - 1.0))
    return _deviation_check("retrodiction-trace-preserving", worst, 1e-10)


def _random_classical_triple(rng, na=None, nb=None, nc=None):
    na = na or int(rng.integers(2, 5))
    nb = nb or int(rng.integers(2, 5))
    nc = nc or int(rng.integers(2, 5))
    joint = Distribution(rng.dirichlet(np.ones(na * nc)).reshape(na, nc))
    forward = StochasticMatrix(rng.dirichlet(np.ones(nb), size=na).T)
    evidence = Distribution(rng.dirichlet(np.ones(nb)))
    return joint, forward, evidence


def check_classical_marginal_invariance(rng) -> CheckResult:
    worst = 0.0
    for _ in range(1000):
        joint, forward, evidence = _random_classical_triple(rng)
        q2 = jeffrey_update_extended(joint, forward, evidence)
        q1 = jeffrey_update(joint.marginal_system(), forward, evidence)
        worst = max(worst, float(np.max(np.abs(q2.weights.sum(axis=1) - q1.weights))))
    return _deviation_check("classical-marginal-invariance", worst, 1e-12)


def check_classical_quantum_bridge(rng) -> CheckResult:
    worst = 0.0
    for _ in range(100):
        joint, forward, evidence = _random_classical_triple(rng)
        na, nc = joint.weights.shape
        nb = forward.n_outputs
        belief = Belief.from_matrix(np.diag(joint.weights.reshape(-1)), na, nc)
        kraus = []
        for b in range(nb):
            for a in range(na):
                k = np.zeros((nb, na), dtype=np.complex128)
                k[b, a] = np.sqrt(forward.entries[b, a])
                kraus.append(k)
        channel = QuantumChannel(tuple(kraus))
        sigma = DensityOperator(np.diag(evidence.weights.astype(np.complex128)))
        result = petz_extended(channel, belief, sigma, project_support=True)
        q2 = jeffrey_update_extended(joint, forward, evidence)
        worst = max(worst, frobenius_distance(result.updated_joint.matrix,
                                              np.diag(q2.weights.reshape(-1))))
    return _deviation_check("classical-quantum-bridge", worst, 1e-10)


def check_signature_necessity(rng) -> CheckResult:
    worst = 0.0
    for _ in range(25):
        belief = random_belief(rng, 2, int(rng.integers(1, 5)),
                               kind=("mixed", "pure", "classical")[int(rng.integers(0, 3))])
        sig = signature(belief)
        worst = max(worst, frobenius_distance(sig.marginal_s(), belief.marginal_s().matrix))
    return _deviation_check("equivalence-signature-marginal", worst, 1e-10)


def check_sufficient_ancilla(rng) -> CheckResult:
    worst = 0.0
    for _ in range(50):
        belief = random_belief(rng, 2, int(rng.integers(1, 4)), kind="mixed")
        extra = random_density(rng, int(rng.integers(2, 4)))
        extended = extend_with_ancilla(belief, extra)
        worst = max(worst, frobenius_distance(signature(belief).operator,
                                              signature(extended).operator))
    return _deviation_check("equivalence-ancilla-invariance", worst, 1e-10)


def check_sufficient_isometry(rng) -> CheckResult:
    worst = 0.0
    for _ in range(50):
        dim_r = int(rng.integers(1, 4))
        belief = random_belief(rng, 2, dim_r, kind="mixed")
        target = dim_r + int(rng.integers(0, 3))
        v = haar_isometry(rng, dim_r, target)
        rotated = isometry_on_register(belief, v)
        worst = max(worst, frobenius_distance(signature(belief).operator,
                                              signature(rotated).operator))
    return _deviation_check("equivalence-isometry-invariance", worst, 1e-10)


def check_sufficient_reversible(rng) -> CheckResult:
    # Reversible register channels decompose as "tensor an ancilla, then an
    # isometry", so build them exactly that way.
    worst = 0.0
    for _ in range(50):
        dim_r = int(rng.integers(1, 4))
        belief = random_belief(rng, 2, dim_r, kind="mixed")
        extra = random_density(rng, 2)
        grown = extend_with_ancilla(belief, extra)
        v = haar_isometry(rng, grown.dim_r, grown.dim_r + int(rng.integers(0, 3)))
        transformed = isometry_on_register(grown, v)
        worst = max(worst, frobenius_distance(signature(belief).operator,
                                              signature(transformed).operator))
    return _deviation_check("equivalence-reversible-invariance", worst, 1e-10)


def _purification(rho: np.ndarray) -> Belief:
    w, v = np.linalg.eigh(rho)
    dim = rho.shape[0]
    ket = np.zeros(dim * dim, dtype=np.complex128)
    for i in range(dim):
        ket += np.sqrt(max(float(w[i]), 0.0)) * np.kron(v[:, i], np.eye(dim)[i])
    joint = np.outer(ket, ket.conj())
    return Belief.from_matrix(joint, dim, dim)


def belief_pairs(rng, count: int) -> Iterator[tuple[Belief, Belief]]:
    """Mixed battery of belief pairs: equivalent constructions interleaved
    with independent (generically inequivalent) draws on a qubit system."""
    kinds = ("independent", "product", "isometry", "ancilla", "same-marginal")
    for i in range(count):
        kind = kinds[i % len(kinds)]
        if kind == "independent":
            b1 = random_belief(rng, 2, int(rng.integers(1, 5)),
                               kind=("mixed", "classical", "pure")[int(rng.integers(0, 3))])
            b2 = random_belief(rng, 2, int(rng.integers(1, 5)),
                               kind=("mixed", "classical", "pure")[int(rng.integers(0, 3))])
        elif kind == "product":
            marginal = random_density(rng, 2)
            r1 = random_density(rng, int(rng.integers(1, 5)))
            r2 = random_density(rng, int(rng.integers(1, 5)))
            b1 = Belief.from_matrix(tensor(marginal.matrix, r1.matrix), 2, r1.dim)
            b2 = Belief.from_matrix(tensor(marginal.matrix, r2.matrix), 2, r2.dim)
        elif kind == "isometry":
            dim_r = int(rng.integers(1, 4))
            b1 = random_belief(rng, 2, dim_r, kind="mixed")
            b2 = isometry_on_register(b1, haar_isometry(rng, dim_r, dim_r + int(rng.integers(0, 2))))
        elif kind == "ancilla":
            b1 = random_belief(rng, 2, int(rng.integers(1, 3)), kind="mixed")
            b2 = extend_with_ancilla(b1, random_density(rng, 2))
        else:
            marginal = random_density(rng, 2)
            w, v = np.linalg.eigh(marginal.matrix)
            members = tuple(
                (DensityOperator(np.outer(v[:, k], v[:, k].conj())), float(w[k]))
                for k in range(2)
            )
            b1 = ensemble_to_belief(StateEnsemble(members))
            b2 = _purification(marginal.matrix)
        yield b1, b2


def check_signature_oracle_agreement(rng, pairs: int = 30) -> CheckResult:
    agreed = 0
    for b1, b2 in belief_pairs(rng, pairs):
        by_signature = equivalent(b1, b2).equivalent
        by_oracle = oracle_equivalent(b1, b2, seed=int(rng.integers(0, 2**31))).equivalent
        agreed += int(by_signature == by_oracle)
    return CheckResult("equivalence-signature-oracle-agreement", agreed == pairs,
                       f"{agreed}/{pairs} verdicts agree")


def check_two_designs(rng) -> CheckResult:
    xyz = builtin_belief("xyz_design")
    sic = builtin_belief("sic_design")
    report = equivalent(xyz, sic)
    eye4 = np.eye(4, dtype=np.complex128)
    swap = np.zeros((4, 4), dtype=np.complex128)
    for i in range(2):
        for j in range(2):
            swap[i * 2 + j, j * 2 + i] = 1.0
    target = (eye4 + swap) / 6.0
    worst = report.signature_distance
    for name in ("xyz_design", "sic_design"):
        ens = _builtin_ensemble(name)
        worst = max(worst, frobenius_distance(ensemble_second_moment(ens), target))
    return _deviation_check("equivalence-two-designs", worst, 1e-9)


def _builtin_ensemble(name: str) -> StateEnsemble:
    kets = pauli_eigenstates() if name == "xyz_design" else sic_states()
    p = 1.0 / len(kets)
    return StateEnsemble(tuple((DensityOperator(projector(k)), p) for k in kets))


def check_ensemble_moment_consistency(rng) -> CheckResult:
    mismatches = 0
    total = 0
    for pure in (True, False):
        for _ in range(25):
            e1 = random_ensemble(rng, 2, int(rng.integers(1, 4)), pure=pure)
            e2 = random_ensemble(rng, 2, int(rng.integers(1, 4)), pure=pure)
            if pure:
                moment_gap = frobenius_distance(ensemble_second_moment(e1),
                                                ensemble_second_moment(e2))
            else:
                moment_gap = frobenius_distance(ensemble_sqrt_moment(e1),
                                                ensemble_sqrt_moment(e2))
            by_moment = moment_gap <= 1e-9
            by_signature = equivalent(ensemble_to_belief(e1), ensemble_to_belief(e2)).equivalent
            mismatches += int(by_moment != by_signature)
            total += 1
            # Also exercise one guaranteed-equivalent pair: the ensemble against itself
            # with a permuted register.
    return CheckResult("equivalence-ensemble-moment-consistency", mismatches == 0,
                       f"{total - mismatches}/{total} decisions agree")


ALL_CHECKS: tuple[Callable, ...] = (
    check_psd_sqrt_squares,
    check_support_inv_sqrt,
    check_partial_trace_composes,
    check_double_ket_linear,
    check_vectorization_consistency,
    check_random_channels_validate,
    check_measurement_diagonal,
    check_ensemble_marginal,
    check_builtin_marginals,
    check_prior_recovery,
    check_joint_prior_recovery,
    check_purity_fixed_point,
    check_product_reduction,
    check_trace_preservation,
    check_classical_marginal_invariance,
    check_classical_quantum_bridge,
    check_signature_necessity,
    check_sufficient_ancilla,
    check_sufficient_isometry,
    check_sufficient_reversible,
    check_signature_oracle_agreement,
    check_two_designs,
    check_ensemble_moment_consistency,
)


def run_all(seed: int = 0) -> list[CheckResult]:
    results = []
    for index, check in enumerate(ALL_CHECKS):
        rng = np.random.default_rng([int(seed), index])
        results.append(check(rng))
    return results
