"""Belief equivalence: signatures, the decision procedure, and its oracle.

Two beliefs retrodict identically for every channel exactly when their
signatures coincide, where the signature of a belief is the register-traced
outer product of the vectorized square root of its joint state. The
brute-force oracle decides the same question operationally, by running the
extended update over a battery of channels (a distinguishing witness family
plus random ones) on a spanning set of evidence states.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import CrossCheckError, DimensionMismatch, NotPure, ValidationError
from .linalg import (
    as_complex,
    dag,
    double_ket,
    frobenius_distance,
    hermiticity_defect,
    hermitize,
    partial_trace,
    psd_sqrt,
    support_cutoff,
    support_functions,
    tensor,
)
from .model import Belief, DensityOperator, POVM, QuantumChannel, StateEnsemble, projector, sic_states
from .retrodiction import _extended_raw
from .sampling import random_channel

SIGNATURE_TOL = 1e-9
CROSS_CHECK_TOL = 1e-10
ORACLE_TOL = 1e-8
ORACLE_SEED = 7042


@dataclass(frozen=True)
class EquivalenceSignature:
    """The canonical invariant of a belief: a PSD operator on S (x) S'."""

    operator: np.ndarray
    dim_s: int

    def __post_init__(self):
        op = as_complex(self.operator).copy()
        d2 = self.dim_s * self.dim_s
        if op.shape != (d2, d2):
            raise DimensionMismatch(f"signature shape {op.shape} != ({d2}, {d2})")
        if hermiticity_defect(op) > CROSS_CHECK_TOL:
            raise ValidationError("signature operator is not Hermitian")
        w = np.linalg.eigvalsh(hermitize(op))
        tau = support_cutoff(d2, float(w[-1]) if w.size else 0.0)
        if w.size and float(w[0]) < -tau:
            raise ValidationError(f"signature operator has negative eigenvalue {float(w[0]):.3e}")
        op.setflags(write=False)
        object.__setattr__(self, "operator", op)

    def marginal_s(self) -> np.ndarray:
        """Trace over S'; always equals the belief marginal on S."""
        return partial_trace(self.operator, (self.dim_s, self.dim_s), traced=(1,))


@dataclass(frozen=True)
class EquivalenceReport:
    equivalent: bool
    signature_distance: float
    marginal_distance: float
    tolerance: float


@dataclass(frozen=True)
class OracleReport:
    equivalent: bool
    channels_tested: int
    seed: int
    max_deviation: float
    tolerance: float


@dataclass(frozen=True)
class WitnessChannelFamily:
    """The distinguishing channel battery: one fully depolarizing channel plus
    one two-outcome smearing channel per effect of an informationally complete
    POVM. Every output is full rank on every input state."""

    channels: tuple[QuantumChannel, ...]
    povm: POVM


def signature(belief: Belief) -> EquivalenceSignature:
    """Compute a belief's signature, cross-checking two independent routes.

    The primary route vectorizes sqrt(joint) and partial-traces the outer
    product over both register copies; the redundant route evaluates the
    equivalent matrix-unit sum. Disagreement beyond 1e-10 raises
    CrossCheckError (it would mean an implementation bug).
    """
    root = belief.sqrt_joint()
    dim_s, dim_r = belief.dim_s, belief.dim_r
    vec = double_ket(root, (dim_s, dim_r))
    vec_form = partial_trace(np.outer(vec, vec.conj()), (dim_s, dim_r, dim_s, dim_r),
                             traced=(1, 3))
    sum_form = _backend.impl.signature_sum(root, dim_s, dim_r)
    gap = frobenius_distance(vec_form, sum_form)
    if gap > CROSS_CHECK_TOL:
        raise CrossCheckError(f"signature routes disagree by {gap:.3e}")
    sig = EquivalenceSignature(hermitize(vec_form), dim_s)
    marginal_gap = frobenius_distance(sig.marginal_s(), belief.marginal_s().matrix)
    if marginal_gap > CROSS_CHECK_TOL:
        raise CrossCheckError(f"signature marginal deviates from belief marginal by {marginal_gap:.3e}")
    return sig


def equivalent(b1: Belief, b2: Belief, tol: float = SIGNATURE_TOL) -> EquivalenceReport:
    """Decide equivalence by signature distance; also report the marginal gap."""
    if b1.dim_s != b2.dim_s:
        raise DimensionMismatch(f"system dimensions differ: {b1.dim_s} vs {b2.dim_s}")
    dist = frobenius_distance(signature(b1).operator, signature(b2).operator)
    marginal = frobenius_distance(b1.marginal_s().matrix, b2.marginal_s().matrix)
    return EquivalenceReport(
        equivalent=bool(dist <= tol),
        signature_distance=dist,
        marginal_distance=marginal,
        tolerance=float(tol),
    )


def ensemble_second_moment(ensemble: StateEnsemble) -> np.ndarray:
    """sum_x p(x) |psi_x><psi_x| (x) |psi_x><psi_x| for a pure-state ensemble.

    Raises NotPure when any member has a second eigenvalue above the support
    cutoff.
    """
    total = np.zeros((ensemble.dim ** 2, ensemble.dim ** 2), dtype=np.complex128)
    for idx, (rho, p) in enumerate(ensemble.members):
        w = np.linalg.eigvalsh(rho.matrix)
        tau = support_cutoff(rho.dim, float(w[-1]))
        if rho.dim > 1 and float(w[-2]) > tau:
            raise NotPure(f"ensemble member {idx} has rank above one (second eigenvalue {float(w[-2]):.3e})")
        total += p * tensor(rho.matrix, rho.matrix)
    return total


def ensemble_sqrt_moment(ensemble: StateEnsemble) -> np.ndarray:
    """sum_x p(x) sqrt(rho_x) (x) sqrt(rho_x); equals the second moment on pure ensembles."""
    total = np.zeros((ensemble.dim ** 2, ensemble.dim ** 2), dtype=np.complex128)
    for rho, p in ensemble.members:
        root = psd_sqrt(rho.matrix)
        total += p * tensor(root, root)
    return total


def extend_with_ancilla(belief: Belief, extra: DensityOperator) -> Belief:
    """Tensor an uncorrelated state onto the register: an equivalent belief."""
    joint = tensor(belief.joint.matrix, extra.matrix)
    return Belief.from_matrix(joint, belief.dim_s, belief.dim_r * extra.dim)


def isometry_on_register(belief: Belief, isometry: np.ndarray) -> Belief:
    """Conjugate the register by an isometry: an equivalent belief.

    ``isometry`` maps the register space into a possibly larger one and must
    satisfy V^dag V = identity.
    """
    v = as_complex(isometry)
    if v.ndim != 2 or v.shape[1] != belief.dim_r:
        raise DimensionMismatch(f"isometry shape {v.shape} does not act on register dim {belief.dim_r}")
    defect = frobenius_distance(dag(v) @ v, np.eye(belief.dim_r))
    if defect > 1e-10:
        raise ValidationError(f"matrix is not an isometry (V^dag V defect {defect:.3e})")
    lifted = tensor(np.eye(belief.dim_s), v)
    joint = lifted @ belief.joint.matrix @ dag(lifted)
    return Belief.from_matrix(hermitize(joint), belief.dim_s, v.shape[0])


def _cross_kets(dim: int) -> list[np.ndarray]:
    kets = [np.eye(dim, dtype=np.complex128)[i] for i in range(dim)]
    out = []
    for i in range(dim):
        for j in range(i + 1, dim):
            out.append((kets[i] + kets[j]) / np.sqrt(2.0))
            out.append((kets[i] + 1.0j * kets[j]) / np.sqrt(2.0))
    return out


def spanning_states(dim: int) -> tuple[np.ndarray, ...]:
    """dim^2 pure-state density matrices spanning the Hermitian operators."""
    kets = [np.eye(dim, dtype=np.complex128)[i] for i in range(dim)]
    return tuple(projector(k) for k in kets + _cross_kets(dim))


def informationally_complete_povm(dim: int) -> POVM:
    """A dim^2-effect POVM whose effects span the Hermitian operators.

    Qubits get the tetrahedral construction (effects are half the tetrahedral
    projectors); larger systems get a spanning PSD set symmetrized into a
    resolution of the identity.
    """
    if dim == 2:
        return POVM(tuple(projector(k) / 2.0 for k in sic_states()))
    raw = list(spanning_states(dim))
    total = hermitize(sum(raw))
    inv_sqrt, _, full_rank = support_functions(total)
    if not full_rank:
        raise ValidationError("spanning set failed to cover the space")
    effects = tuple(hermitize(inv_sqrt @ a @ inv_sqrt) for a in raw)
    stacked = np.stack([e.reshape(-1) for e in effects])
    if np.linalg.matrix_rank(stacked, tol=1e-10) != dim * dim:
        raise ValidationError("constructed POVM is not informationally complete")
    return POVM(effects)


def witness_family(dim_s: int, dim_t: int = 2) -> WitnessChannelFamily:
    """Channel battery that distinguishes every pair of inequivalent beliefs.

    Contains the fully depolarizing channel into dim_t levels plus, for each
    effect F of an informationally complete POVM, the channel mixing half the
    depolarized output with the two-outcome statistics of (F, 1-F) written
    onto two fixed register levels. All outputs are full rank by construction.
    """
    if dim_t < 2:
        raise DimensionMismatch("witness channels need an output of at least two levels")
    povm = informationally_complete_povm(dim_s)
    channels = [_constant_mix_channel(dim_s, dim_t)]
    for effect in povm.effects:
        channels.append(_effect_channel(effect, dim_t))
    return WitnessChannelFamily(tuple(channels), povm)


def _constant_mix_channel(dim_s: int, dim_t: int) -> QuantumChannel:
    """rho -> Tr[rho] * identity/dim_t."""
    kraus = []
    for i in range(dim_t):
        for j in range(dim_s):
            k = np.zeros((dim_t, dim_s), dtype=np.complex128)
            k[i, j] = 1.0 / np.sqrt(dim_t)
            kraus.append(k)
    return QuantumChannel(tuple(kraus))


def _effect_channel(effect: np.ndarray, dim_t: int) -> QuantumChannel:
    """rho -> Tr[rho] I/(2 dim_t) + Tr[F rho]|0><0|/2 + Tr[(1-F) rho]|1><1|/2."""
    dim_s = effect.shape[0]
    kraus = []
    for i in range(dim_t):
        for j in range(dim_s):
            k = np.zeros((dim_t, dim_s), dtype=np.complex128)
            k[i, j] = 1.0 / np.sqrt(2.0 * dim_t)
            kraus.append(k)
    root = psd_sqrt(effect)
    comp = psd_sqrt(np.eye(dim_s) - effect)
    for level, block in ((0, root), (1, comp)):
        for j in range(dim_s):
            k = np.zeros((dim_t, dim_s), dtype=np.complex128)
            k[level, :] = block[j, :] / np.sqrt(2.0)
            kraus.append(k)
    return QuantumChannel(tuple(kraus))


def oracle_equivalent(b1: Belief, b2: Belief, *, dim_t: int = 2, n_random: int = 20,
                      seed: int = ORACLE_SEED, tol: float = ORACLE_TOL) -> OracleReport:
    """Brute-force equivalence decision, independent of the signature route.

    Runs the extended update for every witness channel plus ``n_random``
    seeded random channels, on a spanning set of evidence states, and declares
    the beliefs equivalent iff every pair of updated marginals agrees within
    ``tol``.
    """
    if b1.dim_s != b2.dim_s:
        raise DimensionMismatch(f"system dimensions differ: {b1.dim_s} vs {b2.dim_s}")
    dim_s = b1.dim_s
    rng = np.random.default_rng(seed)
    battery = list(witness_family(dim_s, dim_t).channels)
    battery.extend(random_channel(rng, dim_s, dim_t) for _ in range(n_random))
    sigmas = spanning_states(dim_t)
    roots = (b1.sqrt_joint(), b2.sqrt_joint())
    marginals = (b1.marginal_s().matrix, b2.marginal_s().matrix)
    dims_r = (b1.dim_r, b2.dim_r)
    worst = 0.0
    for channel in battery:
        prepared = []
        for root, marg, dim_r in zip(roots, marginals, dims_r):
            forward = hermitize(channel.apply_matrix(marg))
            inv_sqrt, proj, full_rank = support_functions(forward)
            prepared.append((root, inv_sqrt, proj, full_rank, dim_r))
        for sigma in sigmas:
            outs = []
            for root, inv_sqrt, proj, full_rank, dim_r in prepared:
                sig = sigma if full_rank else hermitize(proj @ sigma @ proj)
                _, marg_out = _extended_raw(channel.stack, root, inv_sqrt, sig, dim_s, dim_r)
                outs.append(marg_out)
            worst = max(worst, frobenius_distance(outs[0], outs[1]))
    return OracleReport(
        equivalent=bool(worst <= tol),
        channels_tested=len(battery),
        seed=int(seed),
        max_deviation=worst,
        tolerance=float(tol),
    )
