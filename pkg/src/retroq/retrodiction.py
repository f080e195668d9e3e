"""Belief-update engine: the recovery map and its prior-extended form.

The plain map updates a prior on the system alone; the extended map carries a
joint prior on system plus hidden register through the same reversal and
traces the register out afterwards. Evidence must live on the support of the
forward image of the prior; an optional flag projects it there instead of
erroring, with the lost weight reported as ``norm_deficit``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import DimensionMismatch, SupportViolation, ValidationError
from .linalg import (
    as_complex,
    frobenius_distance,
    hermitize,
    partial_trace,
    psd_sqrt,
    support_cutoff,
    support_functions,
)
from .model import Belief, DensityOperator, QuantumChannel

SUPPORT_TOL = 1e-8
MARGINAL_TOL = 1e-12


@dataclass(frozen=True)
class RetrodictionResult:
    """Updated joint belief, its marginal on S, and the trace lost to projection."""

    updated_joint: DensityOperator
    updated_s: DensityOperator
    norm_deficit: float

    def __post_init__(self):
        dims = self.updated_joint.dims
        marg = partial_trace(self.updated_joint.matrix, dims, traced=(1,))
        if frobenius_distance(marg, self.updated_s.matrix) > MARGINAL_TOL:
            raise ValidationError("updated_s is not the register trace of updated_joint")


def _support_leak(sigma: np.ndarray, projector: np.ndarray) -> float:
    """Trace weight of sigma outside the support projector."""
    return max(float(np.trace(sigma - projector @ sigma @ projector).real), 0.0)


def _gate_sigma(sigma: np.ndarray, projector: np.ndarray, project_support: bool,
                full_rank: bool) -> tuple[np.ndarray, float]:
    if full_rank:
        return sigma, 0.0
    deficit = _support_leak(sigma, projector)
    if project_support:
        return hermitize(projector @ sigma @ projector), deficit
    if deficit > SUPPORT_TOL:
        raise SupportViolation(
            f"evidence has weight {deficit:.3e} outside the support of the forward "
            "image; pass project_support=True to project it there"
        )
    return sigma, deficit


def petz(channel: QuantumChannel, prior: DensityOperator, sigma: DensityOperator,
         *, project_support: bool = False, renormalize: bool = False) -> DensityOperator:
    """Update a prior on the system from evidence behind a channel.

    Computes sqrt(prior) . E_adj( W sigma W ) . sqrt(prior) with
    W the support inverse square root of E(prior). Trace is 1 whenever the
    evidence lies in the support of E(prior).
    """
    if prior.dim != channel.dim_in:
        raise DimensionMismatch(f"prior dimension {prior.dim} != channel input {channel.dim_in}")
    if sigma.dim != channel.dim_out:
        raise DimensionMismatch(f"evidence dimension {sigma.dim} != channel output {channel.dim_out}")
    forward = hermitize(channel.apply_matrix(prior.matrix))
    inv_sqrt, proj, full_rank = support_functions(forward)
    sig, deficit = _gate_sigma(sigma.matrix, proj, project_support, full_rank)
    core = channel.adjoint_matrix(inv_sqrt @ sig @ inv_sqrt)
    root = psd_sqrt(prior.matrix)
    out = hermitize(root @ core @ root)
    if renormalize:
        tr = float(np.trace(out).real)
        if tr <= 0.0:
            raise ValidationError("updated state has zero trace; nothing to renormalize")
        out = out / tr
    unit = renormalize or deficit <= 1e-10
    return DensityOperator(out, (channel.dim_in,), unit_trace=unit)


def petz_extended(channel: QuantumChannel, belief: Belief, sigma: DensityOperator,
                  *, project_support: bool = False, renormalize: bool = False) -> RetrodictionResult:
    """Update a joint system+register belief from evidence behind a channel.

    The channel acts on S alone while R stays hidden, so the composite forward
    process is E on the marginal; the reversal sandwiches the lifted adjoint
    image between sqrt(belief) factors and the S update is the register trace.
    """
    if belief.dim_s != channel.dim_in:
        raise DimensionMismatch(f"belief system {belief.dim_s} != channel input {channel.dim_in}")
    if sigma.dim != channel.dim_out:
        raise DimensionMismatch(f"evidence dimension {sigma.dim} != channel output {channel.dim_out}")
    forward = hermitize(channel.apply_matrix(belief.marginal_s().matrix))
    inv_sqrt, proj, full_rank = support_functions(forward)
    sig, deficit = _gate_sigma(sigma.matrix, proj, project_support, full_rank)
    joint, marg = _extended_raw(channel.stack, belief.sqrt_joint(), inv_sqrt, sig,
                                belief.dim_s, belief.dim_r)
    if renormalize:
        tr = float(np.trace(joint).real)
        if tr <= 0.0:
            raise ValidationError("updated belief has zero trace; nothing to renormalize")
        joint = joint / tr
        marg = marg / tr
    unit = renormalize or deficit <= 1e-10
    return RetrodictionResult(
        updated_joint=DensityOperator(joint, (belief.dim_s, belief.dim_r), unit_trace=unit),
        updated_s=DensityOperator(marg, (belief.dim_s,), unit_trace=unit),
        norm_deficit=deficit,
    )


def _extended_raw(kraus_stack: np.ndarray, sqrt_joint: np.ndarray, inv_sqrt: np.ndarray,
                  sigma: np.ndarray, dim_s: int, dim_r: int) -> tuple[np.ndarray, np.ndarray]:
    """Unvalidated extended update on raw matrices (hot path for the oracle)."""
    core = _backend.impl.kraus_adjoint_apply(kraus_stack, inv_sqrt @ sigma @ inv_sqrt)
    joint = _backend.impl.petz_sandwich(sqrt_joint, as_complex(core), dim_s, dim_r)
    joint = hermitize(joint)
    marg = hermitize(_backend.impl.partial_trace(joint, (dim_s, dim_r), (0,)))
    return joint, marg


def _extended_linear(channel: QuantumChannel, sqrt_joint: np.ndarray, inv_sqrt: np.ndarray,
                     x: np.ndarray, dim_s: int, dim_r: int) -> np.ndarray:
    """S-marginal of the extended update as a linear map on arbitrary inputs."""
    core = channel.adjoint_matrix(inv_sqrt @ as_complex(x) @ inv_sqrt)
    joint = _backend.impl.petz_sandwich(sqrt_joint, as_complex(core), dim_s, dim_r)
    return _backend.impl.partial_trace(joint, (dim_s, dim_r), (0,))


def recovery_compose(channel: QuantumChannel, belief: Belief) -> QuantumChannel:
    """The composite map rho -> retrodict(belief, channel(rho)) as a channel.

    Materialized through its action on the matrix-unit basis, then converted
    to Kraus form via the Choi eigendecomposition. Requires the forward image
    of the belief marginal to be full rank, which makes the composite CPTP.
    """
    if belief.dim_s != channel.dim_in:
        raise DimensionMismatch(f"belief system {belief.dim_s} != channel input {channel.dim_in}")
    forward = hermitize(channel.apply_matrix(belief.marginal_s().matrix))
    inv_sqrt, _, full_rank = support_functions(forward)
    if not full_rank:
        raise SupportViolation(
            "forward image of the belief marginal is rank deficient; the composite "
            "recovery is not defined on the full output space"
        )
    sqrt_joint = belief.sqrt_joint()
    d = channel.dim_in
    choi = np.zeros((d * d, d * d), dtype=np.complex128)
    for i in range(d):
        for j in range(d):
            unit = np.zeros((d, d), dtype=np.complex128)
            unit[i, j] = 1.0
            image = _extended_linear(channel, sqrt_joint, inv_sqrt,
                                     channel.apply_matrix(unit), belief.dim_s, belief.dim_r)
            choi[i * d:(i + 1) * d, j * d:(j + 1) * d] = image
    choi = hermitize(choi)
    w, v = np.linalg.eigh(choi)
    tau = support_cutoff(choi.shape[0], float(w[-1]))
    if float(w[0]) < -max(tau, 1e-9):
        raise ValidationError(f"composite recovery is not CP (Choi eigenvalue {float(w[0]):.3e})")
    kraus = []
    for lam, vec in zip(w, v.T):
        if lam > tau:
            kraus.append(np.sqrt(lam) * vec.reshape(d, d).T)
    return QuantumChannel(tuple(kraus))
