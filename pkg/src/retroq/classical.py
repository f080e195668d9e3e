"""Classical Bayesian baseline: soft-evidence updates over finite alphabets.

The quantum engine reduces to these updates when everything is diagonal in
fixed bases. The headline fact mirrored here: extending a classical prior
with correlations to a hidden variable never changes the retrodicted marginal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, UnsupportedEvidence, ValidationError

WEIGHT_TOL = 1e-12


@dataclass(frozen=True)
class Distribution:
    """Nonnegative weights summing to one.

    1-D for a plain distribution; 2-D (rows = system outcome a, columns =
    hidden outcome c) for a joint prior over system and hidden variable.
    """

    weights: np.ndarray

    def __post_init__(self):
        w = np.ascontiguousarray(self.weights, dtype=np.float64).copy()
        if w.ndim not in (1, 2):
            raise DimensionMismatch(f"weights must be 1-D or 2-D, got {w.ndim}-D")
        if w.size == 0:
            raise ValidationError("distribution has no outcomes")
        if float(w.min()) < -WEIGHT_TOL:
            raise ValidationError(f"negative weight {float(w.min())!r}")
        total = float(w.sum())
        if abs(total - 1.0) > WEIGHT_TOL:
            raise ValidationError(f"weights sum to {total!r}, not 1")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    def marginal_system(self) -> "Distribution":
        """Sum a 2-D joint over the hidden variable."""
        if self.weights.ndim != 2:
            return self
        return Distribution(self.weights.sum(axis=1))


@dataclass(frozen=True)
class StochasticMatrix:
    """Transition probabilities phi(b|a): entry [b, a], each column sums to one."""

    entries: np.ndarray

    def __post_init__(self):
        e = np.ascontiguousarray(self.entries, dtype=np.float64).copy()
        if e.ndim != 2:
            raise DimensionMismatch(f"transition matrix must be 2-D, got {e.ndim}-D")
        if float(e.min()) < -WEIGHT_TOL:
            raise ValidationError(f"negative transition probability {float(e.min())!r}")
        sums = e.sum(axis=0)
        if float(np.max(np.abs(sums - 1.0))) > WEIGHT_TOL:
            raise ValidationError("each column of phi(b|a) must sum to 1")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @property
    def n_outputs(self) -> int:
        return self.entries.shape[0]

    @property
    def n_inputs(self) -> int:
        return self.entries.shape[1]


def jeffrey_update(prior: Distribution, forward: StochasticMatrix,
                   evidence: Distribution) -> Distribution:
    """Soft-evidence posterior q(a) = sum_b phi(b|a) gamma(a) r(b) / m(b).

    m(b) = sum_a phi(b|a) gamma(a). Outcomes with zero evidence are skipped;
    positive evidence on an outcome of zero prior predictive probability
    raises UnsupportedEvidence.
    """
    gamma = prior.weights
    if gamma.ndim != 1:
        raise DimensionMismatch("jeffrey_update takes a 1-D prior; see jeffrey_update_extended")
    phi = forward.entries
    r = evidence.weights
    if phi.shape[1] != gamma.size:
        raise DimensionMismatch(f"transition inputs {phi.shape[1]} != prior size {gamma.size}")
    if r.ndim != 1 or r.size != phi.shape[0]:
        raise DimensionMismatch(f"evidence size {r.shape} != transition outputs {phi.shape[0]}")
    predictive = phi @ gamma
    posterior = np.zeros_like(gamma)
    for b in range(r.size):
        if r[b] == 0.0:
            continue
        if predictive[b] <= 0.0:
            raise UnsupportedEvidence(
                f"evidence puts weight {r[b]!r} on outcome {b} of zero prior probability"
            )
        posterior += r[b] * phi[b, :] * gamma / predictive[b]
    return Distribution(posterior)


def jeffrey_update_extended(prior_joint: Distribution, forward: StochasticMatrix,
                            evidence: Distribution) -> Distribution:
    """Joint posterior q(a, c) when the forward process reads only a.

    The observable depends on the system alone, so each evidence term rescales
    whole rows of the joint prior; summing the result over c reproduces the
    plain update of the marginal exactly.
    """
    gamma = prior_joint.weights
    if gamma.ndim != 2:
        raise DimensionMismatch("jeffrey_update_extended takes a 2-D joint prior")
    phi = forward.entries
    r = evidence.weights
    if phi.shape[1] != gamma.shape[0]:
        raise DimensionMismatch(f"transition inputs {phi.shape[1]} != system alphabet {gamma.shape[0]}")
    if r.ndim != 1 or r.size != phi.shape[0]:
        raise DimensionMismatch(f"evidence size {r.shape} != transition outputs {phi.shape[0]}")
    predictive = phi @ gamma.sum(axis=1)
    posterior = np.zeros_like(gamma)
    for b in range(r.size):
        if r[b] == 0.0:
            continue
        if predictive[b] <= 0.0:
            raise UnsupportedEvidence(
                f"evidence puts weight {r[b]!r} on outcome {b} of zero prior probability"
            )
        posterior += r[b] * (phi[b, :, None] * gamma) / predictive[b]
    return Distribution(posterior)
