"""Seeded random states, channels and beliefs.

Haar unitaries come from QR of complex Gaussians with the phase fix; channels
come from Haar isometry dilations, so they validate as CPTP by construction.
Every function takes an explicit ``numpy.random.Generator`` for
reproducibility.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, ValidationError
from .linalg import dag, hermitize, tensor
from .model import (
    Belief,
    DensityOperator,
    QuantumChannel,
    StateEnsemble,
    ensemble_to_belief,
    projector,
)


def random_pure_ket(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.standard_normal(dim) + 1.0j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_density(rng: np.random.Generator, dim: int, rank: int | None = None) -> DensityOperator:
    """Wishart-style random state; full rank unless ``rank`` is given."""
    k = dim if rank is None else int(rank)
    if not 1 <= k <= dim:
        raise DimensionMismatch(f"rank {k} out of range for dimension {dim}")
    g = rng.standard_normal((dim, k)) + 1.0j * rng.standard_normal((dim, k))
    m = g @ dag(g)
    return DensityOperator(hermitize(m) / float(np.trace(m).real), (dim,))


def haar_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = rng.standard_normal((dim, dim)) + 1.0j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * phases


def haar_isometry(rng: np.random.Generator, dim_from: int, dim_to: int) -> np.ndarray:
    """First ``dim_from`` columns of a Haar unitary on the larger space."""
    if dim_to < dim_from:
        raise DimensionMismatch(f"no isometry from dimension {dim_from} into {dim_to}")
    return haar_unitary(rng, dim_to)[:, :dim_from]


def random_channel(rng: np.random.Generator, dim_in: int, dim_out: int,
                   env: int | None = None) -> QuantumChannel:
    """Random CPTP map via a Haar isometry into output (x) environment."""
    env = dim_in if env is None else int(env)
    v = haar_isometry(rng, dim_in, dim_out * env)
    blocks = v.reshape(dim_out, env, dim_in)
    kraus = tuple(np.ascontiguousarray(blocks[:, e, :]) for e in range(env))
    return QuantumChannel(kraus)


def random_ensemble(rng: np.random.Generator, dim: int, members: int,
                    pure: bool = True) -> StateEnsemble:
    probs = rng.dirichlet(np.ones(members))
    states = []
    for p in probs:
        if pure:
            rho = DensityOperator(projector(random_pure_ket(rng, dim)), (dim,))
        else:
            rho = random_density(rng, dim)
        states.append((rho, float(p)))
    return StateEnsemble(tuple(states))


def random_belief(rng: np.random.Generator, dim_s: int, dim_r: int,
                  kind: str = "mixed") -> Belief:
    """Random joint belief of a given flavor.

    kind: "mixed" full-rank joint, "pure" a random bipartite pure state,
    "product" an uncorrelated pair, "classical" a random ensemble tagged by a
    register of matching size.
    """
    if kind == "mixed":
        return Belief(random_density(rng, dim_s * dim_r), dim_s, dim_r)
    if kind == "pure":
        joint = projector(random_pure_ket(rng, dim_s * dim_r))
        return Belief.from_matrix(joint, dim_s, dim_r)
    if kind == "product":
        joint = tensor(random_density(rng, dim_s).matrix, random_density(rng, dim_r).matrix)
        return Belief.from_matrix(joint, dim_s, dim_r)
    if kind == "classical":
        return ensemble_to_belief(random_ensemble(rng, dim_s, dim_r, pure=True))
    raise ValidationError(f"unknown belief kind {kind!r}")
