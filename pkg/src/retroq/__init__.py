"""Quantum Bayesian retrodiction with extended prior beliefs.

A belief here is a joint state on the system of interest and a hidden
register; the library updates such beliefs from evidence observed behind a
channel, decides when two beliefs retrodict identically for every channel,
and exposes the classical soft-evidence baseline the quantum machinery
reduces to in the diagonal case.
"""

from . import _backend
from .classical import Distribution, StochasticMatrix, jeffrey_update, jeffrey_update_extended
from .equivalence import (
    EquivalenceReport,
    EquivalenceSignature,
    OracleReport,
    WitnessChannelFamily,
    ensemble_second_moment,
    ensemble_sqrt_moment,
    equivalent,
    extend_with_ancilla,
    isometry_on_register,
    oracle_equivalent,
    signature,
    witness_family,
)
from .errors import (
    CrossCheckError,
    DimensionMismatch,
    EmptyEnsemble,
    InvalidPOVM,
    NotHermitian,
    NotPSD,
    NotPure,
    OracleDisagreement,
    ParseError,
    RetroqError,
    SupportViolation,
    UnsupportedEvidence,
    ValidationError,
    ZeroOperator,
)
from .linalg import (
    HermitianEigensystem,
    double_ket,
    frobenius_distance,
    hermitian_eig,
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
    adjoint_apply,
    apply_channel,
    builtin_belief,
    depolarizing_channel,
    ensemble_to_belief,
    identity_channel,
    measure_x,
    measure_z,
    measurement_channel,
)
from .retrodiction import RetrodictionResult, petz, petz_extended, recovery_compose

__version__ = "0.1.0"


def active_backend() -> str:
    """Name of the kernel backend in use ("compiled" or "python")."""
    return _backend.impl.NAME
