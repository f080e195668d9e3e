"""Domain data model: states, channels, POVMs, beliefs and ensembles.

Value objects are frozen dataclasses over read-only complex arrays, validated
at construction. Subsystem order on bipartite objects is always S before R,
row-major (left kron factor = S).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .errors import (
    DimensionMismatch,
    EmptyEnsemble,
    InvalidPOVM,
    ValidationError,
)
from .linalg import (
    as_complex,
    frobenius,
    hermiticity_defect,
    hermitize,
    partial_trace,
    psd_sqrt,
    support_cutoff,
    tensor,
)

TRACE_TOL = 1e-10
TP_TOL = 1e-10
PROB_TOL = 1e-12

KET_0 = np.array([1.0, 0.0], dtype=np.complex128)
KET_1 = np.array([0.0, 1.0], dtype=np.complex128)
KET_PLUS = np.array([1.0, 1.0], dtype=np.complex128) / np.sqrt(2.0)
KET_MINUS = np.array([1.0, -1.0], dtype=np.complex128) / np.sqrt(2.0)
KET_PLUS_I = np.array([1.0, 1.0j], dtype=np.complex128) / np.sqrt(2.0)
KET_MINUS_I = np.array([1.0, -1.0j], dtype=np.complex128) / np.sqrt(2.0)

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=np.complex128)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=np.complex128)


def projector(ket: np.ndarray) -> np.ndarray:
    """|psi><psi| for a 1-D state vector."""
    v = as_complex(ket).reshape(-1)
    return np.outer(v, v.conj())


def basis_state(index: int, dim: int) -> np.ndarray:
    """Computational-basis projector |index><index| on a dim-level register."""
    if not 0 <= index < dim:
        raise DimensionMismatch(f"basis index {index} out of range for dimension {dim}")
    m = np.zeros((dim, dim), dtype=np.complex128)
    m[index, index] = 1.0
    return m


def _freeze(a: np.ndarray) -> np.ndarray:
    out = as_complex(a).copy()
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class DensityOperator:
    """Positive semidefinite operator with unit trace (a state or belief).

    ``dims`` records a tensor factorization of the underlying space; it
    defaults to the single factor (d,). Constructed subnormalized operators
    (trace below one, e.g. after projecting evidence onto a support) must pass
    ``unit_trace=False``.
    """

    matrix: np.ndarray
    dims: tuple[int, ...] = ()
    unit_trace: bool = True

    def __post_init__(self):
        m = _freeze(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatch(f"state matrix must be square, got {m.shape}")
        dims = tuple(int(d) for d in self.dims) or (m.shape[0],)
        side = int(np.prod(dims))
        if side != m.shape[0]:
            raise DimensionMismatch(f"dims {dims} do not factor side {m.shape[0]}")
        defect = hermiticity_defect(m)
        if defect > TRACE_TOL:
            raise ValidationError(f"state is not Hermitian (relative asymmetry {defect:.3e})")
        w = np.linalg.eigvalsh(hermitize(m))
        tau = support_cutoff(m.shape[0], float(w[-1]) if w.size else 0.0)
        if w.size and float(w[0]) < -tau:
            raise ValidationError(f"state has negative eigenvalue {float(w[0]):.3e}")
        tr = float(np.trace(m).real)
        if self.unit_trace:
            if abs(tr - 1.0) > TRACE_TOL:
                raise ValidationError(f"state trace {tr!r} is not 1")
        elif tr > 1.0 + TRACE_TOL or tr < -TRACE_TOL:
            raise ValidationError(f"subnormalized state trace {tr!r} outside [0, 1]")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def sqrt(self) -> np.ndarray:
        return psd_sqrt(self.matrix)


@dataclass(frozen=True)
class Belief:
    """Joint prior on the system S and a hidden register R.

    ``dim_r = 1`` encodes a belief about the system alone. The marginal on S
    is the prior the plain recovery map consumes.
    """

    joint: DensityOperator
    dim_s: int
    dim_r: int

    def __post_init__(self):
        if self.dim_s < 1 or self.dim_r < 1:
            raise DimensionMismatch("subsystem dimensions must be positive")
        if self.dim_s * self.dim_r != self.joint.dim:
            raise DimensionMismatch(
                f"split {self.dim_s}x{self.dim_r} does not match joint side {self.joint.dim}"
            )
        if self.joint.dims != (self.dim_s, self.dim_r):
            object.__setattr__(
                self,
                "joint",
                DensityOperator(self.joint.matrix, (self.dim_s, self.dim_r),
                                unit_trace=self.joint.unit_trace),
            )

    @classmethod
    def from_matrix(cls, matrix: np.ndarray, dim_s: int, dim_r: int) -> "Belief":
        return cls(DensityOperator(matrix, (dim_s, dim_r)), dim_s, dim_r)

    # Beliefs are immutable and reused across whole channel batteries, so the
    # marginal and the joint square root are computed once and cached.

    def marginal_s(self) -> DensityOperator:
        cached = getattr(self, "_marginal_s", None)
        if cached is None:
            m = partial_trace(self.joint.matrix, (self.dim_s, self.dim_r), traced=(1,))
            cached = DensityOperator(hermitize(m), (self.dim_s,),
                                     unit_trace=self.joint.unit_trace)
            object.__setattr__(self, "_marginal_s", cached)
        return cached

    def sqrt_joint(self) -> np.ndarray:
        cached = getattr(self, "_sqrt_joint", None)
        if cached is None:
            cached = psd_sqrt(self.joint.matrix)
            cached.setflags(write=False)
            object.__setattr__(self, "_sqrt_joint", cached)
        return cached


@dataclass(frozen=True)
class QuantumChannel:
    """CPTP map stored as Kraus operators of shape (dim_out, dim_in)."""

    kraus_ops: tuple[np.ndarray, ...]
    dim_in: int = field(init=False)
    dim_out: int = field(init=False)

    def __post_init__(self):
        ops = tuple(_freeze(k) for k in self.kraus_ops)
        if not ops:
            raise ValidationError("a channel needs at least one Kraus operator")
        dout, din = ops[0].shape
        if any(k.shape != (dout, din) for k in ops):
            raise DimensionMismatch("Kraus operators must share one (dim_out, dim_in) shape")
        stack = np.ascontiguousarray(np.stack(ops))
        tp = np.einsum("nij,nik->jk", stack.conj(), stack)
        tp_defect = frobenius(tp - np.eye(din))
        if tp_defect > TP_TOL:
            raise ValidationError(f"channel is not trace preserving (defect {tp_defect:.3e})")
        object.__setattr__(self, "kraus_ops", ops)
        object.__setattr__(self, "dim_in", int(din))
        object.__setattr__(self, "dim_out", int(dout))
        object.__setattr__(self, "_stack", stack)
        choi = self.choi()
        w = np.linalg.eigvalsh(hermitize(choi))
        tau = support_cutoff(choi.shape[0], float(w[-1]) if w.size else 0.0)
        if w.size and float(w[0]) < -tau:
            raise ValidationError(f"channel is not completely positive (Choi eigenvalue {float(w[0]):.3e})")

    @property
    def stack(self) -> np.ndarray:
        """Kraus operators as one (n, dim_out, dim_in) array."""
        return self._stack

    def choi(self) -> np.ndarray:
        """Choi matrix sum_ij |i><j| (x) E(|i><j|) on in (x) out, input major."""
        vecs = self._stack.transpose(0, 2, 1).reshape(len(self.kraus_ops), -1)
        return np.einsum("ni,nj->ij", vecs, vecs.conj())

    def apply_matrix(self, m: np.ndarray) -> np.ndarray:
        """Linear action sum_k K m K^dag on an arbitrary square matrix."""
        m = as_complex(m)
        if m.shape != (self.dim_in, self.dim_in):
            raise DimensionMismatch(f"input shape {m.shape} does not match dim_in {self.dim_in}")
        return _backend.impl.kraus_apply(self._stack, m)

    def adjoint_matrix(self, y: np.ndarray) -> np.ndarray:
        """Adjoint action sum_k K^dag y K on an arbitrary square matrix."""
        y = as_complex(y)
        if y.shape != (self.dim_out, self.dim_out):
            raise DimensionMismatch(f"input shape {y.shape} does not match dim_out {self.dim_out}")
        return _backend.impl.kraus_adjoint_apply(self._stack, y)


@dataclass(frozen=True)
class POVM:
    """PSD effects resolving the identity."""

    effects: tuple[np.ndarray, ...]

    def __post_init__(self):
        effects = tuple(_freeze(e) for e in self.effects)
        if not effects:
            raise InvalidPOVM("a POVM needs at least one effect")
        d = effects[0].shape[0]
        if any(e.shape != (d, d) for e in effects):
            raise InvalidPOVM("effects must be square matrices of one common dimension")
        for i, e in enumerate(effects):
            if hermiticity_defect(e) > TRACE_TOL:
                raise InvalidPOVM(f"effect {i} is not Hermitian")
            w = np.linalg.eigvalsh(hermitize(e))
            tau = support_cutoff(d, float(w[-1]) if w.size else 0.0)
            if w.size and float(w[0]) < -tau:
                raise InvalidPOVM(f"effect {i} has negative eigenvalue {float(w[0]):.3e}")
        total = sum(effects)
        defect = frobenius(total - np.eye(d))
        if defect > TP_TOL:
            raise InvalidPOVM(f"effects do not sum to identity (defect {defect:.3e})")
        object.__setattr__(self, "effects", effects)

    @property
    def dim(self) -> int:
        return self.effects[0].shape[0]

    def __len__(self) -> int:
        return len(self.effects)


@dataclass(frozen=True)
class StateEnsemble:
    """Weighted collection of states on S."""

    members: tuple[tuple[DensityOperator, float], ...]

    def __post_init__(self):
        members = tuple((rho, float(p)) for rho, p in self.members)
        if not members:
            raise EmptyEnsemble("ensemble has no members")
        d = members[0][0].dim
        if any(rho.dim != d for rho, _ in members):
            raise DimensionMismatch("ensemble members must share one dimension")
        probs = np.array([p for _, p in members])
        if probs.min() < -PROB_TOL or probs.max() > 1.0 + PROB_TOL:
            raise ValidationError("ensemble probabilities must lie in [0, 1]")
        total = float(probs.sum())
        if abs(total - 1.0) > PROB_TOL:
            raise ValidationError(f"ensemble probabilities sum to {total!r}, not 1")
        object.__setattr__(self, "members", members)

    @property
    def dim(self) -> int:
        return self.members[0][0].dim

    def average(self) -> np.ndarray:
        return sum(p * rho.matrix for rho, p in self.members)


def apply_channel(channel: QuantumChannel, rho: DensityOperator) -> DensityOperator:
    """Forward action of a channel on a state."""
    if rho.dim != channel.dim_in:
        raise DimensionMismatch(
            f"state dimension {rho.dim} does not match channel input {channel.dim_in}"
        )
    out = channel.apply_matrix(rho.matrix)
    return DensityOperator(hermitize(out), (channel.dim_out,), unit_trace=rho.unit_trace)


def adjoint_apply(channel: QuantumChannel, y: np.ndarray) -> np.ndarray:
    """Adjoint (Heisenberg) action on an arbitrary operator; unital for TP channels."""
    return channel.adjoint_matrix(y)


def measurement_channel(povm: POVM) -> QuantumChannel:
    """Channel writing measurement statistics into a classical register.

    Maps rho to sum_x Tr[F_x rho] |x><x| on a register of one level per
    effect. Any Kraus set with the same Choi matrix is an equally valid
    representation; this one uses the rows of sqrt(F_x).
    """
    n, d = len(povm), povm.dim
    kraus = []
    for x, effect in enumerate(povm.effects):
        root = psd_sqrt(effect)
        for j in range(d):
            k = np.zeros((n, d), dtype=np.complex128)
            k[x, :] = root[j, :]
            kraus.append(k)
    return QuantumChannel(tuple(kraus))


def measure_z() -> QuantumChannel:
    """Qubit computational-basis measurement into a 2-level register."""
    return measurement_channel(POVM((projector(KET_0), projector(KET_1))))


def measure_x() -> QuantumChannel:
    """Qubit +/- basis measurement into a 2-level register."""
    return measurement_channel(POVM((projector(KET_PLUS), projector(KET_MINUS))))


def identity_channel(dim: int = 2) -> QuantumChannel:
    return QuantumChannel((np.eye(dim, dtype=np.complex128),))


def depolarizing_channel(p: float, dim: int = 2) -> QuantumChannel:
    """Qubit map rho -> (1-p) rho + p * I/2 in Pauli Kraus form."""
    if dim != 2:
        raise DimensionMismatch("the depolarizing channel is built for qubits only")
    if not 0.0 <= p <= 4.0 / 3.0:
        raise ValidationError(f"depolarizing strength {p} outside [0, 4/3]")
    eye = np.eye(2, dtype=np.complex128)
    kraus = (
        np.sqrt(1.0 - 3.0 * p / 4.0) * eye,
        np.sqrt(p / 4.0) * PAULI_X,
        np.sqrt(p / 4.0) * PAULI_Y,
        np.sqrt(p / 4.0) * PAULI_Z,
    )
    return QuantumChannel(kraus)


def ensemble_to_belief(ensemble: StateEnsemble) -> Belief:
    """Belief with a classical register recording the ensemble label.

    The joint state is block diagonal: sum_x p(x) rho_x (x) |x><x| with one
    register level per member.
    """
    n, d = len(ensemble.members), ensemble.dim
    joint = np.zeros((d * n, d * n), dtype=np.complex128)
    for x, (rho, p) in enumerate(ensemble.members):
        joint += p * tensor(rho.matrix, basis_state(x, n))
    return Belief.from_matrix(joint, d, n)


def pauli_eigenstates() -> tuple[np.ndarray, ...]:
    """The six eigenstate kets of X, Y and Z."""
    return (KET_0, KET_1, KET_PLUS, KET_MINUS, KET_PLUS_I, KET_MINUS_I)


def sic_states() -> tuple[np.ndarray, ...]:
    """Four tetrahedral qubit kets with pairwise overlap |<i|j>|^2 = 1/3."""
    states = [KET_0]
    for k in range(3):
        phase = np.exp(2.0j * np.pi * k / 3.0)
        states.append(np.array([1.0, np.sqrt(2.0) * phase], dtype=np.complex128) / np.sqrt(3.0))
    return tuple(states)


def _pure_ensemble(kets) -> StateEnsemble:
    p = 1.0 / len(kets)
    return StateEnsemble(tuple((DensityOperator(projector(k)), p) for k in kets))


BUILTIN_BELIEF_NAMES = ("flat", "proper_01", "improper_phi_plus", "xyz_design", "sic_design")

BELIEF_ALIASES = {
    "beta-s": "flat",
    "beta-1": "proper_01",
    "beta-2": "improper_phi_plus",
    "beta-xyz": "xyz_design",
    "beta-sic": "sic_design",
    "improper-phi-plus": "improper_phi_plus",
    "proper-01": "proper_01",
    "xyz-design": "xyz_design",
    "sic-design": "sic_design",
}


def builtin_belief(name: str) -> Belief:
    """One of the built-in qubit beliefs; every marginal on S is I/2.

    flat: the bare system prior, no register. proper_01: classical coin over
    |0>,|1>. improper_phi_plus: half of a maximally entangled pair. xyz_design
    and sic_design: uniform classical mixtures over the six Pauli eigenstates
    and the four tetrahedral states respectively.
    """
    key = BELIEF_ALIASES.get(name, name)
    if key == "flat":
        return Belief.from_matrix(np.eye(2, dtype=np.complex128) / 2.0, 2, 1)
    if key == "proper_01":
        return ensemble_to_belief(_pure_ensemble((KET_0, KET_1)))
    if key == "improper_phi_plus":
        phi = (np.kron(KET_0, KET_0) + np.kron(KET_1, KET_1)) / np.sqrt(2.0)
        return Belief.from_matrix(projector(phi), 2, 2)
    if key == "xyz_design":
        return ensemble_to_belief(_pure_ensemble(pauli_eigenstates()))
    if key == "sic_design":
        return ensemble_to_belief(_pure_ensemble(sic_states()))
    raise ValidationError(
        f"unknown builtin belief {name!r}; expected one of {BUILTIN_BELIEF_NAMES} or an alias"
    )
