import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from retroq.errors import DimensionMismatch, NotHermitian, NotPSD, ZeroOperator
from retroq.linalg import (
    dag,
    double_ket,
    frobenius_distance,
    hermitian_eig,
    hermitize,
    partial_trace,
    psd_sqrt,
    support_functions,
    support_inv_sqrt,
    tensor,
)
from retroq.model import builtin_belief
from retroq.sampling import random_density

from .conftest import assert_close


class TestHermitianEig:
    def test_identity(self):
        w, v = hermitian_eig(np.eye(2, dtype=complex))
        np.testing.assert_allclose(w, [1.0, 1.0])
        assert_close(v @ dag(v), np.eye(2), 1e-12, "orthonormality")

    def test_pauli_z(self):
        z = np.diag([1.0, -1.0]).astype(complex)
        w, v = hermitian_eig(z)
        np.testing.assert_allclose(w, [1.0, -1.0])
        # descending order puts the +1 eigenvector (|0>) first
        assert abs(v[0, 0]) == pytest.approx(1.0)
        assert abs(v[1, 1]) == pytest.approx(1.0)

    def test_shifted_projector(self):
        # (|0><0| + 1)/3 = diag(2/3, 1/3); characteristic polynomial roots 2/3, 1/3
        m = (np.diag([1.0, 0.0]) + np.eye(2)).astype(complex) / 3.0
        w, _ = hermitian_eig(m)
        np.testing.assert_allclose(w, [2.0 / 3.0, 1.0 / 3.0], atol=1e-14)

    def test_reconstruction_random(self, rng):
        for dim in (2, 3, 8, 16):
            m = random_density(rng, dim).matrix
            eig = hermitian_eig(m)
            assert_close(eig.reconstruct(), m, 1e-10, "reconstruction")
            assert_close(dag(eig.eigenvectors) @ eig.eigenvectors, np.eye(dim),
                         1e-10, "orthonormal columns")
            assert np.all(np.diff(eig.eigenvalues) <= 1e-15)

    def test_rejects_non_hermitian(self):
        m = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
        with pytest.raises(NotHermitian, match="asymmetry"):
            hermitian_eig(m)

    def test_rejects_non_square(self):
        with pytest.raises(DimensionMismatch):
            hermitian_eig(np.zeros((2, 3), dtype=complex))


class TestPsdSqrt:
    def test_scaled_identity(self):
        assert_close(psd_sqrt(np.eye(2) / 2.0), np.eye(2) / np.sqrt(2.0), 1e-12)

    def test_projector_is_own_root(self):
        p = np.diag([1.0, 0.0]).astype(complex)
        assert_close(psd_sqrt(p), p, 1e-12)

    def test_entangled_projector_is_own_root(self):
        phi = np.zeros(4, dtype=complex)
        phi[0] = phi[3] = 1.0 / np.sqrt(2.0)
        p = np.outer(phi, phi.conj())
        assert_close(psd_sqrt(p), p, 1e-12)

    def test_squares_back_random(self, rng):
        for dim in (2, 3, 5, 8, 16):
            m = random_density(rng, dim).matrix * rng.uniform(0.1, 5.0)
            s = psd_sqrt(m)
            assert_close(s @ s, m, 1e-9, "sqrt squared")
            assert_close(s, dag(s), 1e-10, "sqrt hermitian")

    def test_matches_scipy_on_full_rank(self, rng):
        for dim in (2, 4, 7):
            m = random_density(rng, dim).matrix
            assert_close(psd_sqrt(m), scipy.linalg.sqrtm(m), 1e-9, "scipy cross-check")

    def test_rank_deficient_has_exact_kernel(self, rng):
        m = random_density(rng, 6, rank=2).matrix
        s = psd_sqrt(m)
        assert np.linalg.matrix_rank(s, tol=1e-10) == 2

    def test_rejects_negative(self):
        with pytest.raises(NotPSD):
            psd_sqrt(np.diag([1.0, -0.5]).astype(complex))


class TestSupportInvSqrt:
    def test_scaled_identity(self):
        assert_close(support_inv_sqrt(np.eye(2) / 2.0), np.sqrt(2.0) * np.eye(2), 1e-12)

    def test_support_projection(self):
        m = np.diag([1.0, 0.0]).astype(complex)
        assert_close(support_inv_sqrt(m), m, 1e-12)

    def test_depolarized_flat_state(self):
        # image of I/2 under rho -> 0.9 rho + 0.1 I/2 is again I/2
        m = np.diag([0.9 * 0.5 + 0.05, 0.9 * 0.5 + 0.05]).astype(complex)
        assert_close(support_inv_sqrt(m), np.sqrt(2.0) * np.eye(2), 1e-12)

    def test_sandwich_gives_support_projector(self, rng):
        for dim, rank in ((2, 1), (4, 2), (6, 6), (8, 3)):
            m = random_density(rng, dim, rank=rank).matrix
            s = support_inv_sqrt(m)
            inv_sqrt, projector, full = support_functions(m)
            assert_close(s, inv_sqrt, 1e-12)
            assert_close(s @ m @ s, projector, 1e-9, "support sandwich")
            assert full == (rank == dim)
            assert_close(s @ m, m @ s, 1e-9, "commutes with input")

    def test_rejects_zero_operator(self):
        with pytest.raises(ZeroOperator):
            support_inv_sqrt(np.zeros((3, 3), dtype=complex))


class TestPartialTrace:
    def test_entangled_marginal(self):
        phi = np.zeros(4, dtype=complex)
        phi[0] = phi[3] = 1.0 / np.sqrt(2.0)
        m = np.outer(phi, phi.conj())
        assert_close(partial_trace(m, (2, 2), traced=(1,)), np.eye(2) / 2.0, 1e-12)

    def test_classical_coin_marginal(self):
        joint = builtin_belief("proper_01").joint.matrix
        assert_close(partial_trace(joint, (2, 2), traced=(1,)), np.eye(2) / 2.0, 1e-12)

    def test_full_trace(self, rng):
        m = random_density(rng, 6).matrix
        out = partial_trace(m, (2, 3), traced=(0, 1))
        assert out.shape == (1, 1)
        assert out[0, 0] == pytest.approx(1.0)

    def test_composes(self, rng):
        dims = (2, 3, 2)
        m = random_density(rng, 12).matrix
        step = partial_trace(partial_trace(m, dims, traced=(2,)), (2, 3), traced=(1,))
        once = partial_trace(m, dims, traced=(1, 2))
        assert_close(step, once, 1e-12, "trace composition")

    def test_preserves_trace(self, rng):
        dims = (2, 2, 3)
        m = random_density(rng, 12).matrix
        out = partial_trace(m, dims, traced=(0, 2))
        assert abs(np.trace(out) - 1.0) <= 1e-12

    def test_against_loop_oracle(self, rng):
        # brute-force index loop, independent of the kernel implementations
        dims = (2, 3, 2)
        m = (rng.standard_normal((12, 12)) + 1j * rng.standard_normal((12, 12)))
        expected = np.zeros((2 * 2, 2 * 2), dtype=complex)
        for i in range(2):
            for k in range(2):
                for i2 in range(2):
                    for k2 in range(2):
                        acc = 0.0
                        for j in range(3):
                            acc += m[(i * 3 + j) * 2 + k, (i2 * 3 + j) * 2 + k2]
                        expected[i * 2 + k, i2 * 2 + k2] = acc
        assert_close(partial_trace(m, dims, traced=(1,)), expected, 1e-12, "loop oracle")

    def test_dimension_errors(self):
        with pytest.raises(DimensionMismatch):
            partial_trace(np.eye(4, dtype=complex), (2, 3), traced=(0,))
        with pytest.raises(DimensionMismatch):
            partial_trace(np.eye(4, dtype=complex), (2, 2), traced=(5,))


class TestDoubleKet:
    def test_identity_single_qubit(self):
        v = double_ket(np.eye(2, dtype=complex), (2, 1))
        np.testing.assert_allclose(v, [1, 0, 0, 1])

    def test_matrix_unit(self):
        m = np.zeros((2, 2), dtype=complex)
        m[0, 1] = 1.0
        v = double_ket(m, (2, 1))
        np.testing.assert_allclose(v, [0, 1, 0, 0])

    def test_belief_root_reproduces_matrix_unit_sum(self):
        # the register-traced outer product must equal the explicit sum
        # sum_{k,k'} Tr_R[sqrt(b)(|k><k'| (x) 1) sqrt(b)] (x) |k><k'|
        belief = builtin_belief("proper_01")
        root = belief.sqrt_joint()
        v = double_ket(root, (2, 2))
        traced = partial_trace(np.outer(v, v.conj()), (2, 2, 2, 2), traced=(1, 3))
        expected = np.zeros((4, 4), dtype=complex)
        for k in range(2):
            for kp in range(2):
                unit = np.zeros((2, 2), dtype=complex)
                unit[k, kp] = 1.0
                block = partial_trace(root @ tensor(unit, np.eye(2)) @ root, (2, 2), traced=(1,))
                expected += tensor(block, unit)
        assert_close(traced, expected, 1e-12, "matrix-unit sum")

    @settings(max_examples=25, deadline=None)
    @given(st.floats(-3, 3), st.floats(-3, 3))
    def test_linear(self, re, im):
        rng = np.random.default_rng(42)
        a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        b = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        alpha = complex(re, im)
        lhs = double_ket(alpha * a + b, (2, 2))
        rhs = alpha * double_ket(a, (2, 2)) + double_ket(b, (2, 2))
        assert float(np.linalg.norm(lhs - rhs)) <= 1e-12 * max(1.0, abs(alpha))

    def test_outer_traces_to_gram(self, rng):
        for dims in ((2, 1), (2, 2), (3, 2)):
            side = dims[0] * dims[1]
            a = rng.standard_normal((side, side)) + 1j * rng.standard_normal((side, side))
            v = double_ket(a, dims)
            back = partial_trace(np.outer(v, v.conj()), dims + dims, traced=(2, 3))
            assert_close(back, a @ dag(a), 1e-10, "vectorization consistency")

    def test_shape_check(self):
        with pytest.raises(DimensionMismatch):
            double_ket(np.eye(3, dtype=complex), (2, 2))


def test_hermitize_and_norms(rng):
    m = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    h = hermitize(m)
    assert_close(h, dag(h), 1e-15)
    assert frobenius_distance(m, m) == 0.0
