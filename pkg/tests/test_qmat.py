import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import nccorr as nc
from nccorr import qmat

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)


def random_hermitian(rng, n):
    A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (A + A.conj().T) / 2.0


def random_state(dims, seed, rank=None):
    d = int(np.prod(dims))
    return nc.random_density_matrix(dims, rank or d, seed)


class TestHermEig:
    def test_identity(self):
        spec, V = qmat.herm_eig(np.eye(4, dtype=complex))
        assert np.array_equal(spec.values, np.ones(4))
        assert np.array_equal(V, np.eye(4))

    def test_pauli_x(self):
        spec, _ = qmat.herm_eig(PAULI_X)
        assert np.allclose(spec.values, [1.0, -1.0], atol=1e-14)

    def test_sigma_eighth_spectrum(self):
        # block structure 1x1 / 2x2 / 1x1 gives (3/8, 3/8, 1/4, 0) by hand
        spec, _ = qmat.herm_eig(nc.make_sigma(0.125).mat)
        assert np.allclose(spec.values, [0.375, 0.375, 0.25, 0.0], atol=1e-14)

    def test_non_hermitian_rejected(self):
        M = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
        with pytest.raises(nc.NonHermitian):
            qmat.herm_eig(M)

    def test_reconstruction_500_random(self):
        rng = np.random.default_rng(11)
        for _ in range(500):
            n = int(rng.integers(2, 17))
            H = random_hermitian(rng, n)
            spec, V = qmat.herm_eig(H)
            err = np.linalg.norm((V * spec.values) @ V.conj().T - H)
            assert err <= 1e-10 * max(1.0, np.linalg.norm(H))
            ortho = np.max(np.abs(V.conj().T @ V - np.eye(n)))
            assert ortho <= 1e-10
            assert np.all(np.diff(spec.values) <= 1e-12)

    def test_deterministic_and_phase_convention(self):
        rng = np.random.default_rng(3)
        H = random_hermitian(rng, 7)
        s1, V1 = qmat.herm_eig(H)
        s2, V2 = qmat.herm_eig(H.copy())
        assert np.array_equal(s1.values, s2.values)
        assert np.array_equal(V1, V2)
        for j in range(7):
            i = int(np.argmax(np.abs(V1[:, j])))
            assert abs(V1[i, j].imag) < 1e-14
            assert V1[i, j].real >= 0.0


class TestTensor:
    def test_identity(self):
        assert np.array_equal(qmat.tensor(np.eye(2), np.eye(3)), np.eye(6))

    def test_diagonal(self):
        out = qmat.tensor(np.diag([2.0, 3.0]), np.diag([5.0, 7.0]))
        assert np.array_equal(np.diag(out), [10, 14, 15, 21])

    def test_block_structure(self):
        P0 = np.diag([1.0, 0.0]).astype(complex)
        out = qmat.tensor(P0, PAULI_X)
        assert np.array_equal(out[:2, :2], PAULI_X)
        assert np.all(out[2:, :] == 0) and np.all(out[:, 2:] == 0)


class TestPartialTrace:
    def test_product_factorization(self):
        rng = np.random.default_rng(5)
        A = random_state((2,), 1).mat
        B = random_state((3,), 2).mat * 0.7  # trace != 1 on purpose
        rho = nc.DensityMatrix((2, 3), np.kron(A, B))
        red = qmat.partial_trace(rho, [0])
        assert np.allclose(red.mat, A * np.trace(B), atol=1e-12)

    def test_ps_marginal_maximally_mixed(self):
        for p in (0.0, 0.3, 1.0):
            red = qmat.partial_trace(nc.make_pseudo_entangled(p), [0])
            assert np.allclose(red.mat, np.eye(2) / 2, atol=1e-14)

    def test_sigma_marginal(self):
        red = qmat.partial_trace(nc.make_sigma(0.2), [1])
        assert np.allclose(red.mat, np.eye(2) / 2, atol=1e-14)

    def test_trace_preserved(self):
        rho = random_state((2, 2, 2), 9)
        red = qmat.partial_trace(rho, [0, 2])
        assert abs(np.trace(red.mat).real - 1.0) <= 1e-12
        assert red.dims == (2, 2)

    def test_bad_index(self):
        with pytest.raises(nc.BadSubsystemIndex):
            qmat.partial_trace(nc.make_sigma(0.1), [2])
        with pytest.raises(nc.BadSubsystemIndex):
            qmat.partial_trace(nc.make_sigma(0.1), [])


class TestPartialTranspose:
    def test_sigma_pt_spectrum(self):
        p = 0.2
        pt = qmat.partial_transpose(nc.make_sigma(p), [1])
        spec, _ = qmat.herm_eig(pt)
        expected = np.sort([0.5, 0.5 - 2 * p, p, p])[::-1]
        assert np.allclose(spec.values, expected, atol=1e-12)

    @given(st.integers(0, 10 ** 6))
    @settings(max_examples=40, deadline=None)
    def test_involution_exact(self, seed):
        rho = random_state((2, 3), seed)
        pt = qmat.partial_transpose(rho, [1])
        back = qmat.partial_transpose(nc.DensityMatrix((2, 3), pt), [1])
        assert np.array_equal(back, rho.mat)

    @given(st.integers(0, 10 ** 6))
    @settings(max_examples=25, deadline=None)
    def test_product_spectrum_preserved(self, seed):
        a = random_state((2,), seed)
        b = random_state((3,), seed + 1)
        rho = nc.tensor_state(a, b)
        s0, _ = qmat.herm_eig(rho.mat)
        s1, _ = qmat.herm_eig(qmat.partial_transpose(rho, [1]))
        assert np.allclose(s0.values, s1.values, atol=1e-10)

    def test_horodecki_spectrum_preserved(self):
        for b in (0.1, 0.5, 0.9):
            rho = nc.make_horodecki(b)
            s0, _ = qmat.herm_eig(rho.mat)
            s1, _ = qmat.herm_eig(qmat.partial_transpose(rho, [1]))
            assert np.allclose(s0.values, s1.values, atol=1e-12)

    def test_trace_and_hermiticity_preserved(self):
        rho = random_state((2, 2), 17)
        pt = qmat.partial_transpose(rho, [0])
        assert abs(np.trace(pt).real - 1.0) <= 1e-12
        assert np.max(np.abs(pt - pt.conj().T)) <= 1e-12


class TestEntropies:
    @pytest.mark.parametrize(
        "p,expected",
        [([1, 0, 0, 0], 0.0), ([0.5, 0.5], 1.0), ([0.25] * 4, 2.0)],
    )
    def test_shannon_known(self, p, expected):
        assert qmat.shannon_entropy(np.array(p)) == pytest.approx(expected, abs=1e-14)

    def test_shannon_rejects_bad_input(self):
        with pytest.raises(nc.NotAProbabilityVector):
            qmat.shannon_entropy(np.array([0.5, 0.6]))
        with pytest.raises(nc.NotAProbabilityVector):
            qmat.shannon_entropy(np.array([1.5, -0.5]))

    def test_vn_pure_state(self):
        psi = np.zeros(4, dtype=complex)
        psi[0] = psi[3] = 1 / math.sqrt(2)
        rho = nc.DensityMatrix((2, 2), np.outer(psi, psi.conj()))
        assert qmat.von_neumann_entropy(rho) == pytest.approx(0.0, abs=1e-12)

    def test_vn_maximally_mixed(self):
        rho = nc.DensityMatrix((2, 2), np.eye(4, dtype=complex) / 4)
        assert qmat.von_neumann_entropy(rho) == pytest.approx(2.0, abs=1e-12)

    def test_vn_ps_closed_form(self):
        def s(x):
            return 0.0 if x <= 0 else -x * math.log2(x)

        for p in np.linspace(0, 1, 11):
            expected = 3 * s((1 - p) / 4) + s((1 + 3 * p) / 4)
            got = qmat.von_neumann_entropy(nc.make_pseudo_entangled(float(p)))
            assert got == pytest.approx(expected, abs=1e-11)

    @given(st.integers(0, 10 ** 6))
    @settings(max_examples=30, deadline=None)
    def test_vn_unitary_invariance(self, seed):
        rho = random_state((2, 2), seed)
        u = nc.haar_random_product_basis((4,), seed + 99).factors[0]
        rho2 = nc.DensityMatrix((2, 2), u @ rho.mat @ u.conj().T)
        assert abs(
            qmat.von_neumann_entropy(rho) - qmat.von_neumann_entropy(rho2)
        ) <= 1e-9


class TestDiagProbs:
    def test_computational_on_diagonal(self):
        q = np.array([0.4, 0.3, 0.2, 0.1])
        rho = nc.DensityMatrix((2, 2), np.diag(q).astype(complex))
        basis = nc.computational_basis((2, 2))
        assert np.allclose(qmat.diag_probs(rho, basis), q, atol=1e-15)

    def test_ps_diagonal(self):
        p = 0.37
        probs = qmat.diag_probs(nc.make_pseudo_entangled(p), nc.computational_basis((2, 2)))
        expected = [(1 + p) / 4, (1 - p) / 4, (1 - p) / 4, (1 + p) / 4]
        assert np.allclose(probs, expected, atol=1e-14)

    def test_any_basis_on_maximally_mixed(self):
        rho = nc.DensityMatrix((2, 2), np.eye(4, dtype=complex) / 4)
        basis = nc.haar_random_product_basis((2, 2), 123)
        assert np.allclose(qmat.diag_probs(rho, basis), 0.25, atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(nc.DimensionMismatch):
            qmat.diag_probs(nc.make_sigma(0.1), nc.computational_basis((2, 3)))
