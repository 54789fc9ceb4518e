import math

import numpy as np
import pytest

import nccorr as nc
from nccorr import qmat, search


def s(x):
    return 0.0 if x <= 0 else -x * math.log2(x)


class TestHaarSampling:
    def test_unitarity(self):
        basis = nc.haar_random_product_basis((2, 2), 4711)
        assert basis.unitarity_residual() <= 1e-12
        for f in basis.factors:
            assert np.allclose(np.linalg.norm(f, axis=0), 1.0, atol=1e-12)

    def test_deterministic_per_seed(self):
        a = nc.haar_random_product_basis((2, 4), 99)
        b = nc.haar_random_product_basis((2, 4), 99)
        for fa, fb in zip(a.factors, b.factors):
            assert np.array_equal(fa, fb)
        c = nc.haar_random_product_basis((2, 4), 100)
        assert not np.array_equal(a.factors[0], c.factors[0])

    def test_haar_first_moment(self):
        # E |U_00|^2 = 1/d for Haar; check d=2 over 10^4 samples
        keys = search.sample_key(0, np.arange(10000, dtype=np.uint64))
        (us,) = search._haar_batch((2,), keys)
        mean = float(np.mean(np.abs(us[:, 0, 0]) ** 2))
        assert abs(mean - 0.5) <= 0.02

    def test_mix64_spreads(self):
        keys = search.sample_key(1, np.arange(1000, dtype=np.uint64))
        assert len(set(keys.tolist())) == 1000


class TestMinDiagEntropy:
    def test_diagonal_state_exact(self):
        q = np.array([0.4, 0.3, 0.2, 0.1])
        rho = nc.DensityMatrix((2, 2), np.diag(q).astype(complex))
        cfg = nc.SearchConfig(n_samples=200, seed=2, refine_steps=0)
        val, basis, _ = nc.min_diag_entropy(rho, cfg)
        expected = qmat.shannon_entropy(qmat.diag_probs(rho, nc.computational_basis((2, 2))))
        assert val == expected

    def test_maximally_mixed_two_bits(self):
        rho = nc.DensityMatrix((2, 2), np.eye(4, dtype=complex) / 4)
        val, _, _ = nc.min_diag_entropy(rho, nc.SearchConfig(n_samples=100, refine_steps=5))
        assert val == pytest.approx(2.0, abs=1e-12)

    def test_ps_half_closed_form(self):
        rho = nc.make_pseudo_entangled(0.5)
        val, _, _ = nc.min_diag_entropy(rho, nc.SearchConfig(n_samples=2000, refine_steps=50))
        assert val == pytest.approx(2 * s(3 / 8) + 2 * s(1 / 8), abs=1e-12)

    def test_never_below_von_neumann(self):
        for seed in range(6):
            rho = nc.random_density_matrix((2, 2), 4, seed)
            val, _, _ = nc.min_diag_entropy(rho, nc.SearchConfig(n_samples=300, refine_steps=20))
            assert val >= qmat.von_neumann_entropy(rho) - 1e-9

    def test_never_above_deterministic_candidates(self):
        rho = nc.random_density_matrix((2, 2), 4, 31)
        val, _, _ = nc.min_diag_entropy(rho, nc.SearchConfig(n_samples=500, refine_steps=0))
        comp = qmat.shannon_entropy(qmat.diag_probs(rho, nc.computational_basis((2, 2))))
        marg = qmat.shannon_entropy(qmat.diag_probs(rho, nc.marginal_eigenbasis(rho)))
        assert val <= comp and val <= marg

    def test_monotone_in_samples(self):
        rho = nc.random_density_matrix((2, 2), 4, 55)
        vals = [
            nc.min_diag_entropy(rho, nc.SearchConfig(n_samples=n, seed=7, refine_steps=0))[0]
            for n in (0, 100, 400, 1600)
        ]
        assert all(b <= a for a, b in zip(vals, vals[1:]))

    def test_chunk_size_invariance(self):
        rho = nc.random_density_matrix((2, 3), 6, 77)
        base = nc.min_diag_entropy(rho, nc.SearchConfig(n_samples=700, seed=3, refine_steps=30))
        for chunk in (1, 13, 256, 10000):
            cfg = nc.SearchConfig(n_samples=700, seed=3, refine_steps=30, chunk_size=chunk)
            val, basis, _ = nc.min_diag_entropy(rho, cfg)
            assert val == base[0]
            for fa, fb in zip(basis.factors, base[1].factors):
                assert np.array_equal(fa, fb)

    def test_refinement_never_increases(self):
        rho = nc.random_density_matrix((2, 2), 4, 91)
        v0, _, _ = nc.min_diag_entropy(rho, nc.SearchConfig(n_samples=200, seed=5, refine_steps=0))
        v1, _, d1 = nc.min_diag_entropy(rho, nc.SearchConfig(n_samples=200, seed=5, refine_steps=200))
        assert v1 <= v0
        assert d1["refine_accepts"] >= 0

    def test_witness_reproduces_value(self):
        rho = nc.random_density_matrix((2, 2), 4, 13)
        val, basis, _ = nc.min_diag_entropy(rho, nc.SearchConfig(n_samples=400, refine_steps=0))
        assert qmat.shannon_entropy(qmat.diag_probs(rho, basis)) == pytest.approx(val, abs=1e-12)
