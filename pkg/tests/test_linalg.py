import numpy as np
import pytest

from multiport.linalg import (
    as_matrix,
    dagger,
    haar_random_unitary,
    matmul,
    rq_decompose,
    sample_haar,
    unitarity,
)

SWAP = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)


class TestAsMatrix:
    def test_passthrough_complex(self):
        a = np.eye(3, dtype=np.complex128)
        assert as_matrix(a) is a

    def test_casts_real(self):
        out = as_matrix(np.eye(2))
        assert out.dtype == np.complex128

    @pytest.mark.parametrize("bad", [np.zeros(3), np.zeros((2, 2, 2)), 1.0])
    def test_rejects_wrong_ndim(self, bad):
        with pytest.raises(ValueError):
            as_matrix(bad)

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            as_matrix(np.array([[np.nan, 0.0], [0.0, 1.0]]))
        with pytest.raises(ValueError):
            as_matrix(np.array([[np.inf + 0j, 0.0], [0.0, 1.0]]))

    def test_rejects_nonsquare_when_required(self):
        with pytest.raises(ValueError):
            as_matrix(np.zeros((2, 3)), square=True)


class TestMatmul:
    def test_identity_left_and_right(self):
        rng = np.random.default_rng(1)
        m = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        np.testing.assert_allclose(matmul(np.eye(3), m), m, atol=0)
        np.testing.assert_allclose(matmul(m, np.eye(3)), m, atol=0)

    def test_permutation_involution(self):
        np.testing.assert_array_equal(matmul(SWAP, SWAP), np.eye(2))

    def test_known_product(self):
        a = np.array([[1.0 + 1j, 2.0], [0.0, 1j]])
        b = np.array([[1.0, 1j], [1.0 - 1j, 0.0]])
        # worked by hand: row-by-column products
        expected = np.array([[(1 + 1j) + 2 * (1 - 1j), (1 + 1j) * 1j],
                             [1j * (1 - 1j), 0.0]])
        np.testing.assert_allclose(matmul(a, b), expected, atol=1e-15)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            matmul(np.eye(2), np.eye(3))


class TestDagger:
    def test_identity(self):
        np.testing.assert_array_equal(dagger(np.eye(3)), np.eye(3))

    def test_one_by_one_conjugation(self):
        np.testing.assert_array_equal(dagger(np.array([[1j]])), np.array([[-1j]]))

    def test_involution_exact(self):
        rng = np.random.default_rng(2)
        a = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
        assert dagger(dagger(a)).shape == a.shape
        np.testing.assert_array_equal(dagger(dagger(a)), a)

    def test_inverts_sampled_unitary(self):
        q = haar_random_unitary(6, 11)
        np.testing.assert_allclose(dagger(q) @ q, np.eye(6), atol=1e-12)

    def test_does_not_alias_input(self):
        a = np.eye(2, dtype=np.complex128)
        d = dagger(a)
        d[0, 0] = 5.0
        assert a[0, 0] == 1.0


class TestUnitarity:
    def test_identity(self):
        report = unitarity(np.eye(5), tol=1e-12)
        assert report.defect == 0.0
        assert report.is_unitary

    def test_diag_one_two(self):
        # diag(1,2): dagger @ self = diag(1,4), so the worst entry is |4-1| = 3
        report = unitarity(np.diag([1.0, 2.0]), tol=1e-12)
        assert report.defect == pytest.approx(3.0, abs=0)
        assert not report.is_unitary

    def test_haar_sample(self):
        report = unitarity(haar_random_unitary(8, 3))
        assert report.defect < 1e-12
        assert report.is_unitary

    def test_nonsquare_rejected(self):
        with pytest.raises(ValueError):
            unitarity(np.zeros((2, 3)))

    def test_bad_tol_rejected(self):
        with pytest.raises(ValueError):
            unitarity(np.eye(2), tol=0.0)


class TestHaarRandomUnitary:
    def test_single_phase_for_n_one(self):
        u = haar_random_unitary(1, 5)
        assert u.shape == (1, 1)
        assert abs(abs(u[0, 0]) - 1.0) < 1e-12

    def test_determinism(self):
        np.testing.assert_array_equal(
            haar_random_unitary(7, 123), haar_random_unitary(7, 123)
        )

    def test_seeds_differ(self):
        assert not np.array_equal(
            haar_random_unitary(7, 123), haar_random_unitary(7, 124)
        )

    @pytest.mark.parametrize("n", [2, 5, 16])
    def test_samples_are_unitary(self, n):
        assert unitarity(haar_random_unitary(n, n)).defect < 1e-12

    def test_rejects_zero_dimension(self):
        with pytest.raises(ValueError):
            haar_random_unitary(0, 1)

    def test_corner_entry_moment(self):
        # Haar columns are uniform on the sphere: E|u11|^2 = 1/n.
        n, trials = 16, 10_000
        vals = np.empty(trials)
        for s in range(trials):
            vals[s] = abs(haar_random_unitary(n, s)[0, 0]) ** 2
        se = vals.std(ddof=1) / np.sqrt(trials)
        assert abs(vals.mean() - 1.0 / n) <= 3 * se

    def test_trace_second_moment(self):
        # E |tr U|^2 = 1 for Haar on U(n); a naive QR sampler without the
        # phase correction fails this badly.
        rng = np.random.default_rng(9)
        q = sample_haar(rng, 3, count=20_000)
        vals = np.abs(np.trace(q, axis1=-2, axis2=-1)) ** 2
        se = vals.std(ddof=1) / np.sqrt(vals.size)
        assert abs(vals.mean() - 1.0) <= 4 * se

    def test_batched_matches_distribution_contract(self):
        rng = np.random.default_rng(4)
        batch = sample_haar(rng, 4, count=10)
        assert batch.shape == (10, 4, 4)
        for k in range(10):
            assert unitarity(batch[k]).defect < 1e-12


class TestRQDecompose:
    def test_identity(self):
        r, q = rq_decompose(np.eye(4))
        assert unitarity(q).is_unitary
        np.testing.assert_allclose(np.eye(4) @ q, r, atol=1e-14)
        assert np.all(np.abs(np.tril(r, -1)) == 0.0)

    def test_already_upper_triangular(self):
        a = np.array([[1.0, 2.0, 3.0], [0.0, 4.0, 5.0], [0.0, 0.0, 6.0]])
        r, q = rq_decompose(a)
        assert np.all(np.abs(np.tril(r, -1)) == 0.0)
        np.testing.assert_allclose(a @ q, r, atol=1e-12)

    def test_random_unitary(self):
        a = haar_random_unitary(3, 17)
        r, q = rq_decompose(a)
        prod = a @ q
        assert np.abs(np.tril(prod, -1)).max() < 1e-12
        assert unitarity(q, tol=1e-12).is_unitary

    @pytest.mark.parametrize("n", [1, 2, 6])
    def test_contract_on_general_matrices(self, n):
        rng = np.random.default_rng(n)
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        r, q = rq_decompose(a)
        scale = np.abs(a).max()
        assert unitarity(q, tol=1e-12 * max(n, 1)).is_unitary
        np.testing.assert_allclose(a @ q, r, atol=1e-12 * scale)
        assert np.abs(np.tril(r, -1)).max() <= 1e-12 * scale

    def test_real_input_promoted_to_complex(self):
        _, q = rq_decompose(np.eye(3))
        assert q.dtype == np.complex128

    def test_nonsquare_rejected(self):
        with pytest.raises(ValueError):
            rq_decompose(np.zeros((2, 3)))
