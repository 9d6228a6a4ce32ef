from math import comb

import numpy as np
import pytest

import fermicon as fc
from fermicon import _kernels


def oracle_shapes(limit=10_000, dmax=10):
    out = []
    for d in range(2, dmax + 1):
        for n in range(2, d + 1):
            if d**n <= limit:
                out.append(fc.SystemShape(d, n))
    return out


class TestReduce:
    def test_slater_one_body(self):
        s = fc.slater_state(fc.SystemShape(4, 2), [1, 2])
        rho = fc.reduce(s, 1)
        np.testing.assert_allclose(
            rho.matrix, np.diag([0.5, 0.5, 0.0, 0.0]), atol=1e-15
        )

    def test_fghz_one_body_is_maximally_mixed(self, fghz):
        rho = fc.reduce(fghz, 1)
        np.testing.assert_allclose(rho.matrix, np.eye(6) / 6.0, atol=1e-15)

    def test_fghz_two_body_is_slater_mixture(self, fghz):
        rho = fc.reduce(fghz, 2)
        basis = fc.enumerate_basis(fc.SystemShape(6, 2))
        expected = np.zeros((15, 15))
        for pair in [(1, 2), (1, 3), (2, 3), (4, 5), (4, 6), (5, 6)]:
            k = basis.rank(pair)
            expected[k, k] = 1.0 / 6.0
        np.testing.assert_allclose(rho.matrix, expected, atol=1e-15)

    def test_m_out_of_range(self, fghz):
        for m in (0, 3):
            with pytest.raises(fc.RangeError):
                fc.reduce(fghz, m)

    @pytest.mark.parametrize("shape", oracle_shapes())
    def test_first_quantized_oracle(self, shape):
        s = fc.random_state(shape, seed=shape.d * 100 + shape.n)
        for m in range(1, shape.n):
            occ = fc.occupation_to_first_quantized(fc.reduce(s, m))
            oracle = fc.reduce_first_quantized(s, m)
            assert np.max(np.abs(occ.matrix - oracle.matrix)) < 1e-10


class TestPurity:
    def test_maximally_mixed(self, fghz):
        assert fc.purity(fc.reduce(fghz, 1)) == pytest.approx(1.0 / 6.0, abs=1e-12)

    def test_pure_projector(self):
        s = fc.slater_state(fc.SystemShape(3, 3), [1, 2, 3])
        psi = fc.embed_first_quantized(s).entries
        dm = fc.DensityMatrix(
            s.shape, 3, "first-quantized", np.outer(psi, psi.conj())
        )
        assert fc.purity(dm) == pytest.approx(1.0, abs=1e-12)

    def test_random_slater_one_body(self):
        s = fc.random_slater_state(fc.SystemShape(7, 3), seed=5)
        assert fc.purity(fc.reduce(s, 1)) == pytest.approx(1.0 / 3.0, abs=1e-10)

    @pytest.mark.parametrize("m", [1, 2])
    def test_direct_matches_materialized(self, fghz, m):
        assert fc.purity_direct(fghz, m) == pytest.approx(1.0 / 6.0, abs=1e-12)

    @pytest.mark.parametrize("seed", range(8))
    def test_direct_equals_reduce_path(self, seed):
        s = fc.random_state(fc.SystemShape(6, 3), seed=seed)
        for m in (1, 2):
            assert fc.purity_direct(s, m) == pytest.approx(
                fc.purity(fc.reduce(s, m)), abs=1e-10
            )

    @pytest.mark.parametrize("shape", [fc.SystemShape(6, 3), fc.SystemShape(8, 4)])
    def test_complement_symmetry(self, shape):
        s = fc.random_state(shape, seed=31)
        for m in range(1, shape.n):
            assert fc.purity_direct(s, m) == pytest.approx(
                fc.purity_direct(s, shape.n - m), abs=1e-10
            )

    @pytest.mark.parametrize("seed", range(10))
    def test_purity_bounds(self, seed):
        shape = fc.SystemShape(6, 3)
        s = fc.random_state(shape, seed=seed)
        for m in (1, 2):
            p = fc.purity_direct(s, m)
            assert p <= 1.0 / comb(3, m) + 1e-10
            assert p >= 1.0 / comb(6, min(m, 3 - m)) - 1e-10

    def test_two_disjoint_terms_fall_below_bound(self):
        shape = fc.SystemShape(6, 3)
        a = fc.slater_state(shape, [1, 2, 3]).amplitudes
        b = fc.slater_state(shape, [4, 5, 6]).amplitudes
        s = fc.FermionState(shape, np.sqrt(0.9) * a + np.sqrt(0.1) * b)
        for m in (1, 2):
            assert fc.purity_direct(s, m) < 1.0 / 3.0 - 1e-3


class TestBackends:
    @pytest.mark.parametrize("shape", [fc.SystemShape(6, 3), fc.SystemShape(8, 4)])
    def test_numba_and_numpy_agree(self, shape):
        s = fc.random_state(shape, seed=77)
        for m in range(1, shape.n):
            ref = _kernels.split_purity(s.amplitudes, shape.d, shape.n, m, backend="numpy")
            for backend in ("numpy", "numba") if _kernels.numba_available() else ("numpy",):
                got = _kernels.split_purity(
                    s.amplitudes, shape.d, shape.n, m, backend=backend
                )
                assert got == pytest.approx(ref, abs=1e-13)
                B = _kernels.split_matrix(
                    s.amplitudes, shape.d, shape.n, m, backend=backend
                )
                ref_B = _kernels.split_matrix(
                    s.amplitudes, shape.d, shape.n, m, backend="numpy"
                )
                np.testing.assert_array_equal(B, ref_B)


class TestDiagonalClosedForm:
    def test_slater_triple(self):
        s = fc.slater_state(fc.SystemShape(6, 3), [1, 2, 3])
        rep = fc.diagonal_via_appendix(s, 1)
        np.testing.assert_allclose(
            rep.g, [1 / 3, 1 / 3, 1 / 3, 0, 0, 0], atol=1e-15
        )

    def test_fghz_uniform(self, fghz):
        rep = fc.diagonal_via_appendix(fghz, 1)
        np.testing.assert_allclose(rep.g, np.full(6, 1.0 / 6.0), atol=1e-15)

    @pytest.mark.parametrize("seed", range(6))
    def test_residual_against_direct_diagonal(self, seed):
        s = fc.random_state(fc.SystemShape(6, 3), seed=seed)
        for m in (1, 2):
            rep = fc.diagonal_via_appendix(s, m)
            assert rep.residual <= 1e-12
            assert rep.gsq_residual <= 1e-12
            assert rep.decomposition_residual <= 1e-10
            assert rep.subtracted_term >= 0.0

    def test_decomposition_matches_bound_gap(self):
        # sum of squared diagonal entries = 1/C(n,m) - pair term, exactly
        s = fc.random_state(fc.SystemShape(8, 4), seed=12)
        for m in (1, 2, 3):
            rep = fc.diagonal_via_appendix(s, m)
            assert float(rep.g @ rep.g) == pytest.approx(
                1.0 / comb(4, m) - rep.subtracted_term, abs=1e-12
            )


class TestDensityMatrixValidation:
    def test_non_hermitian_rejected(self):
        bad = np.array([[0.5, 0.5], [0.0, 0.5]], dtype=complex)
        with pytest.raises(ValueError):
            fc.DensityMatrix(fc.SystemShape(2, 1), 1, "occupation", bad)

    def test_wrong_trace_rejected(self):
        with pytest.raises(ValueError):
            fc.DensityMatrix(fc.SystemShape(2, 1), 1, "occupation", np.eye(2))

    def test_negative_eigenvalue_rejected(self):
        bad = np.diag([1.5, -0.5]).astype(complex)
        with pytest.raises(ValueError):
            fc.DensityMatrix(fc.SystemShape(2, 1), 1, "occupation", bad)

    def test_eigenvalues_clipped(self, fghz):
        dm = fc.reduce(fghz, 1)
        assert np.all(dm.eigenvalues() >= 0.0)
