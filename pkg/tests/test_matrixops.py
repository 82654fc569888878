import math

import numpy as np
import pytest

from stabound.errors import (
    EigenConvergenceError,
    NotPositiveDefiniteError,
    NotSymmetricError,
    NumericalError,
)
from stabound.matrixops import (
    as_symmetric,
    char_poly_eigs_2x2,
    expm,
    induced_norm2,
    pd_sqrt,
    sym_eig,
    weighted_induced_norm,
    weighted_vec_norm,
)

from oracles import rk4_at, sym3_eigenvalues

R10 = math.sqrt(10.0)
R11 = math.sqrt(11.0)
# the constant-weight demo matrix and its exact eigenvalues
H_DEMO = np.array([[3.0 / 5.0, R10 / 20.0], [R10 / 20.0, 0.5]])
H_DEMO_EIGS = ((11.0 - R11) / 20.0, (11.0 + R11) / 20.0)
A_ROT = np.array([[0.0, R10], [-R10, -2.0]])


def random_symmetric(rng, n):
    g = rng.standard_normal((n, n))
    return 0.5 * (g + g.T)


def random_pd(rng, n):
    g = rng.standard_normal((n, n))
    return g @ g.T + n * np.eye(n)


class TestSymEig:
    def test_identity(self):
        eig = sym_eig(np.eye(2))
        np.testing.assert_allclose(eig.values, [1.0, 1.0])

    def test_demo_weight_eigenvalues(self):
        eig = sym_eig(H_DEMO)
        np.testing.assert_allclose(eig.values, H_DEMO_EIGS, atol=1e-14)

    def test_random_3x3_against_characteristic_cubic(self):
        rng = np.random.default_rng(42)
        for _ in range(20):
            s = random_symmetric(rng, 3)
            expected = sym3_eigenvalues(s)
            np.testing.assert_allclose(sym_eig(s).values, expected, atol=1e-12)

    @pytest.mark.parametrize("n", [1, 2, 3, 5, 8])
    def test_reconstruction_and_orthogonality(self, n):
        rng = np.random.default_rng(n)
        for _ in range(10):
            s = random_symmetric(rng, n)
            values, vectors = sym_eig(s)
            scale = max(1.0, np.linalg.norm(s))
            assert np.linalg.norm(vectors @ np.diag(values) @ vectors.T - s) <= 1e-10 * scale
            assert np.linalg.norm(vectors.T @ vectors - np.eye(n)) <= 1e-10

    def test_sorted_ascending(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            values = sym_eig(random_symmetric(rng, 4)).values
            assert np.all(np.diff(values) >= 0.0)

    def test_deterministic(self):
        s = random_symmetric(np.random.default_rng(0), 5)
        first = sym_eig(s.copy())
        second = sym_eig(s.copy())
        assert np.array_equal(first.values, second.values)
        assert np.array_equal(first.vectors, second.vectors)

    def test_sign_canonicalization(self):
        values, vectors = sym_eig(np.diag([2.0, 1.0]))
        # each eigenvector's first nonzero component is positive
        for j in range(2):
            col = vectors[:, j]
            assert col[np.nonzero(np.abs(col) > 1e-12)[0][0]] > 0

    def test_rejects_asymmetric(self):
        with pytest.raises(NotSymmetricError):
            sym_eig([[0.0, 1.0], [0.0, 0.0]])

    def test_input_not_mutated(self):
        s = random_symmetric(np.random.default_rng(1), 4)
        snapshot = s.copy()
        sym_eig(s)
        assert np.array_equal(s, snapshot)


class TestInducedNorm:
    def test_identity(self):
        assert induced_norm2(np.eye(3)) == pytest.approx(1.0)

    def test_triangular_demo_matrix(self):
        # ||A||_I for A = [[-1, 1], [0, -3]] is sqrt((11 + sqrt(85)) / 2)
        a = np.array([[-1.0, 1.0], [0.0, -3.0]])
        assert induced_norm2(a) == pytest.approx(3.1796, abs=1e-4)

    def test_diagonal(self):
        assert induced_norm2(np.diag([2.0, -5.0])) == pytest.approx(5.0)

    def test_transpose_invariance(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            m = rng.standard_normal((4, 4))
            assert induced_norm2(m) == pytest.approx(induced_norm2(m.T), rel=1e-12)

    def test_symmetric_psd_equals_spectral_radius(self):
        rng = np.random.default_rng(5)
        s = random_pd(rng, 3)
        assert induced_norm2(s) == pytest.approx(max(sym_eig(s).values), rel=1e-12)


class TestWeightedVecNorm:
    def test_euclidean_reduction(self):
        assert weighted_vec_norm([3.0, 4.0], np.eye(2)) == pytest.approx(5.0)

    def test_demo_weight_quadratic_form(self):
        # 3 x1^2/5 + (sqrt(10)/10) x1 x2 + x2^2/2 under the hood
        assert weighted_vec_norm([1.0, 0.0], H_DEMO) == pytest.approx(math.sqrt(0.6))
        x = np.array([0.7, -1.3])
        expected = math.sqrt(0.6 * x[0] ** 2 + (R10 / 10.0) * x[0] * x[1] + 0.5 * x[1] ** 2)
        assert weighted_vec_norm(x, H_DEMO) == pytest.approx(expected, rel=1e-12)

    def test_diagonal_weight(self):
        assert weighted_vec_norm([1.0, 1.0], np.diag([4.0, 9.0])) == pytest.approx(math.sqrt(13.0))

    def test_zero_iff_zero(self):
        assert weighted_vec_norm([0.0, 0.0], H_DEMO) == 0.0
        assert weighted_vec_norm([1e-12, 0.0], H_DEMO) > 0.0

    def test_rejects_indefinite_weight(self):
        with pytest.raises(NotPositiveDefiniteError) as err:
            weighted_vec_norm([1.0, 1.0], np.diag([1.0, -1.0]))
        assert err.value.lambda_min == pytest.approx(-1.0)

    def test_norm_axioms(self):
        rng = np.random.default_rng(11)
        h = random_pd(rng, 3)
        for _ in range(50):
            x = rng.standard_normal(3)
            y = rng.standard_normal(3)
            c = rng.standard_normal()
            nx = weighted_vec_norm(x, h)
            ny = weighted_vec_norm(y, h)
            assert weighted_vec_norm(x + y, h) <= nx + ny + 1e-12
            assert weighted_vec_norm(c * x, h) == pytest.approx(abs(c) * nx, rel=1e-12)
            assert nx > 0.0

    def test_rayleigh_ritz_sandwich(self):
        rng = np.random.default_rng(13)
        for _ in range(50):
            h = random_pd(rng, 4)
            x = rng.standard_normal(4)
            lo, hi = sym_eig(h).values[[0, -1]]
            q = float(x @ h @ x)
            n2 = float(x @ x)
            assert lo * n2 - 1e-9 <= q <= hi * n2 + 1e-9


class TestWeightedInducedNorm:
    def test_identity_weight_reduction(self):
        rng = np.random.default_rng(17)
        for _ in range(10):
            m = rng.standard_normal((3, 3))
            assert weighted_induced_norm(m, np.eye(3)) == pytest.approx(
                induced_norm2(m), rel=1e-10
            )

    def test_diagonal_weight_shear(self):
        # H^(1/2) M H^(-1/2) = [[0, 2], [0, 0]] by direct computation
        assert weighted_induced_norm(
            [[0.0, 1.0], [0.0, 0.0]], np.diag([4.0, 1.0])
        ) == pytest.approx(2.0, rel=1e-12)

    def test_identity_matrix_any_weight(self):
        rng = np.random.default_rng(19)
        h = random_pd(rng, 3)
        assert weighted_induced_norm(np.eye(3), h) == pytest.approx(1.0, rel=1e-10)


class TestPdSqrt:
    def test_identity(self):
        np.testing.assert_allclose(pd_sqrt(np.eye(3)), np.eye(3))

    def test_diagonal(self):
        np.testing.assert_allclose(pd_sqrt(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]))

    def test_squares_back(self):
        rng = np.random.default_rng(23)
        for _ in range(10):
            h = random_pd(rng, 3)
            r = pd_sqrt(h)
            assert np.array_equal(r, r.T)
            assert np.linalg.norm(r @ r - h) <= 1e-10 * max(1.0, np.linalg.norm(h))

    def test_rejects_indefinite(self):
        with pytest.raises(NotPositiveDefiniteError):
            pd_sqrt(np.diag([1.0, 0.0]))


class TestExpm:
    def test_t_zero_is_identity(self):
        rng = np.random.default_rng(29)
        a = rng.standard_normal((4, 4))
        np.testing.assert_array_equal(expm(a, 0.0), np.eye(4))

    def test_rotation_damping_closed_form(self):
        for t in (0.25, 1.0, 2.5):
            c3, s3 = math.cos(3 * t), math.sin(3 * t)
            expected = (math.exp(-t) / 3.0) * np.array(
                [[3 * c3 + s3, R10 * s3], [-R10 * s3, 3 * c3 - s3]]
            )
            np.testing.assert_allclose(expm(A_ROT, t), expected, atol=1e-13)

    def test_nilpotent(self):
        for t in (0.5, 2.0, -3.0):
            np.testing.assert_allclose(
                expm([[0.0, 1.0], [0.0, 0.0]], t), [[1.0, t], [0.0, 1.0]], atol=1e-15
            )

    def test_semigroup(self):
        rng = np.random.default_rng(31)
        a = rng.standard_normal((3, 3))
        left = expm(a, 0.7 + 0.9)
        right = expm(a, 0.7) @ expm(a, 0.9)
        np.testing.assert_allclose(left, right, atol=1e-12)

    def test_columns_solve_the_ode(self):
        rng = np.random.default_rng(37)
        for _ in range(5):
            a = rng.standard_normal((3, 3))
            t = rng.uniform(0.0, 2.0)
            reference = np.column_stack(
                [
                    rk4_at(lambda s, y: a @ y, 0.0, e, t, 4000)
                    for e in np.eye(3)
                ]
            )
            assert np.max(np.abs(expm(a, t) - reference)) <= 1e-8

    def test_overflow_is_an_error(self):
        with pytest.raises(NumericalError):
            expm(np.eye(2) * 1e300, 1.0)


def test_as_symmetric_canonicalizes():
    s = np.array([[1.0, 2.0 + 4e-10], [2.0, 3.0]])
    out = as_symmetric(s)
    assert np.array_equal(out, out.T)


def test_char_poly_eigs_2x2():
    lams = char_poly_eigs_2x2(A_ROT)
    assert sorted(lams, key=lambda z: z.imag) == [
        pytest.approx(-1.0 - 3.0j),
        pytest.approx(-1.0 + 3.0j),
    ]


def test_jacobi_convergence_error_is_reachable():
    # forcing non-convergence requires shrinking the sweep budget
    import stabound.matrixops as mx

    rng = np.random.default_rng(41)
    s = random_symmetric(rng, 8)
    original = mx.JACOBI_MAX_SWEEPS
    mx.JACOBI_MAX_SWEEPS = 0
    try:
        with pytest.raises(EigenConvergenceError):
            sym_eig(s)
    finally:
        mx.JACOBI_MAX_SWEEPS = original
