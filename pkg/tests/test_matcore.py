"""Fixed-size linear algebra: inversion, eigenvalues, structure predicates.

Eigenvalue routines are checked against two independent routes: numpy's
LAPACK solvers and characteristic-polynomial roots obtained from
Faddeev-LeVerrier coefficients.
"""

import math
import random

import numpy as np
import pytest

from pegsim import matcore
from pegsim.errors import NotTriangularError, SingularMatrixError


def char_poly_roots(m):
    """Characteristic polynomial roots via Faddeev-LeVerrier + np.roots."""
    a = np.asarray(m, dtype=float)
    n = a.shape[0]
    coeffs = [1.0]
    mk = np.zeros_like(a)
    for k in range(1, n + 1):
        mk = a @ mk + coeffs[-1] * np.eye(n)
        coeffs.append(-np.trace(a @ mk) / k)
    return np.roots(coeffs)


def random_mat6(rng, scale=100.0):
    return tuple(tuple(rng.uniform(-scale, scale) for _ in range(6)) for _ in range(6))


class TestConstructors:
    def test_vec_and_mat_shapes(self):
        assert matcore.vec3([1, 2, 3]) == (1.0, 2.0, 3.0)
        assert len(matcore.vec6(range(6))) == 6
        assert matcore.identity6()[2][2] == 1.0
        assert matcore.diag6((1, 2, 3, 4, 5, 6))[3][3] == 4.0

    def test_wrong_sizes_rejected(self):
        with pytest.raises(ValueError):
            matcore.vec6([1, 2, 3])
        with pytest.raises(ValueError):
            matcore.mat6([[1.0] * 6] * 5)

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            matcore.vec6([1, 2, 3, 4, 5, float("nan")])

    def test_axes_order(self):
        assert matcore.AXES == ("x", "y", "z", "rx", "ry", "rz")


class TestProducts:
    def test_mat_vec_identity(self):
        v = matcore.vec6((1, -2, 3, -4, 5, -6))
        assert matcore.mat_vec(matcore.identity6(), v) == v

    def test_mat_mul_against_numpy(self):
        rng = random.Random(1)
        a, b = random_mat6(rng), random_mat6(rng)
        got = np.array(matcore.mat_mul(a, b))
        want = np.array(a) @ np.array(b)
        assert np.allclose(got, want, rtol=1e-12, atol=1e-9)

    def test_cross3(self):
        assert matcore.cross3((1, 0, 0), (0, 1, 0)) == (0.0, 0.0, 1.0)
        assert matcore.cross3((0, 0, -0.15), (5, 0, 0)) == (0.0, -0.75, 0.0)

    def test_transpose_involution(self):
        m = random_mat6(random.Random(2))
        assert matcore.transpose(matcore.transpose(m)) == m


class TestInvert:
    def test_identity_inverse(self):
        assert matcore.invert6(matcore.identity6()) == matcore.identity6()

    def test_diagonal_inverse_exact(self):
        inv = matcore.invert6(matcore.diag6((2, 4, 5, 8, 10, 16)))
        assert inv[0][0] == 0.5
        assert inv[5][5] == 0.0625

    def test_multiply_back_random(self):
        rng = random.Random(3)
        for _ in range(50):
            m = random_mat6(rng)
            prod = np.array(matcore.mat_mul(m, matcore.invert6(m)))
            assert np.allclose(prod, np.eye(6), atol=1e-8)

    def test_against_numpy(self):
        m = random_mat6(random.Random(4))
        assert np.allclose(np.array(matcore.invert6(m)), np.linalg.inv(np.array(m)),
                           rtol=1e-9, atol=1e-12)

    def test_singular_raises(self):
        rows = [list(r) for r in matcore.identity6()]
        rows[3] = rows[2]
        with pytest.raises(SingularMatrixError):
            matcore.invert6(rows)

    def test_zero_matrix_raises(self):
        with pytest.raises(SingularMatrixError):
            matcore.invert6([[0.0] * 6] * 6)


class TestStructurePredicates:
    def test_symmetric_detection(self):
        m = matcore.diag6((1,) * 6)
        assert matcore.is_symmetric(m)
        rows = [list(r) for r in m]
        rows[0][1] = 5.0
        assert not matcore.is_symmetric(rows)
        rows[1][0] = 5.0
        assert matcore.is_symmetric(rows)

    def test_triangular_detection(self):
        rows = [[0.0] * 6 for _ in range(6)]
        for i in range(6):
            rows[i][i] = 1.0
        rows[1][2] = 7.0
        assert matcore.is_upper_triangular(rows)
        assert not matcore.is_lower_triangular(rows)
        assert matcore.is_lower_triangular(matcore.transpose(rows))


class TestEigenSymmetric:
    def test_diagonal_spectrum(self):
        vals = matcore.eigenvalues_symmetric(matcore.diag6((6, 5, 4, 3, 2, 1)))
        assert vals == sorted(vals)
        assert np.allclose(vals, [1, 2, 3, 4, 5, 6])

    def test_frozen_indefinite_block(self):
        # yz block [[500, 700], [700, 750]]: det < 0, one eigenvalue each side
        rows = [[0.0] * 6 for _ in range(6)]
        for i, d in enumerate((500, 500, 500, 50, 50, 50)):
            rows[i][i] = float(d)
        rows[1][1], rows[1][2], rows[2][1], rows[2][2] = 500.0, 700.0, 700.0, 750.0
        vals = matcore.eigenvalues_symmetric(rows)
        assert min(vals) == pytest.approx(-86.0731326663946, abs=1e-9)
        assert max(vals) == pytest.approx(1336.0731326663945, abs=1e-9)

    def test_against_numpy_random(self):
        rng = random.Random(5)
        for _ in range(30):
            m = random_mat6(rng)
            sym = np.array(m) + np.array(m).T
            got = matcore.eigenvalues_symmetric(tuple(map(tuple, sym)))
            want = np.linalg.eigvalsh(sym)
            assert np.allclose(got, want, rtol=1e-10, atol=1e-8)

    def test_against_char_poly(self):
        m = np.array(random_mat6(random.Random(6)))
        sym = tuple(map(tuple, m + m.T))
        got = matcore.eigenvalues_symmetric(sym)
        want = np.sort(char_poly_roots(sym).real)
        assert np.allclose(got, want, atol=1e-6)


class TestEigenTriangular:
    def test_diagonal_read_in_axis_order(self):
        rows = [[0.0] * 6 for _ in range(6)]
        diag = (5.0, -2.0, 7.0, 1.0, 9.0, 3.0)
        for i in range(6):
            rows[i][i] = diag[i]
        rows[0][5] = 123.0
        assert tuple(matcore.eigenvalues_triangular(rows)) == diag

    def test_rejects_non_triangular(self):
        rows = [[1.0 if i == j else 0.0 for j in range(6)] for i in range(6)]
        rows[3][1] = 2.0
        rows[1][3] = 2.0
        with pytest.raises(NotTriangularError):
            matcore.eigenvalues_triangular(rows)

    def test_thousand_random_vs_char_poly_under_5s(self):
        # acceptance: diagonal read equals characteristic-polynomial roots
        import time
        rng = random.Random(7)
        t0 = time.time()
        for _ in range(1000):
            rows = [[0.0] * 6 for _ in range(6)]
            upper = rng.random() < 0.5
            for i in range(6):
                rows[i][i] = rng.uniform(-100, 100)
                for j in range(i + 1, 6):
                    if upper:
                        rows[i][j] = rng.uniform(-100, 100)
                    else:
                        rows[j][i] = rng.uniform(-100, 100)
            got = sorted(matcore.eigenvalues_triangular(rows))
            want = sorted(char_poly_roots(rows).real)
            assert all(abs(g - w) < 1e-8 * max(1.0, abs(w)) for g, w in zip(got, want))
        assert time.time() - t0 < 5.0
