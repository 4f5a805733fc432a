"""Minimal fixed-size linear algebra for 6-DOF stiffness work.

Vectors are plain tuples of floats and matrices are tuples of row tuples,
axis order (x, y, z, rx, ry, rz).  Everything here is pure Python with value
semantics so callers can share objects freely across worker processes.

The two eigenvalue routines cover exactly what stiffness validation needs:
cyclic Jacobi rotations for symmetric matrices and diagonal read-off for
triangular ones.  General non-symmetric spectra are intentionally not
supported.
"""

from __future__ import annotations

import math
from typing import Sequence

from .errors import NotSymmetricError, NotTriangularError, SingularMatrixError

Vec3 = tuple[float, float, float]
Vec6 = tuple[float, float, float, float, float, float]
Mat6 = tuple[Vec6, ...]

AXES = ("x", "y", "z", "rx", "ry", "rz")

_JACOBI_MAX_SWEEPS = 50


def vec3(values: Sequence[float]) -> Vec3:
    """Validate and freeze a 3-vector."""
    if len(values) != 3:
        raise ValueError(f"expected 3 components, got {len(values)}")
    out = tuple(float(v) for v in values)
    _check_finite(out)
    return out  # type: ignore[return-value]


def vec6(values: Sequence[float]) -> Vec6:
    """Validate and freeze a 6-vector."""
    if len(values) != 6:
        raise ValueError(f"expected 6 components, got {len(values)}")
    out = tuple(float(v) for v in values)
    _check_finite(out)
    return out  # type: ignore[return-value]


def mat6(rows: Sequence[Sequence[float]]) -> Mat6:
    """Validate and freeze a 6x6 matrix given as rows."""
    if len(rows) != 6:
        raise ValueError(f"expected 6 rows, got {len(rows)}")
    return tuple(vec6(row) for row in rows)


def _check_finite(values: Sequence[float]) -> None:
    for v in values:
        if not math.isfinite(v):
            raise ValueError(f"non-finite component {v!r}")


def identity6() -> Mat6:
    return tuple(
        tuple(1.0 if i == j else 0.0 for j in range(6)) for i in range(6)
    )  # type: ignore[return-value]


def diag6(d: Sequence[float]) -> Mat6:
    v = vec6(d)
    return tuple(
        tuple(v[i] if i == j else 0.0 for j in range(6)) for i in range(6)
    )  # type: ignore[return-value]


def mat_vec(m: Mat6, x: Vec6) -> Vec6:
    return tuple(sum(m[i][j] * x[j] for j in range(6)) for i in range(6))  # type: ignore[return-value]


def mat_mul(a: Mat6, b: Mat6) -> Mat6:
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(6)) for j in range(6))
        for i in range(6)
    )  # type: ignore[return-value]


def transpose(m: Mat6) -> Mat6:
    return tuple(tuple(m[j][i] for j in range(6)) for i in range(6))  # type: ignore[return-value]


def max_abs(m: Mat6) -> float:
    return max(abs(v) for row in m for v in row)


def cross3(a: Vec3, b: Vec3) -> Vec3:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def invert6(m: Mat6) -> Mat6:
    """Invert a 6x6 matrix by LU decomposition with partial pivoting.

    Raises SingularMatrixError when a pivot falls below 1e-12 relative to
    the largest entry magnitude of the input.
    """
    scale = max_abs(m)
    if scale == 0.0:
        raise SingularMatrixError("zero matrix")
    threshold = 1e-12 * scale

    # Augment with the identity and eliminate in place.
    a = [list(row) + [1.0 if i == j else 0.0 for j in range(6)] for i, row in enumerate(m)]
    for col in range(6):
        pivot_row = max(range(col, 6), key=lambda r: abs(a[r][col]))
        if abs(a[pivot_row][col]) <= threshold:
            raise SingularMatrixError(f"pivot {a[pivot_row][col]:.3e} below threshold")
        if pivot_row != col:
            a[col], a[pivot_row] = a[pivot_row], a[col]
        pivot = a[col][col]
        for r in range(6):
            if r == col:
                continue
            factor = a[r][col] / pivot
            if factor == 0.0:
                continue
            row_r, row_c = a[r], a[col]
            for j in range(col, 12):
                row_r[j] -= factor * row_c[j]
    return tuple(
        tuple(a[i][6 + j] / a[i][i] for j in range(6)) for i in range(6)
    )  # type: ignore[return-value]


def is_symmetric(m: Mat6, tol: float = 1e-9) -> bool:
    return all(abs(m[i][j] - m[j][i]) <= tol for i in range(6) for j in range(i + 1, 6))


def is_upper_triangular(m: Mat6, tol: float = 1e-12) -> bool:
    return all(abs(m[i][j]) <= tol for i in range(1, 6) for j in range(i))


def is_lower_triangular(m: Mat6, tol: float = 1e-12) -> bool:
    return all(abs(m[i][j]) <= tol for i in range(6) for j in range(i + 1, 6))


def eigenvalues_symmetric(m: Mat6, tol: float = 1e-9) -> list[float]:
    """Eigenvalues of a symmetric 6x6 matrix, ascending, via cyclic Jacobi.

    Raises NotSymmetricError when any entry pair differs by more than tol.
    """
    if not is_symmetric(m, tol):
        worst = max(abs(m[i][j] - m[j][i]) for i in range(6) for j in range(i + 1, 6))
        raise NotSymmetricError(f"asymmetry {worst:.3e} exceeds {tol:.1e}")

    # Work on the symmetrized copy so tiny input asymmetry cannot bias sweeps.
    a = [[0.5 * (m[i][j] + m[j][i]) for j in range(6)] for i in range(6)]
    scale = max(max(abs(v) for v in row) for row in a)
    if scale == 0.0:
        return [0.0] * 6
    stop = 1e-14 * scale

    for _ in range(_JACOBI_MAX_SWEEPS):
        off = math.sqrt(sum(a[i][j] ** 2 for i in range(6) for j in range(i + 1, 6)))
        if off <= stop:
            break
        for p in range(5):
            for q in range(p + 1, 6):
                apq = a[p][q]
                if abs(apq) <= stop / 30.0:
                    continue
                # Classic Jacobi rotation annihilating a[p][q].
                theta = (a[q][q] - a[p][p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                for k in range(6):
                    akp, akq = a[k][p], a[k][q]
                    a[k][p] = c * akp - s * akq
                    a[k][q] = s * akp + c * akq
                for k in range(6):
                    apk, aqk = a[p][k], a[q][k]
                    a[p][k] = c * apk - s * aqk
                    a[q][k] = s * apk + c * aqk
    return sorted(a[i][i] for i in range(6))


def eigenvalues_triangular(m: Mat6, tol: float = 1e-12) -> list[float]:
    """Eigenvalues of a triangular 6x6 matrix: the diagonal, in axis order.

    Raises NotTriangularError when the matrix is neither upper- nor
    lower-triangular within tol.
    """
    if not (is_upper_triangular(m, tol) or is_lower_triangular(m, tol)):
        raise NotTriangularError("matrix is not triangular within tolerance")
    return [m[i][i] for i in range(6)]
