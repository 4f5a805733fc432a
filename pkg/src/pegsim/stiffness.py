"""Stiffness matrix construction, classification, and stability checks.

Axis order everywhere is (x, y, z, rx, ry, rz).  A stiffness matrix maps a
6-DOF displacement to a wrench; its inverse (the compliance) maps a wrench
to a displacement.  Off-diagonal compliance entries are the design handle:
they let a pressing force or contact moment on one axis induce motion on
another.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

from . import matcore
from .errors import DesignInfeasibleError, NotSymmetricError, NotTriangularError
from .matcore import Mat6, Vec6

# Index aliases for readability: translations then rotations.
_X, _Y, _Z, _RX, _RY, _RZ = range(6)

SHAPE_TOL = 1e-12


class ShapeClass(enum.Enum):
    DIAGONAL = "Diagonal"
    SYMMETRIC = "Symmetric"
    UPPER_TRIANGULAR = "UpperTriangular"
    LOWER_TRIANGULAR = "LowerTriangular"
    GENERAL = "General"


class EigenStatus(enum.Enum):
    ALL_POSITIVE = "AllPositive"
    HAS_ZERO = "HasZero"
    HAS_NEGATIVE = "HasNegative"
    UNVERIFIED = "Unverified"


@dataclass(frozen=True)
class StiffnessMatrix:
    """A 6x6 stiffness matrix with its shape and eigen classification."""

    k: Mat6
    shape_class: ShapeClass
    eigen_status: EigenStatus

    @property
    def is_stable(self) -> bool:
        return self.eigen_status is EigenStatus.ALL_POSITIVE


@dataclass(frozen=True)
class TaskDesignSpec:
    """Inputs for the non-diagonal task designer.

    delta_set is the largest lateral placement error the design must
    correct, l_set the center-of-pressure lever arm assumed at that error,
    delta_L the press-command depth below the surface, and k_diag the
    diagonal stiffness kept on all six axes.  mu_assumed > 0 strengthens
    the coupling to compensate for sliding friction at design time.
    """

    delta_set: float
    l_set: float
    delta_L: float
    k_diag: Vec6 = (500.0, 500.0, 500.0, 50.0, 50.0, 50.0)
    mu_assumed: float = 0.0

    def validate(self) -> None:
        if not self.delta_L > 0:
            raise DesignInfeasibleError(f"delta_L must be positive, got {self.delta_L}")
        if not self.l_set > 0:
            raise DesignInfeasibleError(f"l_set must be positive, got {self.l_set}")
        if self.delta_set < 0:
            raise DesignInfeasibleError(f"delta_set must be >= 0, got {self.delta_set}")
        if self.mu_assumed < 0:
            raise DesignInfeasibleError(f"mu_assumed must be >= 0, got {self.mu_assumed}")
        if any(k <= 0 for k in self.k_diag):
            raise DesignInfeasibleError(f"k_diag must be positive, got {self.k_diag}")


def classify(k: Sequence[Sequence[float]]) -> StiffnessMatrix:
    """Build a StiffnessMatrix with shape and eigen status derived from entries."""
    m = matcore.mat6(k)
    upper = matcore.is_upper_triangular(m, SHAPE_TOL)
    lower = matcore.is_lower_triangular(m, SHAPE_TOL)
    if upper and lower:
        shape = ShapeClass.DIAGONAL
    elif matcore.is_symmetric(m, SHAPE_TOL):
        shape = ShapeClass.SYMMETRIC
    elif upper:
        shape = ShapeClass.UPPER_TRIANGULAR
    elif lower:
        shape = ShapeClass.LOWER_TRIANGULAR
    else:
        shape = ShapeClass.GENERAL

    if shape is ShapeClass.GENERAL:
        status = EigenStatus.UNVERIFIED
    elif shape is ShapeClass.SYMMETRIC:
        status = _status_from_values(matcore.eigenvalues_symmetric(m), _zero_eps(m))
    else:
        # Diagonal or triangular: the spectrum is the diagonal itself.
        status = _status_from_values([m[i][i] for i in range(6)], _zero_eps(m))
    return StiffnessMatrix(k=m, shape_class=shape, eigen_status=status)


def _zero_eps(m: Mat6) -> float:
    return 1e-9 * matcore.max_abs(m)


def _status_from_values(values: Sequence[float], eps: float) -> EigenStatus:
    low = min(values)
    if low > eps:
        return EigenStatus.ALL_POSITIVE
    if any(v < -eps for v in values):
        return EigenStatus.HAS_NEGATIVE
    return EigenStatus.HAS_ZERO


def check_symmetric_pd(k: StiffnessMatrix) -> EigenStatus:
    """Eigen status of a symmetric (or diagonal) stiffness matrix.

    AllPositive exactly when the smallest eigenvalue exceeds 1e-9 times the
    largest entry magnitude; a smallest eigenvalue within that band reports
    HasZero, anything below reports HasNegative.
    """
    if k.shape_class not in (ShapeClass.SYMMETRIC, ShapeClass.DIAGONAL):
        raise NotSymmetricError(f"shape {k.shape_class.value} is not symmetric")
    return _status_from_values(matcore.eigenvalues_symmetric(k.k), _zero_eps(k.k))


def check_triangular(k: StiffnessMatrix) -> EigenStatus:
    """Eigen status of a triangular (or diagonal) stiffness matrix.

    The spectrum of a triangular matrix is its diagonal, so stability needs
    every diagonal entry positive; off-diagonal entries are unconstrained.
    """
    if k.shape_class not in (
        ShapeClass.UPPER_TRIANGULAR,
        ShapeClass.LOWER_TRIANGULAR,
        ShapeClass.DIAGONAL,
    ):
        raise NotTriangularError(f"shape {k.shape_class.value} is not triangular")
    diag = [k.k[i][i] for i in range(6)]
    return _status_from_values(diag, _zero_eps(k.k))


def design_task_nondiagonal(spec: TaskDesignSpec) -> StiffnessMatrix:
    """Design an upper-triangular stiffness matrix that funnels a pressed peg
    toward a hole.

    The compliance is diagonal (1/k_diag) except for two moment couplings:

      y <- tau_x entry  -delta_set*c_zz/(l_set*delta_L) - mu_assumed*c_yy/l_set
      x <- tau_y entry  +(same magnitude)

    A hole offset toward +y biases the supported rim arc toward -y, so a
    pressing contact yields tau_x < 0; the negative y<-tau_x compliance then
    displaces the peg toward +y, i.e. toward the hole.  The cross product
    behind the moment flips sign between the two lateral axes (a hole toward
    +x yields tau_y > 0), hence the opposite sign on x<-tau_y.

    The coupling magnitude makes the induced displacement equal delta_set
    when the moment arm is l_set and the press force is delta_L/c_zz.
    """
    spec.validate()
    comp = [[0.0] * 6 for _ in range(6)]
    for i in range(6):
        comp[i][i] = 1.0 / spec.k_diag[i]
    c_yy = comp[_Y][_Y]
    c_zz = comp[_Z][_Z]
    v = spec.delta_set * c_zz / (spec.l_set * spec.delta_L) + spec.mu_assumed * c_yy / spec.l_set
    comp[_Y][_RX] = -v
    comp[_X][_RY] = +v

    k = matcore.invert6(matcore.mat6(comp))
    # Inverting the exactly-triangular compliance leaves float dust below the
    # diagonal; snap it so classification sees the intended shape.
    scale = matcore.max_abs(k)
    k = matcore.mat6(
        [[0.0 if abs(v) <= 1e-9 * scale else v for v in row] for row in k]
    )
    designed = classify(k)
    if designed.eigen_status is not EigenStatus.ALL_POSITIVE:
        raise DesignInfeasibleError("designed matrix has a non-positive diagonal")
    return designed


def compliance(k: StiffnessMatrix) -> Mat6:
    return matcore.invert6(k.k)


def predicted_induction(
    k: StiffnessMatrix, delta_L: float, mu: float, l: float
) -> float:
    """Predicted steady lateral deviation of a peg pressed delta_L below a
    surface, before any hole is found.

    Two compliance routes contribute: the direct force coupling c_y,z acting
    on the press force, and the moment coupling c_y,rx acting on the moment
    generated at lever arm l.  Sliding friction mu shrinks the deviation
    magnitude toward zero (it can never reverse the direction).
    """
    comp = compliance(k)
    f_z = delta_L / comp[_Z][_Z]
    couple = (comp[_Y][_Z] + l * comp[_Y][_RX]) * f_z
    friction_loss = mu * comp[_Y][_Y] * abs(f_z)
    if friction_loss >= abs(couple):
        return 0.0
    return couple - math.copysign(friction_loss, couple)


def hunting_width(k: StiffnessMatrix, max_force_error) -> Vec6:
    """Componentwise upper bound of contact-chatter oscillation width.

    max_force_error may be a Wrench or any 6-sequence of force/moment error
    magnitudes; the bound is |compliance| times |error| per component.
    """
    if hasattr(max_force_error, "f") and hasattr(max_force_error, "tau"):
        err = tuple(max_force_error.f) + tuple(max_force_error.tau)
    else:
        err = tuple(max_force_error)
    err = matcore.vec6([abs(e) for e in err])
    comp = compliance(k)
    return tuple(
        sum(abs(comp[i][j]) * err[j] for j in range(6)) for i in range(6)
    )  # type: ignore[return-value]


def embed_yz_block(block: Sequence[Sequence[float]], k_diag: Vec6 = (500.0, 500.0, 500.0, 50.0, 50.0, 50.0)) -> StiffnessMatrix:
    """Place a 2x2 stiffness block on the (y, z) axes of a diagonal matrix.

    This is the planar press arrangement: the block's off-diagonal couples
    the vertical press force into lateral y motion directly, with no moment
    involved.
    """
    if len(block) != 2 or any(len(r) != 2 for r in block):
        raise ValueError("yz block must be 2x2")
    rows = [[k_diag[i] if i == j else 0.0 for j in range(6)] for i in range(6)]
    rows[_Y][_Y] = float(block[0][0])
    rows[_Y][_Z] = float(block[0][1])
    rows[_Z][_Y] = float(block[1][0])
    rows[_Z][_Z] = float(block[1][1])
    return classify(rows)
