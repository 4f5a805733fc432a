"""Discrete-time 6-DOF task-space admittance model.

The model turns a measured wrench F into a position-command displacement
dX through the virtual dynamics

    F = M*ddX + D*dX' + K*dX

integrated with semi-implicit Euler at a fixed sampling time.  M and D are
diagonal; K is a full stiffness matrix.  The measured wrench is low-pass
filtered before use.  Rotations are small-angle increment vectors.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import matcore
from .errors import ConfigError, WrongFrameError
from .matcore import Vec3, Vec6
from .stiffness import StiffnessMatrix

MAX_ROTATION = 0.3  # rad; beyond this the small-angle representation is invalid


class Frame(enum.Enum):
    SENSOR = "Sensor"
    PEG_TIP = "PegTip"


@dataclass(frozen=True)
class Wrench:
    """Force and moment, tagged with the frame they are expressed in."""

    f: Vec3
    tau: Vec3
    frame: Frame = Frame.PEG_TIP

    def as_vec6(self) -> Vec6:
        return tuple(self.f) + tuple(self.tau)  # type: ignore[return-value]


def wrench_to_tip(w: Wrench, l_e: Vec3) -> Wrench:
    """Re-express a sensor-frame wrench at the peg tip.

    l_e is the lever from the sensor origin to the tip.  Forces carry over
    unchanged; the moment sheds the lever contribution: tau_tip = tau - l_e x f.
    """
    if w.frame is not Frame.SENSOR:
        raise WrongFrameError(f"expected Sensor frame, got {w.frame.value}")
    lever = matcore.cross3(l_e, w.f)
    tau = (w.tau[0] - lever[0], w.tau[1] - lever[1], w.tau[2] - lever[2])
    return Wrench(f=w.f, tau=tau, frame=Frame.PEG_TIP)


def tip_to_sensor(w: Wrench, l_e: Vec3) -> Wrench:
    """Inverse of wrench_to_tip: tau_sensor = tau_tip + l_e x f."""
    if w.frame is not Frame.PEG_TIP:
        raise WrongFrameError(f"expected PegTip frame, got {w.frame.value}")
    lever = matcore.cross3(l_e, w.f)
    tau = (w.tau[0] + lever[0], w.tau[1] + lever[1], w.tau[2] + lever[2])
    return Wrench(f=w.f, tau=tau, frame=Frame.SENSOR)


@dataclass(frozen=True)
class AdmittanceParams:
    """Virtual mass/damping/stiffness and sampling settings."""

    K: StiffnessMatrix
    M: Vec6 = (1.0, 1.0, 1.0, 1.0, 1.0, 1.0)
    D: Vec6 = (50.0, 50.0, 50.0, 5.0, 5.0, 5.0)
    Ts: float = 0.001
    force_filter_cutoff: float = 1.5

    def __post_init__(self) -> None:
        if any(m <= 0 for m in self.M):
            raise ConfigError(f"mass must be positive, got {self.M}")
        if any(d < 0 for d in self.D):
            raise ConfigError(f"damping must be >= 0, got {self.D}")
        if not self.Ts > 0:
            raise ConfigError(f"sampling time must be positive, got {self.Ts}")


_ZERO6: Vec6 = (0.0,) * 6


@dataclass(frozen=True)
class AdmittanceState:
    """Displacement, velocity, acceleration, and the wrench-filter memory."""

    dX: Vec6 = _ZERO6
    dXdot: Vec6 = _ZERO6
    dXddot: Vec6 = _ZERO6
    w_filt: Vec6 = _ZERO6


class AdmittanceModel:
    """Mutable stepping engine behind the pure step() function.

    Keeps the parameter arrays and state as numpy buffers so tight loops can
    step at kilohertz rates without per-step conversion.
    """

    def __init__(self, params: AdmittanceParams, state: AdmittanceState | None = None):
        self.params = params
        self._M = np.asarray(params.M, dtype=float)
        self._D = np.asarray(params.D, dtype=float)
        self._K = np.asarray(params.K.k, dtype=float)
        self._Ts = params.Ts
        fc = params.force_filter_cutoff
        self._alpha = 1.0 - math.exp(-2.0 * math.pi * fc * params.Ts) if fc > 0 else 1.0
        state = state or AdmittanceState()
        self.dX = np.asarray(state.dX, dtype=float).copy()
        self.dV = np.asarray(state.dXdot, dtype=float).copy()
        self.acc = np.asarray(state.dXddot, dtype=float).copy()
        self.w_filt = np.asarray(state.w_filt, dtype=float).copy()

    def step_array(self, wrench6: np.ndarray) -> None:
        """One semi-implicit Euler step driven by a tip wrench (length-6 array)."""
        self.w_filt += self._alpha * (wrench6 - self.w_filt)
        self.acc = (self.w_filt - self._D * self.dV - self._K @ self.dX) / self._M
        self.dV += self._Ts * self.acc
        self.dX += self._Ts * self.dV

    def snapshot(self) -> AdmittanceState:
        return AdmittanceState(
            dX=tuple(self.dX),
            dXdot=tuple(self.dV),
            dXddot=tuple(self.acc),
            w_filt=tuple(self.w_filt),
        )


def step(params: AdmittanceParams, state: AdmittanceState, w: Wrench) -> AdmittanceState:
    """Advance the admittance state by one sampling period under wrench w."""
    if w.frame is not Frame.PEG_TIP:
        raise WrongFrameError(f"expected PegTip frame, got {w.frame.value}")
    model = AdmittanceModel(params, state)
    model.step_array(np.asarray(w.as_vec6(), dtype=float))
    return model.snapshot()


def steady_state(params: AdmittanceParams, w: Wrench) -> Vec6:
    """Static displacement K^-1 F the model converges to under a constant wrench."""
    comp = matcore.invert6(params.K.k)
    return matcore.mat_vec(comp, w.as_vec6())
