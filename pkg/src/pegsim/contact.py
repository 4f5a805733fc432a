"""Penalty-based peg-in-hole contact model.

The plate occupies z < 0 except for a circular hole of radius r + c around
hole_center; the peg is a rigid cylinder whose bottom rim is discretized into
n_rim points.  Each rim point inside plate material is pushed out along its
shortest escape direction: up through the surface, or radially inward through
the hole wall.  Choosing the shorter escape is what lets a peg corner slip
over the hole edge instead of riding across it.  A separate station handles
the hole-mouth edge pressing against the peg side once the side is submerged.

Friction is Coulomb with tanh regularization.  The stateless form cannot hold
a standing load (any velocity law passes zero force at rest), so surface
points optionally carry tangential anchor springs capped at mu*N; threading
the returned StickState through successive calls gives true stick-slip.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .admittance import Frame, Wrench
from .errors import ConfigError, InvalidPoseError
from .matcore import Vec3, Vec6


class Phase(enum.Enum):
    FREE = "Free"
    SEARCH = "Search"
    INSERTION = "Insertion"


@dataclass(frozen=True)
class PegHoleGeometry:
    """Peg/hole pairing plus contact-law constants (SI units)."""

    r: float
    c: float
    hole_center: Vec3 = (0.0, 0.0, 0.0)
    peg_length: float = 0.05
    mu: float = 0.1
    # the admittance loop's measured-wrench low-pass tolerates only a limited
    # environment stiffness (~6.6e4 at the default controller gains); 3e4
    # keeps even a two-wall pinch inside that ceiling
    contact_stiffness: float = 3.0e4
    contact_damping: float = 1.0e3
    n_rim: int = 64
    v_eps: float = 1.0e-4

    def __post_init__(self) -> None:
        if not (self.r > 0 and self.c > 0 and self.peg_length > 0):
            raise ConfigError(f"peg dimensions must be positive: r={self.r} c={self.c}")
        if self.mu < 0:
            raise ConfigError(f"friction coefficient must be >= 0, got {self.mu}")
        if not (self.contact_stiffness > 0 and self.contact_damping >= 0):
            raise ConfigError("contact stiffness must be > 0 and damping >= 0")
        if self.n_rim < 4 or self.n_rim % 2:
            raise ConfigError(f"rim discretization must be even and >= 4: {self.n_rim}")
        if abs(self.hole_center[2]) > 1e-12:
            raise ConfigError("hole_center must lie on the plate surface z=0")

    @property
    def hole_radius(self) -> float:
        return self.r + self.c


@dataclass(frozen=True)
class PegPose:
    """Peg tip position, small-angle orientation, and tip twist."""

    tip_position: Vec3
    orientation: Vec3 = (0.0, 0.0, 0.0)
    tip_velocity: Vec6 = (0.0,) * 6

    def __post_init__(self) -> None:
        vals = (*self.tip_position, *self.orientation, *self.tip_velocity)
        if not all(math.isfinite(v) for v in vals):
            raise InvalidPoseError("pose contains non-finite values")
        if math.sqrt(sum(a * a for a in self.orientation)) >= 0.3:
            raise InvalidPoseError(
                f"orientation {self.orientation} outside small-angle range (|r| < 0.3)"
            )


@dataclass(frozen=True)
class ContactPoint:
    position: Vec3
    normal: Vec3
    normal_force: float


@dataclass(frozen=True)
class StickState:
    """Tangential anchor positions per rim point; NaN rows are unanchored."""

    anchors: np.ndarray

    @staticmethod
    def fresh(n_rim: int) -> "StickState":
        return StickState(anchors=np.full((n_rim, 2), np.nan))


@dataclass(frozen=True)
class ContactResult:
    wrench: Wrench
    phase: Phase
    contact_points: tuple[ContactPoint, ...]
    stick: StickState | None = None


@lru_cache(maxsize=32)
def _rim_table(r: float, n: int) -> np.ndarray:
    # built half-and-mirrored so point n-k is the exact reflection of point k,
    # which the mirror-symmetry reduction below relies on
    phis = 2.0 * np.pi * np.arange(n // 2 + 1) / n
    x = r * np.cos(phis)
    y = r * np.sin(phis)
    y[0] = 0.0
    y[n // 2] = 0.0
    rim = np.zeros((n, 3))
    rim[: n // 2 + 1, 0] = x
    rim[: n // 2 + 1, 1] = y
    rim[n // 2 + 1 :, 0] = x[n // 2 - 1 : 0 : -1]
    rim[n // 2 + 1 :, 1] = -y[n // 2 - 1 : 0 : -1]
    rim.setflags(write=False)
    return rim


def _mirror_safe_sum(arr: np.ndarray) -> np.ndarray:
    """Reduce per-rim-point rows so a mirrored configuration negates exactly.

    Pairing index k with n-k aligns mirror-image contributions at the same
    slot before the reduction, making the total independent of which of the
    two mirrored configurations was evaluated.
    """
    if len(arr) == 1:
        return arr[0].copy()
    return arr[0] + 0.5 * np.sum(arr[1:] + arr[:0:-1], axis=0)


def _eval_contact(
    geom: PegHoleGeometry,
    tip: np.ndarray,
    theta: np.ndarray,
    v_lin: np.ndarray,
    omega: np.ndarray,
    anchors: np.ndarray | None,
):
    """Core contact evaluation on numpy arrays.

    Returns (force3, torque3, points_mask, points, normals, normal_forces,
    new_anchors).  Torque is about the peg tip.
    """
    n = geom.n_rim
    R = geom.hole_radius
    kpt = geom.contact_stiffness / n
    dpt = geom.contact_damping / n
    mu = geom.mu
    veps = geom.v_eps

    rim = _rim_table(geom.r, n)
    pts = tip + rim + np.cross(np.broadcast_to(theta, (n, 3)), rim)
    vts = v_lin + np.cross(np.broadcast_to(omega, (n, 3)), rim)

    rho = np.hypot(pts[:, 0], pts[:, 1])
    up_dist = -pts[:, 2]
    in_dist = rho - R
    in_material = (pts[:, 2] < 0.0) & (rho > R)
    vert = in_material & (up_dist <= in_dist)
    lat = in_material & ~vert

    forces = np.zeros((n, 3))
    normals = np.zeros((n, 3))
    nf = np.zeros(n)
    new_anchors = None

    # surface branch: escape up through z=0; damping is penetration-limited
    # (never exceeds the elastic term) so touchdown cannot spike the force
    nf_v = np.where(
        vert, np.clip(kpt * up_dist + dpt * (-vts[:, 2]), 0.0, 2.0 * kpt * up_dist), 0.0
    )
    if anchors is None:
        spd = np.hypot(vts[:, 0], vts[:, 1])
        safe = np.where(spd == 0.0, 1.0, spd)
        scale = -mu * nf_v * np.tanh(spd / veps) / safe
        ft = vts[:, :2] * scale[:, None]
    else:
        a = anchors.copy()
        fresh = vert & np.isnan(a[:, 0])
        a[fresh] = pts[fresh, :2]
        ft = np.where(vert[:, None], -kpt * (pts[:, :2] - a) - dpt * vts[:, :2], 0.0)
        mag = np.hypot(ft[:, 0], ft[:, 1])
        cap = mu * nf_v
        over = vert & (mag > cap)
        scale = np.where(over, cap / np.where(mag == 0.0, 1.0, mag), 1.0)
        ft = ft * scale[:, None]
        slid = pts[:, :2] + ft / kpt
        a = np.where(over[:, None], slid, a)
        a[~vert] = np.nan
        new_anchors = a
    forces[:, 0] += np.where(vert, ft[:, 0], 0.0)
    forces[:, 1] += np.where(vert, ft[:, 1], 0.0)
    forces[:, 2] += nf_v
    normals[vert] = (0.0, 0.0, 1.0)
    nf += nf_v

    # wall branch: escape radially inward into the hole
    if lat.any():
        safe_rho = np.where(rho == 0.0, 1.0, rho)
        nrm = np.zeros((n, 3))
        nrm[:, 0] = -pts[:, 0] / safe_rho
        nrm[:, 1] = -pts[:, 1] / safe_rho
        pen_rate = -(vts[:, 0] * nrm[:, 0] + vts[:, 1] * nrm[:, 1])
        nf_l = np.where(
            lat, np.clip(kpt * in_dist + dpt * pen_rate, 0.0, 2.0 * kpt * in_dist), 0.0
        )
        vn = (vts * nrm).sum(axis=1)
        vt3 = vts - vn[:, None] * nrm
        spd = np.linalg.norm(vt3, axis=1)
        safe = np.where(spd == 0.0, 1.0, spd)
        fr3 = vt3 * (-mu * nf_l * np.tanh(spd / veps) / safe)[:, None]
        add = nrm * nf_l[:, None] + np.where(lat[:, None], fr3, 0.0)
        forces += add
        normals[lat] = nrm[lat]
        nf = np.where(lat, nf_l, nf)

    torques = np.cross(pts - tip, forces)
    force = _mirror_safe_sum(forces)
    torque = _mirror_safe_sum(torques)

    # hole-mouth edge against the peg side: engages only once the side at the
    # wall azimuth is submerged deeper than the horizontal overlap, otherwise
    # the rim field owns the interaction
    mouth = None
    if tip[2] < 0.0:
        axis = np.array([theta[1], -theta[0], 1.0])
        q = tip + axis * (-tip[2])
        d = math.hypot(q[0], q[1])
        ov = d - geom.c
        if ov > 0.0 and d < R:
            nd = np.array([-q[0] / d, -q[1] / d, 0.0])
            z_face = tip[2] + theta[0] * (geom.r * (-nd[1])) - theta[1] * (geom.r * (-nd[0]))
            if -z_face > ov:
                vq = v_lin + np.cross(omega, q - tip)
                ov_rate = vq[0] * (q[0] / d) + vq[1] * (q[1] / d)
                elastic = geom.contact_stiffness * ov
                nf_m = min(max(elastic + geom.contact_damping * ov_rate, 0.0), 2.0 * elastic)
                if nf_m > 0.0:
                    fn = nd * nf_m
                    vt3 = vq - (vq @ nd) * nd
                    spd = float(np.linalg.norm(vt3))
                    ff = -mu * nf_m * math.tanh(spd / veps) * (vt3 / spd) if spd > 0 else np.zeros(3)
                    cp = q - nd * geom.r
                    cp[2] = 0.0
                    force = force + fn + ff
                    torque = torque + np.cross(cp - tip, fn + ff)
                    mouth = (cp, nd, nf_m)

    active = nf > 0.0
    return force, torque, active, pts, normals, nf, mouth, new_anchors


def _phase_from_geometry(geom: PegHoleGeometry, tip: np.ndarray, any_contact: bool) -> Phase:
    if not any_contact:
        return Phase.FREE
    rho_tip = math.hypot(tip[0], tip[1])
    if tip[2] < 0.0 and rho_tip < geom.hole_radius:
        return Phase.INSERTION
    return Phase.SEARCH


def contact_wrench(
    geom: PegHoleGeometry, pose: PegPose, stick: StickState | None = None
) -> ContactResult:
    """Wrench the environment exerts on the peg, expressed at the peg tip.

    Stateless when stick is None; passing the previous result's stick state
    enables tangential anchoring so surface friction can hold a standing load.
    """
    tip = np.asarray(pose.tip_position, dtype=float) - np.asarray(geom.hole_center, dtype=float)
    theta = np.asarray(pose.orientation, dtype=float)
    v_lin = np.asarray(pose.tip_velocity[:3], dtype=float)
    omega = np.asarray(pose.tip_velocity[3:], dtype=float)
    anchors = stick.anchors if stick is not None else None

    force, torque, active, pts, normals, nf, mouth, new_anchors = _eval_contact(
        geom, tip, theta, v_lin, omega, anchors
    )

    hc = np.asarray(geom.hole_center, dtype=float)
    points = [
        ContactPoint(
            position=tuple(pts[i] + hc),
            normal=tuple(normals[i]),
            normal_force=float(nf[i]),
        )
        for i in np.nonzero(active)[0]
    ]
    if mouth is not None:
        cp, nd, nf_m = mouth
        points.append(
            ContactPoint(position=tuple(cp + hc), normal=tuple(nd), normal_force=float(nf_m))
        )

    phase = _phase_from_geometry(geom, tip, bool(points))
    w = Wrench(f=tuple(force), tau=tuple(torque), frame=Frame.PEG_TIP)
    out_stick = StickState(anchors=new_anchors) if new_anchors is not None else None
    return ContactResult(wrench=w, phase=phase, contact_points=tuple(points), stick=out_stick)


def classify_phase(
    geom: PegHoleGeometry,
    pose: PegPose,
    wrench: Wrench,
    prev: Phase | None = None,
) -> Phase:
    """Phase label from pose and measured wrench alone.

    Contact presence is judged by wrench magnitude against a threshold with a
    hysteresis band; pass the previous phase to enable the band.
    """
    f_mag = math.sqrt(sum(v * v for v in wrench.f))
    t_mag = math.sqrt(sum(v * v for v in wrench.tau))
    mag = f_mag + t_mag / max(geom.r, 1e-9)
    f_thresh = 0.1
    if prev is not None and prev is not Phase.FREE:
        thresh = 0.5 * f_thresh
    else:
        thresh = f_thresh
    if mag <= thresh:
        return Phase.FREE
    tip = np.asarray(pose.tip_position, dtype=float) - np.asarray(geom.hole_center, dtype=float)
    return _phase_from_geometry(geom, tip, True)


def cop_arc_distance(delta: float, r: float, hole_radius: float) -> float:
    """Moment arm of the supported-rim pressure centroid at lateral offset delta.

    When the peg overhangs the hole by delta, the rim arc still on the plate
    spans |phi| <= phi* with cos(phi*) = (r^2 + d^2 - R^2) / (2 r d); the
    centroid of that arc sits r*sin(phi*)/(pi - phi*) from the peg axis.
    Returns 0 when the circles do not intersect (no overhang or full drop).
    """
    if delta <= 0.0:
        return 0.0
    u = (r * r + delta * delta - hole_radius * hole_radius) / (2.0 * r * delta)
    if abs(u) >= 1.0:
        return 0.0
    phi = math.acos(u)
    return r * math.sin(phi) / (math.pi - phi)
