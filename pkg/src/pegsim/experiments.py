"""Closed-loop scenario runner and experiment presets.

A scenario descends a position command toward the plate, feeds the contact
wrench through the sensor-to-tip transform into the admittance model, and adds
the resulting displacement to the command.  Presets reproduce the induction
sweeps (press on a flat region, read the steady lateral drift) and the
peg-in-hole success grid against an RCC-style baseline.
"""

from __future__ import annotations

import concurrent.futures
import csv
import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .admittance import AdmittanceModel, AdmittanceParams
from .contact import PegHoleGeometry, _eval_contact, _phase_from_geometry, cop_arc_distance
from .errors import ConfigError
from .matcore import Vec6, diag6
from .stiffness import StiffnessMatrix, TaskDesignSpec, classify, design_task_nondiagonal, embed_yz_block

TRAJECTORY_COLUMNS = (
    "t",
    "dx", "dy", "dz", "drx", "dry", "drz",
    "fx", "fy", "fz", "tx", "ty", "tz",
    "phase",
)

# no successful validated run needs more than ~3 s; a run making no depth or
# lateral progress for a full second after this point never recovers
_STALL_START = 5.0
_STALL_WINDOW = 1.0
_STALL_TOL = 1.0e-4
_STEADY_WINDOW = 1.0


class RunStatus(enum.Enum):
    SUCCESS = "Success"
    TIMEOUT = "Timeout"
    DIVERGED = "Diverged"
    STALLED = "Stalled"


@dataclass(frozen=True)
class ScenarioConfig:
    """One closed-loop run: geometry, controller, and descent command."""

    geometry: PegHoleGeometry
    admittance: AdmittanceParams
    initial_error: tuple[float, float] = (0.0, 0.0)
    approach_speed: float = 0.01
    press_depth: float = 0.02
    start_height: float = 0.001
    duration: float = 120.0
    success_depth: float | None = None
    timeout: float = 120.0
    seed: int = 0
    divergence_bound: float = 1.0
    stall_exit: bool = False
    stick_friction: bool = True
    label: str = ""

    def __post_init__(self) -> None:
        if self.success_depth is None:
            object.__setattr__(self, "success_depth", self.geometry.r)
        if not self.duration > 0:
            raise ConfigError(f"duration must be positive, got {self.duration}")
        if not self.success_depth > 0:
            raise ConfigError(f"success_depth must be positive, got {self.success_depth}")
        if not self.press_depth > 0:
            raise ConfigError(f"press depth must be positive, got {self.press_depth}")
        if not (self.approach_speed > 0 and self.timeout > 0 and self.divergence_bound > 0):
            raise ConfigError("approach_speed, timeout, divergence_bound must be positive")


@dataclass(frozen=True)
class TrajectoryLog:
    """Decimated time series of displacement, tip wrench, and phase."""

    t: np.ndarray
    dx: np.ndarray
    wrench: np.ndarray
    phase: tuple[str, ...]
    decimate: int = 1

    def __len__(self) -> int:
        return len(self.t)

    def rows(self):
        for i in range(len(self.t)):
            yield (self.t[i], *self.dx[i], *self.wrench[i], self.phase[i])

    def write_csv(self, fh) -> None:
        w = csv.writer(fh)
        w.writerow(TRAJECTORY_COLUMNS)
        for row in self.rows():
            w.writerow([repr(float(v)) if not isinstance(v, str) else v for v in row])


@dataclass(frozen=True)
class RunSummary:
    label: str
    status: RunStatus
    success: bool
    insertion_time: float
    max_abs_wrench: float
    steady_displacement: Vec6


@dataclass(frozen=True)
class CellStats:
    cell_mm: tuple[float, float]
    successes: int
    reps: int
    mean_time: float
    spread: float


@dataclass(frozen=True)
class ExperimentReport:
    name: str
    runs: tuple[RunSummary, ...]
    cells: tuple[CellStats, ...] = ()
    rows: tuple[dict, ...] = ()
    meta: dict = field(default_factory=dict)


def run_scenario(cfg: ScenarioConfig, decimate: int = 1) -> tuple[TrajectoryLog, RunSummary]:
    """Run one scenario to completion; deterministic given the config."""
    if decimate < 1:
        raise ConfigError(f"decimate must be >= 1, got {decimate}")
    geom = cfg.geometry
    Ts = cfg.admittance.Ts
    model = AdmittanceModel(cfg.admittance)
    hole = np.asarray(geom.hole_center, dtype=float)
    cmd_xy = hole[:2] + np.asarray(cfg.initial_error, dtype=float)
    l_e = np.array([0.0, 0.0, -geom.peg_length])
    anchors = np.full((geom.n_rim, 2), np.nan) if cfg.stick_friction else None

    n_steps = int(round(cfg.duration / Ts))
    ts, dxs, ws, phases = [], [], [], []
    status = RunStatus.TIMEOUT
    insertion_time = cfg.timeout
    max_w = 0.0
    steady_sum = np.zeros(6)
    steady_n = 0
    steady_from = cfg.duration - _STEADY_WINDOW
    stall_mark_t = _STALL_START
    stall_depth = -math.inf
    stall_lat = math.inf

    cmd = np.zeros(6)
    cmd[0], cmd[1] = cmd_xy
    cmd_vel = np.zeros(6)

    for i in range(n_steps):
        t = i * Ts
        zc = cfg.start_height - cfg.approach_speed * t
        if zc <= -cfg.press_depth:
            zc = -cfg.press_depth
            cmd_vel[2] = 0.0
        else:
            cmd_vel[2] = -cfg.approach_speed
        cmd[2] = zc

        pose = cmd + model.dX
        vel = cmd_vel + model.dV
        force, torque, active, _pts, _nrm, _nf, mouth, anchors_next = _eval_contact(
            geom, pose[:3] - hole, pose[3:], vel[:3], vel[3:], anchors
        )
        if anchors_next is not None:
            anchors = anchors_next
        # measurement path: reduce the tip wrench at the sensor, then back to
        # the tip for the controller
        lever = np.cross(l_e, force)
        tau_sensor = torque + lever
        tau_tip = tau_sensor - lever
        w6 = np.concatenate([force, tau_tip])

        model.step_array(w6)

        any_contact = bool(active.any()) or mouth is not None
        w_amp = float(np.max(np.abs(w6)))
        if w_amp > max_w:
            max_w = w_amp
        if i % decimate == 0:
            ts.append(t)
            dxs.append(model.dX.copy())
            ws.append(w6)
            phases.append(_phase_from_geometry(geom, pose[:3] - hole, any_contact).value)
        if t >= steady_from:
            steady_sum += model.dX
            steady_n += 1

        if float(np.max(np.abs(model.dX))) > cfg.divergence_bound:
            status = RunStatus.DIVERGED
            break
        depth = -(cmd[2] + model.dX[2])
        if depth >= cfg.success_depth and t <= cfg.timeout:
            status = RunStatus.SUCCESS
            insertion_time = t
            break
        if cfg.stall_exit and t >= stall_mark_t:
            lat = math.hypot(cmd[0] + model.dX[0] - hole[0], cmd[1] + model.dX[1] - hole[1])
            if (depth - stall_depth) < _STALL_TOL and (stall_lat - lat) < _STALL_TOL:
                status = RunStatus.STALLED
                break
            stall_depth = depth
            stall_lat = lat
            stall_mark_t = t + _STALL_WINDOW

    steady = tuple(steady_sum / steady_n) if steady_n else tuple(model.dX)
    log = TrajectoryLog(
        t=np.asarray(ts),
        dx=np.asarray(dxs) if dxs else np.zeros((0, 6)),
        wrench=np.asarray(ws) if ws else np.zeros((0, 6)),
        phase=tuple(phases),
        decimate=decimate,
    )
    summary = RunSummary(
        label=cfg.label,
        status=status,
        success=status is RunStatus.SUCCESS,
        insertion_time=insertion_time,
        max_abs_wrench=max_w,
        steady_displacement=steady,
    )
    return log, summary


# ---------------------------------------------------------------------------
# presets

GRID_CELLS_MM = (
    (-5.0, -5.0), (-5.0, 0.0), (-5.0, 5.0),
    (0.0, -5.0), (0.0, 0.0), (0.0, 5.0),
    (5.0, -5.0), (5.0, 0.0), (5.0, 5.0),
)
JITTER_MM = 0.2
PRESS_K_DIAG: Vec6 = (500.0, 500.0, 500.0, 50.0, 50.0, 50.0)
RCC_K_DIAG: Vec6 = (500.0, 500.0, 500.0, 500.0, 500.0, 500.0)
_PRESS_OFFSET = 0.5  # m between press point and hole: keeps the plate featureless

INDUCTION_TARGETS_ASYM = (0.020, 0.030, 0.060, 0.120)
SATURATION_BLOCKS = {
    "K_d20": (0.020, ((1500.0, -1500.0), (-1500.0, 2250.0))),
    "K_d30": (0.030, ((2000.0 / 3.0, -1000.0), (-1000.0, 2250.0))),
}


def grid_geometry(diameter_mm: int, mu: float = 0.1) -> PegHoleGeometry:
    """Peg/hole pairs used in the insertion study (radial clearances 40/420 um)."""
    if diameter_mm == 30:
        return PegHoleGeometry(r=0.015, c=0.00042, mu=mu)
    if diameter_mm == 20:
        return PegHoleGeometry(r=0.010, c=0.00004, mu=mu)
    raise ConfigError(f"unsupported peg diameter {diameter_mm} mm (use 20 or 30)")


def proposed_matrix(geom: PegHoleGeometry, delta_set: float = 0.005,
                    delta_L: float = 0.02, mu_assumed: float = 0.1) -> StiffnessMatrix:
    """Coupled stiffness for the grid: CoP arm taken at 70% of the worst-case arc."""
    arm = cop_arc_distance(delta_set, geom.r, geom.hole_radius)
    spec = TaskDesignSpec(
        delta_set=delta_set,
        l_set=0.7 * arm,
        delta_L=delta_L,
        k_diag=PRESS_K_DIAG,
        mu_assumed=mu_assumed,
    )
    return design_task_nondiagonal(spec)


def rcc_matrix() -> StiffnessMatrix:
    """Position-only compliance: laterally soft, rotationally stiff, no coupling."""
    return classify(diag6(RCC_K_DIAG))


def asym_induction_matrix(target: float, k_yy: float = 500.0, k_zz: float = 750.0) -> StiffnessMatrix:
    """Upper-triangular yz-block sized so a full press drifts laterally by target."""
    f_z = 0.02 * k_zz
    c_yz = target / f_z
    k_n = -c_yz * k_yy * k_zz
    return embed_yz_block(((k_yy, k_n), (0.0, k_zz)), PRESS_K_DIAG)


def press_scenario(K: StiffnessMatrix, mu: float, duration: float = 8.0,
                   label: str = "") -> ScenarioConfig:
    """Press the peg on a flat region far from the hole and hold."""
    geom = PegHoleGeometry(r=0.015, c=0.00042, hole_center=(_PRESS_OFFSET, 0.0, 0.0), mu=mu)
    return ScenarioConfig(
        geometry=geom,
        admittance=AdmittanceParams(K=K),
        initial_error=(-_PRESS_OFFSET, 0.0),
        duration=duration,
        timeout=duration,
        label=label,
    )


def preset_induction_sweep(kind: str = "asymmetric", mu: float = 0.4,
                           duration: float = 8.0) -> ExperimentReport:
    """Steady lateral drift per stiffness design (press scenario per matrix)."""
    if kind == "asymmetric":
        entries = [(f"K_n{round(t * 1000)}", t, asym_induction_matrix(t))
                   for t in INDUCTION_TARGETS_ASYM]
    elif kind == "symmetric":
        entries = [(name, target, embed_yz_block(block, PRESS_K_DIAG))
                   for name, (target, block) in SATURATION_BLOCKS.items()]
    else:
        raise ConfigError(f"unknown induction sweep kind {kind!r}")
    runs = []
    rows = []
    for name, target, K in entries:
        _, summary = run_scenario(press_scenario(K, mu, duration, label=name), decimate=50)
        runs.append(summary)
        rows.append({
            "label": name,
            "target_m": target,
            "mu": mu,
            "steady_dy_m": summary.steady_displacement[1],
        })
    return ExperimentReport(
        name=f"induction-{kind}",
        runs=tuple(runs),
        rows=tuple(rows),
        meta={"kind": kind, "mu": mu, "duration_s": duration},
    )


def _grid_config(geom: PegHoleGeometry, K: StiffnessMatrix, cell_idx: int, rep: int,
                 seed: int, timeout: float) -> ScenarioConfig:
    cell = GRID_CELLS_MM[cell_idx]
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(cell_idx, rep))
    rng = np.random.Generator(np.random.PCG64(ss))
    jitter = rng.uniform(-JITTER_MM * 1e-3, JITTER_MM * 1e-3, 2)
    err = (cell[0] * 1e-3 + jitter[0], cell[1] * 1e-3 + jitter[1])
    return ScenarioConfig(
        geometry=geom,
        admittance=AdmittanceParams(K=K),
        initial_error=err,
        duration=timeout,
        timeout=timeout,
        seed=seed,
        stall_exit=True,
        label=f"cell({cell[0]:+.0f},{cell[1]:+.0f})mm rep{rep}",
    )


def _run_summary_only(cfg: ScenarioConfig) -> RunSummary:
    return run_scenario(cfg, decimate=100)[1]


def preset_pih_grid(diameter_mm: int = 30, matrix: str = "proposed", reps: int = 5,
                    seed: int = 0, timeout: float = 120.0, jobs: int = 1,
                    mu: float = 0.1) -> ExperimentReport:
    """Success grid over {0, +-5} mm initial errors with seeded jitter."""
    geom = grid_geometry(diameter_mm, mu=mu)
    if matrix == "proposed":
        K = proposed_matrix(geom)
    elif matrix in ("rcc", "rcc_baseline"):
        K = rcc_matrix()
    else:
        raise ConfigError(f"unknown grid matrix {matrix!r} (use proposed or rcc)")
    configs = [
        _grid_config(geom, K, cell_idx, rep, seed, timeout)
        for cell_idx in range(len(GRID_CELLS_MM))
        for rep in range(reps)
    ]
    if jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as ex:
            runs = list(ex.map(_run_summary_only, configs))
    else:
        runs = [_run_summary_only(cfg) for cfg in configs]

    cells = []
    for cell_idx, cell in enumerate(GRID_CELLS_MM):
        block = runs[cell_idx * reps:(cell_idx + 1) * reps]
        ok_times = sorted(r.insertion_time for r in block if r.success)
        cells.append(CellStats(
            cell_mm=cell,
            successes=len(ok_times),
            reps=reps,
            mean_time=float(np.mean(ok_times)) if ok_times else float("nan"),
            spread=(ok_times[-1] - ok_times[0]) if ok_times else float("nan"),
        ))
    return ExperimentReport(
        name=f"pih-grid-{diameter_mm}mm-{matrix}",
        runs=tuple(runs),
        cells=tuple(cells),
        meta={"diameter_mm": diameter_mm, "matrix": matrix, "reps": reps,
              "seed": seed, "mu": mu, "timeout_s": timeout},
    )
