"""Command-line front end.

Commands: design | check | sim | experiment.  Exit codes: 0 success,
1 usage or config problem, 2 numerical failure (divergence, singular or
infeasible matrices), 3 I/O failure.  All files are written atomically
(temp file + rename) and every run directory gets a manifest that loads
back to the exact resolved configuration.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from dataclasses import dataclass

from . import __version__
from .config import (
    dump_toml,
    format_matrix_text,
    load_scenario,
    read_matrix_text,
    scenario_to_dict,
)
from .errors import (
    ConfigError,
    DesignInfeasibleError,
    InvalidPoseError,
    NotSymmetricError,
    NotTriangularError,
    PegsimError,
    SingularMatrixError,
    WrongFrameError,
)
from .experiments import (
    ExperimentReport,
    RunStatus,
    preset_induction_sweep,
    preset_pih_grid,
    run_scenario,
)
from .matcore import eigenvalues_symmetric, invert6
from .stiffness import (
    EigenStatus,
    ShapeClass,
    TaskDesignSpec,
    check_symmetric_pd,
    check_triangular,
    classify,
    compliance,
    design_task_nondiagonal,
    hunting_width,
    predicted_induction,
)
from . import svgplot
from .contact import cop_arc_distance
from .experiments import grid_geometry

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERIC = 2
EXIT_IO = 3

_AXES = ("x", "y", "z", "rx", "ry", "rz")


@dataclass(frozen=True)
class RunManifest:
    """Everything needed to repeat a run: resolved config, seed, version."""

    command: str
    config_path: str
    seed: int
    out_dir: str
    sections: dict

    def to_toml(self) -> str:
        head = {
            "manifest": {
                "tool": "pegsim",
                "version": __version__,
                "command": self.command,
                "config_path": self.config_path,
                "seed": self.seed,
                "out_dir": self.out_dir,
            }
        }
        return dump_toml({**head, **self.sections})


def write_text_atomic(path: str, text: str) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _ensure_out(args) -> str:
    out = args.out
    os.makedirs(out, exist_ok=True)
    return out


def _parse_k_diag(text: str):
    parts = text.split(",")
    if len(parts) != 6:
        raise ConfigError(f"--k-diag needs 6 comma-separated values, got {len(parts)}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError as exc:
        raise ConfigError(f"--k-diag: {exc}") from exc


# ---------------------------------------------------------------------------
# commands

def cmd_design(args) -> int:
    out = _ensure_out(args)
    k_diag = _parse_k_diag(args.k_diag)
    if args.l_set is not None:
        l_set = args.l_set
    else:
        geom = grid_geometry(args.diameter)
        l_set = 0.7 * cop_arc_distance(args.delta_set, geom.r, geom.hole_radius)
    spec = TaskDesignSpec(
        delta_set=args.delta_set,
        l_set=l_set,
        delta_L=args.delta_l,
        k_diag=k_diag,
        mu_assumed=args.mu_assumed,
    )
    K = design_task_nondiagonal(spec)
    comments = (
        "pegsim stiffness matrix (rows x, y, z, rx, ry, rz; SI units)",
        f"shape: {K.shape_class.value}  eigen: {K.eigen_status.value}  "
        f"stable: {'yes' if K.is_stable else 'no'}",
    )
    write_text_atomic(os.path.join(out, "K.csv"), format_matrix_text(K.k, comments))
    inv_comments = ("pegsim compliance matrix (inverse of K.csv)",)
    write_text_atomic(os.path.join(out, "K_inv.csv"),
                      format_matrix_text(compliance(K), inv_comments))

    f_z = spec.delta_L * spec.k_diag[2]
    induced = predicted_induction(K, spec.delta_L, spec.mu_assumed, spec.l_set)
    width = hunting_width(K, (1.0,) * 6)
    print(f"designed {K.shape_class.value} matrix, eigen {K.eigen_status.value}")
    print(f"press force at delta_L={spec.delta_L} m: {f_z:.3f} N")
    print(f"predicted induced lateral displacement (mu={spec.mu_assumed}): {induced:.6f} m")
    print("hunting width per 1 N (or 1 N m) force error:")
    for name, w in zip(_AXES, width):
        print(f"  {name}: {w:.6g}")
    print(f"wrote {os.path.join(out, 'K.csv')} and K_inv.csv")
    return EXIT_OK


def cmd_check(args) -> int:
    try:
        with open(args.matrix, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read {args.matrix}: {exc}", file=sys.stderr)
        return EXIT_IO
    matrix, _ = read_matrix_text(text)
    K = classify(matrix)
    print(f"shape: {K.shape_class.value}")
    if K.shape_class in (ShapeClass.SYMMETRIC, ShapeClass.DIAGONAL):
        status = check_symmetric_pd(K)
        eigs = eigenvalues_symmetric(K.k)
        print("eigenvalues (symmetric path): "
              + ", ".join(f"{v:.6g}" for v in eigs))
    elif K.shape_class in (ShapeClass.UPPER_TRIANGULAR, ShapeClass.LOWER_TRIANGULAR):
        status = check_triangular(K)
        print("eigenvalues (triangular path, diagonal entries): "
              + ", ".join(f"{K.k[i][i]:.6g}" for i in range(6)))
    else:
        status = K.eigen_status
        print("eigenvalues: unverified (general shape has no closed-form rule here)")
    verdict = "PASS" if status is EigenStatus.ALL_POSITIVE else "FAIL"
    print(f"stability condition: {verdict} ({status.value})")
    return EXIT_OK


def _write_trajectory(out: str, log) -> str:
    buf = io.StringIO()
    log.write_csv(buf)
    path = os.path.join(out, "trajectory.csv")
    write_text_atomic(path, buf.getvalue())
    return path


def _trajectory_plots(out: str, log) -> None:
    t = log.t
    disp = svgplot.line_plot(
        [(f"d{name}", t, log.dx[:, i]) for i, name in enumerate(_AXES)],
        title="displacement response", xlabel="t (s)", ylabel="m | rad",
    )
    wrench = svgplot.line_plot(
        [(("f" if i < 3 else "t") + _AXES[i % 3], t, log.wrench[:, i]) for i in range(6)],
        title="tip wrench", xlabel="t (s)", ylabel="N | N m",
    )
    write_text_atomic(os.path.join(out, "displacement.svg"), disp)
    write_text_atomic(os.path.join(out, "wrench.svg"), wrench)


def cmd_sim(args) -> int:
    if not args.config:
        print("error: sim needs --config FILE", file=sys.stderr)
        return EXIT_USAGE
    cfg = load_scenario(args.config)
    out = _ensure_out(args)
    log, summary = run_scenario(cfg, decimate=args.decimate)
    _write_trajectory(out, log)
    if len(log) > 1:
        _trajectory_plots(out, log)
    manifest = RunManifest(
        command="sim", config_path=os.path.abspath(args.config),
        seed=cfg.seed, out_dir=os.path.abspath(out),
        sections=scenario_to_dict(cfg),
    )
    write_text_atomic(os.path.join(out, "manifest.toml"), manifest.to_toml())
    print(f"status: {summary.status.value}  success: {summary.success}")
    if summary.success:
        print(f"insertion time: {summary.insertion_time:.3f} s")
    print(f"max |wrench|: {summary.max_abs_wrench:.3f}")
    print("steady displacement: "
          + ", ".join(f"{v:.6g}" for v in summary.steady_displacement))
    print(f"wrote {out}")
    return EXIT_NUMERIC if summary.status is RunStatus.DIVERGED else EXIT_OK


def _runs_csv(report: ExperimentReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["label", "status", "success", "insertion_time", "max_abs_wrench"]
               + [f"steady_d{a}" for a in _AXES])
    for r in report.runs:
        w.writerow([r.label, r.status.value, r.success,
                    repr(r.insertion_time), repr(r.max_abs_wrench)]
                   + [repr(float(v)) for v in r.steady_displacement])
    return buf.getvalue()


def _summary_csv(report: ExperimentReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    if report.cells:
        w.writerow(["ex_mm", "ey_mm", "successes", "reps", "mean_time_s", "spread_s"])
        for c in report.cells:
            w.writerow([c.cell_mm[0], c.cell_mm[1], c.successes, c.reps,
                        repr(c.mean_time), repr(c.spread)])
    else:
        w.writerow(["label", "target_m", "mu", "steady_dy_m"])
        for row in report.rows:
            w.writerow([row["label"], repr(row["target_m"]), repr(row["mu"]),
                        repr(row["steady_dy_m"])])
    return buf.getvalue()


def _summary_svg(report: ExperimentReport) -> str:
    if report.cells:
        return svgplot.grid_map(
            [(c.cell_mm, c.successes, c.reps) for c in report.cells],
            title=report.name,
        )
    return svgplot.bar_chart(
        [row["label"] for row in report.rows],
        [row["steady_dy_m"] for row in report.rows],
        title=report.name, ylabel="steady lateral displacement (m)",
    )


def cmd_experiment(args) -> int:
    out = _ensure_out(args)
    preset = args.preset
    if preset in ("induction-asym", "induction-sym"):
        kind = "asymmetric" if preset.endswith("asym") else "symmetric"
        mu = args.mu if args.mu is not None else 0.4
        report = preset_induction_sweep(kind=kind, mu=mu)
    else:
        diameter = 30 if preset.endswith("30mm") else 20
        mu = args.mu if args.mu is not None else 0.1
        report = preset_pih_grid(
            diameter_mm=diameter, matrix=args.matrix, reps=args.reps,
            seed=args.seed, timeout=args.timeout, jobs=args.jobs, mu=mu,
        )
    write_text_atomic(os.path.join(out, "runs.csv"), _runs_csv(report))
    write_text_atomic(os.path.join(out, "summary.csv"), _summary_csv(report))
    write_text_atomic(os.path.join(out, "summary.svg"), _summary_svg(report))
    manifest = RunManifest(
        command="experiment", config_path=preset, seed=args.seed,
        out_dir=os.path.abspath(out),
        sections={"experiment": {k: v for k, v in report.meta.items()}},
    )
    write_text_atomic(os.path.join(out, "manifest.toml"), manifest.to_toml())

    print(f"experiment: {report.name}")
    if report.cells:
        total_ok = sum(c.successes for c in report.cells)
        total = sum(c.reps for c in report.cells)
        for c in report.cells:
            mean = f"{c.mean_time:.2f}" if c.successes else "-"
            print(f"  cell ({c.cell_mm[0]:+.0f},{c.cell_mm[1]:+.0f}) mm: "
                  f"{c.successes}/{c.reps} ok, mean time {mean} s")
        print(f"  total: {total_ok}/{total}")
    else:
        for row in report.rows:
            print(f"  {row['label']}: target {row['target_m']:.3f} m -> "
                  f"steady {row['steady_dy_m']:.4f} m (mu={row['mu']})")
    print(f"wrote {out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser and dispatch

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pegsim",
        description="Stiffness-matrix design and admittance-control "
                    "peg-in-hole simulation workbench.",
    )
    parser.add_argument("--version", action="version", version=f"pegsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="scenario TOML file")
    common.add_argument("--out", default="pegsim-out", help="output directory")
    common.add_argument("--seed", type=int, default=0, help="base random seed")
    common.add_argument("--jobs", type=int, default=1, help="parallel workers")
    common.add_argument("--decimate", type=int, default=1,
                        help="keep every Nth trajectory sample")

    p_design = sub.add_parser("design", parents=[common],
                              help="design a coupled stiffness matrix")
    p_design.add_argument("--delta-set", type=float, default=0.005,
                          help="largest lateral error to correct (m)")
    p_design.add_argument("--l-set", type=float, default=None,
                          help="assumed contact lever arm (m); derived from "
                               "--diameter when omitted")
    p_design.add_argument("--delta-l", type=float, default=0.02,
                          help="press depth below the surface (m)")
    p_design.add_argument("--k-diag", default="500,500,500,50,50,50",
                          help="six diagonal stiffnesses, comma separated")
    p_design.add_argument("--mu-assumed", type=float, default=0.0,
                          help="friction coefficient compensated at design time")
    p_design.add_argument("--diameter", type=int, choices=(20, 30), default=30,
                          help="peg diameter (mm) used to derive --l-set")
    p_design.set_defaults(func=cmd_design)

    p_check = sub.add_parser("check", parents=[common],
                             help="classify a matrix file and check stability")
    p_check.add_argument("matrix", help="matrix CSV file to check")
    p_check.set_defaults(func=cmd_check)

    p_sim = sub.add_parser("sim", parents=[common],
                           help="run one scenario from a config file")
    p_sim.set_defaults(func=cmd_sim)

    p_exp = sub.add_parser("experiment", parents=[common],
                           help="run a named experiment preset")
    p_exp.add_argument("preset", choices=("induction-asym", "induction-sym",
                                          "pih-grid-30mm", "pih-grid-20mm"))
    p_exp.add_argument("--matrix", choices=("proposed", "rcc"), default="proposed",
                       help="stiffness used by grid presets")
    p_exp.add_argument("--reps", type=int, default=5, help="repetitions per cell")
    p_exp.add_argument("--mu", type=float, default=None,
                       help="friction coefficient (preset default when omitted)")
    p_exp.add_argument("--timeout", type=float, default=120.0,
                       help="per-run time limit (simulated s)")
    p_exp.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except (ConfigError, DesignInfeasibleError, NotSymmetricError,
            NotTriangularError, WrongFrameError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SingularMatrixError, InvalidPoseError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return EXIT_IO
    except PegsimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
