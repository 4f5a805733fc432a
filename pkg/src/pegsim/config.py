"""Config file handling: TOML scenario files and matrix CSV files.

A scenario file has sections [geometry], [admittance], [stiffness], and
[scenario].  The stiffness section gives the matrix one of four ways: a CSV
``file`` path, a ``diag`` list, explicit ``rows``, or a nested ``design``
table fed to the task designer.  ``dump_scenario_toml`` writes a resolved
snapshot that loads back to an identical config, which is what run manifests
store.
"""

from __future__ import annotations

import os
from dataclasses import asdict

try:
    import tomllib as _toml
except ImportError:  # Python < 3.11
    import tomli as _toml

from .admittance import AdmittanceParams
from .contact import PegHoleGeometry
from .errors import ConfigError
from .experiments import ScenarioConfig
from .matcore import Mat6, diag6
from .stiffness import StiffnessMatrix, TaskDesignSpec, classify, design_task_nondiagonal

_GEOMETRY_KEYS = {
    "r", "c", "hole_center", "peg_length", "mu",
    "contact_stiffness", "contact_damping", "n_rim", "v_eps",
}
_ADMITTANCE_KEYS = {"M", "D", "Ts", "force_filter_cutoff"}
_SCENARIO_KEYS = {
    "initial_error", "approach_speed", "press_depth", "start_height",
    "duration", "success_depth", "timeout", "seed", "divergence_bound",
    "stall_exit", "stick_friction", "label",
}


def parse_toml(text: str) -> dict:
    try:
        return _toml.loads(text)
    except _toml.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML: {exc}") from exc


def _check_keys(section: str, table: dict, allowed: set) -> None:
    unknown = set(table) - allowed
    if unknown:
        raise ConfigError(f"[{section}] has unknown keys: {sorted(unknown)}")


def _tuplify(value):
    if isinstance(value, list):
        return tuple(_tuplify(v) for v in value)
    return value


def _stiffness_from_table(table: dict, base_dir: str) -> StiffnessMatrix:
    sources = [k for k in ("file", "diag", "rows", "design") if k in table]
    if len(sources) != 1:
        raise ConfigError(
            "[stiffness] needs exactly one of: file, diag, rows, design"
        )
    key = sources[0]
    if key == "file":
        path = table["file"]
        if not os.path.isabs(path):
            path = os.path.join(base_dir, path)
        try:
            with open(path, "r", encoding="utf-8") as fh:
                matrix, _ = read_matrix_text(fh.read())
        except OSError as exc:
            raise ConfigError(f"cannot read stiffness file {path}: {exc}") from exc
        return classify(matrix)
    if key == "diag":
        diag = table["diag"]
        if len(diag) != 6:
            raise ConfigError("[stiffness] diag must list 6 values")
        return classify(diag6(tuple(float(v) for v in diag)))
    if key == "rows":
        rows = table["rows"]
        if len(rows) != 6 or any(len(r) != 6 for r in rows):
            raise ConfigError("[stiffness] rows must be 6 lists of 6 values")
        return classify(tuple(tuple(float(v) for v in r) for r in rows))
    design = dict(table["design"])
    _check_keys("stiffness.design", design,
                {"delta_set", "l_set", "delta_L", "k_diag", "mu_assumed"})
    if "k_diag" in design:
        design["k_diag"] = tuple(float(v) for v in design["k_diag"])
    spec = TaskDesignSpec(**design)
    return design_task_nondiagonal(spec)


def scenario_from_dict(data: dict, base_dir: str = ".") -> ScenarioConfig:
    """Build a ScenarioConfig from a parsed TOML mapping."""
    # "manifest" is tolerated so an emitted run manifest re-loads directly
    unknown = set(data) - {"geometry", "admittance", "stiffness", "scenario", "manifest"}
    if unknown:
        raise ConfigError(f"unknown config sections: {sorted(unknown)}")
    if "stiffness" not in data:
        raise ConfigError("config needs a [stiffness] section")
    geo_tbl = data.get("geometry", {})
    _check_keys("geometry", geo_tbl, _GEOMETRY_KEYS)
    if "r" not in geo_tbl or "c" not in geo_tbl:
        raise ConfigError("[geometry] needs at least r and c")
    geometry = PegHoleGeometry(**{k: _tuplify(v) for k, v in geo_tbl.items()})

    K = _stiffness_from_table(data["stiffness"], base_dir)
    adm_tbl = data.get("admittance", {})
    _check_keys("admittance", adm_tbl, _ADMITTANCE_KEYS)
    admittance = AdmittanceParams(K=K, **{k: _tuplify(v) for k, v in adm_tbl.items()})

    scn_tbl = data.get("scenario", {})
    _check_keys("scenario", scn_tbl, _SCENARIO_KEYS)
    try:
        return ScenarioConfig(
            geometry=geometry, admittance=admittance,
            **{k: _tuplify(v) for k, v in scn_tbl.items()},
        )
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def load_scenario(path: str) -> ScenarioConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return scenario_from_dict(parse_toml(text), base_dir=os.path.dirname(path) or ".")


# ---------------------------------------------------------------------------
# TOML emission (scalars, strings, and nested numeric lists only)

def _toml_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, str):
        escaped = v.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_toml_value(x) for x in v) + "]"
    raise ConfigError(f"cannot serialize {type(v).__name__} to TOML")


def dump_toml(sections: dict) -> str:
    lines = []
    for name, table in sections.items():
        lines.append(f"[{name}]")
        for key, value in table.items():
            lines.append(f"{key} = {_toml_value(value)}")
        lines.append("")
    return "\n".join(lines)


def scenario_to_dict(cfg: ScenarioConfig) -> dict:
    """Resolved snapshot: loads back to an identical ScenarioConfig."""
    geo = asdict(cfg.geometry)
    adm = {
        "M": list(cfg.admittance.M),
        "D": list(cfg.admittance.D),
        "Ts": cfg.admittance.Ts,
        "force_filter_cutoff": cfg.admittance.force_filter_cutoff,
    }
    stiff = {"rows": [list(row) for row in cfg.admittance.K.k]}
    scn = {
        "initial_error": list(cfg.initial_error),
        "approach_speed": cfg.approach_speed,
        "press_depth": cfg.press_depth,
        "start_height": cfg.start_height,
        "duration": cfg.duration,
        "success_depth": cfg.success_depth,
        "timeout": cfg.timeout,
        "seed": cfg.seed,
        "divergence_bound": cfg.divergence_bound,
        "stall_exit": cfg.stall_exit,
        "stick_friction": cfg.stick_friction,
        "label": cfg.label,
    }
    geo["hole_center"] = list(geo["hole_center"])
    return {"geometry": geo, "admittance": adm, "stiffness": stiff, "scenario": scn}


def dump_scenario_toml(cfg: ScenarioConfig) -> str:
    return dump_toml(scenario_to_dict(cfg))


# ---------------------------------------------------------------------------
# matrix CSV: '#' comments, then 6 rows of 6 repr-formatted floats

def format_matrix_text(matrix: Mat6, comments: tuple[str, ...] = ()) -> str:
    lines = [f"# {c}" if c else "#" for c in comments]
    for row in matrix:
        lines.append(",".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def read_matrix_text(text: str) -> tuple[Mat6, tuple[str, ...]]:
    comments = []
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            comments.append(stripped[1:].strip())
            continue
        parts = stripped.split(",")
        if len(parts) != 6:
            raise ConfigError(f"matrix line {lineno}: expected 6 values, got {len(parts)}")
        try:
            rows.append(tuple(float(p) for p in parts))
        except ValueError as exc:
            raise ConfigError(f"matrix line {lineno}: {exc}") from exc
    if len(rows) != 6:
        raise ConfigError(f"matrix file must have 6 data rows, got {len(rows)}")
    return tuple(rows), tuple(comments)
