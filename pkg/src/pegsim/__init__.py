"""pegsim: stiffness-matrix design and admittance-control insertion simulator.

The package designs 6x6 task-space stiffness matrices (symmetric
positive-definite or triangular with deliberate one-way couplings), runs them
inside a discrete admittance controller against a penalty-based peg-in-hole
contact model, and batches the resulting scenarios into experiment reports.
"""

__version__ = "0.1.0"

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
from .matcore import (
    AXES,
    Mat6,
    Vec3,
    Vec6,
    diag6,
    eigenvalues_symmetric,
    eigenvalues_triangular,
    identity6,
    invert6,
    mat6,
    vec6,
)
from .stiffness import (
    EigenStatus,
    ShapeClass,
    StiffnessMatrix,
    TaskDesignSpec,
    check_symmetric_pd,
    check_triangular,
    classify,
    compliance,
    design_task_nondiagonal,
    embed_yz_block,
    hunting_width,
    predicted_induction,
)
from .admittance import (
    AdmittanceModel,
    AdmittanceParams,
    AdmittanceState,
    Frame,
    Wrench,
    steady_state,
    step,
    tip_to_sensor,
    wrench_to_tip,
)
from .contact import (
    ContactPoint,
    ContactResult,
    PegHoleGeometry,
    PegPose,
    Phase,
    StickState,
    classify_phase,
    contact_wrench,
    cop_arc_distance,
)
from .experiments import (
    CellStats,
    ExperimentReport,
    RunStatus,
    RunSummary,
    ScenarioConfig,
    TrajectoryLog,
    asym_induction_matrix,
    grid_geometry,
    preset_induction_sweep,
    preset_pih_grid,
    press_scenario,
    proposed_matrix,
    rcc_matrix,
    run_scenario,
)

__all__ = [
    "__version__",
    "PegsimError", "SingularMatrixError", "NotSymmetricError",
    "NotTriangularError", "DesignInfeasibleError", "WrongFrameError",
    "InvalidPoseError", "ConfigError",
    "AXES", "Vec3", "Vec6", "Mat6", "vec6", "mat6", "diag6", "identity6",
    "invert6", "eigenvalues_symmetric", "eigenvalues_triangular",
    "ShapeClass", "EigenStatus", "StiffnessMatrix", "TaskDesignSpec",
    "classify", "check_symmetric_pd", "check_triangular",
    "design_task_nondiagonal", "compliance", "predicted_induction",
    "hunting_width", "embed_yz_block",
    "Frame", "Wrench", "wrench_to_tip", "tip_to_sensor",
    "AdmittanceParams", "AdmittanceState", "AdmittanceModel", "step",
    "steady_state",
    "PegHoleGeometry", "PegPose", "Phase", "ContactPoint", "ContactResult",
    "StickState", "contact_wrench", "classify_phase", "cop_arc_distance",
    "ScenarioConfig", "TrajectoryLog", "RunSummary", "RunStatus",
    "CellStats", "ExperimentReport", "run_scenario",
    "preset_induction_sweep", "preset_pih_grid",
    "grid_geometry", "proposed_matrix", "rcc_matrix",
    "asym_induction_matrix", "press_scenario",
]
