"""Look-ahead path-following guidance: law evaluation, saturation envelopes,
kinematic simulation, and performance metrics for planar constant-speed
vehicles on line, circle, and ellipse paths."""

from .envelope import (
    BoundaryGap,
    EnvelopeReport,
    GridSpec,
    PolarMap,
    boundary_curve,
    boundary_gap,
    compute_envelope,
    envelope_gain,
    far_field_boundary_gap,
    far_field_time_gain,
    polar_map_export,
    ratio_sweep,
    region_grid,
    unsaturated_fraction,
)
from .errors import (
    AmbiguousProjection,
    BoundUndefined,
    DegenerateBaseline,
    GuidanceError,
    InfeasibleGeometry,
    ParseError,
    ProjectionFailure,
    RunawayDivergence,
    ValidationError,
    ZeroVector,
)
from .guidance import (
    S1,
    S2,
    S3,
    ConstantLookahead,
    FeasibilityResult,
    GuidanceCommand,
    GuidanceLimits,
    LookaheadProfile,
    TrackingGeometry,
    VariableLookahead,
    accel_curvature_gradient,
    classify_region,
    curvature_sensitivity,
    feasibility_check,
    heading_error,
    lateral_accel,
    lookahead,
    lookahead_far_limit,
    lookahead_slope,
    los_length,
    normalize_angle,
    projection_error_bound,
    saturation_boundary,
    tangent_advance,
)
from .metrics import (
    PerformanceReport,
    control_effort,
    peak_overshoot,
    performance_report,
    saturation_exit,
    settling_time,
)
from .paths import (
    CCW,
    CW,
    Circle,
    Ellipse,
    PathModel,
    PathProjection,
    StraightLine,
    curvature_at,
    project_onto_path,
    tangent_point_at_offset,
)
from .scenario import (
    EnvelopeConfig,
    Scenario,
    paper_envelope_config,
    parse_envelope_config,
    parse_scenario,
    preset_scenario,
    serialize_scenario,
)
from .simulation import (
    EULER,
    RK4,
    SimConfig,
    StabilityReport,
    TrajectoryRecord,
    VehicleState,
    lyapunov_value,
    near_path_decay_rate,
    restoring_gain,
    restoring_potential,
    run_simulation,
    stability_diagnostics,
    step,
    write_trajectory_csv,
)

__version__ = "0.1.0"
