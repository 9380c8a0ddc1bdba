//! H¹ norms, an independent finite-volume oracle and the convergence
//! harness.

mod convergence;
mod fd_oracle;
mod quadrature;
mod slope;

pub use convergence::{
    mode_error, run_study, theorem2_errors, theorem2_mode_error, theorem4_errors,
    theorem4_mode_error, validate_ladder, w_expansion_mode_error, ConvergenceReport, ErrorRecord,
    LayerGrouping, ModeError, ReportStatus, Scenario, Study, DEFAULT_LADDER, DEFAULT_SLOPE_BAND,
    EXACT_TOLERANCE,
};
pub use fd_oracle::{
    fd_oracle_solve, oracle_case, oracle_ladder, oracle_report, AnalyticReference, FdProblem,
    GridSolution, OracleCase, OracleConfiguration, OracleLevel, OracleReport, OracleStatus,
    RadialGrid, DEFAULT_ORDER_BAND, EXPECTED_ORDER, MIN_CELLS, ORACLE_EXACT_TOLERANCE,
};
pub use quadrature::{h1_norm_mode, h1_norm_squared_mode, QuadratureRule, MIN_POINTS};
pub use slope::{fit_slope, SlopeFit, MIN_PAIRS};
