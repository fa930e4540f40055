//! Centralized numerical tolerances.
//!
//! Every comparison tolerance used across the engine lives here so that the
//! modules cannot drift apart. Values are chosen once per quantity kind:
//!
//! * angles are compared at `ANGLE` radians,
//! * argmin multiplicity uses `ARGMIN_REL` relative on distances,
//! * orthogonality / extremality inner products use `ORTHO`,
//! * local-graph residuals use `LOCAL_REP`,
//! * Lipschitz slope checks get additive slack `LIPSCHITZ_SLACK`.

/// Angular comparisons, radians.
pub const ANGLE: f64 = 1e-9;

/// Unit-vector norm defect accepted by constructors.
pub const UNIT_NORM: f64 = 1e-12;

/// Relative tolerance on distances when collecting all nearest points.
pub const ARGMIN_REL: f64 = 1e-9;

/// Absolute tolerance on inner products for orthogonality / extremal flags.
pub const ORTHO: f64 = 1e-7;

/// Residual allowed when checking that a local-graph sample sits on the
/// ε-sphere of its covering center.
pub const LOCAL_REP: f64 = 1e-8;

/// Additive slack on Lipschitz slope bounds for sampled graphs.
pub const LIPSCHITZ_SLACK: f64 = 1e-3;

/// Snap radius for near-tangent circle intersections: |d − 2ε| below this
/// is treated as exact tangency.
pub const TANGENT_SNAP: f64 = 1e-9;

/// Positions closer than this are treated as the same boundary vertex.
pub const VERTEX_MERGE: f64 = 1e-9;

/// Wedge angles are only trusted strictly inside (ANGLE_WEDGE, π − ANGLE_WEDGE).
pub const ANGLE_WEDGE: f64 = 1e-3;
