//! Numeric thresholds shared across the crate.

/// Entries below this are treated as zero when normalizing.
pub const ZERO: f64 = 1e-14;
/// Relative singular-value threshold for rank decisions on input forms.
pub const RANK: f64 = 1e-10;
/// Rank threshold for pencil members evaluated at computed cubic roots.
pub const MEMBER_RANK: f64 = 1e-7;
/// Relative radius used to merge coincident roots and points.
pub const CLUSTER: f64 = 1e-6;
/// Imaginary parts below this (relative) are dropped.
pub const REAL: f64 = 1e-8;
/// Deadband for deciding the region of a point from the sign of the absolute.
pub const REGION: f64 = 1e-9;
