//! Feed-forward protocols evaluated as exact probability trees: temporal and
//! spatial photon bleeding, schedule optimization and primate fusion with
//! retries.

pub mod bleed;
pub mod optimize;
pub mod primate;
pub mod spatial;

pub use bleed::{
    bleed_closed_form, bleed_closed_form_equal, bleed_two_photons, BleedOutcome, BleedSchedule, ProtocolTrace,
    TraceStatus, TraceStep,
};
pub use optimize::{optimize_schedule, optimize_schedules, OptimizedSchedule};
pub use primate::{
    exactly_one_probability, ghz_via_primates, primate_fuse, primate_fuse_with_retry, primate_to_ghz, PrimateSymbol,
    RetryResult, RetrySchedule,
};
pub use spatial::{compare_spatial_temporal, spatial_bleeding, SpatialComparison, SpatialOutcome};

/// Branch probabilities below this are dropped from retry trees and their
/// mass is reported.
pub const TREE_CUTOFF: f64 = 1e-12;
