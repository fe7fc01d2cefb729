//! Stability of period-two orbits, Lyapunov exponents, phase portraits and
//! sweeps over the particle radius.

mod lyapunov;
mod period2;
mod portrait;
mod sweep;

use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use thiserror::Error;

use crate::dynamics::{BoundaryState, DynamicsError};
use crate::table::BilliardTable;

pub use lyapunov::{chaos_verdict, lyapunov, ChaosVerdict, LyapunovEstimate, MAX_RESTARTS};
pub use period2::{
    classify_period_two, ellipticity_resonance, find_period_two, monodromy, physical_thresholds,
    PeriodTwoReport, StabilityClass, Threshold, PARABOLIC_TOL,
};
pub use portrait::{
    phase_portrait, portrait_from_seeds, portrait_svg, OrbitLabel, PhasePortrait, PortraitOrbit,
};
pub use sweep::{sweep, sweep_with_threads, SweepConfig, SweepPoint, SweepReport, Transition};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("no period-two orbit: {0}")]
    NoOrbit(String),
    #[error("trajectory terminated early {restarts} times; {iterations} iterations used")]
    InsufficientIterations { restarts: usize, iterations: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

/// Generator behind every randomized routine: SplitMix64, a 64-bit
/// counter-based mixer.
pub type Rng64 = SplitMix64;

pub fn rng(seed: u64) -> Rng64 {
    SplitMix64::seed_from_u64(seed)
}

/// Independent seed for the `index`-th work item of a run seeded with
/// `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    // One SplitMix64 output step applied to the combined value.
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Uniform boundary position with `|sin theta| <= 0.95`.
pub fn random_state(table: &BilliardTable, rng: &mut Rng64) -> BoundaryState {
    let s = rng.random_range(0.0..table.total_length());
    let sin_theta: f64 = rng.random_range(-0.95..0.95);
    BoundaryState::at(table, s, sin_theta.asin())
}
