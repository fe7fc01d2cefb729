//! Sweeps the particle radius in the two-arc pocket and lists where the
//! period-two orbit changes stability.
//!
//!     cargo run --release --example sweep

use billiards::analysis::{sweep, SweepConfig};
use billiards::table::scenarios::{two_focusing_pocket, PocketParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let table = two_focusing_pocket(&PocketParams::DEFAULT)?;
    let mut cfg = SweepConfig::new(0.0, 1.05, 106);
    cfg.lyapunov_iters = 10_000;
    let report = sweep(&table, &cfg)?;
    println!(
        "tracking orbit between components {:?}",
        report.tracked_orbit
    );
    for t in &report.transitions {
        println!("  [{:.2}, {:.2}]  {}", t.r_lo, t.r_hi, t.description);
    }
    Ok(())
}
