//! Largest Lyapunov exponents of a few classic tables.
//!
//!     cargo run --release --example lyapunov

use billiards::analysis::{chaos_verdict, lyapunov, random_state, rng};
use billiards::table::scenarios::{circle, equilateral_triangle, sinai, stadium};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed = 3;
    for table in [
        circle(1.0)?,
        equilateral_triangle(2.0)?,
        stadium(1.0, 2.0)?,
        sinai(4.0, 1.0)?,
    ] {
        let x0 = random_state(&table, &mut rng(seed));
        let est = lyapunov(&table, &x0, 100_000, 1_000, seed)?;
        println!(
            "{:<22} lambda = {:>8.5} +- {:.1e}  {:?}",
            table.name,
            est.lambda,
            est.stderr,
            chaos_verdict(&est)
        );
    }
    Ok(())
}
