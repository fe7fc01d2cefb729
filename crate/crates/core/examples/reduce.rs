//! Erodes a table by growing particle radii and reports which boundary
//! pieces disappear.
//!
//!     cargo run --example reduce

use billiards::reduction::{max_radius, reduce_table, ReductionError};
use billiards::table::scenarios::{fig4, sinai};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let table = fig4(4.0, 0.5)?;
    println!(
        "fig4: largest particle that fits r = {:.6}",
        max_radius(&table)
    );
    for r in [0.0, 0.25, 0.49, 0.5, 1.0] {
        let res = reduce_table(&table, r)?;
        println!(
            "  r = {r:<4}  {} -> {} components, vanished {:?}, area {:.4}",
            res.report.components_before,
            res.report.components_after,
            res.report.vanished,
            res.reduced.area()
        );
    }

    // Growing the Sinai obstacle until it touches the walls splits the
    // table into four pieces, which is reported rather than guessed.
    match reduce_table(&sinai(4.0, 1.0)?, 0.6) {
        Err(ReductionError::UnsupportedTopology { r, reason }) => {
            println!("sinai at r = {r}: {reason}")
        }
        other => println!("sinai: {other:?}"),
    }
    Ok(())
}
