//! Three ways a growing particle changes the dynamics of a fixed table:
//! order turning into chaos, chaos turning into order, and a marginal
//! orbit becoming stable.
//!
//!     cargo run --release --example transitions

use billiards::analysis::{chaos_verdict, find_period_two, lyapunov, random_state, rng};
use billiards::reduction::reduce_table;
use billiards::table::scenarios::{fig3, fig4, fig5, Fig3Params};
use billiards::table::BilliardTable;

fn exponent(table: &BilliardTable) -> Result<String, Box<dyn std::error::Error>> {
    let x0 = random_state(table, &mut rng(1));
    let est = lyapunov(table, &x0, 50_000, 500, 1)?;
    Ok(format!(
        "lambda {:.4} ({:?})",
        est.lambda,
        chaos_verdict(&est)
    ))
}

fn classes(table: &BilliardTable) -> Vec<String> {
    find_period_two(table)
        .iter()
        .filter(|o| !o.family)
        .map(|o| format!("{:?}:{}", o.component_ids, o.analytic_class))
        .collect()
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (t3, g) = fig3(&Fig3Params::DEFAULT)?;
    println!("fig3, point particle: orbits {:?}", classes(&t3));
    let big = reduce_table(&t3, 1.05 * g.ab)?.reduced;
    println!(
        "fig3, r = 1.05 |AB|: {} components, {}",
        big.components().len(),
        exponent(&big)?
    );

    let t4 = fig4(4.0, 0.5)?;
    println!("fig4, point particle: {}", exponent(&t4)?);
    let tri = reduce_table(&t4, 0.5)?.reduced;
    println!(
        "fig4, r = 0.5: {} components, {}",
        tri.components().len(),
        exponent(&tri)?
    );

    let t5 = fig5(1.0)?;
    for r in [0.0, 0.05, 0.3] {
        println!(
            "fig5, r = {r}: orbits {:?}",
            classes(&reduce_table(&t5, r)?.reduced)
        );
    }
    Ok(())
}
