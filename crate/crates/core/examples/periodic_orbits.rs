//! Period-two orbits: where they are, whether they are stable, and at which
//! particle radii that changes.
//!
//!     cargo run --example periodic_orbits

use billiards::analysis::{ellipticity_resonance, find_period_two, physical_thresholds};
use billiards::table::scenarios::{fig5, sinai, two_focusing_pocket, PocketParams};
use billiards::table::ComponentKind;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = PocketParams::DEFAULT;
    for table in [two_focusing_pocket(&p)?, fig5(1.0)?, sinai(4.0, 1.0)?] {
        println!("{}:", table.name);
        for o in find_period_two(&table) {
            println!(
                "  ids {:?}  L = {:.4}  {:<9} trace {:>8.4}{}",
                o.component_ids,
                o.length,
                o.analytic_class.to_string(),
                o.monodromy_trace,
                if o.family { "  (family)" } else { "" }
            );
        }
    }

    println!("\npocket thresholds:");
    for t in physical_thresholds(p.chord, p.r1, p.r2, [ComponentKind::Focusing; 2])? {
        println!("  r = {:.4}: {} -> {}", t.r, t.from, t.to);
    }
    println!(
        "pocket orbit free of low-order resonances: {}",
        ellipticity_resonance(p.chord, p.r1, p.r2)
    );
    Ok(())
}
