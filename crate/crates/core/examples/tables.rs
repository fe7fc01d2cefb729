//! Builds every built-in table, validates it and round-trips it through
//! the JSON file format.
//!
//!     cargo run --example tables

use billiards::table::scenarios::{build_scenario, ScenarioParams, SCENARIOS};
use billiards::table::{table_from_json, table_to_json, ComponentKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!(
        "{:<22} {:>5} {:>5} {:>5} {:>10} {:>8}",
        "table", "foc", "disp", "flat", "perimeter", "area"
    );
    for name in SCENARIOS {
        let table = build_scenario(name, &ScenarioParams::new())?;
        let count = |k| table.components().iter().filter(|c| c.kind == k).count();
        println!(
            "{name:<22} {:>5} {:>5} {:>5} {:>10.4} {:>8.4}",
            count(ComponentKind::Focusing),
            count(ComponentKind::Dispersing),
            count(ComponentKind::Neutral),
            table.total_length(),
            table.area()
        );
        let back = table_from_json(&table_to_json(&table))?;
        assert!(back.validate().valid);
    }

    // Parameters override the defaults.
    let params = ScenarioParams::new().with("R", 1.0).with("L", 0.5);
    let short = build_scenario("stadium", &params)?;
    println!(
        "\nstadium with L = 0.5 has perimeter {:.6}",
        short.total_length()
    );
    Ok(())
}
