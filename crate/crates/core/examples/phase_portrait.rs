//! Phase portrait of the reduced fig5 table: an island of regular orbits
//! around the stable period-two point. Writes `fig5_portrait.svg` to the
//! directory given as the first argument (default: the system temp dir).
//!
//!     cargo run --release --example phase_portrait -- /tmp

use billiards::analysis::{phase_portrait, portrait_svg, OrbitLabel};
use billiards::reduction::reduce_table;
use billiards::table::scenarios::fig5;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let table = reduce_table(&fig5(1.0)?, 0.1)?.reduced;
    let portrait = phase_portrait(&table, 64, 3_000, (120, 120), 11)?;
    let regular = portrait
        .orbits
        .iter()
        .filter(|o| o.label == OrbitLabel::Regular)
        .count();
    println!("{} of {} orbits regular", regular, portrait.orbits.len());

    let dir = std::env::args()
        .nth(1)
        .map_or_else(std::env::temp_dir, Into::into);
    let path = dir.join("fig5_portrait.svg");
    std::fs::write(&path, portrait_svg(&portrait, 3_000))?;
    println!("wrote {}", path.display());
    Ok(())
}
