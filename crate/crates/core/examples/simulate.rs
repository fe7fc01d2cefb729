//! Follows one trajectory in the stadium and prints its collisions in
//! Birkhoff coordinates and in the plane.
//!
//!     cargo run --example simulate

use billiards::dynamics::{trajectory, BoundaryState};
use billiards::table::scenarios::stadium;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let table = stadium(1.0, 2.0)?;
    let x0 = BoundaryState::at(&table, 0.4, 0.3);
    let tr = trajectory(&table, &x0, 12)?;
    println!(
        "{:>4} {:>4} {:>9} {:>9} {:>9} {:>9}",
        "iter", "comp", "s", "sin", "x", "y"
    );
    for (i, x) in std::iter::once(&x0).chain(&tr.states).enumerate() {
        let (p, _) = table.embed(x);
        println!(
            "{i:>4} {:>4} {:>9.5} {:>9.5} {:>9.5} {:>9.5}",
            table.component(x.component).id,
            x.s,
            x.sin_theta,
            p.x,
            p.y
        );
    }
    println!("ended: {:?}", tr.termination);
    Ok(())
}
