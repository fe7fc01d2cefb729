//! Independent checks shared by the integration tests.

#![allow(dead_code)]

use billiards::dynamics::{billiard_map, tangent_map, BoundaryState, CollisionEvent};
use billiards::geometry::{Geom, Vec2};
use billiards::reduction::{bounding_box, max_radius, reduce_table, reduced_membership_oracle};
use billiards::table::scenarios::{build_scenario, ScenarioParams, SCENARIOS};
use billiards::table::BilliardTable;
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

/// Points this close to either boundary are not compared.
pub const BAND: f64 = 1e-7;

pub fn sample_points(table: &BilliardTable, n: usize, seed: u64) -> Vec<Vec2> {
    let (lo, hi) = bounding_box(table);
    let mut rng = SplitMix64::seed_from_u64(seed);
    (0..n)
        .map(|_| Vec2::new(rng.random_range(lo.x..hi.x), rng.random_range(lo.y..hi.y)))
        .collect()
}

/// Analytic reduction against the distance-function definition at every
/// scenario and radius, then monotonicity and composition of erosions.
pub fn reduction_oracle_suite(n_points: usize) -> Result<String, String> {
    let mut compared = 0usize;
    for name in SCENARIOS {
        let table = build_scenario(name, &ScenarioParams::new()).map_err(|e| e.to_string())?;
        let r_max = max_radius(&table);
        let points = sample_points(&table, n_points, 7);
        for r in [0.0, 0.05, 0.1, 0.25, 0.5 * r_max] {
            let reduced = reduce_table(&table, r)
                .map_err(|e| format!("{name} r = {r}: {e}"))?
                .reduced;
            for &p in &points {
                let near_original = (table.distance_to_boundary(p) - r).abs() < BAND;
                let near_reduced = reduced.distance_to_boundary(p) < BAND;
                if near_original || near_reduced {
                    continue;
                }
                compared += 1;
                if reduced.contains(p) != reduced_membership_oracle(&table, r, p) {
                    return Err(format!("{name} r = {r}: membership differs at {p:?}"));
                }
            }
        }
        let (r1, r2) = (0.2 * r_max, 0.3 * r_max);
        let small = reduce_table(&table, r1).map_err(|e| e.to_string())?.reduced;
        let large = reduce_table(&table, r1 + r2)
            .map_err(|e| e.to_string())?
            .reduced;
        let twice = reduce_table(&small, r2).map_err(|e| e.to_string())?.reduced;
        for p in sample_points(&table, n_points / 2, 11) {
            if large.distance_to_boundary(p) < BAND || small.distance_to_boundary(p) < BAND {
                continue;
            }
            if large.contains(p) && !small.contains(p) {
                return Err(format!("{name}: erosion not monotone at {p:?}"));
            }
            if twice.distance_to_boundary(p) >= BAND && twice.contains(p) != large.contains(p) {
                return Err(format!("{name}: erosions do not compose at {p:?}"));
            }
        }
    }
    Ok(format!("{compared} points agree"))
}

fn local(table: &BilliardTable, x: &BoundaryState) -> (f64, f64) {
    let u = x.s - table.offset(x.component);
    (u, table.component(x.component).length)
}

fn image(table: &BilliardTable, s: f64, p: f64) -> Option<BoundaryState> {
    match billiard_map(table, &BoundaryState::at(table, s, p.asin())).ok()? {
        CollisionEvent::Regular(y) => Some(y),
        _ => None,
    }
}

/// Relative Frobenius error between `tangent_map` and central differences
/// of the map in `(s, sin theta)`, plus `|det - 1|`. `None` when `x` is too
/// close to a joint, a corner or a tangency for differences to be taken.
pub fn tangent_check(table: &BilliardTable, x: &BoundaryState) -> Option<(f64, f64)> {
    let margin = 1e-3 * table.diameter();
    let y = image(table, x.s, x.sin_theta)?;
    let clear = |z: &BoundaryState| {
        let (u, len) = local(table, z);
        let closed =
            matches!(table.component(z.component).geom, Geom::Arc(a) if a.is_full_circle());
        closed || (u > margin && u < len - margin)
    };
    if !clear(x) || !clear(&y) || x.theta.cos() < 0.05 || y.theta.cos() < 0.05 {
        return None;
    }
    let j = tangent_map(table, x).ok()?;
    let h = 1e-6;
    let mut fd = [[0.0; 2]; 2];
    for (col, (ds, dp)) in [(h, 0.0), (0.0, h)].into_iter().enumerate() {
        let plus = image(table, x.s + ds, x.sin_theta + dp)?;
        let minus = image(table, x.s - ds, x.sin_theta - dp)?;
        if plus.component != y.component || minus.component != y.component {
            return None;
        }
        let mut ds1 = plus.s - minus.s;
        // A full circle has its seam inside the component.
        let len = table.component(y.component).length;
        if ds1.abs() > 0.5 * len {
            ds1 -= len * ds1.signum();
        }
        fd[0][col] = ds1 / (2.0 * h);
        fd[1][col] = (plus.sin_theta - minus.sin_theta) / (2.0 * h);
    }
    let mut diff = 0.0;
    for (a, b) in j.0.iter().flatten().zip(fd.iter().flatten()) {
        diff += (a - b) * (a - b);
    }
    Some((diff.sqrt() / j.frobenius(), (j.det() - 1.0).abs()))
}
