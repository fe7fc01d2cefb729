use std::collections::HashSet;
use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{derive_seed, rng, AnalysisError};
use crate::dynamics::{trajectory, BoundaryState, Termination};
use crate::table::BilliardTable;

/// Orbits filling fewer than `OCCUPANCY_FACTOR * sqrt(cells)` grid cells
/// are labelled regular: a curve crosses O(sqrt(cells)) cells, a chaotic
/// orbit O(cells).
pub const OCCUPANCY_FACTOR: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OrbitLabel {
    Regular,
    Chaotic,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PortraitOrbit {
    pub seed_state: BoundaryState,
    /// `(s, sin theta)` after each collision, starting with the seed.
    pub samples: Vec<(f64, f64)>,
    pub cell_occupancy: usize,
    pub label: OrbitLabel,
    /// False when the orbit hit a corner or grazed before `n_iters`.
    pub completed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhasePortrait {
    pub orbits: Vec<PortraitOrbit>,
    pub grid: (usize, usize),
    pub total_length: f64,
}

fn orbit(
    table: &BilliardTable,
    x0: BoundaryState,
    n_iters: usize,
    grid: (usize, usize),
) -> Result<PortraitOrbit, AnalysisError> {
    let tr = trajectory(table, &x0, n_iters)?;
    let samples: Vec<(f64, f64)> = std::iter::once(x0)
        .chain(tr.states.iter().copied())
        .map(|x| (x.s, x.sin_theta))
        .collect();
    let total = table.total_length();
    let cells: HashSet<(usize, usize)> = samples
        .iter()
        .map(|&(s, p)| {
            let i = ((s / total) * grid.0 as f64)
                .floor()
                .clamp(0.0, (grid.0 - 1) as f64) as usize;
            let j = ((p + 1.0) * 0.5 * grid.1 as f64)
                .floor()
                .clamp(0.0, (grid.1 - 1) as f64) as usize;
            (i, j)
        })
        .collect();
    let limit = OCCUPANCY_FACTOR * ((grid.0 * grid.1) as f64).sqrt();
    let occupancy = cells.len();
    Ok(PortraitOrbit {
        seed_state: x0,
        samples,
        cell_occupancy: occupancy,
        label: if (occupancy as f64) < limit {
            OrbitLabel::Regular
        } else {
            OrbitLabel::Chaotic
        },
        completed: tr.termination == Termination::Completed,
    })
}

/// Phase portrait from explicit seed states. Orbits are computed in
/// parallel and returned in seed order.
pub fn portrait_from_seeds(
    table: &BilliardTable,
    seeds: &[BoundaryState],
    n_iters: usize,
    grid: (usize, usize),
) -> Result<PhasePortrait, AnalysisError> {
    if grid.0 < 50 || grid.1 < 50 {
        return Err(AnalysisError::InvalidArgument(format!(
            "grid {}x{} is below 50x50",
            grid.0, grid.1
        )));
    }
    let orbits = seeds
        .par_iter()
        .map(|x| orbit(table, *x, n_iters, grid))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PhasePortrait {
        orbits,
        grid,
        total_length: table.total_length(),
    })
}

/// Phase portrait from `n_seeds` stratified random seeds: the phase space
/// `[0, |boundary|) x (-1, 1)` is cut into a `k x k` lattice
/// (`k = ceil(sqrt(n_seeds))`) and one seed is drawn in each of the first
/// `n_seeds` cells.
pub fn phase_portrait(
    table: &BilliardTable,
    n_seeds: usize,
    n_iters: usize,
    grid: (usize, usize),
    seed: u64,
) -> Result<PhasePortrait, AnalysisError> {
    if n_seeds == 0 {
        return Err(AnalysisError::InvalidArgument(
            "need at least one seed".into(),
        ));
    }
    let k = (n_seeds as f64).sqrt().ceil() as usize;
    let total = table.total_length();
    let seeds: Vec<BoundaryState> = (0..n_seeds)
        .map(|idx| {
            let mut g = rng(derive_seed(seed, idx as u64));
            let (i, j) = (idx % k, idx / k);
            let s = total * (i as f64 + g.random::<f64>()) / k as f64;
            // Stay clear of tangential directions.
            let p = 0.98 * (-1.0 + 2.0 * (j as f64 + g.random::<f64>()) / k as f64);
            BoundaryState::at(table, s, p.asin())
        })
        .collect();
    portrait_from_seeds(table, &seeds, n_iters, grid)
}

/// Static SVG scatter of a portrait (s horizontally, sin theta
/// vertically). At most `max_points` samples per orbit are drawn.
pub fn portrait_svg(p: &PhasePortrait, max_points: usize) -> String {
    let (w, h, pad) = (800.0, 400.0, 40.0);
    let x = |s: f64| pad + (w - 2.0 * pad) * s / p.total_length;
    let y = |q: f64| h - pad - (h - 2.0 * pad) * (q + 1.0) * 0.5;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<rect x="{pad}" y="{pad}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        w - 2.0 * pad,
        h - 2.0 * pad
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">s (0 to {:.4})</text>"#,
        w * 0.5,
        h - 10.0,
        p.total_length
    );
    let _ = writeln!(
        out,
        r#"<text x="12" y="{}" font-size="12" transform="rotate(-90 12 {})" text-anchor="middle">sin theta (-1 to 1)</text>"#,
        h * 0.5,
        h * 0.5
    );
    let palette = [
        "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
    ];
    for (k, o) in p.orbits.iter().enumerate() {
        let color = match o.label {
            OrbitLabel::Chaotic => "#999999",
            OrbitLabel::Regular => palette[k % palette.len()],
        };
        let stride = o.samples.len().div_ceil(max_points.max(1)).max(1);
        let _ = writeln!(out, r#"<g fill="{color}">"#);
        for &(s, q) in o.samples.iter().step_by(stride) {
            let _ = writeln!(
                out,
                r#"<circle cx="{:.2}" cy="{:.2}" r="0.8"/>"#,
                x(s),
                y(q)
            );
        }
        let _ = writeln!(out, "</g>");
    }
    out.push_str("</svg>\n");
    out
}
