use rayon::prelude::*;
use serde::Serialize;

use super::{
    chaos_verdict, find_period_two, lyapunov, random_state, rng, AnalysisError, ChaosVerdict,
    LyapunovEstimate, PeriodTwoReport, StabilityClass,
};
use crate::geometry::Geom;
use crate::reduction::reduce_table;
use crate::table::BilliardTable;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub r_min: f64,
    pub r_max: f64,
    pub steps: usize,
    /// Collisions per Lyapunov estimate; zero skips the estimate.
    pub lyapunov_iters: usize,
    pub transient: usize,
    pub seed: u64,
    /// Original component ids of the orbit to follow. By default the first
    /// isolated orbit of the unreduced table, preferring arc-to-arc chords.
    pub orbit: Option<[usize; 2]>,
}

impl SweepConfig {
    pub fn new(r_min: f64, r_max: f64, steps: usize) -> Self {
        Self {
            r_min,
            r_max,
            steps,
            lyapunov_iters: 20_000,
            transient: 1_000,
            seed: 0,
            orbit: None,
        }
    }

    pub fn r_at(&self, i: usize) -> f64 {
        if i + 1 == self.steps {
            self.r_max
        } else {
            self.r_min + (self.r_max - self.r_min) * i as f64 / (self.steps - 1) as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub r: f64,
    pub n_components: Option<usize>,
    pub vanished: Vec<usize>,
    pub error: Option<String>,
    pub n_orbits: usize,
    pub orbit: Option<PeriodTwoReport>,
    pub lyapunov: Option<LyapunovEstimate>,
    pub lyapunov_error: Option<String>,
    pub chaos: Option<ChaosVerdict>,
    /// Set when this point differs from the previous one.
    pub transition: bool,
}

impl SweepPoint {
    pub fn orbit_class(&self) -> Option<StabilityClass> {
        self.orbit.as_ref().map(|o| o.analytic_class)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Transition {
    pub r_lo: f64,
    pub r_hi: f64,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub tracked_orbit: Option<[usize; 2]>,
    pub points: Vec<SweepPoint>,
    pub transitions: Vec<Transition>,
}

fn default_orbit(table: &BilliardTable) -> Option<[usize; 2]> {
    let orbits: Vec<_> = find_period_two(table)
        .into_iter()
        .filter(|o| !o.family)
        .collect();
    let is_arc = |id: usize| {
        table
            .index_of_id(id)
            .is_some_and(|i| matches!(table.component(i).geom, Geom::Arc(_)))
    };
    orbits
        .iter()
        .find(|o| o.component_ids.iter().all(|&id| is_arc(id)))
        .or(orbits.first())
        .map(|o| o.component_ids)
}

fn evaluate(
    table: &BilliardTable,
    cfg: &SweepConfig,
    tracked: Option<[usize; 2]>,
    i: usize,
) -> SweepPoint {
    let r = cfg.r_at(i);
    let mut point = SweepPoint {
        r,
        n_components: None,
        vanished: Vec::new(),
        error: None,
        n_orbits: 0,
        orbit: None,
        lyapunov: None,
        lyapunov_error: None,
        chaos: None,
        transition: false,
    };
    let res = match reduce_table(table, r) {
        Ok(res) => res,
        Err(e) => {
            point.error = Some(e.to_string());
            return point;
        }
    };
    let reduced = res.reduced;
    point.n_components = Some(reduced.components().len());
    point.vanished = res.report.vanished;
    let orbits = find_period_two(&reduced);
    point.n_orbits = orbits.len();
    point.orbit = tracked.and_then(|ids| {
        orbits
            .into_iter()
            .find(|o| !o.family && (o.component_ids == ids || o.component_ids == [ids[1], ids[0]]))
    });
    if cfg.lyapunov_iters > 0 {
        // The same seed at every radius: results depend only on (seed, r).
        let x0 = random_state(&reduced, &mut rng(cfg.seed));
        match lyapunov(&reduced, &x0, cfg.lyapunov_iters, cfg.transient, cfg.seed) {
            Ok(est) => {
                point.chaos = Some(chaos_verdict(&est));
                point.lyapunov = Some(est);
            }
            Err(e) => point.lyapunov_error = Some(e.to_string()),
        }
    }
    point
}

fn is_chaotic(p: &SweepPoint) -> bool {
    p.chaos == Some(ChaosVerdict::Chaotic)
}

fn describe_class(c: Option<StabilityClass>) -> String {
    c.map_or_else(|| "none".to_owned(), |c| c.to_string())
}

/// Follows one period-two orbit and the Lyapunov exponent over an evenly
/// spaced grid of particle radii. Grid points run in parallel on the
/// global thread pool; the result does not depend on the number of threads.
pub fn sweep(table: &BilliardTable, cfg: &SweepConfig) -> Result<SweepReport, AnalysisError> {
    if !(cfg.r_min >= 0.0 && cfg.r_min < cfg.r_max) {
        return Err(AnalysisError::InvalidArgument(format!(
            "need 0 <= r_min < r_max, got [{}, {}]",
            cfg.r_min, cfg.r_max
        )));
    }
    if cfg.steps < 2 {
        return Err(AnalysisError::InvalidArgument(
            "need at least 2 steps".into(),
        ));
    }
    let tracked = cfg.orbit.or_else(|| default_orbit(table));
    let mut points: Vec<SweepPoint> = (0..cfg.steps)
        .into_par_iter()
        .map(|i| evaluate(table, cfg, tracked, i))
        .collect();
    let mut transitions = Vec::new();
    for i in 1..points.len() {
        let (a, b) = (&points[i - 1], &points[i]);
        let mut what = Vec::new();
        if a.orbit_class() != b.orbit_class() {
            what.push(format!(
                "orbit {} -> {}",
                describe_class(a.orbit_class()),
                describe_class(b.orbit_class())
            ));
        }
        if a.lyapunov.is_some() && b.lyapunov.is_some() && is_chaotic(a) != is_chaotic(b) {
            let label = |c: bool| if c { "chaotic" } else { "not chaotic" };
            what.push(format!(
                "lambda {} -> {}",
                label(is_chaotic(a)),
                label(is_chaotic(b))
            ));
        }
        if !what.is_empty() {
            transitions.push(Transition {
                r_lo: a.r,
                r_hi: b.r,
                description: what.join("; "),
            });
            points[i].transition = true;
        }
    }
    Ok(SweepReport {
        tracked_orbit: tracked,
        points,
        transitions,
    })
}

/// [`sweep`] on a dedicated pool of `threads` workers.
pub fn sweep_with_threads(
    table: &BilliardTable,
    cfg: &SweepConfig,
    threads: usize,
) -> Result<SweepReport, AnalysisError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| AnalysisError::InvalidArgument(e.to_string()))?;
    pool.install(|| sweep(table, cfg))
}
