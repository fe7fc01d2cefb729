use rand::Rng;
use serde::Serialize;

use super::{rng, AnalysisError};
use crate::dynamics::{tangent_between, BoundaryState, CollisionEvent, DynamicsError, Stepper};
use crate::table::BilliardTable;

pub const MAX_RESTARTS: usize = 10;
const BLOCKS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LyapunovEstimate {
    /// Mean growth rate per collision (natural log).
    pub lambda: f64,
    /// Collisions iterated in total, including transients and abandoned
    /// attempts.
    pub n_iters: usize,
    pub transient: usize,
    /// Standard error from 20 batch means.
    pub stderr: f64,
    pub seed: u64,
    pub restarts: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ChaosVerdict {
    /// `lambda > 5 stderr`.
    Chaotic,
    /// `|lambda| < max(1e-3, 3 stderr)`.
    NonChaotic,
    Undetermined,
}

pub fn chaos_verdict(est: &LyapunovEstimate) -> ChaosVerdict {
    if est.lambda > 5.0 * est.stderr && est.lambda > 0.0 {
        ChaosVerdict::Chaotic
    } else if est.lambda.abs() < (1e-3f64).max(3.0 * est.stderr) {
        ChaosVerdict::NonChaotic
    } else {
        ChaosVerdict::Undetermined
    }
}

enum Attempt {
    Done(Vec<f64>),
    Stopped(usize),
}

fn attempt(
    table: &BilliardTable,
    x0: BoundaryState,
    n: usize,
    transient: usize,
) -> Result<Attempt, AnalysisError> {
    let mut stepper = Stepper::new(table);
    let mut x = x0;
    let mut v = [std::f64::consts::FRAC_1_SQRT_2; 2];
    let mut logs = Vec::with_capacity(n);
    for i in 0..(transient + n) {
        let c = match stepper.step(&x) {
            Ok(c) => c,
            Err(DynamicsError::NumericalStall { .. }) => return Ok(Attempt::Stopped(i + 1)),
            Err(e) => return Err(e.into()),
        };
        let CollisionEvent::Regular(y) = c.event else {
            return Ok(Attempt::Stopped(i + 1));
        };
        let w = tangent_between(table, &x, &y, c.free_path).apply(v);
        let norm = w[0].hypot(w[1]);
        if !(norm.is_finite() && norm > 0.0) {
            return Ok(Attempt::Stopped(i + 1));
        }
        if i >= transient {
            logs.push(norm.ln());
        }
        v = [w[0] / norm, w[1] / norm];
        x = y;
    }
    Ok(Attempt::Done(logs))
}

/// Largest Lyapunov exponent of the billiard map along the orbit of `x0`.
///
/// A tangent vector is pushed through the derivative and renormalized at
/// every collision; the log growth after `transient` collisions is
/// averaged over `n` collisions. Orbits that end in a corner or tangency
/// are restarted from a slightly perturbed copy of `x0`.
pub fn lyapunov(
    table: &BilliardTable,
    x0: &BoundaryState,
    n: usize,
    transient: usize,
    seed: u64,
) -> Result<LyapunovEstimate, AnalysisError> {
    if n < BLOCKS {
        return Err(AnalysisError::InvalidArgument(format!(
            "need at least {BLOCKS} iterations, got {n}"
        )));
    }
    let mut gen = rng(seed);
    let mut start = *x0;
    let mut used = 0;
    for restarts in 0..=MAX_RESTARTS {
        match attempt(table, start, n, transient)? {
            Attempt::Done(logs) => {
                used += transient + n;
                let (lambda, stderr) = batch_means(&logs);
                return Ok(LyapunovEstimate {
                    lambda,
                    n_iters: used,
                    transient,
                    stderr,
                    seed,
                    restarts,
                });
            }
            Attempt::Stopped(k) => {
                used += k;
                let ds = 1e-3 * table.diameter() * (gen.random::<f64>() - 0.5);
                let dth = 1e-3 * (gen.random::<f64>() - 0.5);
                let theta = (x0.theta + dth).clamp(-1.5, 1.5);
                start = BoundaryState::at(table, x0.s + ds, theta);
            }
        }
    }
    Err(AnalysisError::InsufficientIterations {
        restarts: MAX_RESTARTS,
        iterations: used,
    })
}

/// Mean and its standard error from equal consecutive batches.
fn batch_means(xs: &[f64]) -> (f64, f64) {
    let size = xs.len() / BLOCKS;
    let means: Vec<f64> = (0..BLOCKS)
        .map(|b| xs[b * size..(b + 1) * size].iter().sum::<f64>() / size as f64)
        .collect();
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    let bm = means.iter().sum::<f64>() / BLOCKS as f64;
    let var = means.iter().map(|m| (m - bm).powi(2)).sum::<f64>() / (BLOCKS - 1) as f64;
    (mean, (var / BLOCKS as f64).sqrt())
}
