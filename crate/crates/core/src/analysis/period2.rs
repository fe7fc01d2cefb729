//! Period-two orbits: chords meeting the boundary perpendicularly at both
//! ends.
//!
//! With free path `L` and signed endpoint curvatures `k0`, `k1` the
//! monodromy trace is `2 + 4 L (L k0 k1 - k0 - k1)`, and the orbit is
//! linearly stable iff
//!
//! ```text
//! L k0 k1 - k0 - k1 < 0   and   (L k0 - 1)(L k1 - 1) > 0.
//! ```

use std::f64::consts::PI;

use serde::Serialize;

use super::AnalysisError;
use crate::dynamics::{
    billiard_map, tangent_between, tangent_map, BoundaryState, CollisionEvent, TangentMatrix,
};
use crate::geometry::{ArcGeom, Geom, Point2, SegmentGeom, Vec2};
use crate::table::{BilliardTable, ComponentKind};

/// Either stability expression closer to zero than this is parabolic.
pub const PARABOLIC_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum StabilityClass {
    Stable,
    Unstable,
    Parabolic,
}

impl std::fmt::Display for StabilityClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StabilityClass::Stable => "Stable",
            StabilityClass::Unstable => "Unstable",
            StabilityClass::Parabolic => "Parabolic",
        })
    }
}

/// The two stability expressions `(L k0 k1 - k0 - k1, (L k0 - 1)(L k1 - 1))`.
pub fn stability_expressions(l: f64, k0: f64, k1: f64) -> (f64, f64) {
    (l * k0 * k1 - k0 - k1, (l * k0 - 1.0) * (l * k1 - 1.0))
}

pub fn classify_period_two(l: f64, k0: f64, k1: f64) -> StabilityClass {
    let (e1, e2) = stability_expressions(l, k0, k1);
    if e1.abs() < PARABOLIC_TOL || e2.abs() < PARABOLIC_TOL {
        StabilityClass::Parabolic
    } else if e1 < 0.0 && e2 > 0.0 {
        StabilityClass::Stable
    } else {
        StabilityClass::Unstable
    }
}

/// Non-resonance of a stable orbit between two circular focusing arcs:
/// `4 (L - R1)(L - R2)` must differ from `R1 R2` and from `2 R1 R2`.
pub fn ellipticity_resonance(l: f64, r1: f64, r2: f64) -> bool {
    let v = 4.0 * (l - r1) * (l - r2);
    let apart = |target: f64| (v - target).abs() > 1e-9 * target.abs().max(v.abs());
    apart(r1 * r2) && apart(2.0 * r1 * r2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Threshold {
    pub r: f64,
    pub from: StabilityClass,
    pub to: StabilityClass,
}

/// Particle radii at which the period-two orbit of a chord of length `l`
/// between components of the given kinds (radii `r1`, `r2`; ignored for
/// neutral components) changes stability.
///
/// In the reduced table the chord shortens to `L - 2r`, focusing radii
/// shrink to `R - r` and dispersing radii grow to `R + r`. Writing signed
/// radii `rho = +-R`, the first expression keeps the sign of
/// `(L - rho0 - rho1) / (rho0' rho1')` and the factors of the second vanish
/// at `r = L - rho_i`. Radii are restricted to `[0, L/2)` and below every
/// focusing radius (where that arc disappears).
pub fn physical_thresholds(
    l: f64,
    r1: f64,
    r2: f64,
    kinds: [ComponentKind; 2],
) -> Result<Vec<Threshold>, AnalysisError> {
    if !(l > 0.0) {
        return Err(AnalysisError::NoOrbit(format!(
            "chord length {l} is not positive"
        )));
    }
    let rho = |radius: f64, kind: ComponentKind| match kind {
        ComponentKind::Focusing => Some(radius),
        ComponentKind::Dispersing => Some(-radius),
        ComponentKind::Neutral => None,
    };
    let rhos = [rho(r1, kinds[0]), rho(r2, kinds[1])];
    let mut upper = 0.5 * l;
    for r in rhos.iter().flatten() {
        if *r > 0.0 {
            upper = upper.min(*r);
        }
    }
    let class_at = |r: f64| {
        let k = |p: Option<f64>| p.map_or(0.0, |p| 1.0 / (p - r));
        classify_period_two(l - 2.0 * r, k(rhos[0]), k(rhos[1]))
    };
    let mut cuts: Vec<f64> = rhos
        .iter()
        .flatten()
        .map(|p| l - p)
        .filter(|r| *r >= 0.0 && *r < upper)
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    let mut out = Vec::new();
    for (i, &r) in cuts.iter().enumerate() {
        let prev = if i == 0 { 0.0 } else { cuts[i - 1] };
        let next = cuts.get(i + 1).copied().unwrap_or(upper);
        let from = if r > 0.0 {
            class_at(0.5 * (prev + r))
        } else {
            class_at(0.0)
        };
        let to = class_at(0.5 * (r + next));
        if from != to {
            out.push(Threshold { r, from, to });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodTwoReport {
    pub endpoints: [Point2; 2],
    /// Original ids of the two components.
    pub component_ids: [usize; 2],
    /// Outgoing states at the two endpoints (angle zero).
    pub states: [BoundaryState; 2],
    #[serde(rename = "L")]
    pub length: f64,
    pub k0: f64,
    pub k1: f64,
    pub analytic_class: StabilityClass,
    pub monodromy_trace: f64,
    pub monodromy_det: f64,
    /// Set only when both endpoints lie on focusing arcs.
    pub elliptic_resonance_ok: Option<bool>,
    /// A continuum of parallel chords, reported once.
    pub family: bool,
}

impl PeriodTwoReport {
    /// The two stability expressions for this orbit.
    pub fn expressions(&self) -> (f64, f64) {
        stability_expressions(self.length, self.k0, self.k1)
    }

    /// Classification implied by the monodromy trace alone.
    pub fn numeric_class(&self) -> StabilityClass {
        let t = self.monodromy_trace.abs();
        if (t - 2.0).abs() < 1e-9 {
            StabilityClass::Parabolic
        } else if t < 2.0 {
            StabilityClass::Stable
        } else {
            StabilityClass::Unstable
        }
    }
}

/// Boundary point `q` of component `idx`, if it lies strictly inside the
/// component (away from both joints).
fn local_param(table: &BilliardTable, idx: usize, q: Point2) -> Option<f64> {
    let g = &table.component(idx).geom;
    let len = table.component(idx).length;
    let margin = 1e-9 * len.max(1.0);
    if g.distance_to(q) > 1e-9 * table.diameter().max(1.0) {
        return None;
    }
    let u = g.param_of(q);
    if let Geom::Arc(a) = g {
        if a.is_full_circle() {
            // No endpoints to avoid.
            return Some(if u >= len { u - len } else { u.max(0.0) });
        }
    }
    (u > margin && u < len - margin).then_some(u)
}

/// Checks a candidate chord `p -> q` and builds its report.
fn chord_report(
    table: &BilliardTable,
    i: usize,
    p: Point2,
    j: usize,
    q: Point2,
    family: bool,
) -> Option<PeriodTwoReport> {
    let ui = local_param(table, i, p)?;
    let uj = local_param(table, j, q)?;
    let gi = &table.component(i).geom;
    let gj = &table.component(j).geom;
    let length = p.distance(q);
    if length < 1e-9 * table.diameter() {
        return None;
    }
    let d = (q - p) * (1.0 / length);
    // Perpendicular to both walls and leaving each into the interior.
    if gi.normal_at(ui).dot(d) < 1.0 - 1e-9 || gj.normal_at(uj).dot(-d) < 1.0 - 1e-9 {
        return None;
    }
    let a = BoundaryState::new(i, table.global_s(i, ui), 0.0);
    let b = BoundaryState::new(j, table.global_s(j, uj), 0.0);
    // The chord must be free: the first wall hit from p is q.
    let hit = billiard_map(table, &a).ok()?;
    let landed = match hit {
        CollisionEvent::Regular(y) => y,
        _ => return None,
    };
    if landed.component != j || (landed.s - b.s).abs() > 1e-7 * table.diameter().max(1.0) {
        return None;
    }
    let k0 = gi.curvature();
    let k1 = gj.curvature();
    let monodromy = match (tangent_map(table, &a), tangent_map(table, &b)) {
        (Ok(ja), Ok(jb)) => jb.mul(&ja),
        _ => tangent_between(table, &b, &a, length).mul(&tangent_between(table, &a, &b, length)),
    };
    let kinds = [table.component(i).kind, table.component(j).kind];
    let analytic_class = if kinds == [ComponentKind::Neutral; 2] {
        // Chords between parallel flat walls are reported as unstable,
        // although both expressions vanish.
        StabilityClass::Unstable
    } else {
        classify_period_two(length, k0, k1)
    };
    let elliptic_resonance_ok = (kinds == [ComponentKind::Focusing; 2]
        && matches!((gi, gj), (Geom::Arc(_), Geom::Arc(_))))
    .then(|| ellipticity_resonance(length, 1.0 / k0, 1.0 / k1));
    Some(PeriodTwoReport {
        endpoints: [p, q],
        component_ids: [table.component(i).id, table.component(j).id],
        states: [a, b],
        length,
        k0,
        k1,
        analytic_class,
        monodromy_trace: monodromy.trace(),
        monodromy_det: monodromy.det(),
        elliptic_resonance_ok,
        family,
    })
}

fn arc_arc(
    table: &BilliardTable,
    i: usize,
    a: &ArcGeom,
    j: usize,
    b: &ArcGeom,
) -> Vec<PeriodTwoReport> {
    let delta = b.center - a.center;
    let mut out = Vec::new();
    if delta.norm() < 1e-12 * table.diameter().max(1.0) {
        // Concentric: every common radial line is an orbit. Report the one
        // through the middle of the first arc's range.
        let u = Vec2::from_angle(a.angle_at(0.5 * a.length()));
        for su in [1.0, -1.0] {
            let p = a.center + u * a.radius;
            let q = b.center + u * (su * b.radius);
            if let Some(rep) = chord_report(table, i, p, j, q, true) {
                out.push(rep);
            }
        }
        return out;
    }
    let u = delta.normalized();
    for sp in [1.0, -1.0] {
        for sq in [1.0, -1.0] {
            let p = a.center + u * (sp * a.radius);
            let q = b.center + u * (sq * b.radius);
            if let Some(rep) = chord_report(table, i, p, j, q, false) {
                out.push(rep);
            }
        }
    }
    out
}

fn arc_self(table: &BilliardTable, i: usize, a: &ArcGeom) -> Option<PeriodTwoReport> {
    // Diameters with both ends on the arc.
    let spare = a.extent() - PI;
    if spare <= 0.0 {
        return None;
    }
    let ang = a.angle_at(0.5 * spare * a.radius);
    let p = a.center + Vec2::from_angle(ang) * a.radius;
    let q = a.center - Vec2::from_angle(ang) * a.radius;
    chord_report(table, i, p, i, q, true)
}

fn arc_segment(
    table: &BilliardTable,
    i: usize,
    a: &ArcGeom,
    j: usize,
    s: &SegmentGeom,
) -> Vec<PeriodTwoReport> {
    let n = s.direction().perp();
    let foot = a.center - n * (a.center - s.a).dot(n);
    let mut out = Vec::new();
    for sp in [1.0, -1.0] {
        let p = a.center + n * (sp * a.radius);
        if let Some(rep) = chord_report(table, i, p, j, foot, false) {
            out.push(rep);
        }
    }
    out
}

fn segment_segment(
    table: &BilliardTable,
    i: usize,
    s: &SegmentGeom,
    j: usize,
    t: &SegmentGeom,
) -> Option<PeriodTwoReport> {
    let d = s.direction();
    if d.cross(t.direction()).abs() > 1e-12 || d.dot(t.direction()) > 0.0 {
        return None;
    }
    let n = d.perp();
    if (t.a - s.a).dot(n) <= 0.0 {
        return None;
    }
    let len = s.length();
    let lo = (t.b - s.a).dot(d).max(0.0);
    let hi = (t.a - s.a).dot(d).min(len);
    if hi - lo <= 1e-9 * len {
        return None;
    }
    // Obstacles may block part of the family; keep the longest free run.
    let samples = 65;
    let gap = (t.a - s.a).dot(n);
    let free: Vec<bool> = (0..samples)
        .map(|k| {
            let u = lo + (hi - lo) * (k as f64 + 0.5) / samples as f64;
            let p = s.a + d * u;
            chord_report(table, i, p, j, p + n * gap, true).is_some()
        })
        .collect();
    let (mut best, mut run_start) = (None::<(usize, usize)>, None);
    for k in 0..=samples {
        let ok = k < samples && free[k];
        match (ok, run_start) {
            (true, None) => run_start = Some(k),
            (false, Some(st)) => {
                if best.is_none_or(|(a, b)| k - st > b - a) {
                    best = Some((st, k));
                }
                run_start = None;
            }
            _ => {}
        }
    }
    let (a, b) = best?;
    let mid = 0.5 * (a + b - 1) as f64;
    let u = lo + (hi - lo) * (mid + 0.5) / samples as f64;
    let p = s.a + d * u;
    chord_report(table, i, p, j, p + n * gap, true)
}

/// All period-two orbits of the table, in component-index order.
pub fn find_period_two(table: &BilliardTable) -> Vec<PeriodTwoReport> {
    let comps = table.components();
    let mut out = Vec::new();
    for i in 0..comps.len() {
        if let Geom::Arc(a) = comps[i].geom {
            out.extend(arc_self(table, i, &a));
        }
        for j in (i + 1)..comps.len() {
            match (comps[i].geom, comps[j].geom) {
                (Geom::Arc(a), Geom::Arc(b)) => out.extend(arc_arc(table, i, &a, j, &b)),
                (Geom::Arc(a), Geom::Segment(s)) => out.extend(arc_segment(table, i, &a, j, &s)),
                (Geom::Segment(s), Geom::Arc(a)) => {
                    out.extend(arc_segment(table, j, &a, i, &s).into_iter().map(swap_ends))
                }
                (Geom::Segment(s), Geom::Segment(t)) => {
                    out.extend(segment_segment(table, i, &s, j, &t))
                }
            }
        }
    }
    out
}

/// Reorders a report so that the lower component index comes first.
fn swap_ends(mut r: PeriodTwoReport) -> PeriodTwoReport {
    r.endpoints.swap(0, 1);
    r.component_ids.swap(0, 1);
    r.states.swap(0, 1);
    std::mem::swap(&mut r.k0, &mut r.k1);
    r
}

/// Monodromy of a report recomputed from the closed-form tangent map.
pub fn monodromy(table: &BilliardTable, report: &PeriodTwoReport) -> TangentMatrix {
    let [a, b] = report.states;
    tangent_between(table, &b, &a, report.length).mul(&tangent_between(
        table,
        &a,
        &b,
        report.length,
    ))
}
