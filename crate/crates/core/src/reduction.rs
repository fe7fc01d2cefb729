//! Reduced tables: the region available to the center of a disk of radius
//! `r`, i.e. the table eroded by `r`.
//!
//! Each component is offset along its inward normal, then neighbouring
//! offsets are re-joined and trimmed. Components whose trimmed range becomes
//! empty are dropped and their neighbours re-joined until nothing changes.
//! [`reduced_membership_oracle`] is the independent definition used to check
//! the result.

use serde::Serialize;
use thiserror::Error;

use crate::geometry::{
    circle_circle, line_circle, line_line, ArcGeom, Geom, Point2, SegmentGeom, Vec2, MIN_FEATURE,
};
use crate::table::{BilliardTable, BoundaryComponent, TableError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReductionError {
    #[error("particle radius must be finite and non-negative, got {0}")]
    InvalidRadius(f64),
    #[error("input table is invalid: {}", .0.join("; "))]
    InvalidTable(Vec<String>),
    #[error("table vanished: a particle of radius {r} does not fit")]
    TableVanished { r: f64 },
    #[error("unsupported topology change at r = {r}: {reason}")]
    UnsupportedTopology { r: f64, reason: String },
}

/// Offset of a single component, before trimming.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Offset {
    /// Same angular range (arcs) or same extent along the normal (segments).
    Survives(Geom),
    Vanished,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReductionReport {
    pub r: f64,
    /// Ids of the original components absent from the reduced table.
    pub vanished: Vec<usize>,
    pub components_before: usize,
    pub components_after: usize,
}

#[derive(Debug, Clone)]
pub struct ReductionResult {
    pub reduced: BilliardTable,
    pub report: ReductionReport,
}

/// Moves every point of the component by `r` along its inward normal.
pub fn offset_component(comp: &BoundaryComponent, r: f64) -> Offset {
    match comp.geom {
        Geom::Segment(s) => {
            let n = s.direction().perp();
            Offset::Survives(Geom::Segment(SegmentGeom {
                a: s.a + n * r,
                b: s.b + n * r,
            }))
        }
        Geom::Arc(a) => {
            // The inward normal points at the center for focusing arcs and
            // away from it for dispersing ones.
            let radius = a.radius - a.traversal.sign() * r;
            if radius <= MIN_FEATURE {
                Offset::Vanished
            } else {
                Offset::Survives(Geom::Arc(ArcGeom { radius, ..a }))
            }
        }
    }
}

pub fn point_in_table(table: &BilliardTable, p: Point2) -> bool {
    table.contains(p)
}

/// Erosion by definition: inside the table and at least `r` away from its
/// boundary.
pub fn reduced_membership_oracle(table: &BilliardTable, r: f64, p: Point2) -> bool {
    table.contains(p) && table.distance_to_boundary(p) >= r
}

/// Intersections of the full carriers (line or circle) of two components.
fn carrier_intersections(a: &Geom, b: &Geom) -> Vec<Point2> {
    match (a, b) {
        (Geom::Segment(s), Geom::Segment(t)) => line_line(s.a, s.direction(), t.a, t.direction())
            .into_iter()
            .collect(),
        (Geom::Segment(s), Geom::Arc(c)) | (Geom::Arc(c), Geom::Segment(s)) => {
            line_circle(s.a, s.direction(), c.center, c.radius)
        }
        (Geom::Arc(c), Geom::Arc(d)) => circle_circle(c.center, c.radius, d.center, d.radius),
    }
}

/// Arclength parameter of `q` on the provisional offset geometry.
fn param_on(g: &Geom, q: Point2) -> f64 {
    g.param_of(q)
}

struct Live {
    index: usize,
    geom: Geom,
}

enum JoinFailure {
    Disjoint,
}

fn join(table: &BilliardTable, r: f64, a: &Live, b: &Live) -> Result<Point2, JoinFailure> {
    let adjacent = table.next_in_loop(a.index) == b.index;
    if adjacent {
        let joint = table.joint_after(a.index);
        if joint.is_tangential() {
            let comp = table.component(a.index);
            return Ok(joint.point + comp.geom.normal_at(comp.length) * r);
        }
    }
    let reference = if adjacent {
        table.joint_after(a.index).point
    } else {
        (table.component(a.index).geom.end() + table.component(b.index).geom.start()) * 0.5
    };
    let candidates = carrier_intersections(&a.geom, &b.geom);
    if candidates.is_empty() {
        return Err(JoinFailure::Disjoint);
    }
    // True joints of the eroded region sit exactly at distance r from the
    // original boundary.
    let tol = 1e-8 * table.diameter().max(1.0);
    let on_erosion: Vec<Point2> = candidates
        .iter()
        .copied()
        .filter(|q| table.contains(*q) && (table.distance_to_boundary(*q) - r).abs() < tol)
        .collect();
    let pool = if on_erosion.is_empty() {
        candidates
    } else {
        on_erosion
    };
    Ok(pool
        .into_iter()
        .min_by(|p, q| p.distance(reference).total_cmp(&q.distance(reference)))
        .expect("non-empty pool"))
}

/// Whether some point of an untrimmed offset lies on the eroded boundary.
/// Trimming only ever shortens an offset, so a piece with no such point
/// cannot appear in the reduced table.
fn visible(table: &BilliardTable, r: f64, g: &Geom) -> bool {
    let tol = 1e-8 * table.diameter().max(1.0);
    let n = 256;
    (0..=n).any(|k| {
        let p = g.point_at(g.length() * k as f64 / n as f64);
        table.contains(p) && table.distance_to_boundary(p) > r - tol
    })
}

/// Coarse emptiness test of the eroded region, used to tell a vanished
/// table from a topology change.
fn erosion_looks_empty(table: &BilliardTable, r: f64) -> bool {
    let (lo, hi) = bounding_box(table);
    let n = 96;
    for i in 0..n {
        for j in 0..n {
            let p = Vec2::new(
                lo.x + (hi.x - lo.x) * (i as f64 + 0.5) / n as f64,
                lo.y + (hi.y - lo.y) * (j as f64 + 0.5) / n as f64,
            );
            if reduced_membership_oracle(table, r, p) {
                return false;
            }
        }
    }
    true
}

/// Axis-aligned bounding box of the boundary (sampled).
pub fn bounding_box(table: &BilliardTable) -> (Point2, Point2) {
    let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for c in table.components() {
        let n = 64;
        for k in 0..=n {
            let p = c.geom.point_at(c.length * k as f64 / n as f64);
            lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
    }
    (lo, hi)
}

fn vanished_or_split(table: &BilliardTable, r: f64, reason: &str) -> ReductionError {
    if erosion_looks_empty(table, r) {
        ReductionError::TableVanished { r }
    } else {
        ReductionError::UnsupportedTopology {
            r,
            reason: reason.to_owned(),
        }
    }
}

fn trimmed(live: &Live, start: Point2, end: Point2) -> Result<(Geom, f64, f64), TableError> {
    let p0 = param_on(&live.geom, start);
    let p1 = param_on(&live.geom, end);
    let geom = match live.geom {
        Geom::Segment(_) => Geom::Segment(SegmentGeom::new(start, end)?),
        Geom::Arc(a) => {
            let a0 = a.angle_at(p0);
            let a1 = a.angle_at(p1);
            Geom::Arc(ArcGeom::new(a.center, a.radius, a0, a1, a.traversal)?)
        }
    };
    Ok((geom, p0, p1))
}

/// Offsets and trims one loop. Returns the surviving components (with their
/// original ids) and the ids that vanished.
fn reduce_loop(
    table: &BilliardTable,
    loop_index: usize,
    r: f64,
) -> Result<(Vec<BoundaryComponent>, Vec<usize>), ReductionError> {
    let range = table.loops()[loop_index].clone();
    let mut vanished = Vec::new();
    let mut live = Vec::new();
    for i in range {
        match offset_component(table.component(i), r) {
            Offset::Survives(geom) => live.push(Live { index: i, geom }),
            Offset::Vanished => vanished.push(table.component(i).id),
        }
    }
    if live.len() == 1 {
        if let Geom::Arc(a) = live[0].geom {
            if a.is_full_circle() {
                let id = table.component(live[0].index).id;
                return Ok((vec![BoundaryComponent::new(id, live[0].geom)], vanished));
            }
        }
    }
    let min_len = MIN_FEATURE.max(1e-10 * table.diameter());
    loop {
        if live.len() < 2 {
            return Err(if loop_index == 0 {
                ReductionError::TableVanished { r }
            } else {
                ReductionError::UnsupportedTopology {
                    r,
                    reason: "obstacle lost its boundary".into(),
                }
            });
        }
        let n = live.len();
        let mut joints = Vec::with_capacity(n);
        let mut hidden = None;
        for k in 0..n {
            let (a, b) = (&live[k], &live[(k + 1) % n]);
            match join(table, r, a, b) {
                Ok(q) => joints.push(q),
                Err(JoinFailure::Disjoint) => {
                    // One of the two offsets is everywhere closer than r to
                    // some other part of the boundary.
                    if !visible(table, r, &a.geom) {
                        hidden = Some(k);
                    } else if !visible(table, r, &b.geom) {
                        hidden = Some((k + 1) % n);
                    } else {
                        return Err(vanished_or_split(
                            table,
                            r,
                            "offset boundary pieces no longer meet",
                        ));
                    }
                    break;
                }
            }
        }
        if let Some(k) = hidden {
            let gone = live.remove(k);
            vanished.push(table.component(gone.index).id);
            continue;
        }
        let mut worst: Option<(usize, f64)> = None;
        for k in 0..n {
            let start = joints[(k + n - 1) % n];
            let end = joints[k];
            let len = param_on(&live[k].geom, end) - param_on(&live[k].geom, start);
            if len < min_len && worst.is_none_or(|w| len < w.1) {
                worst = Some((k, len));
            }
        }
        match worst {
            Some((k, _)) => {
                let gone = live.remove(k);
                vanished.push(table.component(gone.index).id);
            }
            None => {
                let mut out = Vec::with_capacity(n);
                for k in 0..n {
                    let (geom, _, _) = trimmed(&live[k], joints[(k + n - 1) % n], joints[k])
                        .map_err(|_| vanished_or_split(table, r, "degenerate trimmed component"))?;
                    out.push(BoundaryComponent::new(
                        table.component(live[k].index).id,
                        geom,
                    ));
                }
                return Ok((out, vanished));
            }
        }
    }
}

/// Erodes a validated table by `r`.
pub fn reduce_table(table: &BilliardTable, r: f64) -> Result<ReductionResult, ReductionError> {
    if !(r.is_finite() && r >= 0.0) {
        return Err(ReductionError::InvalidRadius(r));
    }
    let report = table.validate();
    if !report.valid {
        return Err(ReductionError::InvalidTable(report.failures));
    }
    let before = table.components().len();
    if r == 0.0 {
        return Ok(ReductionResult {
            reduced: table.clone(),
            report: ReductionReport {
                r,
                vanished: Vec::new(),
                components_before: before,
                components_after: before,
            },
        });
    }
    let mut loops = Vec::new();
    let mut vanished = Vec::new();
    for l in 0..table.loops().len() {
        let (comps, gone) = reduce_loop(table, l, r)?;
        loops.push(comps);
        vanished.extend(gone);
    }
    vanished.sort_unstable();
    let reduced = BilliardTable::from_components(format!("{}_reduced", table.name), loops)
        .map_err(|_| ReductionError::TableVanished { r })?;
    if !(reduced.signed_area(0) > 0.0) {
        return Err(ReductionError::TableVanished { r });
    }
    let check = reduced.validate();
    if !check.valid {
        return Err(vanished_or_split(table, r, &check.failures.join("; ")));
    }
    let after = reduced.components().len();
    Ok(ReductionResult {
        reduced,
        report: ReductionReport {
            r,
            vanished,
            components_before: before,
            components_after: after,
        },
    })
}

/// Largest radius for which [`reduce_table`] succeeds, by bisection.
pub fn max_radius(table: &BilliardTable) -> f64 {
    let (mut lo, mut hi) = (0.0, 0.5 * table.diameter());
    for _ in 0..48 {
        let mid = 0.5 * (lo + hi);
        if reduce_table(table, mid).is_ok() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Traversal;
    use crate::table::scenarios::{circle, equilateral_triangle, fig4, sinai, square};
    use crate::table::ComponentKind;

    fn arc_of(t: &BilliardTable, i: usize) -> ArcGeom {
        match t.component(i).geom {
            Geom::Arc(a) => a,
            _ => panic!("component {i} is not an arc"),
        }
    }

    #[test]
    fn offsets_of_arcs() {
        let focusing = BoundaryComponent::new(
            0,
            Geom::Arc(ArcGeom::circle(Vec2::ZERO, 1.0, Traversal::Ccw).unwrap()),
        );
        match offset_component(&focusing, 0.25) {
            Offset::Survives(Geom::Arc(a)) => assert_eq!(a.radius, 0.75),
            other => panic!("{other:?}"),
        }
        let dispersing = BoundaryComponent::new(
            0,
            Geom::Arc(ArcGeom::circle(Vec2::ZERO, 1.0, Traversal::Cw).unwrap()),
        );
        match offset_component(&dispersing, 0.25) {
            Offset::Survives(Geom::Arc(a)) => assert_eq!(a.radius, 1.25),
            other => panic!("{other:?}"),
        }
        let small = BoundaryComponent::new(
            0,
            Geom::Arc(ArcGeom::circle(Vec2::ZERO, 0.5, Traversal::Ccw).unwrap()),
        );
        assert_eq!(offset_component(&small, 0.5), Offset::Vanished);
    }

    #[test]
    fn circle_shrinks() {
        let t = circle(1.0).unwrap();
        let red = reduce_table(&t, 0.3).unwrap().reduced;
        assert_eq!(red.components().len(), 1);
        assert!((arc_of(&red, 0).radius - 0.7).abs() < 1e-15);
        assert!(matches!(
            reduce_table(&t, 2.0),
            Err(ReductionError::TableVanished { .. })
        ));
    }

    #[test]
    fn triangle_side_shrinks_by_two_sqrt3_r() {
        let t = equilateral_triangle(2.0).unwrap();
        let red = reduce_table(&t, 0.1).unwrap().reduced;
        let side = 2.0 - 2.0 * 3f64.sqrt() * 0.1;
        assert_eq!(red.components().len(), 3);
        for c in red.components() {
            assert!((c.length - side).abs() < 1e-12, "{}", c.length);
        }
    }

    #[test]
    fn fig4_arc_vanishes_at_its_radius() {
        let t = fig4(4.0, 0.5).unwrap();
        let before = reduce_table(&t, 0.49).unwrap();
        assert_eq!(before.reduced.components().len(), 4);
        let at = reduce_table(&t, 0.5).unwrap();
        assert_eq!(at.report.vanished, vec![2]);
        let red = at.reduced;
        assert_eq!(red.components().len(), 3);
        assert!(red
            .components()
            .iter()
            .all(|c| c.kind == ComponentKind::Neutral));
        let side = 4.0 - 2.0 * 3f64.sqrt() * 0.5;
        for c in red.components() {
            assert!((c.length - side).abs() < 1e-9, "{}", c.length);
        }
    }

    #[test]
    fn oracle_examples() {
        let c = circle(1.0).unwrap();
        assert!(reduced_membership_oracle(&c, 0.3, Vec2::new(0.69, 0.0)));
        assert!(!reduced_membership_oracle(&c, 0.3, Vec2::new(0.71, 0.0)));
        assert!(point_in_table(&c, Vec2::ZERO));
        assert!(!point_in_table(&c, Vec2::new(2.0, 0.0)));
        let sq = square(2.0).unwrap();
        assert!(reduced_membership_oracle(&sq, 0.5, Vec2::new(0.49, 0.49)));
        assert!(!reduced_membership_oracle(&sq, 0.5, Vec2::new(0.51, 0.0)));
        assert!(!point_in_table(&sinai(4.0, 1.0).unwrap(), Vec2::ZERO));
    }

    #[test]
    fn sinai_scatterer_grows_until_it_touches_the_walls() {
        let t = sinai(4.0, 1.0).unwrap();
        let red = reduce_table(&t, 0.4).unwrap().reduced;
        assert!((arc_of(&red, 4).radius - 1.4).abs() < 1e-15);
        assert!(matches!(
            reduce_table(&t, 0.6),
            Err(ReductionError::UnsupportedTopology { .. })
        ));
    }
}
