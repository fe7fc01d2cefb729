//! Billiard tables: closed loops of segments and circular arcs.
//!
//! The first loop is the outer boundary (counterclockwise), every further
//! loop is an obstacle (clockwise). Components are stored flat; the global
//! boundary coordinate `s` runs through the outer loop first and then
//! through each obstacle loop in order.

mod json;
pub mod scenarios;

use std::f64::consts::{FRAC_PI_2, PI};
use std::ops::Range;

use serde::Serialize;
use thiserror::Error;

use crate::dynamics::BoundaryState;
use crate::geometry::{ArcGeom, Geom, Point2, Vec2};

pub use json::{table_from_json, table_to_json, write_json_pretty};
pub use scenarios::{build_scenario, ScenarioParams};

/// Angular tolerance for declaring a joint tangential.
pub const TANGENT_TOL: f64 = 1e-9;
/// Loop closure tolerance.
pub const CLOSURE_TOL: f64 = 1e-9;
/// Boundary band that counts as inside for point membership.
pub const BOUNDARY_BAND: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TableError {
    #[error("bad parameters for {scenario}: {reason}")]
    BadParams { scenario: String, reason: String },
    #[error("unknown scenario {0:?}")]
    UnknownScenario(String),
    #[error("invalid table: {}", .0.join("; "))]
    Invalid(Vec<String>),
    #[error("point ({x}, {y}) is not on the boundary")]
    PointNotOnBoundary { x: f64, y: f64 },
    #[error("direction does not point into the table")]
    DirectionNotInward,
    #[error("geometry: {0}")]
    Geometry(#[from] crate::geometry::GeometryError),
    #[error("table json: {0}")]
    Json(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentKind {
    Focusing,
    Dispersing,
    Neutral,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryComponent {
    /// Stable identifier; survives table reduction.
    pub id: usize,
    pub geom: Geom,
    pub kind: ComponentKind,
    pub length: f64,
}

impl BoundaryComponent {
    pub fn new(id: usize, geom: Geom) -> Self {
        let k = geom.curvature();
        let kind = if k > 0.0 {
            ComponentKind::Focusing
        } else if k < 0.0 {
            ComponentKind::Dispersing
        } else {
            ComponentKind::Neutral
        };
        Self {
            id,
            geom,
            kind,
            length: geom.length(),
        }
    }

    pub fn curvature(&self) -> f64 {
        self.geom.curvature()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum JointKind {
    Tangential,
    /// Interior angle `alpha` in (0, pi).
    ConvexCorner {
        alpha: f64,
    },
    /// Interior angle in (pi, 2 pi); violates the no-internal-corner rule.
    ReflexCorner {
        alpha: f64,
    },
}

/// The joint at the end of a component, shared with its loop successor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Joint {
    pub from: usize,
    pub to: usize,
    pub kind: JointKind,
    #[serde(skip)]
    pub point: Point2,
    /// Distance between the end of `from` and the start of `to`.
    pub gap: f64,
}

impl Joint {
    pub fn is_tangential(&self) -> bool {
        matches!(self.kind, JointKind::Tangential)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub closed: bool,
    pub orientation_ok: bool,
    pub nic: bool,
    pub joints: Vec<Joint>,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct BilliardTable {
    pub name: String,
    components: Vec<BoundaryComponent>,
    loops: Vec<Range<usize>>,
    offsets: Vec<f64>,
    joints: Vec<Joint>,
    total_length: f64,
    diameter: f64,
}

impl BilliardTable {
    /// Builds a table from loops of geometry; component ids follow storage
    /// order. No validation beyond structure.
    pub fn from_loops(name: impl Into<String>, loops: Vec<Vec<Geom>>) -> Result<Self, TableError> {
        let mut id = 0;
        let loops = loops
            .into_iter()
            .map(|l| {
                l.into_iter()
                    .map(|g| {
                        id += 1;
                        BoundaryComponent::new(id - 1, g)
                    })
                    .collect()
            })
            .collect();
        Self::from_components(name, loops)
    }

    pub fn from_components(
        name: impl Into<String>,
        loops: Vec<Vec<BoundaryComponent>>,
    ) -> Result<Self, TableError> {
        if loops.is_empty() || loops.iter().any(|l| l.is_empty()) {
            return Err(TableError::Invalid(vec![
                "table needs non-empty loops".into()
            ]));
        }
        let mut components = Vec::new();
        let mut ranges = Vec::new();
        for l in loops {
            let start = components.len();
            components.extend(l);
            ranges.push(start..components.len());
        }
        let mut offsets = Vec::with_capacity(components.len());
        let mut acc = 0.0;
        for c in &components {
            offsets.push(acc);
            acc += c.length;
        }
        let mut table = Self {
            name: name.into(),
            components,
            loops: ranges,
            offsets,
            joints: Vec::new(),
            total_length: acc,
            diameter: 0.0,
        };
        table.joints = (0..table.components.len())
            .map(|i| table.compute_joint(i))
            .collect();
        table.diameter = table.bounding_box_diagonal();
        Ok(table)
    }

    pub fn components(&self) -> &[BoundaryComponent] {
        &self.components
    }

    pub fn component(&self, index: usize) -> &BoundaryComponent {
        &self.components[index]
    }

    pub fn loops(&self) -> &[Range<usize>] {
        &self.loops
    }

    /// Components of each loop, cloned; convenient for rebuilding.
    pub fn loop_components(&self) -> Vec<Vec<BoundaryComponent>> {
        self.loops
            .iter()
            .map(|r| self.components[r.clone()].to_vec())
            .collect()
    }

    pub fn joints(&self) -> &[Joint] {
        &self.joints
    }

    /// Joint at the end of component `index`.
    pub fn joint_after(&self, index: usize) -> &Joint {
        &self.joints[index]
    }

    /// Joint at the start of component `index`.
    pub fn joint_before(&self, index: usize) -> &Joint {
        &self.joints[self.prev_in_loop(index)]
    }

    pub fn total_length(&self) -> f64 {
        self.total_length
    }

    /// Diagonal of the boundary's bounding box.
    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    pub fn offset(&self, index: usize) -> f64 {
        self.offsets[index]
    }

    pub fn loop_of(&self, index: usize) -> usize {
        self.loops
            .iter()
            .position(|r| r.contains(&index))
            .expect("component index out of range")
    }

    pub fn next_in_loop(&self, index: usize) -> usize {
        let r = &self.loops[self.loop_of(index)];
        if index + 1 == r.end {
            r.start
        } else {
            index + 1
        }
    }

    pub fn prev_in_loop(&self, index: usize) -> usize {
        let r = &self.loops[self.loop_of(index)];
        if index == r.start {
            r.end - 1
        } else {
            index - 1
        }
    }

    pub fn index_of_id(&self, id: usize) -> Option<usize> {
        self.components.iter().position(|c| c.id == id)
    }

    /// Maps global arclength to (component index, local arclength).
    pub fn locate(&self, s: f64) -> (usize, f64) {
        let s = s.rem_euclid(self.total_length);
        let idx = match self.offsets.partition_point(|&o| o <= s) {
            0 => 0,
            k => k - 1,
        };
        (
            idx,
            (s - self.offsets[idx]).min(self.components[idx].length),
        )
    }

    pub fn global_s(&self, index: usize, u: f64) -> f64 {
        self.offsets[index] + u
    }

    fn compute_joint(&self, i: usize) -> Joint {
        let j = self.next_in_loop(i);
        let gi = &self.components[i].geom;
        let gj = &self.components[j].geom;
        let end = gi.end();
        let start = gj.start();
        let t_in = gi.tangent_at(gi.length());
        let t_out = gj.tangent_at(0.0);
        let turn = t_in.cross(t_out).atan2(t_in.dot(t_out));
        let kind = if turn.abs() < TANGENT_TOL {
            JointKind::Tangential
        } else if turn > 0.0 {
            JointKind::ConvexCorner { alpha: PI - turn }
        } else {
            JointKind::ReflexCorner { alpha: PI - turn }
        };
        Joint {
            from: i,
            to: j,
            kind,
            point: end,
            gap: end.distance(start),
        }
    }

    fn bounding_box_diagonal(&self) -> f64 {
        let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        let mut add = |p: Point2| {
            lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
        };
        for c in &self.components {
            add(c.geom.start());
            add(c.geom.end());
            if let Geom::Arc(a) = c.geom {
                for k in 0..4 {
                    let ang = k as f64 * FRAC_PI_2;
                    if a.contains_angle(ang, 0.0) {
                        add(a.center + Vec2::from_angle(ang) * a.radius);
                    }
                }
            }
        }
        (hi - lo).norm()
    }

    pub fn signed_area(&self, loop_index: usize) -> f64 {
        self.components[self.loops[loop_index].clone()]
            .iter()
            .map(|c| match c.geom {
                Geom::Segment(s) => 0.5 * s.a.cross(s.b),
                Geom::Arc(a) => {
                    let p0 = c.geom.start();
                    let p1 = c.geom.end();
                    0.5 * (a.center.cross(p1 - p0)
                        + a.radius * a.radius * (a.angle_end - a.angle_start))
                }
            })
            .sum()
    }

    /// Area of the table region (outer area minus obstacle areas).
    pub fn area(&self) -> f64 {
        (0..self.loops.len()).map(|l| self.signed_area(l)).sum()
    }

    pub fn distance_to_boundary(&self, p: Point2) -> f64 {
        self.components
            .iter()
            .map(|c| c.geom.distance_to(p))
            .fold(f64::INFINITY, f64::min)
    }

    /// Even-odd membership; points within `BOUNDARY_BAND` of the boundary
    /// count as inside.
    pub fn contains(&self, p: Point2) -> bool {
        if self.distance_to_boundary(p) <= BOUNDARY_BAND {
            return true;
        }
        self.crossings(p, 0..self.components.len()) % 2 == 1
    }

    /// Even-odd test against a single loop, ignoring the others.
    pub fn loop_contains(&self, loop_index: usize, p: Point2) -> bool {
        self.crossings(p, self.loops[loop_index].clone()) % 2 == 1
    }

    /// Crossings of the ray `p + t (1, 0)`, `t > 0`, with the given
    /// components. Arcs are split into y-monotone pieces so that the
    /// half-open endpoint rule applies uniformly.
    fn crossings(&self, p: Point2, range: Range<usize>) -> usize {
        let mut count = 0;
        for c in &self.components[range] {
            match c.geom {
                Geom::Segment(s) => {
                    if (s.a.y > p.y) != (s.b.y > p.y) {
                        let x = s.a.x + (p.y - s.a.y) * (s.b.x - s.a.x) / (s.b.y - s.a.y);
                        if x > p.x {
                            count += 1;
                        }
                    }
                }
                Geom::Arc(a) => count += arc_crossings(&a, p),
            }
        }
        count
    }

    pub fn validate(&self) -> ValidationReport {
        let mut failures = Vec::new();
        let closed = self.joints.iter().all(|j| j.gap < CLOSURE_TOL);
        for j in self.joints.iter().filter(|j| j.gap >= CLOSURE_TOL) {
            failures.push(format!(
                "loop not closed between components {} and {} (gap {:e})",
                self.components[j.from].id, self.components[j.to].id, j.gap
            ));
        }
        let mut orientation_ok = true;
        for l in 0..self.loops.len() {
            let area = self.signed_area(l);
            let ok = if l == 0 { area > 0.0 } else { area < 0.0 };
            if !ok {
                orientation_ok = false;
                failures.push(format!(
                    "loop {l} has signed area {area:e}; outer loop must be counterclockwise, obstacles clockwise"
                ));
            }
        }
        let mut nic = true;
        for j in &self.joints {
            match j.kind {
                JointKind::ReflexCorner { alpha } => {
                    nic = false;
                    failures.push(format!(
                        "reflex corner (interior angle {alpha:.6}) between components {} and {}",
                        self.components[j.from].id, self.components[j.to].id
                    ));
                }
                JointKind::ConvexCorner { .. } if closed => {
                    if !self.corner_chords_inside(j) {
                        nic = false;
                        failures.push(format!(
                            "chords near the corner between components {} and {} leave the table",
                            self.components[j.from].id, self.components[j.to].id
                        ));
                    }
                }
                _ => {}
            }
        }
        failures.extend(self.crossing_failures());
        if closed && orientation_ok {
            if !(self.total_length > 0.0) || !(self.area() > 0.0) {
                failures.push("table has empty interior".into());
            } else if !self.has_interior_sample() {
                failures.push("no interior sample point found".into());
            }
            for l in 1..self.loops.len() {
                let probe = self.components[self.loops[l].start].geom.start();
                if !self.loop_contains(0, probe) {
                    failures.push(format!("obstacle loop {l} is not inside the outer loop"));
                }
                for m in 1..self.loops.len() {
                    if m != l && self.loop_contains(m, probe) && !self.loop_contains(l, probe) {
                        failures.push(format!("obstacle loops {l} and {m} overlap"));
                    }
                }
            }
        }
        ValidationReport {
            valid: failures.is_empty(),
            closed,
            orientation_ok,
            nic,
            joints: self.joints.clone(),
            failures,
        }
    }

    /// Errors unless the table validates.
    pub fn checked(self) -> Result<Self, TableError> {
        let report = self.validate();
        if report.valid {
            Ok(self)
        } else {
            Err(TableError::Invalid(report.failures))
        }
    }

    /// Any crossings between components other than at shared joints.
    fn crossing_failures(&self) -> Vec<String> {
        let mut failures = Vec::new();
        let n = self.components.len();
        for i in 0..n {
            for j in (i + 1)..n {
                let shared: Vec<Point2> = self
                    .joints
                    .iter()
                    .filter(|jt| (jt.from == i && jt.to == j) || (jt.from == j && jt.to == i))
                    .map(|jt| jt.point)
                    .collect();
                let tol = 1e-7 * self.diameter.max(1.0);
                let bad = self.components[i]
                    .geom
                    .intersections(&self.components[j].geom)
                    .into_iter()
                    .any(|p| shared.iter().all(|q| q.distance(p) > tol));
                if bad {
                    failures.push(format!(
                        "components {} and {} cross",
                        self.components[i].id, self.components[j].id
                    ));
                }
            }
        }
        failures
    }

    /// Local check of the convex-corner chord condition: short chords
    /// between points of the two components near the corner must stay in
    /// the table.
    fn corner_chords_inside(&self, joint: &Joint) -> bool {
        let a = &self.components[joint.from];
        let b = &self.components[joint.to];
        let reach = 0.25 * a.length.min(b.length).min(0.1 * self.diameter);
        for ka in 1..=4 {
            let pa = a.geom.point_at(a.length - reach * ka as f64 / 4.0);
            for kb in 1..=4 {
                let pb = b.geom.point_at(reach * kb as f64 / 4.0);
                for f in [0.25, 0.5, 0.75] {
                    let q = pa + (pb - pa) * f;
                    if !self.contains(q) && self.distance_to_boundary(q) > 1e-9 * self.diameter {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn has_interior_sample(&self) -> bool {
        let eps = 1e-6 * self.diameter;
        self.components.iter().any(|c| {
            let u = 0.5 * c.length;
            let q = c.geom.point_at(u) + c.geom.normal_at(u) * eps;
            self.contains(q) && self.distance_to_boundary(q) > 0.5 * eps
        })
    }

    /// Boundary point and unit tangent/normal at global arclength `s`.
    pub fn frame_at(&self, s: f64) -> (usize, f64, Point2, Vec2, Vec2) {
        let (idx, u) = self.locate(s);
        let g = &self.components[idx].geom;
        (idx, u, g.point_at(u), g.tangent_at(u), g.normal_at(u))
    }

    /// Birkhoff coordinates of a boundary point with an inward direction.
    pub fn boundary_coords(
        &self,
        point: Point2,
        direction: Vec2,
    ) -> Result<BoundaryState, TableError> {
        let (idx, dist) = self
            .components
            .iter()
            .enumerate()
            .map(|(i, c)| (i, c.geom.distance_to(point)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("table has components");
        if dist > crate::geometry::ON_COMPONENT_TOL {
            return Err(TableError::PointNotOnBoundary {
                x: point.x,
                y: point.y,
            });
        }
        let g = &self.components[idx].geom;
        let u = g.param_of(point).clamp(0.0, g.length());
        let d = direction.normalized();
        let cos_t = d.dot(g.normal_at(u));
        let sin_t = d.dot(g.tangent_at(u));
        if cos_t <= 0.0 {
            return Err(TableError::DirectionNotInward);
        }
        Ok(BoundaryState::new(
            idx,
            self.global_s(idx, u),
            sin_t.atan2(cos_t),
        ))
    }

    /// Inverse of [`boundary_coords`](Self::boundary_coords): the boundary
    /// point and outgoing unit direction of a state.
    pub fn embed(&self, state: &BoundaryState) -> (Point2, Vec2) {
        let g = &self.components[state.component].geom;
        let u = (state.s - self.offsets[state.component]).clamp(0.0, g.length());
        let (sin_t, cos_t) = state.theta.sin_cos();
        (
            g.point_at(u),
            g.normal_at(u) * cos_t + g.tangent_at(u) * sin_t,
        )
    }

    /// Rebuilds the table with a new name.
    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

fn arc_crossings(a: &ArcGeom, p: Point2) -> usize {
    // Split at the top and bottom of the circle so each piece is y-monotone.
    let sign = a.traversal.sign();
    let extent = a.extent();
    let mut cuts = vec![0.0];
    for k in [FRAC_PI_2, -FRAC_PI_2] {
        let t = crate::geometry::wrap_angle(sign * (k - a.angle_start), 0.0);
        if t > 0.0 && t < extent {
            cuts.push(t);
        }
    }
    cuts.push(extent);
    cuts.sort_by(f64::total_cmp);
    let mut count = 0;
    for w in cuts.windows(2) {
        let (t0, t1) = (w[0], w[1]);
        if t1 - t0 <= 0.0 {
            continue;
        }
        let ang0 = a.angle_start + sign * t0;
        // A full circle must close exactly, otherwise rounding in sin(2 pi)
        // breaks the half-open rule at its start point.
        let ang1 = if t1 == extent && a.is_full_circle() {
            a.angle_start
        } else {
            a.angle_start + sign * t1
        };
        let y0 = a.center.y + a.radius * ang0.sin();
        let y1 = a.center.y + a.radius * ang1.sin();
        if (y0 > p.y) == (y1 > p.y) {
            continue;
        }
        let mid = a.angle_start + sign * 0.5 * (t0 + t1);
        let dy = ((p.y - a.center.y) / a.radius).clamp(-1.0, 1.0);
        let half = a.radius * (1.0 - dy * dy).max(0.0).sqrt();
        let x = if mid.cos() >= 0.0 {
            a.center.x + half
        } else {
            a.center.x - half
        };
        if x > p.x {
            count += 1;
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{SegmentGeom, Traversal};

    fn polygon(points: &[(f64, f64)]) -> BilliardTable {
        let n = points.len();
        let segs = (0..n)
            .map(|i| {
                let (ax, ay) = points[i];
                let (bx, by) = points[(i + 1) % n];
                Geom::Segment(SegmentGeom::new(Vec2::new(ax, ay), Vec2::new(bx, by)).unwrap())
            })
            .collect();
        BilliardTable::from_loops("poly", vec![segs]).unwrap()
    }

    #[test]
    fn unit_square_validates_with_right_angle_corners() {
        let t = polygon(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
        let r = t.validate();
        assert!(r.valid, "{:?}", r.failures);
        assert!(r.nic);
        for j in &r.joints {
            match j.kind {
                JointKind::ConvexCorner { alpha } => assert!((alpha - FRAC_PI_2).abs() < 1e-12),
                other => panic!("unexpected joint {other:?}"),
            }
        }
    }

    #[test]
    fn l_shape_has_reflex_corner_and_fails_nic() {
        let t = polygon(&[
            (0.0, 0.0),
            (2.0, 0.0),
            (2.0, 1.0),
            (1.0, 1.0),
            (1.0, 2.0),
            (0.0, 2.0),
        ]);
        let r = t.validate();
        assert!(!r.valid);
        assert!(!r.nic);
        assert_eq!(
            r.joints
                .iter()
                .filter(|j| matches!(j.kind, JointKind::ReflexCorner { .. }))
                .count(),
            1
        );
    }

    #[test]
    fn clockwise_outer_loop_is_rejected() {
        let t = polygon(&[(0.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, 0.0)]);
        let r = t.validate();
        assert!(!r.orientation_ok);
        assert!(!r.valid);
    }

    #[test]
    fn open_loop_is_rejected() {
        let segs = vec![
            Geom::Segment(SegmentGeom::new(Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0)).unwrap()),
            Geom::Segment(SegmentGeom::new(Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)).unwrap()),
            Geom::Segment(SegmentGeom::new(Vec2::new(0.0, 1.0), Vec2::new(0.0, 0.1)).unwrap()),
        ];
        let r = BilliardTable::from_loops("open", vec![segs])
            .unwrap()
            .validate();
        assert!(!r.closed);
        assert!(!r.valid);
    }

    #[test]
    fn membership_with_arcs_and_obstacles() {
        let outer = vec![Geom::Arc(
            ArcGeom::circle(Vec2::ZERO, 3.0, Traversal::Ccw).unwrap(),
        )];
        let hole = vec![Geom::Arc(
            ArcGeom::circle(Vec2::new(1.0, 0.0), 1.0, Traversal::Cw).unwrap(),
        )];
        let t = BilliardTable::from_loops("annulus", vec![outer, hole]).unwrap();
        assert!(t.validate().valid);
        assert!(t.contains(Vec2::new(-1.0, 0.0)));
        assert!(!t.contains(Vec2::new(1.0, 0.0)));
        assert!(!t.contains(Vec2::new(3.5, 0.0)));
        // Rays through the top of the obstacle (a monotone-piece cut).
        assert!(t.contains(Vec2::new(-2.0, 1.0)));
        assert!(t.contains(Vec2::new(0.0, 1.0)));
        assert!((t.area() - (9.0 * PI - PI)).abs() < 1e-12);
    }

    #[test]
    fn boundary_coords_conventions_on_circle() {
        let t = BilliardTable::from_loops(
            "circle",
            vec![vec![Geom::Arc(
                ArcGeom::circle(Vec2::ZERO, 1.0, Traversal::Ccw).unwrap(),
            )]],
        )
        .unwrap();
        let s = t
            .boundary_coords(Vec2::new(1.0, 0.0), Vec2::new(-1.0, 0.0))
            .unwrap();
        assert!(s.theta.abs() < 1e-15);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = t
            .boundary_coords(Vec2::new(1.0, 0.0), Vec2::new(-h, h))
            .unwrap();
        assert!((s.theta - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        assert!(matches!(
            t.boundary_coords(Vec2::new(1.0, 0.0), Vec2::new(1.0, 0.0)),
            Err(TableError::DirectionNotInward)
        ));
        assert!(matches!(
            t.boundary_coords(Vec2::new(0.5, 0.0), Vec2::new(-1.0, 0.0)),
            Err(TableError::PointNotOnBoundary { .. })
        ));
    }

    #[test]
    fn boundary_coords_on_square_side() {
        let t = polygon(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
        let dir = Vec2::new(0.0, 1.0).rotate(-PI / 6.0);
        let s = t.boundary_coords(Vec2::new(0.5, 0.0), dir).unwrap();
        // Rotating the normal clockwise tilts it toward +x, the traversal
        // direction of the bottom side.
        assert!((s.theta - PI / 6.0).abs() < 1e-15);
        assert!((s.s - 0.5).abs() < 1e-15);
    }
}
