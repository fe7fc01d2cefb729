//! Planar primitives for billiard boundaries: points, segments and circular
//! arcs, ray casting, normals, signed curvature and specular reflection.
//!
//! Every boundary piece is traversed with the table interior on its left.
//! Outer loops therefore run counterclockwise and obstacle loops clockwise,
//! and the inward normal is always the tangent rotated by +90 degrees.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Distance tolerance for "point lies on a component".
pub const ON_COMPONENT_TOL: f64 = 1e-9;
/// Incidence below this `|v . n|` is treated as a tangency.
pub const GRAZING_DOT: f64 = 1e-12;
/// Relative discriminant guard for line/circle roots.
pub const DISCRIMINANT_REL_TOL: f64 = 1e-14;
/// Minimum length of a segment and minimum radius of an arc.
pub const MIN_FEATURE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("point ({x}, {y}) is {distance:e} away from the component")]
    PointNotOnComponent { x: f64, y: f64, distance: f64 },
    #[error("grazing impact: |v . n| = {0:e}")]
    GrazingImpact(f64),
    #[error("degenerate segment (length {0:e})")]
    DegenerateSegment(f64),
    #[error("invalid arc: {0}")]
    InvalidArc(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

/// Positions and directions share one representation.
pub type Point2 = Vec2;

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn from_angle(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self::new(c, s)
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn normalized(self) -> Vec2 {
        let n = self.norm();
        Vec2::new(self.x / n, self.y / n)
    }

    /// Counterclockwise rotation by 90 degrees.
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn distance(self, o: Vec2) -> f64 {
        (self - o).norm()
    }

    pub fn rotate(self, angle: f64) -> Vec2 {
        let (s, c) = angle.sin_cos();
        Vec2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, k: f64) -> Vec2 {
        Vec2::new(self.x * k, self.y * k)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    fn mul(self, v: Vec2) -> Vec2 {
        v * self
    }
}

/// Wraps an angle into `[lo, lo + 2pi)`.
pub fn wrap_angle(angle: f64, lo: f64) -> f64 {
    let mut a = (angle - lo).rem_euclid(TAU) + lo;
    if a >= lo + TAU {
        a -= TAU;
    }
    a
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Traversal {
    Ccw,
    Cw,
}

impl Traversal {
    pub fn sign(self) -> f64 {
        match self {
            Traversal::Ccw => 1.0,
            Traversal::Cw => -1.0,
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            Traversal::Ccw => Traversal::Cw,
            Traversal::Cw => Traversal::Ccw,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentGeom {
    pub a: Point2,
    pub b: Point2,
}

impl SegmentGeom {
    pub fn new(a: Point2, b: Point2) -> Result<Self, GeometryError> {
        let len = a.distance(b);
        if len <= MIN_FEATURE {
            return Err(GeometryError::DegenerateSegment(len));
        }
        Ok(Self { a, b })
    }

    pub fn length(&self) -> f64 {
        self.a.distance(self.b)
    }

    pub fn direction(&self) -> Vec2 {
        (self.b - self.a).normalized()
    }
}

/// Circular arc swept from `angle_start` to `angle_end` in the direction of
/// `traversal`. For `Ccw` the end angle is larger, for `Cw` smaller.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcGeom {
    pub center: Point2,
    pub radius: f64,
    pub angle_start: f64,
    pub angle_end: f64,
    pub traversal: Traversal,
}

impl ArcGeom {
    pub fn new(
        center: Point2,
        radius: f64,
        angle_start: f64,
        angle_end: f64,
        traversal: Traversal,
    ) -> Result<Self, GeometryError> {
        if !(radius > MIN_FEATURE) || !radius.is_finite() {
            return Err(GeometryError::InvalidArc(format!("radius {radius}")));
        }
        let arc = Self {
            center,
            radius,
            angle_start,
            angle_end,
            traversal,
        };
        let extent = arc.extent();
        if !(extent > 0.0 && extent <= TAU + 1e-12) {
            return Err(GeometryError::InvalidArc(format!(
                "angular extent {extent} outside (0, 2pi]"
            )));
        }
        Ok(arc)
    }

    /// Full circle starting at angle 0.
    pub fn circle(
        center: Point2,
        radius: f64,
        traversal: Traversal,
    ) -> Result<Self, GeometryError> {
        Self::new(center, radius, 0.0, traversal.sign() * TAU, traversal)
    }

    pub fn extent(&self) -> f64 {
        self.traversal.sign() * (self.angle_end - self.angle_start)
    }

    pub fn length(&self) -> f64 {
        self.radius * self.extent()
    }

    pub fn is_full_circle(&self) -> bool {
        (self.extent() - TAU).abs() < 1e-12
    }

    pub fn angle_at(&self, u: f64) -> f64 {
        self.angle_start + self.traversal.sign() * u / self.radius
    }

    /// Angular offset of `angle` from the start, measured along the
    /// traversal and wrapped into a window centered on the arc midpoint, so
    /// that points in the gap are attributed to the nearer end.
    pub fn angular_param(&self, angle: f64) -> f64 {
        let extent = self.extent();
        let delta = self.traversal.sign() * (angle - self.angle_start);
        if self.is_full_circle() {
            return wrap_angle(delta, 0.0);
        }
        wrap_angle(delta, 0.5 * extent - PI)
    }

    pub fn contains_angle(&self, angle: f64, tol: f64) -> bool {
        let p = self.angular_param(angle);
        p >= -tol && p <= self.extent() + tol
    }

    /// Same locus traversed the other way, i.e. with the interior on the
    /// opposite side.
    pub fn reversed(&self) -> Self {
        Self {
            center: self.center,
            radius: self.radius,
            angle_start: self.angle_end,
            angle_end: self.angle_start,
            traversal: self.traversal.reversed(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Geom {
    Segment(SegmentGeom),
    Arc(ArcGeom),
}

/// Result of a ray cast against one component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayHit {
    pub t: f64,
    pub point: Point2,
    /// Set when the ray touches a circle at a (near) double root.
    pub grazing: bool,
}

impl Geom {
    pub fn length(&self) -> f64 {
        match self {
            Geom::Segment(s) => s.length(),
            Geom::Arc(a) => a.length(),
        }
    }

    pub fn start(&self) -> Point2 {
        self.point_at(0.0)
    }

    pub fn end(&self) -> Point2 {
        self.point_at(self.length())
    }

    /// Point at arclength `u` from the start.
    pub fn point_at(&self, u: f64) -> Point2 {
        match self {
            Geom::Segment(s) => s.a + s.direction() * u,
            Geom::Arc(a) => a.center + Vec2::from_angle(a.angle_at(u)) * a.radius,
        }
    }

    /// Unit tangent in the traversal direction at arclength `u`.
    pub fn tangent_at(&self, u: f64) -> Vec2 {
        match self {
            Geom::Segment(s) => s.direction(),
            Geom::Arc(a) => Vec2::from_angle(a.angle_at(u)).perp() * a.traversal.sign(),
        }
    }

    /// Inward normal at arclength `u` (the tangent turned left).
    pub fn normal_at(&self, u: f64) -> Vec2 {
        self.tangent_at(u).perp()
    }

    /// Signed curvature: positive for focusing arcs, negative for
    /// dispersing arcs, zero for segments.
    pub fn curvature(&self) -> f64 {
        match self {
            Geom::Segment(_) => 0.0,
            Geom::Arc(a) => a.traversal.sign() / a.radius,
        }
    }

    /// Arclength parameter of the point of the carrier (line or circle)
    /// closest to `p`. Not clamped to the component's range.
    pub fn param_of(&self, p: Point2) -> f64 {
        match self {
            Geom::Segment(s) => (p - s.a).dot(s.direction()),
            Geom::Arc(a) => a.radius * a.angular_param((p - a.center).angle()),
        }
    }

    /// Distance from `p` to the component itself (not its carrier).
    pub fn distance_to(&self, p: Point2) -> f64 {
        match self {
            Geom::Segment(s) => {
                let d = s.b - s.a;
                let t = ((p - s.a).dot(d) / d.norm_sq()).clamp(0.0, 1.0);
                p.distance(s.a + d * t)
            }
            Geom::Arc(a) => {
                let rel = p - a.center;
                let r = rel.norm();
                if r > 0.0 && a.contains_angle(rel.angle(), 0.0) {
                    (r - a.radius).abs()
                } else if r == 0.0 {
                    a.radius
                } else {
                    p.distance(self.start()).min(p.distance(self.end()))
                }
            }
        }
    }

    /// Smallest `t > t_min` with `origin + t dir` on the component.
    pub fn ray_intersection(&self, origin: Point2, dir: Vec2, t_min: f64) -> Option<RayHit> {
        self.ray_roots(origin, dir)
            .into_iter()
            .flatten()
            .filter(|h| h.t > t_min)
            .min_by(|a, b| a.t.total_cmp(&b.t))
    }

    /// All (at most two) ray parameters where the carrier meets the ray and
    /// the hit lies on the component, in increasing order; negative `t`
    /// included.
    pub fn ray_roots(&self, origin: Point2, dir: Vec2) -> [Option<RayHit>; 2] {
        match self {
            Geom::Segment(s) => [segment_ray(s, origin, dir), None],
            Geom::Arc(a) => arc_ray(a, origin, dir),
        }
    }

    pub fn reversed(&self) -> Geom {
        match self {
            Geom::Segment(s) => Geom::Segment(SegmentGeom { a: s.b, b: s.a }),
            Geom::Arc(a) => Geom::Arc(a.reversed()),
        }
    }

    /// Points where two components cross (endpoint contacts included).
    pub fn intersections(&self, other: &Geom) -> Vec<Point2> {
        let candidates = match (self, other) {
            (Geom::Segment(s), Geom::Segment(o)) => {
                line_line(s.a, s.direction(), o.a, o.direction())
                    .into_iter()
                    .collect::<Vec<_>>()
            }
            (Geom::Segment(s), Geom::Arc(a)) | (Geom::Arc(a), Geom::Segment(s)) => {
                line_circle(s.a, s.direction(), a.center, a.radius)
            }
            (Geom::Arc(a), Geom::Arc(b)) => circle_circle(a.center, a.radius, b.center, b.radius),
        };
        candidates
            .into_iter()
            .filter(|p| {
                self.distance_to(*p) < ON_COMPONENT_TOL && other.distance_to(*p) < ON_COMPONENT_TOL
            })
            .collect()
    }
}

fn segment_ray(s: &SegmentGeom, origin: Point2, dir: Vec2) -> Option<RayHit> {
    let d = s.b - s.a;
    let denom = dir.cross(d);
    if denom.abs() < 1e-15 * d.norm() {
        return None;
    }
    let w = s.a - origin;
    let t = w.cross(d) / denom;
    let u = w.cross(dir) / denom;
    if !(-1e-12..=1.0 + 1e-12).contains(&u) {
        return None;
    }
    Some(RayHit {
        t,
        point: s.a + d * u.clamp(0.0, 1.0),
        grazing: false,
    })
}

fn arc_ray(a: &ArcGeom, origin: Point2, dir: Vec2) -> [Option<RayHit>; 2] {
    let oc = origin - a.center;
    let b = dir.dot(oc);
    let c = oc.norm_sq() - a.radius * a.radius;
    let disc = b * b - c;
    let scale = (b * b).max(a.radius * a.radius);
    if disc < -DISCRIMINANT_REL_TOL * scale {
        return [None, None];
    }
    let check = |t: f64, grazing: bool| {
        let p = origin + dir * t;
        let ang = (p - a.center).angle();
        a.contains_angle(ang, 1e-12).then_some(RayHit {
            t,
            point: a.center + Vec2::from_angle(ang) * a.radius,
            grazing,
        })
    };
    if disc <= DISCRIMINANT_REL_TOL * scale {
        return [check(-b, true), None];
    }
    let sq = disc.sqrt();
    // Numerically stable pair of roots.
    let q = if b > 0.0 { -b - sq } else { -b + sq };
    let (mut t0, mut t1) = (q, c / q);
    if t0 > t1 {
        std::mem::swap(&mut t0, &mut t1);
    }
    [check(t0, false), check(t1, false)]
}

/// Intersection of two lines given by point and direction.
pub fn line_line(p: Point2, d: Vec2, q: Point2, e: Vec2) -> Option<Point2> {
    let denom = d.cross(e);
    if denom.abs() < 1e-14 {
        return None;
    }
    let t = (q - p).cross(e) / denom;
    Some(p + d * t)
}

/// Intersections of a line (point, unit direction) with a circle.
pub fn line_circle(p: Point2, d: Vec2, center: Point2, radius: f64) -> Vec<Point2> {
    let oc = p - center;
    let b = d.dot(oc);
    let c = oc.norm_sq() - radius * radius;
    let disc = b * b - c;
    let scale = (b * b).max(radius * radius);
    if disc < -DISCRIMINANT_REL_TOL * scale {
        Vec::new()
    } else if disc <= DISCRIMINANT_REL_TOL * scale {
        vec![p + d * (-b)]
    } else {
        let sq = disc.sqrt();
        vec![p + d * (-b - sq), p + d * (-b + sq)]
    }
}

pub fn circle_circle(c0: Point2, r0: f64, c1: Point2, r1: f64) -> Vec<Point2> {
    let delta = c1 - c0;
    let d = delta.norm();
    if d < 1e-14 || d > r0 + r1 + 1e-12 || d < (r0 - r1).abs() - 1e-12 {
        return Vec::new();
    }
    let a = (d * d + r0 * r0 - r1 * r1) / (2.0 * d);
    let h2 = r0 * r0 - a * a;
    let u = delta * (1.0 / d);
    let base = c0 + u * a;
    if h2 <= 1e-24 * r0 * r0 {
        return vec![base];
    }
    let h = h2.sqrt();
    vec![base + u.perp() * h, base - u.perp() * h]
}

/// Ray cast of a unit direction against one component.
pub fn ray_component_intersection(
    origin: Point2,
    dir: Vec2,
    comp: &Geom,
    t_min: f64,
) -> Option<RayHit> {
    comp.ray_intersection(origin, dir, t_min)
}

/// Inward unit normal at `point`, which must lie on `comp`.
pub fn inward_normal(comp: &Geom, point: Point2) -> Result<Vec2, GeometryError> {
    let distance = comp.distance_to(point);
    if distance > ON_COMPONENT_TOL {
        return Err(GeometryError::PointNotOnComponent {
            x: point.x,
            y: point.y,
            distance,
        });
    }
    let u = comp.param_of(point).clamp(0.0, comp.length());
    Ok(comp.normal_at(u))
}

pub fn signed_curvature(comp: &Geom) -> f64 {
    comp.curvature()
}

/// Specular reflection of an incoming unit velocity `v` off a wall with
/// unit normal `n` (`v . n < 0`).
pub fn reflect(v: Vec2, n: Vec2) -> Result<Vec2, GeometryError> {
    let vn = v.dot(n);
    if vn.abs() < GRAZING_DOT {
        return Err(GeometryError::GrazingImpact(vn.abs()));
    }
    Ok(v - n * (2.0 * vn))
}
