//! The billiard map in Birkhoff coordinates and its derivative.
//!
//! A state is a boundary point together with the outgoing direction, encoded
//! by the angle `theta` from the inward normal. Positive `theta` tilts the
//! direction toward the traversal direction of the component.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;
use thiserror::Error;

use crate::geometry::{reflect, Geom, Point2, Vec2};
use crate::table::BilliardTable;

/// Impacts closer than this (in arclength) to a non-smooth joint end the
/// trajectory.
pub const CORNER_TOL: f64 = 1e-9;
/// Impacts with `cos theta` below this end the trajectory.
pub const GRAZING_COS: f64 = 1e-10;
/// Free paths shorter than this fraction of the table diameter count
/// towards a stall.
pub const STALL_FRACTION: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("ray escaped the table from s = {s} (malformed table)")]
    Escaped { s: f64 },
    #[error("numerical stall: two consecutive free paths below {threshold:e}")]
    NumericalStall { threshold: f64 },
    #[error("billiard map is not differentiable here ({0})")]
    NonDifferentiablePoint(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryState {
    /// Index of the component in the table's storage order.
    pub component: usize,
    /// Global arclength coordinate.
    pub s: f64,
    pub theta: f64,
    pub sin_theta: f64,
}

impl BoundaryState {
    pub fn new(component: usize, s: f64, theta: f64) -> Self {
        Self {
            component,
            s,
            theta,
            sin_theta: theta.sin(),
        }
    }

    /// State at global arclength `s` of `table` with angle `theta`.
    pub fn at(table: &BilliardTable, s: f64, theta: f64) -> Self {
        let s = s.rem_euclid(table.total_length());
        let (idx, u) = table.locate(s);
        Self::new(idx, table.global_s(idx, u), theta)
    }

    /// Same boundary point with the direction mirrored about the normal.
    pub fn reversed(&self) -> Self {
        Self::new(self.component, self.s, -self.theta)
    }

    pub fn is_valid(&self) -> bool {
        self.theta.is_finite() && self.theta.abs() < FRAC_PI_2 - 1e-12
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CollisionEvent {
    Regular(BoundaryState),
    CornerHit(Point2),
    GrazingHit(Point2),
}

impl CollisionEvent {
    pub fn regular(self) -> Option<BoundaryState> {
        match self {
            CollisionEvent::Regular(s) => Some(s),
            _ => None,
        }
    }
}

/// One application of the map with the free path that led to it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Collision {
    pub event: CollisionEvent,
    pub free_path: f64,
}

/// Derivative of the billiard map in `(s, sin theta)` coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TangentMatrix(pub [[f64; 2]; 2]);

impl TangentMatrix {
    pub const IDENTITY: TangentMatrix = TangentMatrix([[1.0, 0.0], [0.0, 1.0]]);

    pub fn det(&self) -> f64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1]
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &TangentMatrix) -> TangentMatrix {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[0.0; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        TangentMatrix(out)
    }

    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }

    pub fn frobenius(&self) -> f64 {
        self.0.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn sub(&self, rhs: &TangentMatrix) -> TangentMatrix {
        let mut out = self.0;
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v -= rhs.0[i][j];
            }
        }
        TangentMatrix(out)
    }
}

/// First impact of the ray leaving `x`, with reflection.
pub fn collide(table: &BilliardTable, x: &BoundaryState) -> Result<Collision, DynamicsError> {
    let (p, v) = table.embed(x);
    let guard = STALL_FRACTION * table.diameter();
    let mut best: Option<(usize, f64, Point2, bool)> = None;
    for (i, c) in table.components().iter().enumerate() {
        let hit = if i == x.component {
            match c.geom {
                // A straight ray cannot return to its own line.
                Geom::Segment(_) => None,
                // The chord of the carrier circle; the root at t = 0 is the
                // departure point itself.
                Geom::Arc(a) => {
                    let t = -2.0 * (p - a.center).dot(v);
                    let q = p + v * t;
                    let ang = (q - a.center).angle();
                    (t > guard && a.contains_angle(ang, 1e-12))
                        .then(|| (t, a.center + Vec2::from_angle(ang) * a.radius, false))
                }
            }
        } else {
            c.geom
                .ray_intersection(p, v, guard)
                .map(|h| (h.t, h.point, h.grazing))
        };
        if let Some((t, q, grazing)) = hit {
            if best.is_none_or(|b| t < b.1) {
                best = Some((i, t, q, grazing));
            }
        }
    }
    let Some((j, t, q, grazing)) = best else {
        return Err(DynamicsError::Escaped { s: x.s });
    };
    let comp = table.component(j);
    let u = comp.geom.param_of(q).clamp(0.0, comp.length);
    let at_start = u < CORNER_TOL && !table.joint_before(j).is_tangential();
    let at_end = comp.length - u < CORNER_TOL && !table.joint_after(j).is_tangential();
    let event = if at_start || at_end {
        CollisionEvent::CornerHit(q)
    } else {
        let n = comp.geom.normal_at(u);
        let cos_in = -v.dot(n);
        if grazing || cos_in < GRAZING_COS {
            CollisionEvent::GrazingHit(q)
        } else {
            match reflect(v, n) {
                Ok(out) => {
                    let theta = if j == x.component {
                        // Both ends of a chord of a circle see the same angle;
                        // reusing it keeps sin theta exactly invariant.
                        x.theta
                    } else {
                        let tangent = comp.geom.tangent_at(u);
                        out.dot(tangent).atan2(out.dot(n))
                    };
                    CollisionEvent::Regular(BoundaryState::new(j, table.global_s(j, u), theta))
                }
                Err(_) => CollisionEvent::GrazingHit(q),
            }
        }
    };
    Ok(Collision {
        event,
        free_path: t,
    })
}

pub fn billiard_map(
    table: &BilliardTable,
    x: &BoundaryState,
) -> Result<CollisionEvent, DynamicsError> {
    collide(table, x).map(|c| c.event)
}

/// Closed-form derivative for a known collision `x -> y` with free path
/// `tau`.
pub fn tangent_between(
    table: &BilliardTable,
    x: &BoundaryState,
    y: &BoundaryState,
    tau: f64,
) -> TangentMatrix {
    let k0 = table.component(x.component).curvature();
    let k1 = table.component(y.component).curvature();
    let c0 = x.theta.cos();
    let c1 = y.theta.cos();
    TangentMatrix([
        [(tau * k0 - c0) / c1, -tau / (c0 * c1)],
        [k0 * c1 + k1 * c0 - k0 * k1 * tau, (tau * k1 - c1) / c0],
    ])
}

pub fn tangent_map(
    table: &BilliardTable,
    x: &BoundaryState,
) -> Result<TangentMatrix, DynamicsError> {
    let c = collide(table, x)?;
    match c.event {
        CollisionEvent::Regular(y) => Ok(tangent_between(table, x, &y, c.free_path)),
        CollisionEvent::CornerHit(q) => Err(DynamicsError::NonDifferentiablePoint(format!(
            "corner hit at ({}, {})",
            q.x, q.y
        ))),
        CollisionEvent::GrazingHit(q) => Err(DynamicsError::NonDifferentiablePoint(format!(
            "grazing hit at ({}, {})",
            q.x, q.y
        ))),
    }
}

/// How a trajectory ended.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Termination {
    Completed,
    Corner(Point2),
    Grazing(Point2),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// States after each collision (the initial state is not repeated).
    pub states: Vec<BoundaryState>,
    pub termination: Termination,
}

/// Iterates the map with stall detection.
pub struct Stepper<'a> {
    table: &'a BilliardTable,
    short_paths: u32,
}

impl<'a> Stepper<'a> {
    pub fn new(table: &'a BilliardTable) -> Self {
        Self {
            table,
            short_paths: 0,
        }
    }

    pub fn step(&mut self, x: &BoundaryState) -> Result<Collision, DynamicsError> {
        let c = collide(self.table, x)?;
        let threshold = STALL_FRACTION * self.table.diameter();
        if c.free_path < threshold {
            self.short_paths += 1;
            if self.short_paths >= 2 {
                return Err(DynamicsError::NumericalStall { threshold });
            }
        } else {
            self.short_paths = 0;
        }
        Ok(c)
    }
}

pub fn trajectory(
    table: &BilliardTable,
    x0: &BoundaryState,
    n: usize,
) -> Result<Trajectory, DynamicsError> {
    let mut stepper = Stepper::new(table);
    let mut states = Vec::with_capacity(n);
    let mut x = *x0;
    for _ in 0..n {
        match stepper.step(&x)?.event {
            CollisionEvent::Regular(y) => {
                states.push(y);
                x = y;
            }
            CollisionEvent::CornerHit(q) => {
                return Ok(Trajectory {
                    states,
                    termination: Termination::Corner(q),
                })
            }
            CollisionEvent::GrazingHit(q) => {
                return Ok(Trajectory {
                    states,
                    termination: Termination::Grazing(q),
                })
            }
        }
    }
    Ok(Trajectory {
        states,
        termination: Termination::Completed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::scenarios::{circle, square, two_focusing_pocket, PocketParams};
    use std::f64::consts::{FRAC_PI_4, PI};

    #[test]
    fn circle_chord_advances_by_right_angle() {
        let t = circle(1.0).unwrap();
        let x = BoundaryState::at(&t, 0.0, FRAC_PI_4);
        let y = billiard_map(&t, &x).unwrap().regular().unwrap();
        assert!((y.theta - FRAC_PI_4).abs() < 1e-14);
        assert!((y.s - PI / 2.0).abs() < 1e-14);
    }

    #[test]
    fn square_normal_bounce() {
        let t = square(1.0).unwrap();
        let x = BoundaryState::at(&t, 0.5, 0.0);
        let y = billiard_map(&t, &x).unwrap().regular().unwrap();
        assert_eq!(y.component, 2);
        assert!((y.s - 2.5).abs() < 1e-14);
        assert!(y.theta.abs() < 1e-15);
        let z = billiard_map(&t, &y).unwrap().regular().unwrap();
        assert!((z.s - 0.5).abs() < 1e-14);
    }

    #[test]
    fn pocket_period_two_endpoints() {
        let t = two_focusing_pocket(&PocketParams::DEFAULT).unwrap();
        let c0 = t.component(0);
        let x = BoundaryState::new(0, t.global_s(0, 0.5 * c0.length), 0.0);
        let y = billiard_map(&t, &x).unwrap().regular().unwrap();
        assert_eq!(y.component, 3);
        assert!((y.s - t.global_s(3, 0.5 * t.component(3).length)).abs() < 1e-12);
        assert!(y.theta.abs() < 1e-12);
    }

    #[test]
    fn circle_tangent_map_is_a_shear() {
        let t = circle(1.0).unwrap();
        for theta in [-1.2, -0.3, 0.0, 0.7, 1.4] {
            let m = tangent_map(&t, &BoundaryState::at(&t, 0.3, theta)).unwrap();
            assert!((m.det() - 1.0).abs() < 1e-12);
            assert!((m.trace() - 2.0).abs() < 1e-12);
            assert!(m.0[1][0].abs() < 1e-12);
        }
    }

    #[test]
    fn corner_hit_terminates() {
        let t = square(1.0).unwrap();
        // From the middle of the bottom side straight into the top-right
        // corner.
        let x = BoundaryState::at(&t, 0.5, (0.5f64).atan2(1.0));
        let tr = trajectory(&t, &x, 5).unwrap();
        assert!(tr.states.is_empty());
        assert!(matches!(tr.termination, Termination::Corner(_)));
    }
}
