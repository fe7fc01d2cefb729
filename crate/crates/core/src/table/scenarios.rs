//! Canonical tables and the parametrized families used to demonstrate
//! transitions between mathematical and physical billiards.
//!
//! Every builder returns a validated table. Coordinates are chosen so that
//! the interesting period-two orbit (where one exists) lies on the x-axis.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_6, PI};

use super::{BilliardTable, TableError};
use crate::geometry::{line_line, wrap_angle, ArcGeom, Geom, Point2, SegmentGeom, Traversal, Vec2};

pub const SCENARIOS: &[&str] = &[
    "circle",
    "square",
    "equilateral_triangle",
    "stadium",
    "sinai",
    "two_focusing_pocket",
    "fig3",
    "fig4",
    "fig5",
    "lemon",
];

/// Named real parameters of a scenario.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScenarioParams(BTreeMap<String, f64>);

impl ScenarioParams {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.0.insert(key.to_owned(), value);
        self
    }

    pub fn set(&mut self, key: &str, value: f64) {
        self.0.insert(key.to_owned(), value);
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.0.get(key).copied()
    }

    pub fn get_or(&self, key: &str, default: f64) -> f64 {
        self.get(key).unwrap_or(default)
    }
}

fn bad(scenario: &str, reason: impl Into<String>) -> TableError {
    TableError::BadParams {
        scenario: scenario.to_owned(),
        reason: reason.into(),
    }
}

fn positive(scenario: &str, key: &str, v: f64) -> Result<f64, TableError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(bad(scenario, format!("{key} must be positive, got {v}")))
    }
}

fn seg(a: Point2, b: Point2) -> Result<Geom, TableError> {
    Ok(Geom::Segment(SegmentGeom::new(a, b)?))
}

fn arc(center: Point2, radius: f64, a0: f64, a1: f64, trav: Traversal) -> Result<Geom, TableError> {
    Ok(Geom::Arc(ArcGeom::new(center, radius, a0, a1, trav)?))
}

fn polygon(points: &[Point2]) -> Result<Vec<Geom>, TableError> {
    (0..points.len())
        .map(|i| seg(points[i], points[(i + 1) % points.len()]))
        .collect()
}

fn finish(name: &str, loops: Vec<Vec<Geom>>) -> Result<BilliardTable, TableError> {
    BilliardTable::from_loops(name, loops)?.checked()
}

pub fn build_scenario(name: &str, p: &ScenarioParams) -> Result<BilliardTable, TableError> {
    match name {
        "circle" => circle(p.get_or("R", 1.0)),
        "square" => square(p.get_or("a", 1.0)),
        "equilateral_triangle" => equilateral_triangle(p.get_or("a", 2.0)),
        "stadium" => stadium(p.get_or("R", 1.0), p.get_or("L", 2.0)),
        "sinai" => sinai(p.get_or("a", 4.0), p.get_or("R", 1.0)),
        "two_focusing_pocket" => two_focusing_pocket(&PocketParams {
            r1: p.get_or("R1", 2.0),
            r2: p.get_or("R2", 1.4),
            chord: p.get_or("L", 2.2),
            aperture1: p.get_or("beta1", PocketParams::DEFAULT.aperture1),
            aperture2: p.get_or("beta2", PocketParams::DEFAULT.aperture2),
        }),
        "fig3" => fig3(&Fig3Params {
            radius: p.get_or("R", Fig3Params::DEFAULT.radius),
            width: p.get_or("w", Fig3Params::DEFAULT.width),
            overshoot: p.get_or("phi", Fig3Params::DEFAULT.overshoot),
            height: p.get_or("h", Fig3Params::DEFAULT.height),
            cap_ratio: p.get_or("rho", Fig3Params::DEFAULT.cap_ratio),
        })
        .map(|(t, _)| t),
        "fig4" => fig4(p.get_or("a", 4.0), p.get_or("R", 0.5)),
        "fig5" => fig5(p.get_or("R2", 1.0)),
        "lemon" => lemon(
            p.get_or("R1", LemonParams::DEFAULT.r1),
            p.get_or("R2", LemonParams::DEFAULT.r2),
            p.get_or("d", LemonParams::DEFAULT.d),
        ),
        other => Err(TableError::UnknownScenario(other.to_owned())),
    }
}

pub fn circle(r: f64) -> Result<BilliardTable, TableError> {
    let r = positive("circle", "R", r)?;
    finish(
        "circle",
        vec![vec![Geom::Arc(ArcGeom::circle(
            Vec2::ZERO,
            r,
            Traversal::Ccw,
        )?)]],
    )
}

/// Square of side `a` centered at the origin.
pub fn square(a: f64) -> Result<BilliardTable, TableError> {
    let h = 0.5 * positive("square", "a", a)?;
    let pts = [
        Vec2::new(-h, -h),
        Vec2::new(h, -h),
        Vec2::new(h, h),
        Vec2::new(-h, h),
    ];
    finish("square", vec![polygon(&pts)?])
}

fn triangle_vertices(a: f64) -> [Point2; 3] {
    let h = a * 3f64.sqrt() / 2.0;
    [
        Vec2::new(-0.5 * a, -h / 3.0),
        Vec2::new(0.5 * a, -h / 3.0),
        Vec2::new(0.0, 2.0 * h / 3.0),
    ]
}

/// Equilateral triangle of side `a` with its centroid at the origin and a
/// horizontal base.
pub fn equilateral_triangle(a: f64) -> Result<BilliardTable, TableError> {
    let a = positive("equilateral_triangle", "a", a)?;
    finish(
        "equilateral_triangle",
        vec![polygon(&triangle_vertices(a))?],
    )
}

/// Bunimovich stadium: half-disks of radius `r` joined by straight sides of
/// length `l`.
pub fn stadium(r: f64, l: f64) -> Result<BilliardTable, TableError> {
    let r = positive("stadium", "R", r)?;
    let h = 0.5 * positive("stadium", "L", l)?;
    finish(
        "stadium",
        vec![vec![
            seg(Vec2::new(-h, -r), Vec2::new(h, -r))?,
            arc(Vec2::new(h, 0.0), r, -FRAC_PI_2, FRAC_PI_2, Traversal::Ccw)?,
            seg(Vec2::new(h, r), Vec2::new(-h, r))?,
            arc(
                Vec2::new(-h, 0.0),
                r,
                FRAC_PI_2,
                3.0 * FRAC_PI_2,
                Traversal::Ccw,
            )?,
        ]],
    )
}

/// Square of side `a` with a circular scatterer of radius `r` at its center.
pub fn sinai(a: f64, r: f64) -> Result<BilliardTable, TableError> {
    let a = positive("sinai", "a", a)?;
    let r = positive("sinai", "R", r)?;
    if r >= 0.5 * a {
        return Err(bad(
            "sinai",
            format!("scatterer radius {r} must be below a/2 = {}", 0.5 * a),
        ));
    }
    let h = 0.5 * a;
    let pts = [
        Vec2::new(-h, -h),
        Vec2::new(h, -h),
        Vec2::new(h, h),
        Vec2::new(-h, h),
    ];
    finish(
        "sinai",
        vec![
            polygon(&pts)?,
            vec![Geom::Arc(ArcGeom::circle(Vec2::ZERO, r, Traversal::Cw)?)],
        ],
    )
}

/// Two facing focusing arcs with a normal chord of length `chord` along the
/// x-axis, closed above and below by pairs of tangent segments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PocketParams {
    pub r1: f64,
    pub r2: f64,
    pub chord: f64,
    /// Half-angles subtended by the two arcs.
    pub aperture1: f64,
    pub aperture2: f64,
}

impl PocketParams {
    pub const DEFAULT: PocketParams = PocketParams {
        r1: 2.0,
        r2: 1.4,
        chord: 2.2,
        aperture1: 0.6,
        aperture2: 0.9,
    };
}

pub fn two_focusing_pocket(p: &PocketParams) -> Result<BilliardTable, TableError> {
    const NAME: &str = "two_focusing_pocket";
    let r1 = positive(NAME, "R1", p.r1)?;
    let r2 = positive(NAME, "R2", p.r2)?;
    let l = positive(NAME, "L", p.chord)?;
    for (k, b) in [("beta1", p.aperture1), ("beta2", p.aperture2)] {
        if !(b > 0.0 && b < FRAC_PI_2) {
            return Err(bad(NAME, format!("{k} must lie in (0, pi/2), got {b}")));
        }
    }
    let (b1, b2) = (p.aperture1, p.aperture2);
    let c1 = Vec2::new(r1 - 0.5 * l, 0.0);
    let c2 = Vec2::new(0.5 * l - r2, 0.0);
    let end1 = c1 + Vec2::from_angle(PI + b1) * r1;
    let start2 = c2 + Vec2::from_angle(-b2) * r2;
    let dir1 = Vec2::new(b1.sin(), -b1.cos());
    let dir2 = Vec2::new(b2.sin(), b2.cos());
    let corner = line_line(end1, dir1, start2, dir2)
        .ok_or_else(|| bad(NAME, "tangent lines are parallel"))?;
    if (corner - end1).dot(dir1) <= 0.0 || (start2 - corner).dot(dir2) <= 0.0 {
        return Err(bad(NAME, "tangent segments do not meet below the arcs"));
    }
    let mirror = |q: Point2| Vec2::new(q.x, -q.y);
    finish(
        NAME,
        vec![vec![
            arc(c1, r1, PI - b1, PI + b1, Traversal::Ccw)?,
            seg(end1, corner)?,
            seg(corner, start2)?,
            arc(c2, r2, -b2, b2, Traversal::Ccw)?,
            seg(mirror(start2), mirror(corner))?,
            seg(mirror(corner), mirror(end1))?,
        ]],
    )
}

/// Parameters of the hard-transition-to-chaos table: a pocket of two equal
/// focusing arcs under a triangle whose apex is cut by a dispersing arc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fig3Params {
    /// Radius of both focusing arcs.
    pub radius: f64,
    /// Length of the chord AC.
    pub width: f64,
    /// Angle by which each focusing arc continues past its extreme point.
    pub overshoot: f64,
    /// Distance from BD to the chord EF.
    pub height: f64,
    /// Radius of the dispersing cap as a multiple of |EF|.
    pub cap_ratio: f64,
}

impl Fig3Params {
    pub const DEFAULT: Fig3Params = Fig3Params {
        radius: 1.0,
        width: 1.68,
        overshoot: 0.05,
        height: 1.35,
        cap_ratio: 2.0,
    };
}

/// Derived lengths of a fig3 table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fig3Geometry {
    /// Chord length |AB| (= |CD|).
    pub ab: f64,
    /// Length of the period-two orbit G1G2 through both arc centers.
    pub g1g2: f64,
    /// Distance between the parallel lines AC and BD.
    pub pocket_depth: f64,
    pub a: Point2,
    pub b: Point2,
    pub c: Point2,
    pub d: Point2,
    pub e: Point2,
    pub f: Point2,
}

/// Boundary E->A, A->B, B->D, D->C, C->F, F->E (component ids 0..=5).
pub fn fig3(p: &Fig3Params) -> Result<(BilliardTable, Fig3Geometry), TableError> {
    const NAME: &str = "fig3";
    let r = positive(NAME, "R", p.radius)?;
    let w = positive(NAME, "w", p.width)?;
    let h = positive(NAME, "h", p.height)?;
    let phi = p.overshoot;
    if !(phi > 0.0 && phi < FRAC_PI_2) {
        return Err(bad(NAME, format!("phi must lie in (0, pi/2), got {phi}")));
    }
    let sqrt3 = 3f64.sqrt();
    // With AE at pi/3 to AC the arc centers sit R/2 below AC and the orbit
    // through both centers has length w + (2 - sqrt 3) R.
    if w < r * (sqrt3 - 1.0) {
        return Err(bad(NAME, "w too small: arc centers would not lie on G1G2"));
    }
    if w >= r * sqrt3 {
        return Err(bad(NAME, "w too large: |G1G2| must stay below 2R"));
    }
    let a = Vec2::new(-0.5 * w, 0.0);
    let c = Vec2::new(0.5 * w, 0.0);
    let o1 = a + Vec2::new(0.5 * sqrt3, -0.5) * r;
    let o2 = c + Vec2::new(-0.5 * sqrt3, -0.5) * r;
    let b = o1 + Vec2::from_angle(PI + phi) * r;
    let d = o2 + Vec2::from_angle(-phi) * r;
    let depth = -b.y;
    if h <= 2.0 * depth {
        return Err(bad(
            NAME,
            format!("h = {h} must exceed twice the pocket depth {depth}"),
        ));
    }
    let apex_height = 0.5 * w * sqrt3;
    let ef_y = b.y + h;
    if ef_y >= apex_height {
        return Err(bad(NAME, "EF lies above the apex of the triangle"));
    }
    let t = ef_y / (0.5 * sqrt3);
    let e = a + Vec2::new(0.5, 0.5 * sqrt3) * t;
    let f = c + Vec2::new(-0.5, 0.5 * sqrt3) * t;
    let ef = e.distance(f);
    let cap_r = ef * p.cap_ratio;
    if !(p.cap_ratio > 0.5) {
        return Err(bad(NAME, "rho must exceed 1/2"));
    }
    let cap_center = Vec2::new(0.0, ef_y + (cap_r * cap_r - 0.25 * ef * ef).sqrt());
    let ang_f = (f - cap_center).angle();
    let ang_e = ang_f - wrap_angle(ang_f - (e - cap_center).angle(), 0.0);
    let table = finish(
        NAME,
        vec![vec![
            seg(e, a)?,
            arc(o1, r, 5.0 * FRAC_PI_6, PI + phi, Traversal::Ccw)?,
            seg(b, d)?,
            arc(o2, r, -phi, FRAC_PI_6, Traversal::Ccw)?,
            seg(c, f)?,
            arc(cap_center, cap_r, ang_f, ang_e, Traversal::Cw)?,
        ]],
    )?;
    let geometry = Fig3Geometry {
        ab: a.distance(b),
        g1g2: w + (2.0 - sqrt3) * r,
        pocket_depth: depth,
        a,
        b,
        c,
        d,
        e,
        f,
    };
    Ok((table, geometry))
}

/// Equilateral triangle of side `a` (centroid at the origin) whose apex is
/// rounded by an arc of radius `r` tangent to both adjacent sides.
/// Components: base, truncated right side, arc, truncated left side.
pub fn fig4(a: f64, r: f64) -> Result<BilliardTable, TableError> {
    const NAME: &str = "fig4";
    let a = positive(NAME, "a", a)?;
    let r = positive(NAME, "R", r)?;
    let sqrt3 = 3f64.sqrt();
    if r * sqrt3 >= a {
        return Err(bad(NAME, "arc does not fit: R sqrt(3) must be below a"));
    }
    let [left, right, apex] = triangle_vertices(a);
    let center = apex - Vec2::new(0.0, 2.0 * r);
    let t_right = center + Vec2::from_angle(FRAC_PI_6) * r;
    let t_left = center + Vec2::from_angle(5.0 * FRAC_PI_6) * r;
    finish(
        NAME,
        vec![vec![
            seg(left, right)?,
            seg(right, t_right)?,
            arc(center, r, FRAC_PI_6, 5.0 * FRAC_PI_6, Traversal::Ccw)?,
            seg(t_left, left)?,
        ]],
    )
}

/// Soft-transition table. A focusing half-circle of radius `2 r2` centered
/// at O1 = origin faces a dispersing arc of radius `r2` centered at
/// O2 = (r2, 0); the dispersing circle passes through O1 and touches the
/// focusing circle from inside. Four tangent segments and two small
/// dispersing arcs close the boundary (8 components).
pub fn fig5(r2: f64) -> Result<BilliardTable, TableError> {
    const NAME: &str = "fig5";
    let rho = positive(NAME, "R2", r2)?;
    let r1 = 2.0 * rho;
    let gamma = FRAC_PI_3;
    let cut = 0.5 * rho;
    let cap_radius = 2.0 * rho;
    let o2 = Vec2::new(rho, 0.0);
    let p_low = o2 + Vec2::from_angle(PI + gamma) * rho;
    let rise = Vec2::new(-gamma.sin(), gamma.cos());
    let corner = line_line(Vec2::new(0.0, -r1), Vec2::new(1.0, 0.0), p_low, rise)
        .ok_or_else(|| bad(NAME, "degenerate corner"))?;
    let s1 = corner - Vec2::new(cut, 0.0);
    let s2 = corner + rise * cut;
    let cap = dispersing_cut(s1, s2, corner, cap_radius)?;
    let mirror = |q: Point2| Vec2::new(q.x, -q.y);
    let cap_top = match cap {
        Geom::Arc(a) => {
            // Mirror image, traversed from mirror(s2) to mirror(s1).
            let m = ArcGeom::new(
                mirror(a.center),
                a.radius,
                -a.angle_end,
                -a.angle_start,
                Traversal::Cw,
            )?;
            Geom::Arc(m)
        }
        Geom::Segment(_) => unreachable!(),
    };
    finish(
        NAME,
        vec![vec![
            arc(Vec2::ZERO, r1, FRAC_PI_2, 3.0 * FRAC_PI_2, Traversal::Ccw)?,
            seg(Vec2::new(0.0, -r1), s1)?,
            cap,
            seg(s2, p_low)?,
            arc(o2, rho, PI + gamma, PI - gamma, Traversal::Cw)?,
            seg(mirror(p_low), mirror(s2))?,
            cap_top,
            seg(mirror(s1), Vec2::new(0.0, r1))?,
        ]],
    )
}

/// Dispersing arc from `s1` to `s2` bulging away from `corner`.
fn dispersing_cut(s1: Point2, s2: Point2, corner: Point2, radius: f64) -> Result<Geom, TableError> {
    let mid = (s1 + s2) * 0.5;
    let half = 0.5 * s1.distance(s2);
    let out = (corner - mid).normalized();
    let center = mid + out * (radius * radius - half * half).sqrt();
    let a1 = (s1 - center).angle();
    let sweep = wrap_angle(a1 - (s2 - center).angle(), 0.0);
    debug_assert!(sweep < PI);
    arc(center, radius, a1, a1 - sweep, Traversal::Cw)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemonParams {
    pub r1: f64,
    pub r2: f64,
    pub d: f64,
}

impl LemonParams {
    pub const DEFAULT: LemonParams = LemonParams {
        r1: 3.0,
        r2: 2.0,
        d: 1.5,
    };

    /// Whether the larger circle's center lies inside the table.
    pub fn large_center_inside(&self) -> bool {
        self.d < self.r2
    }
}

/// Skewed lemon: intersection of the disk of radius `r1` at the origin with
/// the disk of radius `r2 < r1` centered at `(d, 0)`, where the `r2` arc
/// exceeds a half circle. Components: the `r1` arc, then the `r2` arc.
pub fn lemon(r1: f64, r2: f64, d: f64) -> Result<BilliardTable, TableError> {
    const NAME: &str = "lemon";
    let r1 = positive(NAME, "R1", r1)?;
    let r2 = positive(NAME, "R2", r2)?;
    let d = positive(NAME, "d", d)?;
    if r2 >= r1 {
        return Err(bad(NAME, "R2 must be smaller than R1"));
    }
    if d <= r1 - r2 {
        return Err(bad(NAME, "disks are nested: need d > R1 - R2"));
    }
    if d * d >= r1 * r1 - r2 * r2 {
        return Err(bad(
            NAME,
            "R2 arc is not larger than a half circle: need d^2 < R1^2 - R2^2",
        ));
    }
    let x0 = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
    let y0 = (r1 * r1 - x0 * x0).sqrt();
    let beta = y0.atan2(x0);
    let alpha = y0.atan2(x0 - d);
    finish(
        NAME,
        vec![vec![
            arc(Vec2::ZERO, r1, -beta, beta, Traversal::Ccw)?,
            arc(
                Vec2::new(d, 0.0),
                r2,
                alpha,
                2.0 * PI - alpha,
                Traversal::Ccw,
            )?,
        ]],
    )
}
