//! End-to-end acceptance suite. Each criterion prints one PASS/FAIL line
//! with its runtime; the test fails if any criterion does.

mod common;

use std::f64::consts::FRAC_PI_3;
use std::io::Write as _;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use billiards::analysis::{
    chaos_verdict, ellipticity_resonance, find_period_two, lyapunov, physical_thresholds,
    portrait_from_seeds, random_state, rng, sweep, ChaosVerdict, OrbitLabel, PeriodTwoReport,
    StabilityClass, SweepConfig,
};
use billiards::dynamics::{trajectory, BoundaryState, Termination};
use billiards::geometry::{Geom, Vec2};
use billiards::reduction::reduce_table;
use billiards::table::scenarios::{
    build_scenario, circle, fig3, fig4, fig5, lemon, two_focusing_pocket, Fig3Params, LemonParams,
    PocketParams, ScenarioParams, SCENARIOS,
};
use billiards::table::{BilliardTable, ComponentKind};

const SEED: u64 = 1;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

struct Outcome {
    passed: bool,
    line: String,
}

fn run(id: usize, name: &str, budget: Duration, f: impl FnOnce() -> Check) -> Outcome {
    let start = Instant::now();
    let result = f();
    let elapsed = start.elapsed();
    let in_time = elapsed <= budget;
    let passed = result.is_ok() && in_time;
    let detail = match &result {
        Ok(d) if in_time => d.clone(),
        Ok(d) => format!("{d}; over the time budget"),
        Err(e) => e.clone(),
    };
    let line = format!(
        "{} {id:>2} {name:<28} {:>8.2} s / {:>4} s  {detail}",
        if passed { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    // Straight to the handle so the line shows even when output is captured.
    let _ = writeln!(std::io::stdout().lock(), "{line}");
    Outcome { passed, line }
}

fn reduced(table: &BilliardTable, r: f64) -> Result<BilliardTable, String> {
    reduce_table(table, r)
        .map(|res| res.reduced)
        .map_err(|e| format!("reduce at r = {r}: {e}"))
}

fn orbit_between(table: &BilliardTable, ids: [usize; 2]) -> Option<PeriodTwoReport> {
    find_period_two(table)
        .into_iter()
        .find(|o| !o.family && (o.component_ids == ids || o.component_ids == [ids[1], ids[0]]))
}

fn segment_directions(table: &BilliardTable) -> Vec<Vec2> {
    table
        .components()
        .iter()
        .filter_map(|c| match c.geom {
            Geom::Segment(s) => Some(s.direction()),
            Geom::Arc(_) => None,
        })
        .collect()
}

/// Angle between two undirected lines.
fn line_angle(a: Vec2, b: Vec2) -> f64 {
    a.cross(b).abs().atan2(a.dot(b).abs())
}

fn seeded_lyapunov(table: &BilliardTable, n: usize) -> Result<(f64, f64, ChaosVerdict), String> {
    let x0 = random_state(table, &mut rng(SEED));
    let est = lyapunov(table, &x0, n, 1000, SEED).map_err(|e| e.to_string())?;
    Ok((est.lambda, est.stderr, chaos_verdict(&est)))
}

fn conservation() -> Check {
    let t = circle(1.0).map_err(|e| e.to_string())?;
    let x0 = BoundaryState::at(&t, 0.3, 0.7);
    let tr = trajectory(&t, &x0, 10_000).map_err(|e| e.to_string())?;
    ensure!(
        tr.termination == Termination::Completed,
        "orbit ended early: {:?}",
        tr.termination
    );
    ensure!(tr.states.len() == 10_000, "{} collisions", tr.states.len());
    let dev = tr
        .states
        .iter()
        .map(|x| (x.sin_theta - x0.sin_theta).abs())
        .fold(0.0, f64::max);
    ensure!(dev < 1e-12, "max deviation of sin theta {dev:e}");
    // Positions must follow the exact rotation by pi - 2 theta per bounce.
    let step = std::f64::consts::PI - 2.0 * x0.theta;
    let tau = 2.0 * std::f64::consts::PI;
    let drift = tr
        .states
        .iter()
        .enumerate()
        .map(|(k, x)| {
            let d = (x.s - x0.s - step * (k + 1) as f64).rem_euclid(tau);
            d.min(tau - d)
        })
        .fold(0.0, f64::max);
    ensure!(drift < 1e-9, "position drift {drift:e}");
    Ok(format!(
        "max deviation {dev:.1e}, position drift {drift:.1e}"
    ))
}

/// Sign changes of the two stability factors of the reduced chord, found
/// by scanning and bisection.
fn factor_roots(l: f64, r1: f64, r2: f64) -> Vec<f64> {
    let factor = |radius: f64| move |r: f64| (l - 2.0 * r) - (radius - r);
    let factors = [factor(r1), factor(r2)];
    let upper = (0.5 * l).min(r1).min(r2);
    let n = 10_000;
    let mut roots = Vec::new();
    for f in factors {
        for i in 0..n {
            let (mut a, mut b) = (
                upper * i as f64 / n as f64,
                upper * (i + 1) as f64 / n as f64,
            );
            if f(a) == 0.0 {
                roots.push(a);
                continue;
            }
            if f(a).signum() == f(b).signum() {
                continue;
            }
            for _ in 0..100 {
                let m = 0.5 * (a + b);
                if f(m).signum() == f(a).signum() {
                    a = m;
                } else {
                    b = m;
                }
            }
            roots.push(0.5 * (a + b));
        }
    }
    roots.sort_by(f64::total_cmp);
    roots
}

fn pocket_thresholds() -> Check {
    let p = PocketParams::DEFAULT;
    let t = two_focusing_pocket(&p).map_err(|e| e.to_string())?;
    let expected = factor_roots(p.chord, p.r1, p.r2);
    ensure!(expected.len() == 2, "oracle found {expected:?}");
    let got = physical_thresholds(p.chord, p.r1, p.r2, [ComponentKind::Focusing; 2])
        .map_err(|e| e.to_string())?;
    ensure!(got.len() == 2, "thresholds {got:?}");
    for (g, e) in got.iter().zip(&expected) {
        ensure!((g.r - e).abs() < 1e-9, "threshold {} vs oracle {e}", g.r);
    }
    ensure!(
        got[0].from == StabilityClass::Stable && got[0].to == StabilityClass::Unstable,
        "first threshold {:?}",
        got[0]
    );
    ensure!(
        got[1].from == StabilityClass::Unstable && got[1].to == StabilityClass::Stable,
        "second threshold {:?}",
        got[1]
    );

    let mut cfg = SweepConfig::new(0.0, 1.05, 106);
    cfg.seed = SEED;
    let step = 1.05 / 105.0;
    let rep = sweep(&t, &cfg).map_err(|e| e.to_string())?;
    let ids = rep.tracked_orbit.ok_or("sweep tracks no orbit")?;
    let trace_at = |r: f64| -> Result<f64, String> {
        let o = orbit_between(&reduced(&t, r)?, ids).ok_or(format!("orbit lost at r = {r}"))?;
        Ok(o.monodromy_trace)
    };
    let mut crossings = Vec::new();
    for th in &expected {
        ensure!(
            rep.transitions
                .iter()
                .any(|tr| tr.r_lo <= *th && *th <= tr.r_hi && tr.r_hi - tr.r_lo <= step + 1e-12),
            "no transition brackets {th}: {:?}",
            rep.transitions
        );
        // Nearest grid points on either side that are not parabolic.
        let settled = |p: &&billiards::analysis::SweepPoint| {
            p.orbit_class()
                .is_some_and(|c| c != StabilityClass::Parabolic)
        };
        let a = rep
            .points
            .iter()
            .filter(|p| p.r < *th)
            .filter(settled)
            .last()
            .ok_or("no grid point below")?;
        let b = rep
            .points
            .iter()
            .filter(|p| p.r > *th)
            .find(settled)
            .ok_or("no grid point above")?;
        let f = |r: f64| trace_at(r).map(|tr| tr.abs() - 2.0);
        let (mut lo, mut hi) = (a.r, b.r);
        let (flo, fhi) = (f(lo)?, f(hi)?);
        ensure!(
            flo * fhi < 0.0,
            "|trace| - 2 does not change sign on [{lo}, {hi}]"
        );
        for _ in 0..40 {
            let m = 0.5 * (lo + hi);
            if f(m)?.signum() == flo.signum() {
                lo = m;
            } else {
                hi = m;
            }
        }
        let root = 0.5 * (lo + hi);
        ensure!(
            (root - th).abs() < 1e-3,
            "trace crosses 2 at {root}, threshold {th}"
        );
        crossings.push(root);
    }
    Ok(format!(
        "thresholds {expected:.6?}, trace crossings {crossings:.6?}"
    ))
}

fn hard_transition_to_chaos() -> Check {
    let (t, g) = fig3(&Fig3Params::DEFAULT).map_err(|e| e.to_string())?;
    let focusing = |o: &PeriodTwoReport| {
        o.component_ids.iter().all(|&id| {
            t.index_of_id(id)
                .is_some_and(|i| t.component(i).kind == ComponentKind::Focusing)
        })
    };
    let orbit = find_period_two(&t)
        .into_iter()
        .find(|o| !o.family && focusing(o))
        .ok_or("no orbit between the focusing arcs")?;
    ensure!(
        orbit.analytic_class == StabilityClass::Stable,
        "orbit is {}",
        orbit.analytic_class
    );

    let red = reduced(&t, 1.05 * g.ab)?;
    let comps = red.components();
    ensure!(comps.len() == 4, "{} components", comps.len());
    let neutral = comps
        .iter()
        .filter(|c| c.kind == ComponentKind::Neutral)
        .count();
    let dispersing = comps
        .iter()
        .filter(|c| c.kind == ComponentKind::Dispersing)
        .count();
    ensure!(
        neutral == 3 && dispersing == 1,
        "{neutral} neutral, {dispersing} dispersing"
    );
    let dirs = segment_directions(&red);
    for i in 0..3 {
        for j in (i + 1)..3 {
            let a = line_angle(dirs[i], dirs[j]);
            ensure!((a - FRAC_PI_3).abs() < 1e-9, "lines {i}, {j} meet at {a}");
        }
    }
    let (lambda, stderr, verdict) = seeded_lyapunov(&red, 100_000)?;
    ensure!(lambda > 5.0 * stderr, "lambda {lambda} stderr {stderr}");
    Ok(format!(
        "orbit trace {:.4}; reduced lambda {lambda:.4} +- {stderr:.1e} ({verdict:?})",
        orbit.monodromy_trace
    ))
}

fn hard_transition_to_order() -> Check {
    let t = fig4(4.0, 0.5).map_err(|e| e.to_string())?;
    let (l0, e0, _) = seeded_lyapunov(&t, 100_000)?;
    ensure!(l0 > 5.0 * e0, "math table lambda {l0} stderr {e0}");

    let tri = reduced(&t, 0.5)?;
    let comps = tri.components();
    ensure!(
        comps.len() == 3 && comps.iter().all(|c| matches!(c.geom, Geom::Segment(_))),
        "reduced table has {} components",
        comps.len()
    );
    let dirs = segment_directions(&tri);
    for i in 0..3 {
        let corner = (-dirs[i])
            .cross(dirs[(i + 1) % 3])
            .abs()
            .atan2((-dirs[i]).dot(dirs[(i + 1) % 3]));
        ensure!((corner - FRAC_PI_3).abs() < 1e-9, "corner {i} is {corner}");
    }
    let (l1, e1, _) = seeded_lyapunov(&tri, 100_000)?;
    ensure!(l1.abs() < 1e-3, "triangle lambda {l1} stderr {e1}");

    let mut cfg = SweepConfig::new(0.0, 0.6, 13);
    cfg.lyapunov_iters = 100_000;
    cfg.seed = SEED;
    let rep = sweep(&t, &cfg).map_err(|e| e.to_string())?;
    for p in &rep.points {
        let est = p.lyapunov.ok_or(format!("no estimate at r = {}", p.r))?;
        if p.r < 0.5 - 1e-12 {
            ensure!(
                p.chaos == Some(ChaosVerdict::Chaotic),
                "r = {}: {:?}",
                p.r,
                est
            );
        } else {
            ensure!(est.lambda.abs() < 1e-3, "r = {}: {:?}", p.r, est);
        }
    }
    let flips: Vec<_> = rep
        .transitions
        .iter()
        .filter(|tr| tr.description.contains("lambda"))
        .collect();
    ensure!(
        flips.len() == 1 && (flips[0].r_hi - 0.5).abs() < 1e-12,
        "lambda flips {flips:?}"
    );
    Ok(format!(
        "math lambda {l0:.4}; triangle lambda {l1:.1e}; flip in [{}, {}]",
        flips[0].r_lo, flips[0].r_hi
    ))
}

fn soft_transition() -> Check {
    let t = fig5(1.0).map_err(|e| e.to_string())?;
    let ids = [0, 4];
    let o = orbit_between(&t, ids).ok_or("no orbit on the center line")?;
    ensure!((o.length - 2.0).abs() < 1e-12, "L = {}", o.length);
    ensure!(
        o.analytic_class == StabilityClass::Parabolic,
        "r = 0 orbit is {}",
        o.analytic_class
    );
    for r in [0.01, 0.05, 0.1, 0.3] {
        let o = orbit_between(&reduced(&t, r)?, ids).ok_or(format!("orbit lost at r = {r}"))?;
        ensure!(
            o.analytic_class == StabilityClass::Stable,
            "r = {r}: {}",
            o.analytic_class
        );
        ensure!(
            o.monodromy_trace.abs() < 2.0,
            "r = {r}: trace {}",
            o.monodromy_trace
        );
    }
    let red = reduced(&t, 0.1)?;
    let o = orbit_between(&red, ids).ok_or("orbit lost at r = 0.1")?;
    let mut seeds = Vec::new();
    for fixed in o.states {
        for (ds, dp) in [
            (0.0, 0.0099),
            (0.0099, 0.0),
            (0.007, 0.007),
            (-0.007, 0.007),
            (-0.005, -0.008),
        ] {
            seeds.push(BoundaryState::at(
                &red,
                fixed.s + ds,
                (fixed.sin_theta + dp).asin(),
            ));
        }
    }
    let p = portrait_from_seeds(&red, &seeds, 5000, (100, 100)).map_err(|e| e.to_string())?;
    let worst = p.orbits.iter().map(|o| o.cell_occupancy).max().unwrap_or(0);
    ensure!(
        p.orbits
            .iter()
            .all(|o| o.label == OrbitLabel::Regular && o.completed),
        "labels {:?}",
        p.orbits
            .iter()
            .map(|o| (o.label, o.cell_occupancy, o.completed))
            .collect::<Vec<_>>()
    );
    Ok(format!(
        "{} seeds regular, at most {worst} cells",
        seeds.len()
    ))
}

fn skewed_lemon() -> Check {
    let r = 2.6;
    let q = LemonParams {
        r1: 4.0,
        r2: 1.0,
        d: 3.5,
    };
    let pre = LemonParams {
        r1: q.r1 + r,
        r2: q.r2 + r,
        d: q.d,
    };
    ensure!(
        pre.large_center_inside(),
        "larger center outside the enlarged lemon"
    );
    let big = lemon(pre.r1, pre.r2, pre.d).map_err(|e| e.to_string())?;
    let math = orbit_between(&big, [0, 1]).ok_or("no orbit through the centers")?;
    ensure!(
        math.analytic_class == StabilityClass::Stable,
        "math orbit {}",
        math.analytic_class
    );

    let red = reduced(&big, r)?;
    let target = lemon(q.r1, q.r2, q.d).map_err(|e| e.to_string())?;
    ensure!(
        red.components().len() == 2,
        "{} components",
        red.components().len()
    );
    for (a, b) in red.components().iter().zip(target.components()) {
        let (Geom::Arc(a), Geom::Arc(b)) = (a.geom, b.geom) else {
            return Err("reduced lemon is not two arcs".into());
        };
        ensure!(
            (a.radius - b.radius).abs() < 1e-12 && a.center.distance(b.center) < 1e-12,
            "reduced arc {a:?} vs {b:?}"
        );
    }
    let phys = orbit_between(&red, [0, 1]).ok_or("orbit lost after reduction")?;
    ensure!(
        phys.analytic_class == StabilityClass::Unstable,
        "physical orbit {}",
        phys.analytic_class
    );
    let (lambda, stderr, _) = seeded_lyapunov(&red, 100_000)?;
    ensure!(lambda > 5.0 * stderr, "lambda {lambda} stderr {stderr}");
    Ok(format!(
        "L {:.3} Stable -> L {:.3} Unstable; lambda {lambda:.4} +- {stderr:.1e}",
        math.length, phys.length
    ))
}

fn tangent_oracle() -> Check {
    let (mut worst_rel, mut worst_det) = (0.0f64, 0.0f64);
    for name in SCENARIOS {
        let t = build_scenario(name, &ScenarioParams::new()).map_err(|e| e.to_string())?;
        let mut g = rng(SEED);
        let mut checked = 0;
        let mut draws = 0;
        while checked < 100 {
            draws += 1;
            ensure!(draws < 100_000, "{name}: too few regular states");
            let x = random_state(&t, &mut g);
            let Some((rel, det)) = common::tangent_check(&t, &x) else {
                continue;
            };
            ensure!(rel < 1e-5, "{name}: relative error {rel:e} at {x:?}");
            ensure!(det < 1e-9, "{name}: |det - 1| = {det:e} at {x:?}");
            worst_rel = worst_rel.max(rel);
            worst_det = worst_det.max(det);
            checked += 1;
        }
    }
    Ok(format!(
        "worst relative error {worst_rel:.1e}, worst |det - 1| {worst_det:.1e}"
    ))
}

fn resonance() -> Check {
    let non_resonant = |l: f64, r1: f64, r2: f64| {
        let v = 4.0 * (l - r1) * (l - r2);
        (v - r1 * r2).abs() > 1e-9 && (v - 2.0 * r1 * r2).abs() > 1e-9
    };
    let second = 1.0 + 0.5f64.sqrt();
    let cases = [
        (1.5, 1.0, 1.0, false),
        (2.2, 2.0, 1.4, true),
        (second, 1.0, 1.0, false),
    ];
    for (l, r1, r2, expected) in cases {
        ensure!(
            non_resonant(l, r1, r2) == expected,
            "oracle disagrees with the worked example at L = {l}"
        );
        let got = ellipticity_resonance(l, r1, r2);
        ensure!(got == expected, "L = {l}, R1 = {r1}, R2 = {r2}: got {got}");
    }
    Ok("three worked examples".into())
}

fn cli(dir: &Path, workers: usize, args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_billiards"))
        .current_dir(dir)
        .args(args)
        .arg("--workers")
        .arg(workers.to_string())
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    Ok(())
}

fn determinism() -> Check {
    let runs: [(&str, usize); 3] = [("a", 1), ("b", 1), ("c", 4)];
    let root = tempfile::tempdir().map_err(|e| e.to_string())?;
    let artifacts = [
        "fig4.json",
        "fig4_r.json",
        "fig4_r.report.json",
        "sim.csv",
        "classify.json",
        "lyap.json",
        "portrait.csv",
        "portrait.svg",
        "sweep.csv",
    ];
    for (name, workers) in runs {
        let dir = root.path().join(name);
        std::fs::create_dir(&dir).map_err(|e| e.to_string())?;
        let commands: [&[&str]; 7] = [
            &[
                "scenario",
                "fig4",
                "--a",
                "4",
                "--R",
                "0.5",
                "--out",
                "fig4.json",
            ],
            &["reduce", "fig4.json", "--r", "0.3", "--out", "fig4_r.json"],
            &[
                "simulate", "stadium", "--n", "2000", "--seed", "7", "--out", "sim.csv",
            ],
            &[
                "classify",
                "two_focusing_pocket",
                "--r",
                "0.1",
                "--out",
                "classify.json",
            ],
            &[
                "lyapunov",
                "sinai",
                "--n",
                "20000",
                "--seed",
                "7",
                "--out",
                "lyap.json",
            ],
            &[
                "portrait",
                "fig5",
                "--r",
                "0.1",
                "--samples",
                "12",
                "--iters",
                "500",
                "--grid",
                "60x60",
                "--seed",
                "7",
                "--out",
                "portrait.csv",
                "--svg",
                "portrait.svg",
            ],
            &[
                "sweep",
                "two_focusing_pocket",
                "--r-max",
                "1.05",
                "--steps",
                "22",
                "--n",
                "5000",
                "--seed",
                "7",
                "--out",
                "sweep.csv",
            ],
        ];
        for args in commands {
            cli(&dir, workers, args)?;
        }
    }
    for file in artifacts {
        let read = |run: &str| {
            std::fs::read(root.path().join(run).join(file)).map_err(|e| format!("{file}: {e}"))
        };
        let a = read("a")?;
        ensure!(!a.is_empty(), "{file} is empty");
        ensure!(a == read("b")?, "{file} differs between identical runs");
        ensure!(a == read("c")?, "{file} differs between 1 and 4 workers");
    }
    Ok(format!(
        "{} artifacts byte-identical over 3 runs",
        artifacts.len()
    ))
}

#[test]
fn acceptance() {
    let secs = Duration::from_secs;
    let outcomes = [
        run(1, "conservation", secs(1), conservation),
        run(2, "reduction oracle", secs(30), || {
            common::reduction_oracle_suite(10_000)
        }),
        run(3, "pocket thresholds", secs(60), pocket_thresholds),
        run(
            4,
            "hard transition to chaos",
            secs(120),
            hard_transition_to_chaos,
        ),
        run(
            5,
            "hard transition to order",
            secs(120),
            hard_transition_to_order,
        ),
        run(6, "soft transition", secs(120), soft_transition),
        run(7, "skewed lemon", secs(120), skewed_lemon),
        run(8, "tangent map oracle", secs(30), tangent_oracle),
        run(9, "ellipticity resonance", secs(1), resonance),
        run(10, "determinism", secs(300), determinism),
    ];
    let failed: Vec<_> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| o.line.as_str())
        .collect();
    assert!(failed.is_empty(), "failed criteria:\n{}", failed.join("\n"));
}
