//! Cross-module check suites for `covnoise verify`.

use std::f64::consts::TAU;

use covnoise::matrices::{
    chessboard, constant_one, gram_from_vectors, torus_from_phases, torus_phase_recovery, ChessboardParams,
    Orientation, VectorFamily,
};
use covnoise::noise::{chessboard_noise_closed_form, noise_value};
use covnoise::observables::{covariance_defect, noise_operator_diagonal};
use covnoise::schur;
use covnoise::{IndexDomain, IndexWindow, IntervalSet, NoiseQuery, PhaseSequence, Result, StructureMatrix};

use crate::config::RunConfig;
use crate::output::{Report, Table};
use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Suite {
    Chessboard,
    Torus,
    Covariance,
    NoiseDiagonal,
    Schur,
}

struct Check {
    name: String,
    defect: f64,
    bound: f64,
    passed: bool,
}

impl Check {
    fn new(name: impl Into<String>, defect: f64, bound: f64) -> Self {
        Check { name: name.into(), defect, bound, passed: defect <= bound }
    }
}

pub fn run(cfg: &RunConfig, suite: Suite) -> Result<(Report, Option<String>), Failure> {
    let checks = match suite {
        Suite::Chessboard => chessboard_suite()?,
        Suite::Torus => torus_suite(cfg.seed)?,
        Suite::Covariance => covariance_suite(cfg)?,
        Suite::NoiseDiagonal => noise_diagonal_suite(cfg)?,
        Suite::Schur => schur_suite()?,
    };
    let mut table = Table::new(&["check", "passed", "defect", "bound"]);
    let mut failed = 0;
    for c in &checks {
        failed += usize::from(!c.passed);
        table.push(vec![c.name.clone().into(), c.passed.into(), c.defect.into(), c.bound.into()]);
    }
    let msg = (failed > 0).then(|| format!("{failed} of {} checks failed", checks.len()));
    Ok((table.into(), msg))
}

fn q(n: i64, l: u32, tol: f64) -> Result<NoiseQuery> {
    NoiseQuery::new(n, l, tol)
}

/// Distance from `x` to `[lo, hi]`.
fn outside(x: f64, lo: f64, hi: f64) -> f64 {
    (lo - x).max(x - hi).max(0.0)
}

fn chessboard_suite() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for xi in [0.0, 0.3, 0.7, 1.0] {
        let p = ChessboardParams::new(xi, Orientation::OneOnEvenSum)?;
        let a = chessboard(IndexDomain::Naturals, p)?;
        for l in 1..=4 {
            let mut worst = 0.0f64;
            for n in 0..=40 {
                let c = chessboard_noise_closed_form(p, IndexDomain::Naturals, n, l)?.value;
                let s = noise_value(&a, &q(n, l, 1e-10)?)?;
                worst = worst.max(outside(c, s.lower, s.upper));
            }
            out.push(Check::new(format!("N xi={xi} l={l} closed form"), worst, 1e-9));
        }
    }
    for (o, name) in [(Orientation::OneOnEvenSum, "one_on_even_sum"), (Orientation::OneOnOddSum, "one_on_odd_sum")] {
        for xi in [0.0, 0.5, 1.0] {
            let p = ChessboardParams::new(xi, o)?;
            let a = chessboard(IndexDomain::Integers, p)?;
            let mut worst = 0.0f64;
            for l in 1..=4 {
                let c = chessboard_noise_closed_form(p, IndexDomain::Integers, 0, l)?.value;
                for n in -5..=5 {
                    let s = noise_value(&a, &q(n, l, 1e-10)?)?;
                    worst = worst.max(outside(c, s.lower, s.upper));
                }
            }
            out.push(Check::new(format!("Z {name} xi={xi} closed form"), worst, 1e-9));
        }
    }
    Ok(out)
}

fn torus_suite(seed: u64) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for i in 0..4u64 {
        let s = seed.wrapping_add(i);
        for (domain, w) in [
            (IndexDomain::Naturals, IndexWindow::new(0, 30)?),
            (IndexDomain::Integers, IndexWindow::new(-15, 15)?),
        ] {
            let t = torus_from_phases(domain, PhaseSequence::seeded(s));
            let one = constant_one(domain);
            let mut worst = 0.0f64;
            for n in w.indices() {
                for l in 1..=4 {
                    let a = noise_value(&t, &q(n, l, 1e-8)?)?;
                    let b = noise_value(&one, &q(n, l, 1e-8)?)?;
                    worst = worst.max(outside(a.value, b.lower - a.width(), b.upper + a.width()));
                }
            }
            out.push(Check::new(format!("{domain} seed={s} torus noise equals canonical"), worst, 0.0));

            let (defect, ok) = match torus_phase_recovery(&t, w, 1e-10) {
                Ok(nu) => {
                    let back = torus_from_phases(domain, nu);
                    let mut d = 0.0f64;
                    for n in w.indices() {
                        for m in w.indices() {
                            d = d.max((back.entry(n, m) - t.entry(n, m)).norm());
                        }
                    }
                    (d, true)
                }
                Err(_) => (f64::INFINITY, false),
            };
            let mut c = Check::new(format!("{domain} seed={s} phase recovery round trip"), defect, 1e-12);
            c.passed &= ok;
            out.push(c);
        }
    }
    Ok(out)
}

fn random_interval_set(state: &mut u64) -> Result<IntervalSet> {
    let mut next = || {
        *state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (*state >> 11) as f64 / (1u64 << 53) as f64
    };
    let pieces = 1 + (next() * 3.0) as usize;
    let v: Vec<(f64, f64)> = (0..pieces)
        .map(|_| {
            let a = next() * TAU;
            (a, a + 0.05 + next() * 2.0)
        })
        .collect();
    IntervalSet::new(v)
}

fn builtin_matrices(seed: u64) -> Result<Vec<(String, StructureMatrix)>> {
    Ok(vec![
        ("constant_one(Z)".into(), constant_one(IndexDomain::Integers)),
        (
            "chessboard(Z, 0.5)".into(),
            chessboard(IndexDomain::Integers, ChessboardParams::new(0.5, Orientation::OneOnEvenSum)?)?,
        ),
        (format!("torus(Z, seed={seed})"), torus_from_phases(IndexDomain::Integers, PhaseSequence::seeded(seed))),
        (
            format!("gram(N, dim=8, seed={seed})"),
            gram_from_vectors(IndexDomain::Naturals, VectorFamily::Random { dim: 8, seed })?,
        ),
    ])
}

fn covariance_suite(cfg: &RunConfig) -> Result<Vec<Check>> {
    let matrices = match &cfg.matrix {
        Some(m) => vec![("matrix".to_string(), m.build()?)],
        None => builtin_matrices(cfg.seed)?,
    };
    let mut state = cfg.seed ^ 0x9E37_79B9_7F4A_7C15;
    let mut out = Vec::new();
    for (name, a) in &matrices {
        let w = match cfg.window {
            Some(w) if w.check_domain(a.domain()).is_ok() => w,
            _ => crate::config::default_window(a.domain()),
        };
        let mut worst = 0.0f64;
        for _ in 0..25 {
            let x = random_interval_set(&mut state)?;
            let shift = random_interval_set(&mut state)?.intervals()[0].0;
            worst = worst.max(covariance_defect(a, &x, shift, w)?);
        }
        out.push(Check::new(format!("{name} window {w}, 25 cases"), worst, 1e-12));
    }
    Ok(out)
}

fn noise_diagonal_suite(cfg: &RunConfig) -> Result<Vec<Check>> {
    let matrices = match &cfg.matrix {
        Some(m) => vec![("matrix".to_string(), m.build()?)],
        None => builtin_matrices(cfg.seed)?,
    };
    let mut out = Vec::new();
    for (name, a) in &matrices {
        let tol = if a.parity_modulus().is_some() { 1e-8 } else { 1e-5 };
        for size in [128i64, 256, 512] {
            let (w, points) = match a.domain() {
                IndexDomain::Integers => (IndexWindow::new(-size / 2, size / 2 - 1)?, vec![-size / 4, 0, size / 4 - 1]),
                IndexDomain::Naturals => (IndexWindow::new(0, size - 1)?, vec![0, size / 4, 3 * size / 4 - 1]),
            };
            for n in points {
                let d = noise_operator_diagonal(a, n, w)?;
                let s = noise_value(a, &q(n, 2, tol)?)?;
                let defect = outside(d.value, s.lower, s.upper);
                out.push(Check::new(format!("{name} window {size} n={n}"), defect, d.tail_bound));
            }
        }
    }
    Ok(out)
}

fn schur_suite() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for g in schur::modulus_growth_table(&[5, 55, 555])? {
        let defect = (g.norm_lower - g.norm).max(g.u_r - g.norm_lower);
        let mut c = Check::new(format!("r={} norm >= s_r > u_r", g.r), defect, 0.0);
        c.passed = g.norm >= g.norm_lower && g.norm_lower > g.u_r;
        out.push(c);
    }
    for p in 1..=8 {
        let ex = schur::sylvester_hadamard_example(p)?;
        let target = 2f64.powf(p as f64 / 2.0);
        let defect = (ex.norm.value - 1.0).abs().max((ex.modulus_norm.value - target).abs());
        out.push(Check::new(format!("p={p} Hadamard norms"), defect, 1e-9));
    }
    let rep = schur::block_diagonal_norm_divergence(4)?;
    out.push(Check::new("block sum p<=4 has norm 1", (rep.total_norm.value - 1.0).abs(), 1e-9));
    Ok(out)
}
