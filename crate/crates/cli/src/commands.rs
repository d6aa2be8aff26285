use covnoise::matrices::IndexDomain;
use covnoise::noise::{self, AsymptoticClass, NoiseRecord};
use covnoise::observables::{self, eval_expr};
use covnoise::schur;
use covnoise::{IntervalSet, NoiseQuery};
use serde_json::{json, Value};

use crate::config::{IndexRange, RunConfig};
use crate::output::{Cell, Report, Table};
use crate::Failure;

const NOISE_COLUMNS: [&str; 6] = ["n", "l", "value", "lower", "upper", "cutoff"];

fn noise_row(r: &NoiseRecord) -> Vec<Cell> {
    vec![r.n.into(), r.l.into(), r.value.into(), r.lower.into(), r.upper.into(), r.cutoff.into()]
}

pub fn noise_table(cfg: &RunConfig, ls: &[u32], n: IndexRange) -> Result<Report, Failure> {
    let a = cfg.matrix()?;
    let mut table = Table::new(&NOISE_COLUMNS);
    let Some(range) = n.window() else {
        return Ok(table.into());
    };
    let per_l: Vec<Vec<covnoise::NoiseValue>> = ls
        .iter()
        .map(|&l| noise::noise_sequence(&a, l, range, cfg.tolerance))
        .collect::<Result<_, _>>()?;
    for (i, n) in range.indices().enumerate() {
        for (j, &l) in ls.iter().enumerate() {
            table.push(noise_row(&NoiseRecord::new(n, l, per_l[j][i])));
        }
    }
    Ok(table.into())
}

fn class_name(c: AsymptoticClass) -> &'static str {
    match c {
        AsymptoticClass::AsymptoticallyNoiseless => "asymptotically_noiseless",
        AsymptoticClass::PositiveLimit => "positive_limit",
        AsymptoticClass::Undetermined => "undetermined",
    }
}

pub fn asymptotic(cfg: &RunConfig, l: u32, horizon: i64) -> Result<Report, Failure> {
    let a = cfg.matrix()?;
    let rep = noise::asymptotic_noise_estimate(&a, l, cfg.tolerance, horizon)?;
    let mut cols = NOISE_COLUMNS.to_vec();
    cols.extend(["classification", "estimate"]);
    let mut table = Table::new(&cols);
    let mut samples = Vec::new();
    for (n, v) in &rep.samples {
        let rec = NoiseRecord::new(*n, l, *v);
        let mut row = noise_row(&rec);
        row.push(class_name(rep.classification).into());
        row.push(rep.estimate.into());
        table.push(row);
        samples.push(serde_json::to_value(rec).expect("plain record"));
    }
    let document = json!({
        "l": l,
        "horizon": horizon,
        "estimate": rep.estimate,
        "classification": class_name(rep.classification),
        "samples": samples,
    });
    Ok(Report { table, document: Some(document) })
}

fn parse_interval(text: &str) -> Result<IntervalSet, Failure> {
    text.parse::<IntervalSet>().map_err(|e| Failure::config(format!("interval `{text}`: {e}")))
}

pub fn observable(cfg: &RunConfig, interval: &str, moment: Option<u32>) -> Result<Report, Failure> {
    let x = parse_interval(interval)?;
    let a = cfg.matrix()?;
    let w = cfg.window_for(a.domain());
    let op = match moment {
        Some(k) => observables::moment_operator(&a, k, w)?,
        None => observables::observable_operator(&a, &x, w)?,
    };
    let mut table = Table::new(&["n", "m", "re", "im"]);
    let mut rows = Vec::with_capacity(w.len());
    for n in w.indices() {
        let mut row = Vec::with_capacity(w.len());
        for m in w.indices() {
            let z = op.at(n, m);
            table.push(vec![n.into(), m.into(), z.re.into(), z.im.into()]);
            row.push(json!([z.re, z.im]));
        }
        rows.push(Value::Array(row));
    }
    let document = json!({
        "window": [w.lo(), w.hi()],
        "interval": x.to_string(),
        "moment": moment,
        "hermitian": op.hermitian,
        "entries": rows,
    });
    Ok(Report { table, document: Some(document) })
}

pub fn covariance_check(
    cfg: &RunConfig,
    interval: &str,
    shift: &str,
    bound: f64,
) -> Result<(Report, Option<String>), Failure> {
    let x = parse_interval(interval)?;
    let shift = eval_expr(shift).map_err(|e| Failure::config(format!("shift `{shift}`: {e}")))?;
    let a = cfg.matrix()?;
    let w = cfg.window_for(a.domain());
    let defect = observables::covariance_defect(&a, &x, shift, w)?;
    let mut table = Table::new(&["interval", "shift", "window", "defect", "bound", "passed"]);
    let passed = defect <= bound;
    table.push(vec![x.to_string().into(), shift.into(), w.to_string().into(), defect.into(), bound.into(), passed.into()]);
    let failed = (!passed).then(|| format!("covariance defect {defect:e} exceeds {bound:e}"));
    Ok((table.into(), failed))
}

pub fn noise_diagonal(cfg: &RunConfig, n: IndexRange) -> Result<(Report, Option<String>), Failure> {
    let a = cfg.matrix()?;
    let w = match (cfg.window, a.domain()) {
        (Some(w), _) => w,
        (None, IndexDomain::Naturals) => covnoise::IndexWindow::new(0, 511)?,
        (None, IndexDomain::Integers) => covnoise::IndexWindow::new(-256, 255)?,
    };
    let mut table = Table::new(&[
        "n", "value", "tail_bound", "margin", "noise_lower", "noise_upper", "consistent",
    ]);
    let mut bad = Vec::new();
    if let Some(range) = n.window() {
        for n in range.indices() {
            let d = observables::noise_operator_diagonal(&a, n, w)?;
            let s = noise::noise_value(&a, &NoiseQuery::new(n, 2, cfg.tolerance)?)?;
            let ok = s.intersects(d.value - d.tail_bound, d.value + d.tail_bound);
            if !ok {
                bad.push(n);
            }
            table.push(vec![
                n.into(), d.value.into(), d.tail_bound.into(), d.margin.into(), s.lower.into(), s.upper.into(), ok.into(),
            ]);
        }
    }
    let failed = (!bad.is_empty()).then(|| format!("diagonal outside the noise bracket at n = {bad:?}"));
    Ok((table.into(), failed))
}

fn method_name(m: schur::NormMethod) -> &'static str {
    match m {
        schur::NormMethod::HermitianEigen => "hermitian_eigen",
        schur::NormMethod::PowerIteration => "power_iteration",
    }
}

pub fn schur_growth(rs: &[u64]) -> Result<Report, Failure> {
    let mut table = Table::new(&["r", "norm_lower", "first_row_sum", "norm", "u_r", "method"]);
    for g in schur::modulus_growth_table(rs)? {
        table.push(vec![
            g.r.into(), g.norm_lower.into(), g.first_row_sum.into(), g.norm.into(), g.u_r.into(), method_name(g.method).into(),
        ]);
    }
    Ok(table.into())
}

pub fn hadamard(ps: &[u32], block: bool) -> Result<Report, Failure> {
    if block {
        let p_max = ps.iter().copied().max().unwrap_or(1);
        let rep = schur::block_diagonal_norm_divergence(p_max)?;
        let mut table = Table::new(&["p", "block_modulus_norm"]);
        for (p, n) in (1..=p_max).zip(&rep.modulus_block_norms) {
            table.push(vec![p.into(), n.value.into()]);
        }
        let document = json!({
            "p_max": p_max,
            "dimension": rep.dimension,
            "total_norm": rep.total_norm.value,
            "total_modulus_norm": rep.total_modulus_norm.value,
            "block_modulus_norms": rep.modulus_block_norms.iter().map(|n| n.value).collect::<Vec<_>>(),
        });
        return Ok(Report { table, document: Some(document) });
    }
    let mut table = Table::new(&["p", "dimension", "norm", "modulus_norm", "method"]);
    for &p in ps {
        let ex = schur::sylvester_hadamard_example(p)?;
        table.push(vec![
            p.into(), ex.matrix.nrows().into(), ex.norm.value.into(), ex.modulus_norm.value.into(), method_name(ex.norm.method).into(),
        ]);
    }
    Ok(table.into())
}
