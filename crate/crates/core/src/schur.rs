//! Operator norms of finite sections and the Schur-multiplier witnesses:
//! row-sum bounds for nonnegative symmetric matrices, the unbounded growth
//! of `‖ |i_{[0,π]}| ‖` on sections, and normalized Sylvester–Hadamard blocks
//! whose modulus has norm `2^{p/2}`.

use std::f64::consts::PI;

use nalgebra::{ComplexField, DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::matrices::{self, IndexDomain};
use crate::observables::{kernel_matrix, IntervalSet};
use crate::summation::NeumaierSum;

/// Largest Hermitian input sent to the dense eigensolver by [`operator_norm`].
pub const EIGEN_MAX_DIM: usize = 1024;
/// Iteration cap for the power method.
pub const POWER_MAX_ITERATIONS: usize = 10_000;
/// Stop once the relative Rayleigh-quotient change drops below this.
pub const POWER_REL_TOL: f64 = 1e-12;
/// Residual above which an estimate is not accepted.
pub const ACCEPT_RESIDUAL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormMethod {
    HermitianEigen,
    PowerIteration,
}

/// Spectral norm with how it was obtained. For `HermitianEigen` the residual
/// is `‖Mv − λv‖` of the extremal eigenpair; for `PowerIteration` it is the
/// final relative change of the Rayleigh quotient of `M*M`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub value: f64,
    pub method: NormMethod,
    pub iterations: usize,
    pub residual: f64,
}

/// Largest singular value. Hermitian inputs up to [`EIGEN_MAX_DIM`] use the
/// eigensolver, everything else the power method on `M*M`.
pub fn operator_norm<T>(m: &DMatrix<T>) -> Result<NormEstimate>
where
    T: ComplexField<RealField = f64> + Copy,
{
    let method = if m.is_square() && m.nrows() <= EIGEN_MAX_DIM && linalg::hermitian_defect(m) <= 1e-12 {
        NormMethod::HermitianEigen
    } else {
        NormMethod::PowerIteration
    };
    operator_norm_with(m, method)
}

pub fn operator_norm_with<T>(m: &DMatrix<T>, method: NormMethod) -> Result<NormEstimate>
where
    T: ComplexField<RealField = f64> + Copy,
{
    if m.iter().any(|z| !z.is_finite()) {
        return Err(Error::Usage("matrix has non-finite entries".into()));
    }
    if m.is_empty() {
        return Ok(NormEstimate { value: 0.0, method, iterations: 0, residual: 0.0 });
    }
    match method {
        NormMethod::HermitianEigen => hermitian_norm(m),
        NormMethod::PowerIteration => power_norm(m),
    }
}

fn hermitian_norm<T>(m: &DMatrix<T>) -> Result<NormEstimate>
where
    T: ComplexField<RealField = f64> + Copy,
{
    if !m.is_square() || linalg::hermitian_defect(m) > 1e-12 {
        return Err(Error::Usage("the eigen path needs a Hermitian matrix".into()));
    }
    let eig = m.clone().symmetric_eigen();
    let (idx, lambda) = eig
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .expect("nonempty");
    let v = eig.eigenvectors.column(idx);
    let residual = (m * v - v * T::from_real(lambda)).norm();
    Ok(NormEstimate { value: lambda.abs(), method: NormMethod::HermitianEigen, iterations: 1, residual })
}

fn power_norm<T>(m: &DMatrix<T>) -> Result<NormEstimate>
where
    T: ComplexField<RealField = f64> + Copy,
{
    let n = m.ncols();
    let mut v = DVector::<T>::from_element(n, T::from_real(1.0 / (n as f64).sqrt()));
    let mut prev = f64::NAN;
    let mut perturbed = false;
    for it in 1..=POWER_MAX_ITERATIONS {
        let w = m * &v;
        let rho = w.norm_squared();
        if rho == 0.0 && !perturbed {
            // Start vector orthogonal to the range of M*; try a sign pattern.
            perturbed = true;
            v = DVector::from_fn(n, |i, _| {
                T::from_real(if i % 2 == 0 { 1.0 } else { -1.0 } * (i + 1) as f64)
            });
            v.normalize_mut();
            continue;
        }
        let u = m.ad_mul(&w);
        let un = u.norm();
        if rho == 0.0 || un == 0.0 {
            return Ok(NormEstimate {
                value: rho.sqrt(),
                method: NormMethod::PowerIteration,
                iterations: it,
                residual: 0.0,
            });
        }
        v = u / T::from_real(un);
        if prev.is_finite() {
            let change = (rho - prev).abs() / rho;
            if change <= POWER_REL_TOL {
                return Ok(NormEstimate {
                    value: rho.sqrt(),
                    method: NormMethod::PowerIteration,
                    iterations: it,
                    residual: change,
                });
            }
        }
        prev = rho;
    }
    Err(Error::NonConvergence { best: prev.sqrt(), iterations: POWER_MAX_ITERATIONS })
}

/// Smallest and largest row sums `(s, t)` of a nonnegative symmetric matrix,
/// which bracket its norm: `s ≤ ‖M‖ ≤ t`.
pub fn row_sum_bounds(m: &DMatrix<f64>, tol: f64) -> Result<(f64, f64)> {
    if !m.is_square() || m.is_empty() {
        return Err(Error::Usage("row-sum bounds need a nonempty square matrix".into()));
    }
    let size = m.nrows();
    for i in 0..size {
        for j in 0..size {
            let v = m[(i, j)];
            if v.is_nan() || v < -tol {
                return Err(Error::Usage(format!("entry ({i},{j}) = {v} is negative")));
            }
            if j > i && (v - m[(j, i)]).abs() > tol {
                return Err(Error::Usage(format!(
                    "entry ({i},{j}) = {v} differs from ({j},{i}) = {}",
                    m[(j, i)]
                )));
            }
        }
    }
    let sums = row_sums(m);
    let s = sums.iter().copied().fold(f64::INFINITY, f64::min);
    let t = sums.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((s, t))
}

fn row_sums(m: &DMatrix<f64>) -> Vec<f64> {
    (0..m.nrows())
        .map(|i| m.row(i).iter().copied().collect::<NeumaierSum>().value())
        .collect()
}

/// Largest section side accepted by [`modulus_growth_table`].
pub const GROWTH_MAX_R: u64 = 20_000;

/// `B_r = (|i_{[0,π]}(n,m)|)_{0 ≤ n,m ≤ r}`, built through the structure-matrix layer.
pub fn half_period_modulus_section(r: u64) -> Result<DMatrix<f64>> {
    if r > GROWTH_MAX_R {
        return Err(Error::Resource { what: "section side", requested: r + 1, cap: GROWTH_MAX_R + 1, achievable: None });
    }
    let x = IntervalSet::new([(0.0, PI)])?;
    let b = matrices::modulus(&kernel_matrix(&x, IndexDomain::Naturals));
    let size = r as usize + 1;
    let mut data = vec![0.0; size * size];
    // Column-major fill.
    data.par_chunks_mut(size).enumerate().for_each(|(j, col)| {
        for (i, v) in col.iter_mut().enumerate() {
            *v = b.entry(i as i64, j as i64).re;
        }
    });
    Ok(DMatrix::from_vec(size, size, data))
}

/// `u_r = (1 + 1/3 + … + 1/r)/π`.
pub fn odd_harmonic_over_pi(r: u64) -> f64 {
    (1..=r).rev().filter(|j| j % 2 == 1).map(|j| 1.0 / j as f64).collect::<NeumaierSum>().value() / PI
}

/// One row of the divergence table for `‖B_r‖`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthRecord {
    pub r: u64,
    /// `s_r`, the smallest row sum.
    pub norm_lower: f64,
    pub first_row_sum: f64,
    pub norm: f64,
    pub u_r: f64,
    pub method: NormMethod,
}

impl GrowthRecord {
    /// `true` when the first row realizes the smallest row sum.
    pub fn first_row_is_smallest(&self) -> bool {
        (self.first_row_sum - self.norm_lower).abs() <= 1e-12 * self.first_row_sum.max(1.0)
    }
}

pub fn modulus_growth_table(r_values: &[u64]) -> Result<Vec<GrowthRecord>> {
    for &r in r_values {
        if r < 5 || r % 2 == 0 || r > GROWTH_MAX_R {
            return Err(Error::Usage(format!("r = {r} must be odd with 5 ≤ r ≤ {GROWTH_MAX_R}")));
        }
    }
    r_values
        .iter()
        .map(|&r| {
            let b = half_period_modulus_section(r)?;
            let (s, _) = row_sum_bounds(&b, 1e-12)?;
            let first = b.row(0).iter().copied().collect::<NeumaierSum>().value();
            let norm = operator_norm(&b)?;
            let rec = GrowthRecord {
                r,
                norm_lower: s,
                first_row_sum: first,
                norm: norm.value,
                u_r: odd_harmonic_over_pi(r),
                method: norm.method,
            };
            if rec.norm < rec.norm_lower - 1e-9 || rec.norm_lower <= rec.u_r {
                return Err(Error::Contract(format!(
                    "r = {r}: expected norm {} ≥ s_r {} > u_r {}",
                    rec.norm, rec.norm_lower, rec.u_r
                )));
            }
            Ok(rec)
        })
        .collect()
}

/// Sylvester–Hadamard matrix of order `2^p` with ±1 entries.
pub fn sylvester_hadamard(p: u32) -> Result<DMatrix<f64>> {
    if p > 12 {
        return Err(Error::Usage(format!("p = {p} out of range 0..=12")));
    }
    let mut h = DMatrix::from_element(1, 1, 1.0);
    for _ in 0..p {
        let k = h.nrows();
        let mut next = DMatrix::zeros(2 * k, 2 * k);
        next.view_mut((0, 0), (k, k)).copy_from(&h);
        next.view_mut((0, k), (k, k)).copy_from(&h);
        next.view_mut((k, 0), (k, k)).copy_from(&h);
        next.view_mut((k, k), (k, k)).copy_from(&(-&h));
        h = next;
    }
    Ok(h)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HadamardExample {
    pub p: u32,
    /// `A_p = H / 2^{p/2}`.
    pub matrix: DMatrix<f64>,
    pub norm: NormEstimate,
    pub modulus_norm: NormEstimate,
}

/// `A_p` with `‖A_p‖ = 1` and `‖|A_p|‖ = 2^{p/2}`, both measured.
pub fn sylvester_hadamard_example(p: u32) -> Result<HadamardExample> {
    if !(1..=12).contains(&p) {
        return Err(Error::Usage(format!("p = {p} out of range 1..=12")));
    }
    let scale = (2f64).powf(-(p as f64) / 2.0);
    let matrix = sylvester_hadamard(p)? * scale;
    let norm = operator_norm(&matrix)?;
    let modulus_norm = operator_norm(&matrix.abs())?;
    Ok(HadamardExample { p, matrix, norm, modulus_norm })
}

/// Block-diagonal `A = ⊕_{p ≤ p_max} A_p` against the norms of `|A_p|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockDivergence {
    pub dimension: usize,
    pub total_norm: NormEstimate,
    pub modulus_block_norms: Vec<NormEstimate>,
    pub total_modulus_norm: NormEstimate,
}

pub fn block_diagonal_norm_divergence(p_max: u32) -> Result<BlockDivergence> {
    if !(1..=10).contains(&p_max) {
        return Err(Error::Usage(format!("p_max = {p_max} out of range 1..=10")));
    }
    let blocks: Vec<HadamardExample> =
        (1..=p_max).map(sylvester_hadamard_example).collect::<Result<_>>()?;
    let dimension: usize = blocks.iter().map(|b| b.matrix.nrows()).sum();
    let mut total = DMatrix::zeros(dimension, dimension);
    let mut at = 0;
    for b in &blocks {
        let k = b.matrix.nrows();
        total.view_mut((at, at), (k, k)).copy_from(&b.matrix);
        at += k;
    }
    Ok(BlockDivergence {
        dimension,
        total_norm: operator_norm(&total)?,
        modulus_block_norms: blocks.iter().map(|b| b.modulus_norm).collect(),
        total_modulus_norm: operator_norm(&total.abs())?,
    })
}
