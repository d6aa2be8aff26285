//! Finite sections of the covariant observables
//! `E^A(X) = Σ A(n,m) i_X(n,m) |n⟩⟨m|`, their first two moment operators,
//! and the diagonal of the noise operator `S = E[2] − E[1]²`.

mod interval;

use std::f64::consts::{PI, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::matrices::{self, Index, IndexDomain, IndexWindow, StructureMatrix};
use crate::summation::NeumaierSum;

pub use interval::{eval_expr, IntervalSet};

const NORMALIZED_TOL: f64 = 1e-12;

/// Dense operator on a window of the number basis.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    pub window: IndexWindow,
    pub entries: DMatrix<Complex64>,
    pub hermitian: bool,
}

impl TruncatedOperator {
    fn new(window: IndexWindow, entries: DMatrix<Complex64>) -> Self {
        let hermitian = linalg::hermitian_defect(&entries) <= 1e-12;
        Self { window, entries, hermitian }
    }

    /// Entry at basis indices `(n, m)`.
    pub fn at(&self, n: Index, m: Index) -> Complex64 {
        self.entries[(self.window.offset(n), self.window.offset(m))]
    }

    /// Eigenvalues, ascending. Requires a Hermitian operator.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        if !self.hermitian {
            return Err(Error::Contract("eigenvalues of a non-Hermitian section".into()));
        }
        Ok(linalg::hermitian_eigenvalues(&self.entries))
    }
}

/// `z / (i q)` written out so that `q ↦ −q` conjugates bitwise.
#[inline]
fn div_i(z: Complex64, q: f64) -> Complex64 {
    Complex64::new(z.im / q, -z.re / q)
}

/// `i_X(n,m) = (1/2π) ∫_X e^{i(n−m)x} dx`.
pub fn interval_kernel(x: &IntervalSet, n: Index, m: Index) -> Complex64 {
    let q = n - m;
    if q == 0 {
        return Complex64::new(x.measure() / TAU, 0.0);
    }
    let qf = q as f64;
    let mut re = NeumaierSum::new();
    let mut im = NeumaierSum::new();
    for &(a, b) in x.intervals() {
        let d = Complex64::from_polar(1.0, qf * b) - Complex64::from_polar(1.0, qf * a);
        let t = div_i(d, qf);
        re.add(t.re);
        im.add(t.im);
    }
    Complex64::new(re.value(), im.value()) / TAU
}

/// `i_X` as a structure matrix on `domain`.
pub fn kernel_matrix(x: &IntervalSet, domain: IndexDomain) -> StructureMatrix {
    let x = x.clone();
    let label = format!("i[{x}]");
    StructureMatrix::from_fn(domain, label, move |n, m| interval_kernel(&x, n, m)).assume_hermitian()
}

fn check_normalized(a: &StructureMatrix, w: IndexWindow) -> Result<()> {
    let d = a.diagonal_defect(w);
    if d > NORMALIZED_TOL {
        return Err(Error::Contract(format!(
            "`{}` is not normalized on {w} (diagonal defect {d:e})",
            a.label()
        )));
    }
    Ok(())
}

/// Section of `E^A(X)` on `w`.
pub fn observable_operator(
    a: &StructureMatrix,
    x: &IntervalSet,
    w: IndexWindow,
) -> Result<TruncatedOperator> {
    w.check_domain(a.domain())?;
    check_normalized(a, w)?;
    let product = matrices::schur_product(a, &kernel_matrix(x, a.domain()))?;
    let entries = matrices::truncate(&product, w)?;
    Ok(TruncatedOperator::new(w, entries))
}

/// `max |e^{i(n−m)x} E(X)(n,m) − E(X⊕x)(n,m)|` over `w × w`.
///
/// `U_x = e^{ixN}` acts on the number basis by the phase `e^{i(n−m)x}`.
pub fn covariance_defect(a: &StructureMatrix, x: &IntervalSet, shift: f64, w: IndexWindow) -> Result<f64> {
    w.check_domain(a.domain())?;
    let shifted = x.shift(shift);
    let mut worst = 0.0f64;
    for n in w.indices() {
        for m in w.indices() {
            let amn = a.entry(n, m);
            let lhs = Complex64::from_polar(1.0, (n - m) as f64 * shift) * amn * interval_kernel(x, n, m);
            let rhs = amn * interval_kernel(&shifted, n, m);
            worst = worst.max((lhs - rhs).norm());
        }
    }
    Ok(worst)
}

/// `c_k(q) = (1/2π) ∫_0^{2π} x^k e^{iqx} dx` for `k ∈ {1, 2}`.
///
/// `c₁(0) = π`, `c₁(q) = −i/q`, `c₂(0) = 4π²/3`, `c₂(q) = 2/q² − 2πi/q`.
pub fn moment_kernel(k: u32, q: Index) -> Result<Complex64> {
    let qf = q as f64;
    match (k, q) {
        (1, 0) => Ok(Complex64::new(PI, 0.0)),
        (1, _) => Ok(Complex64::new(0.0, -1.0 / qf)),
        (2, 0) => Ok(Complex64::new(4.0 * PI * PI / 3.0, 0.0)),
        (2, _) => Ok(Complex64::new(2.0 / (qf * qf), -TAU / qf)),
        _ => Err(Error::Usage(format!("moment operators are available for k = 1, 2, not {k}"))),
    }
}

/// Section of `E^A[k] = ∫ x^k dE^A(x)` on `w`.
pub fn moment_operator(a: &StructureMatrix, k: u32, w: IndexWindow) -> Result<TruncatedOperator> {
    moment_kernel(k, 0)?;
    w.check_domain(a.domain())?;
    check_normalized(a, w)?;
    let size = w.len();
    if size > matrices::window_cap() {
        return Err(Error::Resource {
            what: "window side",
            requested: size as u64,
            cap: matrices::window_cap() as u64,
            achievable: None,
        });
    }
    let entries = DMatrix::from_fn(size, size, |i, j| {
        let (n, m) = (w.lo() + i as Index, w.lo() + j as Index);
        a.entry(n, m) * moment_kernel(k, n - m).expect("k checked")
    });
    Ok(TruncatedOperator::new(w, entries))
}

/// `⟨n|S|n⟩` computed on a window, with the bound on what the window misses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseDiagonal {
    pub value: f64,
    pub tail_bound: f64,
    pub margin: Index,
}

/// `⟨n|E[2] − E[1]²|n⟩ = 4π²/3 − Σ_{k∈w} |A(n,k) c₁(n−k)|²`.
///
/// The window must leave at least a quarter of its size on the open sides
/// of `n`; over ℕ it must start at 0, where the lattice ends.
pub fn noise_operator_diagonal(a: &StructureMatrix, n: Index, w: IndexWindow) -> Result<NoiseDiagonal> {
    w.check_domain(a.domain())?;
    if !w.contains(n) {
        return Err(Error::Usage(format!("index {n} outside window {w}")));
    }
    let size = w.len() as Index;
    let (margin, sides) = match a.domain() {
        IndexDomain::Naturals => {
            if w.lo() != 0 {
                return Err(Error::Usage(format!("N windows must start at 0, got {w}")));
            }
            (w.hi() - n, 1.0)
        }
        IndexDomain::Integers => ((n - w.lo()).min(w.hi() - n), 2.0),
    };
    if margin < 1 || margin < size / 4 {
        return Err(Error::Usage(format!(
            "index {n} has margin {margin} in {w}; need at least {}",
            (size / 4).max(1)
        )));
    }
    let ann = a.entry(n, n);
    if (ann - 1.0).norm() > NORMALIZED_TOL {
        return Err(Error::Contract(format!("`{}` is not normalized at {n}", a.label())));
    }
    let mut acc = NeumaierSum::new();
    let far = (n - w.lo()).max(w.hi() - n);
    for j in 1..=far {
        let jf = j as f64;
        for k in [n + j, n - j] {
            if w.contains(k) {
                acc.add(a.entry(n, k).norm_sqr() / (jf * jf));
            }
        }
    }
    let e2 = 4.0 * PI * PI / 3.0 * ann.re;
    let e1 = PI * PI * ann.norm_sqr();
    Ok(NoiseDiagonal {
        value: e2 - e1 - acc.value(),
        tail_bound: sides / margin as f64,
        margin,
    })
}

/// Dense `E[2] − E[1]·E[1]` on `w` (windows up to 256).
pub fn noise_operator_dense(a: &StructureMatrix, w: IndexWindow) -> Result<TruncatedOperator> {
    const DENSE_CAP: usize = 256;
    if w.len() > DENSE_CAP {
        return Err(Error::Resource {
            what: "dense noise operator side",
            requested: w.len() as u64,
            cap: DENSE_CAP as u64,
            achievable: None,
        });
    }
    let e1 = moment_operator(a, 1, w)?;
    let e2 = moment_operator(a, 2, w)?;
    let s = &e2.entries - &e1.entries * &e1.entries;
    Ok(TruncatedOperator::new(w, s))
}

/// Frobenius norm of `E(X)² − E(X)` on the central half of the window.
///
/// For a spectral measure this tends to a finite-section edge effect only.
pub fn idempotence_defect(a: &StructureMatrix, x: &IntervalSet, w: IndexWindow) -> Result<f64> {
    let e = observable_operator(a, x, w)?;
    let d = &e.entries * &e.entries - &e.entries;
    let size = w.len();
    let start = size / 4;
    let len = size / 2;
    Ok(d.view((start, start), (len, len)).norm())
}
