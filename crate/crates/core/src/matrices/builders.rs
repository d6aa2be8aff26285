use std::sync::Arc;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{Index, IndexDomain, ParityModulus, PhaseSequence, StructureMatrix};
use crate::error::{Error, Result};

/// Which parity of `n + m` carries the value 1 in a chessboard matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// 1 on even `n + m`, ξ on odd `n + m`. Normalized and PSD.
    #[default]
    OneOnEvenSum,
    /// 1 on odd `n + m`, ξ on even `n + m` (including the diagonal).
    OneOnOddSum,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChessboardParams {
    pub xi: f64,
    #[serde(default)]
    pub orientation: Orientation,
}

impl ChessboardParams {
    pub fn new(xi: f64, orientation: Orientation) -> Result<Self> {
        if !(0.0..=1.0).contains(&xi) {
            return Err(Error::Usage(format!("chessboard parameter xi = {xi} not in [0, 1]")));
        }
        Ok(Self { xi, orientation })
    }

    /// Modulus on even and odd index differences. The parity of `k − n`
    /// equals the parity of `k + n`.
    fn parity_modulus(&self) -> ParityModulus {
        match self.orientation {
            Orientation::OneOnEvenSum => ParityModulus { even: 1.0, odd: self.xi },
            Orientation::OneOnOddSum => ParityModulus { even: self.xi, odd: 1.0 },
        }
    }
}

pub fn constant_one(domain: IndexDomain) -> StructureMatrix {
    StructureMatrix::from_fn(domain, "constant_one", |_, _| Complex64::new(1.0, 0.0))
        .assume_hermitian()
        .with_parity_modulus(ParityModulus::ONE)
}

/// `A(n,m) = exp(i(ν_n − ν_m))`.
pub fn torus_from_phases(domain: IndexDomain, nu: PhaseSequence) -> StructureMatrix {
    let label = format!("torus({})", nu.describe());
    StructureMatrix::from_fn(domain, label, move |n, m| {
        if n == m {
            return Complex64::new(1.0, 0.0);
        }
        Complex64::from_polar(1.0, nu.value(n) - nu.value(m))
    })
    .assume_hermitian()
    .with_parity_modulus(ParityModulus::ONE)
}

pub fn chessboard(domain: IndexDomain, params: ChessboardParams) -> Result<StructureMatrix> {
    let params = ChessboardParams::new(params.xi, params.orientation)?;
    let pm = params.parity_modulus();
    let label = format!("chessboard(xi={}, {:?})", params.xi, params.orientation);
    Ok(StructureMatrix::from_fn(domain, label, move |n, m| {
        let v = if (n + m).rem_euclid(2) == 0 { pm.even } else { pm.odd };
        Complex64::new(v, 0.0)
    })
    .assume_hermitian()
    .with_parity_modulus(pm))
}

/// Source of the unit vectors `ξ_n` of a Gram matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum VectorFamily {
    /// `ξ_n = vectors[n mod len]`.
    Cyclic(Vec<Vec<Complex64>>),
    /// Independent pseudo-random unit vectors drawn per index from `seed`.
    Random { dim: usize, seed: u64 },
}

impl VectorFamily {
    fn dim(&self) -> usize {
        match self {
            VectorFamily::Cyclic(v) => v.first().map_or(0, Vec::len),
            VectorFamily::Random { dim, .. } => *dim,
        }
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Deterministic 64 random bits for `(seed, n)`.
pub(crate) fn random_bits(seed: u64, n: Index) -> u64 {
    splitmix64(seed ^ splitmix64(n as u64))
}

/// Deterministic unit vector for index `n`; writes into `out`.
pub(crate) fn random_unit_vector(seed: u64, n: Index, out: &mut [Complex64]) {
    let mut rng = ChaCha8Rng::seed_from_u64(random_bits(seed, n));
    loop {
        let mut norm2 = 0.0;
        for z in out.iter_mut() {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            *z = Complex64::new(re, im);
            norm2 += z.norm_sqr();
        }
        if norm2 > 0.0 {
            let inv = norm2.sqrt().recip();
            out.iter_mut().for_each(|z| *z *= inv);
            return;
        }
    }
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Gram matrix `A(n,m) = ⟨ξ_n, ξ_m⟩`, conjugate-linear in the first slot.
pub fn gram_from_vectors(domain: IndexDomain, family: VectorFamily) -> Result<StructureMatrix> {
    let dim = family.dim();
    if dim == 0 {
        return Err(Error::Usage("Gram vectors must be nonempty".into()));
    }
    match family {
        VectorFamily::Cyclic(vectors) => {
            for (i, v) in vectors.iter().enumerate() {
                if v.len() != dim {
                    return Err(Error::Usage(format!(
                        "vector {i} has dimension {}, expected {dim}",
                        v.len()
                    )));
                }
                let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                if !norm.is_finite() || (norm - 1.0).abs() > 1e-9 {
                    return Err(Error::NotUnitVector { index: i, norm });
                }
            }
            let vectors: Arc<[Vec<Complex64>]> = vectors.into();
            let len = vectors.len() as Index;
            let label = format!("gram(cyclic, {} vectors, dim {dim})", vectors.len());
            Ok(StructureMatrix::from_fn(domain, label, move |n, m| {
                let a = &vectors[n.rem_euclid(len) as usize];
                let b = &vectors[m.rem_euclid(len) as usize];
                inner(a, b)
            })
            .assume_hermitian())
        }
        VectorFamily::Random { dim, seed } => {
            let label = format!("gram(random, dim {dim}, seed {seed})");
            Ok(StructureMatrix::from_fn(domain, label, move |n, m| {
                let mut a = vec![Complex64::new(0.0, 0.0); dim];
                let mut b = vec![Complex64::new(0.0, 0.0); dim];
                random_unit_vector(seed, n, &mut a);
                random_unit_vector(seed, m, &mut b);
                inner(&a, &b)
            })
            .assume_hermitian())
        }
    }
}

/// Entrywise product `(A ∘ B)(n,m) = A(n,m)·B(n,m)`.
pub fn schur_product(a: &StructureMatrix, b: &StructureMatrix) -> Result<StructureMatrix> {
    if a.domain() != b.domain() {
        return Err(Error::DomainMismatch {
            left: a.domain().symbol(),
            right: b.domain().symbol(),
        });
    }
    let (fa, fb) = (a.clone(), b.clone());
    let mut out = StructureMatrix::from_fn(
        a.domain(),
        format!("({})∘({})", a.label(), b.label()),
        move |n, m| fa.entry(n, m) * fb.entry(n, m),
    );
    out.hermitian = a.is_hermitian() && b.is_hermitian();
    out.parity_modulus = match (a.parity_modulus(), b.parity_modulus()) {
        (Some(p), Some(q)) => Some(p.product(q)),
        _ => None,
    };
    Ok(out)
}

/// `|A|(n,m) = |A(n,m)|`.
pub fn modulus(a: &StructureMatrix) -> StructureMatrix {
    let fa = a.clone();
    let mut out = StructureMatrix::from_fn(a.domain(), format!("|{}|", a.label()), move |n, m| {
        Complex64::new(fa.entry(n, m).norm(), 0.0)
    });
    out.hermitian = a.is_hermitian();
    out.parity_modulus = a.parity_modulus();
    out
}

/// `M_A`: zero where `A` vanishes, `conj(A)/|A|` elsewhere, so `M_A ∘ A = |A|`.
pub fn phase_conjugate_multiplier(a: &StructureMatrix) -> StructureMatrix {
    let fa = a.clone();
    let mut out = StructureMatrix::from_fn(a.domain(), format!("M[{}]", a.label()), move |n, m| {
        let z = fa.entry(n, m);
        let r = z.norm();
        if r == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            z.conj() / r
        }
    });
    out.hermitian = a.is_hermitian();
    out.parity_modulus = a.parity_modulus().map(|p| ParityModulus {
        even: if p.even > 0.0 { 1.0 } else { 0.0 },
        odd: if p.odd > 0.0 { 1.0 } else { 0.0 },
    });
    out
}
