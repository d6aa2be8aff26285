//! Dense Hermitian helpers shared by the matrix and norm routines.

use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex64;

/// Largest entrywise deviation from Hermitian symmetry.
pub fn hermitian_defect<T>(m: &DMatrix<T>) -> f64
where
    T: ComplexField<RealField = f64> + Copy,
{
    assert_eq!(m.nrows(), m.ncols(), "square matrix expected");
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            let d = (m[(i, j)] - m[(j, i)].conjugate()).modulus();
            worst = worst.max(d);
        }
    }
    worst
}

/// `true` when every entry has zero imaginary part.
pub fn is_real(m: &DMatrix<Complex64>) -> bool {
    m.iter().all(|z| z.im == 0.0)
}

/// Eigenvalues of a Hermitian matrix in ascending order.
///
/// Real inputs go through the real symmetric solver.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut values: Vec<f64> = if is_real(m) {
        let re = m.map(|z| z.re);
        re.symmetric_eigenvalues().iter().copied().collect()
    } else {
        m.clone().symmetric_eigenvalues().iter().copied().collect()
    };
    values.sort_by(f64::total_cmp);
    values
}

/// Smallest eigenvalue of a Hermitian matrix (`+∞` for the empty matrix).
pub fn min_eigenvalue(m: &DMatrix<Complex64>) -> f64 {
    hermitian_eigenvalues(m).first().copied().unwrap_or(f64::INFINITY)
}
