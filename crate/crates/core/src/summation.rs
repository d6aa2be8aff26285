//! Compensated accumulation and certified tails of inverse-square sums.

use std::f64::consts::PI;

/// Unit roundoff for `f64`.
pub(crate) const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
    count: u64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.compensation += (self.sum - t) + v;
        } else {
            self.compensation += (v - t) + self.sum;
        }
        self.sum = t;
        self.count += 1;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }

    /// Number of terms added so far.
    pub fn count(&self) -> u64 {
        self.count
    }

    /// A bound on the accumulated rounding error for a sum of nonnegative
    /// terms, each of which carried at most `per_term` relative error.
    pub fn rounding_bound(&self, per_term: f64) -> f64 {
        let u = UNIT_ROUNDOFF;
        let n = self.count as f64;
        self.value().abs() * (per_term + 4.0 * u + 4.0 * n * u * u)
    }
}

impl Extend<f64> for NeumaierSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for v in iter {
            self.add(v);
        }
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::new();
        s.extend(iter);
        s
    }
}

/// `Σ_{j=1}^{n} 1/j²`, summed directly.
pub fn harmonic2(n: u64) -> f64 {
    // Smallest terms first.
    (1..=n)
        .rev()
        .map(|j| {
            let j = j as f64;
            1.0 / (j * j)
        })
        .collect::<NeumaierSum>()
        .value()
}

/// Enclosure `[lower, upper]` of `Σ_{j>k} 1/j²`.
///
/// For `k ≥ 1` this uses the Euler–Maclaurin expansion
/// `1/k − 1/(2k²) + 1/(6k³) − 1/(30k⁵) + …`, whose partial sums alternately
/// over- and under-shoot the tail for a completely monotone summand.
pub fn inverse_square_tail(k: u64) -> (f64, f64) {
    if k == 0 {
        let z = PI * PI / 6.0;
        return (z * (1.0 - 4.0 * UNIT_ROUNDOFF), z * (1.0 + 4.0 * UNIT_ROUNDOFF));
    }
    let x = 1.0 / k as f64;
    let x2 = x * x;
    let x3 = x2 * x;
    let upper = x - 0.5 * x2 + x3 / 6.0;
    let lower = upper - x3 * x2 / 30.0;
    let slack = 8.0 * UNIT_ROUNDOFF * upper;
    ((lower - slack).max(0.0), upper + slack)
}

/// Enclosures of the even and odd parts of `Σ_{j>k} 1/j²`, for even `k`.
///
/// The even part is `¼ Σ_{i>k/2} 1/i²`; the odd part is the remainder.
pub fn parity_tails(k: u64) -> ((f64, f64), (f64, f64)) {
    debug_assert!(k.is_multiple_of(2));
    let (all_lo, all_hi) = inverse_square_tail(k);
    let (half_lo, half_hi) = inverse_square_tail(k / 2);
    let even = (0.25 * half_lo, 0.25 * half_hi);
    let odd = ((all_lo - even.1).max(0.0), all_hi - even.0);
    (even, odd)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tail_oracle(k: u64) -> f64 {
        // Brute force far enough that the rest is below 1e-9, plus the
        // integral estimate of the remainder.
        let far = 2_000_000u64;
        let mut s = NeumaierSum::new();
        for j in (k + 1..=far).rev() {
            let j = j as f64;
            s.add(1.0 / (j * j));
        }
        s.value() + 1.0 / (far as f64 + 0.5)
    }

    #[test]
    fn neumaier_recovers_cancelled_terms() {
        let mut s = NeumaierSum::new();
        s.extend([1.0, 1e100, 1.0, -1e100]);
        assert_eq!(s.value(), 2.0);
        assert_eq!(s.count(), 4);
    }

    #[test]
    fn harmonic2_small_values() {
        assert_eq!(harmonic2(0), 0.0);
        assert_eq!(harmonic2(1), 1.0);
        assert!((harmonic2(2) - 1.25).abs() < 1e-16);
        assert!((harmonic2(10) - 1.549_767_731_166_540_7).abs() < 1e-15);
    }

    #[test]
    fn tail_enclosure_contains_brute_force() {
        for k in [1u64, 2, 3, 5, 8, 13, 50, 200, 1000] {
            let (lo, hi) = inverse_square_tail(k);
            let t = tail_oracle(k);
            assert!(lo - 1e-12 <= t && t <= hi + 1e-12, "k={k}: {lo} {t} {hi}");
        }
        // Exact reference against the Basel constant where cancellation is harmless.
        for k in 1..=40u64 {
            let t = PI * PI / 6.0 - harmonic2(k);
            let (lo, hi) = inverse_square_tail(k);
            assert!(lo - 1e-15 <= t && t <= hi + 1e-15, "k={k}");
        }
    }

    #[test]
    fn tail_enclosure_is_tight() {
        let (lo, hi) = inverse_square_tail(64);
        assert!(hi - lo < 1e-10);
        let (lo, hi) = inverse_square_tail(1024);
        assert!(hi - lo < 1e-15);
    }

    #[test]
    fn parity_tails_split_the_whole() {
        for k in [2u64, 10, 64, 500] {
            let ((e_lo, e_hi), (o_lo, o_hi)) = parity_tails(k);
            let mut even = NeumaierSum::new();
            let mut odd = NeumaierSum::new();
            for j in (k + 1..=400_000).rev() {
                let v = 1.0 / (j as f64 * j as f64);
                if j % 2 == 0 {
                    even.add(v);
                } else {
                    odd.add(v);
                }
            }
            // Remainders beyond the brute-force range are about 1/(2·400000) each.
            let rem = 1.0 / 800_000.0;
            assert!(e_lo <= even.value() + rem + 1e-9 && even.value() <= e_hi);
            assert!(o_lo <= odd.value() + rem + 1e-9 && odd.value() <= o_hi);
        }
    }
}
