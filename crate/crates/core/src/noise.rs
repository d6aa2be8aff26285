//! Moments of the inverse-square random variables `X_n^A` and the noise
//! numbers `s_n^A(l) = (π/√3)^l − M^{(l)}(X_n^A)`.
//!
//! Every value comes with a bracket: the partial sum over `|k − n| ≤ K`
//! plus an enclosure of the remaining tail. Without further knowledge the
//! tail is bounded using `|A| ≤ 1` only; a matrix that certifies a parity
//! modulus pattern gets a tail that is closed in form.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrices::{ChessboardParams, Index, IndexDomain, IndexWindow, Orientation, StructureMatrix};
use crate::summation::{harmonic2, inverse_square_tail, parity_tails, NeumaierSum, UNIT_ROUNDOFF};

/// Default cap on the number of summed terms.
pub const DEFAULT_TERM_CAP: u64 = 100_000_000;

const THREE_OVER_PI2: f64 = 3.0 / (PI * PI);

/// `(π/√3)^l`, the moment of `X_n^1` over ℤ and its limit over ℕ.
pub fn reference_moment(l: u32) -> f64 {
    debug_assert!(l >= 1);
    (PI / 3f64.sqrt()).powi(l as i32)
}

/// `Σ_{k∈D, k≠n} 1/(k − n)²`.
///
/// ℤ: `π²/3`. ℕ: `π²/6 + H_n^{(2)}`, with `H_n^{(2)}` summed directly.
pub fn lattice_sum_exact(domain: IndexDomain, n: Index) -> f64 {
    match domain {
        IndexDomain::Integers => PI * PI / 3.0,
        IndexDomain::Naturals => {
            assert!(n >= 0, "ℕ lattice sum needs n ≥ 0");
            PI * PI / 6.0 + harmonic2(n as u64)
        }
    }
}

/// The probability `p_n` on the domain, centered at `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbabilityWeights {
    domain: IndexDomain,
    center: Index,
}

impl ProbabilityWeights {
    pub fn new(domain: IndexDomain, center: Index) -> Result<Self> {
        if !domain.contains(center) {
            return Err(Error::Usage(format!("center {center} outside {domain}")));
        }
        Ok(Self { domain, center })
    }

    pub fn weight(&self, k: Index) -> f64 {
        if !self.domain.contains(k) {
            return 0.0;
        }
        if k != self.center {
            let j = (k - self.center) as f64;
            return THREE_OVER_PI2 / (j * j);
        }
        match self.domain {
            IndexDomain::Integers => 0.0,
            IndexDomain::Naturals => 1.0 - THREE_OVER_PI2 * lattice_sum_exact(self.domain, self.center),
        }
    }

    /// Enclosure of the total mass from the window `|k − n| ≤ cutoff` plus the tail.
    pub fn total_mass_bracket(&self, cutoff: u64) -> (f64, f64) {
        let n = self.center;
        let mut acc = NeumaierSum::new();
        acc.add(self.weight(n));
        let reach = match self.domain {
            IndexDomain::Integers => cutoff,
            IndexDomain::Naturals => cutoff.max(n as u64),
        };
        for j in 1..=reach as Index {
            if j as u64 <= cutoff {
                acc.add(self.weight(n + j));
            }
            if self.domain.contains(n - j) {
                acc.add(self.weight(n - j));
            }
        }
        let sides = match self.domain {
            IndexDomain::Integers => 2.0,
            IndexDomain::Naturals => 1.0,
        };
        let (lo, hi) = inverse_square_tail(cutoff);
        let s = acc.value();
        let r = acc.rounding_bound(4.0 * UNIT_ROUNDOFF) + 4.0 * UNIT_ROUNDOFF;
        (s - r + sides * THREE_OVER_PI2 * lo, s + r + sides * THREE_OVER_PI2 * hi)
    }
}

/// One point `(n, l)` to evaluate to absolute accuracy `tol`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseQuery {
    pub n: Index,
    pub l: u32,
    pub tol: f64,
    pub term_cap: u64,
}

impl NoiseQuery {
    pub fn new(n: Index, l: u32, tol: f64) -> Result<Self> {
        if l == 0 {
            return Err(Error::Usage("moment order l must be at least 1".into()));
        }
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::Usage(format!("tolerance {tol} must be positive")));
        }
        Ok(Self { n, l, tol, term_cap: DEFAULT_TERM_CAP })
    }

    pub fn with_term_cap(mut self, cap: u64) -> Self {
        self.term_cap = cap;
        self
    }
}

/// A number together with a bracket `[lower, upper]` and the summation cutoff `K`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseValue {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub cutoff: u64,
}

impl NoiseValue {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    /// `true` when the two brackets overlap.
    pub fn intersects(&self, lower: f64, upper: f64) -> bool {
        self.lower <= upper && lower <= self.upper
    }
}

/// A serialized row `{n, l, value, lower, upper, cutoff}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseRecord {
    pub n: Index,
    pub l: u32,
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub cutoff: u64,
}

impl NoiseRecord {
    pub fn new(n: Index, l: u32, v: NoiseValue) -> Self {
        Self { n, l, value: v.value, lower: v.lower, upper: v.upper, cutoff: v.cutoff }
    }
}

fn sides(domain: IndexDomain) -> f64 {
    match domain {
        IndexDomain::Integers => 2.0,
        IndexDomain::Naturals => 1.0,
    }
}

/// Number of terms summed for cutoff `k`.
fn term_count(domain: IndexDomain, n: Index, k: u64) -> u64 {
    match domain {
        IndexDomain::Integers => 2 * k,
        IndexDomain::Naturals => k + n as u64,
    }
}

/// A priori bound on the rounding error of the partial sum, which never
/// exceeds the full lattice sum.
fn rounding_budget(domain: IndexDomain, n: Index, k: u64, l: u32) -> f64 {
    let bound = match domain {
        IndexDomain::Integers => PI * PI / 3.0,
        IndexDomain::Naturals => PI * PI / 3.0,
    };
    let u = UNIT_ROUNDOFF;
    let terms = term_count(domain, n, k) as f64;
    bound * ((l as f64 + 8.0) * u + 4.0 * terms * u * u)
}

/// Tail enclosure of `Σ_{|j|>K} |A|^l / j²` (all sides), in units of the lattice sum.
fn tail_enclosure(a: &StructureMatrix, l: u32, k: u64) -> (f64, f64) {
    let s = sides(a.domain());
    match a.parity_modulus() {
        Some(p) => {
            let (even, odd) = parity_tails(k);
            let ce = p.even.powi(l as i32);
            let co = p.odd.powi(l as i32);
            (s * (ce * even.0 + co * odd.0), s * (ce * even.1 + co * odd.1))
        }
        None => (0.0, s * inverse_square_tail(k).1),
    }
}

fn choose_cutoff(a: &StructureMatrix, q: &NoiseQuery) -> Result<u64> {
    let domain = a.domain();
    let weight = reference_moment(q.l) * THREE_OVER_PI2;
    let fits = |k: u64| {
        let (lo, hi) = tail_enclosure(a, q.l, k);
        weight * (hi - lo + 2.0 * rounding_budget(domain, q.n, k, q.l)) <= q.tol
    };
    let max_k = match domain {
        IndexDomain::Integers => q.term_cap / 2,
        IndexDomain::Naturals => q.term_cap.saturating_sub(q.n as u64),
    } & !1;
    let resource = |max_k: u64| {
        let achievable = if max_k == 0 {
            f64::INFINITY
        } else {
            let (lo, hi) = tail_enclosure(a, q.l, max_k);
            weight * (hi - lo)
        };
        Error::Resource {
            what: "summation terms",
            requested: term_count(domain, q.n, max_k.max(1) * 2),
            cap: q.term_cap,
            achievable: Some(achievable),
        }
    };
    if max_k < 2 {
        return Err(resource(max_k));
    }
    let k = match a.parity_modulus() {
        Some(_) => {
            let mut k = 64u64.min(max_k);
            while !fits(k) {
                if k == max_k {
                    return Err(resource(max_k));
                }
                k = (k * 2).min(max_k);
            }
            k
        }
        None => {
            // The generic tail is below sides/K.
            let slack = q.tol - 2.0 * weight * rounding_budget(domain, q.n, max_k, q.l);
            if slack <= 0.0 {
                return Err(resource(max_k));
            }
            let k = (sides(domain) * weight / slack).ceil();
            if k > max_k as f64 {
                return Err(resource(max_k));
            }
            let mut k = (k as u64).max(2);
            k += k % 2;
            while !fits(k) && k < max_k {
                k = (k + k / 64 + 2).min(max_k);
            }
            k
        }
    };
    Ok(k)
}

/// `M^{(l)}(X_n^A) = (π/√3)^l (3/π²) Σ_{k≠n} |A(n,k)|^l / (k − n)²`.
pub fn moment(a: &StructureMatrix, q: &NoiseQuery) -> Result<NoiseValue> {
    let q = NoiseQuery::new(q.n, q.l, q.tol)?.with_term_cap(q.term_cap);
    let domain = a.domain();
    let n = q.n;
    if !domain.contains(n) {
        return Err(Error::Usage(format!("index {n} outside {domain}")));
    }
    let k = choose_cutoff(a, &q)?;
    let l = q.l as i32;
    let term = |m: Index, j: Index| {
        let jf = j as f64;
        a.entry(n, m).norm().powi(l) / (jf * jf)
    };

    // Symmetric outward order: n+1, n−1, n+2, n−2, ...
    let mut acc = NeumaierSum::new();
    let reach = match domain {
        IndexDomain::Integers => k,
        IndexDomain::Naturals => k.max(n as u64),
    } as Index;
    for j in 1..=reach {
        if j as u64 <= k {
            acc.add(term(n + j, j));
        }
        if domain.contains(n - j) {
            acc.add(term(n - j, j));
        }
    }

    let weight = reference_moment(q.l) * THREE_OVER_PI2;
    let partial = acc.value();
    let round = acc.rounding_bound((l as f64 + 4.0) * UNIT_ROUNDOFF);
    let (t_lo, t_hi) = tail_enclosure(a, q.l, k);
    let lower = weight * (partial - round + t_lo) * (1.0 - 4.0 * UNIT_ROUNDOFF);
    let upper = weight * (partial + round + t_hi) * (1.0 + 4.0 * UNIT_ROUNDOFF);
    let lower = lower.max(0.0);
    Ok(NoiseValue { value: 0.5 * (lower + upper), lower, upper, cutoff: k })
}

/// `s_n^A(l) = (π/√3)^l − M^{(l)}(X_n^A)`.
pub fn noise_value(a: &StructureMatrix, q: &NoiseQuery) -> Result<NoiseValue> {
    let m = moment(a, q)?;
    let reference = reference_moment(q.l);
    let slack = 2.0 * UNIT_ROUNDOFF * reference;
    let lower = reference - m.upper - slack;
    let upper = reference - m.lower + slack;
    let value = (reference - m.value).clamp(lower, upper);
    Ok(NoiseValue { value, lower, upper, cutoff: m.cutoff })
}

/// `noise_value` for each `n` in `n_range`, ascending. Evaluated in parallel;
/// each point is summed sequentially, so the result matches a serial loop.
pub fn noise_sequence(
    a: &StructureMatrix,
    l: u32,
    n_range: IndexWindow,
    tol: f64,
) -> Result<Vec<NoiseValue>> {
    let queries: Vec<NoiseQuery> =
        n_range.indices().map(|n| NoiseQuery::new(n, l, tol)).collect::<Result<_>>()?;
    queries.par_iter().map(|q| noise_value(a, q)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AsymptoticClass {
    AsymptoticallyNoiseless,
    PositiveLimit,
    Undetermined,
}

/// Three-point look at `s_n^A(l)` for large `n`. A heuristic, never a proof.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticReport {
    pub estimate: f64,
    pub classification: AsymptoticClass,
    pub samples: Vec<(Index, NoiseValue)>,
}

/// Decay allowance: `s_n^1(l)` approaches zero like `(π/√3)^l (3/π²)/n` over ℕ.
const DECAY_ALLOWANCE: f64 = 2.0;

/// Samples `s_n^A(l)` at `n = horizon/4, horizon/2, horizon` and classifies
/// the apparent limit.
pub fn asymptotic_noise_estimate(
    a: &StructureMatrix,
    l: u32,
    tol: f64,
    horizon: Index,
) -> Result<AsymptoticReport> {
    if horizon < 16 {
        return Err(Error::Usage(format!("horizon {horizon} must be at least 16")));
    }
    let points = [horizon / 4, horizon / 2, horizon];
    let samples: Vec<(Index, NoiseValue)> = points
        .par_iter()
        .map(|&n| Ok((n, noise_value(a, &NoiseQuery::new(n, l, tol)?)?)))
        .collect::<Result<_>>()?;

    let weight = reference_moment(l) * THREE_OVER_PI2;
    let max_upper = samples.iter().map(|s| s.1.upper).fold(f64::NEG_INFINITY, f64::max);
    let min_lower = samples.iter().map(|s| s.1.lower).fold(f64::INFINITY, f64::min);
    let max_value = samples.iter().map(|s| s.1.value).fold(f64::NEG_INFINITY, f64::max);
    let min_value = samples.iter().map(|s| s.1.value).fold(f64::INFINITY, f64::min);

    let classification = if max_upper < tol + weight * DECAY_ALLOWANCE / horizon as f64 {
        AsymptoticClass::AsymptoticallyNoiseless
    } else if min_lower > 2.0 * tol && max_value - min_value <= 10.0 * tol {
        AsymptoticClass::PositiveLimit
    } else {
        AsymptoticClass::Undetermined
    };
    Ok(AsymptoticReport { estimate: samples[2].1.value, classification, samples })
}

/// Partial sums and limits appearing in the ℕ chessboard closed forms.
pub mod chessboard_constants {
    use super::*;

    pub const ALPHA_INF: f64 = PI * PI / 8.0;
    pub const BETA_INF: f64 = PI * PI / 24.0;

    /// `α_{2k+1} = Σ_{m=0}^{k} 1/(2m+1)²`; zero for `k < 0`.
    pub fn alpha_partial(k: i64) -> f64 {
        (0..=k)
            .rev()
            .map(|m| {
                let d = (2 * m + 1) as f64;
                1.0 / (d * d)
            })
            .collect::<NeumaierSum>()
            .value()
    }

    /// `β_{2k} = Σ_{m=1}^{k} 1/(2m)²`.
    pub fn beta_partial(k: i64) -> f64 {
        (1..=k)
            .rev()
            .map(|m| {
                let d = (2 * m) as f64;
                1.0 / (d * d)
            })
            .collect::<NeumaierSum>()
            .value()
    }
}

/// Which printed form a chessboard closed-form value follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClosedFormConvention {
    /// The ℕ formulas in `α`, `β`.
    HalfLine,
    /// ℤ with ξ on odd `n + k`: `(π^{l−2}/3^{l/2−1})(1−ξ^l)π²/4`.
    LineQuarter,
    /// ℤ with ξ on even `n + k`: the same with `π²/12`.
    LineTwelfth,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormValue {
    pub value: f64,
    pub convention: ClosedFormConvention,
}

/// `π^{l−2} / 3^{l/2−1}`, equal to `(π/√3)^l · 3/π²`.
fn closed_form_prefactor(l: u32) -> f64 {
    reference_moment(l) * THREE_OVER_PI2
}

/// Closed-form chessboard noise `s_n^ξ(l)`.
///
/// Over ℤ the lattice splits into even differences (sum `π²/12`) and odd
/// differences (sum `π²/4`); the value is `π²/4`-type when ξ sits on the odd
/// differences (`OneOnEvenSum`) and `π²/12`-type otherwise.
pub fn chessboard_noise_closed_form(
    params: ChessboardParams,
    domain: IndexDomain,
    n: Index,
    l: u32,
) -> Result<ClosedFormValue> {
    use chessboard_constants::*;
    let params = ChessboardParams::new(params.xi, params.orientation)?;
    if l == 0 {
        return Err(Error::Usage("moment order l must be at least 1".into()));
    }
    let pre = closed_form_prefactor(l);
    let xl = params.xi.powi(l as i32);
    match (domain, params.orientation) {
        (IndexDomain::Naturals, Orientation::OneOnEvenSum) => {
            if n < 0 {
                return Err(Error::Usage(format!("index {n} outside N")));
            }
            let k = n / 2;
            let alpha = if n % 2 == 1 { alpha_partial(k) } else { alpha_partial(k - 1) };
            let inner = PI * PI / 3.0 - beta_partial(k) - xl * alpha - xl * ALPHA_INF - BETA_INF;
            Ok(ClosedFormValue { value: pre * inner, convention: ClosedFormConvention::HalfLine })
        }
        (IndexDomain::Naturals, Orientation::OneOnOddSum) => Err(Error::Usage(
            "the N chessboard closed form assumes the one_on_even_sum orientation".into(),
        )),
        (IndexDomain::Integers, Orientation::OneOnEvenSum) => Ok(ClosedFormValue {
            value: pre * (1.0 - xl) * PI * PI / 4.0,
            convention: ClosedFormConvention::LineQuarter,
        }),
        (IndexDomain::Integers, Orientation::OneOnOddSum) => Ok(ClosedFormValue {
            value: pre * (1.0 - xl) * PI * PI / 12.0,
            convention: ClosedFormConvention::LineTwelfth,
        }),
    }
}

/// `true` when every `s_n^B(l)` upper endpoint on `n_range` is below `tol`.
pub fn is_noiseless_z(b: &StructureMatrix, l: u32, n_range: IndexWindow, tol: f64) -> Result<bool> {
    if b.domain() != IndexDomain::Integers {
        return Err(Error::Usage("is_noiseless_z needs a matrix on Z".into()));
    }
    // Query accuracy well inside tol so that the brackets can resolve it.
    let seq = noise_sequence(b, l, n_range, tol / 4.0)?;
    Ok(seq.iter().all(|v| v.upper < tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrices::{chessboard, constant_one, modulus, torus_from_phases, ChessboardParams, Orientation};
    use crate::summation::harmonic2;
    use crate::{Complex64, PhaseSequence};
    use proptest::prelude::*;

    fn q(n: Index, l: u32, tol: f64) -> NoiseQuery {
        NoiseQuery::new(n, l, tol).unwrap()
    }

    fn bare_chessboard(domain: IndexDomain, xi: f64, o: Orientation) -> StructureMatrix {
        chessboard(domain, ChessboardParams::new(xi, o).unwrap()).unwrap().without_parity_modulus()
    }

    #[test]
    fn reference_values() {
        assert!((reference_moment(2) - PI * PI / 3.0).abs() < 1e-15);
        assert!((reference_moment(1) - 1.813_799_364_234_217_8).abs() < 1e-15);
        assert!((reference_moment(4) - PI.powi(4) / 9.0).abs() < 1e-13);
        assert_eq!(lattice_sum_exact(IndexDomain::Integers, -7), PI * PI / 3.0);
        assert!((lattice_sum_exact(IndexDomain::Naturals, 0) - PI * PI / 6.0).abs() < 1e-15);
        assert!((lattice_sum_exact(IndexDomain::Naturals, 2) - PI * PI / 6.0 - 1.25).abs() < 1e-15);
    }

    #[test]
    fn query_validation() {
        assert!(NoiseQuery::new(0, 0, 1e-8).is_err());
        assert!(NoiseQuery::new(0, 2, 0.0).is_err());
        assert!(NoiseQuery::new(0, 2, f64::NAN).is_err());
        let one = constant_one(IndexDomain::Naturals);
        assert!(matches!(noise_value(&one, &q(-1, 2, 1e-6)), Err(Error::Usage(_))));
    }

    #[test]
    fn operation_examples() {
        let z = constant_one(IndexDomain::Integers);
        let m = moment(&z, &q(3, 2, 1e-8)).unwrap();
        assert!(m.contains(PI * PI / 3.0) && m.width() <= 2e-8);

        let delta = StructureMatrix::from_fn(IndexDomain::Integers, "delta", |n, m| {
            if n == m { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }
        });
        let m = moment(&delta, &q(0, 3, 1e-6)).unwrap();
        assert!(m.contains(0.0) && m.lower == 0.0);

        let cb = chessboard(IndexDomain::Integers, ChessboardParams::new(0.5, Orientation::OneOnEvenSum).unwrap())
            .unwrap();
        let m = moment(&cb, &q(0, 2, 1e-8)).unwrap();
        assert!(m.contains(PI * PI / 12.0 + 0.25 * PI * PI / 4.0), "{m:?}");

        let n = constant_one(IndexDomain::Naturals);
        let s = noise_value(&n, &q(0, 2, 1e-8)).unwrap();
        assert!(s.contains(PI * PI / 6.0));
        let s = noise_value(&n, &q(10, 2, 1e-8)).unwrap();
        assert!(s.contains(PI * PI / 6.0 - 1.549_767_731_166_540_7), "{s:?}");
        assert!((PI * PI / 6.0 - harmonic2(10) - 0.095_166_335_681_526_1).abs() < 1e-12);
    }

    #[test]
    fn generic_bound_path_brackets_too() {
        let z = bare_chessboard(IndexDomain::Integers, 0.5, Orientation::OneOnEvenSum);
        let m = moment(&z, &q(0, 2, 1e-5)).unwrap();
        assert!(m.contains(PI * PI / 12.0 + 0.25 * PI * PI / 4.0) && m.width() <= 2e-5);
        let n = constant_one(IndexDomain::Naturals).without_parity_modulus();
        let s = noise_value(&n, &q(10, 3, 1e-5)).unwrap();
        let exact = reference_moment(3) * (1.0 - THREE_OVER_PI2 * (PI * PI / 6.0 + harmonic2(10)));
        assert!(s.contains(exact));
    }

    #[test]
    fn tiny_tolerance_is_a_resource_error() {
        let a = bare_chessboard(IndexDomain::Integers, 0.3, Orientation::OneOnOddSum);
        match noise_value(&a, &q(0, 2, 1e-12)) {
            Err(Error::Resource { achievable: Some(t), cap, .. }) => {
                assert_eq!(cap, DEFAULT_TERM_CAP);
                assert!(t > 1e-12 && t.is_finite());
            }
            other => panic!("{other:?}"),
        }
        let small_cap = q(0, 2, 1e-3).with_term_cap(10);
        assert!(matches!(noise_value(&a, &small_cap), Err(Error::Resource { .. })));
    }

    #[test]
    fn asymptotic_examples() {
        let torus = torus_from_phases(IndexDomain::Naturals, PhaseSequence::linear(0.7));
        let r = asymptotic_noise_estimate(&torus, 2, 1e-3, 4096).unwrap();
        assert_eq!(r.classification, AsymptoticClass::AsymptoticallyNoiseless);
        let one = constant_one(IndexDomain::Naturals);
        let r = asymptotic_noise_estimate(&one, 2, 1e-3, 4096).unwrap();
        assert_eq!(r.classification, AsymptoticClass::AsymptoticallyNoiseless);
        assert_eq!(r.samples.len(), 3);
        let cb = chessboard(IndexDomain::Naturals, ChessboardParams::new(0.5, Orientation::OneOnEvenSum).unwrap())
            .unwrap();
        let r = asymptotic_noise_estimate(&cb, 2, 1e-3, 4096).unwrap();
        assert_eq!(r.classification, AsymptoticClass::PositiveLimit);
        assert!((r.estimate - 0.75 * PI * PI / 4.0).abs() < 1e-2);
        assert!(asymptotic_noise_estimate(&cb, 2, 1e-3, 15).is_err());
    }

    #[test]
    fn closed_form_examples() {
        let p1 = ChessboardParams::new(1.0, Orientation::OneOnEvenSum).unwrap();
        let v = chessboard_noise_closed_form(p1, IndexDomain::Naturals, 0, 2).unwrap();
        assert!((v.value - PI * PI / 6.0).abs() < 1e-14);
        let p = ChessboardParams::new(0.5, Orientation::OneOnEvenSum).unwrap();
        let v = chessboard_noise_closed_form(p, IndexDomain::Integers, 4, 2).unwrap();
        assert!((v.value - 0.75 * PI * PI / 4.0).abs() < 1e-14 && (v.value - 1.850_55).abs() < 1e-5);
        assert_eq!(v.convention, ClosedFormConvention::LineQuarter);
        let p = ChessboardParams::new(0.5, Orientation::OneOnOddSum).unwrap();
        let v = chessboard_noise_closed_form(p, IndexDomain::Integers, 4, 2).unwrap();
        assert_eq!(v.convention, ClosedFormConvention::LineTwelfth);
        assert!(chessboard_noise_closed_form(p, IndexDomain::Naturals, 0, 2).is_err());
        for xi in [0.0, 0.4, 1.0] {
            let p = ChessboardParams::new(xi, Orientation::OneOnEvenSum).unwrap();
            for k in 0..20 {
                let a = chessboard_noise_closed_form(p, IndexDomain::Naturals, 2 * k, 2).unwrap().value;
                let b = chessboard_noise_closed_form(p, IndexDomain::Naturals, 2 * k + 1, 2).unwrap().value;
                let d = (2 * k + 1) as f64;
                assert!((a - b - xi * xi / (d * d)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn closed_form_matches_summation_naturals() {
        for xi in [0.0, 0.3, 1.0] {
            let p = ChessboardParams::new(xi, Orientation::OneOnEvenSum).unwrap();
            let a = chessboard(IndexDomain::Naturals, p).unwrap();
            for l in [1, 2, 4] {
                for n in [0, 1, 2, 7, 40] {
                    let s = noise_value(&a, &q(n, l, 1e-10)).unwrap();
                    let c = chessboard_noise_closed_form(p, IndexDomain::Naturals, n, l).unwrap().value;
                    assert!(s.lower - 1e-9 <= c && c <= s.upper + 1e-9, "xi {xi} l {l} n {n}: {c} vs {s:?}");
                }
            }
        }
    }

    #[test]
    fn constants_approach_limits_from_below() {
        use chessboard_constants::*;
        assert_eq!(alpha_partial(-1), 0.0);
        assert_eq!(alpha_partial(0), 1.0);
        assert_eq!(beta_partial(1), 0.25);
        let mut prev = (0.0, 0.0);
        for k in 1..200 {
            let cur = (alpha_partial(k), beta_partial(k));
            assert!(cur.0 > prev.0 && cur.0 < ALPHA_INF && cur.1 > prev.1 && cur.1 < BETA_INF);
            prev = cur;
        }
    }

    #[test]
    fn decay_law_naturals() {
        let one = constant_one(IndexDomain::Naturals);
        let s = noise_value(&one, &q(1000, 2, 1e-9)).unwrap();
        assert!((1000.0 * s.value - 1.0).abs() < 0.1);
    }

    #[test]
    fn parallel_matches_serial() {
        let a = chessboard(IndexDomain::Naturals, ChessboardParams::new(0.3, Orientation::OneOnEvenSum).unwrap())
            .unwrap();
        let w = IndexWindow::new(0, 40).unwrap();
        let par = noise_sequence(&a, 3, w, 1e-9).unwrap();
        let ser: Vec<NoiseValue> = w.indices().map(|n| noise_value(&a, &q(n, 3, 1e-9)).unwrap()).collect();
        assert_eq!(par, ser);
        assert!(par.windows(2).all(|p| p[0].value >= p[1].value));
    }

    #[test]
    fn noiseless_z_examples() {
        let r = IndexWindow::new(-50, 50).unwrap();
        let t = torus_from_phases(IndexDomain::Integers, PhaseSequence::seeded(3));
        assert!(is_noiseless_z(&t, 2, r, 1e-6).unwrap());
        assert!(is_noiseless_z(&constant_one(IndexDomain::Integers), 2, r, 1e-6).unwrap());
        for o in [Orientation::OneOnEvenSum, Orientation::OneOnOddSum] {
            let cb = chessboard(IndexDomain::Integers, ChessboardParams::new(0.9, o).unwrap()).unwrap();
            assert!(!is_noiseless_z(&cb, 2, r, 1e-6).unwrap());
        }
        assert!(is_noiseless_z(&constant_one(IndexDomain::Naturals), 2, r, 1e-6).is_err());
    }

    #[test]
    fn weights_have_unit_mass() {
        for (d, c) in [(IndexDomain::Integers, 3), (IndexDomain::Naturals, 0), (IndexDomain::Naturals, 9)] {
            let p = ProbabilityWeights::new(d, c).unwrap();
            let centre = if d == IndexDomain::Integers { 0.0 } else { 1.0 - THREE_OVER_PI2 * lattice_sum_exact(d, c) };
            assert_eq!(p.weight(c), centre);
            assert!(centre >= 0.0);
            let (lo, hi) = p.total_mass_bracket(10_000);
            assert!(lo <= 1.0 && 1.0 <= hi && hi - lo < 1e-3, "{d:?} {c}: [{lo}, {hi}]");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn brackets_nest_and_stay_nonnegative(
            xi in 0.0..=1.0f64,
            even in any::<bool>(),
            z in any::<bool>(),
            n in 0i64..200,
            l in 1u32..=4,
            generic in any::<bool>(),
        ) {
            let o = if even || !z { Orientation::OneOnEvenSum } else { Orientation::OneOnOddSum };
            let d = if z { IndexDomain::Integers } else { IndexDomain::Naturals };
            let mut a = chessboard(d, ChessboardParams::new(xi, o).unwrap()).unwrap();
            let tol = if generic { a = a.without_parity_modulus(); 1e-4 } else { 1e-8 };
            let coarse = noise_value(&a, &q(n, l, tol)).unwrap();
            let fine = noise_value(&a, &q(n, l, tol / 10.0)).unwrap();
            prop_assert!(coarse.lower <= coarse.value && coarse.value <= coarse.upper);
            prop_assert!(coarse.width() <= 2.0 * tol);
            prop_assert!(coarse.upper >= -1e-15);
            prop_assert!(fine.lower >= coarse.lower - 1e-14 && fine.upper <= coarse.upper + 1e-14);
        }

        #[test]
        fn modulus_monotone(xi in 0.0..=1.0f64, dxi in 0.0..=1.0f64, n in 0i64..100, l in 1u32..=4) {
            let xi2 = xi + (1.0 - xi) * dxi;
            let mk = |x| chessboard(IndexDomain::Naturals, ChessboardParams::new(x, Orientation::OneOnEvenSum).unwrap()).unwrap();
            let s1 = noise_value(&mk(xi), &q(n, l, 1e-9)).unwrap();
            let s2 = noise_value(&mk(xi2), &q(n, l, 1e-9)).unwrap();
            prop_assert!(s1.upper >= s2.lower);
        }

        #[test]
        fn torus_matches_constant_one(seed in any::<u64>(), n in 0i64..300, l in 1u32..=4, z in any::<bool>()) {
            let d = if z { IndexDomain::Integers } else { IndexDomain::Naturals };
            let t = torus_from_phases(d, PhaseSequence::seeded(seed));
            let a = noise_value(&t, &q(n, l, 1e-8)).unwrap();
            let b = noise_value(&constant_one(d), &q(n, l, 1e-8)).unwrap();
            prop_assert!(a.intersects(b.lower, b.upper));
        }

        #[test]
        fn phase_invariance(seed in any::<u64>(), xi in 0.0..=1.0f64, n in -50i64..50, l in 1u32..=4) {
            let t = torus_from_phases(IndexDomain::Integers, PhaseSequence::seeded(seed));
            let cb = chessboard(IndexDomain::Integers, ChessboardParams::new(xi, Orientation::OneOnOddSum).unwrap()).unwrap();
            let a = crate::matrices::schur_product(&t, &cb).unwrap();
            let qq = q(n, l, 1e-6);
            prop_assert_eq!(noise_value(&a, &qq).unwrap(), noise_value(&modulus(&a), &qq).unwrap());
        }
    }
}
