//! Finite-`T` observables of a [`DirectionSet`](crate::lattice::DirectionSet):
//! window counts, neighbour spacings, two-point correlations and mixed moments.

mod counting;
mod histogram;
mod moments;
mod paircorr;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub use counting::counting_stat;
pub use histogram::{spacing_histogram, Histogram, Normalization};
pub use moments::{
    count_law, mixed_moment, mixed_moment_exact, pair_correlation_via_moment, CountLaw,
};
pub use paircorr::{for_each_pair_within, pair_correlation, pair_overlap_sum};

/// A bounded half-open interval `[lo, hi)` of the real line.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return invalid(format!("interval [{lo}, {hi}) must be bounded with lo < hi"));
        }
        Ok(Interval { lo, hi })
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi <= self.lo
    }

    /// Length of the intersection with `other`.
    pub fn overlap(&self, other: &Interval) -> f64 {
        (self.hi.min(other.hi) - self.lo.max(other.lo)).max(0.0)
    }

    pub fn shifted(&self, r: f64) -> Interval {
        Interval { lo: self.lo + r, hi: self.hi + r }
    }

    /// Parses `a:b`; the endpoints accept the symbolic reals of
    /// [`parse_real`](crate::consts::parse_real).
    pub fn parse(s: &str) -> Result<Self> {
        let Some((a, b)) = s.split_once(':') else {
            return invalid(format!("interval {s:?} must look like a:b"));
        };
        Interval::new(crate::consts::parse_real(a)?, crate::consts::parse_real(b)?)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.lo, self.hi)
    }
}

/// Product of `m ≥ 1` test intervals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalBox {
    pub intervals: Vec<Interval>,
}

impl IntervalBox {
    pub fn new(intervals: Vec<Interval>) -> Result<Self> {
        if intervals.is_empty() {
            return invalid("an interval box needs at least one interval");
        }
        for i in &intervals {
            Interval::new(i.lo, i.hi)?;
        }
        Ok(IntervalBox { intervals })
    }

    pub fn single(i: Interval) -> Self {
        IntervalBox { intervals: vec![i] }
    }

    pub fn dim(&self) -> usize {
        self.intervals.len()
    }
}

/// Default number of grid points for λ-integration.
pub const DEFAULT_QUADRATURE_POINTS: usize = 20_001;

/// A probability measure on the circle with continuous density, together with
/// the midpoint grid used to integrate against it.
#[derive(Clone)]
pub struct MeasureSpec {
    density: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub quadrature_points: usize,
    uniform: bool,
}

impl fmt::Debug for MeasureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MeasureSpec")
            .field("quadrature_points", &self.quadrature_points)
            .field("uniform", &self.uniform)
            .finish()
    }
}

impl MeasureSpec {
    pub fn uniform() -> Self {
        MeasureSpec { density: Arc::new(|_| 1.0), quadrature_points: DEFAULT_QUADRATURE_POINTS, uniform: true }
    }

    /// Wraps a density; fails unless its grid integral is 1 within 1e-6.
    pub fn with_density(density: impl Fn(f64) -> f64 + Send + Sync + 'static, quadrature_points: usize) -> Result<Self> {
        let spec = MeasureSpec { density: Arc::new(density), quadrature_points, uniform: false };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_points(mut self, quadrature_points: usize) -> Result<Self> {
        self.quadrature_points = quadrature_points;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.quadrature_points == 0 {
            return invalid("quadrature_points must be positive");
        }
        let total: f64 = self.grid().map(|(_, w)| w).sum();
        if (total - 1.0).abs() > 1e-6 {
            return invalid(format!("density integrates to {total} on the grid, expected 1"));
        }
        if self.grid().any(|(_, w)| !(w >= 0.0)) {
            return invalid("density must be nonnegative");
        }
        Ok(())
    }

    pub fn is_uniform(&self) -> bool {
        self.uniform
    }

    pub fn density(&self, alpha: f64) -> f64 {
        (self.density)(alpha)
    }

    /// Midpoint grid `(αᵢ, wᵢ)` with `wᵢ = ρ(αᵢ)/n`.
    pub fn grid(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let n = self.quadrature_points;
        (0..n).map(move |i| {
            let a = (i as f64 + 0.5) / n as f64;
            (a, self.density(a) / n as f64)
        })
    }
}

/// Exponents `s ∈ Cᵐ` and an optional cap `K` for restricted moments.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentSpec {
    pub exponents: Vec<Complex64>,
    pub cap: Option<u64>,
    /// `true` integrates `Π (𝒩ⱼ+1)^{sⱼ}`, `false` the raw `Π 𝒩ⱼ^{sⱼ}`.
    pub shifted: bool,
}

impl MomentSpec {
    pub fn raw(exponents: Vec<Complex64>) -> Self {
        MomentSpec { exponents, cap: None, shifted: false }
    }

    pub fn shifted(exponents: Vec<Complex64>) -> Self {
        MomentSpec { exponents, cap: None, shifted: true }
    }

    pub fn real_raw(exponents: &[f64]) -> Self {
        MomentSpec::raw(exponents.iter().map(|&s| Complex64::new(s, 0.0)).collect())
    }

    pub fn with_cap(mut self, k: u64) -> Self {
        self.cap = Some(k);
        self
    }

    /// `Σ max(Re sⱼ, 0)`.
    pub fn positive_real_mass(&self) -> f64 {
        self.exponents.iter().map(|s| s.re.max(0.0)).sum()
    }

    /// The unconditional convergence condition `Σ Re₊ sⱼ < 2`.
    pub fn satisfies_a1(&self) -> bool {
        self.positive_real_mass() < 2.0
    }

    /// The condition for a shift of Diophantine type `kappa`: `Σ Re₊ sⱼ < 2 + 2/κ`.
    pub fn satisfies_a2(&self, kappa: f64) -> bool {
        self.positive_real_mass() < 2.0 + 2.0 / kappa
    }

    /// Parses a complex number written `re`, `re+imi`, `re-imi` or `imi`.
    pub fn parse_exponent(s: &str) -> Result<Complex64> {
        let t = s.trim();
        if let Some(body) = t.strip_suffix('i') {
            // split at the last sign that is not a leading sign or an exponent sign
            let bytes = body.as_bytes();
            let mut split = None;
            for k in (1..bytes.len()).rev() {
                if (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
                    split = Some(k);
                    break;
                }
            }
            let parse = |x: &str| -> Result<f64> {
                match x {
                    "" | "+" => Ok(1.0),
                    "-" => Ok(-1.0),
                    _ => x.parse().map_err(|_| crate::Error::InvalidInput(format!("bad complex {s:?}"))),
                }
            };
            return match split {
                Some(k) => Ok(Complex64::new(parse(&body[..k])?, parse(&body[k..])?)),
                None => Ok(Complex64::new(0.0, parse(body)?)),
            };
        }
        t.parse::<f64>()
            .map(|re| Complex64::new(re, 0.0))
            .map_err(|_| crate::Error::InvalidInput(format!("bad complex {s:?}")))
    }

    pub(crate) fn check_dim(&self, m: usize) -> Result<()> {
        if self.exponents.len() != m {
            return invalid(format!("{} exponents for {} intervals", self.exponents.len(), m));
        }
        if !self.shifted && self.exponents.iter().any(|s| s.re <= 0.0 && *s != Complex64::new(0.0, 0.0)) {
            return invalid("raw moments need Re s > 0 or s = 0 (0^s is undefined otherwise)");
        }
        Ok(())
    }

    /// `Π f(kⱼ)^{sⱼ}` with `f(k) = k+1` (shifted) or `k` (raw), honouring the cap.
    pub fn integrand(&self, ks: &[u64]) -> Complex64 {
        if let Some(cap) = self.cap {
            if ks.iter().any(|&k| k > cap) {
                return Complex64::new(0.0, 0.0);
            }
        }
        let mut acc = Complex64::new(1.0, 0.0);
        for (&k, s) in ks.iter().zip(&self.exponents) {
            if s.re == 0.0 && s.im == 0.0 {
                continue;
            }
            let base = if self.shifted { k as f64 + 1.0 } else { k as f64 };
            if base == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            acc *= (s * base.ln()).exp();
        }
        acc
    }
}

/// Compensated (Neumaier) summation.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    pub fn merge(&mut self, other: &CompensatedSum) {
        self.add(other.sum);
        self.add(other.comp);
    }
}

/// Compensated sum of an iterator.
pub fn neumaier_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut s = CompensatedSum::default();
    for x in xs {
        s.add(x);
    }
    s.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_parsing_and_overlap() {
        let i = Interval::parse("-1:3").unwrap();
        assert_eq!(i.len(), 4.0);
        assert!(Interval::parse("2:1").is_err());
        assert!(Interval::parse("2").is_err());
        let j = Interval::new(0.5, 2.0).unwrap();
        assert_eq!(Interval::new(0.0, 1.0).unwrap().overlap(&j), 0.5);
        assert_eq!(Interval::new(0.0, 0.5).unwrap().overlap(&j), 0.0);
    }

    #[test]
    fn measure_invariant() {
        assert!(MeasureSpec::uniform().validate().is_ok());
        let tilted = MeasureSpec::with_density(|a| 1.0 + 0.5 * (std::f64::consts::TAU * a).cos(), 2001);
        assert!(tilted.is_ok());
        assert!(MeasureSpec::with_density(|_| 2.0, 100).is_err());
    }

    #[test]
    fn complex_parsing() {
        assert_eq!(MomentSpec::parse_exponent("1.5").unwrap(), Complex64::new(1.5, 0.0));
        assert_eq!(MomentSpec::parse_exponent("1+2i").unwrap(), Complex64::new(1.0, 2.0));
        assert_eq!(MomentSpec::parse_exponent("0.5-0.25i").unwrap(), Complex64::new(0.5, -0.25));
        assert_eq!(MomentSpec::parse_exponent("-2i").unwrap(), Complex64::new(0.0, -2.0));
        assert_eq!(MomentSpec::parse_exponent("1e-1+1e-2i").unwrap(), Complex64::new(0.1, 0.01));
        assert!(MomentSpec::parse_exponent("x").is_err());
    }

    #[test]
    fn convergence_conditions() {
        let s = MomentSpec::real_raw(&[1.0, 0.9]);
        assert!(s.satisfies_a1());
        let s = MomentSpec::real_raw(&[1.5, 1.0]);
        assert!(!s.satisfies_a1());
        assert!(s.satisfies_a2(2.0));
        assert!(!MomentSpec::real_raw(&[3.5]).satisfies_a2(2.0));
    }

    #[test]
    fn integrand_conventions() {
        let s = MomentSpec::shifted(vec![Complex64::new(2.0, 0.0)]);
        assert!((s.integrand(&[2]).re - 9.0).abs() < 1e-12);
        let raw = MomentSpec::real_raw(&[2.0]);
        assert_eq!(raw.integrand(&[0]).re, 0.0);
        assert!((raw.integrand(&[3]).re - 9.0).abs() < 1e-12);
        let capped = MomentSpec::real_raw(&[1.0]).with_cap(2);
        assert_eq!(capped.integrand(&[3]).re, 0.0);
        let zero = MomentSpec::real_raw(&[0.0]);
        assert_eq!(zero.integrand(&[0]).re, 1.0);
    }
}
