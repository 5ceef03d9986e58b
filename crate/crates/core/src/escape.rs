//! The cusp-excursion function
//! `F_{R,β}(τ; ξ) = Σ_{γ ∈ Γ_∞\Γ} Σ_m f(((ξγ⁻¹)₁ + m) v_γ^{1/2}) v_γ^β χ_R(v_γ)`
//! and its integrals along horocycles.

use num_complex::Complex64;
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::limit::GAUSSIAN_CUTOFF_RADIUS;
use crate::linalg::Mat2;
use crate::stats::{neumaier_sum, Interval};

/// Default number of midpoint nodes for horocycle integrals.
pub const DEFAULT_QUADRATURE: usize = 4096;

/// Exponent `β`, cusp height `R` and the Gaussian `f(x) = exp(−(x/w)²)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CuspSpec {
    pub beta: f64,
    #[serde(rename = "R")]
    pub r: f64,
    pub f_width: f64,
}

impl CuspSpec {
    pub fn new(beta: f64, r: f64, f_width: f64) -> Result<Self> {
        let s = CuspSpec { beta, r, f_width };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta >= 0.0) || !self.beta.is_finite() {
            return invalid(format!("β = {} must be a finite nonnegative number", self.beta));
        }
        if !(self.r >= 1.0) || !self.r.is_finite() {
            return invalid(format!("R = {} must be at least 1", self.r));
        }
        if !(self.f_width > 0.0) || !self.f_width.is_finite() {
            return invalid(format!("Gaussian width {} must be positive", self.f_width));
        }
        Ok(())
    }

    #[inline]
    pub fn f(&self, x: f64) -> f64 {
        let z = x / self.f_width;
        (-z * z).exp()
    }

    /// `Σ_m f((x + m) √v)` over the `m` where the Gaussian exceeds 10⁻¹⁶,
    /// in ascending `m`.
    pub fn shifted_sum(&self, x: f64, v: f64) -> f64 {
        let s = v.sqrt();
        let reach = GAUSSIAN_CUTOFF_RADIUS * self.f_width / s;
        let lo = (-x - reach).ceil() as i64;
        let hi = (-x + reach).floor() as i64;
        let mut acc = 0.0;
        for m in lo..=hi {
            acc += self.f((x + m as f64) * s);
        }
        acc
    }
}

/// Contribution of the coset with bottom row `(c, d)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CosetTerm {
    pub c: i64,
    pub d: i64,
    pub v_gamma: f64,
    pub value: f64,
}

/// `τ̃ = M·τ`, so that `M n(u) a(v) = n(ũ) a(ṽ) k(θ)`.
pub fn horocycle_point(tau: Complex64, m: &Mat2) -> Complex64 {
    let (u, v) = m.mobius(tau.re, tau.im);
    Complex64::new(u, v)
}

fn check_tau(tau: Complex64) -> Result<()> {
    if !(tau.im > 0.0) || !tau.re.is_finite() || !tau.im.is_finite() {
        return invalid(format!("τ = {tau} must lie in the upper half plane"));
    }
    Ok(())
}

fn term(c: i64, d: i64, tt: Complex64, xi: [f64; 2], spec: &CuspSpec) -> Option<CosetTerm> {
    let (cf, df) = (c as f64, d as f64);
    let re = cf * tt.re + df;
    let im = cf * tt.im;
    let v_gamma = tt.im / (re * re + im * im);
    if !(v_gamma >= spec.r) {
        return None;
    }
    let x = df * xi[0] - cf * xi[1];
    let value = spec.shifted_sum(x, v_gamma) * v_gamma.powf(spec.beta);
    Some(CosetTerm { c, d, v_gamma, value })
}

/// Largest `|c|` and `|d|` of a coset with `v_γ ≥ R` at the point `τ̃`.
pub fn ellipse_extent(tt: Complex64, spec: &CuspSpec) -> (i64, i64) {
    let c_max = 1.0 / (tt.im * spec.r).sqrt();
    let d_max = c_max * tt.re.abs() + (tt.im / spec.r).sqrt();
    (c_max.floor() as i64 + 1, d_max.ceil() as i64 + 1)
}

/// All cosets with `v_γ ≥ R`, sorted by `(c, d)`. `τ̃ = M·τ`; the shift is
/// unchanged.
pub fn coset_terms(tau: Complex64, xi: [f64; 2], m: &Mat2, spec: &CuspSpec) -> Result<Vec<CosetTerm>> {
    check_tau(tau)?;
    spec.validate()?;
    let tt = horocycle_point(tau, m);
    // |cτ̃ + d|² ≤ ṽ/R  ⇔  (cũ + d)² + c²ṽ² ≤ ṽ/R
    let bound = tt.im / spec.r;
    let c_max = (bound.sqrt() / tt.im).floor() as i64 + 1;
    let mut out = Vec::new();
    for c in -c_max..=c_max {
        let cf = c as f64;
        let rest = bound - cf * cf * tt.im * tt.im;
        if rest < 0.0 && c != 0 {
            continue;
        }
        let half = rest.max(0.0).sqrt();
        let lo = (-cf * tt.re - half).floor() as i64 - 1;
        let hi = (-cf * tt.re + half).ceil() as i64 + 1;
        for d in lo..=hi {
            if c.gcd(&d) != 1 {
                continue;
            }
            if let Some(t) = term(c, d, tt, xi, spec) {
                out.push(t);
            }
        }
    }
    Ok(out)
}

/// `F_{R,β}((1, ξ) M n(u) a(v))` with `τ = u + iv`.
pub fn f_r_beta(tau: Complex64, xi: [f64; 2], m: &Mat2, spec: &CuspSpec) -> Result<f64> {
    Ok(neumaier_sum(coset_terms(tau, xi, m, spec)?.iter().map(|t| t.value)))
}

/// The cosets `(c, d) = (±1, 0)` alone. At `M = 1` this is the term that
/// carries `v/|τ|²` and the argument `−ξ₂`.
pub fn f_r_beta_first_term(tau: Complex64, xi: [f64; 2], m: &Mat2, spec: &CuspSpec) -> Result<f64> {
    check_tau(tau)?;
    spec.validate()?;
    let tt = horocycle_point(tau, m);
    Ok([-1, 1].iter().filter_map(|&c| term(c, 0, tt, xi, spec)).map(|t| t.value).sum())
}

/// Same sum over every coprime `(c, d)` with `|c|, |d| ≤ bound`.
pub fn f_r_beta_box(tau: Complex64, xi: [f64; 2], m: &Mat2, spec: &CuspSpec, bound: i64) -> Result<f64> {
    check_tau(tau)?;
    spec.validate()?;
    let tt = horocycle_point(tau, m);
    let mut vals = Vec::new();
    for c in -bound..=bound {
        for d in -bound..=bound {
            if c.gcd(&d) == 1 {
                if let Some(t) = term(c, d, tt, xi, spec) {
                    vals.push(t.value);
                }
            }
        }
    }
    Ok(neumaier_sum(vals))
}

/// Smooth bump on `support`: `exp(1 − 1/(1 − t²))` with `t` the affine
/// coordinate mapping the support onto `(−1, 1)`.
pub fn bump(support: Interval, u: f64) -> f64 {
    let len = support.len();
    if len <= 0.0 {
        return 0.0;
    }
    let t = (2.0 * u - support.lo - support.hi) / len;
    if t.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - t * t)).exp()
    }
}

/// Which part of `F_{R,β}` to integrate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EscapeTerm {
    All,
    First,
}

/// Midpoint rule for `∫ F_{R,β}((1, ξ) M n(u) a(v)) w(u) du` over `support`.
#[allow(clippy::too_many_arguments)]
pub fn escape_integral_weighted(
    m: &Mat2,
    xi: [f64; 2],
    spec: &CuspSpec,
    v: f64,
    support: Interval,
    n_quad: usize,
    weight: impl Fn(f64) -> f64 + Sync,
    which: EscapeTerm,
) -> Result<f64> {
    spec.validate()?;
    if !(v > 0.0) {
        return invalid(format!("v = {v} must be positive"));
    }
    if n_quad == 0 {
        return invalid("quadrature needs at least one node");
    }
    let len = support.len();
    if len <= 0.0 {
        return Ok(0.0);
    }
    let h = len / n_quad as f64;
    let vals: Vec<f64> = (0..n_quad)
        .into_par_iter()
        .map(|i| {
            let u = support.lo + (i as f64 + 0.5) * h;
            let w = weight(u);
            if w == 0.0 {
                return Ok(0.0);
            }
            let tau = Complex64::new(u, v);
            let f = match which {
                EscapeTerm::All => f_r_beta(tau, xi, m, spec)?,
                EscapeTerm::First => f_r_beta_first_term(tau, xi, m, spec)?,
            };
            Ok(f * w * h)
        })
        .collect::<Result<_>>()?;
    Ok(neumaier_sum(vals))
}

/// `∫ F_{R,β}((1, ξ) M n(u) a(v)) h(u) du` with `h` the bump on `support`.
pub fn escape_integral(m: &Mat2, xi: [f64; 2], spec: &CuspSpec, v: f64, support: Interval, n_quad: usize) -> Result<f64> {
    escape_integral_weighted(m, xi, spec, v, support, n_quad, |u| bump(support, u), EscapeTerm::All)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::consts::cubic_shift;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn spec(beta: f64, r: f64) -> CuspSpec {
        CuspSpec::new(beta, r, 1.0).unwrap()
    }

    #[test]
    fn hand_enumerated_value() {
        // only (c, d) = (0, ±1) survive; each gives 4 Σ_m e^{−4(m+½)²}
        let v = f_r_beta(Complex64::new(0.0, 4.0), [0.5, 0.0], &Mat2::IDENTITY, &spec(1.0, 2.0)).unwrap();
        let series: f64 = (-20..20).map(|m: i32| (-4.0 * (m as f64 + 0.5).powi(2)).exp()).sum();
        assert!((v - 8.0 * series).abs() < 1e-12, "{v}");
        assert!((v - 16.0 * (-1f64).exp()).abs() < 3e-3);
        let box_sum = f_r_beta_box(Complex64::new(0.0, 4.0), [0.5, 0.0], &Mat2::IDENTITY, &spec(1.0, 2.0), 50).unwrap();
        assert!((v - box_sum).abs() < 1e-12);
    }

    #[test]
    fn empty_indicator() {
        let v = f_r_beta(Complex64::new(0.3, 0.5), [0.2, 0.7], &Mat2::IDENTITY, &spec(1.0, 3.0)).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn integer_shift_in_cusp_is_positive() {
        let v = 5.0;
        let x = f_r_beta(Complex64::new(0.1, v), [0.0, 0.0], &Mat2::IDENTITY, &spec(1.5, 2.0)).unwrap();
        assert!(x >= v.powf(1.5));
    }

    #[test]
    fn ellipse_matches_box_on_random_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..50 {
            let tau = Complex64::new(rng.random::<f64>() * 2.0 - 1.0, 10f64.powf(rng.random::<f64>() * 3.0 - 2.5));
            let m = Mat2::iwasawa(rng.random::<f64>() - 0.5, 0.5 + rng.random::<f64>(), rng.random::<f64>() * 6.2);
            let xi = [rng.random::<f64>() * 2.0, rng.random::<f64>() * 2.0];
            let s = spec(rng.random::<f64>() * 2.0, 1.0 + 4.0 * rng.random::<f64>());
            let tt = horocycle_point(tau, &m);
            let (ce, de) = ellipse_extent(tt, &s);
            let a = f_r_beta(tau, xi, &m, &s).unwrap();
            let b = f_r_beta_box(tau, xi, &m, &s, 2 * ce.max(de)).unwrap();
            assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()), "{a} vs {b}");
        }
    }

    #[test]
    fn left_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let gens = [[0i64, -1, 1, 0], [1, 1, 0, 1], [1, -1, 0, 1]];
        for _ in 0..20 {
            let mut g = [1i64, 0, 0, 1];
            for _ in 0..rng.random_range(1..6) {
                let h = gens[rng.random_range(0..3)];
                g = [g[0] * h[0] + g[1] * h[2], g[0] * h[1] + g[1] * h[3], g[2] * h[0] + g[3] * h[2], g[2] * h[1] + g[3] * h[3]];
            }
            let gm = Mat2::new(g[0] as f64, g[1] as f64, g[2] as f64, g[3] as f64);
            let shift = [rng.random_range(-3..4) as f64, rng.random_range(-3..4) as f64];
            let tau = Complex64::new(rng.random::<f64>() - 0.5, 0.05 + rng.random::<f64>());
            let xi = [rng.random::<f64>(), rng.random::<f64>()];
            let m = Mat2::iwasawa(0.2, 0.8, 1.1);
            let s = spec(1.2, 1.5);
            let base = f_r_beta(tau, xi, &m, &s).unwrap();
            let xi_new = gm.inverse_unimodular().apply([shift[0] + xi[0], shift[1] + xi[1]]);
            let moved = f_r_beta(tau, xi_new, &(gm * m), &s).unwrap();
            assert!((base - moved).abs() <= 1e-10 * (1.0 + base.abs()), "{base} vs {moved}");
        }
    }

    #[test]
    fn decreasing_in_cusp_height() {
        let s = |r| spec(0.9, r);
        let sup = Interval::new(-0.5, 0.5).unwrap();
        let vals: Vec<f64> = [2.0, 8.0, 32.0]
            .iter()
            .map(|&r| escape_integral(&Mat2::IDENTITY, cubic_shift(), &s(r), 1e-4, sup, 1024).unwrap())
            .collect();
        assert!(vals[0] >= vals[1] && vals[1] >= vals[2], "{vals:?}");
    }

    #[test]
    fn first_term_vanishes_as_v_shrinks() {
        let s = spec(0.9, 2.0);
        let sup = Interval::new(-0.5, 0.5).unwrap();
        let vals: Vec<f64> = [1e-2, 1e-3, 1e-4]
            .iter()
            .map(|&v| {
                escape_integral_weighted(&Mat2::IDENTITY, cubic_shift(), &s, v, sup, DEFAULT_QUADRATURE, |u| bump(sup, u), EscapeTerm::First)
                    .unwrap()
            })
            .collect();
        assert!(vals[0] > vals[1] && vals[1] > vals[2], "{vals:?}");
    }

    #[test]
    fn zero_weight_gives_zero() {
        let sup = Interval::new(-0.5, 0.5).unwrap();
        let z = escape_integral_weighted(&Mat2::IDENTITY, cubic_shift(), &spec(1.0, 2.0), 1e-3, sup, 256, |_| 0.0, EscapeTerm::All)
            .unwrap();
        assert_eq!(z, 0.0);
        assert_eq!(bump(Interval { lo: 0.0, hi: 0.0 }, 0.0), 0.0);
        assert!((bump(sup, 0.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(CuspSpec::new(1.0, 0.5, 1.0).is_err());
        assert!(CuspSpec::new(-1.0, 2.0, 1.0).is_err());
        assert!(f_r_beta(Complex64::new(0.0, -1.0), [0.0; 2], &Mat2::IDENTITY, &spec(1.0, 2.0)).is_err());
    }
}
