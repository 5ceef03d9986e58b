//! Diophantine type of shift vectors, special singular shifts, and the
//! divergence of counts along rational lines.

use num_integer::Integer;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::lattice::{enumerate_directions, turn, AffineLatticeSpec, DomainShape};
use crate::linalg::Mat2;
use crate::stats::{counting_stat, Interval};

pub type Rational = Ratio<i64>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiophReport {
    pub kappa: f64,
    #[serde(rename = "radius")]
    pub search_radius: u32,
    pub min_value: f64,
    /// `(r₁, r₂, m)` attaining the minimum.
    pub argmin: (i64, i64, i64),
    /// Bound on the floating-point error of `|r·ξ + m|` over the scan.
    pub rounding_bound: f64,
}

// (scaled value, order key, (r1, r2, m))
type Candidate = (f64, (bool, i64, i64), (i64, i64, i64));

/// Scan order inside one height: `r₁ > 0` before `r₁ = 0`, then `r₁`
/// ascending, then `r₂` descending.
fn order_key(r1: i64, r2: i64) -> (bool, i64, i64) {
    (r1 == 0, r1, -r2)
}

/// `min |r·ξ + m| (|r₁|+|r₂|)^κ` over `0 < |r₁|+|r₂| ≤ radius`, with `m`
/// the integer nearest to `−r·ξ`. Only one of `±r` is visited. Ties go to the
/// smaller height, then to the first pair in [`order_key`] order.
pub fn dioph_scan(xi: [f64; 2], kappa: f64, radius: u32) -> Result<DiophReport> {
    if radius < 1 {
        return invalid("scan radius must be at least 1");
    }
    if !xi.iter().all(|x| x.is_finite()) || !kappa.is_finite() {
        return invalid("shift and exponent must be finite");
    }
    let per_height: Vec<Candidate> = (1..=radius as i64)
        .into_par_iter()
        .map(|h| {
            let scale = (h as f64).powf(kappa);
            let mut best: Option<Candidate> = None;
            let mut visit = |r1: i64, r2: i64| {
                let dot = r1 as f64 * xi[0] + r2 as f64 * xi[1];
                let m = (-dot).round();
                let val = (dot + m).abs() * scale;
                let key = order_key(r1, r2);
                let better = match best {
                    None => true,
                    Some((bv, bk, _)) => val < bv || (val == bv && key < bk),
                };
                if better {
                    best = Some((val, key, (r1, r2, m as i64)));
                }
            };
            for r1 in 0..=h {
                let r2 = h - r1;
                if r1 == 0 {
                    visit(0, h);
                } else {
                    visit(r1, r2);
                    if r2 != 0 {
                        visit(r1, -r2);
                    }
                }
            }
            best.expect("every height has candidates")
        })
        .collect();
    let mut best = per_height[0];
    for cand in &per_height[1..] {
        if cand.0 < best.0 {
            best = *cand;
        }
    }
    let xmax = xi[0].abs().max(xi[1].abs()) + 1.0;
    Ok(DiophReport {
        kappa,
        search_radius: radius,
        min_value: best.0,
        argmin: best.2,
        rounding_bound: 2.0 * radius as f64 * xmax * f64::EPSILON,
    })
}

/// `det(n, l) = n₁l₂ − n₂l₁`, exactly.
pub fn det_exact(n: [i64; 2], l: [Rational; 2]) -> Rational {
    l[1] * n[0] - l[0] * n[1]
}

/// `ξ = nω + l`, required to satisfy `det(n, l) ∉ Z`.
pub fn singular_vector(n: [i64; 2], omega: f64, l: [Rational; 2]) -> Result<[f64; 2]> {
    if n == [0, 0] {
        return invalid("n must be nonzero");
    }
    let det = det_exact(n, l);
    if det.is_integer() {
        return invalid(format!("invalid construction: det(n, l) = {det} is an integer"));
    }
    let to_f = |q: Rational| *q.numer() as f64 / *q.denom() as f64;
    Ok([n[0] as f64 * omega + to_f(l[0]), n[1] as f64 * omega + to_f(l[1])])
}

/// Parses `p/q`, an integer, or a terminating decimal as an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::InvalidInput(format!("`{s}` is not a rational number"));
    if let Some((p, q)) = t.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    if let Ok(p) = t.parse::<i64>() {
        return Ok(Rational::from_integer(p));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    let (ip, fp) = body.split_once('.').ok_or_else(bad)?;
    if fp.len() > 15 || !fp.chars().all(|c| c.is_ascii_digit()) || !ip.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let den = 10i64.pow(fp.len() as u32);
    let ipv: i64 = if ip.is_empty() { 0 } else { ip.parse().map_err(|_| bad())? };
    let fpv: i64 = if fp.is_empty() { 0 } else { fp.parse().map_err(|_| bad())? };
    let q = Rational::new(ipv.checked_mul(den).and_then(|x| x.checked_add(fpv)).ok_or_else(bad)?, den);
    Ok(if neg { -q } else { q })
}

/// Direction (in turns) of the rational line `{y : r·(y M₀⁻¹) = 0}`, taken
/// along `(r₂, −r₁) M₀`.
pub fn rational_direction(r: [i64; 2], basis: &Mat2) -> f64 {
    turn(basis.apply([r[1] as f64, -(r[0] as f64)]))
}

/// `𝒩_{c,T}((−ε, ε), α_r)` for each `T`, where the affine lattice
/// `(Z² + ξ) M₀` has points on the line `r·(m + ξ) = 0` through the origin.
pub fn rational_divergence_probe(
    xi: [Rational; 2],
    r: [i64; 2],
    basis: &Mat2,
    eps: f64,
    c: f64,
    t_list: &[f64],
) -> Result<Vec<u64>> {
    if r == [0, 0] {
        return invalid("direction r must be nonzero");
    }
    let dot = xi[0] * r[0] + xi[1] * r[1];
    if !dot.is_integer() {
        return invalid(format!("r·ξ = {dot} is not an integer: no lattice points on the line"));
    }
    if !(eps > 0.0) {
        return invalid("ε must be positive");
    }
    let to_f = |q: Rational| *q.numer() as f64 / *q.denom() as f64;
    let lat = AffineLatticeSpec::new(*basis, [to_f(xi[0]), to_f(xi[1])])?;
    let alpha = rational_direction(r, basis);
    let window = Interval::new(-eps, eps)?;
    t_list
        .iter()
        .map(|&t| {
            let dirs = enumerate_directions(&lat, DomainShape::Annulus(c), t)?;
            Ok(counting_stat(&dirs, window, alpha) as u64)
        })
        .collect()
}

/// `gcd(r₁, r₂)`, used to report primitive directions.
pub fn content(r: [i64; 2]) -> i64 {
    r[0].gcd(&r[1])
}
