//! Monte Carlo estimates of the limiting count law
//! `E_{c,ξ}(k, I) = P(#(affine lattice ∩ 𝔠_c(I_j)) = k_j for all j)`.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::linalg::IMat2;
use crate::stats::IntervalBox;

use super::cosets::coset_reps;
use super::haar::{haar_sample, HomSample};
use super::region::{count_lattice_in_regions, ConeRegion};
use super::{mean_se, median_of_means, par_samples, Estimate};

/// Blocks used by the median-of-means estimator.
pub const MOM_BLOCKS: usize = 32;

/// Arithmetic class of the shift, which selects the limiting measure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum XiClass {
    /// `ξ ∈ Z²`: lattices, Haar on `Γ\G`.
    Integer,
    /// `ξ = p/q`: Haar on `Γ_q\G`, realized as a uniform coset times `Γ\G`.
    Rational { p: [i64; 2], q: i64 },
    /// Generic `ξ`: Haar on `Γ'\G'`, with the shift uniform on the torus.
    Irrational,
}

impl XiClass {
    /// `integer`, `irrational`, or `p1,p2/q`.
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "integer" => Ok(XiClass::Integer),
            "irrational" => Ok(XiClass::Irrational),
            t => {
                let Some((ps, q)) = t.split_once('/') else {
                    return invalid(format!("xi class `{s}`: expected integer, irrational or p1,p2/q"));
                };
                let q: i64 = q.trim().parse().map_err(|_| crate::Error::InvalidInput(format!("bad denominator in `{s}`")))?;
                let p: Vec<i64> = ps
                    .split(',')
                    .map(|x| x.trim().parse::<i64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| crate::Error::InvalidInput(format!("bad numerators in `{s}`")))?;
                if p.len() != 2 {
                    return invalid(format!("`{s}` needs two numerators"));
                }
                let c = XiClass::Rational { p: [p[0], p[1]], q };
                c.validate()?;
                Ok(c)
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let XiClass::Rational { p, q } = *self {
            if q < 1 || p.iter().any(|&x| !(0..q).contains(&x)) {
                return invalid(format!("rational shift needs 0 ≤ p_i < q, got {p:?}/{q}"));
            }
        }
        Ok(())
    }
}

impl fmt::Display for XiClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XiClass::Integer => write!(f, "integer"),
            XiClass::Irrational => write!(f, "irrational"),
            XiClass::Rational { p, q } => write!(f, "{},{}/{}", p[0], p[1], q),
        }
    }
}

/// Per-sample count vectors, stored flat in sample order.
#[derive(Clone, Debug, PartialEq)]
pub struct KSamples {
    pub dim: usize,
    pub data: Vec<u32>,
}

impl KSamples {
    pub fn len(&self) -> usize {
        self.data.len().checked_div(self.dim).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, i: usize) -> &[u32] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> {
        self.data.chunks_exact(self.dim.max(1))
    }

    pub fn values(&self, f: impl Fn(&[u32]) -> f64) -> Vec<f64> {
        self.iter().map(f).collect()
    }

    pub fn mean(&self, f: impl Fn(&[u32]) -> f64) -> Estimate {
        mean_se(&self.values(f))
    }

    pub fn median_of_means(&self, f: impl Fn(&[u32]) -> f64) -> Estimate {
        median_of_means(&self.values(f), MOM_BLOCKS)
    }

    pub fn distribution(&self) -> KDistribution {
        let mut counts = BTreeMap::new();
        for k in self.iter() {
            *counts.entry(k.iter().map(|&x| x as u64).collect()).or_insert(0u64) += 1;
        }
        KDistribution { counts, total: self.len() as u64 }
    }
}

/// Empirical law of the count vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KDistribution {
    pub counts: BTreeMap<Vec<u64>, u64>,
    pub total: u64,
}

impl KDistribution {
    pub fn from_counts(counts: BTreeMap<Vec<u64>, u64>) -> Self {
        let total = counts.values().sum();
        KDistribution { counts, total }
    }

    pub fn dim(&self) -> usize {
        self.counts.keys().next().map_or(0, Vec::len)
    }

    pub fn prob(&self, k: &[u64]) -> f64 {
        self.counts.get(k).copied().unwrap_or(0) as f64 / self.total as f64
    }

    pub fn expectation(&self, f: impl Fn(&[u64]) -> f64) -> f64 {
        crate::stats::neumaier_sum(self.counts.iter().map(|(k, &c)| f(k) * c as f64)) / self.total as f64
    }

    /// Sample counts of coordinate `j`.
    pub fn marginal(&self, j: usize) -> BTreeMap<u64, u64> {
        let mut out = BTreeMap::new();
        for (k, &c) in &self.counts {
            *out.entry(k[j]).or_insert(0) += c;
        }
        out
    }

    /// `k1,…,km,count` rows.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let m = self.dim();
        let header: Vec<String> = (1..=m).map(|j| format!("k{j}")).collect();
        writeln!(w, "{},count", header.join(","))?;
        for (k, c) in &self.counts {
            let ks: Vec<String> = k.iter().map(u64::to_string).collect();
            writeln!(w, "{},{}", ks.join(","), c)?;
        }
        Ok(())
    }
}

fn draw_sample<R: Rng + ?Sized>(rng: &mut R, class: XiClass, reps: &[IMat2]) -> HomSample {
    let point = haar_sample(rng);
    match class {
        XiClass::Integer => HomSample::new(point, [0.0; 2]),
        XiClass::Irrational => HomSample::new(point, [rng.random(), rng.random()]),
        XiClass::Rational { p, q } => {
            let g = reps[rng.random_range(0..reps.len())];
            HomSample::new(point, [p[0] as f64 / q as f64, p[1] as f64 / q as f64]).with_coset(g)
        }
    }
}

/// `n` samples of the cone counts `(#𝔠_c(I₁), …, #𝔠_c(I_m))`, seeded and
/// reproducible independently of the thread count.
pub fn sample_counts(c: f64, class: XiClass, bx: &IntervalBox, n: usize, seed: u64) -> Result<KSamples> {
    if n == 0 {
        return invalid("sample count must be at least 1");
    }
    class.validate()?;
    let regions: Vec<ConeRegion> =
        bx.intervals.iter().map(|&i| ConeRegion::new(c, i)).collect::<Result<_>>()?;
    let reps = match class {
        XiClass::Rational { q, .. } if q >= 2 => coset_reps(q)?,
        _ => vec![IMat2::IDENTITY],
    };
    let m = regions.len();
    let rows = par_samples(n, seed, |rng| {
        let s = draw_sample(rng, class, &reps);
        let mut out = vec![0u64; m];
        count_lattice_in_regions(s.xi, &s.matrix(), &regions, &mut out);
        out.into_iter().map(|x| x.min(u32::MAX as u64) as u32).collect::<Vec<u32>>()
    });
    Ok(KSamples { dim: m, data: rows.into_iter().flatten().collect() })
}

/// Monte Carlo estimate of `E_{c,ξ}(·, I)`.
pub fn estimate_e(c: f64, class: XiClass, bx: &IntervalBox, n: usize, seed: u64) -> Result<KDistribution> {
    Ok(sample_counts(c, class, bx, n, seed)?.distribution())
}

/// Closed-form limit moments `E Π f(k_j)^{s_j}` for the cases that follow
/// from the first two correlation functions: `f(k) = k` or `k + 1`, total
/// exponent at most 2, integer exponents.
pub fn known_moment(intervals: &[crate::stats::Interval], exponents: &[f64], shifted: bool) -> Option<f64> {
    if intervals.len() != exponents.len() {
        return None;
    }
    let active: Vec<(crate::stats::Interval, f64)> =
        intervals.iter().copied().zip(exponents.iter().copied()).filter(|&(_, s)| s != 0.0).collect();
    let first = |i: &crate::stats::Interval| i.len();
    let second = |i: &crate::stats::Interval, j: &crate::stats::Interval| i.overlap(j) + i.len() * j.len();
    match active.as_slice() {
        [] => Some(1.0),
        [(i, s)] if *s == 1.0 => Some(first(i) + if shifted { 1.0 } else { 0.0 }),
        [(i, s)] if *s == 2.0 => Some(second(i, i) + if shifted { 2.0 * first(i) + 1.0 } else { 0.0 }),
        [(i, s), (j, t)] if *s == 1.0 && *t == 1.0 => {
            Some(second(i, j) + if shifted { first(i) + first(j) + 1.0 } else { 0.0 })
        }
        _ => None,
    }
}
