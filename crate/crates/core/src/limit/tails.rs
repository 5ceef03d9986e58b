//! Power-law tail exponents of count distributions.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::estimate::KDistribution;

/// Fit points need at least this many samples with `N ≥ k`, which keeps
/// the relative Poisson error of each point below 10%.
pub const MIN_EXCEEDANCES: u64 = 100;

/// Ratio of consecutive fit abscissae.
pub const GRID_RATIO: f64 = 1.2;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailFit {
    pub slope: f64,
    pub intercept: f64,
    pub k_min: u64,
    pub k_max: u64,
    pub points: usize,
}

/// `(k, #{N_j ≥ k})` for `k = 0 ..= max`.
pub fn survival(dist: &KDistribution, j: usize) -> Vec<(u64, u64)> {
    let marginal = dist.marginal(j);
    let Some((&max, _)) = marginal.iter().next_back() else { return Vec::new() };
    let mut out = Vec::with_capacity(max as usize + 1);
    let mut above = dist.total;
    let mut it = marginal.iter().peekable();
    for k in 0..=max {
        out.push((k, above));
        while let Some((&kk, &c)) = it.peek() {
            if kk == k {
                above -= c;
                it.next();
            } else {
                break;
            }
        }
    }
    out
}

/// `k_min · GRID_RATIO^i` rounded, deduplicated, up to `k_max`.
fn log_grid(k_min: u64, k_max: u64) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    let mut x = k_min.max(1) as f64;
    while x.round() as u64 <= k_max {
        out.insert(x.round() as u64);
        x *= GRID_RATIO;
    }
    out
}

/// Least-squares line through `(log k, log P(N₁ ≥ k))` for `k` on a
/// geometric grid from `k_min` up to `k_max`, the largest `k` with at least
/// [`MIN_EXCEEDANCES`] exceedances. The grid gives each octave of `k` the
/// same weight.
pub fn tail_fit(dist: &KDistribution, k_min: u64) -> Result<TailFit> {
    let total = dist.total as f64;
    let surv = survival(dist, 0);
    let k_max = surv.iter().filter(|&&(_, c)| c >= MIN_EXCEEDANCES).map(|&(k, _)| k).max().unwrap_or(0);
    let grid = log_grid(k_min, k_max);
    let pts: Vec<(f64, f64, u64)> = surv
        .into_iter()
        .filter(|&(k, c)| grid.contains(&k) && c >= MIN_EXCEEDANCES)
        .map(|(k, c)| ((k as f64).ln(), (c as f64 / total).ln(), k))
        .collect();
    if pts.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "tail fit from k = {k_min} has {} usable points (need 3)",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let slope = sxy / sxx;
    Ok(TailFit {
        slope,
        intercept: my - slope * mx,
        k_min: pts[0].2,
        k_max: pts[pts.len() - 1].2,
        points: pts.len(),
    })
}

/// Slope of [`tail_fit`].
pub fn tail_exponent(dist: &KDistribution, k_min: u64) -> Result<f64> {
    Ok(tail_fit(dist, k_min)?.slope)
}
