//! Monte Carlo checks of the Siegel mean-value formulas with Gaussian test
//! functions.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::points::AffineLattice;

use super::haar::haar_sample;
use super::{mean_se, par_samples, Estimate};

/// Radius beyond which `e^{−‖x‖²} < 10⁻¹⁶`.
pub const GAUSSIAN_CUTOFF_RADIUS: f64 = 6.069_708_517_540_586;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SiegelKind {
    /// `E Σ_{m≠0} F(mM) = ∫ F`, `F(x) = e^{−‖x‖²}`.
    Classic,
    /// `E Σ_{m₁≠m₂} F(y₁) F(y₂) = (∫ F)²` over an affine lattice.
    AffinePair,
}

impl SiegelKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "classic" => Ok(SiegelKind::Classic),
            "affine_pair" | "affine-pair" => Ok(SiegelKind::AffinePair),
            _ => invalid(format!("unknown Siegel check `{s}` (classic, affine_pair)")),
        }
    }

    pub fn exact(&self) -> f64 {
        match self {
            SiegelKind::Classic => PI,
            SiegelKind::AffinePair => PI * PI,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SiegelReport {
    pub estimate: f64,
    pub se: f64,
    pub exact: f64,
    pub n: u64,
    pub seed: u64,
}

impl SiegelReport {
    pub fn within(&self, k_se: f64) -> bool {
        (self.estimate - self.exact).abs() <= k_se * self.se
    }
}

/// Lattice sum `Σ_{m≠0} F(mM)` averaged over Haar-random `M`, for `F`
/// supported in the disc of the given radius.
pub fn siegel_estimate(f: impl Fn([f64; 2]) -> f64 + Sync, radius: f64, n: usize, seed: u64) -> Estimate {
    let xs = par_samples(n, seed, |rng| {
        let lat = AffineLattice::new([0.0; 2], haar_sample(rng).matrix());
        let mut s = 0.0;
        lat.for_each_in_disc(radius, |m, y| {
            if m != [0, 0] {
                s += f(y);
            }
        });
        s
    });
    mean_se(&xs)
}

fn affine_pair_sum<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let m = haar_sample(rng).matrix();
    let lat = AffineLattice::new([rng.random(), rng.random()], m);
    let (mut s1, mut s2) = (0.0, 0.0);
    lat.for_each_in_disc(GAUSSIAN_CUTOFF_RADIUS, |_, y| {
        let r2 = y[0] * y[0] + y[1] * y[1];
        s1 += (-r2).exp();
        s2 += (-2.0 * r2).exp();
    });
    // Σ_{m₁≠m₂} F(y₁)F(y₂) = (Σ F)² − Σ F²
    s1 * s1 - s2
}

/// Returns `(estimate, SE)` against the exact value (`π` or `π²`).
pub fn siegel_check(which: SiegelKind, n: usize, seed: u64) -> Result<SiegelReport> {
    if n == 0 {
        return invalid("sample count must be at least 1");
    }
    let e = match which {
        SiegelKind::Classic => siegel_estimate(
            |y| (-(y[0] * y[0] + y[1] * y[1])).exp(),
            GAUSSIAN_CUTOFF_RADIUS,
            n,
            seed,
        ),
        SiegelKind::AffinePair => mean_se(&par_samples(n, seed, affine_pair_sum)),
    };
    Ok(SiegelReport { estimate: e.estimate, se: e.se, exact: which.exact(), n: e.n, seed })
}
