//! Cone regions `𝔠_c(I)` and lattice-point counts inside them.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::linalg::Mat2;
use crate::points::{AffineLattice, Rect};
use crate::stats::Interval;

use super::haar::HomSample;

/// `{(x, y) : c < x < 1, (1 − c²) y ∈ 2x·[a, b)}`. The half-open side
/// matches the half-open counting windows.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeRegion {
    pub c: f64,
    pub interval: Interval,
}

impl ConeRegion {
    pub fn new(c: f64, interval: Interval) -> Result<Self> {
        if !(0.0..1.0).contains(&c) {
            return invalid(format!("cone parameter c = {c} must lie in [0, 1)"));
        }
        Ok(ConeRegion { c, interval })
    }

    #[inline]
    pub fn contains(&self, p: [f64; 2]) -> bool {
        let [x, y] = p;
        if !(x > self.c && x < 1.0) {
            return false;
        }
        let s = (1.0 - self.c * self.c) * y;
        s >= 2.0 * x * self.interval.lo && s < 2.0 * x * self.interval.hi
    }

    pub fn area(&self) -> f64 {
        self.interval.len()
    }

    /// Image of the region under right multiplication by `n(u)`.
    pub fn sheared(&self, u: f64) -> ConeRegion {
        ConeRegion { c: self.c, interval: self.interval.shifted(0.5 * (1.0 - self.c * self.c) * u) }
    }

    pub fn bounding_rect(&self) -> Rect {
        let k = 2.0 / (1.0 - self.c * self.c);
        let Interval { lo, hi } = self.interval;
        Rect {
            x: [self.c, 1.0],
            y: [k * lo.min(self.c * lo), k * hi.max(self.c * hi)],
        }
    }
}

fn union_rect(regions: &[ConeRegion]) -> Option<Rect> {
    let mut it = regions.iter().map(ConeRegion::bounding_rect);
    let first = it.next()?;
    Some(it.fold(first, |r, s| Rect {
        x: [r.x[0].min(s.x[0]), r.x[1].max(s.x[1])],
        y: [r.y[0].min(s.y[0]), r.y[1].max(s.y[1])],
    }))
}

/// Counts of `(Z² + ξ) M` in each region, written to `out`.
pub fn count_lattice_in_regions(xi: [f64; 2], m: &Mat2, regions: &[ConeRegion], out: &mut [u64]) {
    out.iter_mut().for_each(|k| *k = 0);
    let Some(rect) = union_rect(regions) else { return };
    AffineLattice::new(xi, *m).for_each_in_box(&rect, |_, y| {
        for (k, r) in out.iter_mut().zip(regions) {
            if r.contains(y) {
                *k += 1;
            }
        }
    });
}

/// Counts of the affine lattice of `s` in each region. With a coset the
/// lattice is `(Z² + ξ) γ n(u)a(v)k(φ)`, otherwise `(Z² + ξ) n(u)a(v)k(φ)`.
pub fn count_in_region(s: &HomSample, regions: &[ConeRegion]) -> Vec<u64> {
    let mut out = vec![0; regions.len()];
    count_lattice_in_regions(s.xi, &s.matrix(), regions, &mut out);
    out
}
