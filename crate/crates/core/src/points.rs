//! Strip enumeration of affine lattice points `(Z² + ξ) M` inside discs and
//! axis-parallel boxes.
//!
//! The outer loop runs over `m₁`; for each strip the admissible `m₂` form an
//! interval obtained by solving the (quadratic or linear) boundary equations,
//! padded by one on each side. Callers apply the exact membership test, so the
//! cost is proportional to the area plus the number of strips.

use std::ops::RangeInclusive;

use crate::linalg::Mat2;

/// An affine lattice `(Z² + ξ) M` with `M` arbitrary (not necessarily det 1).
#[derive(Clone, Copy, Debug)]
pub struct AffineLattice {
    pub xi: [f64; 2],
    pub m: Mat2,
}

/// Closed axis-parallel box `[x0, x1] × [y0, y1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub x: [f64; 2],
    pub y: [f64; 2],
}

fn int_range(lo: f64, hi: f64, shift: f64) -> Option<RangeInclusive<i64>> {
    if !(lo <= hi) {
        return None;
    }
    let a = (lo - shift).floor() - 1.0;
    let b = (hi - shift).ceil() + 1.0;
    if !a.is_finite() || !b.is_finite() {
        return None;
    }
    Some(a as i64..=b as i64)
}

impl AffineLattice {
    pub fn new(xi: [f64; 2], m: Mat2) -> Self {
        AffineLattice { xi, m }
    }

    #[inline]
    pub fn point(&self, m1: i64, m2: i64) -> [f64; 2] {
        self.m.apply([m1 as f64 + self.xi[0], m2 as f64 + self.xi[1]])
    }

    /// Candidate `m₁` for points of norm ≤ `radius`.
    pub fn disc_strips(&self, radius: f64) -> Option<RangeInclusive<i64>> {
        // w = y M⁻¹, so |w₁| ≤ radius · ‖first column of M⁻¹‖ = radius · ‖row₂‖ / |det|
        let det = self.m.det().abs();
        let col = (self.m.c * self.m.c + self.m.d * self.m.d).sqrt() / det;
        int_range(-radius * col, radius * col, self.xi[0])
    }

    /// Candidate `m₂` on strip `m₁` for points of norm ≤ `radius`.
    pub fn disc_strip(&self, m1: i64, radius: f64) -> Option<RangeInclusive<i64>> {
        let w1 = m1 as f64 + self.xi[0];
        let r1 = [self.m.a, self.m.b];
        let r2 = [self.m.c, self.m.d];
        let qa = r2[0] * r2[0] + r2[1] * r2[1];
        let qb = w1 * (r1[0] * r2[0] + r1[1] * r2[1]);
        let qc = w1 * w1 * (r1[0] * r1[0] + r1[1] * r1[1]) - radius * radius;
        let disc = qb * qb - qa * qc;
        if disc < 0.0 {
            // tangency can be lost to rounding; allow a relative slack
            if disc < -1e-9 * (qb * qb + (qa * qc).abs()) {
                return None;
            }
        }
        let s = disc.max(0.0).sqrt();
        int_range((-qb - s) / qa, (-qb + s) / qa, self.xi[1])
    }

    /// Visits every `(m, y)` with `‖y‖ ≤ radius` (superset filtering is
    /// done here with a closed test; callers may refine).
    pub fn for_each_in_disc(&self, radius: f64, mut f: impl FnMut([i64; 2], [f64; 2])) {
        let r2 = radius * radius;
        let Some(strips) = self.disc_strips(radius) else { return };
        for m1 in strips {
            let Some(cands) = self.disc_strip(m1, radius) else { continue };
            for m2 in cands {
                let y = self.point(m1, m2);
                if y[0] * y[0] + y[1] * y[1] <= r2 {
                    f([m1, m2], y);
                }
            }
        }
    }

    pub fn box_strips(&self, rect: &Rect) -> Option<RangeInclusive<i64>> {
        // w₁ = y·(first column of M⁻¹)
        let inv = self.m.inverse();
        let (p, q) = (inv.a, inv.c);
        let lo = (p * rect.x[0]).min(p * rect.x[1]) + (q * rect.y[0]).min(q * rect.y[1]);
        let hi = (p * rect.x[0]).max(p * rect.x[1]) + (q * rect.y[0]).max(q * rect.y[1]);
        int_range(lo, hi, self.xi[0])
    }

    pub fn box_strip(&self, m1: i64, rect: &Rect) -> Option<RangeInclusive<i64>> {
        let w1 = m1 as f64 + self.xi[0];
        let base = [w1 * self.m.a, w1 * self.m.b];
        let dir = [self.m.c, self.m.d];
        let bounds = [rect.x, rect.y];
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for k in 0..2 {
            if dir[k] == 0.0 {
                if base[k] < bounds[k][0] || base[k] > bounds[k][1] {
                    return None;
                }
                continue;
            }
            let t0 = (bounds[k][0] - base[k]) / dir[k];
            let t1 = (bounds[k][1] - base[k]) / dir[k];
            lo = lo.max(t0.min(t1));
            hi = hi.min(t0.max(t1));
        }
        int_range(lo, hi, self.xi[1])
    }

    /// Visits every `(m, y)` with `y` in the closed rectangle.
    pub fn for_each_in_box(&self, rect: &Rect, mut f: impl FnMut([i64; 2], [f64; 2])) {
        let Some(strips) = self.box_strips(rect) else { return };
        for m1 in strips {
            let Some(cands) = self.box_strip(m1, rect) else { continue };
            for m2 in cands {
                let y = self.point(m1, m2);
                if y[0] >= rect.x[0] && y[0] <= rect.x[1] && y[1] >= rect.y[0] && y[1] <= rect.y[1] {
                    f([m1, m2], y);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_disc(lat: &AffineLattice, radius: f64, span: i64) -> Vec<[i64; 2]> {
        let mut out = Vec::new();
        for m1 in -span..=span {
            for m2 in -span..=span {
                let y = lat.point(m1, m2);
                if y[0] * y[0] + y[1] * y[1] <= radius * radius {
                    out.push([m1, m2]);
                }
            }
        }
        out.sort();
        out
    }

    proptest! {
        #[test]
        fn disc_matches_brute_force(u in -0.5..0.5f64, v in 0.3..4.0f64, phi in 0.0..6.3f64,
                                    x1 in -1.0..1.0f64, x2 in -1.0..1.0f64, radius in 0.1..4.0f64) {
            let lat = AffineLattice::new([x1, x2], Mat2::iwasawa(u, v, phi));
            let mut got = Vec::new();
            lat.for_each_in_disc(radius, |m, _| got.push(m));
            got.sort();
            prop_assert_eq!(got, brute_disc(&lat, radius, 30));
        }

        #[test]
        fn box_matches_brute_force(u in -0.5..0.5f64, v in 0.3..4.0f64, phi in 0.0..6.3f64,
                                   x1 in -1.0..1.0f64, x2 in -1.0..1.0f64,
                                   a in -2.0..2.0f64, w in 0.01..3.0f64, b in -2.0..2.0f64, h in 0.01..3.0f64) {
            let lat = AffineLattice::new([x1, x2], Mat2::iwasawa(u, v, phi));
            let rect = Rect { x: [a, a + w], y: [b, b + h] };
            let mut got = Vec::new();
            lat.for_each_in_box(&rect, |m, _| got.push(m));
            got.sort();
            let mut want = Vec::new();
            for m1 in -40..=40 {
                for m2 in -40..=40 {
                    let y = lat.point(m1, m2);
                    if y[0] >= rect.x[0] && y[0] <= rect.x[1] && y[1] >= rect.y[0] && y[1] <= rect.y[1] {
                        want.push([m1, m2]);
                    }
                }
            }
            prop_assert_eq!(got, want);
        }
    }
}
