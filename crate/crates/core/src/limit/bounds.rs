//! The counting bounds behind the moment estimates: domination of the
//! finite-T count by a cone count, and the cusp bound on cone counts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{enumerate_directions, AffineLatticeSpec, DirectionSet, DomainShape};
use crate::linalg::Mat2;
use crate::points::AffineLattice;
use crate::stats::{counting_stat, Interval};

use super::haar::HomSample;
use super::region::{count_lattice_in_regions, ConeRegion};

/// Smallest radius for which the disc count is dominated by the widened
/// cone count: `max(10, 20·max(|a|, |b|)/θ)`.
pub fn crude_t0(interval: Interval, theta: f64) -> f64 {
    (20.0 * interval.lo.abs().max(interval.hi.abs()) / theta).max(10.0)
}

/// Both sides of `𝒩_{0,T}(I, α) ≤ #((Z²+ξ) M₀ k(2πα) Φᵗ ∩ 𝔠₀(I + [−θ, θ]))`
/// with `T = e^{t/2}`, for one lattice and radius and many `α`.
pub struct CrudeBound {
    lat: AffineLatticeSpec,
    dirs: DirectionSet,
    interval: Interval,
    widened: ConeRegion,
}

impl CrudeBound {
    pub fn new(lat: &AffineLatticeSpec, t: f64, interval: Interval, theta: f64) -> Result<Self> {
        if !(theta > 0.0) {
            return Err(Error::Precondition(format!("widening θ = {theta} must be positive")));
        }
        let t0 = crude_t0(interval, theta);
        if t < t0 {
            return Err(Error::Precondition(format!("T = {t} is below T₀ = {t0}")));
        }
        let dirs = enumerate_directions(lat, DomainShape::DISC, t)?;
        let widened = ConeRegion::new(0.0, Interval::new(interval.lo - theta, interval.hi + theta)?)?;
        Ok(CrudeBound { lat: *lat, dirs, interval, widened })
    }

    pub fn directions(&self) -> &DirectionSet {
        &self.dirs
    }

    /// `(left, right)` at rotation `α` (in turns).
    pub fn sides(&self, alpha: f64) -> (u64, u64) {
        let left = counting_stat(&self.dirs, self.interval, alpha) as u64;
        let t = self.dirs.t;
        let flow = Mat2::new(1.0 / t, 0.0, 0.0, t);
        let g = self.lat.basis * Mat2::k(std::f64::consts::TAU * alpha) * flow;
        let mut right = [0u64];
        count_lattice_in_regions(self.lat.shift, &g, &[self.widened], &mut right);
        (left, right[0])
    }

    pub fn check(&self, alpha: f64) -> bool {
        let (l, r) = self.sides(alpha);
        l <= r
    }
}

/// One-shot form of [`CrudeBound::check`].
pub fn crude_bound_check(lat: &AffineLatticeSpec, alpha: f64, t: f64, interval: Interval, theta: f64) -> Result<bool> {
    Ok(CrudeBound::new(lat, t, interval, theta)?.check(alpha))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CuspBoundReport {
    /// Points of `(Z² + ξ) n(u)a(v)k(φ)` in the closed disc of radius `r`.
    pub left: u64,
    /// `#((Z + ξ₁) ∩ [−r v^{−1/2}, r v^{−1/2}])`.
    pub strip_count: u64,
    /// `2r v^{1/2} + 1`.
    pub factor: f64,
    pub linear_holds: bool,
    /// `(σ, holds)` for the power bound, present when `v > 4r²`.
    pub power_holds: Vec<(f64, bool)>,
}

impl CuspBoundReport {
    pub fn holds(&self) -> bool {
        self.linear_holds && self.power_holds.iter().all(|&(_, h)| h)
    }
}

pub const CUSP_SIGMAS: [f64; 3] = [1.5, 2.0, 2.5];

/// Cusp bound for the disc of radius `r` at a sample with `v ≥ 1`. The
/// sample's coset, if any, is ignored.
pub fn cusp_bound_check(s: &HomSample, r: f64) -> Result<CuspBoundReport> {
    let v = s.point.v;
    if !(v >= 1.0) {
        return Err(Error::Precondition(format!("cusp bound needs v ≥ 1, got {v}")));
    }
    if !(r >= 0.0) {
        return Err(Error::InvalidInput(format!("radius must be nonnegative, got {r}")));
    }
    let mut left = 0u64;
    AffineLattice::new(s.xi, s.point.matrix()).for_each_in_disc(r, |_, y| {
        if y[0] * y[0] + y[1] * y[1] <= r * r {
            left += 1;
        }
    });
    let half = r / v.sqrt();
    let lo = (-half - s.xi[0]).ceil();
    let hi = (half - s.xi[0]).floor();
    let strip_count = if hi >= lo { (hi - lo) as u64 + 1 } else { 0 };
    let factor = 2.0 * r * v.sqrt() + 1.0;
    let rhs = factor * strip_count as f64;
    let linear_holds = left as f64 <= rhs;
    let power_holds = if v > 4.0 * r * r {
        CUSP_SIGMAS
            .iter()
            .map(|&sigma| (sigma, (left as f64).powf(sigma) <= factor.powf(sigma) * strip_count as f64))
            .collect()
    } else {
        Vec::new()
    };
    Ok(CuspBoundReport { left, strip_count, factor, linear_holds, power_holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::consts::cubic_shift;
    use crate::limit::haar::IwasawaPoint;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn crude_bound_on_random_rotations() {
        let lat = AffineLatticeSpec::shifted_integers(cubic_shift());
        let cb = CrudeBound::new(&lat, 500.0, Interval::new(-1.0, 1.0).unwrap(), 0.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let a: f64 = rng.random();
            let (l, r) = cb.sides(a);
            assert!(l <= r, "α={a}: {l} > {r}");
        }
    }

    #[test]
    fn crude_bound_tiny_window() {
        let lat = AffineLatticeSpec::shifted_integers(cubic_shift());
        assert!(crude_bound_check(&lat, 0.3, 100.0, Interval::new(0.0, 0.001).unwrap(), 1.0).unwrap());
    }

    #[test]
    fn crude_bound_preconditions() {
        let lat = AffineLatticeSpec::shifted_integers(cubic_shift());
        let i = Interval::new(-1.0, 1.0).unwrap();
        assert!(matches!(crude_bound_check(&lat, 0.0, 500.0, i, 0.0), Err(Error::Precondition(_))));
        assert!(matches!(crude_bound_check(&lat, 0.0, 20.0, i, 0.5), Err(Error::Precondition(_))));
    }

    #[test]
    fn cusp_bound_random_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..300 {
            let v = 1.0 + 99.0 * rng.random::<f64>();
            let p = IwasawaPoint::new(rng.random::<f64>() - 0.5, v, rng.random::<f64>() * 6.2);
            let s = HomSample::new(p, [rng.random(), rng.random()]);
            for r in [1.0, 5.0] {
                let rep = cusp_bound_check(&s, r).unwrap();
                assert!(rep.holds(), "{rep:?}");
            }
        }
    }

    #[test]
    fn cusp_bound_empty_strip() {
        let s = HomSample::new(IwasawaPoint::new(0.0, 1.0, 0.0), [0.5, 0.0]);
        let rep = cusp_bound_check(&s, 0.4).unwrap();
        assert_eq!((rep.left, rep.strip_count), (0, 0));
        let zero = cusp_bound_check(&s, 0.0).unwrap();
        assert!(zero.holds());
        let below = HomSample::new(IwasawaPoint::new(0.0, 0.5, 0.0), [0.5, 0.0]);
        assert!(matches!(cusp_bound_check(&below, 1.0), Err(Error::Precondition(_))));
    }

    #[test]
    fn cusp_bound_brute_force_left() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..100 {
            let p = IwasawaPoint::new(rng.random::<f64>() - 0.5, 1.0 + 9.0 * rng.random::<f64>(), rng.random::<f64>() * 6.2);
            let s = HomSample::new(p, [rng.random(), rng.random()]);
            let m = p.matrix();
            let mut brute = 0;
            for m1 in -40i64..=40 {
                for m2 in -40i64..=40 {
                    let y = m.apply([m1 as f64 + s.xi[0], m2 as f64 + s.xi[1]]);
                    if y[0] * y[0] + y[1] * y[1] <= 4.0 {
                        brute += 1;
                    }
                }
            }
            assert_eq!(cusp_bound_check(&s, 2.0).unwrap().left, brute);
        }
    }
}
