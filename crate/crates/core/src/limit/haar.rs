//! Haar-random points of the space of lattices, in Iwasawa coordinates on
//! the standard fundamental domain `|u| ≤ ½, u² + v² ≥ 1`.

use std::f64::consts::{FRAC_PI_3, PI, TAU};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::linalg::{IMat2, Mat2};

const V_MIN: f64 = 0.866_025_403_784_438_6; // √3/2

/// `M = n(u) a(v) k(φ)`, `τ = u + iv`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IwasawaPoint {
    pub u: f64,
    pub v: f64,
    pub phi: f64,
}

impl IwasawaPoint {
    pub fn new(u: f64, v: f64, phi: f64) -> Self {
        IwasawaPoint { u, v, phi }
    }

    pub fn matrix(&self) -> Mat2 {
        Mat2::iwasawa(self.u, self.v, self.phi)
    }

    pub fn from_matrix(m: &Mat2) -> Self {
        let (u, v, phi) = m.iwasawa_coords();
        IwasawaPoint { u, v, phi }
    }

    pub fn in_fundamental_domain(&self) -> bool {
        self.u.abs() <= 0.5 && self.u * self.u + self.v * self.v >= 1.0 && self.v > 0.0
    }
}

/// A point `(γ n(u) a(v) k(φ), ξ)` of an affine lattice space. The shift acts
/// before the matrix: the lattice is `(Z² + ξ) γ n(u) a(v) k(φ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomSample {
    pub point: IwasawaPoint,
    pub xi: [f64; 2],
    pub coset: Option<IMat2>,
}

impl HomSample {
    pub fn new(point: IwasawaPoint, xi: [f64; 2]) -> Self {
        HomSample { point, xi, coset: None }
    }

    pub fn with_coset(mut self, coset: IMat2) -> Self {
        self.coset = Some(coset);
        self
    }

    /// The matrix part `γ n(u) a(v) k(φ)`.
    pub fn matrix(&self) -> Mat2 {
        let m = self.point.matrix();
        match self.coset {
            Some(g) => g.to_real() * m,
            None => m,
        }
    }
}

/// One draw from normalized Haar measure on `SL(2,Z)\SL(2,R)`: density
/// `∝ v⁻² du dv` on the fundamental domain, φ uniform.
pub fn haar_sample<R: Rng + ?Sized>(rng: &mut R) -> IwasawaPoint {
    loop {
        let u = rng.random::<f64>() - 0.5;
        // inverse CDF of v⁻² on [√3/2, ∞), with the uniform in (0, 1]
        let v = V_MIN / (1.0 - rng.random::<f64>());
        if u * u + v * v >= 1.0 {
            let phi = rng.random::<f64>() * TAU;
            return IwasawaPoint { u, v, phi };
        }
    }
}

/// CDF of `v` under normalized Haar measure.
pub fn v_marginal_cdf(x: f64) -> f64 {
    let c = 3.0 / PI;
    if x <= V_MIN {
        0.0
    } else if x >= 1.0 {
        1.0 - c / x
    } else {
        // width of the domain at height v is 1 − 2√(1 − v²)
        let prim = |t: f64| -(1.0 - t * t).sqrt() / t - t.asin();
        let at_min = -1.0 / 3f64.sqrt() - FRAC_PI_3;
        c * ((2.0 / 3f64.sqrt() - 1.0 / x) - 2.0 * (prim(x) - at_min))
    }
}

/// Probability that `v ≥ x` for `x ≥ 1`.
pub fn v_tail(x: f64) -> f64 {
    1.0 - v_marginal_cdf(x)
}
