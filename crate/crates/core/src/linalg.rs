//! 2×2 real matrices acting on row vectors, and the one-parameter subgroups
//! of SL(2,R) used throughout: `n(u)`, `a(v)`, `k(φ)` and the geodesic flow.

use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Tolerance on |det − 1| for matrices used as lattice bases or group elements.
pub const DET_TOL: f64 = 1e-12;

/// Row-major 2×2 matrix `[[a, b], [c, d]]`. Vectors are rows: `x ↦ x M`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2::new(1.0, 0.0, 0.0, 1.0);

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn from_rows(rows: [[f64; 2]; 2]) -> Self {
        Mat2::new(rows[0][0], rows[0][1], rows[1][0], rows[1][1])
    }

    pub fn rows(&self) -> [[f64; 2]; 2] {
        [[self.a, self.b], [self.c, self.d]]
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn is_unimodular(&self) -> bool {
        self.entries().iter().all(|x| x.is_finite()) && (self.det() - 1.0).abs() <= DET_TOL
    }

    pub fn check_unimodular(&self) -> Result<()> {
        if self.is_unimodular() {
            Ok(())
        } else {
            invalid(format!("matrix {:?} has determinant {}, expected 1", self.rows(), self.det()))
        }
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// Inverse assuming det = 1.
    pub fn inverse_unimodular(&self) -> Mat2 {
        Mat2::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn inverse(&self) -> Mat2 {
        let det = self.det();
        Mat2::new(self.d / det, -self.b / det, -self.c / det, self.a / det)
    }

    /// Row vector times matrix.
    #[inline]
    pub fn apply(&self, x: [f64; 2]) -> [f64; 2] {
        [x[0] * self.a + x[1] * self.c, x[0] * self.b + x[1] * self.d]
    }

    /// Horocycle element `n(u) = [[1, u], [0, 1]]`.
    pub fn n(u: f64) -> Mat2 {
        Mat2::new(1.0, u, 0.0, 1.0)
    }

    /// Diagonal element `a(v) = diag(v^{1/2}, v^{-1/2})`.
    pub fn a(v: f64) -> Mat2 {
        let s = v.sqrt();
        Mat2::new(s, 0.0, 0.0, 1.0 / s)
    }

    /// Rotation `k(φ) = [[cos φ, −sin φ], [sin φ, cos φ]]`.
    ///
    /// Acting on row vectors this rotates by −φ.
    pub fn k(phi: f64) -> Mat2 {
        let (s, c) = phi.sin_cos();
        Mat2::new(c, -s, s, c)
    }

    /// Geodesic flow `Φᵗ = diag(e^{−t/2}, e^{t/2})`.
    pub fn geodesic(t: f64) -> Mat2 {
        Mat2::new((-t / 2.0).exp(), 0.0, 0.0, (t / 2.0).exp())
    }

    /// `n(u) a(v) k(φ)`.
    pub fn iwasawa(u: f64, v: f64, phi: f64) -> Mat2 {
        Mat2::n(u) * Mat2::a(v) * Mat2::k(phi)
    }

    /// Inverse of [`Mat2::iwasawa`] for det-1 matrices: returns `(u, v, φ)`
    /// with φ in [0, 2π).
    pub fn iwasawa_coords(&self) -> (f64, f64, f64) {
        let r2 = self.c * self.c + self.d * self.d;
        let v = 1.0 / r2;
        let u = (self.a * self.c + self.b * self.d) / r2;
        let phi = self.c.atan2(self.d).rem_euclid(std::f64::consts::TAU);
        (u, v, phi)
    }

    /// Möbius action on the upper half plane, `τ ↦ (aτ+b)/(cτ+d)`.
    pub fn mobius(&self, u: f64, v: f64) -> (f64, f64) {
        let den_re = self.c * u + self.d;
        let den_im = self.c * v;
        let den = den_re * den_re + den_im * den_im;
        let num_re = self.a * u + self.b;
        let num_im = self.a * v;
        (
            (num_re * den_re + num_im * den_im) / den,
            (num_im * den_re - num_re * den_im) / den,
        )
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

/// Integer 2×2 matrix, used for elements of SL(2,Z).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IMat2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl IMat2 {
    pub const IDENTITY: IMat2 = IMat2::new(1, 0, 0, 1);

    pub const fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        IMat2 { a, b, c, d }
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn to_real(&self) -> Mat2 {
        Mat2::new(self.a as f64, self.b as f64, self.c as f64, self.d as f64)
    }

    pub fn inverse_unimodular(&self) -> IMat2 {
        IMat2::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn reduce(&self, q: i64) -> [i64; 4] {
        [
            self.a.rem_euclid(q),
            self.b.rem_euclid(q),
            self.c.rem_euclid(q),
            self.d.rem_euclid(q),
        ]
    }
}

impl Mul for IMat2 {
    type Output = IMat2;

    fn mul(self, o: IMat2) -> IMat2 {
        IMat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rotation_acts_clockwise_on_rows() {
        let y = Mat2::k(std::f64::consts::FRAC_PI_2).apply([1.0, 0.0]);
        assert!((y[0]).abs() < 1e-15 && (y[1] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn det_check() {
        assert!(Mat2::IDENTITY.check_unimodular().is_ok());
        assert!(Mat2::new(2.0, 0.0, 0.0, 1.0).check_unimodular().is_err());
        assert!(Mat2::new(f64::NAN, 0.0, 0.0, 1.0).check_unimodular().is_err());
    }

    proptest! {
        #[test]
        fn iwasawa_roundtrip(u in -3.0..3.0f64, v in 0.01..50.0f64, phi in 0.0..6.2f64) {
            let m = Mat2::iwasawa(u, v, phi);
            prop_assert!((m.det() - 1.0).abs() < 1e-9);
            let (u2, v2, p2) = m.iwasawa_coords();
            prop_assert!((u - u2).abs() < 1e-9 * (1.0 + u.abs()));
            prop_assert!((v - v2).abs() < 1e-9 * v);
            let dp = (phi - p2).abs();
            prop_assert!(dp < 1e-9 || (dp - std::f64::consts::TAU).abs() < 1e-9);
        }

        #[test]
        fn mobius_matches_iwasawa_of_product(u in -2.0..2.0f64, v in 0.05..5.0f64,
                                             a in -3.0..3.0f64, b in -3.0..3.0f64, c in 0.2..3.0f64) {
            // d chosen so the matrix has det 1
            let d = (1.0 + b * c) / a.max(0.1);
            let m = Mat2::new(a.max(0.1), b, c, d);
            let g = m * Mat2::n(u) * Mat2::a(v);
            let (gu, gv, _) = g.iwasawa_coords();
            let (mu, mv) = m.mobius(u, v);
            prop_assert!((gu - mu).abs() < 1e-8 * (1.0 + mu.abs()));
            prop_assert!((gv - mv).abs() < 1e-8 * mv);
        }
    }
}
