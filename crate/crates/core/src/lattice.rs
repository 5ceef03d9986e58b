//! Enumeration of affine lattice points in an annulus or square of size `T`,
//! and the sorted sequence of their directions.

use std::f64::consts::{PI, TAU};
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::Mat2;
use crate::points::{AffineLattice, Rect};

/// Default cap on the number of enumerated points.
pub const DEFAULT_MEMORY_CAP: u64 = 200_000_000;

/// The affine lattice `(Z² + ξ) M₀`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffineLatticeSpec {
    pub basis: Mat2,
    pub shift: [f64; 2],
}

impl AffineLatticeSpec {
    pub fn new(basis: Mat2, shift: [f64; 2]) -> Result<Self> {
        let spec = AffineLatticeSpec { basis, shift };
        spec.validate()?;
        Ok(spec)
    }

    /// `Z² + ξ` with the identity basis.
    pub fn shifted_integers(shift: [f64; 2]) -> Self {
        AffineLatticeSpec { basis: Mat2::IDENTITY, shift }
    }

    pub fn validate(&self) -> Result<()> {
        self.basis.check_unimodular()?;
        if !self.shift.iter().all(|x| x.is_finite()) {
            return invalid("shift must be finite");
        }
        Ok(())
    }

    pub(crate) fn lattice(&self) -> AffineLattice {
        AffineLattice::new(self.shift, self.basis)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainShape {
    /// `cT < ‖y‖ < T`.
    Annulus(f64),
    /// `y ∈ (−T, T)²`.
    Square,
}

impl DomainShape {
    pub const DISC: DomainShape = DomainShape::Annulus(0.0);

    pub fn validate(&self) -> Result<()> {
        match *self {
            DomainShape::Annulus(c) if !(0.0..1.0).contains(&c) => {
                invalid(format!("annulus ratio c = {c} outside [0, 1)"))
            }
            _ => Ok(()),
        }
    }

    /// Strict membership of a point in the domain scaled by `t`.
    #[inline]
    pub fn contains(&self, y: [f64; 2], t: f64) -> bool {
        match *self {
            DomainShape::Annulus(c) => {
                let r2 = y[0] * y[0] + y[1] * y[1];
                r2 < t * t && r2 > c * c * t * t && r2 > 0.0
            }
            DomainShape::Square => {
                y[0].abs() < t && y[1].abs() < t && (y[0] != 0.0 || y[1] != 0.0)
            }
        }
    }
}

/// Sorted directions (in turns) of the points of an affine lattice in a domain.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectionSet {
    pub alphas: Vec<f64>,
    pub t: f64,
    pub shape: DomainShape,
}

impl DirectionSet {
    /// Builds a set from arbitrary turns, reducing mod 1 and sorting.
    pub fn from_alphas(mut alphas: Vec<f64>, t: f64, shape: DomainShape) -> Self {
        for a in alphas.iter_mut() {
            *a = reduce_turn(*a);
        }
        alphas.par_sort_by(f64::total_cmp);
        DirectionSet { alphas, t, shape }
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    /// The normalisation `N` as a real.
    pub fn n(&self) -> f64 {
        self.alphas.len() as f64
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "alpha")?;
        for a in &self.alphas {
            writeln!(w, "{}", crate::io::fmt_g17(*a))?;
        }
        Ok(())
    }
}

/// Maps a real to [0, 1).
#[inline]
pub fn reduce_turn(a: f64) -> f64 {
    let r = a - a.floor();
    if r >= 1.0 || r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Direction of a nonzero vector in turns, in [0, 1).
#[inline]
pub fn turn(y: [f64; 2]) -> f64 {
    let a = y[1].atan2(y[0]) / TAU;
    if a < 0.0 {
        let r = a + 1.0;
        if r >= 1.0 {
            0.0
        } else {
            r
        }
    } else if a == 0.0 {
        0.0
    } else {
        a
    }
}

#[derive(Clone, Copy, Debug)]
pub struct EnumerationConfig {
    pub memory_cap: u64,
}

impl Default for EnumerationConfig {
    fn default() -> Self {
        EnumerationConfig { memory_cap: DEFAULT_MEMORY_CAP }
    }
}

/// `π(1−c²)T²` for an annulus, `4T²` for the square.
pub fn expected_count(shape: DomainShape, t: f64) -> f64 {
    match shape {
        DomainShape::Annulus(c) => PI * (1.0 - c * c) * t * t,
        DomainShape::Square => 4.0 * t * t,
    }
}

/// Limiting density of directions for lattice points in the square `[−T, T]²`.
pub fn rho_square(alpha: f64) -> f64 {
    let a = reduce_turn(alpha);
    let nu = (a * 4.0).round() / 4.0;
    let c = (TAU * (a - nu)).cos();
    PI / (4.0 * c * c)
}

fn check_job(lat: &AffineLatticeSpec, shape: DomainShape, t: f64, cfg: &EnumerationConfig) -> Result<()> {
    lat.validate()?;
    shape.validate()?;
    if !(t > 0.0) || !t.is_finite() {
        return invalid(format!("T must be positive and finite, got {t}"));
    }
    let expected = expected_count(shape, t);
    // boundary slack for the lattice-point error term
    let requested = expected + 8.0 * t + 16.0;
    if requested > cfg.memory_cap as f64 {
        return Err(Error::Capacity { requested: requested as u64, cap: cfg.memory_cap });
    }
    Ok(())
}

/// Points of each `m₁`-strip mapped through `emit`, strips in ascending order.
fn collect_strips<T: Send>(
    lat: &AffineLatticeSpec,
    shape: DomainShape,
    t: f64,
    emit: impl Fn([f64; 2]) -> T + Sync,
) -> Vec<T> {
    let al = lat.lattice();
    let strips: Vec<i64> = match shape {
        DomainShape::Annulus(_) => al.disc_strips(t).map(|r| r.collect()).unwrap_or_default(),
        DomainShape::Square => al
            .box_strips(&Rect { x: [-t, t], y: [-t, t] })
            .map(|r| r.collect())
            .unwrap_or_default(),
    };
    let per_strip: Vec<Vec<T>> = strips
        .par_iter()
        .map(|&m1| {
            let cands = match shape {
                DomainShape::Annulus(_) => al.disc_strip(m1, t),
                DomainShape::Square => al.box_strip(m1, &Rect { x: [-t, t], y: [-t, t] }),
            };
            let mut out = Vec::new();
            if let Some(cands) = cands {
                for m2 in cands {
                    let y = al.point(m1, m2);
                    if shape.contains(y, t) {
                        out.push(emit(y));
                    }
                }
            }
            out
        })
        .collect();
    per_strip.into_iter().flatten().collect()
}

pub fn enumerate_points(lat: &AffineLatticeSpec, shape: DomainShape, t: f64) -> Result<Vec<[f64; 2]>> {
    enumerate_points_with(lat, shape, t, &EnumerationConfig::default())
}

pub fn enumerate_points_with(
    lat: &AffineLatticeSpec,
    shape: DomainShape,
    t: f64,
    cfg: &EnumerationConfig,
) -> Result<Vec<[f64; 2]>> {
    check_job(lat, shape, t, cfg)?;
    Ok(collect_strips(lat, shape, t, |y| y))
}

/// Sorted directions of a list of nonzero points.
pub fn directions(points: &[[f64; 2]], t: f64, shape: DomainShape) -> Result<DirectionSet> {
    if points.iter().any(|y| y[0] == 0.0 && y[1] == 0.0) {
        return invalid("zero vector has no direction");
    }
    let mut alphas: Vec<f64> = points.par_iter().map(|&y| turn(y)).collect();
    alphas.par_sort_by(f64::total_cmp);
    Ok(DirectionSet { alphas, t, shape })
}

/// `enumerate_points` followed by `directions`, without materialising the points.
pub fn enumerate_directions(lat: &AffineLatticeSpec, shape: DomainShape, t: f64) -> Result<DirectionSet> {
    enumerate_directions_with(lat, shape, t, &EnumerationConfig::default())
}

pub fn enumerate_directions_with(
    lat: &AffineLatticeSpec,
    shape: DomainShape,
    t: f64,
    cfg: &EnumerationConfig,
) -> Result<DirectionSet> {
    check_job(lat, shape, t, cfg)?;
    let mut alphas = collect_strips(lat, shape, t, turn);
    alphas.par_sort_by(f64::total_cmp);
    Ok(DirectionSet { alphas, t, shape })
}

/// JSON job description: `{"basis": [[a,b],[c,d]], "shift": [x1,x2],
/// "shape": {"annulus": c} | "square", "T": t}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeJob {
    pub basis: [[f64; 2]; 2],
    pub shift: [f64; 2],
    pub shape: DomainShape,
    #[serde(rename = "T")]
    pub t: f64,
}

impl LatticeJob {
    pub fn from_json(s: &str) -> Result<Self> {
        let job: LatticeJob = serde_json::from_str(s)?;
        job.spec()?;
        job.shape.validate()?;
        Ok(job)
    }

    pub fn spec(&self) -> Result<AffineLatticeSpec> {
        AffineLatticeSpec::new(Mat2::from_rows(self.basis), self.shift)
    }
}
