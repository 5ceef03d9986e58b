use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::lattice::DirectionSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    /// `masses` are heights per unit length.
    Density,
    /// `masses` are raw counts.
    Count,
}

/// Binned values over half-open bins `[eᵢ, eᵢ₊₁)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub bin_edges: Vec<f64>,
    pub masses: Vec<f64>,
    pub normalization: Normalization,
}

impl Histogram {
    pub fn check_edges(edges: &[f64]) -> Result<()> {
        if edges.len() < 2 {
            return invalid("a histogram needs at least two edges");
        }
        if edges.iter().any(|e| !e.is_finite()) || edges.windows(2).any(|w| w[0] >= w[1]) {
            return invalid("bin edges must be finite and strictly increasing");
        }
        Ok(())
    }

    /// Edges `lo, lo+w, …` up to `hi` (the last bin is the one ending at `hi`).
    pub fn uniform_edges(lo: f64, hi: f64, width: f64) -> Result<Vec<f64>> {
        if !(width > 0.0) || !(hi > lo) {
            return invalid(format!("bad bin spec {lo}:{hi}:{width}"));
        }
        let n = ((hi - lo) / width).round() as usize;
        if n == 0 || ((hi - lo) / width - n as f64).abs() > 1e-9 {
            return invalid(format!("width {width} does not divide [{lo}, {hi}]"));
        }
        Ok((0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect())
    }

    /// Parses `lo:hi:width`.
    pub fn parse_edges(s: &str) -> Result<Vec<f64>> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return invalid(format!("bins {s:?} must look like lo:hi:width"));
        }
        let p = |x: &str| crate::consts::parse_real(x);
        Histogram::uniform_edges(p(parts[0])?, p(parts[1])?, p(parts[2])?)
    }

    #[inline]
    pub fn bin_of(edges: &[f64], x: f64) -> Option<usize> {
        if !(x >= edges[0]) || x >= edges[edges.len() - 1] {
            return None;
        }
        Some(edges.partition_point(|&e| e <= x) - 1)
    }

    pub fn widths(&self) -> impl Iterator<Item = f64> + '_ {
        self.bin_edges.windows(2).map(|w| w[1] - w[0])
    }

    /// Total mass: `Σ height·width` for densities, `Σ counts` otherwise.
    pub fn total_mass(&self) -> f64 {
        match self.normalization {
            Normalization::Density => self.masses.iter().zip(self.widths()).map(|(m, w)| m * w).sum(),
            Normalization::Count => self.masses.iter().sum(),
        }
    }

    pub(crate) fn from_counts(edges: Vec<f64>, counts: &[u64], scale: f64) -> Histogram {
        let masses = counts
            .iter()
            .zip(edges.windows(2))
            .map(|(&c, w)| c as f64 * scale / (w[1] - w[0]))
            .collect();
        Histogram { bin_edges: edges, masses, normalization: Normalization::Density }
    }

    /// Folds a histogram over signed bins symmetric about zero onto `[0, W)`,
    /// averaging each bin with its mirror image.
    pub fn fold(&self) -> Result<Histogram> {
        let e = &self.bin_edges;
        let n = e.len();
        let tol = 1e-12 * e[n - 1].abs().max(1.0);
        if (0..n).any(|i| (e[i] + e[n - 1 - i]).abs() > tol) {
            return invalid("folding needs edges symmetric about zero");
        }
        let nb = n - 1;
        let start = e.partition_point(|&x| x < -tol);
        if (e[start]).abs() > tol {
            return invalid("folding needs an edge at zero");
        }
        let edges = e[start..].to_vec();
        let masses = (start..nb).map(|i| 0.5 * (self.masses[i] + self.masses[nb - 1 - i])).collect();
        Ok(Histogram { bin_edges: edges, masses, normalization: self.normalization })
    }

    /// Writes `bin_lo,bin_hi,density` rows.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let head = match self.normalization {
            Normalization::Density => "density",
            Normalization::Count => "count",
        };
        writeln!(w, "bin_lo,bin_hi,{head}")?;
        for (m, e) in self.masses.iter().zip(self.bin_edges.windows(2)) {
            writeln!(
                w,
                "{},{},{}",
                crate::io::fmt_g17(e[0]),
                crate::io::fmt_g17(e[1]),
                crate::io::fmt_g17(*m)
            )?;
        }
        Ok(())
    }
}

/// Histogram of `N·(α_{j+k} − α_j mod 1)` over all `j` (cyclically),
/// normalised so that a histogram covering every gap has total mass 1.
pub fn spacing_histogram(dirs: &DirectionSet, k: usize, edges: &[f64]) -> Result<Histogram> {
    Histogram::check_edges(edges)?;
    let n = dirs.len();
    if k == 0 || k >= n {
        return invalid(format!("neighbour order k = {k} must satisfy 0 < k < N = {n}"));
    }
    let nf = n as f64;
    let a = &dirs.alphas;
    let mut counts = vec![0u64; edges.len() - 1];
    for j in 0..n {
        let (idx, wrap) = if j + k < n { (j + k, 0.0) } else { (j + k - n, 1.0) };
        let gap = nf * (a[idx] + wrap - a[j]);
        if let Some(b) = Histogram::bin_of(edges, gap) {
            counts[b] += 1;
        }
    }
    Ok(Histogram::from_counts(edges.to_vec(), &counts, 1.0 / nf))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::DomainShape;

    fn regular8() -> DirectionSet {
        DirectionSet::from_alphas((0..8).map(|i| i as f64 / 8.0).collect(), 1.5, DomainShape::DISC)
    }

    #[test]
    fn regular_spacings_are_atoms() {
        let edges = Histogram::uniform_edges(0.0, 6.0, 0.1).unwrap();
        let d = regular8();
        for k in [1usize, 3] {
            let h = spacing_histogram(&d, k, &edges).unwrap();
            let b = Histogram::bin_of(&edges, k as f64).unwrap();
            assert!((h.masses[b] * 0.1 - 1.0).abs() < 1e-9, "k={k}");
            assert!((h.total_mass() - 1.0).abs() < 1e-9);
            assert_eq!(h.masses.iter().filter(|&&m| m > 0.0).count(), 1);
        }
    }

    #[test]
    fn k_must_be_below_n() {
        let edges = Histogram::uniform_edges(0.0, 6.0, 0.1).unwrap();
        assert!(spacing_histogram(&regular8(), 8, &edges).is_err());
        assert!(spacing_histogram(&regular8(), 0, &edges).is_err());
    }

    #[test]
    fn edges() {
        let e = Histogram::parse_edges("-10:10:0.5").unwrap();
        assert_eq!(e.len(), 41);
        assert_eq!(e[0], -10.0);
        assert_eq!(e[40], 10.0);
        assert!(Histogram::parse_edges("0:1:0.3").is_err());
        assert_eq!(Histogram::bin_of(&e, -10.0), Some(0));
        assert_eq!(Histogram::bin_of(&e, 10.0), None);
        assert_eq!(Histogram::bin_of(&e, 0.0), Some(20));
        assert!(Histogram::check_edges(&[0.0, 0.0, 1.0]).is_err());
    }

    #[test]
    fn fold_averages_mirror_bins() {
        let h = Histogram {
            bin_edges: vec![-2.0, -1.0, 0.0, 1.0, 2.0],
            masses: vec![1.0, 2.0, 4.0, 3.0],
            normalization: Normalization::Density,
        };
        let f = h.fold().unwrap();
        assert_eq!(f.bin_edges, vec![0.0, 1.0, 2.0]);
        assert_eq!(f.masses, vec![3.0, 2.0]);
        let skew = Histogram { bin_edges: vec![-1.0, 0.0, 2.0], ..h.clone() };
        assert!(skew.fold().is_err());
    }
}
