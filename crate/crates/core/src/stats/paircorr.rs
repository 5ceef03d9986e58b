use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::lattice::DirectionSet;

use super::{CompensatedSum, Histogram, Interval};

const CHUNK: usize = 1 << 14;

/// Visits every ordered pair `j₁ ≠ j₂` (and every `m ∈ Z`) whose scaled
/// separation `d = N(α_{j₁} − α_{j₂} + m)` satisfies `|d| ≤ w`, calling
/// `visit(acc, j₁, j₂, d)`.
///
/// The sorted list is scanned forward from each `j`, wrapping around the
/// circle; each unordered pair is found once and reported with both signs.
/// Work is split into fixed-size chunks whose partial results are merged in
/// chunk order, so the result does not depend on the thread count.
pub fn for_each_pair_within<A, I, V, M>(dirs: &DirectionSet, w: f64, init: I, visit: V, merge: M) -> Result<A>
where
    A: Send,
    I: Fn() -> A + Sync,
    V: Fn(&mut A, usize, usize, f64) + Sync,
    M: Fn(A, A) -> A,
{
    let n = dirs.len();
    let nf = n as f64;
    if !(w >= 0.0) || w >= nf / 2.0 {
        return invalid(format!("window half-width {w} must be below N/2 = {}", nf / 2.0));
    }
    let a = &dirs.alphas;
    let chunks: Vec<A> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut acc = init();
            for j in c * CHUNK..((c + 1) * CHUNK).min(n) {
                for i in 1..n {
                    let (idx, wrap) = if j + i < n { (j + i, 0.0) } else { (j + i - n, 1.0) };
                    let d = nf * (a[idx] + wrap - a[j]);
                    if d > w {
                        break;
                    }
                    visit(&mut acc, idx, j, d);
                    visit(&mut acc, j, idx, -d);
                }
            }
            acc
        })
        .collect();
    let mut it = chunks.into_iter();
    let first = it.next().unwrap_or_else(&init);
    Ok(it.fold(first, merge))
}

/// Two-point correlation histogram: for each bin, `(1/N)·#{ordered pairs,
/// m : N(α_{j₁} − α_{j₂} + m) ∈ bin}` divided by the bin width.
///
/// With `density = Some(ρ)` each pair is weighted by `1/(ρ(α_{j₁})ρ(α_{j₂}))`,
/// which unfolds a non-uniform limiting direction density.
pub fn pair_correlation(
    dirs: &DirectionSet,
    edges: &[f64],
    density: Option<&(dyn Fn(f64) -> f64 + Sync)>,
) -> Result<Histogram> {
    Histogram::check_edges(edges)?;
    let w = edges[0].abs().max(edges[edges.len() - 1].abs());
    let nb = edges.len() - 1;
    let a = &dirs.alphas;
    let sums = for_each_pair_within(
        dirs,
        w,
        || vec![0.0f64; nb],
        |acc, j1, j2, d| {
            if let Some(b) = Histogram::bin_of(edges, d) {
                acc[b] += match density {
                    Some(rho) => 1.0 / (rho(a[j1]) * rho(a[j2])),
                    None => 1.0,
                };
            }
        },
        |mut x, y| {
            for (p, q) in x.iter_mut().zip(y) {
                *p += q;
            }
            x
        },
    )?;
    let nf = dirs.n();
    let masses = sums
        .iter()
        .zip(edges.windows(2))
        .map(|(s, e)| s / nf / (e[1] - e[0]))
        .collect();
    Ok(Histogram { bin_edges: edges.to_vec(), masses, normalization: super::Normalization::Density })
}

/// Direct pair sum `(1/N) Σ_{j₁≠j₂, m} |I₁ ∩ (I₂ + d)|` with
/// `d = N(α_{j₁} − α_{j₂} + m)`.
///
/// This is the two-point correlation sum for the test function
/// `f(d) = ∫ χ_{I₁}(t) χ_{I₂}(t − d) dt`.
pub fn pair_overlap_sum(dirs: &DirectionSet, i1: Interval, i2: Interval) -> Result<f64> {
    if dirs.is_empty() {
        return Ok(0.0);
    }
    let w = (i1.lo - i2.hi).abs().max((i1.hi - i2.lo).abs());
    let total = for_each_pair_within(
        dirs,
        w,
        CompensatedSum::default,
        |acc, _, _, d| {
            let ov = i1.overlap(&i2.shifted(d));
            if ov > 0.0 {
                acc.add(ov);
            }
        },
        |mut x, y| {
            x.merge(&y);
            x
        },
    )?;
    Ok(total.value() / dirs.n())
}
