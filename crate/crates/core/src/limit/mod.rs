//! The limiting point process on the space of affine lattices: Haar
//! sampling, cone counts, Monte Carlo estimates of the count law, tail
//! exponents, Siegel-type checks and the counting bounds.

mod bounds;
mod cosets;
mod estimate;
mod haar;
mod region;
mod siegel;
mod tails;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use bounds::{crude_bound_check, crude_t0, cusp_bound_check, CrudeBound, CuspBoundReport};
pub use cosets::{coset_reps, sl2_order, MAX_LEVEL};
pub use estimate::{estimate_e, known_moment, sample_counts, KDistribution, KSamples, XiClass, MOM_BLOCKS};
pub use haar::{haar_sample, v_marginal_cdf, v_tail, HomSample, IwasawaPoint};
pub use region::{count_in_region, count_lattice_in_regions, ConeRegion};
pub use siegel::{siegel_check, siegel_estimate, SiegelKind, SiegelReport, GAUSSIAN_CUTOFF_RADIUS};
pub use tails::{survival, tail_exponent, tail_fit, TailFit, GRID_RATIO, MIN_EXCEEDANCES};

/// A Monte Carlo result.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub estimate: f64,
    pub se: f64,
    pub n: u64,
}

/// Samples per RNG stream. Fixed so results do not depend on the thread
/// count.
pub const SAMPLE_CHUNK: usize = 4096;

/// RNG for chunk `chunk` of a run seeded with `seed`.
pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// `n` draws of `f`, in sample order. Chunk `i` covers samples
/// `[i·SAMPLE_CHUNK, (i+1)·SAMPLE_CHUNK)` and owns RNG stream `i`.
pub(crate) fn par_samples<T, F>(n: usize, seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng) -> T + Sync,
{
    let chunks = n.div_ceil(SAMPLE_CHUNK);
    let per_chunk: Vec<Vec<T>> = (0..chunks)
        .into_par_iter()
        .map(|i| {
            let mut rng = chunk_rng(seed, i as u64);
            let len = SAMPLE_CHUNK.min(n - i * SAMPLE_CHUNK);
            (0..len).map(|_| f(&mut rng)).collect()
        })
        .collect();
    per_chunk.into_iter().flatten().collect()
}

/// Sample mean with its standard error.
pub fn mean_se(xs: &[f64]) -> Estimate {
    let n = xs.len();
    if n == 0 {
        return Estimate { estimate: f64::NAN, se: f64::NAN, n: 0 };
    }
    let mean = crate::stats::neumaier_sum(xs.iter().copied()) / n as f64;
    let var = if n > 1 {
        crate::stats::neumaier_sum(xs.iter().map(|x| (x - mean) * (x - mean))) / (n - 1) as f64
    } else {
        0.0
    };
    Estimate { estimate: mean, se: (var / n as f64).sqrt(), n: n as u64 }
}

/// Median of `blocks` contiguous block means. The standard error is the
/// spread of the block means, `sd/√B`, inflated by `√(π/2)` for the median.
pub fn median_of_means(xs: &[f64], blocks: usize) -> Estimate {
    let n = xs.len();
    let blocks = blocks.clamp(1, n.max(1));
    if n == 0 {
        return Estimate { estimate: f64::NAN, se: f64::NAN, n: 0 };
    }
    let mut means: Vec<f64> = (0..blocks)
        .map(|b| {
            let lo = b * n / blocks;
            let hi = (b + 1) * n / blocks;
            crate::stats::neumaier_sum(xs[lo..hi].iter().copied()) / (hi - lo) as f64
        })
        .collect();
    let spread = mean_se(&means).se;
    means.sort_by(f64::total_cmp);
    let mid = blocks / 2;
    let median = if blocks.is_multiple_of(2) { 0.5 * (means[mid - 1] + means[mid]) } else { means[mid] };
    Estimate {
        estimate: median,
        se: spread * std::f64::consts::FRAC_PI_2.sqrt(),
        n: n as u64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn chunking_is_thread_independent() {
        let draw = |r: &mut ChaCha8Rng| r.random::<u64>();
        let a = par_samples(10_000, 3, draw);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| par_samples(10_000, 3, draw));
        assert_eq!(a, b);
        assert_eq!(a.len(), 10_000);
        assert_ne!(a[0], a[SAMPLE_CHUNK]);
    }

    #[test]
    fn estimators() {
        let e = mean_se(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(e.estimate, 2.5);
        assert!((e.se - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
        let xs: Vec<f64> = (0..64).map(|i| (i % 2) as f64).collect();
        let m = median_of_means(&xs, 32);
        assert_eq!(m.estimate, 0.5);
        assert_eq!(m.se, 0.0);
        // one wild block does not move the median
        let mut ys = vec![1.0; 320];
        ys[0] = 1e9;
        assert_eq!(median_of_means(&ys, 32).estimate, 1.0);
    }
}
