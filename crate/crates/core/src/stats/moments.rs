//! Mixed moments of the window counts, by grid quadrature or by an exact
//! sweep over the breakpoints of the piecewise-constant count function.

use std::collections::{BTreeMap, HashMap};
use std::hash::{BuildHasherDefault, Hasher};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{reduce_turn, DirectionSet};

use super::{counting_stat, CompensatedSum, Interval, IntervalBox, MeasureSpec, MomentSpec};

/// Grid quadrature of `Π f(𝒩ⱼ)^{sⱼ}` against λ, `f(k) = k+1` or `k`.
///
/// With a cap `K`, grid points where `maxⱼ 𝒩ⱼ > K` contribute zero
/// (the restricted moment).
pub fn mixed_moment(
    dirs: &DirectionSet,
    bx: &IntervalBox,
    spec: &MomentSpec,
    lam: &MeasureSpec,
) -> Result<Complex64> {
    spec.check_dim(bx.dim())?;
    let grid: Vec<(f64, f64)> = lam.grid().collect();
    let partials: Vec<(CompensatedSum, CompensatedSum)> = grid
        .par_chunks(1024)
        .map(|chunk| {
            let mut re = CompensatedSum::default();
            let mut im = CompensatedSum::default();
            let mut ks = vec![0u64; bx.dim()];
            for &(alpha, w) in chunk {
                for (k, i) in ks.iter_mut().zip(&bx.intervals) {
                    *k = counting_stat(dirs, *i, alpha) as u64;
                }
                let v = spec.integrand(&ks) * w;
                re.add(v.re);
                im.add(v.im);
            }
            (re, im)
        })
        .collect();
    let mut re = CompensatedSum::default();
    let mut im = CompensatedSum::default();
    for (r, i) in &partials {
        re.merge(r);
        im.merge(i);
    }
    Ok(Complex64::new(re.value(), im.value()))
}

/// Same integral as [`mixed_moment`], evaluated exactly from the joint law
/// of the counts (see [`count_law`]).
pub fn mixed_moment_exact(
    dirs: &DirectionSet,
    bx: &IntervalBox,
    spec: &MomentSpec,
    lam: &MeasureSpec,
) -> Result<Complex64> {
    spec.check_dim(bx.dim())?;
    Ok(count_law(dirs, bx, lam)?.moment(spec))
}

/// Joint law of `(𝒩(I₁, α), …, 𝒩(I_m, α))` for `α ~ λ`.
#[derive(Clone, Debug, PartialEq)]
pub struct CountLaw {
    pub dim: usize,
    pub probs: BTreeMap<Vec<u64>, f64>,
}

impl CountLaw {
    pub fn total(&self) -> f64 {
        self.probs.values().sum()
    }

    pub fn prob(&self, k: &[u64]) -> f64 {
        self.probs.get(k).copied().unwrap_or(0.0)
    }

    pub fn expectation(&self, f: impl Fn(&[u64]) -> f64) -> f64 {
        let mut s = CompensatedSum::default();
        for (k, p) in &self.probs {
            s.add(p * f(k));
        }
        s.value()
    }

    pub fn moment(&self, spec: &MomentSpec) -> Complex64 {
        let mut re = CompensatedSum::default();
        let mut im = CompensatedSum::default();
        for (k, p) in &self.probs {
            let v = spec.integrand(k) * *p;
            re.add(v.re);
            im.add(v.im);
        }
        Complex64::new(re.value(), im.value())
    }

    /// Law of coordinate `j`.
    pub fn marginal(&self, j: usize) -> BTreeMap<u64, f64> {
        let mut out = BTreeMap::new();
        for (k, p) in &self.probs {
            *out.entry(k[j]).or_insert(0.0) += p;
        }
        out
    }
}

#[derive(Default)]
struct MixHasher(u64);

impl Hasher for MixHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.write_u64(b as u64);
        }
    }

    fn write_u128(&mut self, x: u128) {
        self.write_u64(x as u64 ^ (x >> 64) as u64);
    }

    fn write_u64(&mut self, x: u64) {
        let h = (self.0 ^ x).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        self.0 = h ^ (h >> 29);
    }
}

/// Events of one window edge: positions `α_i − s mod 1`, produced in
/// increasing order by rotating the sorted list.
struct EdgeStream<'a> {
    alphas: &'a [f64],
    shift: f64,
    start: usize,
    k: usize,
    delta: i64,
}

#[inline]
fn position(alpha: f64, shift: f64) -> f64 {
    if alpha >= shift {
        alpha - shift
    } else {
        alpha - shift + 1.0
    }
}

impl<'a> EdgeStream<'a> {
    fn new(alphas: &'a [f64], shift: f64, delta: i64) -> Self {
        let start = alphas.partition_point(|&a| a < shift);
        EdgeStream { alphas, shift, start, k: 0, delta }
    }

    #[inline]
    fn peek(&self) -> Option<f64> {
        let n = self.alphas.len();
        if self.k >= n {
            return None;
        }
        let idx = (self.start + self.k) % n;
        Some(position(self.alphas[idx], self.shift))
    }
}

const MAX_EXACT_DIM: usize = 4;

/// Exact joint law of the window counts under λ.
///
/// Each point `α_i` lies in the window `[α + a/N, α + b/N)` exactly when
/// `α ∈ (α_i − b/N, α_i − a/N]`, so every count is a step function of `α`
/// with `2N` breakpoints. The breakpoints of all windows are merged in order
/// and the λ-mass of every piece is credited to its count vector. For
/// uniform λ the masses are exact piece lengths; otherwise the density is
/// taken at the piece midpoint.
pub fn count_law(dirs: &DirectionSet, bx: &IntervalBox, lam: &MeasureSpec) -> Result<CountLaw> {
    let m = bx.dim();
    if m > MAX_EXACT_DIM {
        return Err(Error::Unsupported(format!("exact count law supports up to {MAX_EXACT_DIM} windows")));
    }
    let n = dirs.len();
    let nf = n as f64;
    let a = &dirs.alphas;

    let mut state = [0i64; MAX_EXACT_DIM];
    let mut streams: Vec<(usize, EdgeStream)> = Vec::new();
    for (j, i) in bx.intervals.iter().enumerate() {
        if n == 0 {
            continue;
        }
        if i.len() / nf >= 1.0 {
            state[j] = n as i64;
            continue;
        }
        let s_enter = reduce_turn(i.hi / nf);
        let s_leave = reduce_turn(i.lo / nf);
        // arcs that straddle α = 0 are active at the start of the sweep
        state[j] = a
            .iter()
            .filter(|&&x| position(x, s_enter) > position(x, s_leave))
            .count() as i64;
        streams.push((j, EdgeStream::new(a, s_enter, 1)));
        streams.push((j, EdgeStream::new(a, s_leave, -1)));
    }

    let mut acc: HashMap<u128, CompensatedSum, BuildHasherDefault<MixHasher>> = HashMap::default();
    let pack = |st: &[i64; MAX_EXACT_DIM]| -> u128 {
        let mut key = 0u128;
        for (j, &v) in st.iter().enumerate().take(m) {
            key |= (v.max(0) as u128 & 0xFFFF_FFFF) << (32 * j);
        }
        key
    };
    let uniform = lam.is_uniform();
    let mut credit = |st: &[i64; MAX_EXACT_DIM], from: f64, to: f64| {
        let len = to - from;
        if len > 0.0 {
            let w = if uniform { len } else { len * lam.density(0.5 * (from + to)) };
            acc.entry(pack(st)).or_default().add(w);
        }
    };

    let mut prev = 0.0;
    loop {
        let mut best: Option<(usize, f64)> = None;
        for (s, (_, st)) in streams.iter().enumerate() {
            if let Some(x) = st.peek() {
                if best.is_none_or(|(_, b)| x < b) {
                    best = Some((s, x));
                }
            }
        }
        let Some((s, x)) = best else { break };
        credit(&state, prev, x);
        prev = prev.max(x);
        let (j, st) = &mut streams[s];
        state[*j] += st.delta;
        st.k += 1;
    }
    credit(&state, prev, 1.0);

    let mut probs = BTreeMap::new();
    for (key, w) in acc {
        let k: Vec<u64> = (0..m).map(|j| ((key >> (32 * j)) & 0xFFFF_FFFF) as u64).collect();
        *probs.entry(k).or_insert(0.0) += w.value();
    }
    Ok(CountLaw { dim: m, probs })
}

/// `∫ Σ_{j₁≠j₂} Σ_{m₁,m₂} χ_{I₁}(N(α_{j₁}−α+m₁)) χ_{I₂}(N(α_{j₂}−α+m₂)) dα`,
/// computed as `∫ 𝒩(I₁,α) 𝒩(I₂,α) dα` from the exact count law minus the
/// diagonal `j₁ = j₂`, which contributes `Σ_m |I₁ ∩ (I₂ + Nm)|`.
pub fn pair_correlation_via_moment(dirs: &DirectionSet, i1: Interval, i2: Interval) -> Result<f64> {
    let n = dirs.n();
    if n == 0.0 {
        return Ok(0.0);
    }
    let bx = IntervalBox::new(vec![i1, i2])?;
    let law = count_law(dirs, &bx, &MeasureSpec::uniform())?;
    let mut total = CompensatedSum::default();
    for (k, p) in &law.probs {
        total.add(p * (k[0] * k[1]) as f64);
    }
    let mut diag = 0.0;
    let reach = ((i1.hi - i2.lo).abs().max((i2.hi - i1.lo).abs()) / n).ceil() as i64 + 1;
    for m in -reach..=reach {
        diag += i1.overlap(&i2.shifted(n * m as f64));
    }
    total.add(-diag);
    Ok(total.value())
}
