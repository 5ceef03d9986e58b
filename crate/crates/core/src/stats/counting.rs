use crate::lattice::{reduce_turn, DirectionSet};

use super::Interval;

/// Number of `α_j` in `[lo, hi)` for `0 ≤ lo ≤ hi ≤ 1`.
#[inline]
pub(crate) fn count_in(alphas: &[f64], lo: f64, hi: f64) -> usize {
    alphas.partition_point(|&a| a < hi) - alphas.partition_point(|&a| a < lo)
}

/// `𝒩(I, α) = #{j : α_j ∈ N⁻¹I + α mod 1}` with the half-open window
/// `[α + a/N, α + b/N)`. A window of length ≥ 1 covers the whole circle.
pub fn counting_stat(dirs: &DirectionSet, interval: Interval, alpha: f64) -> usize {
    let n = dirs.len();
    if n == 0 {
        return 0;
    }
    let nf = n as f64;
    let width = interval.len() / nf;
    if width >= 1.0 {
        return n;
    }
    let lo = reduce_turn(alpha + interval.lo / nf);
    let hi = lo + width;
    if hi <= 1.0 {
        count_in(&dirs.alphas, lo, hi)
    } else {
        count_in(&dirs.alphas, lo, 1.0) + count_in(&dirs.alphas, 0.0, hi - 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::DomainShape;
    use proptest::prelude::*;

    fn regular8() -> DirectionSet {
        DirectionSet::from_alphas((0..8).map(|i| i as f64 / 8.0).collect(), 1.5, DomainShape::DISC)
    }

    // membership scan oracle
    fn scan(dirs: &DirectionSet, i: Interval, alpha: f64) -> usize {
        let n = dirs.n();
        dirs.alphas
            .iter()
            .filter(|&&a| {
                let x = (a - alpha - i.lo / n).rem_euclid(1.0);
                x < i.len() / n
            })
            .count()
    }

    #[test]
    fn regular_set_examples() {
        let d = regular8();
        assert_eq!(counting_stat(&d, Interval::new(0.0, 1.0).unwrap(), 0.0), 1);
        assert_eq!(counting_stat(&d, Interval::new(-1.0, 1.0).unwrap(), 0.0), 2);
        assert_eq!(counting_stat(&d, Interval::new(0.0, 8.0).unwrap(), 0.3), 8);
        assert_eq!(counting_stat(&d, Interval::new(-3.0, 20.0).unwrap(), 0.3), 8);
    }

    fn random_set() -> impl Strategy<Value = DirectionSet> {
        proptest::collection::vec(0.0..1.0f64, 1..200)
            .prop_map(|v| DirectionSet::from_alphas(v, 1.0, DomainShape::DISC))
    }

    // dyadic inputs keep every shift and window endpoint exact
    fn dyadic_set(v: &[u32], delta: u32) -> DirectionSet {
        DirectionSet::from_alphas(
            v.iter().map(|&x| (x + delta) as f64 / 16384.0).collect(),
            1.0,
            DomainShape::DISC,
        )
    }

    proptest! {
        #[test]
        fn matches_scan(d in random_set(), lo in -5.0..5.0f64, w in 0.01..6.0f64, alpha in 0.0..1.0f64) {
            let i = Interval::new(lo, lo + w).unwrap();
            prop_assert_eq!(counting_stat(&d, i, alpha), scan(&d, i, alpha));
        }

        #[test]
        fn translation_invariance(v in proptest::collection::vec(0..10_000u32, 1..200),
                                  delta in 0..10_000u32, alpha in 0..10_000u32,
                                  lo in -50i32..50, w in 1i32..80) {
            let d = dyadic_set(&v, 0);
            let shifted = dyadic_set(&v, delta);
            let n = d.n();
            let i = Interval::new(lo as f64 * n / 64.0, (lo + w) as f64 * n / 64.0).unwrap();
            let a = alpha as f64 / 16384.0;
            prop_assert_eq!(counting_stat(&d, i, a), counting_stat(&shifted, i, a + delta as f64 / 16384.0));
        }

        #[test]
        fn window_additivity(v in proptest::collection::vec(0..10_000u32, 1..200),
                             lo in -50i32..50, w1 in 1i32..33, w2 in 1i32..33, alpha in 0..10_000u32) {
            let d = dyadic_set(&v, 0);
            let n = d.n();
            let at = |k: i32| k as f64 * n / 64.0;
            let a = alpha as f64 / 16384.0;
            let total = counting_stat(&d, Interval::new(at(lo), at(lo + w1 + w2)).unwrap(), a);
            let parts = counting_stat(&d, Interval::new(at(lo), at(lo + w1)).unwrap(), a)
                + counting_stat(&d, Interval::new(at(lo + w1), at(lo + w1 + w2)).unwrap(), a);
            prop_assert_eq!(total, parts);
        }
    }
}
