//! Representatives of `Γ_q \ Γ`, where `Γ_q` is the principal congruence
//! subgroup of level `q`.

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::linalg::IMat2;

const GENERATORS: [IMat2; 2] = [IMat2::new(0, -1, 1, 0), IMat2::new(1, 1, 0, 1)];

pub const MAX_LEVEL: i64 = 5;

/// One integer matrix per element of `SL(2, Z/qZ)`, found by breadth-first
/// search over words in `S` and `T`. Output order is the BFS order.
pub fn coset_reps(q: i64) -> Result<Vec<IMat2>> {
    if !(2..=MAX_LEVEL).contains(&q) {
        return Err(Error::Unsupported(format!("coset representatives for level {q} (supported: 2..={MAX_LEVEL})")));
    }
    let mut seen = HashSet::new();
    let mut reps = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(IMat2::IDENTITY.reduce(q));
    queue.push_back(IMat2::IDENTITY);
    while let Some(g) = queue.pop_front() {
        reps.push(g);
        for s in GENERATORS {
            let h = g * s;
            if seen.insert(h.reduce(q)) {
                queue.push_back(h);
            }
        }
    }
    Ok(reps)
}

/// `|SL(2, Z/qZ)| = q³ Π_{p | q} (1 − p⁻²)`.
pub fn sl2_order(q: i64) -> u64 {
    let mut order = (q * q * q) as f64;
    let mut r = q;
    let mut p = 2;
    while r > 1 {
        if r % p == 0 {
            order *= 1.0 - 1.0 / (p * p) as f64;
            while r % p == 0 {
                r /= p;
            }
        }
        p += 1;
    }
    order.round() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_order(q: i64) -> usize {
        let mut n = 0;
        for a in 0..q {
            for b in 0..q {
                for c in 0..q {
                    for d in 0..q {
                        if (a * d - b * c).rem_euclid(q) == 1 {
                            n += 1;
                        }
                    }
                }
            }
        }
        n
    }

    #[test]
    fn sizes_and_distinct_residues() {
        for (q, expect) in [(2, 6), (3, 24), (4, 48), (5, 120)] {
            let reps = coset_reps(q).unwrap();
            assert_eq!(reps.len(), expect);
            assert_eq!(brute_order(q), expect);
            assert_eq!(sl2_order(q), expect as u64);
            let residues: HashSet<_> = reps.iter().map(|g| g.reduce(q)).collect();
            assert_eq!(residues.len(), reps.len());
            for g in &reps {
                assert_eq!(g.det(), 1);
            }
        }
    }

    #[test]
    fn unsupported_levels() {
        assert!(matches!(coset_reps(1), Err(Error::Unsupported(_))));
        assert!(matches!(coset_reps(6), Err(Error::Unsupported(_))));
    }
}
