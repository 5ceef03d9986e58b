use latdir::consts::cubic_shift;
use latdir::lattice::{enumerate_directions, enumerate_points, expected_count, reduce_turn};
use latdir::stats::{counting_stat, Interval};
use latdir::{AffineLatticeSpec, DomainShape, Mat2};
use proptest::prelude::*;

// brute-force count over a box of integer coordinates
fn brute(lat: &AffineLatticeSpec, shape: DomainShape, t: f64, reach: i64) -> usize {
    let mut n = 0;
    for m1 in -reach..=reach {
        for m2 in -reach..=reach {
            let y = lat.basis.apply([m1 as f64 + lat.shift[0], m2 as f64 + lat.shift[1]]);
            if shape.contains(y, t) {
                n += 1;
            }
        }
    }
    n
}

fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enumeration_matches_brute_force(u in -0.5..0.5f64, v in 0.7..1.5f64, phi in 0.0..6.3f64,
                                       x1 in 0.0..1.0f64, x2 in 0.0..1.0f64, t in 1.0..12.0f64,
                                       c in 0.0..0.9f64, square in any::<bool>()) {
        let lat = AffineLatticeSpec::new(Mat2::iwasawa(u, v, phi), [x1, x2]).unwrap();
        let shape = if square { DomainShape::Square } else { DomainShape::Annulus(c) };
        // the basis has singular values within [0.3, 3.5], so |m| < 6t covers the domain
        let reach = (6.0 * t) as i64 + 2;
        prop_assert_eq!(enumerate_points(&lat, shape, t).unwrap().len(), brute(&lat, shape, t, reach));
    }

    #[test]
    fn rotation_shifts_directions(theta in 0.0..6.2f64, t in 5.0..40.0f64) {
        // rows rotate by −θ under right multiplication by k(θ)
        let base = AffineLatticeSpec::shifted_integers(cubic_shift());
        let rot = AffineLatticeSpec::new(Mat2::iwasawa(0.0, 1.0, theta), cubic_shift()).unwrap();
        let a = enumerate_directions(&base, DomainShape::DISC, t).unwrap();
        let b = enumerate_directions(&rot, DomainShape::DISC, t).unwrap();
        prop_assert_eq!(a.len(), b.len());
        let shift = -theta / std::f64::consts::TAU;
        let moved = latdir::DirectionSet::from_alphas(a.alphas.iter().map(|x| x + shift).collect(), t, DomainShape::DISC);
        for (x, y) in moved.alphas.iter().zip(&b.alphas) {
            prop_assert!(circular_distance(*x, *y) < 1e-9, "{} vs {}", x, y);
        }
    }

    #[test]
    fn integer_translation_of_shift_is_invisible(k1 in -3i32..4, k2 in -3i32..4, t in 5.0..30.0f64) {
        let xi = cubic_shift();
        let a = enumerate_directions(&AffineLatticeSpec::shifted_integers(xi), DomainShape::DISC, t).unwrap();
        let b = enumerate_directions(
            &AffineLatticeSpec::shifted_integers([xi[0] + k1 as f64, xi[1] + k2 as f64]),
            DomainShape::DISC,
            t,
        )
        .unwrap();
        prop_assert_eq!(a.len(), b.len());
        for (x, y) in a.alphas.iter().zip(&b.alphas) {
            prop_assert!(circular_distance(*x, *y) < 1e-9);
        }
    }
}

#[test]
fn gauss_circle_counts() {
    // nonzero (m1, m2) with m1² + m2² < T², the 12 points of norm exactly 10 excluded
    let lat = AffineLatticeSpec::shifted_integers([0.0, 0.0]);
    for (t, n) in [(1.5, 8), (2.0, 8), (2.5, 20), (10.0, 304)] {
        assert_eq!(enumerate_directions(&lat, DomainShape::DISC, t).unwrap().len(), n, "T = {t}");
    }
}

#[test]
fn asymptotic_density_for_every_shape() {
    let lat = AffineLatticeSpec::shifted_integers(cubic_shift());
    for shape in [DomainShape::DISC, DomainShape::Annulus(0.5), DomainShape::Square] {
        let n = enumerate_directions(&lat, shape, 400.0).unwrap().n();
        let rel = n / expected_count(shape, 400.0) - 1.0;
        assert!(rel.abs() < 2e-3, "{shape:?}: {rel}");
    }
}

#[test]
fn directions_equidistribute_on_the_circle() {
    let lat = AffineLatticeSpec::shifted_integers(cubic_shift());
    let d = enumerate_directions(&lat, DomainShape::DISC, 300.0).unwrap();
    let n = d.n();
    for q in 0..16 {
        let lo = q as f64 / 16.0;
        let share = counting_stat(&d, Interval::new(0.0, n / 16.0).unwrap(), lo) as f64 / n;
        assert!((share - 1.0 / 16.0).abs() < 2e-3, "arc {q}: {share}");
    }
    assert!(d.alphas.iter().all(|&a| (0.0..1.0).contains(&a) && a == reduce_turn(a)));
}
