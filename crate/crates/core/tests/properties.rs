use dqm::analysis::{random_centro, random_skew};
use dqm::centro::{classify_symmetry, kron_class, split, ModeLabel, Split, Symmetry};
use dqm::grid::Grid;
use dqm::linalg::kron;
use dqm::problems::{
    beam_frequencies, plate_frequencies, skew_plate_frequencies, BeamBc, BeamProblem, EdgeSupport, PathChoice,
    PlateProblem, SkewPlateProblem,
};
use dqm::weights::{first_order_matrix, higher_order};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn structured(n: usize, skew: bool, seed: u64) -> dqm::linalg::Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if skew {
        random_skew(n, &mut rng)
    } else {
        random_centro(n, &mut rng)
    }
}

fn class_of(skew: bool) -> Symmetry {
    if skew {
        Symmetry::SkewCentro
    } else {
        Symmetry::Centro
    }
}

fn symmetric_grid(kind: u8, n: usize) -> Grid {
    match kind % 3 {
        0 => Grid::uniform(n).unwrap(),
        1 => Grid::chebyshev(n).unwrap(),
        _ => Grid::chebyshev_with_ends(n).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kronecker_products_follow_the_class_table(
        n1 in 2usize..6, n2 in 2usize..6, s1 in any::<bool>(), s2 in any::<bool>(), seed in any::<u64>()
    ) {
        let p = structured(n1, s1, seed);
        let q = structured(n2, s2, seed ^ 0x9e37);
        let want = kron_class(class_of(s1), class_of(s2)).unwrap();
        prop_assert_eq!(classify_symmetry(&kron(&p, &q), 1e-12), want);
    }

    #[test]
    fn split_then_reassemble_is_exact(n in 2usize..12, skew in any::<bool>(), seed in any::<u64>()) {
        let q = structured(n, skew, seed);
        let back = match split(&q, class_of(skew)).unwrap() {
            Split::Centro(b) => b.reassemble(),
            Split::Skew(b) => b.reassemble(),
        };
        prop_assert_eq!(back, q);
    }

    #[test]
    fn weights_differentiate_polynomials_exactly(
        kind in any::<u8>(), n in 3usize..11, coeffs in prop::collection::vec(-2.0f64..2.0, 11)
    ) {
        let g = symmetric_grid(kind, n);
        let c = &coeffs[..n];
        let f: Vec<f64> = g.nodes().iter().map(|&x| c.iter().rev().fold(0.0, |a, &k| a * x + k)).collect();
        let df: Vec<f64> = g.nodes().iter().map(|&x| {
            (1..n).rev().fold(0.0, |a, k| a * x + k as f64 * c[k])
        }).collect();
        let got = first_order_matrix(g.nodes()).unwrap().matvec(&f);
        for (a, b) in got.iter().zip(&df) {
            prop_assert!((a - b).abs() <= 1e-8 * (1.0 + b.abs()), "{} vs {}", a, b);
        }
    }

    #[test]
    fn second_order_weights_are_the_square_of_the_first(kind in any::<u8>(), n in 3usize..14) {
        let g = symmetric_grid(kind, n);
        let a = first_order_matrix(g.nodes()).unwrap();
        let b = higher_order(&g, 2).unwrap().values;
        let sq = a.matmul(&a);
        prop_assert!(b.max_abs_diff(&sq) <= 1e-10 * sq.max_abs());
    }
}

fn assert_same(f: &[f64], d: &[f64], what: &str) {
    for (a, b) in f.iter().zip(d) {
        assert!((a / b - 1.0).abs() < 1e-8, "{what}: {a} vs {b}");
    }
}

#[test]
fn factorized_and_dense_paths_agree_for_every_problem() {
    for n in 6..=12 {
        for g in [Grid::uniform(n).unwrap(), Grid::chebyshev_with_ends(n).unwrap()] {
            let tag = format!("{:?} n={n}", g.kind());
            for bc in [BeamBc::SimplySupported, BeamBc::ClampedClamped] {
                let p = BeamProblem::new(g.clone(), bc).unwrap();
                let f = beam_frequencies(&p, 2, PathChoice::Factorized).unwrap();
                let d = beam_frequencies(&p, 2, PathChoice::Dense).unwrap();
                assert_same(&f.frequencies, &d.frequencies, &format!("beam {bc:?} {tag}"));
            }
            for bc in [EdgeSupport::SimplySupported, EdgeSupport::Clamped] {
                let p = PlateProblem::new(g.clone(), g.clone(), 1.5, bc).unwrap();
                let f = plate_frequencies(&p, 2, PathChoice::Factorized).unwrap();
                let d = plate_frequencies(&p, 2, PathChoice::Dense).unwrap();
                assert_same(&f.frequencies, &d.frequencies, &format!("plate {bc:?} {tag}"));
            }
            let p = SkewPlateProblem::new(g.clone(), g.clone(), 60.0, 1.0, EdgeSupport::Clamped).unwrap();
            let f = skew_plate_frequencies(&p, 2, PathChoice::Factorized).unwrap();
            let d = skew_plate_frequencies(&p, 2, PathChoice::Dense).unwrap();
            assert_same(&f.frequencies, &d.frequencies, &format!("skew plate {tag}"));
        }
    }
}

#[test]
fn simply_supported_mode_labels_alternate() {
    for n in [8, 10, 11] {
        let p = BeamProblem::new(Grid::chebyshev_with_ends(n).unwrap(), BeamBc::SimplySupported).unwrap();
        let r = beam_frequencies(&p, 2, PathChoice::Auto).unwrap();
        assert_eq!(r.labels, vec![ModeLabel::Symmetric, ModeLabel::SkewSymmetric], "n={n}");
    }
}

#[test]
fn chebyshev_beam_converges_monotonically() {
    let pi2 = std::f64::consts::PI.powi(2);
    let errors: Vec<f64> = (6..=12)
        .map(|n| {
            let p = BeamProblem::new(Grid::chebyshev_with_ends(n).unwrap(), BeamBc::SimplySupported).unwrap();
            (beam_frequencies(&p, 1, PathChoice::Auto).unwrap().frequencies[0] - pi2).abs()
        })
        .collect();
    assert!(errors.windows(2).all(|w| w[1] < w[0]), "{errors:?}");
}
