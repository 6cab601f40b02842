mod common;

use common::*;
use farey_core::farey::farey_edges_in_window;
use farey_core::shear::{
    brute_force_partial_sums, check_ps_certificate, develop, develop_bfs, fan_arc_lengths, fan_ratio,
    shear_from_vertex_map, DevelopOptions, FanScanParams,
};
use farey_core::{Arith, Exec, ExtRat, Real, Shear, ShearFunction, VertexMap};
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn arb_sparse() -> impl Strategy<Value = ShearFunction> {
    (any::<u64>(), 1usize..10).prop_map(|(seed, k)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_sparse_shear(&window(5, 4), k, &mut rng)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn develop_then_read_back_shears(s in arb_sparse()) {
        let w = window(5, 4);
        let h = develop(&s, &w, &DevelopOptions::default()).unwrap();
        h.check_monotone().unwrap();
        for e in farey_edges_in_window(&w) {
            if let Ok(got) = shear_from_vertex_map(&h, &e) {
                prop_assert_eq!(got, s.shear(&e).unwrap());
            }
        }
    }

    #[test]
    fn float_development_tracks_exact(s in arb_sparse()) {
        let w = window(5, 4);
        let exact = develop(&s, &w, &DevelopOptions::default()).unwrap();
        let float = develop(&s, &w, &DevelopOptions { arith: Arith::Float, ..Default::default() }).unwrap();
        for (v, img) in exact.iter() {
            let (a, b) = (img.to_f64(), float.image(&v).unwrap().to_f64());
            prop_assert!(a == b || (a - b).abs() <= 1e-9 * a.abs().max(1.0), "{}: {} vs {}", v, a, b);
        }
    }

    #[test]
    fn bfs_oracle_agrees(s in arb_sparse()) {
        let w = window(5, 4);
        let norm = [ExtRat::zero(), ExtRat::one(), ExtRat::infinity()];
        let fast = develop(&s, &w, &DevelopOptions::default()).unwrap();
        let slow = develop_bfs(&s, &w, &norm, None).unwrap();
        for (v, img) in slow.iter() {
            prop_assert_eq!(fast.exact_image(&v), img.as_exact().cloned());
        }
    }

    #[test]
    fn fan_ratio_ignores_the_arc_normalization(
        s in arb_sparse(), tip in prop::sample::select(vec!["inf", "0", "1", "1/2", "-2/3"]),
        k in -6i64..6, n in 1u64..6, shift in -5i64..5
    ) {
        let p: ExtRat = tip.parse().unwrap();
        let n_i = n as i64;
        // Normalizing at another index rescales every arc by the same factor.
        let alpha = fan_arc_lengths(&s, &p, k + shift, k - n_i, k + n_i - 1, Arith::Exact).unwrap();
        let sum = |xs: &[Real]| -> BigRational { xs.iter().map(|x| x.as_exact().unwrap().clone()).sum() };
        let (left, right) = alpha.split_at(n as usize);
        let ratio = sum(right) / sum(left);
        prop_assert_eq!(Real::Exact(ratio), fan_ratio(&s, &p, k, n, Arith::Exact).unwrap());
    }

    #[test]
    fn prefix_sums_match_brute_force(s in arb_sparse(), tip in prop::sample::select(vec!["inf", "0", "1/2", "-3"])) {
        let p: ExtRat = tip.parse().unwrap();
        let params = FanScanParams::new(vec![p.clone()], (-12, 12), 1).unwrap();
        let rep = check_ps_certificate(&s, &params, Arith::Float, Exec::Sequential).unwrap();
        let brute = brute_force_partial_sums(&s, &p, -12, 12);
        prop_assert!((rep.sup_abs_partial_sum - brute).abs() < 1e-12);
    }
}

#[test]
fn finite_support_fixes_everything_outside_it() {
    // Shears on edges with both endpoints in [2, 4] move nothing outside [2, 4].
    let s = ShearFunction::sparse([
        (edge("2", "3"), Shear::from_ratio(3, 1).unwrap()),
        (edge("3", "4"), Shear::from_ratio(1, 2).unwrap()),
        (edge("5/2", "3"), Shear::from_ratio(5, 4).unwrap()),
    ])
    .unwrap();
    let w = window(12, 6);
    let h = develop(&s, &w, &DevelopOptions::default()).unwrap();
    let (lo, hi) = (r("2"), r("4"));
    let mut moved = 0;
    for (v, img) in h.iter() {
        if v.is_infinite() || v <= lo || v >= hi {
            assert_eq!(img.as_exact(), Some(&v), "{v} moved");
        } else if img.as_exact() != Some(&v) {
            moved += 1;
        }
    }
    assert!(moved > 0);
}

#[test]
fn json_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let s = random_sparse_shear(&window(5, 4), 6, &mut rng);
    let back = ShearFunction::from_json(&s.to_json()).unwrap();
    assert_eq!(back.entries(), s.entries());
    let h = develop(&s, &window(5, 4), &DevelopOptions::default()).unwrap();
    let hb = VertexMap::from_json(&h.to_json()).unwrap();
    assert_eq!(hb.to_json(), h.to_json());
    for (v, img) in h.iter() {
        assert_eq!(hb.exact_image(&v), img.as_exact().cloned());
    }
}
