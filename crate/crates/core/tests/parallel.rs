//! The sequential and parallel strategies produce identical reports.

mod common;

use common::*;
use farey_core::shear::{check_ps_certificate, check_qs_certificate, FanScanParams};
use farey_core::triangulation::{check_transitivity_bound, max_crossing};
use farey_core::{Arith, Exec, Real, ShearFunction};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn certificates_do_not_depend_on_the_strategy() {
    let s = ShearFunction::paper_example();
    let tips = ["inf", "0", "1/2", "-3"].map(r).to_vec();
    let params = FanScanParams::new(tips, (-300, 300), 40).unwrap();
    for arith in [Arith::Exact, Arith::Float] {
        let bound = Real::integer(512);
        let a = check_qs_certificate(&s, &params, &bound, arith, Exec::Sequential).unwrap();
        let b = check_qs_certificate(&s, &params, &bound, arith, Exec::Parallel).unwrap();
        assert_eq!(a, b);
        let a = check_ps_certificate(&s, &params, arith, Exec::Sequential).unwrap();
        let b = check_ps_certificate(&s, &params, arith, Exec::Parallel).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn crossings_do_not_depend_on_the_strategy() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let w = window(10, 6);
    for _ in 0..10 {
        let t1 = random_triangulation(&w, 5, &mut rng);
        let t2 = random_triangulation(&w, 5, &mut rng);
        let t3 = random_triangulation(&w, 5, &mut rng);
        assert_eq!(max_crossing(&t1, &t2, Exec::Sequential), max_crossing(&t1, &t2, Exec::Parallel));
        assert_eq!(
            check_transitivity_bound(&t1, &t2, &t3, Exec::Sequential),
            check_transitivity_bound(&t1, &t2, &t3, Exec::Parallel)
        );
    }
}
