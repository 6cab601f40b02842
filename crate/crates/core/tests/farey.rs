mod common;

use common::*;
use farey_core::farey::{circular_cross, fan_edges, farey_edges_in_window, is_farey_neighbor, mediant};
use farey_core::geometry::Mobius;
use farey_core::{ExtRat, GeodesicEdge};
use num_rational::BigRational;
use proptest::prelude::*;

#[test]
fn mediants_are_neighbors_of_both_parents() {
    let w = window(12, 8);
    let edges = farey_edges_in_window(&w);
    for e in &edges {
        let (u, v) = e.endpoints();
        let m = mediant(u, v).unwrap();
        assert!(is_farey_neighbor(&m, u).unwrap(), "{e}");
        assert!(is_farey_neighbor(&m, v).unwrap(), "{e}");
    }
}

#[test]
fn window_edges_form_a_triangulation() {
    for (n, d) in [(1, 1), (3, 2), (5, 5), (9, 4), (2, 7)] {
        let w = window(n, d);
        let edges = farey_edges_in_window(&w);
        assert_eq!(edges.len(), 2 * w.vertex_count() - 3, "window {n}x{d}");
        for (i, a) in edges.iter().enumerate() {
            assert!(a.is_farey());
            for b in &edges[i + 1..] {
                assert!(!circular_cross(a, b), "{a} crosses {b}");
            }
        }
    }
}

fn arb_ext() -> impl Strategy<Value = ExtRat> {
    prop_oneof![
        1 => Just(ExtRat::infinity()),
        9 => (-30i64..=30, 1i64..=12).prop_map(|(p, q)| ExtRat::new(p, q).unwrap()),
    ]
}

/// A word in the generators `z + 1` and `-1/z`.
fn arb_sl2z() -> impl Strategy<Value = Mobius<BigRational>> {
    prop::collection::vec(prop_oneof![Just(0u8), Just(1u8), Just(2u8)], 0..8).prop_map(|word| {
        let t = Mobius::new(q(1, 1), q(1, 1), q(0, 1), q(1, 1)).unwrap();
        let t_inv = Mobius::new(q(1, 1), q(-1, 1), q(0, 1), q(1, 1)).unwrap();
        let s = Mobius::new(q(0, 1), q(-1, 1), q(1, 1), q(0, 1)).unwrap();
        word.into_iter().fold(Mobius::identity(), |g, c| {
            let h = match c {
                0 => &t,
                1 => &t_inv,
                _ => &s,
            };
            g.compose(h)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ext_rat_display_round_trips(x in arb_ext()) {
        let back: ExtRat = x.to_string().parse().unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn crossing_is_symmetric_and_sl2z_invariant(
        a in arb_ext(), b in arb_ext(), c in arb_ext(), d in arb_ext(), g in arb_sl2z()
    ) {
        prop_assume!(a != b && c != d);
        let e1 = GeodesicEdge::new(a.clone(), b.clone()).unwrap();
        let e2 = GeodesicEdge::new(c.clone(), d.clone()).unwrap();
        prop_assert_eq!(circular_cross(&e1, &e2), circular_cross(&e2, &e1));
        let ge1 = GeodesicEdge::new(g.apply_ext(&a), g.apply_ext(&b)).unwrap();
        let ge2 = GeodesicEdge::new(g.apply_ext(&c), g.apply_ext(&d)).unwrap();
        prop_assert_eq!(circular_cross(&e1, &e2), circular_cross(&ge1, &ge2));
    }

    #[test]
    fn fan_edges_are_a_fan(p in arb_ext(), lo in -20i64..20, len in 1i64..20) {
        let fan = fan_edges(&p, lo, lo + len).unwrap();
        prop_assert_eq!(fan.len() as i64, len + 1);
        for (i, e) in fan.iter().enumerate() {
            prop_assert!(e.has_endpoint(&p) && e.is_farey());
            for f in &fan[i + 1..] {
                prop_assert!(!circular_cross(e, f));
            }
        }
        for pair in fan.windows(2) {
            let u = pair[0].other(&p).unwrap();
            let v = pair[1].other(&p).unwrap();
            // Consecutive edges bound the triangle (p, u, v).
            prop_assert!(is_farey_neighbor(u, v).unwrap(), "{} and {}", u, v);
        }
    }
}
