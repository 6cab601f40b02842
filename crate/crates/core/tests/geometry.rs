mod common;

use common::*;
use farey_core::geometry::{
    arc_length_in_triangle, exact_quad_multiplier, horocycle_arc, lambda_from_horocycles, lambda_squared, ptolemy,
    shear_of_quad, Horocycle, Mobius,
};
use farey_core::ExtRat;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn arb_q() -> impl Strategy<Value = BigRational> {
    (-40i64..=40, 1i64..=9).prop_map(|(p, d)| q(p, d))
}

fn arb_mobius() -> impl Strategy<Value = Mobius<BigRational>> {
    (arb_q(), arb_q(), arb_q(), arb_q())
        .prop_filter("invertible", |(a, b, c, d)| !(a * d - b * c).is_zero())
        .prop_map(|(a, b, c, d)| Mobius::new(a, b, c, d).unwrap())
}

fn ext(x: &BigRational) -> ExtRat {
    ExtRat::from_rational(x)
}

/// Four distinct points ordered so that `(x, y)` separates `z` from `w`.
fn arb_quad() -> impl Strategy<Value = [BigRational; 4]> {
    prop::collection::btree_set((-60i64..=60, 1i64..=7).prop_map(|(p, d)| q(p, d)), 4).prop_map(|s| {
        let v: Vec<_> = s.into_iter().collect();
        [v[0].clone(), v[2].clone(), v[1].clone(), v[3].clone()]
    })
}

/// Image of the horocycle at `x` of diameter `h` under a real Möbius map of
/// positive determinant.
fn transport(g: &Mobius<BigRational>, x: &BigRational, h: &BigRational) -> Horocycle<BigRational> {
    let det = g.det();
    let den = &g.c * x + &g.d;
    if den.is_zero() {
        Horocycle::new(ExtRat::infinity(), det / (&g.c * &g.c * h)).unwrap()
    } else {
        let img = (&g.a * x + &g.b) / &den;
        Horocycle::new(ext(&img), h * det / (&den * &den)).unwrap()
    }
}

/// Foot of the perpendicular from the ideal point `z` onto the geodesic
/// `(x, y)`: the perpendicular is the semicircle through `z` orthogonal to
/// the one on `(x, y)`, and the foot is where the two circles meet.
fn foot(x: f64, y: f64, z: f64) -> (f64, f64) {
    let c = (x + y) / 2.0;
    let r = (y - x).abs() / 2.0;
    if z == c {
        return (c, r);
    }
    let m = (r * r + z * z - c * c) / (2.0 * (z - c));
    let rho2 = (m - z).powi(2);
    let px = (r * r - rho2 + m * m - c * c) / (2.0 * (m - c));
    (px, (r * r - (px - c).powi(2)).sqrt())
}

fn hyperbolic_distance((x1, y1): (f64, f64), (x2, y2): (f64, f64)) -> f64 {
    let d2 = (x1 - x2).powi(2) + (y1 - y2).powi(2);
    (1.0 + d2 / (2.0 * y1 * y2)).acosh()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn shear_is_mobius_invariant(p in arb_quad(), g in arb_mobius()) {
        let [x, y, z, w] = p.map(|v| ext(&v));
        let before = exact_quad_multiplier(&x, &y, &z, &w).unwrap();
        let [gx, gy, gz, gw] = [&x, &y, &z, &w].map(|v| g.apply_ext(v));
        prop_assert_eq!(exact_quad_multiplier(&gx, &gy, &gz, &gw).unwrap(), before);
    }

    #[test]
    fn shear_symmetries(p in arb_quad()) {
        let [x, y, z, w] = p.map(|v| ext(&v));
        let s = shear_of_quad(&x, &y, &z, &w).unwrap();
        prop_assert!((s + shear_of_quad(&x, &y, &w, &z).unwrap()).abs() < 1e-12);
        prop_assert!((s - shear_of_quad(&y, &x, &w, &z).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn shear_is_distance_between_tangency_points(p in arb_quad()) {
        let [x, y, z, w] = p.clone().map(|v| ext(&v));
        let [xf, yf, zf, wf] = p.map(|v| farey_core::Scalar::to_float(&v));
        let s = shear_of_quad(&x, &y, &z, &w).unwrap();
        let (fz, fw) = (foot(xf, yf, zf), foot(xf, yf, wf));
        // Signed so that moving from x toward y is positive.
        let toward_y = (fw.0 - fz.0) * (yf - xf) > 0.0;
        let dist = hyperbolic_distance(fz, fw);
        let d = if toward_y { dist } else { -dist };
        // Positive when w's foot lies past z's foot going from y to x if
        // (x, y, z) is positively oriented, from x to y otherwise.
        let oriented = farey_core::farey::positively_oriented(&x, &y, &z);
        let signed = if oriented { -d } else { d };
        prop_assert!((signed - s).abs() < 1e-9, "{} vs {}", signed, s);
    }

    #[test]
    fn lambda_is_invariant_under_isometries(
        x in arb_q(), y in arb_q(), h1 in (1i64..50, 1i64..50), h2 in (1i64..50, 1i64..50), g in arb_mobius()
    ) {
        prop_assume!(x != y);
        // Keep orientation so diameters stay positive.
        let g = if g.det().is_negative() {
            Mobius::new(-g.a.clone(), g.b.clone(), -g.c.clone(), g.d.clone()).unwrap()
        } else {
            g
        };
        let (s1, s2) = (q(h1.0, h1.1), q(h2.0, h2.1));
        let a = Horocycle::new(ext(&x), s1.clone()).unwrap();
        let b = Horocycle::new(ext(&y), s2.clone()).unwrap();
        let (ga, gb) = (transport(&g, &x, &s1), transport(&g, &y, &s2));
        prop_assert_eq!(lambda_squared(&a, &b).unwrap(), lambda_squared(&ga, &gb).unwrap());
        let l = lambda_from_horocycles(&a, &b).unwrap();
        prop_assert!((l - lambda_from_horocycles(&ga, &gb).unwrap()).abs() <= 1e-9 * l.max(1.0));
    }

    #[test]
    fn ptolemy_holds_for_decorated_quads(p in arb_quad(), sizes in prop::array::uniform4(1i64..40)) {
        // Vertices in circular order a, b, c, d with diagonal (a, c).
        let [x, y, z, w] = p;
        let pts = [x, z, y, w];
        let hs: Vec<_> = pts
            .iter()
            .zip(sizes)
            .map(|(v, s)| Horocycle::new(ext(v), q(s, 7)).unwrap())
            .collect();
        let lam = |i: usize, j: usize| lambda_from_horocycles(&hs[i], &hs[j]).unwrap();
        let bd = ptolemy(&lam(0, 1), &lam(1, 2), &lam(2, 3), &lam(3, 0), &lam(0, 2)).unwrap();
        prop_assert!((bd - lam(1, 3)).abs() <= 1e-9 * bd.max(1.0));
    }

    #[test]
    fn triangle_arc_matches_horocycle_arc(p in arb_quad(), sizes in prop::array::uniform3(1i64..40)) {
        let [a, b, c, _] = p;
        let hs: Vec<_> = [&a, &b, &c]
            .iter()
            .zip(sizes)
            .map(|(v, s)| Horocycle::new(ext(v), q(s, 5)).unwrap())
            .collect();
        let lam = |i: usize, j: usize| lambda_from_horocycles(&hs[i], &hs[j]).unwrap();
        let from_lambdas = arc_length_in_triangle(&lam(1, 2), &lam(0, 1), &lam(0, 2)).unwrap();
        let direct = horocycle_arc(&hs[0], &ext(&b), &ext(&c)).unwrap();
        let direct = farey_core::Scalar::to_float(&direct);
        prop_assert!((from_lambdas - direct).abs() <= 1e-9 * direct.max(1.0));
    }
}
