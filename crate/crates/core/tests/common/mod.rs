#![allow(dead_code)]

pub mod oracle;

use farey_core::farey::farey_edges_in_window;
use farey_core::triangulation::random_flips;
use farey_core::{Decoration, ExtRat, GeodesicEdge, LambdaAssignment, Real, Shear, ShearFunction, Window, WindowTriangulation};
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn r(s: &str) -> ExtRat {
    s.parse().unwrap()
}

pub fn edge(a: &str, b: &str) -> GeodesicEdge {
    GeodesicEdge::new(r(a), r(b)).unwrap()
}

pub fn window(n: u64, d: u64) -> Window {
    Window::new(n, d, true).unwrap()
}

/// A random rational in `[1/m, m]` with small denominator.
pub fn rational_in<R: Rng>(m: i64, rng: &mut R) -> BigRational {
    let den = rng.gen_range(1..=12i64);
    let lo = q(1, m);
    let hi = q(m, 1);
    let num = rng.gen_range(1..=m * m * den);
    let x = q(num, den);
    if x < lo {
        lo
    } else if x > hi {
        hi
    } else {
        x
    }
}

/// A finitely supported shear function with `k` random rational multipliers
/// on Farey edges of `w`.
pub fn random_sparse_shear<R: Rng>(w: &Window, k: usize, rng: &mut R) -> ShearFunction {
    let edges = farey_edges_in_window(w);
    let choices = [q(1, 2), q(2, 3), q(3, 2), q(2, 1), q(1, 3), q(3, 1), q(5, 4)];
    let picked: Vec<_> = edges.choose_multiple(rng, k).cloned().collect();
    ShearFunction::sparse(
        picked
            .into_iter()
            .map(|e| (e, Shear::mult(choices.choose(rng).unwrap().clone()).unwrap())),
    )
    .unwrap()
}

/// Farey on `w` after up to `depth` random moves.
pub fn random_triangulation<R: Rng>(w: &Window, depth: usize, rng: &mut R) -> WindowTriangulation {
    let f = WindowTriangulation::farey(w).unwrap();
    let steps = rng.gen_range(0..=depth);
    random_flips(&f, steps, 3, rng).unwrap().0
}

pub fn random_decoration<R: Rng>(t: &WindowTriangulation, rng: &mut R) -> Decoration {
    Decoration::new(t.vertices().map(|v| {
        let base = if v.is_infinite() {
            q(1, 1)
        } else {
            BigRational::new(1.into(), v.den() * v.den())
        };
        (v.clone(), Real::Exact(base * rational_in(3, rng)))
    }))
    .unwrap()
}

pub fn random_pinched<R: Rng>(t: &WindowTriangulation, m: i64, rng: &mut R) -> LambdaAssignment {
    LambdaAssignment::new(t.edges().map(|e| (e.clone(), Real::Exact(rational_in(m, rng))))).unwrap()
}
