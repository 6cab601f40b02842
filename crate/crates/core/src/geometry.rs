//! Möbius maps, horocycles, shears of ideal quadrilaterals and lambda lengths
//! in the upper half-plane.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::farey::{ExtRat, GeodesicEdge};
use crate::real::{ln_rational, Point, Scalar};

/// `x -> (a x + b) / (c x + d)` with `ad - bc != 0`.
#[derive(Clone, Debug)]
pub struct Mobius<S> {
    pub a: S,
    pub b: S,
    pub c: S,
    pub d: S,
}

impl<S: Scalar> Mobius<S> {
    pub fn new(a: S, b: S, c: S, d: S) -> Result<Self> {
        let m = Self { a, b, c, d };
        if m.det().is_zero() {
            return Err(Error::DegenerateMobius);
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        Self {
            a: S::one(),
            b: S::zero(),
            c: S::zero(),
            d: S::one(),
        }
    }

    pub fn det(&self) -> S {
        self.a.clone() * self.d.clone() - self.b.clone() * self.c.clone()
    }

    pub fn apply(&self, x: &Point<S>) -> Point<S> {
        let (p, q) = x.homogeneous();
        let num = self.a.clone() * p.clone() + self.b.clone() * q.clone();
        let den = self.c.clone() * p + self.d.clone() * q;
        Point::from_homogeneous(num, den).expect("nondegenerate map")
    }

    pub fn inverse(&self) -> Self {
        Self {
            a: self.d.clone(),
            b: -self.b.clone(),
            c: -self.c.clone(),
            d: self.a.clone(),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let (a, b, c, d) = (&self.a, &self.b, &self.c, &self.d);
        let (e, f, g, h) = (&other.a, &other.b, &other.c, &other.d);
        Self {
            a: a.clone() * e.clone() + b.clone() * g.clone(),
            b: a.clone() * f.clone() + b.clone() * h.clone(),
            c: c.clone() * e.clone() + d.clone() * g.clone(),
            d: c.clone() * f.clone() + d.clone() * h.clone(),
        }
    }

    /// Equality as maps, i.e. up to a common nonzero factor.
    pub fn eq_projective(&self, other: &Self) -> bool {
        let lhs = [&self.a, &self.b, &self.c, &self.d];
        let rhs = [&other.a, &other.b, &other.c, &other.d];
        (0..4).all(|i| {
            (0..4).all(|j| lhs[i].clone() * rhs[j].clone() == lhs[j].clone() * rhs[i].clone())
        })
    }

    /// The map sending `z1, z2, z3` to `0, 1, inf`.
    fn to_zero_one_inf(z: [&Point<S>; 3]) -> Result<Self> {
        let one = S::one;
        let zero = S::zero;
        let m = match z {
            [Point::Infinity, Point::Finite(z2), Point::Finite(z3)] => {
                Self::new(zero(), z2.clone() - z3.clone(), one(), -z3.clone())
            }
            [Point::Finite(z1), Point::Infinity, Point::Finite(z3)] => {
                Self::new(one(), -z1.clone(), one(), -z3.clone())
            }
            [Point::Finite(z1), Point::Finite(z2), Point::Infinity] => {
                Self::new(one(), -z1.clone(), zero(), z2.clone() - z1.clone())
            }
            [Point::Finite(z1), Point::Finite(z2), Point::Finite(z3)] => {
                let k = z2.clone() - z3.clone();
                let l = z2.clone() - z1.clone();
                Self::new(
                    k.clone(),
                    -z1.clone() * k,
                    l.clone(),
                    -z3.clone() * l,
                )
            }
            _ => Err(Error::RepeatedPoints),
        };
        m.map_err(|_| Error::RepeatedPoints)
    }

    /// The unique map sending `src[i]` to `dst[i]`.
    pub fn from_triples(src: [&Point<S>; 3], dst: [&Point<S>; 3]) -> Result<Self> {
        let f = Self::to_zero_one_inf(src)?;
        let g = Self::to_zero_one_inf(dst)?;
        Ok(g.inverse().compose(&f))
    }
}

impl Mobius<BigRational> {
    pub fn apply_ext(&self, x: &ExtRat) -> ExtRat {
        self.apply(&Point::from_ext(x)).to_ext()
    }
}

impl<S: Scalar> PartialEq for Mobius<S> {
    fn eq(&self, other: &Self) -> bool {
        self.eq_projective(other)
    }
}

/// Möbius map sending the vertices `src` to the points `dst`.
pub fn mobius_from_triples<S: Scalar>(
    src: (&ExtRat, &ExtRat, &ExtRat),
    dst: (&Point<S>, &Point<S>, &Point<S>),
) -> Result<Mobius<S>> {
    let src = [
        Point::from_ext(src.0),
        Point::from_ext(src.1),
        Point::from_ext(src.2),
    ];
    Mobius::from_triples([&src[0], &src[1], &src[2]], [dst.0, dst.1, dst.2])
}

/// A horocycle tangent to the boundary at `base`.
///
/// `size` is the Euclidean diameter for a finite base and the Euclidean height
/// for the base at infinity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Horocycle<S> {
    pub base: ExtRat,
    pub size: S,
}

impl<S: Scalar> Horocycle<S> {
    pub fn new(base: ExtRat, size: S) -> Result<Self> {
        if !(size > S::zero()) {
            return Err(Error::NonPositive(format!("{size:?}")));
        }
        Ok(Self { base, size })
    }
}

fn det2<S: Scalar>(u: &(S, S), v: &(S, S)) -> S {
    u.0.clone() * v.1.clone() - v.0.clone() * u.1.clone()
}

/// `e^{shear}` of the quadrilateral with diagonal `(x, y)` and apexes `z`, `w`:
/// the image of `w` under the map sending `x, y, z` to `0, inf, -1`.
///
/// When `(x, y, z)` is positively oriented this is the exponential of the
/// signed distance between the two inscribed-circle tangency points on the
/// diagonal, measured from the `z` side.
pub fn quad_multiplier<S: Scalar>(
    x: &Point<S>,
    y: &Point<S>,
    z: &Point<S>,
    w: &Point<S>,
) -> Result<S> {
    let [x, y, z, w] = [x, y, z, w].map(Point::homogeneous);
    let wx = det2(&w, &x);
    let zy = det2(&z, &y);
    let wy = det2(&w, &y);
    let zx = det2(&z, &x);
    let den = wy * zx;
    let num = -(wx * zy);
    if den.is_zero() || num.is_zero() {
        return Err(Error::RepeatedPoints);
    }
    let m = num / den;
    if !(m > S::zero()) {
        return Err(Error::NotQuadrilateral(format!("apex image {m:?}")));
    }
    Ok(m)
}

/// Exact multiplier for a quadrilateral of extended rationals.
pub fn exact_quad_multiplier(x: &ExtRat, y: &ExtRat, z: &ExtRat, w: &ExtRat) -> Result<BigRational> {
    let wx = w.det(x);
    let zy = z.det(y);
    let wy = w.det(y);
    let zx = z.det(x);
    let num: BigInt = -(wx * zy);
    let den: BigInt = wy * zx;
    if den.is_zero() || num.is_zero() {
        return Err(Error::RepeatedPoints);
    }
    let m = BigRational::new(num, den);
    if !m.is_positive() {
        return Err(Error::NotQuadrilateral(format!("{x}, {y}, {z}, {w}")));
    }
    Ok(m)
}

/// Shear of the quadrilateral `x, y, z, w` with diagonal `(x, y)`.
pub fn shear_of_quad(x: &ExtRat, y: &ExtRat, z: &ExtRat, w: &ExtRat) -> Result<f64> {
    Ok(ln_rational(&exact_quad_multiplier(x, y, z, w)?))
}

/// `λ²` for two horocycles; exact over exact sizes.
pub fn lambda_squared<S: Scalar>(h1: &Horocycle<S>, h2: &Horocycle<S>) -> Result<S> {
    if h1.base == h2.base {
        return Err(Error::EqualPoints(h1.base.to_string()));
    }
    match (h1.base.to_rational(), h2.base.to_rational()) {
        (Some(x), Some(y)) => {
            let gap = S::from_rational(&(x - y));
            Ok(gap.clone() * gap / (h1.size.clone() * h2.size.clone()))
        }
        (None, Some(_)) => Ok(h1.size.clone() / h2.size.clone()),
        (Some(_), None) => Ok(h2.size.clone() / h1.size.clone()),
        (None, None) => unreachable!("bases differ"),
    }
}

/// Lambda length `e^{δ/2}` of the geodesic joining the two base points.
pub fn lambda_from_horocycles<S: Scalar>(h1: &Horocycle<S>, h2: &Horocycle<S>) -> Result<f64> {
    Ok(lambda_squared(h1, h2)?.to_float().sqrt())
}

fn require_positive<S: Scalar>(xs: &[&S]) -> Result<()> {
    match xs.iter().find(|x| !(**x > &S::zero())) {
        Some(x) => Err(Error::NonPositive(format!("{x:?}"))),
        None => Ok(()),
    }
}

/// Horocyclic arc at a vertex inside an ideal triangle, from the lambda
/// length opposite the vertex and the two incident ones.
pub fn arc_length_in_triangle<S: Scalar>(lam_opp: &S, lam_left: &S, lam_right: &S) -> Result<S> {
    require_positive(&[lam_opp, lam_left, lam_right])?;
    Ok(lam_opp.clone() / (lam_left.clone() * lam_right.clone()))
}

/// Ptolemy relation: the diagonal `λ_bd` from the four sides and `λ_ac`.
pub fn ptolemy<S: Scalar>(lam_ab: &S, lam_bc: &S, lam_cd: &S, lam_da: &S, lam_ac: &S) -> Result<S> {
    require_positive(&[lam_ab, lam_bc, lam_cd, lam_da, lam_ac])?;
    Ok((lam_ab.clone() * lam_cd.clone() + lam_bc.clone() * lam_da.clone()) / lam_ac.clone())
}

/// Length of the arc of `h` between the geodesics from its base to `b` and
/// to `c`. Exact over exact sizes.
pub fn horocycle_arc<S: Scalar>(h: &Horocycle<S>, b: &ExtRat, c: &ExtRat) -> Result<S> {
    if &h.base == b || &h.base == c || b == c {
        return Err(Error::RepeatedPoints);
    }
    // Send the base to infinity by z -> -1/(z - a); the horocycle becomes the
    // line at height 1/size.
    let (tb, tc, height) = match h.base.to_rational() {
        None => (
            b.to_rational().expect("finite"),
            c.to_rational().expect("finite"),
            h.size.clone(),
        ),
        Some(a) => {
            let send = |v: &ExtRat| match v.to_rational() {
                Some(x) => -(x - a.clone()).recip(),
                None => BigRational::zero(),
            };
            (send(b), send(c), S::one() / h.size.clone())
        }
    };
    Ok(S::from_rational(&(tb - tc).abs()) / height)
}

/// Radius of `e` and the horocycle height after sending `h`'s base to
/// infinity.
fn normalized_radius<S: Scalar>(e: &GeodesicEdge, h: &Horocycle<S>) -> Result<(f64, f64)> {
    if e.has_endpoint(&h.base) {
        return Err(Error::InfinitePenetration(e.to_string()));
    }
    let (lo, hi) = e.endpoints();
    let (span, height) = match h.base.to_rational() {
        None => {
            let gap = hi.to_rational().expect("finite") - lo.to_rational().expect("finite");
            (gap, h.size.to_float())
        }
        Some(a) => {
            let send = |v: &ExtRat| match v.to_rational() {
                Some(x) => -(x - a.clone()).recip(),
                None => BigRational::zero(),
            };
            (send(hi) - send(lo), 1.0 / h.size.to_float())
        }
    };
    Ok((Scalar::to_float(&span.abs()) / 2.0, height))
}

/// Hyperbolic length of `e` inside the open horoball bounded by `h`.
pub fn geodesic_length_in_horoball<S: Scalar>(e: &GeodesicEdge, h: &Horocycle<S>) -> Result<f64> {
    let (r, t) = normalized_radius(e, h)?;
    Ok(if r <= t { 0.0 } else { 2.0 * (r / t).acosh() })
}

/// How far `e` reaches past the horocycle `h`, zero if they are disjoint.
pub fn penetration_depth<S: Scalar>(e: &GeodesicEdge, h: &Horocycle<S>) -> Result<f64> {
    let (r, t) = normalized_radius(e, h)?;
    Ok((r / t).ln().max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> ExtRat {
        s.parse().unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn pt(s: &str) -> Point<BigRational> {
        Point::from_ext(&r(s))
    }

    #[test]
    fn apply_examples() {
        let id = Mobius::<BigRational>::identity();
        assert_eq!(id.apply_ext(&r("7/3")), r("7/3"));
        let inv = Mobius::new(q(0, 1), q(-1, 1), q(1, 1), q(0, 1)).unwrap();
        assert_eq!(inv.apply_ext(&r("0")), ExtRat::infinity());
        let shift = Mobius::new(q(1, 1), q(1, 1), q(0, 1), q(1, 1)).unwrap();
        assert_eq!(shift.apply_ext(&ExtRat::infinity()), ExtRat::infinity());
        assert!(Mobius::new(q(1, 1), q(2, 1), q(2, 1), q(4, 1)).is_err());
    }

    #[test]
    fn triples_examples() {
        let (z, o, i) = (r("0"), r("1"), r("inf"));
        let m = mobius_from_triples((&z, &o, &i), (&pt("0"), &pt("1"), &pt("inf"))).unwrap();
        assert_eq!(m, Mobius::identity());
        let m = mobius_from_triples((&z, &o, &i), (&pt("-1"), &pt("0"), &pt("inf"))).unwrap();
        assert_eq!(m, Mobius::new(q(1, 1), q(-1, 1), q(0, 1), q(1, 1)).unwrap());
        let m = mobius_from_triples((&z, &o, &i), (&pt("0"), &pt("inf"), &pt("-1"))).unwrap();
        assert_eq!(m.apply_ext(&o), ExtRat::infinity());
        assert_eq!(m.apply_ext(&z), r("0"));
        assert_eq!(m.apply_ext(&i), r("-1"));
        assert_eq!(
            mobius_from_triples((&z, &z, &i), (&pt("0"), &pt("1"), &pt("inf"))),
            Err(Error::RepeatedPoints)
        );
    }

    #[test]
    fn shear_examples() {
        let s = |a: &str, b: &str, c: &str, d: &str| shear_of_quad(&r(a), &r(b), &r(c), &r(d));
        assert_eq!(s("0", "inf", "-1", "1").unwrap(), 0.0);
        assert!((s("0", "inf", "-1", "2").unwrap() - 2f64.ln()).abs() < 1e-15);
        assert!((s("0", "inf", "-2", "1").unwrap() + 2f64.ln()).abs() < 1e-15);
        assert!(matches!(s("0", "inf", "-1", "-2"), Err(Error::NotQuadrilateral(_))));
    }

    #[test]
    fn float_multiplier_matches_exact() {
        let pts = ["1/3", "5/2", "-7/4", "1"].map(|s| Point::<f64>::from_ext(&r(s)));
        let m = quad_multiplier(&pts[0], &pts[1], &pts[2], &pts[3]).unwrap();
        let exact = exact_quad_multiplier(&r("1/3"), &r("5/2"), &r("-7/4"), &r("1")).unwrap();
        assert!((m - Scalar::to_float(&exact)).abs() < 1e-12);
    }

    #[test]
    fn lambda_examples() {
        let h = |b: &str, s: i64| Horocycle::new(r(b), q(s, 1)).unwrap();
        assert_eq!(lambda_from_horocycles(&h("0", 1), &h("inf", 1)).unwrap(), 1.0);
        assert_eq!(lambda_from_horocycles(&h("0", 1), &h("1", 1)).unwrap(), 1.0);
        let e2 = Horocycle::new(r("inf"), std::f64::consts::E.powi(2)).unwrap();
        let z = Horocycle::new(r("0"), 1.0).unwrap();
        assert!((lambda_from_horocycles(&z, &e2).unwrap() - std::f64::consts::E).abs() < 1e-12);
        assert!(lambda_from_horocycles(&z, &z).is_err());
        assert!(Horocycle::new(r("0"), 0.0).is_err());
    }

    #[test]
    fn arc_examples() {
        let f = |a: i64, b: i64, c: i64| arc_length_in_triangle(&q(a, 1), &q(b, 1), &q(c, 1));
        assert_eq!(f(1, 1, 1).unwrap(), q(1, 1));
        assert_eq!(f(2, 2, 2).unwrap(), q(1, 2));
        assert_eq!(f(3, 2, 1).unwrap(), q(3, 2));
        assert!(f(0, 1, 1).is_err());
    }

    #[test]
    fn ptolemy_examples() {
        let two = q(2, 1);
        assert_eq!(ptolemy(&two, &two, &two, &two, &two).unwrap(), q(4, 1));
        let one = q(1, 1);
        assert_eq!(ptolemy(&one, &one, &one, &one, &one).unwrap(), q(2, 1));
        let bd = ptolemy(&two, &two, &two, &two, &two).unwrap();
        assert_eq!(ptolemy(&two, &two, &two, &two, &bd).unwrap(), two);
        assert!(ptolemy(&two, &two, &q(-1, 1), &two, &two).is_err());
    }

    #[test]
    fn horoball_examples() {
        let e = |a: &str, b: &str| GeodesicEdge::new(r(a), r(b)).unwrap();
        let inf = |t: f64| Horocycle::new(ExtRat::infinity(), t).unwrap();
        assert_eq!(geodesic_length_in_horoball(&e("-1", "1"), &inf(2.0)).unwrap(), 0.0);
        let l = geodesic_length_in_horoball(&e("-2", "2"), &inf(1.0)).unwrap();
        assert!((l - 2.0 * 2f64.acosh()).abs() < 1e-12);
        assert!((l - 2.6339).abs() < 1e-4);
        assert!(matches!(
            geodesic_length_in_horoball(&e("0", "inf"), &inf(1.0)),
            Err(Error::InfinitePenetration(_))
        ));
        let d = penetration_depth(&e("-2", "2"), &inf(1.0)).unwrap();
        assert!((d - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn horocycle_arc_on_canonical_triangle() {
        // Tangent horocycles on (0, 1, inf) cut arcs of length 1.
        let at_inf = Horocycle::new(ExtRat::infinity(), q(1, 1)).unwrap();
        assert_eq!(horocycle_arc(&at_inf, &r("0"), &r("1")).unwrap(), q(1, 1));
        let at_zero = Horocycle::new(r("0"), q(1, 1)).unwrap();
        assert_eq!(horocycle_arc(&at_zero, &r("1"), &r("inf")).unwrap(), q(1, 1));
        let at_half = Horocycle::new(r("1/2"), q(1, 4)).unwrap();
        assert_eq!(horocycle_arc(&at_half, &r("0"), &r("1")).unwrap(), q(1, 1));
    }
}
