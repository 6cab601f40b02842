//! The developing map of a shear function: the vertex map `h_s` that places
//! each Farey triangle so that consecutive triangles have the prescribed
//! shear.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use super::{pair_cmp, Mu, ShearFunction};
use crate::error::{Error, Result};
use crate::farey::{
    is_farey_neighbor, opposite_vertices, positively_oriented, walk_window, ExtRat, GeodesicEdge,
    Pair, Window, P_INF, P_ONE, P_ZERO,
};
use crate::geometry::{exact_quad_multiplier, quad_multiplier, Mobius};
use crate::real::{Arith, Point};

/// The image of one vertex.
#[derive(Clone, Debug, PartialEq)]
pub enum Image {
    Exact(ExtRat),
    /// `f64::INFINITY` stands for the point at infinity.
    Float(f64),
}

impl Image {
    pub fn to_f64(&self) -> f64 {
        match self {
            Image::Exact(v) => v.to_f64(),
            Image::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&ExtRat> {
        match self {
            Image::Exact(v) => Some(v),
            Image::Float(_) => None,
        }
    }

    fn to_point(&self) -> Point<f64> {
        match self.to_f64() {
            x if x.is_infinite() => Point::Infinity,
            x => Point::Finite(x),
        }
    }
}

impl std::fmt::Display for Image {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Image::Exact(v) => write!(f, "{v}"),
            Image::Float(x) if x.is_infinite() => write!(f, "inf"),
            Image::Float(x) => write!(f, "{x:?}"),
        }
    }
}

impl Serialize for Image {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Image::Exact(v) => v.serialize(serializer),
            Image::Float(x) if x.is_infinite() => serializer.serialize_str("1/0"),
            Image::Float(x) => serializer.serialize_f64(*x),
        }
    }
}

impl<'de> Deserialize<'de> for Image {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Str(String),
            Num(f64),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Str(s) => s.parse().map(Image::Exact).map_err(serde::de::Error::custom),
            Raw::Num(x) => Ok(Image::Float(x)),
        }
    }
}

/// Dense slot: `(num, den)` with `den >= 0`, or one of the markers below.
type Slot = (i64, i64);
const EMPTY: i64 = -1;
const BIG: i64 = -2;

#[derive(Clone, Debug)]
enum Store {
    Exact { slots: Vec<Slot>, big: Vec<ExtRat> },
    Float(Vec<(f64, f64)>),
}

/// A vertex map on a finite domain, recorded with the triple it fixes.
#[derive(Clone, Debug)]
pub struct VertexMap {
    normalization: [ExtRat; 3],
    domain: Domain,
}

#[derive(Clone, Debug)]
enum Domain {
    Dense { window: Window, store: Store },
    Sparse(BTreeMap<ExtRat, Image>),
}

/// Projective integer point `(p, q)`.
#[derive(Clone, Debug)]
enum Proj {
    Small(i64, i64),
    Big(BigInt, BigInt),
}

impl Proj {
    fn big(&self) -> (BigInt, BigInt) {
        match self {
            Proj::Small(p, q) => (BigInt::from(*p), BigInt::from(*q)),
            Proj::Big(p, q) => (p.clone(), q.clone()),
        }
    }

    fn to_ext(&self) -> ExtRat {
        let (p, q) = self.big();
        ExtRat::new(p, q).expect("nonzero point")
    }

    fn from_ext(v: &ExtRat) -> Self {
        match v.to_pair() {
            Some((p, q)) => Proj::Small(p, q),
            None => Proj::Big(v.num().clone(), v.den().clone()),
        }
    }
}

fn canonical_big(mut p: BigInt, mut q: BigInt) -> Option<Proj> {
    if p.is_zero() && q.is_zero() {
        return None;
    }
    let g = p.gcd(&q);
    if !g.is_one() {
        p /= &g;
        q /= &g;
    }
    if q.is_negative() || (q.is_zero() && p.is_negative()) {
        p = -p;
        q = -q;
    }
    Some(match (p.to_i64(), q.to_i64()) {
        (Some(a), Some(b)) => Proj::Small(a, b),
        _ => Proj::Big(p, q),
    })
}

fn canonical_i128(p: i128, q: i128) -> Option<Proj> {
    if p == 0 && q == 0 {
        return None;
    }
    let g = p.gcd(&q);
    let (mut p, mut q) = (p / g, q / g);
    if q < 0 || (q == 0 && p < 0) {
        p = -p;
        q = -q;
    }
    Some(match (i64::try_from(p), i64::try_from(q)) {
        (Ok(a), Ok(b)) => Proj::Small(a, b),
        _ => Proj::Big(p.into(), q.into()),
    })
}

/// `alpha u + beta v` for projective points, where `alpha = m2 [z, y]` and
/// `beta = m1 [z, x]`: the point `w` with
/// `-[w, x][z, y] / ([w, y][z, x]) = m1 / m2`.
fn place(x: &Proj, y: &Proj, z: &Proj, m1: &BigInt, m2: &BigInt) -> Option<Proj> {
    if let (Proj::Small(x0, x1), Proj::Small(y0, y1), Proj::Small(z0, z1), Some(m1), Some(m2)) =
        (x, y, z, m1.to_i64(), m2.to_i64())
    {
        let fast = || -> Option<(i128, i128)> {
            let br = |a: i64, b: i64, c: i64, d: i64| {
                (a as i128 * d as i128).checked_sub(c as i128 * b as i128)
            };
            let zy = br(*z0, *z1, *y0, *y1)?;
            let zx = br(*z0, *z1, *x0, *x1)?;
            let alpha = zy.checked_mul(m2 as i128)?;
            let beta = zx.checked_mul(m1 as i128)?;
            let p = alpha.checked_mul(*x0 as i128)?.checked_add(beta.checked_mul(*y0 as i128)?)?;
            let q = alpha.checked_mul(*x1 as i128)?.checked_add(beta.checked_mul(*y1 as i128)?)?;
            Some((p, q))
        };
        if let Some((p, q)) = fast() {
            return canonical_i128(p, q);
        }
    }
    let ((x0, x1), (y0, y1), (z0, z1)) = (x.big(), y.big(), z.big());
    let alpha = (&z0 * &y1 - &y0 * &z1) * m2;
    let beta = (&z0 * &x1 - &x0 * &z1) * m1;
    canonical_big(&alpha * &x0 + &beta * &y0, &alpha * &x1 + &beta * &y1)
}

fn place_float(x: (f64, f64), y: (f64, f64), z: (f64, f64), log_mu: f64) -> (f64, f64) {
    let br = |u: (f64, f64), v: (f64, f64)| u.0 * v.1 - v.0 * u.1;
    let alpha = br(z, y);
    let beta = br(z, x) * log_mu.exp();
    let p = alpha * x.0 + beta * y.0;
    let q = alpha * x.1 + beta * y.1;
    normalize_float(p, q)
}

fn normalize_float(p: f64, q: f64) -> (f64, f64) {
    if q == 0.0 {
        (1.0, 0.0)
    } else {
        (p / q, 1.0)
    }
}

fn float_value((p, q): (f64, f64)) -> f64 {
    if q == 0.0 {
        f64::INFINITY
    } else {
        p / q
    }
}

/// A point compared cheaply when it fits in machine words.
#[derive(Clone, Debug)]
enum Val {
    Pair(Pair),
    Big(ExtRat),
    Float(f64),
}

impl Val {
    fn cmp(&self, other: &Val) -> Ordering {
        match (self, other) {
            (Val::Pair(a), Val::Pair(b)) => pair_cmp(*a, *b),
            (Val::Float(_), _) | (_, Val::Float(_)) => self.to_f64().total_cmp(&other.to_f64()),
            _ => self.to_ext().cmp(&other.to_ext()),
        }
    }

    fn to_ext(&self) -> ExtRat {
        match self {
            Val::Pair(p) => ExtRat::from_pair(*p),
            Val::Big(v) => v.clone(),
            Val::Float(_) => unreachable!("float values compare as floats"),
        }
    }

    fn to_f64(&self) -> f64 {
        match self {
            Val::Pair((p, q)) if *q == 0 => f64::INFINITY,
            Val::Pair((p, q)) => *p as f64 / *q as f64,
            Val::Big(v) => v.to_f64(),
            Val::Float(x) => *x,
        }
    }
}

impl std::fmt::Display for Val {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Val::Float(x) => write!(f, "{x:?}"),
            v => write!(f, "{}", v.to_ext()),
        }
    }
}

/// Circular order check: the cyclic sequence of images, read in domain
/// order, must descend exactly once.
fn count_descents(mut seq: impl Iterator<Item = (Val, Val)>) -> Result<()> {
    let Some((mut prev_dom, first)) = seq.next() else {
        return Ok(());
    };
    let mut prev = first.clone();
    let mut len = 1usize;
    let mut descents = 0usize;
    for (dom, img) in seq {
        len += 1;
        match prev.cmp(&img) {
            Ordering::Less => {}
            Ordering::Greater => descents += 1,
            Ordering::Equal => {
                return Err(Error::DegenerateDevelopment(format!(
                    "{prev_dom} and {dom} both map to {img}"
                )));
            }
        }
        prev = img;
        prev_dom = dom;
    }
    if prev.cmp(&first) == Ordering::Greater {
        descents += 1;
    }
    if len >= 3 && descents != 1 {
        return Err(Error::DegenerateDevelopment(format!(
            "images do not preserve the circular order ({descents} descents)"
        )));
    }
    Ok(())
}

/// Knobs for [`develop`].
#[derive(Clone, Debug, PartialEq)]
pub struct DevelopOptions {
    /// A Farey triangle fixed pointwise by the result.
    pub normalization: [ExtRat; 3],
    pub arith: Arith,
}

impl Default for DevelopOptions {
    fn default() -> Self {
        Self {
            normalization: [ExtRat::zero(), ExtRat::one(), ExtRat::infinity()],
            arith: Arith::Exact,
        }
    }
}

fn check_normalization(w: &Window, t: &[ExtRat; 3]) -> Result<()> {
    let [a, b, c] = t;
    let farey = is_farey_neighbor(a, b)? && is_farey_neighbor(b, c)? && is_farey_neighbor(a, c)?;
    if !farey {
        return Err(Error::InvalidArgument(format!(
            "normalization ({a}, {b}, {c}) is not a Farey triangle"
        )));
    }
    if let Some(v) = t.iter().find(|v| !w.contains(v)) {
        return Err(Error::OutsideDomain(v.to_string()));
    }
    Ok(())
}

/// Develops `s` over the window: the triangle `(0, 1, inf)` is placed at
/// itself, every other window triangle is placed across its parent edge with
/// that edge's shear, and the result is post-composed with the Möbius map
/// fixing the requested normalization. Fails unless the result preserves the
/// circular order on the window.
pub fn develop(s: &ShearFunction, w: &Window, opts: &DevelopOptions) -> Result<VertexMap> {
    w.validate()?;
    if !w.include_infinity {
        return Err(Error::InvalidWindow("development needs infinity in the window".into()));
    }
    check_normalization(w, &opts.normalization)?;
    let n = w.slot_count();
    let slot = |p: Pair| w.slot_of_pair(p).expect("window vertex");
    let mut store = match opts.arith {
        Arith::Exact => {
            let mut slots = vec![(0, EMPTY); n];
            for p in [P_ZERO, P_ONE, P_INF] {
                slots[slot(p)] = p;
            }
            let mut big = Vec::new();
            let mut err = None;
            walk_window(w, |[x, y, z], far| {
                if err.is_some() {
                    return;
                }
                let get = |p: Pair| match slots[slot(p)] {
                    (i, BIG) => Proj::from_ext(&big[i as usize]),
                    (a, b) => Proj::Small(a, b),
                };
                let (m1, m2) = match s.mu_pair(x, y) {
                    Mu::One => (BigInt::one(), BigInt::one()),
                    Mu::Small(a, b) => (a.into(), b.into()),
                    Mu::Big(m) => (m.numer().clone(), m.denom().clone()),
                    Mu::Float(_) => {
                        err = Some(Error::ExactUnavailable(format!(
                            "irrational shear on {}",
                            edge_of(x, y)
                        )));
                        return;
                    }
                };
                match place(&get(x), &get(y), &get(z), &m1, &m2) {
                    Some(Proj::Small(a, b)) => slots[slot(far)] = (a, b),
                    Some(p @ Proj::Big(..)) => {
                        slots[slot(far)] = (big.len() as i64, BIG);
                        big.push(p.to_ext());
                    }
                    None => {
                        err = Some(Error::DegenerateDevelopment(format!(
                            "triangle across {} collapses",
                            edge_of(x, y)
                        )))
                    }
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
            Store::Exact { slots, big }
        }
        Arith::Float => {
            let mut vals = vec![(f64::NAN, f64::NAN); n];
            for p in [P_ZERO, P_ONE, P_INF] {
                vals[slot(p)] = (p.0 as f64, p.1 as f64);
            }
            walk_window(w, |[x, y, z], far| {
                let v = place_float(vals[slot(x)], vals[slot(y)], vals[slot(z)], s.mu_pair(x, y).log());
                vals[slot(far)] = v;
            });
            Store::Float(vals)
        }
    };
    renormalize(w, &mut store, &opts.normalization)?;
    let map = VertexMap {
        normalization: opts.normalization.clone(),
        domain: Domain::Dense {
            window: w.clone(),
            store,
        },
    };
    map.check_monotone()?;
    Ok(map)
}

fn edge_of(x: Pair, y: Pair) -> GeodesicEdge {
    GeodesicEdge::new(ExtRat::from_pair(x), ExtRat::from_pair(y)).expect("distinct")
}

/// Post-composes with the Möbius map sending the current images of the
/// normalization triple back to the triple itself.
fn renormalize(w: &Window, store: &mut Store, t: &[ExtRat; 3]) -> Result<()> {
    let base = [ExtRat::zero(), ExtRat::one(), ExtRat::infinity()];
    if *t == base {
        return Ok(());
    }
    let slot = |v: &ExtRat| w.slot_of(v).expect("window vertex");
    match store {
        Store::Exact { slots, big } => {
            let img = |v: &ExtRat| -> Point<BigRational> {
                match slots[slot(v)] {
                    (i, BIG) => Point::from_ext(&big[i as usize]),
                    p => Point::from_ext(&ExtRat::from_pair(p)),
                }
            };
            let src = [img(&t[0]), img(&t[1]), img(&t[2])];
            let dst = t.clone().map(|v| Point::from_ext(&v));
            let m = Mobius::from_triples([&src[0], &src[1], &src[2]], [&dst[0], &dst[1], &dst[2]])
                .map_err(|_| Error::DegenerateDevelopment("normalization triangle collapsed".into()))?;
            // Clear denominators so the map acts on integer pairs.
            let l = [&m.a, &m.b, &m.c, &m.d]
                .iter()
                .fold(BigInt::one(), |l, x| l.lcm(x.denom()));
            let int = |x: &BigRational| x.numer() * (&l / x.denom());
            let (a, b, c, d) = (int(&m.a), int(&m.b), int(&m.c), int(&m.d));
            let apply = |p: BigInt, q: BigInt| {
                canonical_big(&a * &p + &b * &q, &c * &p + &d * &q).expect("invertible map")
            };
            for v in big.iter_mut() {
                *v = apply(v.num().clone(), v.den().clone()).to_ext();
            }
            for s in slots.iter_mut() {
                if s.1 == EMPTY || s.1 == BIG {
                    continue;
                }
                match apply(s.0.into(), s.1.into()) {
                    Proj::Small(p, q) => *s = (p, q),
                    Proj::Big(p, q) => {
                        *s = (big.len() as i64, BIG);
                        big.push(ExtRat::new(p, q).expect("nonzero"));
                    }
                }
            }
        }
        Store::Float(vals) => {
            let img = |v: &ExtRat| match vals[slot(v)] {
                (_, q) if q == 0.0 => Point::Infinity,
                (p, _) => Point::Finite(p),
            };
            let src = [img(&t[0]), img(&t[1]), img(&t[2])];
            let dst = t.clone().map(|v| Point::<f64>::from_ext(&v));
            let m = Mobius::from_triples([&src[0], &src[1], &src[2]], [&dst[0], &dst[1], &dst[2]])
                .map_err(|_| Error::DegenerateDevelopment("normalization triangle collapsed".into()))?;
            for v in vals.iter_mut() {
                if v.0.is_nan() {
                    continue;
                }
                *v = normalize_float(m.a * v.0 + m.b * v.1, m.c * v.0 + m.d * v.1);
            }
        }
    }
    Ok(())
}

impl VertexMap {
    /// A map on an explicit finite domain.
    pub fn from_images(
        normalization: [ExtRat; 3],
        images: impl IntoIterator<Item = (ExtRat, Image)>,
    ) -> Self {
        Self {
            normalization,
            domain: Domain::Sparse(images.into_iter().collect()),
        }
    }

    /// The restriction of an exact map `f` to the window vertices.
    pub fn from_exact_fn(w: &Window, normalization: [ExtRat; 3], f: impl Fn(&ExtRat) -> ExtRat) -> Self {
        Self::from_images(normalization, w.vertices().map(|v| {
            let img = f(&v);
            (v, Image::Exact(img))
        }))
    }

    pub fn normalization(&self) -> &[ExtRat; 3] {
        &self.normalization
    }

    pub fn window(&self) -> Option<&Window> {
        match &self.domain {
            Domain::Dense { window, .. } => Some(window),
            Domain::Sparse(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        match &self.domain {
            Domain::Dense { store, .. } => matches!(store, Store::Exact { .. }),
            Domain::Sparse(m) => m.values().all(|v| matches!(v, Image::Exact(_))),
        }
    }

    pub fn contains(&self, v: &ExtRat) -> bool {
        match &self.domain {
            Domain::Dense { window, .. } => window.contains(v),
            Domain::Sparse(m) => m.contains_key(v),
        }
    }

    pub fn image(&self, v: &ExtRat) -> Option<Image> {
        match &self.domain {
            Domain::Dense { window, store } => {
                if !window.contains(v) {
                    return None;
                }
                let i = window.slot_of(v)?;
                Some(match store {
                    Store::Exact { slots, big } => match slots[i] {
                        (_, EMPTY) => return None,
                        (j, BIG) => Image::Exact(big[j as usize].clone()),
                        p => Image::Exact(ExtRat::from_pair(p)),
                    },
                    Store::Float(vals) => Image::Float(float_value(vals[i])),
                })
            }
            Domain::Sparse(m) => m.get(v).cloned(),
        }
    }

    /// Exact image as a machine pair, for fast scans over dense maps.
    pub(crate) fn image_pair(&self, v: Pair) -> Option<Pair> {
        match &self.domain {
            Domain::Dense {
                window,
                store: Store::Exact { slots, .. },
            } if window.contains_pair(v) => match slots[window.slot_of_pair(v)?] {
                (_, EMPTY) | (_, BIG) => None,
                p => Some(p),
            },
            _ => None,
        }
    }

    pub fn exact_image(&self, v: &ExtRat) -> Option<ExtRat> {
        match self.image(v)? {
            Image::Exact(x) => Some(x),
            Image::Float(_) => None,
        }
    }

    /// The domain in increasing order with its images.
    pub fn iter(&self) -> Box<dyn Iterator<Item = (ExtRat, Image)> + '_> {
        match &self.domain {
            Domain::Dense { window, .. } => Box::new(window.vertices().map(move |v| {
                let img = self.image(&v).expect("dense map is total on its window");
                (v, img)
            })),
            Domain::Sparse(m) => Box::new(m.iter().map(|(k, v)| (k.clone(), v.clone()))),
        }
    }

    pub fn len(&self) -> usize {
        match &self.domain {
            Domain::Dense { window, .. } => window.vertex_count(),
            Domain::Sparse(m) => m.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Errors unless the images are pairwise distinct and in the same
    /// circular order as the domain.
    pub fn check_monotone(&self) -> Result<()> {
        match &self.domain {
            Domain::Dense {
                window,
                store: Store::Exact { slots, big },
            } => count_descents(window.sorted_pairs().map(|p| {
                let img = match slots[window.slot_of_pair(p).expect("window vertex")] {
                    (i, BIG) => Val::Big(big[i as usize].clone()),
                    q => Val::Pair(q),
                };
                (Val::Pair(p), img)
            })),
            _ => count_descents(self.iter().map(|(v, img)| {
                let img = match img {
                    Image::Exact(x) => Val::Big(x),
                    Image::Float(x) => Val::Float(x),
                };
                (Val::Big(v), img)
            })),
        }
    }

    /// `self ∘ inner` on the domain of `inner`.
    pub fn compose(&self, inner: &VertexMap) -> Result<VertexMap> {
        let images = inner
            .iter()
            .map(|(v, img)| {
                let mid = img
                    .as_exact()
                    .ok_or_else(|| Error::ExactUnavailable("composition needs exact images".into()))?;
                let out = self.image(mid).ok_or_else(|| Error::OutsideDomain(mid.to_string()))?;
                Ok((v, out))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(VertexMap::from_images(inner.normalization.clone(), images))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        Self::deserialize(v).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexMapSpec {
    normalization: [ExtRat; 3],
    pairs: Vec<(ExtRat, Image)>,
}

impl Serialize for VertexMap {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        VertexMapSpec {
            normalization: self.normalization.clone(),
            pairs: self.iter().collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for VertexMap {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let spec = VertexMapSpec::deserialize(deserializer)?;
        Ok(VertexMap::from_images(spec.normalization, spec.pairs))
    }
}

/// Independent breadth-first development over `ExtRat` and exact Möbius
/// maps, used as an oracle for [`develop`]. With a seed the queue is drained
/// in random order; placements are forced, so the result must not change.
pub fn develop_bfs(
    s: &ShearFunction,
    w: &Window,
    normalization: &[ExtRat; 3],
    seed: Option<u64>,
) -> Result<VertexMap> {
    w.validate()?;
    check_normalization(w, normalization)?;
    let mut placed: HashMap<ExtRat, ExtRat> =
        normalization.iter().map(|v| (v.clone(), v.clone())).collect();
    let mut queue: VecDeque<[ExtRat; 3]> = VecDeque::from([normalization.clone()]);
    let mut rng = seed.map(StdRng::seed_from_u64);
    loop {
        let tri = match &mut rng {
            Some(r) if !queue.is_empty() => {
                let i = r.gen_range(0..queue.len());
                queue.swap_remove_back(i)
            }
            _ => queue.pop_front(),
        };
        let Some(tri) = tri else { break };
        for i in 0..3 {
            let (u, v, t) = (&tri[i], &tri[(i + 1) % 3], &tri[(i + 2) % 3]);
            let (a, b) = opposite_vertices(u, v)?;
            let far = if &a == t { b } else { a };
            if !w.contains(&far) || placed.contains_key(&far) {
                continue;
            }
            let (x, y) = if positively_oriented(u, v, t) { (u, v) } else { (v, u) };
            let edge = GeodesicEdge::new(x.clone(), y.clone())?;
            let mu = s
                .shear(&edge)?
                .multiplier()
                .cloned()
                .ok_or_else(|| Error::ExactUnavailable(format!("irrational shear on {edge}")))?;
            let img = |p: &ExtRat| Point::<BigRational>::from_ext(&placed[p]);
            let src = [img(x), img(y), img(t)];
            let dst = [
                Point::Finite(BigRational::zero()),
                Point::Infinity,
                Point::Finite(-BigRational::one()),
            ];
            let m = Mobius::from_triples([&src[0], &src[1], &src[2]], [&dst[0], &dst[1], &dst[2]])
                .map_err(|_| Error::DegenerateDevelopment(format!("triangle at {edge} collapsed")))?;
            let image = m.inverse().apply(&Point::Finite(mu)).to_ext();
            placed.insert(far.clone(), image);
            queue.push_back([x.clone(), far, y.clone()]);
        }
    }
    let map = VertexMap::from_images(
        normalization.clone(),
        placed.into_iter().map(|(k, v)| (k, Image::Exact(v))),
    );
    map.check_monotone()?;
    Ok(map)
}

/// The shear that `h` induces on the Farey edge `e`: the shear of the
/// image of the quadrilateral around `e`.
pub fn shear_from_vertex_map(h: &VertexMap, e: &GeodesicEdge) -> Result<super::Shear> {
    if !e.is_farey() {
        return Err(Error::NotFareyEdge(e.to_string()));
    }
    let (z, w) = opposite_vertices(e.lo(), e.hi())?;
    let (x, y) = if positively_oriented(e.lo(), e.hi(), &z) {
        (e.lo(), e.hi())
    } else {
        (e.hi(), e.lo())
    };
    let img = |v: &ExtRat| h.image(v).ok_or_else(|| Error::OutsideDomain(v.to_string()));
    let imgs = [img(x)?, img(y)?, img(&z)?, img(&w)?];
    if let [Image::Exact(a), Image::Exact(b), Image::Exact(c), Image::Exact(d)] = &imgs {
        return Ok(super::Shear::Mult(exact_quad_multiplier(a, b, c, d)?));
    }
    let [a, b, c, d] = imgs.map(|i| i.to_point());
    Ok(super::Shear::Log(quad_multiplier(&a, &b, &c, &d)?.ln()))
}
