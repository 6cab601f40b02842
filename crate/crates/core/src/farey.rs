//! Extended rationals and the combinatorics of the Farey triangulation.
//!
//! Vertices are reduced fractions `p/q` with `q >= 0`; the single point at
//! infinity is `1/0`. Two vertices span a Farey edge exactly when the
//! determinant `|p s - q r|` equals one, and the two triangles on either side
//! of such an edge have apexes `(p + r)/(q + s)` and `(p - r)/(q - s)`.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A point of the extended rational line, always stored reduced.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExtRat {
    num: BigInt,
    den: BigInt,
}

/// Builds the canonical reduced form of `num/den`.
pub fn reduce(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<ExtRat> {
    ExtRat::new(num, den)
}

impl ExtRat {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let mut num = num.into();
        let mut den = den.into();
        if num.is_zero() && den.is_zero() {
            return Err(Error::Undefined);
        }
        if den.is_zero() {
            return Ok(Self::infinity());
        }
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        let g = num.gcd(&den);
        if !g.is_one() {
            num /= &g;
            den /= &g;
        }
        Ok(Self { num, den })
    }

    pub fn infinity() -> Self {
        Self {
            num: BigInt::one(),
            den: BigInt::zero(),
        }
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        Self {
            num: n.into(),
            den: BigInt::one(),
        }
    }

    pub fn zero() -> Self {
        Self::integer(0)
    }

    pub fn one() -> Self {
        Self::integer(1)
    }

    /// Trusted constructor for a pair already known to be canonical.
    pub(crate) fn from_canonical(num: BigInt, den: BigInt) -> Self {
        debug_assert!(!den.is_negative());
        Self { num, den }
    }

    pub(crate) fn from_pair(p: Pair) -> Self {
        Self {
            num: BigInt::from(p.0),
            den: BigInt::from(p.1),
        }
    }

    pub fn num(&self) -> &BigInt {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn is_infinite(&self) -> bool {
        self.den.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.den.is_one()
    }

    pub fn from_rational(q: &BigRational) -> Self {
        Self::from_canonical(q.numer().clone(), q.denom().clone())
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        if self.is_infinite() {
            None
        } else {
            Some(BigRational::new_raw(self.num.clone(), self.den.clone()))
        }
    }

    /// Nearest binary64 value; infinity maps to `f64::INFINITY`.
    pub fn to_f64(&self) -> f64 {
        if self.is_infinite() {
            f64::INFINITY
        } else {
            ratio_to_f64(&self.num, &self.den)
        }
    }

    /// The pair `(num, den)` when both fit in `i64`.
    pub(crate) fn to_pair(&self) -> Option<Pair> {
        Some((self.num.to_i64()?, self.den.to_i64()?))
    }

    /// `num * other.den - den * other.num`.
    pub fn det(&self, other: &ExtRat) -> BigInt {
        &self.num * &other.den - &self.den * &other.num
    }
}

/// Quotient of two big integers as `f64`, robust to operands beyond `f64` range.
pub(crate) fn ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    if let (Some(n), Some(d)) = (num.to_f64(), den.to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let shift = num.bits().max(den.bits()).saturating_sub(900);
    let n = (num >> shift).to_f64().unwrap_or(0.0);
    let d = (den >> shift).to_f64().unwrap_or(0.0);
    n / d
}

impl Ord for ExtRat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_infinite(), other.is_infinite()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (false, false) => (&self.num * &other.den).cmp(&(&other.num * &self.den)),
        }
    }
}

impl PartialOrd for ExtRat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Debug for ExtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExtRat {
    type Err = Error;

    /// Accepts `p/q`, a bare integer `p`, or `inf`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if matches!(s, "inf" | "infinity" | "∞") {
            return Ok(Self::infinity());
        }
        let bad = || Error::Parse(format!("not an extended rational: {s:?}"));
        match s.split_once('/') {
            Some((p, q)) => {
                let p: BigInt = p.trim().parse().map_err(|_| bad())?;
                let q: BigInt = q.trim().parse().map_err(|_| bad())?;
                Self::new(p, q)
            }
            None => Ok(Self::integer(s.parse::<BigInt>().map_err(|_| bad())?)),
        }
    }
}

impl From<i64> for ExtRat {
    fn from(n: i64) -> Self {
        Self::integer(n)
    }
}

impl Serialize for ExtRat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExtRat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An unordered pair of distinct vertices, stored with `lo < hi`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeodesicEdge {
    lo: ExtRat,
    hi: ExtRat,
}

impl GeodesicEdge {
    pub fn new(a: ExtRat, b: ExtRat) -> Result<Self> {
        match a.cmp(&b) {
            Ordering::Less => Ok(Self { lo: a, hi: b }),
            Ordering::Greater => Ok(Self { lo: b, hi: a }),
            Ordering::Equal => Err(Error::EqualPoints(a.to_string())),
        }
    }

    pub fn lo(&self) -> &ExtRat {
        &self.lo
    }

    pub fn hi(&self) -> &ExtRat {
        &self.hi
    }

    pub fn endpoints(&self) -> (&ExtRat, &ExtRat) {
        (&self.lo, &self.hi)
    }

    pub fn has_endpoint(&self, v: &ExtRat) -> bool {
        &self.lo == v || &self.hi == v
    }

    pub fn shares_endpoint(&self, other: &GeodesicEdge) -> bool {
        self.has_endpoint(&other.lo) || self.has_endpoint(&other.hi)
    }

    /// The endpoint that is not `v`.
    pub fn other(&self, v: &ExtRat) -> Option<&ExtRat> {
        if &self.lo == v {
            Some(&self.hi)
        } else if &self.hi == v {
            Some(&self.lo)
        } else {
            None
        }
    }

    pub fn is_farey(&self) -> bool {
        self.lo.det(&self.hi).abs().is_one()
    }
}

impl fmt::Display for GeodesicEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.lo, self.hi)
    }
}

impl fmt::Debug for GeodesicEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.lo, self.hi)
    }
}

impl FromStr for GeodesicEdge {
    type Err = Error;

    /// Parses `p/q-r/s`; either numerator may carry a leading minus sign.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not an edge: {s:?}"));
        // The separator is the first '-' after the first '/'.
        let slash = s.find('/').ok_or_else(bad)?;
        let sep = s[slash..].find('-').map(|i| i + slash).ok_or_else(bad)?;
        let a: ExtRat = s[..sep].parse()?;
        let b: ExtRat = s[sep + 1..].parse()?;
        Self::new(a, b)
    }
}

impl Serialize for GeodesicEdge {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GeodesicEdge {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn is_farey_neighbor(u: &ExtRat, v: &ExtRat) -> Result<bool> {
    if u == v {
        return Err(Error::EqualPoints(u.to_string()));
    }
    Ok(u.det(v).abs().is_one())
}

pub fn mediant(u: &ExtRat, v: &ExtRat) -> Result<ExtRat> {
    if !is_farey_neighbor(u, v)? {
        return Err(Error::NotNeighbors(u.to_string(), v.to_string()));
    }
    ExtRat::new(&u.num + &v.num, &u.den + &v.den)
}

/// The apexes of the two Farey triangles adjacent to the edge `(u, v)`.
pub fn opposite_vertices(u: &ExtRat, v: &ExtRat) -> Result<(ExtRat, ExtRat)> {
    let sum = mediant(u, v)?;
    let diff = ExtRat::new(&u.num - &v.num, &u.den - &v.den)?;
    Ok((sum, diff))
}

/// True when `a, b, c` are met in this order when running once around the
/// circle in the positive direction (increasing reals, then infinity).
pub fn positively_oriented(a: &ExtRat, b: &ExtRat, c: &ExtRat) -> bool {
    (a < b && b < c) || (b < c && c < a) || (c < a && a < b)
}

/// Whether two geodesics cross in the interior of the hyperbolic plane.
///
/// Edges sharing an endpoint never cross.
pub fn circular_cross(e1: &GeodesicEdge, e2: &GeodesicEdge) -> bool {
    if e1.shares_endpoint(e2) {
        return false;
    }
    let inside = |x: &ExtRat| &e1.lo < x && x < &e1.hi;
    inside(&e2.lo) != inside(&e2.hi)
}

/// All Farey edges among an arbitrary vertex set, by determinant scan.
pub fn farey_edges_among(vertices: &[ExtRat]) -> Vec<GeodesicEdge> {
    let mut vs = vertices.to_vec();
    vs.sort();
    vs.dedup();
    let mut edges = Vec::new();
    for (i, u) in vs.iter().enumerate() {
        for v in &vs[i + 1..] {
            if u.det(v).abs().is_one() {
                edges.push(GeodesicEdge {
                    lo: u.clone(),
                    hi: v.clone(),
                });
            }
        }
    }
    edges
}

/// Farey edges with both endpoints in the window, in canonical order.
pub fn farey_edges_in_window(w: &Window) -> Vec<GeodesicEdge> {
    let mut edges = Vec::with_capacity(2 * w.slot_count());
    let mut push = |a: Pair, b: Pair| {
        if w.contains_pair(a) && w.contains_pair(b) {
            let e = GeodesicEdge::new(ExtRat::from_pair(a), ExtRat::from_pair(b))
                .expect("distinct Farey vertices");
            edges.push(e);
        }
    };
    for [a, b, _] in BASE_TRIANGLE_EDGES {
        push(a, b);
    }
    walk_window(w, |[x, y, _], far| {
        push(x, far);
        push(far, y);
    });
    edges.sort();
    edges
}

/// The truncation device for infinite objects: every reduced `p/q` with
/// `|p| <= max_num` and `1 <= q <= max_den`, plus infinity when flagged.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub max_num: u64,
    pub max_den: u64,
    #[serde(rename = "infinity", default = "default_true")]
    pub include_infinity: bool,
}

fn default_true() -> bool {
    true
}

/// Upper limit on `max_den * (2 max_num + 1)`, the dense slot count.
const MAX_SLOTS: u64 = 1 << 32;

impl Window {
    pub fn new(max_num: u64, max_den: u64, include_infinity: bool) -> Result<Self> {
        let w = Self {
            max_num,
            max_den,
            include_infinity,
        };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_num == 0 || self.max_den == 0 {
            return Err(Error::InvalidWindow("bounds must be positive".into()));
        }
        let slots = (2 * self.max_num as u128 + 1) * self.max_den as u128;
        if self.max_num > (1 << 40) || slots > MAX_SLOTS as u128 {
            return Err(Error::InvalidWindow(format!(
                "window {}x{} is too large",
                self.max_num, self.max_den
            )));
        }
        Ok(())
    }

    pub fn contains(&self, v: &ExtRat) -> bool {
        match v.to_pair() {
            Some(p) => self.contains_pair(p),
            None => false,
        }
    }

    pub(crate) fn contains_pair(&self, (p, q): Pair) -> bool {
        if q == 0 {
            return self.include_infinity;
        }
        p.unsigned_abs() <= self.max_num && q as u64 <= self.max_den
    }

    /// Number of dense storage slots, one per `(p, q)` box cell plus infinity.
    pub(crate) fn slot_count(&self) -> usize {
        ((2 * self.max_num + 1) * self.max_den + 1) as usize
    }

    /// Dense slot index. Infinity always has a slot, even when excluded.
    pub(crate) fn slot_of_pair(&self, (p, q): Pair) -> Option<usize> {
        if q == 0 {
            return Some(self.slot_count() - 1);
        }
        if q < 0 || p.unsigned_abs() > self.max_num || q as u64 > self.max_den {
            return None;
        }
        let row = (q as u64 - 1) * (2 * self.max_num + 1);
        Some((row + (p + self.max_num as i64) as u64) as usize)
    }

    pub(crate) fn slot_of(&self, v: &ExtRat) -> Option<usize> {
        self.slot_of_pair(v.to_pair()?)
    }

    /// Number of vertices in the window.
    pub fn vertex_count(&self) -> usize {
        self.sorted_pairs().count()
    }

    /// Window vertices in increasing order, infinity last.
    pub fn vertices(&self) -> impl Iterator<Item = ExtRat> + '_ {
        self.sorted_pairs().map(ExtRat::from_pair)
    }

    /// Sorted vertex pairs via a k-way merge over the denominator strata,
    /// so huge windows never need a materialized sort.
    pub(crate) fn sorted_pairs(&self) -> SortedPairs {
        let n = self.max_num as i64;
        let mut heap = BinaryHeap::with_capacity(self.max_den as usize);
        for q in 1..=self.max_den as i64 {
            if let Some(p) = next_coprime(-n, n, q) {
                heap.push(Reverse(ByValue((p, q))));
            }
        }
        SortedPairs {
            heap,
            max_num: n,
            infinity: self.include_infinity,
        }
    }
}

fn next_coprime(from: i64, max: i64, q: i64) -> Option<i64> {
    (from..=max).find(|p| p.gcd(&q) == 1)
}

pub(crate) struct SortedPairs {
    heap: BinaryHeap<Reverse<ByValue>>,
    max_num: i64,
    infinity: bool,
}

impl Iterator for SortedPairs {
    type Item = Pair;

    fn next(&mut self) -> Option<Pair> {
        match self.heap.pop() {
            Some(Reverse(ByValue((p, q)))) => {
                if let Some(next) = next_coprime(p + 1, self.max_num, q) {
                    self.heap.push(Reverse(ByValue((next, q))));
                }
                Some((p, q))
            }
            None if self.infinity => {
                self.infinity = false;
                Some((1, 0))
            }
            None => None,
        }
    }
}

/// Finite pair ordered by its rational value.
#[derive(PartialEq, Eq)]
struct ByValue(Pair);

impl Ord for ByValue {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = self.0;
        let (c, d) = other.0;
        (a as i128 * d as i128).cmp(&(c as i128 * b as i128))
    }
}

impl PartialOrd for ByValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A vertex as a machine-word pair `(p, q)` in canonical form.
pub(crate) type Pair = (i64, i64);

pub(crate) const P_ZERO: Pair = (0, 1);
pub(crate) const P_ONE: Pair = (1, 1);
pub(crate) const P_INF: Pair = (1, 0);

/// The three edges of the triangle `(0, 1, inf)`, each listed as
/// `[x, y, apex]` with `(x, y, apex)` positively oriented.
pub(crate) const BASE_TRIANGLE_EDGES: [[Pair; 3]; 3] = [
    [P_ZERO, P_ONE, P_INF],
    [P_ONE, P_INF, P_ZERO],
    [P_INF, P_ZERO, P_ONE],
];

fn canonical_pair(p: i64, q: i64) -> Pair {
    if q < 0 || (q == 0 && p < 0) {
        (-p, -q)
    } else {
        (p, q)
    }
}

/// Depth-first generation of the Farey triangulation restricted to `w`,
/// starting from the triangle `(0, 1, inf)`.
///
/// `visit([x, y, z], far)` is called once per window vertex outside the base
/// triangle: `(x, y, z)` is a positively oriented triangle already generated
/// and `far` is the apex across its edge `(x, y)`. Parents are always visited
/// before children. The window is closed under taking Farey parents, so
/// pruning at the first vertex outside `w` loses nothing.
pub(crate) fn walk_window(w: &Window, mut visit: impl FnMut([Pair; 3], Pair)) {
    let inside = |(p, q): Pair| q > 0 && p.unsigned_abs() <= w.max_num && q as u64 <= w.max_den;
    let mut stack: Vec<[Pair; 3]> = BASE_TRIANGLE_EDGES.to_vec();
    while let Some([x, y, z]) = stack.pop() {
        let sum = canonical_pair(x.0 + y.0, x.1 + y.1);
        let far = if sum == z {
            canonical_pair(x.0 - y.0, x.1 - y.1)
        } else {
            sum
        };
        if !inside(far) {
            continue;
        }
        visit([x, y, z], far);
        stack.push([far, y, x]);
        stack.push([x, far, y]);
    }
}

/// A chart of the fan at `tip`: the integral Möbius map `A` with
/// `A(inf) = tip` and `A(0) = anchor`, so `E_j = (tip, A(j))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanChart {
    tip: ExtRat,
    // [[a, b], [c, d]] with ad - bc = 1
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
    small: Option<[i64; 4]>,
}

impl FanChart {
    /// Chart with the default anchor (see [`default_anchor`]).
    pub fn new(tip: &ExtRat) -> Self {
        let anchor = default_anchor(tip);
        Self::anchored(tip, &anchor).expect("default anchor is a neighbor")
    }

    /// Chart in which the edge `(tip, anchor)` has index 0.
    pub fn anchored(tip: &ExtRat, anchor: &ExtRat) -> Result<Self> {
        if !is_farey_neighbor(tip, anchor)? {
            return Err(Error::NotNeighbors(tip.to_string(), anchor.to_string()));
        }
        // det [[tip.num, anchor.num], [tip.den, anchor.den]] = ±1; flip the
        // anchor column to make it +1.
        let sign = tip.det(anchor);
        let (a, b, c, d) = (
            tip.num.clone(),
            &sign * &anchor.num,
            tip.den.clone(),
            &sign * &anchor.den,
        );
        let small = match (a.to_i64(), b.to_i64(), c.to_i64(), d.to_i64()) {
            (Some(a), Some(b), Some(c), Some(d)) => Some([a, b, c, d]),
            _ => None,
        };
        Ok(Self {
            tip: tip.clone(),
            a,
            b,
            c,
            d,
            small,
        })
    }

    /// Far endpoint of `E_j` as a machine pair, when it fits.
    pub(crate) fn vertex_pair(&self, j: i64) -> Option<Pair> {
        let [a, b, c, d] = self.small?;
        let j = j as i128;
        let p = a as i128 * j + b as i128;
        let q = c as i128 * j + d as i128;
        let (p, q) = if q < 0 || (q == 0 && p < 0) { (-p, -q) } else { (p, q) };
        Some((i64::try_from(p).ok()?, i64::try_from(q).ok()?))
    }

    pub fn tip(&self) -> &ExtRat {
        &self.tip
    }

    /// The far endpoint of `E_j`.
    pub fn vertex(&self, j: &BigInt) -> ExtRat {
        let p = &self.a * j + &self.b;
        let q = &self.c * j + &self.d;
        if q.is_negative() || (q.is_zero() && p.is_negative()) {
            ExtRat::from_canonical(-p, -q)
        } else {
            ExtRat::from_canonical(p, q)
        }
    }

    pub fn edge(&self, j: &BigInt) -> GeodesicEdge {
        GeodesicEdge::new(self.tip.clone(), self.vertex(j)).expect("fan edge has distinct ends")
    }

    /// Index of the fan edge `(tip, v)`, if `v` is a Farey neighbor of the tip.
    pub fn index_of(&self, v: &ExtRat) -> Option<BigInt> {
        // A^{-1} = [[d, -b], [-c, a]]
        let x = &self.d * &v.num - &self.b * &v.den;
        let y = &self.a * &v.den - &self.c * &v.num;
        if y.is_one() {
            Some(x)
        } else if (-&y).is_one() {
            Some(-x)
        } else {
            None
        }
    }
}

/// Index-0 neighbor used when the caller does not choose one. It is chosen
/// so that the sector between `E_0` and `E_1` is the triangle spanned by the
/// tip and its Farey parents: `(0, 1, inf)` for the tips `inf` and `0`,
/// `(n - 1, n, inf)` for integers `n > 0`, `(n, n + 1, inf)` for integers
/// `n < 0`, and the parent triangle otherwise. That sector lies in every
/// window containing the tip.
pub fn default_anchor(tip: &ExtRat) -> ExtRat {
    if tip.is_infinite() {
        return ExtRat::zero();
    }
    if tip.is_integer() {
        return if tip.num.is_positive() {
            ExtRat::infinity()
        } else {
            ExtRat::integer(&tip.num + 1)
        };
    }
    let (p1, p2) = farey_parents(tip).expect("non-integer tip has parents");
    p1.max(p2)
}

/// The far ends of `E_0` and `E_1` under the default anchor.
pub fn anchor_sector(tip: &ExtRat) -> (ExtRat, ExtRat) {
    let chart = FanChart::new(tip);
    (chart.vertex(&BigInt::zero()), chart.vertex(&BigInt::one()))
}

/// The two Farey neighbors of `v` with smaller denominator, for `den >= 2`.
pub fn farey_parents(v: &ExtRat) -> Option<(ExtRat, ExtRat)> {
    let two = BigInt::from(2);
    if v.den < two {
        return None;
    }
    // p * s = 1 (mod q) with 0 < s < q.
    let ext = v.num.extended_gcd(&v.den);
    let s = ext.x.mod_floor(&v.den);
    let r = (&v.num * &s - BigInt::one()) / &v.den;
    let first = ExtRat::from_canonical(r.clone(), s.clone());
    let second = ExtRat::from_canonical(&v.num - r, &v.den - s);
    Some((first, second))
}

/// Fan edges `E_j` for `j` in `[j_lo, j_hi]` with the default anchor.
pub fn fan_edges(p: &ExtRat, j_lo: i64, j_hi: i64) -> Result<Vec<GeodesicEdge>> {
    if j_lo > j_hi {
        return Err(Error::InvalidArgument(format!("empty index range {j_lo}..={j_hi}")));
    }
    let chart = FanChart::new(p);
    Ok((j_lo..=j_hi).map(|j| chart.edge(&BigInt::from(j))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> ExtRat {
        s.parse().unwrap()
    }

    fn e(a: &str, b: &str) -> GeodesicEdge {
        GeodesicEdge::new(r(a), r(b)).unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(reduce(2, 4).unwrap(), r("1/2"));
        assert!(reduce(1, 0).unwrap().is_infinite());
        assert_eq!(reduce(3, -6).unwrap(), r("-1/2"));
        assert_eq!(reduce(-1, 0).unwrap(), ExtRat::infinity());
        assert_eq!(reduce(0, 0), Err(Error::Undefined));
        assert_eq!(reduce(0, -5).unwrap(), ExtRat::zero());
    }

    #[test]
    fn display_and_parse() {
        assert_eq!(ExtRat::infinity().to_string(), "1/0");
        assert_eq!(r("-3/6").to_string(), "-1/2");
        assert_eq!(r("7").to_string(), "7/1");
        assert_eq!(e("-1/2", "-1/3").to_string(), "-1/2--1/3");
        assert_eq!("-1/2--1/3".parse::<GeodesicEdge>().unwrap(), e("-1/2", "-1/3"));
        assert_eq!("0/1-1/0".parse::<GeodesicEdge>().unwrap(), e("0", "inf"));
        assert!("1/2".parse::<GeodesicEdge>().is_err());
        assert!("1/2-1/2".parse::<GeodesicEdge>().is_err());
    }

    #[test]
    fn order_puts_infinity_last() {
        let mut v = vec![r("inf"), r("1/2"), r("-3"), r("0")];
        v.sort();
        assert_eq!(v, vec![r("-3"), r("0"), r("1/2"), r("inf")]);
    }

    #[test]
    fn neighbor_examples() {
        assert!(is_farey_neighbor(&r("0/1"), &r("1/1")).unwrap());
        assert!(is_farey_neighbor(&r("1/2"), &r("1/3")).unwrap());
        assert!(!is_farey_neighbor(&r("0/1"), &r("2/1")).unwrap());
        assert!(is_farey_neighbor(&r("5"), &r("inf")).unwrap());
        assert!(is_farey_neighbor(&r("1/2"), &r("1/2")).is_err());
    }

    #[test]
    fn mediant_examples() {
        assert_eq!(mediant(&r("0"), &r("1")).unwrap(), r("1/2"));
        assert_eq!(mediant(&r("1"), &r("inf")).unwrap(), r("2"));
        assert_eq!(mediant(&r("1/2"), &r("1/3")).unwrap(), r("2/5"));
        assert!(matches!(mediant(&r("0"), &r("2")), Err(Error::NotNeighbors(..))));
    }

    #[test]
    fn opposite_vertices_of_vertical_edge() {
        let (a, b) = opposite_vertices(&r("0"), &r("inf")).unwrap();
        let mut got = [a, b];
        got.sort();
        assert_eq!(got, [r("-1"), r("1")]);
        let (a, b) = opposite_vertices(&r("0"), &r("1")).unwrap();
        let mut got = [a, b];
        got.sort();
        assert_eq!(got, [r("1/2"), r("inf")]);
    }

    #[test]
    fn edges_among_examples() {
        let vs = [r("-1"), r("0"), r("1"), r("inf")];
        assert_eq!(
            farey_edges_among(&vs),
            vec![e("-1", "0"), e("-1", "inf"), e("0", "1"), e("0", "inf"), e("1", "inf")]
        );
        let tri = farey_edges_among(&[r("0"), r("1"), r("inf")]);
        assert_eq!(tri, vec![e("0", "1"), e("0", "inf"), e("1", "inf")]);
        assert_eq!(farey_edges_among(&[r("0"), r("1")]), vec![e("0", "1")]);
    }

    #[test]
    fn smallest_window_has_five_edges() {
        let w = Window::new(1, 1, true).unwrap();
        let got = farey_edges_in_window(&w);
        assert_eq!(got, farey_edges_among(&w.vertices().collect::<Vec<_>>()));
        assert_eq!(got.len(), 5);
    }

    #[test]
    fn window_without_infinity() {
        let w = Window::new(3, 2, false).unwrap();
        assert!(!w.contains(&ExtRat::infinity()));
        let edges = farey_edges_in_window(&w);
        assert!(edges.iter().all(|e| !e.hi().is_infinite()));
        assert_eq!(edges, farey_edges_among(&w.vertices().collect::<Vec<_>>()));
    }

    #[test]
    fn window_rejects_zero_bounds() {
        assert!(Window::new(0, 3, true).is_err());
        assert!(Window::new(3, 0, true).is_err());
        assert!(Window::new(1 << 41, 1, true).is_err());
    }

    #[test]
    fn sorted_vertices_match_brute_force() {
        let w = Window::new(7, 5, true).unwrap();
        let mut brute = vec![ExtRat::infinity()];
        for q in 1..=5i64 {
            for p in -7..=7i64 {
                if p.gcd(&q) == 1 {
                    brute.push(ExtRat::new(p, q).unwrap());
                }
            }
        }
        brute.sort();
        assert_eq!(w.vertices().collect::<Vec<_>>(), brute);
    }

    #[test]
    fn crossing_examples() {
        assert!(circular_cross(&e("0", "inf"), &e("-1", "1")));
        assert!(!circular_cross(&e("0", "1"), &e("2", "3")));
        assert!(circular_cross(&e("0", "2"), &e("1", "inf")));
        assert!(!circular_cross(&e("0", "1"), &e("1", "inf")));
    }

    #[test]
    fn orientation() {
        assert!(positively_oriented(&r("0"), &r("1"), &r("inf")));
        assert!(positively_oriented(&r("inf"), &r("0"), &r("1")));
        assert!(!positively_oriented(&r("1"), &r("0"), &r("inf")));
        assert!(positively_oriented(&r("0"), &r("inf"), &r("-1")));
    }

    #[test]
    fn fan_at_infinity() {
        let got = fan_edges(&ExtRat::infinity(), 0, 2).unwrap();
        assert_eq!(got, vec![e("0", "inf"), e("1", "inf"), e("2", "inf")]);
    }

    #[test]
    fn fan_at_zero_contains_unit_fractions_consecutively() {
        let fan = fan_edges(&ExtRat::zero(), -3, 3).unwrap();
        let pos = |x: &GeodesicEdge| fan.iter().position(|f| f == x).unwrap();
        let (a, b, c) = (pos(&e("0", "1/3")), pos(&e("0", "1/2")), pos(&e("0", "1")));
        assert_eq!((b - a, c - b), (1, 1));
    }

    #[test]
    fn fan_at_one_has_adjacent_unit_edges() {
        let chart = FanChart::new(&r("1"));
        let i = chart.index_of(&r("0")).unwrap();
        let j = chart.index_of(&r("inf")).unwrap();
        assert_eq!((&i - &j).abs(), BigInt::one());
    }

    #[test]
    fn default_anchor_has_index_zero() {
        for tip in ["inf", "0", "3", "1/2", "-5/7", "13/8"] {
            let tip = r(tip);
            let chart = FanChart::new(&tip);
            assert_eq!(chart.index_of(&default_anchor(&tip)), Some(BigInt::zero()));
        }
        assert_eq!(default_anchor(&r("1/2")), r("1"));
    }

    #[test]
    fn anchor_sector_is_parent_triangle() {
        let cases = [
            ("inf", "0", "1"),
            ("0", "1", "inf"),
            ("3", "inf", "2"),
            ("-3", "-2", "inf"),
            ("1/2", "1", "0"),
            ("2/5", "1/2", "1/3"),
            ("-5/7", "-2/3", "-3/4"),
        ];
        for (tip, a, b) in cases {
            assert_eq!(anchor_sector(&r(tip)), (r(a), r(b)), "tip {tip}");
        }
    }

    #[test]
    fn parents_are_neighbors_with_sum_equal_child() {
        for s in ["1/2", "2/5", "-7/3", "13/8", "-1/9"] {
            let v = r(s);
            let (a, b) = farey_parents(&v).unwrap();
            assert!(is_farey_neighbor(&a, &v).unwrap());
            assert!(is_farey_neighbor(&b, &v).unwrap());
            assert_eq!(mediant(&a, &b).unwrap(), v);
        }
    }
}
