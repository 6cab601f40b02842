//! The explicit quasisymmetric example: shears `-log 2` on `(16^j, inf)` and
//! `log 2` on `(-16^j, inf)`, its piecewise-linear developing map, the ratio
//! scan behind its quasisymmetry and the computation showing it admits no
//! pinched decoration.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::farey::{ExtRat, GeodesicEdge, Pair};
use crate::real::Real;
use crate::shear::{Shear, ShearFunction, VertexMap};

/// `s(E)` for the example.
pub fn example_shear_rule(e: &GeodesicEdge) -> Result<Shear> {
    ShearFunction::paper_example().shear(e)
}

fn big(n: u64) -> BigInt {
    BigInt::from(n)
}

/// `h(16^k) = (15 8^k - 1) / 14`.
pub fn example_h_at_power(k: u32) -> BigRational {
    BigRational::new(big(15) * big(8).pow(k) - 1, big(14))
}

/// The developing map of the example, normalized to be the identity on
/// `[-1, 1]`: slope `2^{-(k+1)}` on `[16^k, 16^{k+1}]`, and odd.
pub fn example_h(x: &BigRational) -> BigRational {
    if x.is_negative() {
        return -example_h(&-x);
    }
    if *x <= BigRational::one() {
        return x.clone();
    }
    let k = ((x.to_integer().bits() - 1) / 4) as u32;
    let base = BigRational::from_integer(big(16).pow(k));
    let slope = BigRational::new(BigInt::one(), big(2).pow(k + 1));
    example_h_at_power(k) + (x - base) * slope
}

/// [`example_h`] on the extended line; infinity is fixed.
pub fn example_h_ext(v: &ExtRat) -> ExtRat {
    match v.to_rational() {
        Some(x) => ExtRat::from_rational(&example_h(&x)),
        None => ExtRat::infinity(),
    }
}

/// [`example_h`] on a machine pair, reduced; `None` on overflow.
pub(crate) fn example_h_pair((p, q): Pair) -> Option<(i128, i128)> {
    if q == 0 {
        return Some((1, 0));
    }
    let (a, q) = (p.unsigned_abs() as i128, q as i128);
    let sign = if p < 0 { -1 } else { 1 };
    if a <= q {
        return Some((p as i128, q));
    }
    let n = (a / q) as u128;
    let k = (127 - n.leading_zeros()) / 4;
    let pow = |b: i128, e: u32| b.checked_pow(e);
    let two_k1 = pow(2, k + 1)?;
    let head = (15 * pow(8, k)? - 1).checked_mul(two_k1)?.checked_mul(q)?;
    let tail = a.checked_sub(pow(16, k)?.checked_mul(q)?)?.checked_mul(14)?;
    let num = head.checked_add(tail)?;
    let den = two_k1.checked_mul(14)?.checked_mul(q)?;
    let g = num.gcd(&den);
    Some((sign * num / g, den / g))
}

/// Compares a developed map with [`example_h`] on its whole domain. Returns
/// the number of vertices compared and the first mismatch.
pub fn compare_with_example_h(h: &VertexMap) -> Result<(usize, Option<ExtRat>)> {
    let slow = |v: &ExtRat| -> Result<bool> {
        let got = h
            .exact_image(v)
            .ok_or_else(|| Error::ExactUnavailable(format!("image of {v}")))?;
        Ok(got == example_h_ext(v))
    };
    let mut count = 0;
    match h.window() {
        Some(w) => {
            for p in w.sorted_pairs() {
                count += 1;
                let fast = match (h.image_pair(p), example_h_pair(p)) {
                    (Some(g), Some(want)) => Some((g.0 as i128, g.1 as i128) == want),
                    _ => None,
                };
                let ok = match fast {
                    Some(ok) => ok,
                    None => slow(&ExtRat::from_pair(p))?,
                };
                if !ok {
                    return Ok((count, Some(ExtRat::from_pair(p))));
                }
            }
        }
        None => {
            for (v, _) in h.iter() {
                count += 1;
                if !slow(&v)? {
                    return Ok((count, Some(v)));
                }
            }
        }
    }
    Ok((count, None))
}

/// Which part of the quasisymmetry argument a sample `(x, t)` falls under,
/// after reflecting so that `x >= 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Case {
    /// `[x, x + t]` contains a whole interval `[16^{k-1}, 16^k]`.
    Case1,
    /// `x` in `[0, 1)`.
    Case2,
    /// One crossing of a power of 16 and `x - t >= 16^{k-2}`.
    Case3Near,
    /// One crossing of a power of 16 and `x - t < 16^{k-2}`.
    Case3Far,
    /// `x` and `x + t` in the same linear piece.
    SamePiece,
}

impl Case {
    /// The bounds the argument gives for this case. Cases without their own
    /// constant use the global `[1/8^3, 8^3]`.
    pub fn bounds(self) -> (BigRational, BigRational) {
        let q = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        match self {
            Case::Case1 => (q(7, 128), q(64, 1)),
            Case::Case3Near => (q(1, 4), q(4, 1)),
            _ => global_bounds(),
        }
    }
}

fn global_bounds() -> (BigRational, BigRational) {
    let m = BigRational::from_integer(big(512));
    (m.recip(), m)
}

/// Index `k` of the piece `[16^k, 16^{k+1})` holding `y >= 1`; `-1` on `[0, 1)`.
fn piece(y: &BigRational) -> i64 {
    if *y < BigRational::one() {
        -1
    } else {
        ((y.to_integer().bits() - 1) / 4) as i64
    }
}

fn power16(k: i64) -> BigRational {
    if k < 0 {
        BigRational::zero()
    } else {
        BigRational::from_integer(big(16).pow(k as u32))
    }
}

/// Classifies `(x, t)` with `x >= 0`, `t > 0`.
pub fn classify(x: &BigRational, t: &BigRational) -> Case {
    if *x < BigRational::one() {
        return Case::Case2;
    }
    let (l, k) = (piece(x), piece(&(x + t)));
    if k >= l + 2 {
        Case::Case1
    } else if k == l + 1 {
        // x in [16^{k-1}, 16^k]
        if x - t >= power16(k - 2) {
            Case::Case3Near
        } else {
            Case::Case3Far
        }
    } else {
        Case::SamePiece
    }
}

/// `(h(x + t) - h(x)) / (h(x) - h(x - t))`.
pub fn symmetric_quotient(x: &BigRational, t: &BigRational) -> BigRational {
    let hx = example_h(x);
    (example_h(&(x + t)) - &hx) / (hx - example_h(&(x - t)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseExtremes {
    pub case: Case,
    pub samples: usize,
    pub min_ratio: Real,
    pub max_ratio: Real,
    pub lower_bound: Real,
    pub upper_bound: Real,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QsScanReport {
    pub samples: usize,
    pub min_ratio: Real,
    pub max_ratio: Real,
    pub per_case: Vec<CaseExtremes>,
    /// Every ratio inside `[1/8^3, 8^3]` and every case inside its bounds.
    pub pass: bool,
}

/// Evaluates the symmetric quotient on every sample and checks each case's
/// bounds. Negative `x` are reflected (`x -> -x` inverts the quotient).
pub fn qs_ratio_scan(grid: &[(BigRational, BigRational)]) -> QsScanReport {
    use std::collections::BTreeMap;
    let mut cases: BTreeMap<Case, (usize, BigRational, BigRational)> = BTreeMap::new();
    let mut global: Option<(BigRational, BigRational)> = None;
    let mut n = 0;
    for (x, t) in grid {
        if !t.is_positive() {
            continue;
        }
        n += 1;
        let (x_pos, invert) = if x.is_negative() { (-x, true) } else { (x.clone(), false) };
        let r = symmetric_quotient(&x_pos, t);
        let r = if invert { r.recip() } else { r };
        let case = classify(&x_pos, t);
        let entry = cases.entry(case).or_insert_with(|| (0, r.clone(), r.clone()));
        entry.0 += 1;
        if r < entry.1 {
            entry.1 = r.clone();
        }
        if r > entry.2 {
            entry.2 = r.clone();
        }
        global = Some(match global {
            None => (r.clone(), r),
            Some((lo, hi)) => (lo.min(r.clone()), hi.max(r)),
        });
    }
    let per_case: Vec<CaseExtremes> = cases
        .into_iter()
        .map(|(case, (samples, lo, hi))| {
            let (bl, bh) = case.bounds();
            let pass = lo >= bl && hi <= bh;
            CaseExtremes {
                case,
                samples,
                min_ratio: Real::Exact(lo),
                max_ratio: Real::Exact(hi),
                lower_bound: Real::Exact(bl),
                upper_bound: Real::Exact(bh),
                pass,
            }
        })
        .collect();
    let (lo, hi) = global.unwrap_or_else(|| (BigRational::one(), BigRational::one()));
    let (gl, gh) = global_bounds();
    let pass = lo >= gl && hi <= gh && per_case.iter().all(|c| c.pass);
    QsScanReport {
        samples: n,
        min_ratio: Real::Exact(lo),
        max_ratio: Real::Exact(hi),
        per_case,
        pass,
    }
}

/// Samples `x = 16^a (1 + i/steps)` for `16^a <= x_max` and `t = 2^b` from
/// `2^-4` up to `2 x_max`, plus the reflections `-x`.
pub fn log_grid(x_max_pow16: u32, steps: u32) -> Vec<(BigRational, BigRational)> {
    let mut xs = vec![BigRational::zero(), BigRational::new(1.into(), 2.into())];
    for a in 0..=x_max_pow16 {
        let base = BigRational::from_integer(big(16).pow(a));
        for i in 0..steps {
            xs.push(&base * BigRational::new((steps + 15 * i).into(), steps.into()));
        }
    }
    let top = 4 * x_max_pow16 as i32 + 1;
    let ts: Vec<BigRational> = (-4..=top)
        .map(|b| Pow::pow(BigRational::from_integer(big(2)), b))
        .collect();
    let mut grid = Vec::with_capacity(2 * xs.len() * ts.len());
    for x in &xs {
        for t in &ts {
            grid.push((x.clone(), t.clone()));
            grid.push((-x.clone(), t.clone()));
        }
    }
    grid
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FalsifierReport {
    pub k: u32,
    pub bound: Real,
    /// `h(16^k + 1) - h(16^k)`.
    pub gap: Real,
    /// Largest lambda length on the edge `(h(16^k), h(16^k + 1))` when the
    /// horocycle at infinity has height 1 and both edges to infinity have
    /// lambda lengths in `[1/M, M]`.
    pub forced_lambda_upper_bound: Real,
    /// The forced bound is below `1/M`, so no such decoration is pinched.
    pub fails_pinching: bool,
}

/// With the horocycle at infinity at height 1, `lambda(v, inf)^2 = 1/d_v`,
/// so both diameters lie in `[M^-2, M^2]`. The lambda length between the two
/// finite points is `gap / sqrt(d_1 d_2)`, largest at `d_1 = d_2 = M^-2`.
pub fn not_pinched_falsifier(k: u32, bound: &BigRational) -> FalsifierReport {
    let a = BigRational::from_integer(big(16).pow(k));
    let gap = example_h(&(&a + BigRational::one())) - example_h(&a);
    let forced = &gap * bound * bound;
    FalsifierReport {
        k,
        bound: Real::Exact(bound.clone()),
        fails_pinching: forced < bound.recip(),
        gap: Real::Exact(gap),
        forced_lambda_upper_bound: Real::Exact(forced),
    }
}

/// Smallest `k` whose forced bound drops below `1/M`.
pub fn first_failing_k(bound: &BigRational) -> u32 {
    (0..).find(|&k| not_pinched_falsifier(k, bound).fails_pinching).expect("bound tends to 0")
}

/// The golden table `16^k -> h(16^k)` for `k` in `0..=k_max`.
pub fn golden_table(k_max: u32) -> Vec<(BigInt, BigRational)> {
    (0..=k_max).map(|k| (big(16).pow(k), example_h_at_power(k))).collect()
}

/// `h(16^k)` computed by summing slopes piece by piece, an oracle for the
/// closed form.
pub fn example_h_by_slopes(k: u32) -> BigRational {
    let mut h = BigRational::one();
    for j in 0..k {
        let len = BigRational::from_integer(big(16).pow(j + 1) - big(16).pow(j));
        h += len / BigRational::from_integer(big(2).pow(j + 1));
    }
    h
}
