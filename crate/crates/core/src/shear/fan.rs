//! Fan arc lengths, fan ratios `s(k, n; p)` and the two finite-window
//! certificates built on them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{Mu, ShearFunction};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::farey::{ExtRat, FanChart};
use crate::real::{ln_rational, Arith, Real};

/// Multipliers `mu_j = e^{s(E_j)}` for `j` in `[lo, hi]` along the fan of
/// `chart`.
pub(crate) fn fan_mus(s: &ShearFunction, chart: &FanChart, lo: i64, hi: i64, exec: Exec) -> Vec<Mu> {
    let tip = chart.tip().to_pair();
    exec.map_range(lo, hi, |j| match (tip, chart.vertex_pair(j)) {
        (Some(t), Some(v)) => s.mu_pair(t, v),
        _ => s.mu(&chart.edge(&BigInt::from(j))),
    })
}

fn exact_mus(mus: &[Mu], tip: &ExtRat) -> Result<Vec<BigRational>> {
    mus.iter()
        .map(|m| {
            m.exact().ok_or_else(|| {
                Error::ExactUnavailable(format!("irrational shear on the fan at {tip}"))
            })
        })
        .collect()
}

/// `alpha_j` for `j` in `[j_lo, j_hi]` with the normalization
/// `alpha_{k-1} = 1`: consecutive arcs satisfy `alpha_j = e^{s(E_j)} alpha_{j-1}`.
pub fn fan_arc_lengths(
    s: &ShearFunction,
    p: &ExtRat,
    k: i64,
    j_lo: i64,
    j_hi: i64,
    arith: Arith,
) -> Result<Vec<Real>> {
    if j_lo > j_hi {
        return Err(Error::InvalidArgument(format!("empty index range {j_lo}..={j_hi}")));
    }
    let chart = FanChart::new(p);
    let lo = j_lo.min(k - 1);
    let hi = j_hi.max(k - 1);
    // mus[i] is the multiplier of E_{lo + 1 + i}.
    let mus = fan_mus(s, &chart, lo + 1, hi, Exec::Sequential);
    let at = |j: i64| (j - lo) as usize;
    let base = at(k - 1);
    let out = match arith {
        Arith::Exact => {
            let mus = exact_mus(&mus, p)?;
            let mut alpha = vec![BigRational::one(); (hi - lo + 1) as usize];
            for i in base + 1..alpha.len() {
                alpha[i] = &alpha[i - 1] * &mus[i - 1];
            }
            for i in (0..base).rev() {
                alpha[i] = &alpha[i + 1] / &mus[i];
            }
            alpha.into_iter().map(Real::Exact).collect::<Vec<_>>()
        }
        Arith::Float => {
            let mut log = vec![0.0; (hi - lo + 1) as usize];
            for i in base + 1..log.len() {
                log[i] = log[i - 1] + mus[i - 1].log();
            }
            for i in (0..base).rev() {
                log[i] = log[i + 1] - mus[i].log();
            }
            log.into_iter().map(|x| Real::Float(x.exp())).collect()
        }
    };
    Ok(out[at(j_lo)..=at(j_hi)].to_vec())
}

/// `s(k, n; p)`: the first `n` arcs right of `E_k` over the first `n` arcs
/// to its left.
pub fn fan_ratio(s: &ShearFunction, p: &ExtRat, k: i64, n: u64, arith: Arith) -> Result<Real> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let n = n as i64;
    let alpha = fan_arc_lengths(s, p, k, k - n, k + n - 1, arith)?;
    let (left, right) = alpha.split_at(n as usize);
    Ok(match arith {
        Arith::Exact => {
            let sum = |xs: &[Real]| -> BigRational {
                xs.iter().map(|x| x.as_exact().expect("exact").clone()).sum()
            };
            Real::Exact(sum(right) / sum(left))
        }
        Arith::Float => {
            let sum = |xs: &[Real]| -> f64 { xs.iter().map(Real::to_f64).sum() };
            Real::Float(sum(right) / sum(left))
        }
    })
}

/// The finite set of fans and indices a certificate scans.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FanScanParams {
    pub tips: Vec<ExtRat>,
    /// Inclusive range of `k` for fan ratios, or of `j` for partial sums.
    pub k_range: (i64, i64),
    pub n_max: u64,
}

impl FanScanParams {
    pub fn new(tips: Vec<ExtRat>, k_range: (i64, i64), n_max: u64) -> Result<Self> {
        let p = Self { tips, k_range, n_max };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.tips.is_empty() || self.k_range.0 > self.k_range.1 || self.n_max == 0 {
            return Err(Error::InvalidArgument("fan scan ranges must be nonempty".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QsWitness {
    pub tip: ExtRat,
    pub k: i64,
    pub n: u64,
}

/// Outcome of a fan-ratio scan. A pass means no violation inside the scanned
/// window, not a proof for all fans.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QsReport {
    pub max_ratio: Real,
    pub min_ratio: Real,
    pub max_witness: QsWitness,
    pub min_witness: QsWitness,
    pub bound: Real,
    pub pass: bool,
    pub exact: bool,
    pub windowed: bool,
}

/// Ratio `num/den` with `den > 0`, tagged with the `n` that produced it.
#[derive(Clone, Debug)]
struct Extreme<T> {
    num: T,
    den: T,
    n: u64,
}

trait ScanInt: Clone + Send + Sync + Ord + std::ops::Sub<Output = Self> + Sized {
    fn ratio_gt(a: &Extreme<Self>, b: &Extreme<Self>) -> bool;
}

impl ScanInt for i128 {
    fn ratio_gt(a: &Extreme<i128>, b: &Extreme<i128>) -> bool {
        a.num * b.den > b.num * a.den
    }
}

impl ScanInt for BigInt {
    fn ratio_gt(a: &Extreme<BigInt>, b: &Extreme<BigInt>) -> bool {
        &a.num * &b.den > &b.num * &a.den
    }
}

/// Max and min of `(S[k+n]-S[k]) / (S[k]-S[k-n])` over `1 <= n <= n_max`,
/// where `S` holds prefix sums with `S[off]` corresponding to index `k = 0`
/// of the caller's range.
fn scan_k<T: ScanInt>(prefix: &[T], at: usize, n_max: u64) -> (Extreme<T>, Extreme<T>) {
    let ratio = |n: u64| Extreme {
        num: prefix[at + n as usize].clone() - prefix[at].clone(),
        den: prefix[at].clone() - prefix[at - n as usize].clone(),
        n,
    };
    let mut max = ratio(1);
    let mut min = max.clone();
    for n in 2..=n_max {
        let r = ratio(n);
        if T::ratio_gt(&r, &max) {
            max = r;
        } else if T::ratio_gt(&min, &r) {
            min = r;
        }
    }
    (max, min)
}

struct FanExtremes {
    max: (Real, i64, u64),
    min: (Real, i64, u64),
}

fn scan_prefix<T: ScanInt>(
    prefix: &[T],
    k_range: (i64, i64),
    offset: i64,
    n_max: u64,
    exec: Exec,
    to_real: impl Fn(&T, &T) -> Real,
) -> FanExtremes {
    let per_k = exec.map_range(k_range.0, k_range.1, |k| scan_k(prefix, (k - offset) as usize, n_max));
    let mut best_max = (k_range.0, per_k[0].0.clone());
    let mut best_min = (k_range.0, per_k[0].1.clone());
    for (k, (mx, mn)) in (k_range.0..).zip(per_k) {
        if T::ratio_gt(&mx, &best_max.1) {
            best_max = (k, mx);
        }
        if T::ratio_gt(&best_min.1, &mn) {
            best_min = (k, mn);
        }
    }
    FanExtremes {
        max: (to_real(&best_max.1.num, &best_max.1.den), best_max.0, best_max.1.n),
        min: (to_real(&best_min.1.num, &best_min.1.den), best_min.0, best_min.1.n),
    }
}

fn scan_fan(
    s: &ShearFunction,
    tip: &ExtRat,
    params: &FanScanParams,
    arith: Arith,
    exec: Exec,
) -> Result<FanExtremes> {
    let chart = FanChart::new(tip);
    let n = params.n_max as i64;
    let (k_lo, k_hi) = params.k_range;
    // alpha is indexed from lo = k_lo - n to hi = k_hi + n - 1 with
    // alpha_lo = 1; ratios do not see the normalization.
    let lo = k_lo - n;
    let hi = k_hi + n - 1;
    let mus = fan_mus(s, &chart, lo + 1, hi, exec);
    match arith {
        Arith::Exact => {
            let mus = exact_mus(&mus, tip)?;
            let mut alpha = Vec::with_capacity(mus.len() + 1);
            alpha.push(BigRational::one());
            for m in &mus {
                let next = if m.is_one() {
                    alpha.last().expect("nonempty").clone()
                } else {
                    alpha.last().expect("nonempty") * m
                };
                alpha.push(next);
            }
            let lcm = alpha.iter().fold(BigInt::one(), |l, a| l.lcm(a.denom()));
            let mut prefix = Vec::with_capacity(alpha.len() + 1);
            prefix.push(BigInt::zero());
            for a in &alpha {
                let term = a.numer() * (&lcm / a.denom());
                let next = prefix.last().expect("nonempty") + term;
                prefix.push(next);
            }
            let to_real = |a: &BigInt, b: &BigInt| Real::Exact(BigRational::new(a.clone(), b.clone()));
            let fits = prefix.last().and_then(|x| x.to_i64()).is_some_and(|x| x < 1 << 62);
            Ok(if fits {
                let small: Vec<i128> = prefix.iter().map(|x| x.to_i128().expect("fits")).collect();
                scan_prefix(&small, params.k_range, lo, params.n_max, exec, |a, b| {
                    to_real(&BigInt::from(*a), &BigInt::from(*b))
                })
            } else {
                scan_prefix(&prefix, params.k_range, lo, params.n_max, exec, to_real)
            })
        }
        Arith::Float => {
            let mut log = 0.0;
            let mut prefix = vec![0.0, 1.0];
            for m in &mus {
                log += m.log();
                let next = prefix.last().expect("nonempty") + log.exp();
                prefix.push(next);
            }
            let per_k = exec.map_range(k_lo, k_hi, |k| {
                let at = (k - lo) as usize;
                let mut max = (f64::NEG_INFINITY, 0);
                let mut min = (f64::INFINITY, 0);
                for n in 1..=params.n_max {
                    let d = n as usize;
                    let r = (prefix[at + d] - prefix[at]) / (prefix[at] - prefix[at - d]);
                    if r > max.0 {
                        max = (r, n);
                    }
                    if r < min.0 {
                        min = (r, n);
                    }
                }
                (max, min)
            });
            let mut best_max = (f64::NEG_INFINITY, k_lo, 1);
            let mut best_min = (f64::INFINITY, k_lo, 1);
            for (k, (mx, mn)) in (k_lo..).zip(per_k) {
                if mx.0 > best_max.0 {
                    best_max = (mx.0, k, mx.1);
                }
                if mn.0 < best_min.0 {
                    best_min = (mn.0, k, mn.1);
                }
            }
            Ok(FanExtremes {
                max: (Real::Float(best_max.0), best_max.1, best_max.2),
                min: (Real::Float(best_min.0), best_min.1, best_min.2),
            })
        }
    }
}

/// Scans `s(k, n; p)` over the tips, `k` in `k_range` and `1 <= n <= n_max`;
/// passes when every ratio lies in `[1/M, M]`.
pub fn check_qs_certificate(
    s: &ShearFunction,
    params: &FanScanParams,
    bound: &Real,
    arith: Arith,
    exec: Exec,
) -> Result<QsReport> {
    params.validate()?;
    if bound.to_f64() < 1.0 {
        return Err(Error::InvalidArgument(format!("bound {bound} is below 1")));
    }
    let mut best: Option<(FanExtremes, ExtRat, ExtRat)> = None;
    for tip in &params.tips {
        let fan = scan_fan(s, tip, params, arith, exec)?;
        best = Some(match best {
            None => (
                FanExtremes {
                    max: fan.max.clone(),
                    min: fan.min.clone(),
                },
                tip.clone(),
                tip.clone(),
            ),
            Some((mut b, mut max_tip, mut min_tip)) => {
                if fan.max.0 > b.max.0 {
                    b.max = fan.max;
                    max_tip = tip.clone();
                }
                if fan.min.0 < b.min.0 {
                    b.min = fan.min;
                    min_tip = tip.clone();
                }
                (b, max_tip, min_tip)
            }
        });
    }
    let (ext, max_tip, min_tip) = best.expect("at least one tip");
    let pass = ext.max.0 <= *bound && ext.min.0 >= bound.recip();
    Ok(QsReport {
        max_witness: QsWitness {
            tip: max_tip,
            k: ext.max.1,
            n: ext.max.2,
        },
        min_witness: QsWitness {
            tip: min_tip,
            k: ext.min.1,
            n: ext.min.2,
        },
        max_ratio: ext.max.0,
        min_ratio: ext.min.0,
        bound: bound.clone(),
        pass,
        exact: arith == Arith::Exact,
        windowed: true,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsWitness {
    pub tip: ExtRat,
    pub n: i64,
    pub m: i64,
}

/// Largest `|sum_{j=n}^m s(E_j^p)|` over the scanned fans and
/// `k_lo <= n <= m <= k_hi`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsReport {
    pub sup_abs_partial_sum: f64,
    /// `e^{sup}` exactly, when every multiplier is rational.
    pub sup_multiplier: Option<Real>,
    pub witness: PsWitness,
    pub exact: bool,
    pub windowed: bool,
}

impl PsReport {
    /// Whether the supremum is at most `ln b`, decided exactly when possible.
    pub fn within_multiplier(&self, b: &BigRational) -> bool {
        match self.sup_multiplier.as_ref().and_then(Real::as_exact) {
            Some(m) => m <= b,
            None => self.sup_abs_partial_sum <= ln_rational(b),
        }
    }
}

/// Index `(n, m)` and value of the largest partial sum on one fan, from the
/// positions of the prefix extremes.
fn witness_range(i_max: usize, i_min: usize, lo: i64) -> (i64, i64) {
    let (a, b) = if i_min < i_max { (i_min, i_max) } else { (i_max, i_min) };
    if a == b {
        (lo, lo)
    } else {
        (lo + a as i64, lo + b as i64 - 1)
    }
}

/// Max minus min of the prefix sums on each fan, so `O(range)` per fan.
pub fn check_ps_certificate(
    s: &ShearFunction,
    params: &FanScanParams,
    arith: Arith,
    exec: Exec,
) -> Result<PsReport> {
    params.validate()?;
    let (lo, hi) = params.k_range;
    let mut best: Option<PsReport> = None;
    for tip in &params.tips {
        let chart = FanChart::new(tip);
        let mus = fan_mus(s, &chart, lo, hi, exec);
        let report = match arith {
            Arith::Exact => {
                let mus = exact_mus(&mus, tip)?;
                let mut run = BigRational::one();
                let (mut max, mut min) = ((run.clone(), 0), (run.clone(), 0));
                for (i, m) in mus.iter().enumerate() {
                    if m.is_one() {
                        continue;
                    }
                    run *= m;
                    if run > max.0 {
                        max = (run.clone(), i + 1);
                    } else if run < min.0 {
                        min = (run.clone(), i + 1);
                    }
                }
                let sup = &max.0 / &min.0;
                let (n, m) = witness_range(max.1, min.1, lo);
                PsReport {
                    sup_abs_partial_sum: ln_rational(&sup),
                    sup_multiplier: Some(Real::Exact(sup)),
                    witness: PsWitness { tip: tip.clone(), n, m },
                    exact: true,
                    windowed: true,
                }
            }
            Arith::Float => {
                let mut run = 0.0;
                let (mut max, mut min) = ((0.0, 0), (0.0, 0));
                for (i, m) in mus.iter().enumerate() {
                    run += m.log();
                    if run > max.0 {
                        max = (run, i + 1);
                    } else if run < min.0 {
                        min = (run, i + 1);
                    }
                }
                let (n, m) = witness_range(max.1, min.1, lo);
                PsReport {
                    sup_abs_partial_sum: max.0 - min.0,
                    sup_multiplier: None,
                    witness: PsWitness { tip: tip.clone(), n, m },
                    exact: false,
                    windowed: true,
                }
            }
        };
        let better = match &best {
            None => true,
            Some(b) => match (&report.sup_multiplier, &b.sup_multiplier) {
                (Some(x), Some(y)) => x > y,
                _ => report.sup_abs_partial_sum > b.sup_abs_partial_sum,
            },
        };
        if better {
            best = Some(report);
        }
    }
    Ok(best.expect("at least one tip"))
}

/// Brute-force double loop over `(n, m)`, the oracle for
/// [`check_ps_certificate`].
pub fn brute_force_partial_sums(s: &ShearFunction, tip: &ExtRat, lo: i64, hi: i64) -> f64 {
    let chart = FanChart::new(tip);
    let logs: Vec<f64> = fan_mus(s, &chart, lo, hi, Exec::Sequential).iter().map(Mu::log).collect();
    let mut sup: f64 = 0.0;
    for a in 0..logs.len() {
        let mut sum = 0.0;
        for x in &logs[a..] {
            sum += x;
            sup = sup.max(sum.abs());
        }
    }
    sup
}
