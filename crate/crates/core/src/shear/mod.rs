//! Shear functions on the Farey triangulation.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::farey::{ExtRat, GeodesicEdge, Pair, P_INF};
use crate::real::{ln_rational, Real};

mod develop;
mod fan;

pub use develop::{develop, develop_bfs, shear_from_vertex_map, DevelopOptions, Image, VertexMap};
pub use fan::{
    brute_force_partial_sums, check_ps_certificate, check_qs_certificate, fan_arc_lengths, fan_ratio, FanScanParams,
    PsReport, PsWitness, QsReport, QsWitness,
};

/// The shear of one edge: an exact multiplier `e^s` when rational, else `s`.
#[derive(Clone, Debug, PartialEq)]
pub enum Shear {
    Mult(BigRational),
    Log(f64),
}

impl Shear {
    pub fn zero() -> Self {
        Shear::Mult(BigRational::one())
    }

    /// Exact multiplier; must be positive.
    pub fn mult(m: BigRational) -> Result<Self> {
        if !m.is_positive() {
            return Err(Error::NonPositive(m.to_string()));
        }
        Ok(Shear::Mult(m))
    }

    pub fn from_ratio(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Undefined);
        }
        Self::mult(BigRational::new(num.into(), den.into()))
    }

    pub fn log(&self) -> f64 {
        match self {
            Shear::Mult(m) => ln_rational(m),
            Shear::Log(s) => *s,
        }
    }

    pub fn multiplier(&self) -> Option<&BigRational> {
        match self {
            Shear::Mult(m) => Some(m),
            Shear::Log(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Shear::Mult(m) => m.is_one(),
            Shear::Log(s) => *s == 0.0,
        }
    }

    pub(crate) fn to_mu(&self) -> Mu {
        match self {
            Shear::Mult(m) if m.is_one() => Mu::One,
            Shear::Mult(m) => match (i64::try_from(m.numer()), i64::try_from(m.denom())) {
                (Ok(n), Ok(d)) => Mu::Small(n, d),
                _ => Mu::Big(m.clone()),
            },
            Shear::Log(s) if *s == 0.0 => Mu::One,
            Shear::Log(s) => Mu::Float(*s),
        }
    }
}

/// Multiplier in the form the fast paths consume.
#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Mu {
    One,
    Small(i64, i64),
    Big(BigRational),
    Float(f64),
}

impl Mu {
    pub(crate) fn to_shear(&self) -> Shear {
        match self {
            Mu::One => Shear::zero(),
            Mu::Small(n, d) => Shear::Mult(BigRational::new((*n).into(), (*d).into())),
            Mu::Big(m) => Shear::Mult(m.clone()),
            Mu::Float(s) => Shear::Log(*s),
        }
    }

    pub(crate) fn log(&self) -> f64 {
        match self {
            Mu::One => 0.0,
            Mu::Small(n, d) => (*n as f64).ln() - (*d as f64).ln(),
            Mu::Big(m) => ln_rational(m),
            Mu::Float(s) => *s,
        }
    }

    pub(crate) fn exact(&self) -> Option<BigRational> {
        match self {
            Mu::One => Some(BigRational::one()),
            Mu::Small(n, d) => Some(BigRational::new((*n).into(), (*d).into())),
            Mu::Big(m) => Some(m.clone()),
            Mu::Float(_) => None,
        }
    }
}

type CustomRule = Arc<dyn Fn(&GeodesicEdge) -> Shear + Send + Sync>;

/// A total rule assigning a shear to every Farey edge.
#[derive(Clone)]
pub enum Rule {
    /// The same shear on every edge.
    Constant(Shear),
    /// `-log 2` on `(16^j, inf)`, `log 2` on `(-16^j, inf)`, zero elsewhere.
    PaperExample,
    /// `j log 2` on `(j, inf)`, zero elsewhere.
    LinearFan,
    Custom(String, CustomRule),
}

impl fmt::Debug for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rule({})", self.name())
    }
}

pub const BUILTIN_RULES: [&str; 3] = ["zero", "paper-example", "linear-fan"];

impl Rule {
    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            "zero" => Ok(Rule::Constant(Shear::zero())),
            "paper-example" => Ok(Rule::PaperExample),
            "linear-fan" => Ok(Rule::LinearFan),
            _ => Err(Error::Parse(format!(
                "unknown shear rule {name:?}; builtins are {BUILTIN_RULES:?}"
            ))),
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Rule::Constant(s) if s.is_zero() => "zero",
            Rule::Constant(_) => "constant",
            Rule::PaperExample => "paper-example",
            Rule::LinearFan => "linear-fan",
            Rule::Custom(name, _) => name,
        }
    }

    fn eval(&self, e: &GeodesicEdge) -> Shear {
        match self {
            Rule::Constant(s) => s.clone(),
            Rule::Custom(_, f) => f(e),
            _ => {
                let small = match (e.lo().to_pair(), e.hi().to_pair()) {
                    (Some(x), Some(y)) => self.eval_pair(x, y),
                    _ => None,
                };
                match small {
                    Some(mu) => mu.to_shear(),
                    None => self.eval_big(e),
                }
            }
        }
    }

    /// Fast evaluation on machine pairs; `None` means "use the slow path".
    fn eval_pair(&self, x: Pair, y: Pair) -> Option<Mu> {
        let integer_at_infinity = || match (x, y) {
            ((n, 1), P_INF) | (P_INF, (n, 1)) => Some(n),
            _ => None,
        };
        match self {
            Rule::Constant(s) => Some(s.to_mu()),
            Rule::PaperExample => Some(match integer_at_infinity() {
                Some(n) if is_power_of_16(n.unsigned_abs()) => {
                    if n > 0 {
                        Mu::Small(1, 2)
                    } else {
                        Mu::Small(2, 1)
                    }
                }
                _ => Mu::One,
            }),
            Rule::LinearFan => Some(match integer_at_infinity() {
                None | Some(0) => Mu::One,
                Some(j) if j.unsigned_abs() < 63 => {
                    if j > 0 {
                        Mu::Small(1 << j, 1)
                    } else {
                        Mu::Small(1, 1 << -j)
                    }
                }
                Some(_) => return None,
            }),
            Rule::Custom(..) => None,
        }
    }

    fn eval_big(&self, e: &GeodesicEdge) -> Shear {
        let integer_at_infinity = if e.hi().is_infinite() && e.lo().is_integer() {
            Some(e.lo().num().clone())
        } else {
            None
        };
        match (self, integer_at_infinity) {
            (Rule::PaperExample, Some(n)) => {
                let m = n.magnitude();
                let is_pow = m.count_ones() == 1 && m.trailing_zeros().unwrap_or(1) % 4 == 0;
                match (is_pow, n.is_positive()) {
                    (false, _) => Shear::zero(),
                    (true, true) => Shear::Mult(BigRational::new(1.into(), 2.into())),
                    (true, false) => Shear::Mult(BigRational::from_integer(2.into())),
                }
            }
            (Rule::LinearFan, Some(j)) => {
                let two = BigRational::from_integer(BigInt::from(2));
                let j = i32::try_from(&j).expect("fan index fits in i32");
                Shear::Mult(num_traits::pow::Pow::pow(&two, j))
            }
            (Rule::Constant(s), _) => s.clone(),
            (Rule::Custom(_, f), _) => f(e),
            _ => Shear::zero(),
        }
    }
}

fn is_power_of_16(n: u64) -> bool {
    n.is_power_of_two() && n.trailing_zeros().is_multiple_of(4)
}

/// Total order on machine pairs matching the order of [`ExtRat`].
pub(crate) fn pair_cmp(x: Pair, y: Pair) -> std::cmp::Ordering {
    match (x.1 == 0, y.1 == 0) {
        (true, true) => std::cmp::Ordering::Equal,
        (true, false) => std::cmp::Ordering::Greater,
        (false, true) => std::cmp::Ordering::Less,
        (false, false) => (x.0 as i128 * y.1 as i128).cmp(&(y.0 as i128 * x.1 as i128)),
    }
}

fn pair_key(x: Pair, y: Pair) -> (Pair, Pair) {
    if pair_cmp(x, y).is_le() {
        (x, y)
    } else {
        (y, x)
    }
}

/// A shear function `s: F -> R`: explicit per-edge entries over a total rule.
#[derive(Clone, Debug)]
pub struct ShearFunction {
    rule: Rule,
    entries: BTreeMap<GeodesicEdge, Shear>,
    small_entries: HashMap<(Pair, Pair), Mu>,
}

impl Default for ShearFunction {
    fn default() -> Self {
        Self::from_rule(Rule::Constant(Shear::zero()))
    }
}

impl ShearFunction {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_rule(rule: Rule) -> Self {
        Self {
            rule,
            entries: BTreeMap::new(),
            small_entries: HashMap::new(),
        }
    }

    pub fn builtin(name: &str) -> Result<Self> {
        Ok(Self::from_rule(Rule::builtin(name)?))
    }

    pub fn paper_example() -> Self {
        Self::from_rule(Rule::PaperExample)
    }

    /// Finitely supported shear function (zero off the entries).
    pub fn sparse(entries: impl IntoIterator<Item = (GeodesicEdge, Shear)>) -> Result<Self> {
        let mut s = Self::zero();
        for (e, v) in entries {
            s.set(e, v)?;
        }
        Ok(s)
    }

    pub fn rule(&self) -> &Rule {
        &self.rule
    }

    pub fn entries(&self) -> &BTreeMap<GeodesicEdge, Shear> {
        &self.entries
    }

    /// Overrides the value on one edge.
    pub fn set(&mut self, e: GeodesicEdge, v: Shear) -> Result<()> {
        if !e.is_farey() {
            return Err(Error::NotFareyEdge(e.to_string()));
        }
        if let Shear::Mult(m) = &v {
            if !m.is_positive() {
                return Err(Error::NonPositive(m.to_string()));
            }
        }
        if let (Some(x), Some(y)) = (e.lo().to_pair(), e.hi().to_pair()) {
            self.small_entries.insert((x, y), v.to_mu());
        }
        self.entries.insert(e, v);
        Ok(())
    }

    /// `s(E)`; non-Farey edges are rejected.
    pub fn shear(&self, e: &GeodesicEdge) -> Result<Shear> {
        if !e.is_farey() {
            return Err(Error::NotFareyEdge(e.to_string()));
        }
        Ok(self.shear_unchecked(e))
    }

    pub(crate) fn shear_unchecked(&self, e: &GeodesicEdge) -> Shear {
        match self.entries.get(e) {
            Some(v) => v.clone(),
            None => self.rule.eval(e),
        }
    }

    /// Multiplier of the Farey edge `(x, y)` given as machine pairs.
    pub(crate) fn mu_pair(&self, x: Pair, y: Pair) -> Mu {
        let key = pair_key(x, y);
        if !self.small_entries.is_empty() {
            if let Some(mu) = self.small_entries.get(&key) {
                return mu.clone();
            }
        }
        match self.rule.eval_pair(key.0, key.1) {
            Some(mu) => mu,
            None => {
                let e = GeodesicEdge::new(ExtRat::from_pair(key.0), ExtRat::from_pair(key.1))
                    .expect("distinct endpoints");
                self.rule.eval(&e).to_mu()
            }
        }
    }

    pub(crate) fn mu(&self, e: &GeodesicEdge) -> Mu {
        match (e.lo().to_pair(), e.hi().to_pair()) {
            (Some(x), Some(y)) => self.mu_pair(x, y),
            _ => self.shear_unchecked(e).to_mu(),
        }
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
struct EntrySpec {
    edge: GeodesicEdge,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    log: Option<Real>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mult: Option<Real>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FunctionSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    default: Option<Real>,
    #[serde(default)]
    entries: Vec<EntrySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rule: Option<String>,
}

fn shear_from_log(log: &Real) -> Shear {
    match log {
        Real::Exact(q) if q.is_zero() => Shear::zero(),
        _ => Shear::Log(log.to_f64()),
    }
}

impl TryFrom<EntrySpec> for (GeodesicEdge, Shear) {
    type Error = Error;

    fn try_from(spec: EntrySpec) -> Result<Self> {
        let v = match (spec.log, spec.mult) {
            (Some(log), None) => shear_from_log(&log),
            (None, Some(Real::Exact(m))) => Shear::mult(m)?,
            (None, Some(Real::Float(_))) => {
                return Err(Error::Parse(format!(
                    "multiplier on {} must be an exact rational",
                    spec.edge
                )))
            }
            _ => {
                return Err(Error::Parse(format!(
                    "entry {} needs exactly one of \"log\" and \"mult\"",
                    spec.edge
                )))
            }
        };
        Ok((spec.edge, v))
    }
}

impl Serialize for ShearFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let (default, rule) = match &self.rule {
            Rule::Constant(s) if s.is_zero() => (None, Some("zero".to_string())),
            Rule::Constant(Shear::Log(x)) => (Some(Real::Float(*x)), None),
            Rule::Constant(Shear::Mult(_)) => {
                return Err(serde::ser::Error::custom(
                    "a constant nonzero multiplier has no JSON form",
                ))
            }
            r => (None, Some(r.name().to_string())),
        };
        let entries = self
            .entries
            .iter()
            .map(|(e, v)| match v {
                Shear::Mult(m) => EntrySpec {
                    edge: e.clone(),
                    log: None,
                    mult: Some(Real::Exact(m.clone())),
                },
                Shear::Log(x) => EntrySpec {
                    edge: e.clone(),
                    log: Some(Real::Float(*x)),
                    mult: None,
                },
            })
            .collect();
        FunctionSpec {
            default,
            entries,
            rule,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ShearFunction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let spec = FunctionSpec::deserialize(deserializer)?;
        let rule = match (spec.rule, spec.default) {
            (Some(_), Some(_)) => {
                return Err(D::Error::custom("give either \"rule\" or \"default\", not both"))
            }
            (Some(name), None) => Rule::builtin(&name).map_err(D::Error::custom)?,
            (None, Some(d)) => Rule::Constant(shear_from_log(&d)),
            (None, None) => Rule::Constant(Shear::zero()),
        };
        let mut s = ShearFunction::from_rule(rule);
        for entry in spec.entries {
            let (e, v) = entry.try_into().map_err(D::Error::custom)?;
            s.set(e, v).map_err(D::Error::custom)?;
        }
        Ok(s)
    }
}
