//! Horocycle decorations, lambda lengths, pinching, and the decoration built
//! from a shear function with one unit arc at every vertex.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::farey::{anchor_sector, ExtRat, GeodesicEdge, Window};
use crate::geometry::Horocycle;
use crate::real::Real;
use crate::shear::{develop, DevelopOptions, ShearFunction, VertexMap};
use crate::triangulation::WindowTriangulation;

/// One horocycle per vertex: Euclidean diameter at finite points, height at
/// infinity.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Decoration {
    sizes: BTreeMap<ExtRat, Real>,
}

fn check_positive(what: &dyn std::fmt::Display, x: &Real) -> Result<()> {
    if x.is_positive() {
        Ok(())
    } else {
        Err(Error::NonPositive(format!("{what}: {x}")))
    }
}

impl Decoration {
    pub fn new(sizes: impl IntoIterator<Item = (ExtRat, Real)>) -> Result<Self> {
        let sizes: BTreeMap<_, _> = sizes.into_iter().collect();
        for (v, s) in &sizes {
            check_positive(v, s)?;
        }
        Ok(Self { sizes })
    }

    pub fn size(&self, v: &ExtRat) -> Option<&Real> {
        self.sizes.get(v)
    }

    pub fn set(&mut self, v: ExtRat, size: Real) -> Result<()> {
        check_positive(&v, &size)?;
        self.sizes.insert(v, size);
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ExtRat, &Real)> {
        self.sizes.iter()
    }

    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    pub fn horocycle(&self, v: &ExtRat) -> Option<Horocycle<f64>> {
        Horocycle::new(v.clone(), self.sizes.get(v)?.to_f64()).ok()
    }

    fn require(&self, v: &ExtRat) -> Result<&Real> {
        self.sizes
            .get(v)
            .ok_or_else(|| Error::Missing(format!("horocycle at {v}")))
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
struct SizeEntry {
    vertex: ExtRat,
    size: Real,
}

impl Serialize for Decoration {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: Vec<_> = self
            .sizes
            .iter()
            .map(|(v, s)| SizeEntry {
                vertex: v.clone(),
                size: s.clone(),
            })
            .collect();
        entries.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Decoration {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<SizeEntry>::deserialize(deserializer)?;
        Decoration::new(entries.into_iter().map(|e| (e.vertex, e.size))).map_err(serde::de::Error::custom)
    }
}

/// Positive values on edges.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LambdaAssignment {
    lam: BTreeMap<GeodesicEdge, Real>,
}

impl LambdaAssignment {
    pub fn new(values: impl IntoIterator<Item = (GeodesicEdge, Real)>) -> Result<Self> {
        let lam: BTreeMap<_, _> = values.into_iter().collect();
        for (e, x) in &lam {
            check_positive(e, x)?;
        }
        Ok(Self { lam })
    }

    /// The same value on every edge of `t`.
    pub fn constant(t: &WindowTriangulation, value: Real) -> Result<Self> {
        Self::new(t.edges().map(|e| (e.clone(), value.clone())))
    }

    pub fn get(&self, e: &GeodesicEdge) -> Option<&Real> {
        self.lam.get(e)
    }

    pub fn insert(&mut self, e: GeodesicEdge, x: Real) -> Result<()> {
        check_positive(&e, &x)?;
        self.lam.insert(e, x);
        Ok(())
    }

    pub fn remove(&mut self, e: &GeodesicEdge) -> Option<Real> {
        self.lam.remove(e)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GeodesicEdge, &Real)> {
        self.lam.iter()
    }

    pub fn len(&self) -> usize {
        self.lam.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lam.is_empty()
    }

    fn require(&self, a: &ExtRat, b: &ExtRat) -> Result<&Real> {
        let e = GeodesicEdge::new(a.clone(), b.clone())?;
        self.lam.get(&e).ok_or_else(|| Error::Missing(format!("lambda of {e}")))
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
struct LambdaEntry {
    edge: GeodesicEdge,
    lambda: Real,
}

impl Serialize for LambdaAssignment {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: Vec<_> = self
            .lam
            .iter()
            .map(|(e, x)| LambdaEntry {
                edge: e.clone(),
                lambda: x.clone(),
            })
            .collect();
        entries.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LambdaAssignment {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<LambdaEntry>::deserialize(deserializer)?;
        LambdaAssignment::new(entries.into_iter().map(|e| (e.edge, e.lambda))).map_err(serde::de::Error::custom)
    }
}

fn rat(v: &ExtRat) -> Real {
    Real::Exact(v.to_rational().expect("finite"))
}

/// Maximal-density decoration: diameter `1/q^2` at `p/q`, height 1 at
/// infinity.
pub fn canonical_decoration(w: &Window) -> Decoration {
    canonical_decoration_on(w.vertices())
}

pub fn canonical_decoration_on(vertices: impl IntoIterator<Item = ExtRat>) -> Decoration {
    let sizes = vertices.into_iter().map(|v| {
        let size = if v.is_infinite() {
            BigRational::one()
        } else {
            BigRational::new(1.into(), v.den() * v.den())
        };
        (v, Real::Exact(size))
    });
    Decoration {
        sizes: sizes.collect(),
    }
}

/// `λ^2` for horocycles of the given sizes at `u` and `v`.
pub fn lambda_squared_real(u: &ExtRat, su: &Real, v: &ExtRat, sv: &Real) -> Result<Real> {
    if u == v {
        return Err(Error::EqualPoints(u.to_string()));
    }
    Ok(match (u.is_infinite(), v.is_infinite()) {
        (true, _) => su / sv,
        (_, true) => sv / su,
        _ => {
            let gap = &rat(u) - &rat(v);
            &(&gap * &gap) / &(su * sv)
        }
    })
}

/// Lambda length between two decorated vertices; exact when it is rational.
pub fn lambda_between(dec: &Decoration, u: &ExtRat, v: &ExtRat) -> Result<Real> {
    Ok(lambda_squared_real(u, dec.require(u)?, v, dec.require(v)?)?.sqrt())
}

pub fn lambda_lengths(t: &WindowTriangulation, dec: &Decoration) -> Result<LambdaAssignment> {
    let lam = t
        .edges()
        .map(|e| Ok((e.clone(), lambda_between(dec, e.lo(), e.hi())?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(LambdaAssignment { lam })
}

/// Length of the horocycle of size `size` at `base` between the geodesics
/// to `b` and `c`, measured directly.
pub fn horocycle_arc_real(base: &ExtRat, size: &Real, b: &ExtRat, c: &ExtRat) -> Result<Real> {
    if base == b || base == c || b == c {
        return Err(Error::RepeatedPoints);
    }
    if base.is_infinite() {
        let gap = &rat(b) - &rat(c);
        return Ok(&Real::Exact(gap.as_exact().map(|q| q.abs()).expect("exact")) / size);
    }
    // z -> -1/(z - a) sends the horocycle to the line at height 1/size.
    let a = base.to_rational().expect("finite");
    let send = |v: &ExtRat| match v.to_rational() {
        Some(x) => -(x - &a).recip(),
        None => BigRational::zero(),
    };
    Ok(&Real::Exact((send(b) - send(c)).abs()) * size)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PinchReport {
    pub bound: Real,
    pub min: Real,
    pub max: Real,
    pub min_witness: GeodesicEdge,
    pub max_witness: GeodesicEdge,
    pub pass: bool,
}

/// Whether every value lies in `[1/M, M]`, with the extremal edges.
pub fn is_pinched(lams: &LambdaAssignment, bound: &Real) -> Result<PinchReport> {
    if !(bound > &Real::integer(1)) {
        return Err(Error::InvalidArgument(format!("pinching bound {bound} must exceed 1")));
    }
    let mut it = lams.iter();
    let (e0, x0) = it
        .next()
        .ok_or_else(|| Error::InvalidArgument("empty lambda assignment".into()))?;
    let (mut min, mut max) = ((x0, e0), (x0, e0));
    for (e, x) in it {
        if x < min.0 {
            min = (x, e);
        }
        if x > max.0 {
            max = (x, e);
        }
    }
    let pass = min.0 >= &bound.recip() && max.0 <= bound;
    Ok(PinchReport {
        bound: bound.clone(),
        min: min.0.clone(),
        max: max.0.clone(),
        min_witness: min.1.clone(),
        max_witness: max.1.clone(),
        pass,
    })
}

/// Horocyclic arc at `vertex` inside the triangle `(vertex, from, to)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CornerArc {
    pub vertex: ExtRat,
    pub from: ExtRat,
    pub to: ExtRat,
    pub arc: Real,
}

/// Arcs at every vertex of `t` from lambda lengths alone:
/// `α_a = λ_bc / (λ_ab λ_ac)`. Each vertex's corners are listed in fan
/// order.
pub fn arcs_from_lambdas(t: &WindowTriangulation, lams: &LambdaAssignment) -> Result<Vec<CornerArc>> {
    let mut out = Vec::new();
    for v in t.vertices() {
        let fan = t.fan(v);
        for pair in fan.windows(2) {
            let (b, c) = (&pair[0], &pair[1]);
            let arc = lams.require(b, c)? / &(lams.require(v, b)? * lams.require(v, c)?);
            out.push(CornerArc {
                vertex: v.clone(),
                from: b.clone(),
                to: c.clone(),
                arc,
            });
        }
    }
    Ok(out)
}

/// The same arcs measured on the horocycles themselves.
pub fn arcs_from_decoration(t: &WindowTriangulation, dec: &Decoration) -> Result<Vec<CornerArc>> {
    let mut out = Vec::new();
    for v in t.vertices() {
        let size = dec.require(v)?;
        let fan = t.fan(v);
        for pair in fan.windows(2) {
            out.push(CornerArc {
                vertex: v.clone(),
                from: pair[0].clone(),
                to: pair[1].clone(),
                arc: horocycle_arc_real(v, size, &pair[0], &pair[1])?,
            });
        }
    }
    Ok(out)
}

/// Horocycles at the images of `h` chosen so that the arc between the images
/// of `E_0` and `E_1` has length 1.
pub fn decoration_from_vertex_map(h: &VertexMap) -> Result<Decoration> {
    let img = |v: &ExtRat| {
        h.exact_image(v).ok_or_else(|| {
            if h.contains(v) {
                Error::ExactUnavailable(format!("image of {v} is not exact"))
            } else {
                Error::Missing(format!("image of {v}"))
            }
        })
    };
    let mut sizes = BTreeMap::new();
    for (v, _) in h.iter() {
        let (a0, a1) = anchor_sector(&v);
        let (x, b, c) = (img(&v)?, img(&a0)?, img(&a1)?);
        let unit = horocycle_arc_real(&x, &Real::integer(1), &b, &c)?;
        let size = if x.is_infinite() { unit } else { unit.recip() };
        sizes.insert(x, size);
    }
    Ok(Decoration { sizes })
}

/// Develops `s` on `w` exactly and decorates the image with one unit arc at
/// every vertex. The keys are the image vertices.
pub fn decoration_from_shears(s: &ShearFunction, w: &Window) -> Result<Decoration> {
    let h = develop(s, w, &DevelopOptions::default())?;
    decoration_from_vertex_map(&h)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PinchedQsReport {
    pub bound: Real,
    pub arc_min: Real,
    pub arc_max: Real,
    pub ratio_min: Real,
    pub ratio_max: Real,
    /// Arcs in `[M^-3, M^3]`.
    pub arcs_pass: bool,
    /// Fan ratios in `[M^-6, M^6]`.
    pub ratios_pass: bool,
}

/// Fan ratios `s(k, n)` over every fan of `t` from the arcs of `lams`.
pub fn pinched_forces_qs(t: &WindowTriangulation, lams: &LambdaAssignment, bound: &Real) -> Result<PinchedQsReport> {
    let arcs = arcs_from_lambdas(t, lams)?;
    if arcs.is_empty() {
        return Err(Error::InvalidArgument("triangulation has no corners".into()));
    }
    let mut arc_min = arcs[0].arc.clone();
    let mut arc_max = arcs[0].arc.clone();
    for a in &arcs {
        if a.arc < arc_min {
            arc_min = a.arc.clone();
        }
        if a.arc > arc_max {
            arc_max = a.arc.clone();
        }
    }
    let mut ratio_min = Real::integer(1);
    let mut ratio_max = Real::integer(1);
    let mut start = 0;
    while start < arcs.len() {
        let v = &arcs[start].vertex;
        let end = start + arcs[start..].iter().take_while(|a| &a.vertex == v).count();
        let fan = &arcs[start..end];
        let mut prefix = vec![Real::integer(0)];
        for a in fan {
            let next = prefix.last().expect("nonempty") + &a.arc;
            prefix.push(next);
        }
        let len = fan.len();
        for k in 1..len {
            for n in 1..=k.min(len - k) {
                let right = &prefix[k + n] - &prefix[k];
                let left = &prefix[k] - &prefix[k - n];
                let r = &right / &left;
                if r < ratio_min {
                    ratio_min = r.clone();
                }
                if r > ratio_max {
                    ratio_max = r;
                }
            }
        }
        start = end;
    }
    let m3 = &(bound * bound) * bound;
    let m6 = &m3 * &m3;
    Ok(PinchedQsReport {
        bound: bound.clone(),
        arcs_pass: arc_min >= m3.recip() && arc_max <= m3,
        ratios_pass: ratio_min >= m6.recip() && ratio_max <= m6,
        arc_min,
        arc_max,
        ratio_min,
        ratio_max,
    })
}
