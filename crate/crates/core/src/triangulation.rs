//! Allowable triangulations restricted to a window: simultaneous flips with
//! Ptolemy updates, intersection numbers, the transitivity bound, horoball
//! depths and a greedy flip-path search back to the Farey triangulation.
//!
//! Every window triangulation is a triangulation of the ideal polygon on
//! its vertices. Outside that polygon it is understood to agree with the
//! Farey triangulation.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::decoration::{Decoration, LambdaAssignment};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::farey::{
    circular_cross, farey_edges_among, farey_edges_in_window, opposite_vertices, ExtRat, GeodesicEdge,
    Window,
};
use crate::geometry::{penetration_depth, Horocycle};
use crate::real::Real;
use crate::shear::{Image, VertexMap};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    Farey,
    /// Edge differences against the Farey edges of the window.
    Diff {
        removed: Vec<GeodesicEdge>,
        added: Vec<GeodesicEdge>,
    },
    /// Images of the window's Farey edges under an exact vertex map.
    ImageOf(VertexMap),
}

#[derive(Clone, Debug)]
pub struct WindowTriangulation {
    window: Window,
    backend: Backend,
    edges: BTreeSet<GeodesicEdge>,
    nbrs: BTreeMap<ExtRat, Vec<ExtRat>>,
}

impl PartialEq for WindowTriangulation {
    fn eq(&self, other: &Self) -> bool {
        self.window == other.window && self.edges == other.edges
    }
}

fn neighbor_map(edges: &BTreeSet<GeodesicEdge>) -> BTreeMap<ExtRat, Vec<ExtRat>> {
    let mut nbrs: BTreeMap<ExtRat, Vec<ExtRat>> = BTreeMap::new();
    for e in edges {
        let (a, b) = e.endpoints();
        nbrs.entry(a.clone()).or_default().push(b.clone());
        nbrs.entry(b.clone()).or_default().push(a.clone());
    }
    for list in nbrs.values_mut() {
        list.sort();
    }
    nbrs
}

fn first_crossing(new: &[GeodesicEdge], all: &BTreeSet<GeodesicEdge>) -> Option<(GeodesicEdge, GeodesicEdge)> {
    new.iter().find_map(|e| {
        all.iter()
            .find(|f| circular_cross(e, f))
            .map(|f| (e.clone(), f.clone()))
    })
}

impl WindowTriangulation {
    fn build(window: Window, backend: Backend, edges: BTreeSet<GeodesicEdge>) -> Self {
        let nbrs = neighbor_map(&edges);
        Self {
            window,
            backend,
            edges,
            nbrs,
        }
    }

    /// The Farey triangulation restricted to `w`.
    pub fn farey(w: &Window) -> Result<Self> {
        w.validate()?;
        let edges = farey_edges_in_window(w).into_iter().collect();
        Ok(Self::build(w.clone(), Backend::Farey, edges))
    }

    /// Farey with `removed` replaced by `added`. The result must again
    /// triangulate the window polygon.
    pub fn from_diff(w: &Window, removed: &[GeodesicEdge], added: &[GeodesicEdge]) -> Result<Self> {
        let base = Self::farey(w)?;
        let mut edges = base.edges.clone();
        for e in removed {
            if !edges.remove(e) {
                return Err(Error::InvalidArgument(format!("removed edge {e} is not a Farey window edge")));
            }
        }
        let mut fresh = Vec::new();
        for e in added {
            let (a, b) = e.endpoints();
            if !w.contains(a) || !w.contains(b) {
                return Err(Error::OutsideDomain(e.to_string()));
            }
            if edges.insert(e.clone()) {
                fresh.push(e.clone());
            }
        }
        if edges.len() != base.edges.len() {
            return Err(Error::InvalidArgument(format!(
                "diff leaves {} edges, a triangulation of the window has {}",
                edges.len(),
                base.edges.len()
            )));
        }
        if let Some((e, f)) = first_crossing(&fresh, &edges) {
            return Err(Error::Crossing(e.to_string(), f.to_string()));
        }
        Ok(Self::with_edges(w, edges, &base.edges))
    }

    fn with_edges(w: &Window, edges: BTreeSet<GeodesicEdge>, farey: &BTreeSet<GeodesicEdge>) -> Self {
        let removed: Vec<_> = farey.difference(&edges).cloned().collect();
        let backend = if removed.is_empty() {
            Backend::Farey
        } else {
            Backend::Diff {
                removed,
                added: edges.difference(farey).cloned().collect(),
            }
        };
        Self::build(w.clone(), backend, edges)
    }

    /// `h(F)`: the images of the Farey edges among the domain of `h`.
    pub fn image_of(h: &VertexMap) -> Result<Self> {
        if !h.is_exact() {
            return Err(Error::ExactUnavailable("image triangulation needs exact images".into()));
        }
        h.check_monotone()?;
        let (window, domain_edges) = match h.window() {
            Some(w) => (w.clone(), farey_edges_in_window(w)),
            None => {
                let domain: Vec<ExtRat> = h.iter().map(|(v, _)| v).collect();
                (bounding_window(&domain)?, farey_edges_among(&domain))
            }
        };
        let img = |v: &ExtRat| h.exact_image(v).ok_or_else(|| Error::Missing(format!("image of {v}")));
        let edges = domain_edges
            .iter()
            .map(|e| GeodesicEdge::new(img(e.lo())?, img(e.hi())?))
            .collect::<Result<BTreeSet<_>>>()?;
        Ok(Self::build(window, Backend::ImageOf(h.clone()), edges))
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn edges(&self) -> impl Iterator<Item = &GeodesicEdge> {
        self.edges.iter()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_edge(&self, e: &GeodesicEdge) -> bool {
        self.edges.contains(e)
    }

    pub fn vertices(&self) -> impl Iterator<Item = &ExtRat> {
        self.nbrs.keys()
    }

    /// Neighbors of `v` in increasing order.
    pub fn neighbors(&self, v: &ExtRat) -> &[ExtRat] {
        self.nbrs.get(v).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Neighbors of `v` in circular order starting just after `v`; any two
    /// consecutive ones span a triangle with `v`.
    pub fn fan(&self, v: &ExtRat) -> Vec<ExtRat> {
        let list = self.neighbors(v);
        let cut = list.partition_point(|u| u < v);
        list[cut..].iter().chain(&list[..cut]).cloned().collect()
    }

    /// The apexes of the triangles on either side of `e`: the one between
    /// `lo` and `hi`, then the one outside. `None` on the window boundary.
    pub fn apexes(&self, e: &GeodesicEdge) -> (Option<ExtRat>, Option<ExtRat>) {
        let (lo, hi) = e.endpoints();
        let (mut inner, mut outer) = (None, None);
        let (a, b) = (self.neighbors(lo), self.neighbors(hi));
        let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
        for v in short {
            if long.binary_search(v).is_ok() {
                if lo < v && v < hi {
                    inner = Some(v.clone());
                } else {
                    outer = Some(v.clone());
                }
            }
        }
        (inner, outer)
    }

    pub fn is_boundary(&self, e: &GeodesicEdge) -> bool {
        let (a, b) = self.apexes(e);
        a.is_none() || b.is_none()
    }

    /// The quadrilateral of the two triangles adjacent to `e`.
    pub fn quad_of_edge(&self, e: &GeodesicEdge) -> Result<Quad> {
        if !self.contains_edge(e) {
            return Err(Error::Missing(format!("edge {e}")));
        }
        match self.apexes(e) {
            (Some(b), Some(d)) => Ok(Quad {
                a: e.lo().clone(),
                b,
                c: e.hi().clone(),
                d,
            }),
            _ => Err(Error::BoundaryEdge(e.to_string())),
        }
    }

    /// All triangles as increasing triples.
    pub fn triangles(&self) -> Vec<[ExtRat; 3]> {
        self.edges
            .iter()
            .filter_map(|e| {
                self.apexes(e)
                    .0
                    .map(|b| [e.lo().clone(), b, e.hi().clone()])
            })
            .collect()
    }

    /// Edges of `self` that are not window boundary edges.
    pub fn interior_edges(&self) -> Vec<GeodesicEdge> {
        self.edges.iter().filter(|e| !self.is_boundary(e)).cloned().collect()
    }
}

fn bounding_window(vs: &[ExtRat]) -> Result<Window> {
    let mut max_num = 1u64;
    let mut max_den = 1u64;
    let mut inf = false;
    for v in vs {
        if v.is_infinite() {
            inf = true;
            continue;
        }
        let n = v.num().magnitude().try_into().map_err(|_| Error::OutsideDomain(v.to_string()))?;
        let d = v.den().magnitude().try_into().map_err(|_| Error::OutsideDomain(v.to_string()))?;
        max_num = max_num.max(n);
        max_den = max_den.max(d);
    }
    Window::new(max_num, max_den, inf)
}

#[derive(Serialize, Deserialize)]
struct TriangulationSpec {
    backend: Backend,
    window: Window,
}

impl Serialize for WindowTriangulation {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        TriangulationSpec {
            backend: self.backend.clone(),
            window: self.window.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for WindowTriangulation {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let spec = TriangulationSpec::deserialize(deserializer)?;
        let t = match &spec.backend {
            Backend::Farey => WindowTriangulation::farey(&spec.window),
            Backend::Diff { removed, added } => WindowTriangulation::from_diff(&spec.window, removed, added),
            Backend::ImageOf(h) => WindowTriangulation::image_of(h),
        };
        t.map_err(serde::de::Error::custom)
    }
}

impl WindowTriangulation {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        Self::deserialize(v).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// A quadrilateral `a, b, c, d` in circular order with diagonal `(a, c)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quad {
    pub a: ExtRat,
    pub b: ExtRat,
    pub c: ExtRat,
    pub d: ExtRat,
}

impl Quad {
    pub fn diagonal(&self) -> GeodesicEdge {
        GeodesicEdge::new(self.a.clone(), self.c.clone()).expect("distinct")
    }

    pub fn other_diagonal(&self) -> GeodesicEdge {
        GeodesicEdge::new(self.b.clone(), self.d.clone()).expect("distinct")
    }

    /// The four vertices in increasing order.
    pub fn vertices(&self) -> [ExtRat; 4] {
        let mut vs = [self.a.clone(), self.b.clone(), self.c.clone(), self.d.clone()];
        vs.sort();
        vs
    }

    /// Sides `ab, bc, cd, da`.
    pub fn sides(&self) -> [GeodesicEdge; 4] {
        let e = |x: &ExtRat, y: &ExtRat| GeodesicEdge::new(x.clone(), y.clone()).expect("distinct");
        [e(&self.a, &self.b), e(&self.b, &self.c), e(&self.c, &self.d), e(&self.d, &self.a)]
    }

    fn triangles(&self) -> [[ExtRat; 3]; 2] {
        let tri = |x: &ExtRat, y: &ExtRat, z: &ExtRat| {
            let mut t = [x.clone(), y.clone(), z.clone()];
            t.sort();
            t
        };
        [tri(&self.a, &self.b, &self.c), tri(&self.a, &self.c, &self.d)]
    }
}

/// Edges to flip in one move.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FlipSet {
    edges: Vec<GeodesicEdge>,
}

impl FlipSet {
    pub fn new(edges: impl IntoIterator<Item = GeodesicEdge>) -> Self {
        let mut edges: Vec<_> = edges.into_iter().collect();
        edges.sort();
        edges.dedup();
        Self { edges }
    }

    pub fn edges(&self) -> &[GeodesicEdge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// The flip quadrilaterals, checked to be pairwise triangle-disjoint.
    pub fn quads(&self, t: &WindowTriangulation) -> Result<Vec<Quad>> {
        let mut seen = HashSet::new();
        let mut quads = Vec::with_capacity(self.edges.len());
        for e in &self.edges {
            if !t.contains_edge(e) {
                return Err(Error::InvalidFlipSet(format!("{e} is not an edge")));
            }
            let q = t.quad_of_edge(e)?;
            for tri in q.triangles() {
                if !seen.insert(tri) {
                    return Err(Error::InvalidFlipSet(format!("quadrilateral of {e} overlaps another")));
                }
            }
            quads.push(q);
        }
        Ok(quads)
    }
}

/// Replaces the diagonal of every quadrilateral in `d` at once. Lambda
/// lengths of new diagonals follow the Ptolemy relation; all other values
/// are carried over.
pub fn simultaneous_flip(
    t: &WindowTriangulation,
    d: &FlipSet,
    lams: Option<&LambdaAssignment>,
) -> Result<(WindowTriangulation, Option<LambdaAssignment>)> {
    if matches!(t.backend, Backend::ImageOf(_)) {
        return Err(Error::InvalidFlipSet("image triangulations are read-only".into()));
    }
    let quads = d.quads(t)?;
    let mut edges = t.edges.clone();
    let mut fresh = Vec::with_capacity(quads.len());
    for q in &quads {
        edges.remove(&q.diagonal());
        fresh.push(q.other_diagonal());
    }
    edges.extend(fresh.iter().cloned());
    if let Some((e, f)) = first_crossing(&fresh, &edges) {
        return Err(Error::Crossing(e.to_string(), f.to_string()));
    }
    let farey: BTreeSet<_> = farey_edges_in_window(&t.window).into_iter().collect();
    let flipped = WindowTriangulation::with_edges(&t.window, edges, &farey);
    let lams = match lams {
        None => None,
        Some(l) => {
            let mut out = l.clone();
            for q in &quads {
                let get = |e: &GeodesicEdge| l.get(e).ok_or_else(|| Error::Missing(format!("lambda of {e}")));
                let [ab, bc, cd, da] = q.sides();
                let (ab, bc, cd, da, ac) = (get(&ab)?, get(&bc)?, get(&cd)?, get(&da)?, get(&q.diagonal())?);
                let bd = &(&(ab * cd) + &(bc * da)) / ac;
                out.remove(&q.diagonal());
                out.insert(q.other_diagonal(), bd)?;
            }
            Some(out)
        }
    };
    Ok((flipped, lams))
}

/// Number of edges of `t` crossing `e` in the interior.
pub fn intersection_number(e: &GeodesicEdge, t: &WindowTriangulation) -> usize {
    t.edges.iter().filter(|f| circular_cross(e, f)).count()
}

/// The two windowed sups of the finite intersection property.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingReport {
    /// Max over non-boundary edges of `T1` of crossings with `T2`.
    pub n: usize,
    /// Max over non-boundary edges of `T2` of crossings with `T1`.
    pub m: usize,
    /// Edges attaining `n` and `m` (first in edge order), when any crossing.
    pub witnesses: Vec<GeodesicEdge>,
    /// Values are lower bounds for the sups over the whole triangulations.
    pub windowed: bool,
}

fn max_over(from: &WindowTriangulation, against: &WindowTriangulation, exec: Exec) -> (usize, Option<GeodesicEdge>) {
    let edges = from.interior_edges();
    let counts = exec.map(&edges, |e| intersection_number(e, against));
    let mut best = (0, None);
    for (e, c) in edges.into_iter().zip(counts) {
        if c > best.0 {
            best = (c, Some(e));
        }
    }
    best
}

pub fn max_crossing(t1: &WindowTriangulation, t2: &WindowTriangulation, exec: Exec) -> CrossingReport {
    let (n, wn) = max_over(t1, t2, exec);
    let (m, wm) = max_over(t2, t1, exec);
    CrossingReport {
        n,
        m,
        witnesses: wn.into_iter().chain(wm).collect(),
        windowed: true,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitivityReport {
    pub n: usize,
    pub m: usize,
    /// Max over non-boundary edges of `T1` of crossings with `T3`.
    pub measured: usize,
    /// `9 (n + 2) (m + 2)`.
    pub bound: usize,
    pub slack: i64,
    pub pass: bool,
}

pub fn check_transitivity_bound(
    t1: &WindowTriangulation,
    t2: &WindowTriangulation,
    t3: &WindowTriangulation,
    exec: Exec,
) -> TransitivityReport {
    let n = max_over(t1, t2, exec).0;
    let m = max_over(t2, t3, exec).0;
    let measured = max_over(t1, t3, exec).0;
    let bound = 9 * (n + 2) * (m + 2);
    TransitivityReport {
        n,
        m,
        measured,
        bound,
        slack: bound as i64 - measured as i64,
        pass: measured <= bound,
    }
}

/// How far `e` reaches into the horoballs of `dec`, skipping those based at
/// an endpoint of `e`.
pub fn arc_depth(e: &GeodesicEdge, dec: &Decoration) -> Result<f64> {
    let mut depth: f64 = 0.0;
    for (v, size) in dec.iter() {
        if e.has_endpoint(v) {
            continue;
        }
        let h = Horocycle::new(v.clone(), size.to_f64())?;
        depth = depth.max(penetration_depth(e, &h)?);
    }
    Ok(depth)
}

/// Moves every horocycle a distance `d` toward its base point.
pub fn retract_decoration(dec: &Decoration, d: f64) -> Result<Decoration> {
    if !(d >= 0.0) {
        return Err(Error::InvalidArgument(format!("retraction distance {d}")));
    }
    if d == 0.0 {
        return Ok(dec.clone());
    }
    let (shrink, grow) = ((-d).exp(), d.exp());
    Decoration::new(dec.iter().map(|(v, s)| {
        let f = if v.is_infinite() { grow } else { shrink };
        (v.clone(), Real::Float(s.to_f64() * f))
    }))
}

/// Greedy descent on the total crossing number with the Farey window
/// triangulation. Each move flips every improving edge it can while keeping
/// the quadrilaterals disjoint, largest improvement first. Returns the moves
/// if Farey is reached within `budget` moves.
pub fn flip_path_search(t: &WindowTriangulation, budget: usize) -> Result<Option<Vec<FlipSet>>> {
    let farey = WindowTriangulation::farey(&t.window)?;
    let mut cur = t.clone();
    let mut moves = Vec::new();
    loop {
        if cur.edges == farey.edges {
            return Ok(Some(moves));
        }
        if moves.len() >= budget {
            return Ok(None);
        }
        let mut gains: Vec<(i64, GeodesicEdge, Quad)> = Vec::new();
        for e in cur.interior_edges() {
            let before = intersection_number(&e, &farey) as i64;
            if before == 0 {
                continue;
            }
            let q = cur.quad_of_edge(&e)?;
            let after = intersection_number(&q.other_diagonal(), &farey) as i64;
            if after < before {
                gains.push((after - before, e, q));
            }
        }
        gains.sort_by(|x, y| (x.0, &x.1).cmp(&(y.0, &y.1)));
        let mut used = HashSet::new();
        let mut chosen = Vec::new();
        for (_, e, q) in gains {
            let tris = q.triangles();
            if tris.iter().all(|t| !used.contains(t)) {
                used.extend(tris);
                chosen.push(e);
            }
        }
        if chosen.is_empty() {
            return Ok(None);
        }
        let step = FlipSet::new(chosen);
        cur = simultaneous_flip(&cur, &step, None)?.0;
        moves.push(step);
    }
}

/// A random flip set of at most `max_size` non-boundary edges.
pub fn random_flip_set<R: Rng + ?Sized>(t: &WindowTriangulation, max_size: usize, rng: &mut R) -> FlipSet {
    let mut edges = t.interior_edges();
    edges.shuffle(rng);
    let target = rng.gen_range(1..=max_size.max(1));
    let mut used = HashSet::new();
    let mut chosen = Vec::new();
    for e in edges {
        if chosen.len() >= target {
            break;
        }
        let q = t.quad_of_edge(&e).expect("interior edge");
        let tris = q.triangles();
        if tris.iter().all(|t| !used.contains(t)) {
            used.extend(tris);
            chosen.push(e);
        }
    }
    FlipSet::new(chosen)
}

/// `steps` random moves starting from `t`.
pub fn random_flips<R: Rng + ?Sized>(
    t: &WindowTriangulation,
    steps: usize,
    max_size: usize,
    rng: &mut R,
) -> Result<(WindowTriangulation, Vec<FlipSet>)> {
    let mut cur = t.clone();
    let mut moves = Vec::with_capacity(steps);
    for _ in 0..steps {
        let d = random_flip_set(&cur, max_size, rng);
        cur = simultaneous_flip(&cur, &d, None)?.0;
        moves.push(d);
    }
    Ok((cur, moves))
}

/// The Farey apex of `(u, v)` on the other side from `z`.
fn farey_apex_opposite(u: &ExtRat, v: &ExtRat, z: &ExtRat) -> Result<ExtRat> {
    let e = GeodesicEdge::new(u.clone(), v.clone())?;
    let inside = |x: &ExtRat| e.lo() < x && x < e.hi();
    let (s, d) = opposite_vertices(u, v)?;
    Ok(if inside(&s) != inside(z) { s } else { d })
}

impl WindowTriangulation {
    /// Apex across `(u, v)` from `z`, reading the triangulation as Farey
    /// outside the window polygon.
    fn apex_opposite(&self, u: &ExtRat, v: &ExtRat, z: &ExtRat) -> Result<ExtRat> {
        let e = GeodesicEdge::new(u.clone(), v.clone())?;
        if !self.contains_edge(&e) {
            if self.window.contains(u) && self.window.contains(v) {
                return Err(Error::Missing(format!("edge {e}")));
            }
            return farey_apex_opposite(u, v, z);
        }
        let (inner, outer) = self.apexes(&e);
        let z_inside = e.lo() < z && z < e.hi();
        match if z_inside { outer } else { inner } {
            Some(w) => Ok(w),
            None => farey_apex_opposite(u, v, z),
        }
    }
}

/// The vertex map carrying Farey to `t`, fixing the first triangle the two
/// share, evaluated on `domain`. Outside its window `t` is read as Farey,
/// so `domain` may be larger than `t`'s window.
pub fn characteristic_map(t: &WindowTriangulation, domain: &Window) -> Result<VertexMap> {
    if matches!(t.backend, Backend::ImageOf(_)) {
        return Err(Error::InvalidArgument("characteristic map of an image triangulation".into()));
    }
    if !domain.include_infinity {
        return Err(Error::InvalidWindow("domain must contain infinity".into()));
    }
    let farey = WindowTriangulation::farey(&t.window)?;
    let shared: BTreeSet<[ExtRat; 3]> = t.triangles().into_iter().collect();
    let base_tri = [ExtRat::zero(), ExtRat::one(), ExtRat::infinity()];
    let base = if shared.contains(&base_tri) {
        base_tri
    } else {
        farey
            .triangles()
            .into_iter()
            .find(|tri| shared.contains(tri) && tri.iter().all(|v| domain.contains(v)))
            .ok_or_else(|| Error::DegenerateDevelopment("no triangle shared with Farey".into()))?
    };
    let mut images: BTreeMap<ExtRat, ExtRat> = base.iter().map(|v| (v.clone(), v.clone())).collect();
    let mut queue = VecDeque::from([(base.clone(), base.clone())]);
    while let Some((tri, img)) = queue.pop_front() {
        for i in 0..3 {
            let (x, y, z) = (&tri[i], &tri[(i + 1) % 3], &tri[(i + 2) % 3]);
            let far = farey_apex_opposite(x, y, z)?;
            if !domain.contains(&far) || images.contains_key(&far) {
                continue;
            }
            let (xi, yi, zi) = (&img[i], &img[(i + 1) % 3], &img[(i + 2) % 3]);
            let fi = t.apex_opposite(xi, yi, zi)?;
            images.insert(far.clone(), fi.clone());
            queue.push_back(([x.clone(), y.clone(), far], [xi.clone(), yi.clone(), fi]));
        }
    }
    Ok(VertexMap::from_images(
        base,
        images.into_iter().map(|(v, w)| (v, Image::Exact(w))),
    ))
}
