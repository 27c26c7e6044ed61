//! BMS states `(f₊, f₋, d)`, their moves, and the lattices they form.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use rand::seq::IndexedRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{self, FiniteLattice, FinitePoset};
use crate::planar::{AngleId, EdgeId};
use crate::weights::{AngularFunction, DecoratedGraph, StateEdge, StateGraph};

/// Non-negative integer function on the edges of the map.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct DimensionVector(Vec<i64>);

impl DimensionVector {
    pub fn new(values: Vec<i64>) -> Self {
        DimensionVector(values)
    }

    pub fn zero(num_edges: usize) -> Self {
        DimensionVector(vec![0; num_edges])
    }

    /// Indicator of a single edge.
    pub fn unit(num_edges: usize, e: EdgeId) -> Self {
        let mut v = vec![0; num_edges];
        v[e.0] = 1;
        DimensionVector(v)
    }

    pub fn get(&self, e: EdgeId) -> i64 {
        self.0[e.0]
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn leq(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn pointwise_min(&self, other: &Self) -> Self {
        DimensionVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.min(b))
                .collect(),
        )
    }

    pub fn pointwise_max(&self, other: &Self) -> Self {
        DimensionVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    fn bumped(&self, e: EdgeId, delta: i64) -> Self {
        let mut v = self.0.clone();
        v[e.0] += delta;
        DimensionVector(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct BmsState {
    pub f_plus: AngularFunction,
    pub f_minus: AngularFunction,
    pub d: DimensionVector,
}

impl BmsState {
    /// `(g, g, 0)`.
    pub fn trivial(dg: &DecoratedGraph, g: &AngularFunction) -> Self {
        BmsState {
            f_plus: g.clone(),
            f_minus: g.clone(),
            d: DimensionVector::zero(dg.map().num_edges()),
        }
    }

    fn sort_key(&self) -> (&AngularFunction, i64, &DimensionVector) {
        (&self.f_minus, self.d.total(), &self.d)
    }
}

/// Validates a triple as a BMS state.
pub fn make_bms(
    dg: &DecoratedGraph,
    f_plus: AngularFunction,
    f_minus: AngularFunction,
    d: DimensionVector,
) -> Result<BmsState> {
    if !dg.is_compatible(&f_plus) || !dg.is_compatible(&f_minus) {
        return Err(Error::NotCompatible);
    }
    if d.len() != dg.map().num_edges() {
        return Err(Error::ShapeMismatch(format!(
            "dimension vector of length {} for {} edges",
            d.len(),
            dg.map().num_edges()
        )));
    }
    if let Some(e) = dg.map().edge_ids().find(|&e| d.get(e) < 0) {
        return Err(Error::NegativeDimension(e));
    }
    let inv = dg.invisible()?;
    if let Some(&e) = inv.edges.iter().find(|&&e| d.get(e) != 0) {
        return Err(Error::InvisibleDimNonZero(e));
    }
    for (i, arr) in dg.quiver().arrows().iter().enumerate() {
        let a = AngleId(i);
        if d.get(arr.target) != d.get(arr.source) + f_plus.get(a) - f_minus.get(a) {
            return Err(Error::RelationViolated(a));
        }
    }
    Ok(BmsState { f_plus, f_minus, d })
}

/// `(mov_e f₊, f₋, d + χ_e)`.
pub fn bms_mov(dg: &DecoratedGraph, xi: &BmsState, e: EdgeId) -> Result<BmsState> {
    let f_plus = dg.mov(&xi.f_plus, e)?;
    Ok(BmsState {
        f_plus,
        f_minus: xi.f_minus.clone(),
        d: xi.d.bumped(e, 1),
    })
}

/// `(mov⁻_e f₊, f₋, d − χ_e)`, defined when `f₊` is anti-movable at `e` and `d(e) ≥ 1`.
pub fn bms_anti_mov(dg: &DecoratedGraph, xi: &BmsState, e: EdgeId) -> Result<BmsState> {
    if xi.d.get(e) < 1 {
        return Err(Error::NotMovable(e));
    }
    let f_plus = dg.anti_mov(&xi.f_plus, e)?;
    Ok(BmsState {
        f_plus,
        f_minus: xi.f_minus.clone(),
        d: xi.d.bumped(e, -1),
    })
}

/// Edges along which `xi` admits a clockwise move.
pub fn anti_movable_edges(dg: &DecoratedGraph, xi: &BmsState) -> Vec<EdgeId> {
    dg.map()
        .edge_ids()
        .filter(|&e| bms_anti_mov(dg, xi, e).is_ok())
        .collect()
}

/// Move graph on the BMS states reachable from `(g, g, 0)` for each seed `g`.
/// With `max_total = None` the closure is complete, which needs nilpotency degree zero;
/// otherwise states with `d_tot > max_total` are left out.
pub fn bms_move_graph(
    dg: &DecoratedGraph,
    seeds: &[AngularFunction],
    max_total: Option<i64>,
) -> Result<StateGraph<BmsState>> {
    if max_total.is_none() {
        dg.require_nilpotency_zero()?;
    }
    for g in seeds {
        if !dg.is_compatible(g) {
            return Err(Error::NotCompatible);
        }
    }
    let mut seen: HashSet<BmsState> = HashSet::new();
    let mut queue: VecDeque<BmsState> = VecDeque::new();
    for g in seeds {
        let start = BmsState::trivial(dg, g);
        if seen.insert(start.clone()) {
            queue.push_back(start);
        }
    }
    let mut raw_edges = Vec::new();
    while let Some(xi) = queue.pop_front() {
        if max_total.is_some_and(|m| xi.d.total() >= m) {
            continue;
        }
        for e in dg.map().edge_ids() {
            if let Ok(next) = bms_mov(dg, &xi, e) {
                raw_edges.push((xi.clone(), next.clone(), e));
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
    }
    let mut nodes: Vec<BmsState> = seen.into_iter().collect();
    nodes.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    let index: HashMap<&BmsState, usize> = nodes.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let mut edges: Vec<StateEdge> = raw_edges
        .iter()
        .map(|(a, b, e)| StateEdge {
            from: index[a],
            to: index[b],
            label: *e,
        })
        .collect();
    edges.sort();
    Ok(StateGraph { nodes, edges })
}

/// The lattice of BMS states above `(g, g, 0)`, ordered by reachability and
/// checked against the pointwise order on dimension vectors.
#[derive(Debug, Clone, Serialize)]
pub struct BmsLattice {
    pub g: AngularFunction,
    pub graph: StateGraph<BmsState>,
    pub lattice: FiniteLattice<BmsState>,
}

impl BmsLattice {
    /// The state with `d = min(d_a, d_b)` and `f₊ = g + δd`.
    pub fn pointwise_meet(&self, dg: &DecoratedGraph, a: usize, b: usize) -> BmsState {
        let d = self.lattice.elements[a]
            .d
            .pointwise_min(&self.lattice.elements[b].d);
        self.with_d(dg, d)
    }

    pub fn pointwise_join(&self, dg: &DecoratedGraph, a: usize, b: usize) -> BmsState {
        let d = self.lattice.elements[a]
            .d
            .pointwise_max(&self.lattice.elements[b].d);
        self.with_d(dg, d)
    }

    fn with_d(&self, dg: &DecoratedGraph, d: DimensionVector) -> BmsState {
        BmsState {
            f_plus: self.g.add_coboundary(dg.quiver(), d.values()),
            f_minus: self.g.clone(),
            d,
        }
    }

    pub fn len(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lattice.is_empty()
    }

    pub fn index_of(&self, xi: &BmsState) -> Option<usize> {
        self.lattice.elements.iter().position(|x| x == xi)
    }
}

/// Pointwise order on the dimension vectors of a list of states.
pub fn dimension_poset(states: &[BmsState]) -> Result<FinitePoset> {
    FinitePoset::from_order(states.len(), |a, b| states[a].d.leq(&states[b].d))
}

pub fn bms_plus_lattice(
    dg: &DecoratedGraph,
    g: &AngularFunction,
    exhaustive_bound: usize,
    seed: u64,
) -> Result<BmsLattice> {
    let graph = bms_move_graph(dg, std::slice::from_ref(g), None)?;
    let n = graph.nodes.len();
    let poset = FinitePoset::from_relations(n, graph.edges.iter().map(|e| (e.from, e.to)))?;
    let pointwise = dimension_poset(&graph.nodes)?;
    let identity: Vec<usize> = (0..n).collect();
    if !lattice::verify_order_isomorphism(&poset, &pointwise, &identity) {
        return Err(Error::CertificationFailed(
            "reachability order differs from the pointwise order on dimension vectors".into(),
        ));
    }
    let grade = graph.nodes.iter().map(|x| x.d.total()).collect();
    let lattice =
        FiniteLattice::certify(graph.nodes.clone(), poset, grade, exhaustive_bound, seed)?;
    let out = BmsLattice {
        g: g.clone(),
        graph,
        lattice,
    };
    for a in 0..n {
        for b in 0..n {
            let meet = &out.lattice.elements[out.lattice.meet(a, b)];
            let join = &out.lattice.elements[out.lattice.join(a, b)];
            if *meet != out.pointwise_meet(dg, a, b) || *join != out.pointwise_join(dg, a, b) {
                return Err(Error::CertificationFailed(format!(
                    "meet or join of {a} and {b} is not pointwise"
                )));
            }
        }
    }
    Ok(out)
}

/// Applies clockwise moves to `h` (smallest edge first) until none applies.
/// Returns the terminal function and the number of moves made at each edge.
pub fn component_minimum(
    dg: &DecoratedGraph,
    h: &AngularFunction,
) -> Result<(AngularFunction, DimensionVector)> {
    minimize(dg, h, |choices: &[EdgeId]| choices[0])
}

/// As [`component_minimum`], picking the next anti-movable edge at random.
pub fn component_minimum_randomized(
    dg: &DecoratedGraph,
    h: &AngularFunction,
    rng: &mut impl Rng,
) -> Result<(AngularFunction, DimensionVector)> {
    minimize(dg, h, |choices: &[EdgeId]| {
        *choices.choose(rng).expect("non-empty")
    })
}

fn minimize(
    dg: &DecoratedGraph,
    h: &AngularFunction,
    mut pick: impl FnMut(&[EdgeId]) -> EdgeId,
) -> Result<(AngularFunction, DimensionVector)> {
    dg.require_nilpotency_zero()?;
    if !dg.is_compatible(h) {
        return Err(Error::NotCompatible);
    }
    let mut f = h.clone();
    let mut d = DimensionVector::zero(dg.map().num_edges());
    loop {
        let choices: Vec<EdgeId> = dg
            .map()
            .edge_ids()
            .filter(|&e| dg.is_anti_movable(&f, e).unwrap_or(false))
            .collect();
        if choices.is_empty() {
            break;
        }
        let e = pick(&choices);
        f = dg.anti_mov(&f, e)?;
        d = d.bumped(e, 1);
    }
    let xi = make_bms(dg, h.clone(), f, d)?;
    Ok((xi.f_minus, xi.d))
}

/// All BMS states below `xi`: same `f₋`, smaller `d`. Found by clockwise moves from `xi`.
pub fn plus_subobjects(
    dg: &DecoratedGraph,
    xi: &BmsState,
    exhaustive_bound: usize,
    seed: u64,
) -> Result<FiniteLattice<BmsState>> {
    dg.require_nilpotency_zero()?;
    let xi = make_bms(dg, xi.f_plus.clone(), xi.f_minus.clone(), xi.d.clone())?;
    let mut seen: HashSet<BmsState> = HashSet::from([xi.clone()]);
    let mut queue = VecDeque::from([xi]);
    while let Some(x) = queue.pop_front() {
        for e in dg.map().edge_ids() {
            if let Ok(y) = bms_anti_mov(dg, &x, e) {
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
    }
    let mut nodes: Vec<BmsState> = seen.into_iter().collect();
    nodes.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    let poset = dimension_poset(&nodes)?;
    let grade = nodes.iter().map(|x| x.d.total()).collect();
    FiniteLattice::certify(nodes, poset, grade, exhaustive_bound, seed)
}

/// Solves `δd = h − f₋` along the medial quiver, normalized to vanish on invisible edges
/// (or to have minimum 0 when there are none).
pub fn reconstruct_d(
    dg: &DecoratedGraph,
    h: &AngularFunction,
    f_minus: &AngularFunction,
) -> Result<DimensionVector> {
    if !dg.is_compatible(h) || !dg.is_compatible(f_minus) {
        return Err(Error::NotCompatible);
    }
    let q = dg.quiver();
    let n = q.num_vertices();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, arr) in q.arrows().iter().enumerate() {
        incident[arr.source.0].push(i);
        incident[arr.target.0].push(i);
    }
    let mut d: Vec<Option<i64>> = vec![None; n];
    d[0] = Some(0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for &i in &incident[x] {
            let arr = q.arrows()[i];
            let delta = h.values()[i] - f_minus.values()[i];
            let (s, t) = (arr.source.0, arr.target.0);
            match (d[s], d[t]) {
                (Some(ds), None) => {
                    d[t] = Some(ds + delta);
                    queue.push_back(t);
                }
                (None, Some(dt)) => {
                    d[s] = Some(dt - delta);
                    queue.push_back(s);
                }
                (Some(ds), Some(dt)) if dt - ds != delta => {
                    return Err(Error::RelationViolated(AngleId(i)))
                }
                _ => {}
            }
        }
    }
    let mut d: Vec<i64> = d
        .into_iter()
        .map(|x| x.expect("medial quiver is connected"))
        .collect();
    let inv = dg.invisible()?;
    let shift = match inv.edges.first() {
        Some(&e) => d[e.0],
        None => d.iter().copied().min().unwrap_or(0),
    };
    for x in d.iter_mut() {
        *x -= shift;
    }
    if let Some(&e) = inv.edges.iter().find(|&&e| d[e.0] != 0) {
        return Err(Error::InvisibleDimNonZero(e));
    }
    if let Some(e) = (0..n).find(|&e| d[e] < 0) {
        return Err(Error::NegativeDimension(EdgeId(e)));
    }
    Ok(DimensionVector(d))
}

/// Result of checking that `(f₊, f₋, d) ↦ f₊` is a covering of move graphs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProjectionReport {
    pub morphism: bool,
    pub surjective: bool,
    pub locally_bijective: bool,
    pub injective: bool,
    pub checked_nodes: usize,
    pub failures: Vec<String>,
}

impl ProjectionReport {
    /// Morphism, surjective and locally bijective.
    pub fn is_covering(&self) -> bool {
        self.morphism && self.surjective && self.locally_bijective
    }
}

/// Checks the projection from a BMS move graph to the move graph of compatible functions.
/// Local bijectivity is checked only at nodes with `d_tot < max_total`.
pub fn forgetful_projection(
    dg: &DecoratedGraph,
    bms: &StateGraph<BmsState>,
    max_total: Option<i64>,
) -> ProjectionReport {
    let base = dg.move_graph();
    let index: HashMap<&AngularFunction, usize> =
        base.nodes.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let base_edges: HashSet<(usize, usize, EdgeId)> =
        base.edges.iter().map(|e| (e.from, e.to, e.label)).collect();
    let mut failures = Vec::new();
    let image: Vec<Option<usize>> = bms
        .nodes
        .iter()
        .map(|x| index.get(&x.f_plus).copied())
        .collect();
    for (i, img) in image.iter().enumerate() {
        if img.is_none() {
            failures.push(format!("node {i}: f+ is not a compatible function"));
        }
    }
    let mut morphism = failures.is_empty();
    for e in &bms.edges {
        if let (Some(a), Some(b)) = (image[e.from], image[e.to]) {
            if !base_edges.contains(&(a, b, e.label)) {
                morphism = false;
                failures.push(format!(
                    "edge {} -> {} ({}) has no image",
                    e.from, e.to, e.label
                ));
            }
        }
    }
    let hit: BTreeSet<usize> = image.iter().flatten().copied().collect();
    let surjective = hit.len() == base.nodes.len();
    if !surjective {
        failures.push(format!(
            "{} of {} functions are hit",
            hit.len(),
            base.nodes.len()
        ));
    }
    let injective = hit.len() == bms.nodes.len();
    let mut locally_bijective = true;
    let mut checked = 0;
    for (i, x) in bms.nodes.iter().enumerate() {
        if max_total.is_some_and(|m| x.d.total() >= m) {
            continue;
        }
        let Some(img) = image[i] else { continue };
        checked += 1;
        let mut up: Vec<EdgeId> = bms
            .edges
            .iter()
            .filter(|e| e.from == i)
            .map(|e| e.label)
            .collect();
        let mut down: Vec<EdgeId> = base
            .edges
            .iter()
            .filter(|e| e.from == img)
            .map(|e| e.label)
            .collect();
        up.sort();
        down.sort();
        if up != down {
            locally_bijective = false;
            failures.push(format!("node {i}: out-edges {up:?} over {down:?}"));
        }
    }
    ProjectionReport {
        morphism,
        surjective,
        locally_bijective,
        injective,
        checked_nodes: checked,
        failures,
    }
}

/// Comparison of one connected component of the move graph with the lattice
/// built above its minimum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentReport {
    pub size: usize,
    pub minimum: AngularFunction,
    pub lattice_size: usize,
    pub vertices_match: bool,
    pub edges_match: bool,
    pub order_isomorphic: bool,
}

impl ComponentReport {
    pub fn is_ok(&self) -> bool {
        self.vertices_match && self.edges_match && self.order_isomorphic
    }
}

/// For each component of the move graph: find its minimum, build the BMS lattice
/// above it, and compare the projection with the component.
pub fn check_components(
    dg: &DecoratedGraph,
    exhaustive_bound: usize,
    seed: u64,
) -> Result<Vec<ComponentReport>> {
    dg.require_nilpotency_zero()?;
    let graph = dg.move_graph();
    let mut reports = Vec::new();
    for comp in graph.components() {
        let local: HashMap<&AngularFunction, usize> = comp
            .iter()
            .enumerate()
            .map(|(i, &x)| (&graph.nodes[x], i))
            .collect();
        let (fmin, _) = component_minimum(dg, &graph.nodes[comp[0]])?;
        let bl = bms_plus_lattice(dg, &fmin, exhaustive_bound, seed)?;
        let phi: Vec<Option<usize>> = bl
            .lattice
            .elements
            .iter()
            .map(|x| local.get(&x.f_plus).copied())
            .collect();
        let hit: BTreeSet<usize> = phi.iter().flatten().copied().collect();
        let vertices_match =
            phi.iter().all(Option::is_some) && hit.len() == comp.len() && phi.len() == comp.len();
        let comp_edges: BTreeSet<(usize, usize, EdgeId)> = graph
            .edges
            .iter()
            .filter(|e| local.contains_key(&graph.nodes[e.from]))
            .map(|e| {
                (
                    local[&graph.nodes[e.from]],
                    local[&graph.nodes[e.to]],
                    e.label,
                )
            })
            .collect();
        let lifted: BTreeSet<(usize, usize, EdgeId)> = bl
            .graph
            .edges
            .iter()
            .filter_map(|e| Some((phi[e.from]?, phi[e.to]?, e.label)))
            .collect();
        let edges_match =
            vertices_match && lifted == comp_edges && bl.graph.edges.len() == comp_edges.len();
        let order_isomorphic = vertices_match && {
            let comp_poset = FinitePoset::from_relations(
                comp.len(),
                comp_edges.iter().map(|&(a, b, _)| (a, b)),
            )?;
            let phi: Vec<usize> = phi.iter().map(|x| x.expect("checked")).collect();
            lattice::verify_order_isomorphism(bl.lattice.poset(), &comp_poset, &phi)
        };
        reports.push(ComponentReport {
            size: comp.len(),
            minimum: fmin,
            lattice_size: bl.len(),
            vertices_match,
            edges_match,
            order_isomorphic,
        });
    }
    Ok(reports)
}

/// A sequence of `d_tot` counterclockwise moves leading from `f₋` to `f₊`,
/// moving each edge `e` exactly `d(e)` times.
pub fn oriented_path(dg: &DecoratedGraph, xi: &BmsState) -> Option<Vec<EdgeId>> {
    fn search(
        dg: &DecoratedGraph,
        f: &AngularFunction,
        rest: &mut Vec<i64>,
        target: &AngularFunction,
        path: &mut Vec<EdgeId>,
        dead: &mut HashSet<(AngularFunction, Vec<i64>)>,
    ) -> bool {
        if rest.iter().all(|&r| r == 0) {
            return f == target;
        }
        if dead.contains(&(f.clone(), rest.clone())) {
            return false;
        }
        for e in dg.map().edge_ids() {
            if rest[e.0] == 0 {
                continue;
            }
            if let Ok(next) = dg.mov(f, e) {
                rest[e.0] -= 1;
                path.push(e);
                if search(dg, &next, rest, target, path, dead) {
                    return true;
                }
                path.pop();
                rest[e.0] += 1;
            }
        }
        dead.insert((f.clone(), rest.clone()));
        false
    }
    let mut rest = xi.d.values().to_vec();
    let mut path = Vec::new();
    let mut dead = HashSet::new();
    search(dg, &xi.f_minus, &mut rest, &xi.f_plus, &mut path, &mut dead).then_some(path)
}
