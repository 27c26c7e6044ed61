//! Weights, compatible angular functions, counterclockwise moves and invisible cycles.
//!
//! A weight assigns a non-negative integer to every vertex and face, with equal
//! totals on both sides. An angular function is compatible when its values
//! around each vertex and inside each face sum to the weight there.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use petgraph::algo::{dijkstra, tarjan_scc};
use petgraph::graph::{DiGraph, NodeIndex};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice;
use crate::planar::{AngleId, EdgeId, FaceId, MedialQuiver, PlanarMap, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Weight {
    vertex: Vec<i64>,
    face: Vec<i64>,
}

impl Weight {
    pub fn new(vertex: Vec<i64>, face: Vec<i64>) -> Self {
        Weight { vertex, face }
    }

    pub fn zero(map: &PlanarMap) -> Self {
        Weight::new(vec![0; map.num_vertices()], vec![0; map.num_faces()])
    }

    /// Builds a weight from id-keyed maps; every vertex and face must be present.
    pub fn from_maps(
        map: &PlanarMap,
        vertex: &BTreeMap<usize, i64>,
        face: &BTreeMap<usize, i64>,
    ) -> Result<Self> {
        let pick = |table: &BTreeMap<usize, i64>, n: usize, kind: &str| -> Result<Vec<i64>> {
            if let Some(extra) = table.keys().find(|&&k| k >= n) {
                return Err(Error::MissingValue(format!("no {kind} with id {extra}")));
            }
            (0..n)
                .map(|i| {
                    table
                        .get(&i)
                        .copied()
                        .ok_or_else(|| Error::MissingValue(format!("{kind} {i}")))
                })
                .collect()
        };
        Ok(Weight::new(
            pick(vertex, map.num_vertices(), "vertex")?,
            pick(face, map.num_faces(), "face")?,
        ))
    }

    pub fn vertex(&self, v: VertexId) -> i64 {
        self.vertex[v.0]
    }

    pub fn face(&self, f: FaceId) -> i64 {
        self.face[f.0]
    }

    pub fn vertex_values(&self) -> &[i64] {
        &self.vertex
    }

    pub fn face_values(&self) -> &[i64] {
        &self.face
    }

    pub fn max_value(&self) -> i64 {
        self.vertex
            .iter()
            .chain(&self.face)
            .copied()
            .max()
            .unwrap_or(0)
    }

    /// Values in {0, 1}.
    pub fn is_characteristic(&self) -> bool {
        self.vertex
            .iter()
            .chain(&self.face)
            .all(|&x| x == 0 || x == 1)
    }

    pub fn scaled(&self, factor: i64) -> Weight {
        Weight::new(
            self.vertex.iter().map(|x| x * factor).collect(),
            self.face.iter().map(|x| x * factor).collect(),
        )
    }
}

/// True iff the weight is non-negative and vertex and face totals agree.
pub fn validate_weight(map: &PlanarMap, weight: &Weight) -> Result<bool> {
    if weight.vertex.len() != map.num_vertices() {
        return Err(Error::MissingValue(format!(
            "{} vertex values for {} vertices",
            weight.vertex.len(),
            map.num_vertices()
        )));
    }
    if weight.face.len() != map.num_faces() {
        return Err(Error::MissingValue(format!(
            "{} face values for {} faces",
            weight.face.len(),
            map.num_faces()
        )));
    }
    let nonneg = weight.vertex.iter().chain(&weight.face).all(|&x| x >= 0);
    let balanced = weight.vertex.iter().sum::<i64>() == weight.face.iter().sum::<i64>();
    Ok(nonneg && balanced)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct AngularFunction(Vec<i64>);

impl AngularFunction {
    pub fn new(values: Vec<i64>) -> Self {
        AngularFunction(values)
    }

    pub fn zero(num_angles: usize) -> Self {
        AngularFunction(vec![0; num_angles])
    }

    pub fn get(&self, a: AngleId) -> i64 {
        self.0[a.0]
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

    /// Angles where the function is non-zero.
    pub fn support(&self) -> Vec<AngleId> {
        (0..self.0.len())
            .filter(|&i| self.0[i] != 0)
            .map(AngleId)
            .collect()
    }

    pub fn is_compatible(&self, map: &PlanarMap, weight: &Weight) -> bool {
        self.0.len() == map.num_darts()
            && self.0.iter().all(|&x| x >= 0)
            && map.vertex_ids().all(|v| {
                map.vertex_angles(v)
                    .iter()
                    .map(|&a| self.get(a))
                    .sum::<i64>()
                    == weight.vertex(v)
            })
            && map.face_ids().all(|f| {
                map.face_angles(f).iter().map(|&a| self.get(a)).sum::<i64>() == weight.face(f)
            })
    }

    /// `self + δφ` for an integer function φ on edges: each arrow gains φ(target) − φ(source).
    pub fn add_coboundary(&self, quiver: &MedialQuiver, phi: &[i64]) -> AngularFunction {
        AngularFunction(
            quiver
                .arrows()
                .iter()
                .zip(&self.0)
                .map(|(arr, &x)| x + phi[arr.target.0] - phi[arr.source.0])
                .collect(),
        )
    }

    pub(crate) fn bump(&mut self, a: AngleId, delta: i64) {
        self.0[a.0] += delta;
    }
}

/// A directed cycle in the medial quiver, stored as its arrow sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AngularCycle(Vec<AngleId>);

impl AngularCycle {
    pub fn new(quiver: &MedialQuiver, arrows: Vec<AngleId>) -> Result<Self> {
        if quiver.is_closed_path(&arrows) {
            Ok(AngularCycle(arrows))
        } else {
            Err(Error::NotACycle)
        }
    }

    pub fn arrows(&self) -> &[AngleId] {
        &self.0
    }

    /// Coefficient of an arrow in the cycle (its multiplicity).
    pub fn coefficient(&self, a: AngleId) -> usize {
        self.0.iter().filter(|&&b| b == a).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct StateEdge {
    pub from: usize,
    pub to: usize,
    pub label: EdgeId,
}

/// Directed move graph on a set of states; edges are labelled by the moved edge of the map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StateGraph<T> {
    pub nodes: Vec<T>,
    pub edges: Vec<StateEdge>,
}

impl<T> StateGraph<T> {
    pub fn out_degree(&self, node: usize) -> usize {
        self.edges.iter().filter(|e| e.from == node).count()
    }

    /// Undirected connected components, each sorted, ordered by smallest node.
    pub fn components(&self) -> Vec<Vec<usize>> {
        lattice::connected_components(self.nodes.len(), self.edges.iter().map(|e| (e.from, e.to)))
    }

    pub fn to_dot(&self, name: &str, label: impl Fn(&T) -> String) -> String {
        let mut out = format!("digraph {name} {{\n");
        for (i, n) in self.nodes.iter().enumerate() {
            out.push_str(&format!("  n{i} [label=\"{}\"];\n", label(n)));
        }
        for e in &self.edges {
            out.push_str(&format!(
                "  n{} -> n{} [label=\"{}\"];\n",
                e.from, e.to, e.label
            ));
        }
        out.push_str("}\n");
        out
    }
}

/// Invisible part of the medial quiver: arrows on directed cycles where every
/// compatible function vanishes, grouped by strongly connected component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Invisible {
    pub arrows: Vec<AngleId>,
    pub edges: Vec<EdgeId>,
    pub components: Vec<Vec<EdgeId>>,
}

impl Invisible {
    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edges.binary_search(&e).is_ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GammaInv {
    pub connected: bool,
    pub components: usize,
}

/// A connected planar map with a valid weight.
#[derive(Debug)]
pub struct DecoratedGraph {
    map: PlanarMap,
    quiver: MedialQuiver,
    weight: Weight,
    states: OnceLock<Vec<AngularFunction>>,
    invisible: OnceLock<Option<Invisible>>,
}

impl Clone for DecoratedGraph {
    fn clone(&self) -> Self {
        DecoratedGraph {
            map: self.map.clone(),
            quiver: self.quiver.clone(),
            weight: self.weight.clone(),
            states: self.states.clone(),
            invisible: self.invisible.clone(),
        }
    }
}

impl DecoratedGraph {
    pub fn new(map: PlanarMap, weight: Weight) -> Result<Self> {
        if !validate_weight(&map, &weight)? {
            return Err(Error::InvalidWeight {
                vertex_total: weight.vertex.iter().sum(),
                face_total: weight.face.iter().sum(),
            });
        }
        if !map.is_connected() {
            return Err(Error::Disconnected);
        }
        let quiver = MedialQuiver::new(&map);
        Ok(DecoratedGraph {
            map,
            quiver,
            weight,
            states: OnceLock::new(),
            invisible: OnceLock::new(),
        })
    }

    pub fn map(&self) -> &PlanarMap {
        &self.map
    }

    pub fn quiver(&self) -> &MedialQuiver {
        &self.quiver
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    pub fn num_angles(&self) -> usize {
        self.map.num_darts()
    }

    fn check_edge(&self, e: EdgeId) -> Result<()> {
        if e.0 < self.map.num_edges() {
            Ok(())
        } else {
            Err(Error::UnknownEdge(e.0))
        }
    }

    /// All compatible angular functions, in lexicographic order.
    pub fn states(&self) -> &[AngularFunction] {
        self.states
            .get_or_init(|| enumerate(&self.map, &self.weight))
    }

    pub fn is_compatible(&self, g: &AngularFunction) -> bool {
        g.is_compatible(&self.map, &self.weight)
    }

    pub fn is_movable(&self, g: &AngularFunction, e: EdgeId) -> Result<bool> {
        self.check_edge(e)?;
        Ok(self.quiver.outgoing(e).iter().all(|&a| g.get(a) > 0))
    }

    pub fn is_anti_movable(&self, g: &AngularFunction, e: EdgeId) -> Result<bool> {
        self.check_edge(e)?;
        Ok(self.quiver.incoming(e).iter().all(|&a| g.get(a) > 0))
    }

    /// Counterclockwise move: `g + δχ_e`.
    pub fn mov(&self, g: &AngularFunction, e: EdgeId) -> Result<AngularFunction> {
        if !self.is_movable(g, e)? {
            return Err(Error::NotMovable(e));
        }
        Ok(self.shift(g, e, 1))
    }

    /// Clockwise move: `g − δχ_e`.
    pub fn anti_mov(&self, g: &AngularFunction, e: EdgeId) -> Result<AngularFunction> {
        if !self.is_anti_movable(g, e)? {
            return Err(Error::NotMovable(e));
        }
        Ok(self.shift(g, e, -1))
    }

    pub(crate) fn shift(&self, g: &AngularFunction, e: EdgeId, sign: i64) -> AngularFunction {
        let mut h = g.clone();
        for a in self.quiver.incoming(e) {
            h.bump(a, sign);
        }
        for a in self.quiver.outgoing(e) {
            h.bump(a, -sign);
        }
        h
    }

    /// The graph of compatible functions with one edge per applicable move.
    pub fn move_graph(&self) -> StateGraph<AngularFunction> {
        let nodes = self.states().to_vec();
        let mut edges = Vec::new();
        for (i, g) in nodes.iter().enumerate() {
            for e in self.map.edge_ids() {
                if let Ok(h) = self.mov(g, e) {
                    let j = nodes.binary_search(&h).expect("move leaves the state set");
                    edges.push(StateEdge {
                        from: i,
                        to: j,
                        label: e,
                    });
                }
            }
        }
        StateGraph { nodes, edges }
    }

    /// Pairing of a cycle with the weight, evaluated through a compatible function.
    pub fn lambda(&self, c: &AngularCycle, g: &AngularFunction) -> i64 {
        c.arrows().iter().map(|&a| g.get(a)).sum()
    }

    fn reference_state(&self) -> Result<&AngularFunction> {
        self.states().first().ok_or(Error::EmptyStateSet)
    }

    pub fn invisible(&self) -> Result<&Invisible> {
        self.invisible
            .get_or_init(|| {
                let g0 = self.states().first()?;
                Some(invisible_part(&self.quiver, g0))
            })
            .as_ref()
            .ok_or(Error::EmptyStateSet)
    }

    /// Minimum pairing over non-zero directed cycles.
    pub fn nilpotency_degree(&self) -> Result<i64> {
        let g0 = self.reference_state()?;
        Ok(
            min_weight_cycle(&self.quiver, g0)
                .expect("medial quiver of a connected map has cycles"),
        )
    }

    pub fn require_nilpotency_zero(&self) -> Result<()> {
        match self.nilpotency_degree()? {
            0 => Ok(()),
            m => Err(Error::NotNilpotencyZero(m)),
        }
    }

    /// Connectivity of the graph of invisible connected cycles, via the
    /// cycle-carrying strongly connected components of the invisible subgraph.
    pub fn gamma_inv(&self) -> Result<GammaInv> {
        self.require_nilpotency_zero()?;
        let inv = self.invisible()?;
        Ok(GammaInv {
            connected: inv.components.len() == 1,
            components: inv.components.len(),
        })
    }

    /// A weight-zero cycle around a vertex or face, useful as an invisible witness.
    pub fn zero_weight_cycles(&self) -> Vec<Vec<AngleId>> {
        let mut out = Vec::new();
        for v in self.map.vertex_ids() {
            if self.weight.vertex(v) == 0 {
                out.push(self.quiver.vertex_cycle(v).to_vec());
            }
        }
        for f in self.map.face_ids() {
            if self.weight.face(f) == 0 {
                out.push(self.quiver.face_cycle(f).to_vec());
            }
        }
        out
    }
}

fn enumerate(map: &PlanarMap, weight: &Weight) -> Vec<AngularFunction> {
    let n = map.num_darts();
    let angles = map.angles();
    let mut rem_v: Vec<i64> = weight.vertex.clone();
    let mut rem_f: Vec<i64> = weight.face.clone();
    // for each angle: is it the last one (in canonical order) at its vertex / in its face
    let mut last_v = vec![usize::MAX; map.num_vertices()];
    let mut last_f = vec![usize::MAX; map.num_faces()];
    for a in &angles {
        last_v[a.vertex.0] = a.id.0;
        last_f[a.face.0] = a.id.0;
    }
    // vertices and faces with no angles cannot occur: every vertex has degree >= 2
    let mut out = Vec::new();
    let mut current = vec![0i64; n];

    struct Ctx<'a> {
        angles: &'a [crate::planar::Angle],
        last_v: &'a [usize],
        last_f: &'a [usize],
    }

    fn rec(
        i: usize,
        ctx: &Ctx<'_>,
        rem_v: &mut [i64],
        rem_f: &mut [i64],
        current: &mut [i64],
        out: &mut Vec<AngularFunction>,
    ) {
        if i == ctx.angles.len() {
            out.push(AngularFunction(current.to_vec()));
            return;
        }
        let a = &ctx.angles[i];
        let (v, f) = (a.vertex.0, a.face.0);
        let hi = rem_v[v].min(rem_f[f]);
        let lo = if ctx.last_v[v] == i {
            rem_v[v]
        } else if ctx.last_f[f] == i {
            rem_f[f]
        } else {
            0
        };
        if lo > hi {
            return;
        }
        let hi = if ctx.last_v[v] == i || ctx.last_f[f] == i {
            lo
        } else {
            hi
        };
        if ctx.last_v[v] == i && ctx.last_f[f] == i && rem_v[v] != rem_f[f] {
            return;
        }
        for x in lo..=hi {
            current[i] = x;
            rem_v[v] -= x;
            rem_f[f] -= x;
            rec(i + 1, ctx, rem_v, rem_f, current, out);
            rem_v[v] += x;
            rem_f[f] += x;
        }
        current[i] = 0;
    }

    let ctx = Ctx {
        angles: &angles,
        last_v: &last_v,
        last_f: &last_f,
    };
    rec(0, &ctx, &mut rem_v, &mut rem_f, &mut current, &mut out);
    out
}

/// Enumerates the compatible angular functions of a connected map, sorted.
pub fn enumerate_compatible(map: &PlanarMap, weight: &Weight) -> Vec<AngularFunction> {
    enumerate(map, weight)
}

fn zero_subgraph(quiver: &MedialQuiver, g: &AngularFunction) -> DiGraph<(), AngleId> {
    let mut graph = DiGraph::new();
    for _ in 0..quiver.num_vertices() {
        graph.add_node(());
    }
    for (i, arr) in quiver.arrows().iter().enumerate() {
        if g.get(AngleId(i)) == 0 {
            graph.add_edge(
                NodeIndex::new(arr.source.0),
                NodeIndex::new(arr.target.0),
                AngleId(i),
            );
        }
    }
    graph
}

fn invisible_part(quiver: &MedialQuiver, g0: &AngularFunction) -> Invisible {
    let graph = zero_subgraph(quiver, g0);
    let mut comp_of = vec![usize::MAX; quiver.num_vertices()];
    let mut components: Vec<Vec<EdgeId>> = tarjan_scc(&graph)
        .into_iter()
        .filter(|scc| scc.len() >= 2)
        .map(|scc| {
            let mut c: Vec<EdgeId> = scc.iter().map(|n| EdgeId(n.index())).collect();
            c.sort();
            c
        })
        .collect();
    components.sort();
    for (k, c) in components.iter().enumerate() {
        for e in c {
            comp_of[e.0] = k;
        }
    }
    let arrows: Vec<AngleId> = quiver
        .arrows()
        .iter()
        .enumerate()
        .filter(|&(i, arr)| {
            g0.get(AngleId(i)) == 0
                && comp_of[arr.source.0] != usize::MAX
                && comp_of[arr.source.0] == comp_of[arr.target.0]
        })
        .map(|(i, _)| AngleId(i))
        .collect();
    let mut edges: Vec<EdgeId> = components.iter().flatten().copied().collect();
    edges.sort();
    Invisible {
        arrows,
        edges,
        components,
    }
}

/// Arrows lying on a directed cycle inside the zero set of a compatible function.
pub fn invisible_subgraph(dg: &DecoratedGraph) -> Result<Vec<AngleId>> {
    Ok(dg.invisible()?.arrows.clone())
}

/// Minimum total weight of a directed cycle, with non-negative arrow weights `g`.
pub fn min_weight_cycle(quiver: &MedialQuiver, g: &AngularFunction) -> Option<i64> {
    let mut graph: DiGraph<(), i64> = DiGraph::new();
    for _ in 0..quiver.num_vertices() {
        graph.add_node(());
    }
    for (i, arr) in quiver.arrows().iter().enumerate() {
        graph.add_edge(
            NodeIndex::new(arr.source.0),
            NodeIndex::new(arr.target.0),
            g.get(AngleId(i)),
        );
    }
    let mut best: Option<i64> = None;
    for start in 0..quiver.num_vertices() {
        let dist = dijkstra(&graph, NodeIndex::new(start), None, |e| *e.weight());
        // close the cycle with an arrow back into `start`
        for (i, arr) in quiver.arrows().iter().enumerate() {
            if arr.target.0 != start {
                continue;
            }
            if let Some(&d) = dist.get(&NodeIndex::new(arr.source.0)) {
                let total = d + g.get(AngleId(i));
                best = Some(best.map_or(total, |b| b.min(total)));
            }
        }
    }
    best
}

pub fn nilpotency_degree(dg: &DecoratedGraph) -> Result<i64> {
    dg.nilpotency_degree()
}

pub fn gamma_inv_connected(dg: &DecoratedGraph) -> Result<GammaInv> {
    dg.gamma_inv()
}

pub fn build_l_graph(dg: &DecoratedGraph) -> StateGraph<AngularFunction> {
    dg.move_graph()
}
