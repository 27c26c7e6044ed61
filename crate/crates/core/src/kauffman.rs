//! Link diagrams, Kauffman weights and states, and the clock lattice.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{self, FiniteLattice, FinitePoset};
use crate::planar::{AngleId, EdgeId, FaceId, PlanarMap, VertexId};
use crate::weights::{AngularFunction, DecoratedGraph, StateEdge, StateGraph, Weight};

/// A connected 4-regular planar map with a marked edge whose two sides are distinct faces.
#[derive(Debug, Clone)]
pub struct LinkDiagram {
    map: PlanarMap,
    marked_edge: EdgeId,
    marked_faces: [FaceId; 2],
}

impl LinkDiagram {
    pub fn new(map: PlanarMap, marked_edge: EdgeId) -> Result<Self> {
        if let Some(v) = map.vertex_ids().find(|&v| map.degree(v) != 4) {
            return Err(Error::NotFourRegular(v));
        }
        if !map.is_connected() {
            return Err(Error::Disconnected);
        }
        if marked_edge.0 >= map.num_edges() {
            return Err(Error::UnknownEdge(marked_edge.0));
        }
        let marked_faces = distinct_faces(&map, marked_edge)?;
        Ok(LinkDiagram {
            map,
            marked_edge,
            marked_faces,
        })
    }

    pub fn map(&self) -> &PlanarMap {
        &self.map
    }

    pub fn marked_edge(&self) -> EdgeId {
        self.marked_edge
    }

    pub fn marked_faces(&self) -> [FaceId; 2] {
        self.marked_faces
    }

    pub fn num_crossings(&self) -> usize {
        self.map.num_vertices()
    }

    pub fn kauffman_weight(&self) -> Weight {
        kauffman_weight(&self.map, self.marked_edge).expect("checked at construction")
    }

    pub fn kauffman_graph(&self) -> DecoratedGraph {
        DecoratedGraph::new(self.map.clone(), self.kauffman_weight())
            .expect("Kauffman weight of a connected diagram is valid")
    }

    /// Same diagram with another marked edge.
    pub fn remarked(&self, marked_edge: EdgeId) -> Result<Self> {
        LinkDiagram::new(self.map.clone(), marked_edge)
    }
}

fn distinct_faces(map: &PlanarMap, e: EdgeId) -> Result<[FaceId; 2]> {
    let [f1, f2] = map.edge_faces(e);
    if f1 == f2 {
        Err(Error::MarkedFacesNotDistinct)
    } else {
        Ok(if f1 < f2 { [f1, f2] } else { [f2, f1] })
    }
}

/// Weight 1 on every vertex and face except the two faces beside `e`, which get 0.
pub fn kauffman_weight(map: &PlanarMap, e: EdgeId) -> Result<Weight> {
    if e.0 >= map.num_edges() {
        return Err(Error::UnknownEdge(e.0));
    }
    let marked = distinct_faces(map, e)?;
    let faces = map
        .face_ids()
        .map(|f| if marked.contains(&f) { 0 } else { 1 })
        .collect();
    Ok(Weight::new(vec![1; map.num_vertices()], faces))
}

/// A Kauffman state: one marked angle per crossing, sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct KauffmanState(Vec<AngleId>);

impl KauffmanState {
    pub fn new(mut angles: Vec<AngleId>) -> Self {
        angles.sort();
        KauffmanState(angles)
    }

    pub fn angles(&self) -> &[AngleId] {
        &self.0
    }

    pub fn contains(&self, a: AngleId) -> bool {
        self.0.binary_search(&a).is_ok()
    }

    pub fn is_valid(&self, diagram: &LinkDiagram) -> bool {
        let map = diagram.map();
        let count = |angles: Vec<AngleId>| angles.iter().filter(|&&a| self.contains(a)).count();
        self.0.iter().all(|a| a.0 < map.num_darts())
            && map.vertex_ids().all(|v| count(map.vertex_angles(v)) == 1)
            && map.face_ids().all(|f| {
                let want = if diagram.marked_faces.contains(&f) {
                    0
                } else {
                    1
                };
                count(map.face_angles(f)) == want
            })
    }

    pub fn to_picture(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        parts.join(" ")
    }
}

/// Characteristic function of a state.
pub fn chi(diagram: &LinkDiagram, state: &KauffmanState) -> AngularFunction {
    let mut values = vec![0; diagram.map().num_darts()];
    for a in state.angles() {
        values[a.0] = 1;
    }
    AngularFunction::new(values)
}

/// Inverse of [`chi`] on 0/1 functions.
pub fn chi_inverse(g: &AngularFunction) -> KauffmanState {
    KauffmanState::new(g.support())
}

/// Kauffman states obtained from the compatible functions of the Kauffman weight, sorted.
pub fn enumerate_kauffman_states(diagram: &LinkDiagram) -> Vec<KauffmanState> {
    let dg = diagram.kauffman_graph();
    let mut states: Vec<KauffmanState> = dg.states().iter().map(chi_inverse).collect();
    states.sort();
    states
}

/// Kauffman states by direct search: each crossing picks one angle outside the
/// marked faces, and every unmarked face is picked exactly once. Sorted.
pub fn enumerate_kauffman_states_direct(diagram: &LinkDiagram) -> Vec<KauffmanState> {
    let map = diagram.map();
    let mut used = vec![false; map.num_faces()];
    for f in diagram.marked_faces {
        used[f.0] = true;
    }
    let vertices: Vec<VertexId> = map.vertex_ids().collect();
    let mut picked = Vec::new();
    let mut out = Vec::new();

    fn rec(
        i: usize,
        map: &PlanarMap,
        vertices: &[VertexId],
        used: &mut [bool],
        picked: &mut Vec<AngleId>,
        out: &mut Vec<KauffmanState>,
    ) {
        if i == vertices.len() {
            if used.iter().all(|&u| u) {
                out.push(KauffmanState::new(picked.clone()));
            }
            return;
        }
        for a in map.vertex_angles(vertices[i]) {
            let f = map.angle(a).face;
            if used[f.0] {
                continue;
            }
            used[f.0] = true;
            picked.push(a);
            rec(i + 1, map, vertices, used, picked, out);
            picked.pop();
            used[f.0] = false;
        }
    }

    rec(0, map, &vertices, &mut used, &mut picked, &mut out);
    out.sort();
    out
}

/// Counterclockwise move along `e`: both state angles that leave `e` turn one
/// step counterclockwise around their crossings.
pub fn kauffman_move(
    diagram: &LinkDiagram,
    state: &KauffmanState,
    e: EdgeId,
) -> Result<KauffmanState> {
    if e.0 >= diagram.map().num_edges() {
        return Err(Error::UnknownEdge(e.0));
    }
    let map = diagram.map();
    if e == diagram.marked_edge {
        return Err(Error::NotApplicable(e));
    }
    let darts = map.edge_darts(e);
    if !darts.iter().all(|&d| state.contains(AngleId(d))) {
        return Err(Error::NotApplicable(e));
    }
    let mut angles: Vec<AngleId> = state
        .angles()
        .iter()
        .copied()
        .filter(|a| !darts.contains(&a.0))
        .collect();
    angles.extend(darts.iter().map(|&d| AngleId(map.rotation_inverse(d))));
    Ok(KauffmanState::new(angles))
}

/// The move graph on Kauffman states, with nodes in sorted order.
pub fn kauffman_move_graph(diagram: &LinkDiagram) -> StateGraph<KauffmanState> {
    let nodes = enumerate_kauffman_states(diagram);
    let mut edges = Vec::new();
    for (i, k) in nodes.iter().enumerate() {
        for e in diagram.map().edge_ids() {
            if let Ok(next) = kauffman_move(diagram, k, e) {
                let j = nodes
                    .binary_search(&next)
                    .expect("move leaves the state set");
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

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeCheck {
    pub prime: bool,
    /// A pair of edges whose removal splits the vertices into two non-empty parts.
    pub witness: Option<(EdgeId, EdgeId)>,
}

/// Looks for a separating cut of at most two edges.
pub fn is_prime_diagram(map: &PlanarMap) -> PrimeCheck {
    let edges: Vec<EdgeId> = map.edge_ids().collect();
    let splits = |removed: &[EdgeId]| {
        let pairs = edges.iter().filter(|e| !removed.contains(e)).map(|&e| {
            let [a, b] = map.edge_endpoints(e);
            (a.0, b.0)
        });
        lattice::connected_components(map.num_vertices(), pairs).len() > 1
    };
    for (i, &e1) in edges.iter().enumerate() {
        for &e2 in &edges[i..] {
            let removed: &[EdgeId] = if e1 == e2 { &[e1] } else { &[e1, e2] };
            if splits(removed) {
                return PrimeCheck {
                    prime: false,
                    witness: Some((e1, e2)),
                };
            }
        }
    }
    PrimeCheck {
        prime: true,
        witness: None,
    }
}

/// The certified lattice of Kauffman states of a prime diagram, ordered by
/// counterclockwise moves and graded by distance from the minimum.
#[derive(Debug, Clone, Serialize)]
pub struct ClockLattice {
    pub lattice: FiniteLattice<KauffmanState>,
    pub graph: StateGraph<KauffmanState>,
    pub gamma_inv_components: usize,
}

pub fn clock_lattice(
    diagram: &LinkDiagram,
    exhaustive_bound: usize,
    seed: u64,
) -> Result<ClockLattice> {
    let prime = is_prime_diagram(diagram.map());
    if let Some((a, b)) = prime.witness {
        return Err(Error::NotPrime(a, b));
    }
    let dg = diagram.kauffman_graph();
    let gamma = dg.gamma_inv()?;
    if !gamma.connected {
        return Err(Error::CertificationFailed(format!(
            "graph of invisible cycles has {} components",
            gamma.components
        )));
    }
    let graph = kauffman_move_graph(diagram);
    if graph.nodes.is_empty() {
        return Err(Error::EmptyStateSet);
    }
    if graph.components().len() != 1 {
        return Err(Error::CertificationFailed(
            "state graph is not connected".into(),
        ));
    }
    let poset = FinitePoset::from_relations(
        graph.nodes.len(),
        graph.edges.iter().map(|e| (e.from, e.to)),
    )?;
    let grade = grade_from_minimum(&poset)?;
    let lattice =
        FiniteLattice::certify(graph.nodes.clone(), poset, grade, exhaustive_bound, seed)?;
    Ok(ClockLattice {
        lattice,
        graph,
        gamma_inv_components: gamma.components,
    })
}

/// Grade of each element as the length of a longest chain from the unique minimum.
pub(crate) fn grade_from_minimum(p: &FinitePoset) -> Result<Vec<i64>> {
    let mins = p.minimal();
    if mins.len() != 1 {
        return Err(Error::CertificationFailed(format!(
            "{} minimal elements",
            mins.len()
        )));
    }
    let n = p.len();
    let mut grade = vec![0i64; n];
    let mut order: Vec<usize> = (0..n).collect();
    // a linear extension: sort by down-set size
    let down: Vec<usize> = (0..n)
        .map(|a| (0..n).filter(|&b| p.leq(b, a)).count())
        .collect();
    order.sort_by_key(|&a| down[a]);
    for &b in &order {
        for &(lo, hi) in p.covers() {
            if hi == b {
                grade[b] = grade[b].max(grade[lo] + 1);
            }
        }
    }
    Ok(grade)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::planar::RotationData;

    #[test]
    fn trefoil_weight() {
        let d = corpus::trefoil();
        let w = d.kauffman_weight();
        assert_eq!(w.vertex_values(), &[1, 1, 1]);
        let mut faces = w.face_values().to_vec();
        faces.sort();
        assert_eq!(faces, vec![0, 0, 1, 1, 1]);
        for f in d.marked_faces() {
            assert_eq!(w.face(f), 0);
        }
        assert!(crate::weights::validate_weight(d.map(), &w).unwrap());
        assert!(w.is_characteristic());
    }

    #[test]
    fn bridge_gives_coinciding_faces() {
        // two digons joined by a bridge between vertices 1 and 2
        let data = RotationData {
            vertices: vec![vec![0, 1], vec![2, 3, 8], vec![9, 4, 5], vec![6, 7]],
            edges: vec![[0, 2], [1, 3], [8, 9], [4, 6], [5, 7]],
        };
        let map = PlanarMap::build(&data).unwrap();
        let bridge = map.dart_edge(map.dart_by_label(8).unwrap());
        assert_eq!(
            kauffman_weight(&map, bridge),
            Err(Error::MarkedFacesNotDistinct)
        );
    }

    #[test]
    fn rejects_non_four_regular() {
        let err = LinkDiagram::new(corpus::triangle(), EdgeId(0)).unwrap_err();
        assert_eq!(err, Error::NotFourRegular(VertexId(0)));
    }

    #[test]
    fn state_counts() {
        assert_eq!(enumerate_kauffman_states(&corpus::trefoil()).len(), 3);
        assert_eq!(enumerate_kauffman_states(&corpus::figure_eight()).len(), 5);
        for entry in corpus::diagrams() {
            let states = enumerate_kauffman_states(&entry);
            assert!(!states.is_empty(), "{}", entry.name);
            assert_eq!(
                states,
                enumerate_kauffman_states_direct(&entry),
                "{}",
                entry.name
            );
            assert!(states.iter().all(|k| k.is_valid(&entry)));
        }
    }

    #[test]
    fn moves_commute_with_chi() {
        for entry in corpus::diagrams() {
            let dg = entry.kauffman_graph();
            for k in enumerate_kauffman_states(&entry) {
                let g = chi(&entry, &k);
                assert_eq!(chi_inverse(&g), k);
                for e in entry.map().edge_ids() {
                    let lhs = kauffman_move(&entry, &k, e).map(|k2| chi(&entry, &k2));
                    assert_eq!(lhs.ok(), dg.mov(&g, e).ok(), "{} {e}", entry.name);
                }
            }
        }
    }

    #[test]
    fn move_rotates_markers_counterclockwise() {
        let entry = corpus::trefoil();
        let map = entry.map();
        let graph = kauffman_move_graph(&entry);
        assert_eq!(graph.edges.len(), 2);
        for edge in &graph.edges {
            let before = &graph.nodes[edge.from];
            let after = &graph.nodes[edge.to];
            for d in map.edge_darts(edge.label) {
                assert!(before.contains(AngleId(d)));
                assert!(!after.contains(AngleId(d)));
                assert!(after.contains(AngleId(map.rotation_inverse(d))));
                assert_eq!(
                    map.angle(AngleId(map.rotation_inverse(d))).vertex,
                    map.angle(AngleId(d)).vertex
                );
            }
        }
    }

    #[test]
    fn inapplicable_moves() {
        let entry = corpus::trefoil();
        let states = enumerate_kauffman_states(&entry);
        for k in &states {
            assert_eq!(
                kauffman_move(&entry, k, entry.marked_edge()),
                Err(Error::NotApplicable(entry.marked_edge()))
            );
        }
        let top = &states[kauffman_move_graph(&entry)
            .edges
            .iter()
            .map(|e| e.to)
            .max()
            .unwrap()];
        let stuck = entry
            .map()
            .edge_ids()
            .filter(|&e| kauffman_move(&entry, top, e).is_err())
            .count();
        assert!(stuck > 0);
    }

    #[test]
    fn primality() {
        assert!(is_prime_diagram(corpus::trefoil().map()).prime);
        assert!(is_prime_diagram(corpus::hopf().map()).prime);
        assert!(is_prime_diagram(corpus::figure_eight().map()).prime);
        let sum = corpus::trefoil_sum();
        let check = is_prime_diagram(sum.map());
        assert!(!check.prime);
        let (a, b) = check.witness.unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn clock_lattices() {
        let tre = clock_lattice(&corpus::trefoil(), 500, 0).unwrap();
        assert_eq!(tre.lattice.len(), 3);
        assert_eq!(tre.lattice.covers().len(), 2);
        let fig = clock_lattice(&corpus::figure_eight(), 500, 0).unwrap();
        assert_eq!(fig.lattice.len(), 5);
        let sum = corpus::trefoil_sum();
        assert!(matches!(
            clock_lattice(&sum, 500, 0),
            Err(Error::NotPrime(_, _))
        ));
    }
}
