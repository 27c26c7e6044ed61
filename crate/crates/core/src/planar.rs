//! Sphere-embedded multigraphs as combinatorial maps, and the directed medial quiver.
//!
//! A map is given by its darts, the involution pairing the two darts of each
//! edge, and the clockwise rotation of darts around each vertex. Faces are the
//! cycles of `rotation ∘ involution`. All indices are canonical: darts are
//! numbered by increasing input label, and vertices, edges and faces are sorted
//! by their smallest dart.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

macro_rules! index_type {
    ($name:ident, $prefix:literal) => {
        #[derive(
            Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
        )]
        #[serde(transparent)]
        pub struct $name(pub usize);

        impl $name {
            pub fn index(self) -> usize {
                self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, concat!($prefix, "{}"), self.0)
            }
        }
    };
}

index_type!(VertexId, "v");
index_type!(EdgeId, "e");
index_type!(FaceId, "f");
index_type!(AngleId, "a");

/// Raw rotation-system data: clockwise dart lists per vertex and the dart pairing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RotationData {
    pub vertices: Vec<Vec<u64>>,
    pub edges: Vec<[u64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarMap {
    labels: Vec<u64>,
    involution: Vec<usize>,
    rotation: Vec<usize>,
    rotation_inv: Vec<usize>,
    dart_vertex: Vec<VertexId>,
    dart_edge: Vec<EdgeId>,
    dart_face: Vec<FaceId>,
    vertices: Vec<Vec<usize>>,
    edges: Vec<[usize; 2]>,
    faces: Vec<Vec<usize>>,
    components: usize,
}

impl PlanarMap {
    /// Validates rotation data and derives vertices, edges and faces.
    pub fn build(data: &RotationData) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &d in data.vertices.iter().flatten() {
            if !seen.insert(d) {
                return Err(Error::MalformedInvolution(format!(
                    "dart {d} appears twice in the rotation"
                )));
            }
        }
        if seen.is_empty() {
            return Err(Error::MalformedInvolution("map has no darts".into()));
        }
        let labels: Vec<u64> = seen.into_iter().collect();
        let index: HashMap<u64, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let n = labels.len();

        let mut involution = vec![usize::MAX; n];
        for &[a, b] in &data.edges {
            let (ia, ib) = match (index.get(&a), index.get(&b)) {
                (Some(&ia), Some(&ib)) => (ia, ib),
                _ => {
                    return Err(Error::MalformedInvolution(format!(
                        "edge [{a}, {b}] uses a dart missing from the rotation"
                    )))
                }
            };
            if ia == ib {
                return Err(Error::MalformedInvolution(format!(
                    "dart {a} is paired with itself"
                )));
            }
            if involution[ia] != usize::MAX || involution[ib] != usize::MAX {
                return Err(Error::MalformedInvolution(format!(
                    "edge [{a}, {b}] reuses an already paired dart"
                )));
            }
            involution[ia] = ib;
            involution[ib] = ia;
        }
        if let Some(i) = involution.iter().position(|&j| j == usize::MAX) {
            return Err(Error::MalformedInvolution(format!(
                "dart {} is unpaired",
                labels[i]
            )));
        }

        let mut rotation = vec![0; n];
        let mut vertices: Vec<Vec<usize>> = Vec::with_capacity(data.vertices.len());
        for list in &data.vertices {
            if list.is_empty() {
                return Err(Error::MalformedInvolution("vertex with no darts".into()));
            }
            let darts: Vec<usize> = list.iter().map(|l| index[l]).collect();
            for (i, &d) in darts.iter().enumerate() {
                rotation[d] = darts[(i + 1) % darts.len()];
            }
            let start = darts.iter().enumerate().min_by_key(|(_, &d)| d).unwrap().0;
            let mut cyc = darts[start..].to_vec();
            cyc.extend_from_slice(&darts[..start]);
            vertices.push(cyc);
        }
        vertices.sort_by_key(|c| c[0]);

        let mut dart_vertex = vec![VertexId(0); n];
        for (v, cyc) in vertices.iter().enumerate() {
            for &d in cyc {
                dart_vertex[d] = VertexId(v);
            }
        }

        let mut edges: Vec<[usize; 2]> = (0..n)
            .filter(|&d| d < involution[d])
            .map(|d| [d, involution[d]])
            .collect();
        edges.sort();
        let mut dart_edge = vec![EdgeId(0); n];
        for (e, &[a, b]) in edges.iter().enumerate() {
            dart_edge[a] = EdgeId(e);
            dart_edge[b] = EdgeId(e);
        }

        for (e, &[a, b]) in edges.iter().enumerate() {
            if dart_vertex[a] == dart_vertex[b] {
                return Err(Error::LoopEdge(EdgeId(e)));
            }
        }
        for (v, cyc) in vertices.iter().enumerate() {
            if cyc.len() < 2 {
                return Err(Error::DegreeTooSmall {
                    vertex: VertexId(v),
                    degree: cyc.len(),
                });
            }
        }

        let mut rotation_inv = vec![0; n];
        for d in 0..n {
            rotation_inv[rotation[d]] = d;
        }

        // face permutation: next dart on a face is rotation(involution(d))
        let mut dart_face = vec![FaceId(usize::MAX); n];
        let mut faces = Vec::new();
        for start in 0..n {
            if dart_face[start].0 != usize::MAX {
                continue;
            }
            let id = FaceId(faces.len());
            let mut orbit = Vec::new();
            let mut d = start;
            loop {
                dart_face[d] = id;
                orbit.push(d);
                d = rotation[involution[d]];
                if d == start {
                    break;
                }
            }
            faces.push(orbit);
        }

        let mut map = PlanarMap {
            labels,
            involution,
            rotation,
            rotation_inv,
            dart_vertex,
            dart_edge,
            dart_face,
            vertices,
            edges,
            faces,
            components: 0,
        };
        map.check_euler()?;
        Ok(map)
    }

    fn check_euler(&mut self) -> Result<()> {
        let comp = self.vertex_components();
        let k = comp.iter().copied().max().map_or(0, |m| m + 1);
        let mut counts = vec![(0usize, 0usize, 0usize); k];
        for c in &comp {
            counts[*c].0 += 1;
        }
        for &[a, _] in &self.edges {
            counts[comp[self.dart_vertex[a].0]].1 += 1;
        }
        for orbit in &self.faces {
            counts[comp[self.dart_vertex[orbit[0]].0]].2 += 1;
        }
        for (v, e, f) in counts {
            if v as i64 - e as i64 + f as i64 != 2 {
                return Err(Error::NotSpherical {
                    vertices: v,
                    edges: e,
                    faces: f,
                });
            }
        }
        self.components = k;
        Ok(())
    }

    fn vertex_components(&self) -> Vec<usize> {
        let nv = self.vertices.len();
        let mut comp = vec![usize::MAX; nv];
        let mut next = 0;
        for s in 0..nv {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &d in &self.vertices[v] {
                    let w = self.dart_vertex[self.involution[d]].0;
                    if comp[w] == usize::MAX {
                        comp[w] = next;
                        queue.push_back(w);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn num_darts(&self) -> usize {
        self.labels.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn num_components(&self) -> usize {
        self.components
    }

    pub fn is_connected(&self) -> bool {
        self.components == 1
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn face_ids(&self) -> impl Iterator<Item = FaceId> {
        (0..self.faces.len()).map(FaceId)
    }

    /// Input label of a canonical dart index.
    pub fn dart_label(&self, dart: usize) -> u64 {
        self.labels[dart]
    }

    pub fn dart_by_label(&self, label: u64) -> Option<usize> {
        self.labels.binary_search(&label).ok()
    }

    pub fn involution(&self, dart: usize) -> usize {
        self.involution[dart]
    }

    /// Clockwise successor of a dart around its vertex.
    pub fn rotation(&self, dart: usize) -> usize {
        self.rotation[dart]
    }

    pub fn rotation_inverse(&self, dart: usize) -> usize {
        self.rotation_inv[dart]
    }

    pub fn dart_vertex(&self, dart: usize) -> VertexId {
        self.dart_vertex[dart]
    }

    pub fn dart_edge(&self, dart: usize) -> EdgeId {
        self.dart_edge[dart]
    }

    /// Face traced by the face permutation through `dart`.
    pub fn dart_face(&self, dart: usize) -> FaceId {
        self.dart_face[dart]
    }

    /// Clockwise darts around a vertex, starting at its smallest dart.
    pub fn vertex_darts(&self, v: VertexId) -> &[usize] {
        &self.vertices[v.0]
    }

    pub fn edge_darts(&self, e: EdgeId) -> [usize; 2] {
        self.edges[e.0]
    }

    /// Face-permutation orbit of a face, starting at its smallest dart.
    pub fn face_darts(&self, f: FaceId) -> &[usize] {
        &self.faces[f.0]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.vertices[v.0].len()
    }

    pub fn edge_endpoints(&self, e: EdgeId) -> [VertexId; 2] {
        let [a, b] = self.edges[e.0];
        [self.dart_vertex[a], self.dart_vertex[b]]
    }

    /// The two faces on either side of an edge (they may coincide).
    pub fn edge_faces(&self, e: EdgeId) -> [FaceId; 2] {
        let [a, b] = self.edges[e.0];
        [self.dart_face[a], self.dart_face[b]]
    }

    /// Canonical rotation data: darts relabelled `0..2E`, vertices and edges in canonical order.
    pub fn canonical_data(&self) -> RotationData {
        RotationData {
            vertices: self
                .vertices
                .iter()
                .map(|c| c.iter().map(|&d| d as u64).collect())
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|&[a, b]| [a as u64, b as u64])
                .collect(),
        }
    }

    /// Rotation data in the original dart labels, canonically ordered.
    pub fn to_rotation_data(&self) -> RotationData {
        RotationData {
            vertices: self
                .vertices
                .iter()
                .map(|c| c.iter().map(|&d| self.labels[d]).collect())
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|&[a, b]| [self.labels[a], self.labels[b]])
                .collect(),
        }
    }

    /// The angle keyed by `dart`: the corner between `dart` and its clockwise successor.
    pub fn angle(&self, a: AngleId) -> Angle {
        let d = a.0;
        let next = self.rotation[d];
        Angle {
            id: a,
            vertex: self.dart_vertex[d],
            face: self.dart_face[next],
            source_edge: self.dart_edge[d],
            target_edge: self.dart_edge[next],
            dart_pair: (d, next),
        }
    }

    pub fn angles(&self) -> Vec<Angle> {
        (0..self.num_darts())
            .map(|d| self.angle(AngleId(d)))
            .collect()
    }

    /// Angles at a vertex, clockwise.
    pub fn vertex_angles(&self, v: VertexId) -> Vec<AngleId> {
        self.vertices[v.0].iter().map(|&d| AngleId(d)).collect()
    }

    /// Angles inside a face, in the order the face boundary is traced.
    pub fn face_angles(&self, f: FaceId) -> Vec<AngleId> {
        self.faces[f.0]
            .iter()
            .map(|&d| AngleId(self.involution[d]))
            .collect()
    }
}

/// A corner of the map: two consecutive darts at a vertex, inside one face.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Angle {
    pub id: AngleId,
    pub vertex: VertexId,
    pub face: FaceId,
    pub source_edge: EdgeId,
    pub target_edge: EdgeId,
    pub dart_pair: (usize, usize),
}

/// Every angle of the map, keyed (and ordered) by its first dart.
pub fn angles_of(map: &PlanarMap) -> Vec<Angle> {
    map.angles()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Arrow {
    pub source: EdgeId,
    pub target: EdgeId,
}

/// The directed medial graph: one vertex per edge of the map, one arrow per angle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MedialQuiver {
    arrows: Vec<Arrow>,
    outgoing: Vec<[AngleId; 2]>,
    incoming: Vec<[AngleId; 2]>,
    vertex_cycles: Vec<Vec<AngleId>>,
    face_cycles: Vec<Vec<AngleId>>,
    arrow_vertex: Vec<VertexId>,
    arrow_face: Vec<FaceId>,
}

impl MedialQuiver {
    pub fn new(map: &PlanarMap) -> Self {
        let ne = map.num_edges();
        let angles = map.angles();
        let arrows: Vec<Arrow> = angles
            .iter()
            .map(|a| Arrow {
                source: a.source_edge,
                target: a.target_edge,
            })
            .collect();
        let mut out: Vec<Vec<AngleId>> = vec![Vec::with_capacity(2); ne];
        let mut inc: Vec<Vec<AngleId>> = vec![Vec::with_capacity(2); ne];
        for (i, arrow) in arrows.iter().enumerate() {
            out[arrow.source.0].push(AngleId(i));
            inc[arrow.target.0].push(AngleId(i));
        }
        let pair = |v: Vec<AngleId>| -> [AngleId; 2] {
            assert_eq!(v.len(), 2, "medial quiver vertex is not quadrivalent");
            [v[0], v[1]]
        };
        MedialQuiver {
            arrows,
            outgoing: out.into_iter().map(pair).collect(),
            incoming: inc.into_iter().map(pair).collect(),
            vertex_cycles: map.vertex_ids().map(|v| map.vertex_angles(v)).collect(),
            face_cycles: map.face_ids().map(|f| map.face_angles(f)).collect(),
            arrow_vertex: angles.iter().map(|a| a.vertex).collect(),
            arrow_face: angles.iter().map(|a| a.face).collect(),
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.outgoing.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn arrow(&self, a: AngleId) -> Arrow {
        self.arrows[a.0]
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    /// The two arrows leaving `e` (the angles a counterclockwise move decrements).
    pub fn outgoing(&self, e: EdgeId) -> [AngleId; 2] {
        self.outgoing[e.0]
    }

    /// The two arrows entering `e` (the angles a counterclockwise move increments).
    pub fn incoming(&self, e: EdgeId) -> [AngleId; 2] {
        self.incoming[e.0]
    }

    pub fn vertex_cycle(&self, v: VertexId) -> &[AngleId] {
        &self.vertex_cycles[v.0]
    }

    pub fn face_cycle(&self, f: FaceId) -> &[AngleId] {
        &self.face_cycles[f.0]
    }

    pub fn vertex_cycles(&self) -> &[Vec<AngleId>] {
        &self.vertex_cycles
    }

    pub fn face_cycles(&self) -> &[Vec<AngleId>] {
        &self.face_cycles
    }

    pub fn arrow_vertex(&self, a: AngleId) -> VertexId {
        self.arrow_vertex[a.0]
    }

    pub fn arrow_face(&self, a: AngleId) -> FaceId {
        self.arrow_face[a.0]
    }

    /// Checks in/out-degree 2, absence of loops, and that vertex and face cycles
    /// each partition the arrows into closed directed cycles.
    pub fn self_check(&self) -> std::result::Result<(), String> {
        let n = self.num_vertices();
        let mut indeg = vec![0usize; n];
        let mut outdeg = vec![0usize; n];
        for (i, a) in self.arrows.iter().enumerate() {
            if a.source == a.target {
                return Err(format!("arrow a{i} is a loop"));
            }
            outdeg[a.source.0] += 1;
            indeg[a.target.0] += 1;
        }
        if let Some(e) = (0..n).find(|&e| indeg[e] != 2 || outdeg[e] != 2) {
            return Err(format!(
                "vertex e{e} has in/out degree {}/{}",
                indeg[e], outdeg[e]
            ));
        }
        for (kind, cycles) in [("vertex", &self.vertex_cycles), ("face", &self.face_cycles)] {
            let mut used = vec![0usize; self.arrows.len()];
            for cyc in cycles {
                if !self.is_closed_path(cyc) {
                    return Err(format!("{kind} cycle {cyc:?} is not a closed path"));
                }
                for a in cyc {
                    used[a.0] += 1;
                }
            }
            if used.iter().any(|&u| u != 1) {
                return Err(format!("{kind} cycles do not use every arrow exactly once"));
            }
        }
        Ok(())
    }

    pub fn is_path(&self, arrows: &[AngleId]) -> bool {
        arrows.iter().all(|a| a.0 < self.arrows.len())
            && arrows
                .windows(2)
                .all(|w| self.arrows[w[0].0].target == self.arrows[w[1].0].source)
    }

    pub fn is_closed_path(&self, arrows: &[AngleId]) -> bool {
        match (arrows.first(), arrows.last()) {
            (Some(first), Some(last)) => {
                self.is_path(arrows) && self.arrows[last.0].target == self.arrows[first.0].source
            }
            _ => false,
        }
    }

    pub fn to_digraph(&self) -> DiGraph<EdgeId, AngleId> {
        let mut g = DiGraph::new();
        let nodes: Vec<_> = (0..self.num_vertices())
            .map(|e| g.add_node(EdgeId(e)))
            .collect();
        for (i, a) in self.arrows.iter().enumerate() {
            g.add_edge(nodes[a.source.0], nodes[a.target.0], AngleId(i));
        }
        g
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.num_vertices() > 0 && tarjan_scc(&self.to_digraph()).len() == 1
    }

    /// Graph-description export with arrows labelled by angle id.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph medial {\n");
        for e in 0..self.num_vertices() {
            out.push_str(&format!("  e{e};\n"));
        }
        for (i, a) in self.arrows.iter().enumerate() {
            out.push_str(&format!(
                "  {} -> {} [label=\"a{i}\"];\n",
                a.source, a.target
            ));
        }
        out.push_str("}\n");
        out
    }
}

pub fn build_planar_map(data: &RotationData) -> Result<PlanarMap> {
    PlanarMap::build(data)
}

pub fn medial_quiver(map: &PlanarMap) -> MedialQuiver {
    MedialQuiver::new(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn data(vertices: Vec<Vec<u64>>, edges: Vec<[u64; 2]>) -> RotationData {
        RotationData { vertices, edges }
    }

    #[test]
    fn triangle_and_digon() {
        let t = corpus::triangle();
        assert_eq!((t.num_vertices(), t.num_edges(), t.num_faces()), (3, 3, 2));
        assert_eq!(angles_of(&t).len(), 6);
        let q = medial_quiver(&t);
        assert_eq!((q.num_vertices(), q.num_arrows()), (3, 6));

        let d = corpus::digon();
        assert_eq!((d.num_vertices(), d.num_edges(), d.num_faces()), (2, 2, 2));
        assert_eq!(angles_of(&d).len(), 4);
    }

    #[test]
    fn digon_quiver_is_two_two_cycles() {
        let q = medial_quiver(&corpus::digon());
        assert_eq!(q.num_arrows(), 4);
        let forward = q.arrows().iter().filter(|a| a.source == EdgeId(0)).count();
        let backward = q.arrows().iter().filter(|a| a.source == EdgeId(1)).count();
        assert_eq!((forward, backward), (2, 2));
        assert!(q.arrows().iter().all(|a| a.source != a.target));
        // each vertex cycle is one of the two 2-cycles
        for c in q.vertex_cycles() {
            assert_eq!(c.len(), 2);
            assert!(q.is_closed_path(c));
        }
    }

    #[test]
    fn hopf_quiver() {
        let m = corpus::hopf().map().clone();
        assert_eq!(angles_of(&m).len(), 8);
        let q = medial_quiver(&m);
        assert_eq!((q.num_vertices(), q.num_arrows()), (4, 8));
        assert!(q.is_strongly_connected());
        q.self_check().unwrap();
    }

    #[test]
    fn rejects_loop() {
        let err = build_planar_map(&data(vec![vec![0, 1]], vec![[0, 1]])).unwrap_err();
        assert_eq!(err, Error::LoopEdge(EdgeId(0)));
    }

    #[test]
    fn rejects_degree_one() {
        // a path v0 - v1 - v2 closed up at v1 only
        let err = build_planar_map(&data(
            vec![vec![0], vec![1, 2], vec![3]],
            vec![[0, 1], [2, 3]],
        ))
        .unwrap_err();
        assert!(matches!(err, Error::DegreeTooSmall { degree: 1, .. }));
    }

    #[test]
    fn rejects_non_spherical() {
        // K4 is 3-connected, so of its 16 rotation systems only one embedding
        // and its mirror image lie on the sphere
        let edges = vec![[0, 3], [1, 6], [2, 9], [4, 7], [5, 10], [8, 11]];
        let mut planar = 0;
        for flips in 0..16u32 {
            let vertices = (0..4u64)
                .map(|v| {
                    let mut darts = vec![3 * v, 3 * v + 1, 3 * v + 2];
                    if flips & (1 << v) != 0 {
                        darts.swap(1, 2);
                    }
                    darts
                })
                .collect();
            match build_planar_map(&data(vertices, edges.clone())) {
                Ok(m) => {
                    assert_eq!(m.num_faces(), 4);
                    planar += 1;
                }
                Err(e) => assert!(matches!(e, Error::NotSpherical { faces: 2, .. })),
            }
        }
        assert_eq!(planar, 2);
    }

    #[test]
    fn rejects_bad_involution() {
        let unpaired = build_planar_map(&data(vec![vec![0, 1], vec![2, 3]], vec![[0, 2]]));
        assert!(matches!(unpaired, Err(Error::MalformedInvolution(_))));
        let fixed = build_planar_map(&data(vec![vec![0, 1], vec![2, 3]], vec![[0, 0], [1, 2]]));
        assert!(matches!(fixed, Err(Error::MalformedInvolution(_))));
        let reused = build_planar_map(&data(vec![vec![0, 1], vec![2, 3]], vec![[0, 2], [0, 3]]));
        assert!(matches!(reused, Err(Error::MalformedInvolution(_))));
    }

    #[test]
    fn each_edge_has_two_in_and_two_out() {
        for entry in corpus::diagrams() {
            let q = medial_quiver(entry.map());
            q.self_check().unwrap();
            assert!(q.is_strongly_connected(), "{}", entry.name);
        }
    }

    #[test]
    fn face_angles_lie_in_their_face() {
        let m = corpus::figure_eight().map().clone();
        for f in m.face_ids() {
            for a in m.face_angles(f) {
                assert_eq!(m.angle(a).face, f);
            }
        }
    }
}
