//! Built-in maps and link diagrams.

use std::ops::Deref;

use crate::io;
use crate::kauffman::LinkDiagram;
use crate::planar::{FaceId, PlanarMap};
use crate::weights::{DecoratedGraph, Weight};

pub const TREFOIL: &str = include_str!("../corpus/trefoil.yaml");
pub const FIGURE_EIGHT: &str = include_str!("../corpus/figure_eight.yaml");
pub const HOPF: &str = include_str!("../corpus/hopf.yaml");
pub const TORUS_2_2: &str = include_str!("../corpus/torus_2_2.yaml");
pub const TORUS_2_3: &str = include_str!("../corpus/torus_2_3.yaml");
pub const TORUS_2_4: &str = include_str!("../corpus/torus_2_4.yaml");
pub const TORUS_2_5: &str = include_str!("../corpus/torus_2_5.yaml");
pub const TORUS_2_6: &str = include_str!("../corpus/torus_2_6.yaml");
pub const TREFOIL_SUM: &str = include_str!("../corpus/trefoil_sum.yaml");
pub const TRIANGLE: &str = include_str!("../corpus/triangle.yaml");
pub const DIGON: &str = include_str!("../corpus/digon.yaml");
pub const TRIANGLE_WEIGHT: &str = include_str!("../corpus/triangle.weight.yaml");

/// Diagram files by name.
pub const DIAGRAM_SOURCES: [(&str, &str); 9] = [
    ("trefoil", TREFOIL),
    ("figure_eight", FIGURE_EIGHT),
    ("hopf", HOPF),
    ("torus_2_2", TORUS_2_2),
    ("torus_2_3", TORUS_2_3),
    ("torus_2_4", TORUS_2_4),
    ("torus_2_5", TORUS_2_5),
    ("torus_2_6", TORUS_2_6),
    ("trefoil_sum", TREFOIL_SUM),
];

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub diagram: LinkDiagram,
}

impl Deref for CorpusEntry {
    type Target = LinkDiagram;

    fn deref(&self) -> &LinkDiagram {
        &self.diagram
    }
}

fn parse_map(text: &str) -> PlanarMap {
    io::parse_map_file(text)
        .and_then(|f| f.build_map())
        .expect("built-in map is valid")
}

fn entry(name: &'static str, text: &str) -> CorpusEntry {
    let file = io::parse_map_file(text).expect("built-in diagram parses");
    let map = file.build_map().expect("built-in diagram is planar");
    let marked = file
        .marked_edge(&map)
        .expect("built-in marked dart exists")
        .expect("built-in diagram has a marked edge");
    CorpusEntry {
        name,
        diagram: LinkDiagram::new(map, marked).expect("built-in diagram is a link diagram"),
    }
}

/// All built-in diagrams.
pub fn diagrams() -> Vec<CorpusEntry> {
    DIAGRAM_SOURCES.iter().map(|&(n, t)| entry(n, t)).collect()
}

pub fn by_name(name: &str) -> Option<CorpusEntry> {
    DIAGRAM_SOURCES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|&(n, t)| entry(n, t))
}

pub fn trefoil() -> CorpusEntry {
    entry("trefoil", TREFOIL)
}

pub fn figure_eight() -> CorpusEntry {
    entry("figure_eight", FIGURE_EIGHT)
}

pub fn hopf() -> CorpusEntry {
    entry("hopf", HOPF)
}

pub fn trefoil_sum() -> CorpusEntry {
    entry("trefoil_sum", TREFOIL_SUM)
}

pub fn torus(n: usize) -> CorpusEntry {
    let (name, text) = DIAGRAM_SOURCES
        .iter()
        .find(|(name, _)| *name == format!("torus_2_{n}"))
        .expect("torus links are built in for 2 <= n <= 6");
    entry(name, text)
}

pub fn triangle() -> PlanarMap {
    parse_map(TRIANGLE)
}

pub fn digon() -> PlanarMap {
    parse_map(DIGON)
}

/// Vertices 1, 1, 2 and both faces 2.
pub fn triangle_weight() -> Weight {
    io::parse_weight(TRIANGLE_WEIGHT, &triangle()).expect("built-in weight parses")
}

pub fn triangle_decorated() -> DecoratedGraph {
    DecoratedGraph::new(triangle(), triangle_weight()).expect("built-in weight is valid")
}

/// Hopf diagram with weight 1 on both crossings and on two opposite faces,
/// and 0 on the remaining two faces, which share no edge.
pub fn hopf_two_zero_faces() -> DecoratedGraph {
    let map = hopf().map().clone();
    let [z1, z2] = disjoint_face_pair(&map);
    let faces = map
        .face_ids()
        .map(|f| if f == z1 || f == z2 { 0 } else { 1 })
        .collect();
    let weight = Weight::new(vec![1; map.num_vertices()], faces);
    DecoratedGraph::new(map, weight).expect("weight is balanced")
}

fn disjoint_face_pair(map: &PlanarMap) -> [FaceId; 2] {
    let edges_of = |f: FaceId| -> Vec<_> {
        map.face_darts(f)
            .iter()
            .map(|&d| map.dart_edge(d))
            .collect()
    };
    for f1 in map.face_ids() {
        for f2 in map.face_ids().filter(|&f2| f2 > f1) {
            let e1 = edges_of(f1);
            if edges_of(f2).iter().all(|e| !e1.contains(e)) {
                return [f1, f2];
            }
        }
    }
    unreachable!("the Hopf diagram has two faces without a common edge")
}

/// Instances with the Kauffman weight doubled: nilpotency degree zero, not characteristic.
pub fn doubled_kauffman() -> Vec<(&'static str, DecoratedGraph)> {
    ["trefoil", "hopf", "torus_2_2"]
        .into_iter()
        .map(|name| {
            let d = by_name(name).expect("built in");
            let dg = DecoratedGraph::new(d.map().clone(), d.kauffman_weight().scaled(2))
                .expect("doubled weight is balanced");
            (name, dg)
        })
        .collect()
}
