//! Text formats for maps, diagrams and weights.
//!
//! Map files are key-value text:
//!
//! ```text
//! vertices: [[0, 5], [1, 2], [3, 4]]   # clockwise darts per vertex
//! edges: [[0, 1], [2, 3], [4, 5]]      # dart pairs
//! marked_edge: 0                       # optional, any dart of the marked edge
//! ```
//!
//! Weight files map canonical vertex and face ids to values:
//!
//! ```text
//! vertices: {0: 1, 1: 1, 2: 2}
//! faces: {0: 2, 1: 2}
//! ```

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::planar::{EdgeId, PlanarMap, RotationData};
use crate::weights::Weight;

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    pub vertices: Vec<Vec<u64>>,
    pub edges: Vec<[u64; 2]>,
    #[serde(default)]
    pub marked_edge: Option<u64>,
}

impl MapFile {
    pub fn rotation_data(&self) -> RotationData {
        RotationData {
            vertices: self.vertices.clone(),
            edges: self.edges.clone(),
        }
    }

    pub fn build_map(&self) -> Result<PlanarMap> {
        PlanarMap::build(&self.rotation_data())
    }

    /// Edge containing the marked dart, if one is given.
    pub fn marked_edge(&self, map: &PlanarMap) -> Result<Option<EdgeId>> {
        match self.marked_edge {
            None => Ok(None),
            Some(label) => map
                .dart_by_label(label)
                .map(|d| Some(map.dart_edge(d)))
                .ok_or_else(|| Error::Parse(format!("marked_edge: unknown dart {label}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightFile {
    pub vertices: BTreeMap<usize, i64>,
    pub faces: BTreeMap<usize, i64>,
}

fn yaml_error(e: serde_yaml::Error) -> Error {
    match e.location() {
        Some(loc) => Error::Parse(format!("line {}, column {}: {e}", loc.line(), loc.column())),
        None => Error::Parse(e.to_string()),
    }
}

pub fn parse_map_file(text: &str) -> Result<MapFile> {
    serde_yaml::from_str(text).map_err(yaml_error)
}

pub fn parse_weight_file(text: &str) -> Result<WeightFile> {
    serde_yaml::from_str(text).map_err(yaml_error)
}

pub fn parse_weight(text: &str, map: &PlanarMap) -> Result<Weight> {
    let file = parse_weight_file(text)?;
    Weight::from_maps(map, &file.vertices, &file.faces)
}

fn list<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    let parts: Vec<String> = items.into_iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

/// Writes rotation data in the map-file format.
pub fn write_map(data: &RotationData, marked_edge: Option<u64>) -> String {
    let mut out = format!(
        "vertices: {}\nedges: {}\n",
        list(data.vertices.iter().map(|v| list(v.iter()))),
        list(data.edges.iter().map(|e| list(e.iter())))
    );
    if let Some(d) = marked_edge {
        out.push_str(&format!("marked_edge: {d}\n"));
    }
    out
}

pub fn write_weight(weight: &Weight) -> String {
    let table = |vals: &[i64]| {
        let parts: Vec<String> = vals
            .iter()
            .enumerate()
            .map(|(i, x)| format!("{i}: {x}"))
            .collect();
        format!("{{{}}}", parts.join(", "))
    };
    format!(
        "vertices: {}\nfaces: {}\n",
        table(weight.vertex_values()),
        table(weight.face_values())
    )
}
