use std::fs;
use std::path::{Path, PathBuf};

use medial_lattice::bms::{bms_plus_lattice, component_minimum, make_bms, BmsState};
use medial_lattice::io;
use medial_lattice::kauffman::LinkDiagram;
use medial_lattice::planar::{EdgeId, PlanarMap};
use medial_lattice::weights::{DecoratedGraph, Weight};
use sha2::{Digest, Sha256};

use crate::CliError;

/// Raw input bytes, hashed in the order they were read.
#[derive(Default)]
pub struct Inputs {
    hasher: Sha256,
}

impl Inputs {
    pub fn read(&mut self, path: &Path) -> Result<String, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        self.absorb(text.as_bytes());
        Ok(text)
    }

    pub fn absorb(&mut self, bytes: &[u8]) {
        self.hasher.update((bytes.len() as u64).to_le_bytes());
        self.hasher.update(bytes);
    }

    pub fn digest(self) -> String {
        hex::encode(self.hasher.finalize())
    }
}

pub struct Loaded {
    pub map: PlanarMap,
    pub marked_edge: Option<EdgeId>,
}

fn context(path: &Path) -> impl Fn(medial_lattice::Error) -> CliError + '_ {
    move |e| CliError::from_core(e, Some(path))
}

pub fn load_map(inputs: &mut Inputs, path: &Path) -> Result<Loaded, CliError> {
    let text = inputs.read(path)?;
    parse_map(&text, path)
}

pub fn parse_map(text: &str, path: &Path) -> Result<Loaded, CliError> {
    let file = io::parse_map_file(text).map_err(context(path))?;
    let map = file.build_map().map_err(context(path))?;
    let marked_edge = file.marked_edge(&map).map_err(context(path))?;
    Ok(Loaded { map, marked_edge })
}

pub fn load_diagram(inputs: &mut Inputs, path: &Path) -> Result<LinkDiagram, CliError> {
    let loaded = load_map(inputs, path)?;
    let marked = loaded.marked_edge.ok_or_else(|| {
        CliError::Input(format!(
            "{}: a link diagram needs marked_edge",
            path.display()
        ))
    })?;
    LinkDiagram::new(loaded.map, marked).map_err(context(path))
}

/// The map with the weight from `weight`, or the Kauffman weight of its marked edge.
pub fn load_decorated(
    inputs: &mut Inputs,
    path: &Path,
    weight: Option<&PathBuf>,
) -> Result<DecoratedGraph, CliError> {
    let loaded = load_map(inputs, path)?;
    let weight = match weight {
        Some(wpath) => {
            let text = inputs.read(wpath)?;
            io::parse_weight(&text, &loaded.map).map_err(context(wpath))?
        }
        None => default_weight(&loaded, path)?,
    };
    DecoratedGraph::new(loaded.map, weight).map_err(context(path))
}

pub fn default_weight(loaded: &Loaded, path: &Path) -> Result<Weight, CliError> {
    let e = loaded.marked_edge.ok_or_else(|| {
        CliError::Input(format!(
            "{}: no weight given and no marked_edge to derive one",
            path.display()
        ))
    })?;
    medial_lattice::kauffman::kauffman_weight(&loaded.map, e).map_err(context(path))
}

/// `max` or the index of a compatible function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateSelector {
    Max,
    Index(usize),
}

impl std::str::FromStr for StateSelector {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "max" {
            return Ok(StateSelector::Max);
        }
        s.parse()
            .map(StateSelector::Index)
            .map_err(|_| format!("expected `max` or an index, got `{s}`"))
    }
}

/// `Max`: the top of the lattice over the first compatible function's component.
/// `Index(k)`: the state with `f₊` the `k`-th compatible function and `f₋` its component minimum.
pub fn select_state(
    dg: &DecoratedGraph,
    sel: StateSelector,
    bound: usize,
    seed: u64,
) -> Result<BmsState, CliError> {
    let states = dg.states();
    let core = |e| CliError::from_core(e, None);
    match sel {
        StateSelector::Max => {
            let first = states
                .first()
                .ok_or_else(|| core(medial_lattice::Error::EmptyStateSet))?;
            let fmin = component_minimum(dg, first).map_err(core)?.0;
            let bl = bms_plus_lattice(dg, &fmin, bound, seed).map_err(core)?;
            Ok(bl.lattice.elements[bl.lattice.max()].clone())
        }
        StateSelector::Index(k) => {
            let h = states.get(k).ok_or_else(|| {
                CliError::Input(format!(
                    "state index {k} out of range ({} states)",
                    states.len()
                ))
            })?;
            let (fmin, d) = component_minimum(dg, h).map_err(core)?;
            make_bms(dg, h.clone(), fmin, d).map_err(core)
        }
    }
}
