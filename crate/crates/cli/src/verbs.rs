use medial_lattice::bms::{
    anti_movable_edges, bms_plus_lattice, check_components, plus_subobjects, BmsState,
};
use medial_lattice::kauffman::{
    clock_lattice, enumerate_kauffman_states, enumerate_kauffman_states_direct, is_prime_diagram,
    LinkDiagram,
};
use medial_lattice::planar::PlanarMap;
use medial_lattice::quiver_rep::{
    canonical_potential, check_jacobian, endomorphism_ring, enumerate_subreps, is_indecomposable,
    phantom_potential, simple_quotients, state_module, verify_subrep_isomorphism, Matrix,
    Potential, QuiverRep,
};
use medial_lattice::weights::{AngularFunction, DecoratedGraph};
use serde_json::{json, Value};

use crate::{CliError, Settings};

/// What a verb produced: the structured result, an optional graph description, and
/// whether every certification in it held.
pub struct Outcome {
    pub result: Value,
    pub dot: Option<String>,
    pub passed: bool,
}

impl Outcome {
    fn ok(result: Value) -> Self {
        Outcome {
            result,
            dot: None,
            passed: true,
        }
    }

    fn with_dot(mut self, dot: String) -> Self {
        self.dot = Some(dot);
        self
    }
}

fn core(e: medial_lattice::Error) -> CliError {
    CliError::from_core(e, None)
}

fn values(g: &AngularFunction) -> Vec<i64> {
    g.values().to_vec()
}

fn label(g: &AngularFunction) -> String {
    format!("{:?}", g.values())
}

fn state_label(x: &BmsState) -> String {
    format!("d={:?}", x.d.values())
}

pub fn medial(map: &PlanarMap) -> Outcome {
    let q = medial_lattice::planar::medial_quiver(map);
    let faces: Vec<Vec<u64>> = map
        .face_ids()
        .map(|f| {
            map.face_darts(f)
                .iter()
                .map(|&d| map.dart_label(d))
                .collect()
        })
        .collect();
    let result = json!({
        "vertices": map.num_vertices(),
        "edges": map.num_edges(),
        "faces": faces,
        "canonical": map.canonical_data(),
        "angles": map.angles(),
        "arrows": q.arrows(),
        "vertex_cycles": q.vertex_cycles(),
        "face_cycles": q.face_cycles(),
    });
    Outcome::ok(result).with_dot(q.to_dot())
}

pub fn states(dg: &DecoratedGraph) -> Outcome {
    let states: Vec<Vec<i64>> = dg.states().iter().map(values).collect();
    let graph = dg.move_graph();
    Outcome::ok(json!({ "count": states.len(), "states": states }))
        .with_dot(graph.to_dot("states", label))
}

pub fn move_graph(dg: &DecoratedGraph) -> Outcome {
    let graph = dg.move_graph();
    Outcome::ok(json!({
        "nodes": graph.nodes.iter().map(values).collect::<Vec<_>>(),
        "edges": graph.edges,
        "components": graph.components().len(),
    }))
    .with_dot(graph.to_dot("move_graph", label))
}

pub fn invisible(dg: &DecoratedGraph) -> Result<Outcome, CliError> {
    let inv = dg.invisible().map_err(core)?;
    let degree = dg.nilpotency_degree().map_err(core)?;
    let gamma = if degree == 0 {
        Some(dg.gamma_inv().map_err(core)?)
    } else {
        None
    };
    Ok(Outcome::ok(
        json!({ "invisible": inv, "nilpotency_degree": degree, "gamma_inv": gamma }),
    ))
}

pub fn nilpotency(dg: &DecoratedGraph) -> Result<Outcome, CliError> {
    let degree = dg.nilpotency_degree().map_err(core)?;
    Ok(Outcome::ok(json!({ "nilpotency_degree": degree })))
}

pub fn bms_lattice(dg: &DecoratedGraph, xi: &BmsState, s: &Settings) -> Result<Outcome, CliError> {
    let bl = bms_plus_lattice(dg, &xi.f_minus, s.bound_lattice, s.seed).map_err(core)?;
    let dot = bl.lattice.to_dot("bms_lattice", state_label);
    Ok(Outcome::ok(json!(bl)).with_dot(dot))
}

pub fn component(dg: &DecoratedGraph, s: &Settings) -> Result<Outcome, CliError> {
    let reports = check_components(dg, s.bound_lattice, s.seed).map_err(core)?;
    let passed = reports.iter().all(|r| r.is_ok());
    Ok(Outcome {
        result: json!({ "components": reports }),
        dot: None,
        passed,
    })
}

pub fn subobjects(dg: &DecoratedGraph, xi: &BmsState, s: &Settings) -> Result<Outcome, CliError> {
    let lat = plus_subobjects(dg, xi, s.bound_lattice, s.seed).map_err(core)?;
    let dot = lat.to_dot("subobjects", state_label);
    Ok(Outcome::ok(json!({ "state": xi, "subobjects": lat })).with_dot(dot))
}

pub fn clock(diagram: &LinkDiagram, s: &Settings) -> Result<Outcome, CliError> {
    let clock = clock_lattice(diagram, s.bound_lattice, s.seed).map_err(core)?;
    let pictures: Vec<String> = clock
        .lattice
        .elements
        .iter()
        .map(|k| k.to_picture())
        .collect();
    let dot = clock.lattice.to_dot("clock", |k| k.to_picture());
    Ok(Outcome::ok(json!({
        "marked_edge": diagram.marked_edge(),
        "states": pictures,
        "grade": clock.lattice.grade,
        "certificate": clock.lattice.certificate,
        "gamma_inv_components": clock.gamma_inv_components,
    }))
    .with_dot(dot))
}

pub fn prime_check(map: &PlanarMap) -> Outcome {
    Outcome::ok(json!(is_prime_diagram(map)))
}

pub fn kauffman_states(diagram: &LinkDiagram) -> Outcome {
    let via_chi = enumerate_kauffman_states(diagram);
    let direct = enumerate_kauffman_states_direct(diagram);
    let agree = via_chi == direct;
    Outcome {
        result: json!({
            "count": via_chi.len(),
            "states": via_chi.iter().map(|k| k.to_picture()).collect::<Vec<_>>(),
            "direct_enumeration_agrees": agree,
        }),
        dot: None,
        passed: agree,
    }
}

fn integer_rows(m: &Matrix) -> Value {
    match m.to_integers() {
        Some(rows) => json!(rows),
        None => json!(m),
    }
}

fn module_dump(m: &QuiverRep) -> Value {
    json!({
        "dims": m.dims(),
        "matrices": m.matrices().iter().map(integer_rows).collect::<Vec<_>>(),
    })
}

pub fn module(dg: &DecoratedGraph, xi: &BmsState) -> Result<Outcome, CliError> {
    let m = state_module(dg, xi);
    let potential = canonical_potential(dg).map_err(core)?;
    Ok(Outcome::ok(json!({
        "state": xi,
        "module": module_dump(&m),
        "potential": potential,
        "phantom": phantom_potential(dg),
    })))
}

pub fn jacobian_check(
    dg: &DecoratedGraph,
    xi: &BmsState,
    phantom: bool,
) -> Result<Outcome, CliError> {
    let m = state_module(dg, xi);
    let mut s: Potential = canonical_potential(dg).map_err(core)?;
    if phantom {
        s = s.plus(&phantom_potential(dg));
    }
    let report = check_jacobian(&m, &s).map_err(core)?;
    Ok(Outcome {
        passed: report.is_ok(),
        result: json!({ "state": xi, "phantom": phantom, "report": report }),
        dot: None,
    })
}

pub fn endo(dg: &DecoratedGraph, xi: &BmsState) -> Outcome {
    let m = state_module(dg, xi);
    let ring = endomorphism_ring(&m);
    let report = is_indecomposable(&m, dg.weight());
    let basis: Vec<Vec<Value>> = ring
        .basis
        .iter()
        .map(|f| f.iter().map(integer_rows).collect())
        .collect();
    let tops = simple_quotients(&m);
    let anti = anti_movable_edges(dg, xi);
    Outcome {
        passed: report.agree() && tops == anti,
        result: json!({
            "state": xi,
            "dim": ring.dim,
            "radical_dim": ring.radical_dim,
            "local": ring.local,
            "basis": basis,
            "indecomposable": report,
            "simple_quotients": tops,
            "anti_movable_edges": anti,
        }),
        dot: None,
    }
}

pub fn subreps(dg: &DecoratedGraph, xi: &BmsState, s: &Settings) -> Result<Outcome, CliError> {
    let m = state_module(dg, xi);
    let lat =
        enumerate_subreps(dg, &m, s.bound_candidates, s.bound_lattice, s.seed).map_err(core)?;
    let dot = lat.to_dot("subreps", |k| format!("{:?}", k.0));
    Ok(Outcome::ok(json!({ "state": xi, "subreps": lat })).with_dot(dot))
}

pub fn verify_iso(dg: &DecoratedGraph, xi: &BmsState, s: &Settings) -> Result<Outcome, CliError> {
    let cert = verify_subrep_isomorphism(dg, xi, s.bound_candidates, s.bound_lattice, s.seed)
        .map_err(core)?;
    Ok(Outcome {
        passed: cert.grading_preserved,
        result: json!({ "state": xi, "certificate": cert }),
        dot: None,
    })
}
