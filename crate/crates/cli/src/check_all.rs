use std::fs;
use std::path::Path;

use medial_lattice::bms::{
    anti_movable_edges, bms_move_graph, bms_plus_lattice, check_components, component_minimum,
    BmsState,
};
use medial_lattice::corpus;
use medial_lattice::io;
use medial_lattice::kauffman::{
    clock_lattice, enumerate_kauffman_states, enumerate_kauffman_states_direct, is_prime_diagram,
    LinkDiagram,
};
use medial_lattice::quiver_rep::{
    canonical_potential, check_jacobian, check_short_exact_sequence, is_indecomposable,
    phantom_potential, simple_quotients, state_module, verify_subrep_isomorphism,
};
use medial_lattice::weights::DecoratedGraph;
use serde::Serialize;
use serde_json::json;

use crate::input::{parse_map, Inputs};
use crate::verbs::Outcome;
use crate::{CliError, Settings};

/// States considered when the state graph is infinite.
const BOUNDED_TOTAL: i64 = 4;

#[derive(Debug, Serialize)]
struct Check {
    instance: String,
    check: &'static str,
    passed: bool,
    detail: String,
}

struct Instance {
    name: String,
    dg: DecoratedGraph,
    diagram: Option<LinkDiagram>,
}

fn builtin() -> Vec<(String, String, Option<String>)> {
    let mut out: Vec<(String, String, Option<String>)> = corpus::DIAGRAM_SOURCES
        .iter()
        .map(|(n, t)| (n.to_string(), t.to_string(), None))
        .collect();
    out.push((
        "triangle".into(),
        corpus::TRIANGLE.into(),
        Some(corpus::TRIANGLE_WEIGHT.into()),
    ));
    out
}

/// `(name, map text, weight text)` for every map file in `dir`; `x.weight.yaml` decorates `x.yaml`.
fn from_dir(
    dir: &Path,
    inputs: &mut Inputs,
) -> Result<Vec<(String, String, Option<String>)>, CliError> {
    let mut paths: Vec<_> = fs::read_dir(dir)
        .map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "yaml"))
        .collect();
    paths.sort();
    let mut out = Vec::new();
    for path in &paths {
        let name = path
            .file_stem()
            .unwrap_or_default()
            .to_string_lossy()
            .to_string();
        if name.ends_with(".weight") {
            continue;
        }
        let text = inputs.read(path)?;
        let wpath = dir.join(format!("{name}.weight.yaml"));
        let weight = if wpath.exists() {
            Some(inputs.read(&wpath)?)
        } else {
            None
        };
        out.push((name, text, weight));
    }
    Ok(out)
}

/// `None` for a bare map: nothing beyond its construction can be checked.
fn load(name: &str, text: &str, weight: Option<&str>) -> Result<Option<Instance>, CliError> {
    let path = Path::new(name);
    let loaded = parse_map(text, path)?;
    if weight.is_none() && loaded.marked_edge.is_none() {
        return Ok(None);
    }
    let diagram = match loaded.marked_edge {
        Some(e) => Some(
            LinkDiagram::new(loaded.map.clone(), e)
                .map_err(|e| CliError::from_core(e, Some(path)))?,
        ),
        None => None,
    };
    let w = match weight {
        Some(t) => {
            io::parse_weight(t, &loaded.map).map_err(|e| CliError::from_core(e, Some(path)))?
        }
        None => crate::input::default_weight(&loaded, path)?,
    };
    let dg = DecoratedGraph::new(loaded.map, w).map_err(|e| CliError::from_core(e, Some(path)))?;
    Ok(Some(Instance {
        name: name.to_string(),
        dg,
        diagram,
    }))
}

struct Recorder(Vec<Check>);

impl Recorder {
    fn push(&mut self, instance: &str, check: &'static str, result: Result<String, String>) {
        let (passed, detail) = match result {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        self.0.push(Check {
            instance: instance.to_string(),
            check,
            passed,
            detail,
        });
    }
}

fn ensure(cond: bool, ok: String, fail: String) -> Result<String, String> {
    if cond {
        Ok(ok)
    } else {
        Err(fail)
    }
}

fn check_instance(inst: &Instance, s: &Settings, rec: &mut Recorder) {
    let name = inst.name.as_str();
    let dg = &inst.dg;
    if let Some(d) = &inst.diagram {
        let via_chi = enumerate_kauffman_states(d);
        let direct = enumerate_kauffman_states_direct(d);
        rec.push(
            name,
            "kauffman-enumerations-agree",
            ensure(
                via_chi == direct,
                format!("{} states", via_chi.len()),
                "enumerations differ".into(),
            ),
        );
        if is_prime_diagram(d.map()).prime {
            let result = clock_lattice(d, s.bound_lattice, s.seed)
                .map_err(|e| e.to_string())
                .and_then(|c| {
                    ensure(
                        c.lattice.len() == via_chi.len(),
                        format!("{} elements", c.lattice.len()),
                        "lattice misses states".into(),
                    )
                });
            rec.push(name, "clock-lattice", result);
        }
    }
    let degree = match dg.nilpotency_degree() {
        Ok(m) => m,
        Err(e) => {
            rec.push(name, "nilpotency", Err(e.to_string()));
            return;
        }
    };
    let potential = match canonical_potential(dg) {
        Ok(p) => Some(p.plus(&phantom_potential(dg))),
        Err(_) => None,
    };
    let max_total = (degree > 0).then_some(BOUNDED_TOTAL);
    let graph = match bms_move_graph(dg, dg.states(), max_total) {
        Ok(g) => g,
        Err(e) => {
            rec.push(name, "bms-states", Err(e.to_string()));
            return;
        }
    };
    if let Some(s_pot) = &potential {
        let bad = graph
            .nodes
            .iter()
            .filter(|x| !check_jacobian(&state_module(dg, x), s_pot).is_ok_and(|r| r.is_ok()))
            .count();
        rec.push(
            name,
            "jacobian",
            ensure(
                bad == 0,
                format!("{} states", graph.nodes.len()),
                format!("{bad} states with residuals"),
            ),
        );
    }
    let bad_nilpotent = graph
        .nodes
        .iter()
        .filter(|x| !state_module(dg, x).is_nilpotent())
        .count();
    rec.push(
        name,
        "nilpotent-modules",
        ensure(
            bad_nilpotent == 0,
            format!("{} states", graph.nodes.len()),
            format!("{bad_nilpotent} failures"),
        ),
    );
    let bad_ses = graph
        .edges
        .iter()
        .filter(|e| !check_short_exact_sequence(dg, &graph.nodes[e.from], e.label).unwrap_or(false))
        .count();
    rec.push(
        name,
        "short-exact-sequences",
        ensure(
            bad_ses == 0,
            format!("{} moves", graph.edges.len()),
            format!("{bad_ses} failures"),
        ),
    );
    if degree != 0 {
        return;
    }
    let components = check_components(dg, s.bound_lattice, s.seed);
    rec.push(
        name,
        "components",
        components.map_err(|e| e.to_string()).and_then(|reports| {
            ensure(
                reports.iter().all(|r| r.is_ok()),
                format!("{} components", reports.len()),
                "component mismatch".into(),
            )
        }),
    );
    if !dg.weight().is_characteristic() {
        return;
    }
    let bad_tops = graph
        .nodes
        .iter()
        .filter(|x| simple_quotients(&state_module(dg, x)) != anti_movable_edges(dg, x))
        .count();
    rec.push(
        name,
        "simple-quotients",
        ensure(
            bad_tops == 0,
            format!("{} states", graph.nodes.len()),
            format!("{bad_tops} failures"),
        ),
    );
    let bad_indec = graph
        .nodes
        .iter()
        .filter(|x| !is_indecomposable(&state_module(dg, x), dg.weight()).agree())
        .count();
    rec.push(
        name,
        "indecomposability",
        ensure(
            bad_indec == 0,
            format!("{} states", graph.nodes.len()),
            format!("{bad_indec} disagreements"),
        ),
    );
    let tops: Result<Vec<BmsState>, String> = graph
        .components()
        .iter()
        .map(|comp| {
            let fmin = component_minimum(dg, &graph.nodes[comp[0]].f_plus)
                .map_err(|e| e.to_string())?
                .0;
            let bl =
                bms_plus_lattice(dg, &fmin, s.bound_lattice, s.seed).map_err(|e| e.to_string())?;
            Ok(bl.lattice.elements[bl.lattice.max()].clone())
        })
        .collect();
    let result = tops.and_then(|tops| {
        let mut sizes = Vec::new();
        for xi in &tops {
            let cert =
                verify_subrep_isomorphism(dg, xi, s.bound_candidates, s.bound_lattice, s.seed)
                    .map_err(|e| e.to_string())?;
            if !cert.grading_preserved {
                return Err("grading not preserved".into());
            }
            sizes.push(cert.subrep_size);
        }
        Ok(format!("subrep lattice sizes {sizes:?}"))
    });
    rec.push(name, "subrep-isomorphism", result);
}

pub fn run(dir: Option<&Path>, s: &Settings, inputs: &mut Inputs) -> Result<Outcome, CliError> {
    let sources = match dir {
        Some(d) => from_dir(d, inputs)?,
        None => {
            let b = builtin();
            for (name, text, weight) in &b {
                inputs.absorb(name.as_bytes());
                inputs.absorb(text.as_bytes());
                if let Some(w) = weight {
                    inputs.absorb(w.as_bytes());
                }
            }
            b
        }
    };
    let mut rec = Recorder(Vec::new());
    for (name, text, weight) in &sources {
        match load(name, text, weight.as_deref()) {
            Ok(Some(inst)) => check_instance(&inst, s, &mut rec),
            Ok(None) => rec.push(name, "planar-map", Ok("no weight; map only".into())),
            Err(e) => rec.push(name, "load", Err(e.to_string())),
        }
    }
    let failed = rec.0.iter().filter(|c| !c.passed).count();
    Ok(Outcome {
        passed: failed == 0,
        result: json!({ "instances": sources.len(), "checks": rec.0.len(), "failed": failed, "results": rec.0 }),
        dot: None,
    })
}
