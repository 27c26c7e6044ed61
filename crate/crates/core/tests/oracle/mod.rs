//! Brute-force reference computations, written independently of the library algorithms.
#![allow(dead_code)]

use std::collections::BTreeSet;

use itertools::Itertools;
use medial_lattice::bms::{make_bms, BmsState, DimensionVector};
use medial_lattice::kauffman::LinkDiagram;
use medial_lattice::planar::{AngleId, EdgeId, MedialQuiver, PlanarMap};
use medial_lattice::weights::{AngularFunction, DecoratedGraph, Weight};

/// All ways to write `total` as an ordered sum of `parts` non-negative integers.
fn compositions(total: i64, parts: usize) -> Vec<Vec<i64>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    (0..=total)
        .flat_map(|first| {
            compositions(total - first, parts - 1)
                .into_iter()
                .map(move |mut rest| {
                    rest.insert(0, first);
                    rest
                })
        })
        .collect()
}

/// Compatible functions: every vertex distribution of its weight, filtered by face sums.
pub fn compatible_functions(map: &PlanarMap, weight: &Weight) -> BTreeSet<Vec<i64>> {
    let n = map.num_darts();
    let per_vertex: Vec<Vec<(Vec<AngleId>, Vec<i64>)>> = map
        .vertex_ids()
        .map(|v| {
            let angles = map.vertex_angles(v);
            compositions(weight.vertex(v), angles.len())
                .into_iter()
                .map(|c| (angles.clone(), c))
                .collect()
        })
        .collect();
    per_vertex
        .into_iter()
        .multi_cartesian_product()
        .filter_map(|choice| {
            let mut g = vec![0i64; n];
            for (angles, values) in &choice {
                for (a, x) in angles.iter().zip(values) {
                    g[a.0] = *x;
                }
            }
            map.face_ids()
                .all(|f| map.face_angles(f).iter().map(|a| g[a.0]).sum::<i64>() == weight.face(f))
                .then_some(g)
        })
        .collect()
}

/// Kauffman states: one angle per crossing, in pairwise distinct unmarked faces.
pub fn kauffman_states(diagram: &LinkDiagram) -> BTreeSet<Vec<usize>> {
    let map = diagram.map();
    let marked = diagram.marked_faces();
    map.vertex_ids()
        .map(|v| map.vertex_angles(v))
        .multi_cartesian_product()
        .filter(|choice| {
            let faces: Vec<_> = choice.iter().map(|&a| map.angle(a).face).collect();
            faces.iter().all(|f| !marked.contains(f)) && faces.iter().all_unique()
        })
        .map(|choice| choice.into_iter().map(|a| a.0).sorted().collect())
        .collect()
}

/// Every simple directed cycle of the quiver, as sorted arrow sets, by depth-first search
/// from each smallest vertex.
pub fn simple_cycles(q: &MedialQuiver) -> Vec<Vec<AngleId>> {
    let n = q.num_vertices();
    let mut out = Vec::new();
    for start in 0..n {
        let mut path: Vec<AngleId> = Vec::new();
        let mut on_path = vec![false; n];
        on_path[start] = true;
        walk(q, start, start, &mut path, &mut on_path, &mut out);
    }
    out
}

fn walk(
    q: &MedialQuiver,
    start: usize,
    at: usize,
    path: &mut Vec<AngleId>,
    on_path: &mut [bool],
    out: &mut Vec<Vec<AngleId>>,
) {
    for (i, arrow) in q.arrows().iter().enumerate() {
        if arrow.source.0 != at {
            continue;
        }
        let t = arrow.target.0;
        if t == start {
            let mut cycle = path.clone();
            cycle.push(AngleId(i));
            out.push(cycle);
        } else if t > start && !on_path[t] {
            on_path[t] = true;
            path.push(AngleId(i));
            walk(q, start, t, path, on_path, out);
            path.pop();
            on_path[t] = false;
        }
    }
}

/// Minimum of `Σ g` over simple cycles.
pub fn nilpotency(q: &MedialQuiver, g: &[i64]) -> i64 {
    simple_cycles(q)
        .iter()
        .map(|c| c.iter().map(|a| g[a.0]).sum::<i64>())
        .min()
        .expect("quiver has cycles")
}

/// Invisible cycles (zero for every compatible function), their arrows and the number of
/// classes of cycles linked by shared quiver vertices.
pub struct InvisibleOracle {
    pub arrows: BTreeSet<usize>,
    pub edges: BTreeSet<usize>,
    pub classes: usize,
}

pub fn invisible(q: &MedialQuiver, states: &[Vec<i64>]) -> InvisibleOracle {
    let cycles: Vec<Vec<AngleId>> = simple_cycles(q)
        .into_iter()
        .filter(|c| states.iter().all(|g| c.iter().all(|a| g[a.0] == 0)))
        .collect();
    let vertex_sets: Vec<BTreeSet<usize>> = cycles
        .iter()
        .map(|c| c.iter().map(|&a| q.arrow(a).source.0).collect())
        .collect();
    // merge classes until stable
    let mut class: Vec<usize> = (0..cycles.len()).collect();
    loop {
        let mut changed = false;
        for (i, j) in (0..cycles.len()).tuple_combinations() {
            if class[i] != class[j] && !vertex_sets[i].is_disjoint(&vertex_sets[j]) {
                let (keep, drop) = (class[i].min(class[j]), class[i].max(class[j]));
                for c in class.iter_mut().filter(|c| **c == drop) {
                    *c = keep;
                }
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    InvisibleOracle {
        arrows: cycles.iter().flatten().map(|a| a.0).collect(),
        edges: vertex_sets.iter().flatten().copied().collect(),
        classes: class.iter().collect::<BTreeSet<_>>().len(),
    }
}

/// BMS states below `xi`: every `d' ≤ d` with `f'₊ = f₋ + δd'` accepted by the validator.
pub fn plus_subobjects(dg: &DecoratedGraph, xi: &BmsState) -> BTreeSet<Vec<i64>> {
    let q = dg.quiver();
    xi.d.values()
        .iter()
        .map(|&x| 0..=x)
        .multi_cartesian_product()
        .filter(|d| {
            let f_plus: Vec<i64> = q
                .arrows()
                .iter()
                .enumerate()
                .map(|(i, a)| xi.f_minus.get(AngleId(i)) + d[a.target.0] - d[a.source.0])
                .collect();
            f_plus.iter().all(|&x| x >= 0)
                && make_bms(
                    dg,
                    AngularFunction::new(f_plus),
                    xi.f_minus.clone(),
                    DimensionVector::new(d.clone()),
                )
                .is_ok()
        })
        .collect()
}

pub type BoundTable = Vec<Vec<Option<usize>>>;

/// Greatest lower bound and least upper bound straight from the order relation.
pub fn meet_join(n: usize, leq: impl Fn(usize, usize) -> bool) -> (BoundTable, BoundTable) {
    let bound = |a: usize, b: usize, lower: bool| {
        let candidates: Vec<usize> = (0..n)
            .filter(|&c| {
                if lower {
                    leq(c, a) && leq(c, b)
                } else {
                    leq(a, c) && leq(b, c)
                }
            })
            .collect();
        candidates.iter().copied().find(|&c| {
            candidates
                .iter()
                .all(|&x| if lower { leq(x, c) } else { leq(c, x) })
        })
    };
    let meets = (0..n)
        .map(|a| (0..n).map(|b| bound(a, b, true)).collect())
        .collect();
    let joins = (0..n)
        .map(|a| (0..n).map(|b| bound(a, b, false)).collect())
        .collect();
    (meets, joins)
}

/// Edges of `G` adjacent in the quiver.
pub fn quiver_neighbours(q: &MedialQuiver, e: EdgeId) -> BTreeSet<EdgeId> {
    q.arrows()
        .iter()
        .filter_map(|a| {
            if a.source == e {
                Some(a.target)
            } else if a.target == e {
                Some(a.source)
            } else {
                None
            }
        })
        .collect()
}
