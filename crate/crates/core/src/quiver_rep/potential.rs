//! Potentials on the medial quiver and their cyclic derivatives.

use num_integer::Integer;
use serde::Serialize;

use super::matrix::{integer, rational, Rational};
use crate::error::{Error, Result};
use crate::planar::AngleId;
use crate::weights::DecoratedGraph;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PotentialTerm {
    #[serde(serialize_with = "as_string")]
    pub coefficient: Rational,
    /// A cyclic path, read in traversal order from an arbitrary base point.
    pub cycle: Vec<AngleId>,
}

fn as_string<S: serde::Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// A finite linear combination of cyclic paths.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Potential {
    pub terms: Vec<PotentialTerm>,
}

impl Potential {
    pub fn push(&mut self, coefficient: Rational, cycle: Vec<AngleId>) {
        self.terms.push(PotentialTerm { coefficient, cycle });
    }

    pub fn plus(&self, other: &Potential) -> Potential {
        Potential {
            terms: self.terms.iter().chain(&other.terms).cloned().collect(),
        }
    }
}

fn power(cycle: &[AngleId], p: usize) -> Vec<AngleId> {
    cycle.repeat(p)
}

/// The canonical potential: vertex cycles minus face cycles over the support of
/// the weight, each raised to `p(x) = lcm / ω(x)` with coefficient `1 / p(x)`.
pub fn canonical_potential(dg: &DecoratedGraph) -> Result<Potential> {
    let w = dg.weight();
    let support: Vec<i64> = w
        .vertex_values()
        .iter()
        .chain(w.face_values())
        .copied()
        .filter(|&x| x != 0)
        .collect();
    if support.is_empty() {
        return Err(Error::EmptySupport);
    }
    let lcm = support.iter().fold(1i64, |acc, &x| acc.lcm(&x));
    let mut s = Potential::default();
    let q = dg.quiver();
    for v in dg.map().vertex_ids() {
        let x = w.vertex(v);
        if x != 0 {
            let p = lcm / x;
            s.push(rational(1, p), power(q.vertex_cycle(v), p as usize));
        }
    }
    for f in dg.map().face_ids() {
        let x = w.face(f);
        if x != 0 {
            let p = lcm / x;
            s.push(rational(-1, p), power(q.face_cycle(f), p as usize));
        }
    }
    Ok(s)
}

/// A phantom potential: cycles around zero-weight vertices and faces, with the
/// signs of the canonical potential, plus their squares with coefficient 1/2.
pub fn phantom_potential(dg: &DecoratedGraph) -> Potential {
    let w = dg.weight();
    let q = dg.quiver();
    let mut s = Potential::default();
    let mut add = |sign: i64, cycle: &[AngleId]| {
        s.push(integer(sign), cycle.to_vec());
        s.push(rational(1, 2), power(cycle, 2));
    };
    for v in dg.map().vertex_ids().filter(|&v| w.vertex(v) == 0) {
        add(1, q.vertex_cycle(v));
    }
    for f in dg.map().face_ids().filter(|&f| w.face(f) == 0) {
        add(-1, q.face_cycle(f));
    }
    s
}

/// `∂_a S`: for every occurrence of `a` in a term, the rest of the cycle read from just after it.
pub fn cyclic_derivative(s: &Potential, a: AngleId) -> Vec<(Rational, Vec<AngleId>)> {
    let mut out = Vec::new();
    for term in &s.terms {
        let n = term.cycle.len();
        for k in 0..n {
            if term.cycle[k] == a {
                let path = (1..n).map(|i| term.cycle[(k + i) % n]).collect();
                out.push((term.coefficient.clone(), path));
            }
        }
    }
    out
}
