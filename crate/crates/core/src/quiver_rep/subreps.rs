//! Subrepresentations of state modules spanned by initial segments of the standard bases.

use num_traits::Zero;
use serde::Serialize;

use super::matrix::Matrix;
use super::module::{state_module, QuiverRep};
use crate::bms::{plus_subobjects, BmsState};
use crate::error::{Error, Result};
use crate::lattice::{verify_order_isomorphism, FiniteLattice, FinitePoset};
use crate::planar::{AngleId, EdgeId};
use crate::weights::DecoratedGraph;

/// `k[e]` is the number of leading basis vectors spanning the subspace at `e`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct PrefixFamily(pub Vec<usize>);

impl PrefixFamily {
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn leq(&self, other: &PrefixFamily) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

/// Whether `m` maps the first `k_s` basis vectors at the source into the first `k_t` at the target.
fn arrow_closed(m: &Matrix, k_s: usize, k_t: usize) -> bool {
    (0..k_s).all(|j| (k_t..m.rows()).all(|i| m.get(i, j).is_zero()))
}

/// Checks that every supported vertex lies on a vertex or face cycle whose composite is the
/// full nilpotent Jordan block.
pub fn check_jordan_premise(dg: &DecoratedGraph, m: &QuiverRep) -> Result<()> {
    let q = dg.quiver();
    for e in m.support() {
        let d = m.dim(e);
        let jordan = Matrix::jordan(d);
        let found = q
            .vertex_cycles()
            .iter()
            .chain(q.face_cycles())
            .any(|cycle| {
                let Some(pos) = cycle.iter().position(|&a| q.arrow(a).source == e) else {
                    return false;
                };
                let rotated: Vec<AngleId> =
                    cycle[pos..].iter().chain(&cycle[..pos]).copied().collect();
                m.evaluate_path(e, &rotated).is_ok_and(|c| c == jordan)
            });
        if !found {
            return Err(Error::JordanPremiseFailed(e));
        }
    }
    Ok(())
}

/// All arrow-closed prefix families of `m`, certified as a graded distributive lattice.
pub fn enumerate_subreps(
    dg: &DecoratedGraph,
    m: &QuiverRep,
    candidate_bound: u128,
    exhaustive_bound: usize,
    seed: u64,
) -> Result<FiniteLattice<PrefixFamily>> {
    if !dg.weight().is_characteristic() {
        return Err(Error::NotCharacteristicWeight);
    }
    let count = m
        .dims()
        .iter()
        .try_fold(1u128, |acc, &d| acc.checked_mul(d as u128 + 1))
        .unwrap_or(u128::MAX);
    if count > candidate_bound {
        return Err(Error::CandidateSpaceTooLarge(count));
    }
    check_jordan_premise(dg, m)?;

    let n = m.dims().len();
    // Arrows checked once both endpoints are assigned.
    let mut ready: Vec<Vec<AngleId>> = vec![Vec::new(); n];
    for a in 0..m.num_arrows() {
        let (s, t) = m.arrow(AngleId(a));
        ready[s.0.max(t.0)].push(AngleId(a));
    }
    let mut found = Vec::new();
    let mut k = vec![0usize; n];
    extend(m, &ready, 0, &mut k, &mut found);

    found.sort_by_key(|f: &PrefixFamily| (f.total(), f.clone()));
    let poset = FinitePoset::from_order(found.len(), |a, b| found[a].leq(&found[b]))?;
    let grade = found.iter().map(|f| f.total() as i64).collect();
    FiniteLattice::certify(found, poset, grade, exhaustive_bound, seed)
}

fn extend(
    m: &QuiverRep,
    ready: &[Vec<AngleId>],
    e: usize,
    k: &mut Vec<usize>,
    out: &mut Vec<PrefixFamily>,
) {
    if e == k.len() {
        out.push(PrefixFamily(k.clone()));
        return;
    }
    for value in 0..=m.dim(EdgeId(e)) {
        k[e] = value;
        let ok = ready[e].iter().all(|&a| {
            let (s, t) = m.arrow(a);
            arrow_closed(m.matrix(a), k[s.0], k[t.0])
        });
        if ok {
            extend(m, ready, e + 1, k, out);
        }
    }
    k[e] = 0;
}

/// The isomorphism `ξ' ↦ d'` from plus-subobjects onto subrepresentations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubrepCertificate {
    pub plus_size: usize,
    pub subrep_size: usize,
    /// `map[i]` is the index of the image of the `i`-th plus-subobject.
    pub map: Vec<usize>,
    pub grading_preserved: bool,
}

pub fn verify_subrep_isomorphism(
    dg: &DecoratedGraph,
    xi: &BmsState,
    candidate_bound: u128,
    exhaustive_bound: usize,
    seed: u64,
) -> Result<SubrepCertificate> {
    if !dg.weight().is_characteristic() {
        return Err(Error::NotCharacteristicWeight);
    }
    let plus = plus_subobjects(dg, xi, exhaustive_bound, seed)?;
    let subs = enumerate_subreps(
        dg,
        &state_module(dg, xi),
        candidate_bound,
        exhaustive_bound,
        seed,
    )?;
    let mut map = Vec::with_capacity(plus.len());
    for x in &plus.elements {
        let family = PrefixFamily(x.d.values().iter().map(|&v| v as usize).collect());
        let image = subs
            .elements
            .iter()
            .position(|f| *f == family)
            .ok_or_else(|| {
                Error::CertificationFailed(format!(
                    "no subrepresentation with dimensions {:?}",
                    family.0
                ))
            })?;
        map.push(image);
    }
    if !verify_order_isomorphism(plus.poset(), subs.poset(), &map) {
        return Err(Error::CertificationFailed(format!(
            "{} plus-subobjects and {} subrepresentations are not order isomorphic",
            plus.len(),
            subs.len()
        )));
    }
    let grading_preserved = map
        .iter()
        .enumerate()
        .all(|(i, &j)| plus.grade[i] == subs.grade[j]);
    Ok(SubrepCertificate {
        plus_size: plus.len(),
        subrep_size: subs.len(),
        map,
        grading_preserved,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bms::{bms_plus_lattice, component_minimum};
    use crate::corpus;

    fn top(dg: &DecoratedGraph) -> BmsState {
        let fmin = component_minimum(dg, &dg.states()[0]).unwrap().0;
        let bl = bms_plus_lattice(dg, &fmin, 500, 0).unwrap();
        bl.lattice.elements[bl.lattice.max()].clone()
    }

    #[test]
    fn zero_module_has_one_subrep() {
        let dg = corpus::trefoil().kauffman_graph();
        let lat = enumerate_subreps(&dg, &QuiverRep::zero(dg.quiver()), 1 << 20, 500, 0).unwrap();
        assert_eq!(lat.len(), 1);
        let xi = BmsState::trivial(&dg, &dg.states()[0]);
        let cert = verify_subrep_isomorphism(&dg, &xi, 1 << 20, 500, 0).unwrap();
        assert_eq!((cert.plus_size, cert.subrep_size), (1, 1));
    }

    #[test]
    fn trefoil_chain_and_figure_eight() {
        let dg = corpus::trefoil().kauffman_graph();
        let lat = enumerate_subreps(&dg, &state_module(&dg, &top(&dg)), 1 << 20, 500, 0).unwrap();
        assert_eq!(lat.len(), 3);
        assert_eq!(lat.covers().len(), 2);
        let dg = corpus::figure_eight().kauffman_graph();
        let cert = verify_subrep_isomorphism(&dg, &top(&dg), 1 << 20, 500, 0).unwrap();
        assert_eq!((cert.plus_size, cert.subrep_size), (5, 5));
        assert!(cert.grading_preserved);
    }

    #[test]
    fn arrow_closure() {
        let m = Matrix::from_rows(&[vec![0, 1], vec![0, 0]]);
        assert!(arrow_closed(&m, 1, 0));
        assert!(!arrow_closed(&m, 2, 0));
        assert!(arrow_closed(&m, 2, 1));
    }

    #[test]
    fn refusals() {
        let dg = corpus::trefoil().kauffman_graph();
        let m = state_module(&dg, &top(&dg));
        assert_eq!(
            enumerate_subreps(&dg, &m, 3, 500, 0).err(),
            Some(Error::CandidateSpaceTooLarge(4))
        );
        let (_, doubled) = corpus::doubled_kauffman().into_iter().next().unwrap();
        let m = state_module(&doubled, &top(&doubled));
        assert_eq!(
            enumerate_subreps(&doubled, &m, 1 << 20, 500, 0).err(),
            Some(Error::NotCharacteristicWeight)
        );
    }

    #[test]
    fn jordan_premise_failure() {
        let dg = corpus::trefoil().kauffman_graph();
        let q = dg.quiver();
        let e = EdgeId(0);
        let mut dims = vec![0; q.num_vertices()];
        dims[e.0] = 2;
        let mats = q
            .arrows()
            .iter()
            .map(|a| Matrix::zeros(dims[a.target.0], dims[a.source.0]))
            .collect();
        let m = QuiverRep::new(q, dims, mats).unwrap();
        assert_eq!(
            check_jordan_premise(&dg, &m),
            Err(Error::JordanPremiseFailed(e))
        );
        assert_eq!(
            enumerate_subreps(&dg, &m, 1 << 20, 500, 0).err(),
            Some(Error::JordanPremiseFailed(e))
        );
    }
}
