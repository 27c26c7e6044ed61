//! Representations of the medial quiver and the state modules of BMS states.

use serde::Serialize;

use super::matrix::{plus, plus_minus_matrix, Matrix};
use super::potential::{cyclic_derivative, Potential};
use crate::bms::{bms_mov, BmsState};
use crate::error::{Error, Result};
use crate::planar::{AngleId, EdgeId, MedialQuiver};
use crate::weights::DecoratedGraph;

/// A representation: a space `Q^{dims[e]}` at each quiver vertex and a
/// `dims[target] × dims[source]` matrix on each arrow.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuiverRep {
    #[serde(skip)]
    arrows: Vec<(EdgeId, EdgeId)>,
    dims: Vec<usize>,
    mats: Vec<Matrix>,
}

impl QuiverRep {
    pub fn new(quiver: &MedialQuiver, dims: Vec<usize>, mats: Vec<Matrix>) -> Result<Self> {
        let arrows: Vec<(EdgeId, EdgeId)> = quiver
            .arrows()
            .iter()
            .map(|a| (a.source, a.target))
            .collect();
        if dims.len() != quiver.num_vertices() || mats.len() != arrows.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} spaces and {} matrices for {} vertices and {} arrows",
                dims.len(),
                mats.len(),
                quiver.num_vertices(),
                arrows.len()
            )));
        }
        let rep = QuiverRep { arrows, dims, mats };
        for i in 0..rep.mats.len() {
            rep.check_shape(AngleId(i), &rep.mats[i])?;
        }
        Ok(rep)
    }

    fn check_shape(&self, a: AngleId, m: &Matrix) -> Result<()> {
        let (s, t) = self.arrows[a.0];
        let want = (self.dims[t.0], self.dims[s.0]);
        if m.shape() != want {
            return Err(Error::ShapeMismatch(format!(
                "arrow {a} carries a {}x{} matrix, expected {}x{}",
                m.rows(),
                m.cols(),
                want.0,
                want.1
            )));
        }
        Ok(())
    }

    pub fn zero(quiver: &MedialQuiver) -> Self {
        let dims = vec![0; quiver.num_vertices()];
        let mats = vec![Matrix::zeros(0, 0); quiver.num_arrows()];
        QuiverRep::new(quiver, dims, mats).expect("shapes agree")
    }

    /// The simple representation at `e`.
    pub fn simple(quiver: &MedialQuiver, e: EdgeId) -> Self {
        let mut dims = vec![0; quiver.num_vertices()];
        dims[e.0] = 1;
        let mats = quiver
            .arrows()
            .iter()
            .map(|a| Matrix::zeros(dims[a.target.0], dims[a.source.0]))
            .collect();
        QuiverRep::new(quiver, dims, mats).expect("shapes agree")
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, e: EdgeId) -> usize {
        self.dims[e.0]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn matrix(&self, a: AngleId) -> &Matrix {
        &self.mats[a.0]
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.mats
    }

    pub fn set_matrix(&mut self, a: AngleId, m: Matrix) -> Result<()> {
        self.check_shape(a, &m)?;
        self.mats[a.0] = m;
        Ok(())
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn arrow(&self, a: AngleId) -> (EdgeId, EdgeId) {
        self.arrows[a.0]
    }

    pub fn incoming(&self, e: EdgeId) -> Vec<AngleId> {
        (0..self.arrows.len())
            .filter(|&i| self.arrows[i].1 == e)
            .map(AngleId)
            .collect()
    }

    /// Vertices with non-zero space.
    pub fn support(&self) -> Vec<EdgeId> {
        (0..self.dims.len())
            .filter(|&e| self.dims[e] > 0)
            .map(EdgeId)
            .collect()
    }

    pub fn direct_sum(&self, other: &QuiverRep) -> Result<QuiverRep> {
        if self.arrows != other.arrows {
            return Err(Error::ShapeMismatch(
                "representations of different quivers".into(),
            ));
        }
        let dims: Vec<usize> = self
            .dims
            .iter()
            .zip(&other.dims)
            .map(|(a, b)| a + b)
            .collect();
        let mats = self
            .mats
            .iter()
            .zip(&other.mats)
            .map(|(a, b)| {
                let mut m = Matrix::zeros(a.rows() + b.rows(), a.cols() + b.cols());
                for i in 0..a.rows() {
                    for j in 0..a.cols() {
                        m.set(i, j, a.get(i, j).clone());
                    }
                }
                for i in 0..b.rows() {
                    for j in 0..b.cols() {
                        m.set(a.rows() + i, a.cols() + j, b.get(i, j).clone());
                    }
                }
                m
            })
            .collect();
        Ok(QuiverRep {
            arrows: self.arrows.clone(),
            dims,
            mats,
        })
    }

    /// `M_p = M_{αℓ} ⋯ M_{α1}` for the path `α1 ⋯ αℓ` starting at `start`.
    pub fn evaluate_path(&self, start: EdgeId, path: &[AngleId]) -> Result<Matrix> {
        let mut at = start;
        let mut acc = Matrix::identity(self.dims[start.0]);
        for &a in path {
            let (s, t) = self.arrows[a.0];
            if s != at {
                return Err(Error::ShapeMismatch(format!(
                    "arrow {a} does not start at {at}"
                )));
            }
            acc = self.mats[a.0].mul(&acc)?;
            at = t;
        }
        Ok(acc)
    }

    /// Whether every long enough path acts by zero, decided by iterating
    /// `U ↦ Σ_α M_α(U)` from the whole space until it vanishes or stabilizes.
    pub fn is_nilpotent(&self) -> bool {
        let n = self.dims.len();
        let mut spans: Vec<Matrix> = self.dims.iter().map(|&d| Matrix::identity(d)).collect();
        let mut size: usize = self.total_dim();
        for _ in 0..=self.total_dim() {
            if size == 0 {
                return true;
            }
            let mut next: Vec<Matrix> = (0..n).map(|e| Matrix::zeros(self.dims[e], 0)).collect();
            for (i, &(s, t)) in self.arrows.iter().enumerate() {
                let image = self.mats[i].mul(&spans[s.0]).expect("shapes agree");
                next[t.0] = next[t.0].hcat(&image).expect("shapes agree");
            }
            let next: Vec<Matrix> = next.iter().map(Matrix::column_basis).collect();
            let next_size: usize = next.iter().map(Matrix::cols).sum();
            if next_size == size {
                return false;
            }
            spans = next;
            size = next_size;
        }
        size == 0
    }
}

/// The state module: `Q^{d(e)}` at each edge and `(+)^{f₊(α)} (−)^{f₋(α)}` on each arrow.
pub fn state_module(dg: &DecoratedGraph, xi: &BmsState) -> QuiverRep {
    let q = dg.quiver();
    let dims: Vec<usize> = xi.d.values().iter().map(|&x| x as usize).collect();
    let mats = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(i, arr)| {
            let a = AngleId(i);
            plus_minus_matrix(
                xi.f_plus.get(a) as usize,
                xi.f_minus.get(a) as usize,
                dims[arr.target.0],
                dims[arr.source.0],
            )
        })
        .collect();
    QuiverRep::new(q, dims, mats).expect("state module shapes agree")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Residual {
    pub arrow: AngleId,
    pub max_abs_entry: String,
}

/// Which cyclic derivatives fail to act by zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JacobianReport {
    pub checked_arrows: usize,
    pub residuals: Vec<Residual>,
}

impl JacobianReport {
    pub fn is_ok(&self) -> bool {
        self.residuals.is_empty()
    }
}

/// Evaluates `∂_a S` on `m` for every arrow `a`.
pub fn check_jacobian(m: &QuiverRep, s: &Potential) -> Result<JacobianReport> {
    let mut residuals = Vec::new();
    for i in 0..m.num_arrows() {
        let a = AngleId(i);
        let (src, tgt) = m.arrow(a);
        let mut total = Matrix::zeros(m.dim(src), m.dim(tgt));
        for (c, path) in cyclic_derivative(s, a) {
            total = total.add(&m.evaluate_path(tgt, &path)?.scale(&c))?;
        }
        if !total.is_zero() {
            residuals.push(Residual {
                arrow: a,
                max_abs_entry: total.max_abs().to_string(),
            });
        }
    }
    Ok(JacobianReport {
        checked_arrows: m.num_arrows(),
        residuals,
    })
}

/// For `ξ = mov_e(ξ')`: checks that dimensions differ by one at `e` and that the
/// inclusion (identity away from `e`, `(+)` at `e`) intertwines all arrows.
pub fn check_short_exact_sequence(
    dg: &DecoratedGraph,
    xi_prime: &BmsState,
    e: EdgeId,
) -> Result<bool> {
    let xi = bms_mov(dg, xi_prime, e)?;
    let n = state_module(dg, xi_prime);
    let m = state_module(dg, &xi);
    let dims_ok = (0..m.dims.len()).all(|x| m.dims[x] == n.dims[x] + usize::from(x == e.0));
    if !dims_ok {
        return Ok(false);
    }
    let iota = |x: EdgeId| {
        if x == e {
            plus(n.dim(x))
        } else {
            Matrix::identity(n.dim(x))
        }
    };
    for i in 0..m.num_arrows() {
        let a = AngleId(i);
        let (s, t) = m.arrow(a);
        let lhs = m.matrix(a).mul(&iota(s))?;
        let rhs = iota(t).mul(n.matrix(a))?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bms::{bms_plus_lattice, component_minimum};
    use crate::corpus;
    use crate::quiver_rep::canonical_potential;
    use crate::quiver_rep::phantom_potential;

    fn trefoil_top() -> (DecoratedGraph, BmsState) {
        let dg = corpus::trefoil().kauffman_graph();
        let fmin = component_minimum(&dg, &dg.states()[0]).unwrap().0;
        let bl = bms_plus_lattice(&dg, &fmin, 500, 0).unwrap();
        let top = bl.lattice.elements[bl.lattice.max()].clone();
        (dg, top)
    }

    #[test]
    fn trivial_state_gives_zero_module() {
        let dg = corpus::trefoil().kauffman_graph();
        let m = state_module(&dg, &BmsState::trivial(&dg, &dg.states()[0]));
        assert_eq!(m, QuiverRep::zero(dg.quiver()));
        assert!(m.is_nilpotent());
    }

    #[test]
    fn top_module_shapes() {
        let (dg, top) = trefoil_top();
        let m = state_module(&dg, &top);
        let dims: Vec<i64> = m.dims().iter().map(|&x| x as i64).collect();
        assert_eq!(dims, top.d.values());
        for mat in m.matrices() {
            for row in mat.to_integers().unwrap() {
                assert!(row.iter().all(|&x| x == 0 || x == 1));
            }
        }
        assert!(m.is_nilpotent());
    }

    #[test]
    fn vertex_cycles_compose_to_shuffles() {
        let (dg, top) = trefoil_top();
        let m = state_module(&dg, &top);
        let q = dg.quiver();
        for v in dg.map().vertex_ids() {
            let cycle = q.vertex_cycle(v);
            let w = dg.weight().vertex(v) as usize;
            for i in 0..cycle.len() {
                let rotated: Vec<AngleId> = cycle[i..].iter().chain(&cycle[..i]).copied().collect();
                let e = q.arrow(rotated[0]).source;
                let d = m.dim(e);
                assert_eq!(
                    m.evaluate_path(e, &rotated).unwrap(),
                    plus_minus_matrix(w, w, d, d)
                );
            }
        }
    }

    #[test]
    fn paths() {
        let (dg, top) = trefoil_top();
        let m = state_module(&dg, &top);
        let e = EdgeId(0);
        assert_eq!(m.evaluate_path(e, &[]).unwrap(), Matrix::identity(m.dim(e)));
        let a = dg.quiver().outgoing(e)[0];
        assert_eq!(&m.evaluate_path(e, &[a]).unwrap(), m.matrix(a));
        let b = dg.quiver().incoming(e)[0];
        assert!(
            matches!(m.evaluate_path(e, &[b]), Err(Error::ShapeMismatch(_)))
                || dg.quiver().arrow(b).source == e
        );
    }

    #[test]
    fn composition_order_convention() {
        // 2×3 after 3×1 is defined only in the order M_β M_α
        let alpha = Matrix::zeros(3, 1);
        let beta = Matrix::zeros(2, 3);
        assert_eq!(beta.mul(&alpha).unwrap().shape(), (2, 1));
        assert!(alpha.mul(&beta).is_err());
    }

    #[test]
    fn jacobian_holds() {
        let (dg, top) = trefoil_top();
        let m = state_module(&dg, &top);
        let s = canonical_potential(&dg).unwrap();
        assert!(check_jacobian(&m, &s).unwrap().is_ok());
        assert!(check_jacobian(&m, &s.plus(&phantom_potential(&dg)))
            .unwrap()
            .is_ok());
    }

    #[test]
    fn corrupted_entries_leave_residuals() {
        // Kauffman-weight modules have no composable supported paths; the triangle does
        let dg = corpus::triangle_decorated();
        let s = canonical_potential(&dg).unwrap();
        let graph = crate::bms::bms_move_graph(&dg, dg.states(), Some(4)).unwrap();
        for x in &graph.nodes {
            assert!(check_jacobian(&state_module(&dg, x), &s).unwrap().is_ok());
        }
        let top = graph.nodes.iter().max_by_key(|x| x.d.total()).unwrap();
        let mut m = state_module(&dg, top);
        let mut caught = 0;
        for a in (0..m.num_arrows()).map(AngleId) {
            let original = m.matrix(a).clone();
            for (i, j) in itertools::iproduct!(0..original.rows(), 0..original.cols()) {
                let mut bad = original.clone();
                bad.set(
                    i,
                    j,
                    original.get(i, j) + crate::quiver_rep::matrix::integer(1),
                );
                m.set_matrix(a, bad).unwrap();
                let report = check_jacobian(&m, &s).unwrap();
                if !report.is_ok() {
                    caught += 1;
                    assert!(report.residuals.iter().all(|r| r.max_abs_entry != "0"));
                }
            }
            m.set_matrix(a, original).unwrap();
        }
        assert!(caught > 0);
    }

    #[test]
    fn identity_cycle_is_not_nilpotent() {
        let dg = corpus::trefoil().kauffman_graph();
        let q = dg.quiver();
        let cycle = q.vertex_cycle(crate::planar::VertexId(0));
        let mut dims = vec![0; q.num_vertices()];
        for &a in cycle {
            dims[q.arrow(a).source.0] = 1;
        }
        let mats = q
            .arrows()
            .iter()
            .enumerate()
            .map(|(i, arr)| {
                let (r, c) = (dims[arr.target.0], dims[arr.source.0]);
                if cycle.contains(&AngleId(i)) {
                    Matrix::identity(1)
                } else {
                    Matrix::zeros(r, c)
                }
            })
            .collect();
        let m = QuiverRep::new(q, dims, mats).unwrap();
        assert!(!m.is_nilpotent());
        assert!(QuiverRep::zero(q).is_nilpotent());
    }

    #[test]
    fn wrong_shapes_are_rejected() {
        let dg = corpus::hopf().kauffman_graph();
        let q = dg.quiver();
        let mut m = QuiverRep::simple(q, EdgeId(0));
        assert!(matches!(
            m.set_matrix(q.outgoing(EdgeId(0))[0], Matrix::zeros(1, 1)),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn short_exact_sequences_along_moves() {
        for entry in corpus::diagrams() {
            let dg = entry.kauffman_graph();
            let g = crate::bms::bms_move_graph(&dg, dg.states(), None).unwrap();
            for edge in &g.edges {
                assert!(
                    check_short_exact_sequence(&dg, &g.nodes[edge.from], edge.label).unwrap(),
                    "{}",
                    entry.name
                );
            }
        }
    }
}
