//! Endomorphism rings, indecomposability and simple tops.

use num_traits::Zero;
use petgraph::unionfind::UnionFind;
use serde::Serialize;

use super::matrix::{Matrix, Rational};
use super::module::QuiverRep;
use crate::error::{Error, Result};
use crate::planar::{AngleId, EdgeId};
use crate::weights::Weight;

/// A basis of `End(M)` as families of matrices, one per quiver vertex.
#[derive(Debug, Clone, Serialize)]
pub struct EndRing {
    pub basis: Vec<Vec<Matrix>>,
    pub dim: usize,
    pub radical_dim: usize,
    pub local: bool,
}

fn offsets(dims: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(dims.len() + 1);
    let mut acc = 0;
    out.push(0);
    for d in dims {
        acc += d * d;
        out.push(acc);
    }
    out
}

/// Solves `F_t M_α = M_α F_s` for all arrows. The radical is the kernel of the
/// trace form `(F, G) ↦ Σ_e tr(F_e G_e)`; the ring is local when the quotient
/// is one-dimensional.
pub fn endomorphism_ring(m: &QuiverRep) -> EndRing {
    let dims = m.dims();
    let off = offsets(dims);
    let unknowns = off[dims.len()];
    let var = |e: EdgeId, i: usize, j: usize| off[e.0] + i * dims[e.0] + j;
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for a in 0..m.num_arrows() {
        let a = AngleId(a);
        let (s, t) = m.arrow(a);
        let mat = m.matrix(a);
        for i in 0..dims[t.0] {
            for j in 0..dims[s.0] {
                let mut row = vec![Rational::zero(); unknowns];
                for k in 0..dims[t.0] {
                    row[var(t, i, k)] += mat.get(k, j);
                }
                for k in 0..dims[s.0] {
                    row[var(s, k, j)] -= mat.get(i, k);
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let kernel = if rows.is_empty() {
        (0..unknowns)
            .map(|u| {
                let mut v = vec![Rational::zero(); unknowns];
                v[u] = Rational::from_integer(1.into());
                v
            })
            .collect()
    } else {
        let mut system = Matrix::zeros(rows.len(), unknowns);
        for (r, row) in rows.into_iter().enumerate() {
            for (c, x) in row.into_iter().enumerate() {
                system.set(r, c, x);
            }
        }
        system.kernel()
    };
    let basis: Vec<Vec<Matrix>> = kernel
        .iter()
        .map(|v| {
            (0..dims.len())
                .map(|e| {
                    let d = dims[e];
                    let mut f = Matrix::zeros(d, d);
                    for i in 0..d {
                        for j in 0..d {
                            f.set(i, j, v[var(EdgeId(e), i, j)].clone());
                        }
                    }
                    f
                })
                .collect()
        })
        .collect();
    let dim = basis.len();
    let mut gram = Matrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            let mut tr = Rational::zero();
            for (f, g) in basis[i].iter().zip(&basis[j]) {
                tr += f.mul(g).expect("square").trace();
            }
            gram.set(i, j, tr);
        }
    }
    let rank = if dim == 0 { 0 } else { gram.rank() };
    EndRing {
        dim,
        radical_dim: dim - rank,
        local: rank == 1,
        basis,
    }
}

/// Verdicts of the support test and the endomorphism test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndecomposabilityReport {
    /// `None` when the weight is not characteristic.
    pub by_support: Option<bool>,
    pub by_endomorphisms: bool,
}

impl IndecomposabilityReport {
    pub fn agree(&self) -> bool {
        self.by_support.is_none_or(|s| s == self.by_endomorphisms)
    }

    /// The common verdict; an error when the support test was refused or the tests disagree.
    pub fn verdict(&self) -> Result<bool> {
        match self.by_support {
            None => Err(Error::NotCharacteristicWeight),
            Some(s) if s != self.by_endomorphisms => Err(Error::CertificationFailed(format!(
                "support test says {s}, endomorphism test says {}",
                self.by_endomorphisms
            ))),
            Some(s) => Ok(s),
        }
    }
}

/// Whether the support of `m` is non-empty and connected in the underlying graph of the quiver.
pub fn support_connected(m: &QuiverRep) -> bool {
    let support = m.support();
    if support.is_empty() {
        return false;
    }
    let mut uf = UnionFind::<usize>::new(m.dims().len());
    for a in 0..m.num_arrows() {
        let (s, t) = m.arrow(AngleId(a));
        if m.dim(s) > 0 && m.dim(t) > 0 {
            uf.union(s.0, t.0);
        }
    }
    let root = uf.find(support[0].0);
    support.iter().all(|e| uf.find(e.0) == root)
}

pub fn is_indecomposable(m: &QuiverRep, weight: &Weight) -> IndecomposabilityReport {
    IndecomposabilityReport {
        by_support: weight.is_characteristic().then(|| support_connected(m)),
        by_endomorphisms: endomorphism_ring(m).local,
    }
}

/// Vertices `e` at which `m` has `S_e` as a quotient: the incoming arrows do not span `M_e`.
pub fn simple_quotients(m: &QuiverRep) -> Vec<EdgeId> {
    m.support()
        .into_iter()
        .filter(|&e| {
            let d = m.dim(e);
            let span = m.incoming(e).iter().fold(Matrix::zeros(d, 0), |acc, &a| {
                acc.hcat(m.matrix(a)).expect("rows agree")
            });
            span.rank() < d
        })
        .collect()
}
