//! Finite posets, lattice certification and Hasse-diagram export.

use std::fmt;

use petgraph::unionfind::UnionFind;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Lattices up to this size get an exhaustive distributivity check by default.
pub const DEFAULT_EXHAUSTIVE_BOUND: usize = 500;
const SAMPLED_TRIPLES: usize = 200_000;

/// A finite partial order on `0..n`, stored as its full order relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePoset {
    n: usize,
    leq: Vec<bool>,
    covers: Vec<(usize, usize)>,
}

impl FinitePoset {
    /// The order generated by the given relations `(a, b)` meaning `a < b`.
    /// Redundant and duplicate pairs are allowed.
    pub fn from_relations(
        n: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut succ = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for (a, b) in pairs {
            if a == b {
                return Err(Error::CyclicCovers);
            }
            succ[a].push(b);
            indeg[b] += 1;
        }
        // topological order (Kahn), then closure in reverse order
        let mut order = Vec::with_capacity(n);
        let mut stack: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        while let Some(x) = stack.pop() {
            order.push(x);
            for &y in &succ[x] {
                indeg[y] -= 1;
                if indeg[y] == 0 {
                    stack.push(y);
                }
            }
        }
        if order.len() != n {
            return Err(Error::CyclicCovers);
        }
        let mut leq = vec![false; n * n];
        for &x in order.iter().rev() {
            leq[x * n + x] = true;
            for &y in &succ[x] {
                for z in 0..n {
                    if leq[y * n + z] {
                        leq[x * n + z] = true;
                    }
                }
            }
        }
        Ok(Self::with_relation(n, leq))
    }

    /// Builds a poset from an order predicate, checking the partial-order axioms.
    pub fn from_order(n: usize, le: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let mut leq = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                leq[a * n + b] = le(a, b);
            }
        }
        for a in 0..n {
            if !leq[a * n + a] {
                return Err(Error::CertificationFailed(format!(
                    "relation is not reflexive at {a}"
                )));
            }
            for b in 0..n {
                if a != b && leq[a * n + b] && leq[b * n + a] {
                    return Err(Error::CyclicCovers);
                }
                if !leq[a * n + b] {
                    continue;
                }
                for c in 0..n {
                    if leq[b * n + c] && !leq[a * n + c] {
                        return Err(Error::CertificationFailed(format!(
                            "relation is not transitive at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(Self::with_relation(n, leq))
    }

    fn with_relation(n: usize, leq: Vec<bool>) -> Self {
        let mut covers = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a == b || !leq[a * n + b] {
                    continue;
                }
                let between = (0..n).any(|c| c != a && c != b && leq[a * n + c] && leq[c * n + b]);
                if !between {
                    covers.push((a, b));
                }
            }
        }
        FinitePoset { n, leq, covers }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.n + b]
    }

    /// Cover pairs `(a, b)` with `a ⋖ b`, sorted.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn minimal(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&a| (0..self.n).all(|b| b == a || !self.leq(b, a)))
            .collect()
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&a| (0..self.n).all(|b| b == a || !self.leq(a, b)))
            .collect()
    }

    fn down_size(&self) -> Vec<usize> {
        (0..self.n)
            .map(|a| (0..self.n).filter(|&b| self.leq(b, a)).count())
            .collect()
    }

    fn up_size(&self) -> Vec<usize> {
        (0..self.n)
            .map(|a| (0..self.n).filter(|&b| self.leq(a, b)).count())
            .collect()
    }

    /// Greatest lower bound, if it exists.
    pub fn meet(&self, a: usize, b: usize) -> Option<usize> {
        bound(self, a, b, &self.down_size(), false)
    }

    /// Least upper bound, if it exists.
    pub fn join(&self, a: usize, b: usize) -> Option<usize> {
        bound(self, a, b, &self.up_size(), true)
    }
}

// The lower (upper) bound whose down-set (up-set) has the size of the whole
// bound set is the greatest (least) one.
fn bound(p: &FinitePoset, a: usize, b: usize, sizes: &[usize], upper: bool) -> Option<usize> {
    let rel = |x: usize, y: usize| if upper { p.leq(y, x) } else { p.leq(x, y) };
    let mut count = 0;
    let mut best: Option<usize> = None;
    for x in 0..p.n {
        if rel(x, a) && rel(x, b) {
            count += 1;
            if best.is_none_or(|m| sizes[x] > sizes[m]) {
                best = Some(x);
            }
        }
    }
    best.filter(|&m| sizes[m] == count)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum DistributivityCheck {
    Exhaustive,
    Sampled { triples: usize, seed: u64 },
}

/// Evidence that a poset is a graded distributive lattice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub size: usize,
    pub min: usize,
    pub max: usize,
    pub grade_range: (i64, i64),
    pub covers: Vec<(usize, usize)>,
    pub meet: Vec<Vec<usize>>,
    pub join: Vec<Vec<usize>>,
    pub distributivity: DistributivityCheck,
}

impl Certificate {
    /// Re-checks the tables against the poset: each entry is the claimed bound.
    pub fn check(&self, p: &FinitePoset) -> bool {
        let n = p.len();
        self.size == n
            && self.meet.len() == n
            && self.join.len() == n
            && (0..n).all(|a| {
                (0..n).all(|b| {
                    let m = self.meet[a][b];
                    let j = self.join[a][b];
                    p.leq(m, a)
                        && p.leq(m, b)
                        && p.leq(a, j)
                        && p.leq(b, j)
                        && (0..n).all(|x| {
                            (!(p.leq(x, a) && p.leq(x, b)) || p.leq(x, m))
                                && (!(p.leq(a, x) && p.leq(b, x)) || p.leq(j, x))
                        })
                })
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Counterexample {
    Empty,
    NoJoin { a: usize, b: usize },
    NoMeet { a: usize, b: usize },
    NotDistributive { a: usize, b: usize, c: usize },
    BadGrade { lower: usize, upper: usize },
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Counterexample::Empty => write!(f, "empty poset"),
            Counterexample::NoJoin { a, b } => write!(f, "elements {a} and {b} have no join"),
            Counterexample::NoMeet { a, b } => write!(f, "elements {a} and {b} have no meet"),
            Counterexample::NotDistributive { a, b, c } => {
                write!(f, "distributive law fails for ({a}, {b}, {c})")
            }
            Counterexample::BadGrade { lower, upper } => {
                write!(f, "cover {lower} < {upper} does not raise the grade by one")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Certification {
    Certificate(Certificate),
    Counterexample(Counterexample),
}

impl Certification {
    pub fn is_certified(&self) -> bool {
        matches!(self, Certification::Certificate(_))
    }

    pub fn into_result(self) -> Result<Certificate> {
        match self {
            Certification::Certificate(c) => Ok(c),
            Certification::Counterexample(c) => Err(Error::CertificationFailed(c.to_string())),
        }
    }
}

/// Checks that `p` is a lattice, that both distributive laws hold, and that
/// every cover raises `grade` by exactly one. Distributivity is checked on all
/// triples when `|p| <= exhaustive_bound`, otherwise on seeded random triples.
pub fn certify_graded_distributive_lattice(
    p: &FinitePoset,
    grade: &[i64],
    exhaustive_bound: usize,
    seed: u64,
) -> Certification {
    use Certification::Counterexample as Fail;
    let n = p.len();
    if n == 0 {
        return Fail(Counterexample::Empty);
    }
    let down = p.down_size();
    let up = p.up_size();
    let mut meet = vec![vec![0; n]; n];
    let mut join = vec![vec![0; n]; n];
    for a in 0..n {
        for b in a..n {
            match bound(p, a, b, &up, true) {
                Some(j) => {
                    join[a][b] = j;
                    join[b][a] = j;
                }
                None => return Fail(Counterexample::NoJoin { a, b }),
            }
            match bound(p, a, b, &down, false) {
                Some(m) => {
                    meet[a][b] = m;
                    meet[b][a] = m;
                }
                None => return Fail(Counterexample::NoMeet { a, b }),
            }
        }
    }
    let distributive_at = |a: usize, b: usize, c: usize| {
        meet[a][join[b][c]] == join[meet[a][b]][meet[a][c]]
            && join[a][meet[b][c]] == meet[join[a][b]][join[a][c]]
    };
    let distributivity = if n <= exhaustive_bound {
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if !distributive_at(a, b, c) {
                        return Fail(Counterexample::NotDistributive { a, b, c });
                    }
                }
            }
        }
        DistributivityCheck::Exhaustive
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..SAMPLED_TRIPLES {
            let (a, b, c) = (
                rng.random_range(0..n),
                rng.random_range(0..n),
                rng.random_range(0..n),
            );
            if !distributive_at(a, b, c) {
                return Fail(Counterexample::NotDistributive { a, b, c });
            }
        }
        DistributivityCheck::Sampled {
            triples: SAMPLED_TRIPLES,
            seed,
        }
    };
    for &(lower, upper) in p.covers() {
        if grade[upper] != grade[lower] + 1 {
            return Fail(Counterexample::BadGrade { lower, upper });
        }
    }
    let min = meet[0].iter().copied().fold(0, |m, x| meet[m][x]);
    let max = join[0].iter().copied().fold(0, |m, x| join[m][x]);
    Certification::Certificate(Certificate {
        size: n,
        min,
        max,
        grade_range: (grade[min], grade[max]),
        covers: p.covers().to_vec(),
        meet,
        join,
        distributivity,
    })
}

/// True iff `phi` is a bijection `p -> q` with `x <= y` exactly when `phi(x) <= phi(y)`.
pub fn verify_order_isomorphism(p: &FinitePoset, q: &FinitePoset, phi: &[usize]) -> bool {
    let n = p.len();
    if q.len() != n || phi.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &y in phi {
        if y >= n || seen[y] {
            return false;
        }
        seen[y] = true;
    }
    (0..n).all(|a| (0..n).all(|b| p.leq(a, b) == q.leq(phi[a], phi[b])))
}

/// Undirected connected components of a graph on `0..n`: each component
/// sorted, components ordered by their smallest node.
pub fn connected_components(
    n: usize,
    edges: impl IntoIterator<Item = (usize, usize)>,
) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::<usize>::new(n);
    for (a, b) in edges {
        uf.union(a, b);
    }
    let labels = uf.into_labeling();
    let mut slot = vec![usize::MAX; n];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (x, &root) in labels.iter().enumerate() {
        if slot[root] == usize::MAX {
            slot[root] = out.len();
            out.push(Vec::new());
        }
        out[slot[root]].push(x);
    }
    out
}

/// A certified graded distributive lattice with its elements.
#[derive(Debug, Clone, Serialize)]
pub struct FiniteLattice<T> {
    pub elements: Vec<T>,
    pub grade: Vec<i64>,
    pub certificate: Certificate,
    #[serde(skip)]
    poset: FinitePoset,
}

impl<T> FiniteLattice<T> {
    /// Certifies `poset` (on the indices of `elements`) and wraps it.
    pub fn certify(
        elements: Vec<T>,
        poset: FinitePoset,
        grade: Vec<i64>,
        exhaustive_bound: usize,
        seed: u64,
    ) -> Result<Self> {
        assert_eq!(elements.len(), poset.len());
        let certificate =
            certify_graded_distributive_lattice(&poset, &grade, exhaustive_bound, seed)
                .into_result()?;
        Ok(FiniteLattice {
            elements,
            grade,
            certificate,
            poset,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.poset.leq(a, b)
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.certificate.meet[a][b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.certificate.join[a][b]
    }

    pub fn min(&self) -> usize {
        self.certificate.min
    }

    pub fn max(&self) -> usize {
        self.certificate.max
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        self.poset.covers()
    }

    pub fn to_dot(&self, name: &str, label: impl Fn(&T) -> String) -> String {
        let labels: Vec<String> = self.elements.iter().map(label).collect();
        hasse_export(&self.poset, name, &labels)
    }
}

/// Hasse diagram in dot format, with edges pointing from lower to upper covers.
pub fn hasse_export(p: &FinitePoset, name: &str, labels: &[String]) -> String {
    let mut out = format!("digraph {name} {{\n  rankdir=BT;\n");
    for i in 0..p.len() {
        let label = labels
            .get(i)
            .map_or_else(|| i.to_string(), |s| s.replace('"', "'"));
        out.push_str(&format!("  n{i} [label=\"{label}\"];\n"));
    }
    for &(a, b) in p.covers() {
        out.push_str(&format!("  n{a} -> n{b};\n"));
    }
    out.push_str("}\n");
    out
}

/// Reads back a diagram written by [`hasse_export`].
pub fn hasse_import(text: &str) -> Result<FinitePoset> {
    let node = |tok: &str| -> Result<usize> {
        tok.trim()
            .strip_prefix('n')
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad node name {tok:?}")))
    };
    let mut n = 0;
    let mut pairs = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim().trim_end_matches(';');
        let at = |e: Error| match e {
            Error::Parse(m) => Error::Parse(format!("line {}: {m}", lineno + 1)),
            other => other,
        };
        if let Some((a, b)) = line.split_once("->") {
            pairs.push((node(a).map_err(at)?, node(b).map_err(at)?));
        } else if let Some((head, _)) = line.split_once('[') {
            if head.trim().starts_with('n') {
                n = n.max(node(head).map_err(at)? + 1);
            }
        }
    }
    if let Some(&(a, b)) = pairs.iter().find(|&&(a, b)| a >= n || b >= n) {
        return Err(Error::Parse(format!(
            "cover {a} -> {b} names an undeclared node"
        )));
    }
    FinitePoset::from_relations(n, pairs)
}
