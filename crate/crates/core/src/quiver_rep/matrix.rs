//! Dense matrices over exact rationals.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rational(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn integer(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Matrix::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, integer(x));
            }
        }
        m
    }

    /// The nilpotent upper Jordan block of size `n`.
    pub fn jordan(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 1..n {
            m.set(i - 1, i, Rational::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Rational) {
        self.data[i * self.cols + j] = x;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Entries as integers, if they all are.
    pub fn to_integers(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| {
                        let x = self.get(i, j);
                        x.is_integer()
                            .then(|| i64::try_from(x.to_integer()).ok())
                            .flatten()
                    })
                    .collect()
            })
            .collect()
    }

    /// `self · other`.
    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} plus {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.add(&other.scale(&integer(-1)))
    }

    pub fn scale(&self, c: &Rational) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).fold(Rational::zero(), |acc, i| acc + self.get(i, i))
    }

    /// Columns of `self` followed by columns of `other`.
    pub fn hcat(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot place {} rows beside {} rows",
                self.rows, other.rows
            )));
        }
        let cols = self.cols + other.cols;
        let mut out = Matrix::zeros(self.rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            for j in 0..m.cols {
                m.data.swap(r * m.cols + j, p * m.cols + j);
            }
            let inv = m.get(r, c).recip();
            for j in 0..m.cols {
                let x = m.get(r, j) * &inv;
                m.set(r, j, x);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in 0..m.cols {
                    let x = m.get(i, j) - &f * m.get(r, j);
                    m.set(i, j, x);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis of `{x : self · x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let (m, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -m.get(r, f).clone();
                }
                v
            })
            .collect()
    }

    /// A matrix whose columns form a basis of the column space.
    pub fn column_basis(&self) -> Matrix {
        let (_, pivots) = self.rref();
        let mut out = Matrix::zeros(self.rows, pivots.len());
        for (k, &c) in pivots.iter().enumerate() {
            for i in 0..self.rows {
                out.set(i, k, self.get(i, c).clone());
            }
        }
        out
    }

    pub fn max_abs(&self) -> Rational {
        self.data
            .iter()
            .map(|x| x.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            write!(f, "[{}]", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Row-major list of rows; entries as strings so fractions survive.
impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

/// The `rows × cols` matrix of `(+)^c (−)^k`: an identity block of size
/// `r = cols − k = rows − c` in the top right corner, zero otherwise.
pub fn plus_minus_matrix(c: usize, k: usize, rows: usize, cols: usize) -> Matrix {
    let mut m = Matrix::zeros(rows, cols);
    if k <= cols && c <= rows && cols - k == rows - c {
        for i in 0..cols - k {
            m.set(i, k + i, Rational::one());
        }
    }
    m
}

/// `(+)_n : C^n → C^{n+1}`; zero when `n = 0`.
pub fn plus(n: usize) -> Matrix {
    plus_minus_matrix(1, 0, n + 1, n)
}

/// `(−)_n : C^n → C^{n−1}`; zero when `n = 0`.
pub fn minus(n: usize) -> Matrix {
    plus_minus_matrix(0, 1, n.saturating_sub(1), n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn jordan_and_identity() {
        assert_eq!(plus_minus_matrix(1, 1, 3, 3), Matrix::jordan(3));
        assert_eq!(plus_minus_matrix(0, 0, 4, 4), Matrix::identity(4));
        for n in 1..6 {
            // (+)_{n-1} (−)_n = J_n = (−)_{n+1} (+)_n
            assert_eq!(plus(n - 1).mul(&minus(n)).unwrap(), Matrix::jordan(n));
            assert_eq!(minus(n + 1).mul(&plus(n)).unwrap(), Matrix::jordan(n));
        }
    }

    #[test]
    fn mixed_block() {
        // (+)^2 (−) from C^3 to C^4, composed from the defining maps
        let composite = plus(3).mul(&plus(2)).unwrap().mul(&minus(3)).unwrap();
        let direct = plus_minus_matrix(2, 1, 4, 3);
        assert_eq!(composite, direct);
        assert_eq!(
            direct,
            Matrix::from_rows(&[vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0], vec![0, 0, 0]])
        );
        assert_eq!(direct.rank(), 2);
    }

    #[test]
    fn degenerate_shapes() {
        assert_eq!(plus_minus_matrix(2, 0, 1, 3), Matrix::zeros(1, 3));
        assert_eq!(plus_minus_matrix(0, 4, 0, 3), Matrix::zeros(0, 3));
        assert_eq!(plus_minus_matrix(0, 0, 0, 0).shape(), (0, 0));
        assert!(Matrix::zeros(2, 3).mul(&Matrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn kernel_and_rank() {
        let m = Matrix::from_rows(&[vec![1, 2, 3], vec![2, 4, 6]]);
        assert_eq!(m.rank(), 1);
        let ker = m.kernel();
        assert_eq!(ker.len(), 2);
        for v in ker {
            let col = Matrix {
                rows: 3,
                cols: 1,
                data: v,
            };
            assert!(m.mul(&col).unwrap().is_zero());
        }
    }

    fn word_product(word: &[bool], dim: usize) -> Option<Matrix> {
        // word read right to left: true = (+), false = (−)
        let mut n = dim;
        let mut acc = Matrix::identity(dim);
        for &p in word.iter().rev() {
            let step = if p { plus(n) } else { minus(n) };
            if !p && n == 0 {
                return None;
            }
            n = if p { n + 1 } else { n - 1 };
            acc = step.mul(&acc).unwrap();
        }
        Some(acc)
    }

    proptest! {
        // any word in (+) and (−) equals the shuffled form (+)^c (−)^k
        #[test]
        fn shuffle_identity(word in proptest::collection::vec(any::<bool>(), 0..7), dim in 0usize..6) {
            let c = word.iter().filter(|&&p| p).count();
            let k = word.len() - c;
            let mut lowest = dim as i64;
            let mut n = dim as i64;
            for &p in word.iter().rev() {
                n += if p { 1 } else { -1 };
                lowest = lowest.min(n);
            }
            prop_assume!(lowest >= 0);
            let product = word_product(&word, dim).unwrap();
            let rows = (dim + c) - k;
            let shuffled = plus_minus_matrix(c, k, rows, dim);
            prop_assert_eq!(product, shuffled);
        }
    }
}
