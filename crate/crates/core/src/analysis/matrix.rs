use std::fmt;
use std::sync::OnceLock;

use num_traits::Num;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("rows have lengths {0:?}; expected a square matrix")]
    NotSquare(Vec<usize>),
    #[error("determinant is zero")]
    Singular,
    #[error("dimension mismatch: {0} vs {1}")]
    Dimension(usize, usize),
}

/// A square matrix over a commutative ring, with a cached determinant.
pub struct Matrix<T> {
    n: usize,
    entries: Vec<T>,
    det: OnceLock<T>,
}

impl<T: Clone> Clone for Matrix<T> {
    fn clone(&self) -> Self {
        Matrix { n: self.n, entries: self.entries.clone(), det: self.det.clone() }
    }
}

impl<T: PartialEq> PartialEq for Matrix<T> {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.entries == other.entries
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.entries.chunks(self.n.max(1))).finish()
    }
}

impl<T: Clone + Num> Matrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, MatrixError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(MatrixError::NotSquare(rows.iter().map(Vec::len).collect()));
        }
        Ok(Matrix { n, entries: rows.into_iter().flatten().collect(), det: OnceLock::new() })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let entries = (0..n * n).map(|k| f(k / n, k % n)).collect();
        Matrix { n, entries, det: OnceLock::new() }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.entries.chunks(self.n.max(1)).take(self.n).map(<[T]>::to_vec).collect()
    }

    pub fn mul(&self, other: &Self) -> Result<Self, MatrixError> {
        if self.n != other.n {
            return Err(MatrixError::Dimension(self.n, other.n));
        }
        let n = self.n;
        Ok(Self::from_fn(n, |i, j| {
            (0..n).fold(T::zero(), |acc, k| acc + self.get(i, k).clone() * other.get(k, j).clone())
        }))
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::from_fn(self.n, |i, j| self.get(i, j).clone() * c.clone())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    /// Delete row `r` and column `c`.
    pub fn minor(&self, r: usize, c: usize) -> Self {
        let n = self.n - 1;
        Self::from_fn(n, |i, j| {
            let i = if i < r { i } else { i + 1 };
            let j = if j < c { j } else { j + 1 };
            self.get(i, j).clone()
        })
    }

    /// Cached; see [`Matrix::compute_determinant`].
    pub fn determinant(&self) -> T {
        self.det.get_or_init(|| self.compute_determinant()).clone()
    }

    /// Fraction-free (Bareiss) elimination, so it is exact over any integral domain
    /// whose division is exact on the quotients that arise.
    pub fn compute_determinant(&self) -> T {
        let n = self.n;
        if n == 0 {
            return T::one();
        }
        let mut a = self.entries.clone();
        let mut sign_flip = false;
        let mut prev = T::one();
        for k in 0..n - 1 {
            if a[k * n + k].is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !a[r * n + k].is_zero()) else {
                    return T::zero();
                };
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                sign_flip = !sign_flip;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = a[i * n + j].clone() * a[k * n + k].clone() - a[i * n + k].clone() * a[k * n + j].clone();
                    a[i * n + j] = v / prev.clone();
                }
            }
            prev = a[k * n + k].clone();
        }
        let d = a[n * n - 1].clone();
        if sign_flip {
            T::zero() - d
        } else {
            d
        }
    }

    /// Transposed cofactor matrix.
    pub fn adjugate(&self) -> Self {
        let n = self.n;
        if n == 1 {
            return Self::identity(1);
        }
        Self::from_fn(n, |i, j| {
            let m = self.minor(j, i).determinant();
            if (i + j) % 2 == 0 {
                m
            } else {
                T::zero() - m
            }
        })
    }

    /// `adj(M) / det(M)`
    pub fn inverse(&self) -> Result<Self, MatrixError> {
        let d = self.determinant();
        if d.is_zero() {
            return Err(MatrixError::Singular);
        }
        let n = self.n;
        let adj = self.adjugate();
        Ok(Self::from_fn(n, |i, j| adj.get(i, j).clone() / d.clone()))
    }
}

/// Cramer's rule: `M⁻¹ = adj(M) / det(M)`.
pub fn matrix_inverse(m: &super::RatMatrix) -> Result<super::RatMatrix, MatrixError> {
    m.inverse()
}
