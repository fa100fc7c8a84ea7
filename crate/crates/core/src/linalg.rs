//! Small dense matrices and the cyclic Jacobi eigensolver.

use std::ops::{Index, IndexMut};

use crate::scalar::{lit, Real};

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a symmetric matrix from the upper triangle `f(i, j)`, `i <= j`.
    pub fn from_fn_symmetric(n: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let x = f(i, j);
                m[(i, j)] = x;
                m[(j, i)] = x;
            }
        }
        m
    }

    /// Copies the upper triangle onto the lower one.
    pub fn mirror_upper(&mut self) {
        for i in 0..self.rows {
            for j in 0..i {
                self[(i, j)] = self[(j, i)];
            }
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(T::zero(), |acc, k| acc + self[(i, k)] * other[(k, j)])
        })
    }

    /// `self += scale * u vᵀ`.
    pub fn add_outer(&mut self, scale: T, u: &[T], v: &[T]) {
        for i in 0..self.rows {
            for j in 0..self.cols {
                self[(i, j)] = self[(i, j)] + scale * u[i] * v[j];
            }
        }
    }

    pub fn add_scaled(&mut self, scale: T, other: &Self) {
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = *a + scale * b;
        }
    }

    pub fn scaled(&self, scale: T) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| a * scale).collect() }
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, &a| m.max(a.abs()))
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// Eigenvalues in ascending order; `vectors` holds the matching eigenvectors
/// as columns.
#[derive(Debug, Clone)]
pub struct SymmetricEigen<T> {
    pub values: Vec<T>,
    pub vectors: Matrix<T>,
}

impl<T: Real> SymmetricEigen<T> {
    pub fn vector(&self, k: usize) -> Vec<T> {
        (0..self.vectors.rows()).map(|i| self.vectors[(i, k)]).collect()
    }
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
///
/// Only the upper triangle is read. Sweeps stop once the off-diagonal mass is
/// below `eps * ||A||_F`; the rotation order is fixed, so the result is a pure
/// function of the input.
pub fn jacobi_eigen<T: Real>(a: &Matrix<T>) -> SymmetricEigen<T> {
    const MAX_SWEEPS: usize = 64;
    let n = a.rows();
    assert_eq!(n, a.cols(), "jacobi_eigen needs a square matrix");
    let mut m = Matrix::from_fn(n, n, |i, j| if i <= j { a[(i, j)] } else { a[(j, i)] });
    let mut v = Matrix::identity(n);

    let frob = m.data.iter().fold(T::zero(), |acc, &x| acc + x * x).sqrt();
    let target = T::epsilon() * frob;

    for _ in 0..MAX_SWEEPS {
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off = off + m[(p, q)] * m[(p, q)];
            }
        }
        if off.sqrt() <= target || off == T::zero() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq == T::zero() {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (lit::<T>(2.0) * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let t = if theta == T::zero() { T::one() } else { t };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                // A <- Jᵀ A J for the (p, q) plane rotation.
                for k in 0..n {
                    let akp = m[(k, p)];
                    let akq = m[(k, q)];
                    m[(k, p)] = c * akp - s * akq;
                    m[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = m[(p, k)];
                    let aqk = m[(q, k)];
                    m[(p, k)] = c * apk - s * aqk;
                    m[(q, k)] = s * apk + c * aqk;
                }
                m[(p, q)] = T::zero();
                m[(q, p)] = T::zero();
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].partial_cmp(&m[(j, j)]).unwrap_or(std::cmp::Ordering::Equal));
    SymmetricEigen {
        values: order.iter().map(|&i| m[(i, i)]).collect(),
        vectors: Matrix::from_fn(n, n, |i, k| v[(i, order[k])]),
    }
}

/// Minimum-norm solution of `A x = b` for symmetric `A`, discarding
/// eigenvalues with `|λ| <= rel_cut * max|λ|`.
pub fn pinv_solve_symmetric<T: Real>(a: &Matrix<T>, b: &[T], rel_cut: T) -> Vec<T> {
    let eig = jacobi_eigen(a);
    pinv_apply(&eig, b, rel_cut)
}

pub fn pinv_apply<T: Real>(eig: &SymmetricEigen<T>, b: &[T], rel_cut: T) -> Vec<T> {
    let n = b.len();
    let lmax = eig.values.iter().fold(T::zero(), |m, &l| m.max(l.abs()));
    let mut x = vec![T::zero(); n];
    if lmax == T::zero() {
        return x;
    }
    for (k, &lambda) in eig.values.iter().enumerate() {
        if lambda.abs() <= rel_cut * lmax {
            continue;
        }
        let coeff = (0..n).fold(T::zero(), |acc, i| acc + eig.vectors[(i, k)] * b[i]) / lambda;
        for (i, xi) in x.iter_mut().enumerate() {
            *xi = *xi + coeff * eig.vectors[(i, k)];
        }
    }
    x
}

pub fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

pub fn norm<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

pub fn distance<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + (x - y) * (x - y)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn diagonal_matrix_is_already_decomposed() {
        let a = Matrix::from_fn(3, 3, |i, j| if i == j { [3.0, -1.0, 2.0][i] } else { 0.0 });
        let eig = jacobi_eigen(&a);
        assert_eq!(eig.values, vec![-1.0, 2.0, 3.0]);
    }

    #[test]
    fn two_by_two_closed_form() {
        // [[2, 1], [1, 2]] has eigenvalues 1 and 3.
        let a = Matrix::from_fn(2, 2, |i, j| if i == j { 2.0f64 } else { 1.0 });
        let eig = jacobi_eigen(&a);
        assert!((eig.values[0] - 1.0).abs() < 1e-15);
        assert!((eig.values[1] - 3.0).abs() < 1e-15);
        let v = eig.vector(1);
        assert!((v[0].abs() - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn reconstructs_random_symmetric_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=8 {
            let raw = Matrix::from_fn(n, n, |_, _| 0.0);
            let mut a = raw.clone();
            for i in 0..n {
                for j in i..n {
                    let x: f64 = rng.random_range(-1.0..1.0);
                    a[(i, j)] = x;
                    a[(j, i)] = x;
                }
            }
            let eig = jacobi_eigen(&a);
            let d = Matrix::from_fn(n, n, |i, j| if i == j { eig.values[i] } else { 0.0 });
            let rebuilt = eig.vectors.matmul(&d).matmul(&eig.vectors.transpose());
            for i in 0..n {
                for j in 0..n {
                    assert!((rebuilt[(i, j)] - a[(i, j)]).abs() < 1e-13, "n={n}");
                }
            }
            let orth = eig.vectors.transpose().matmul(&eig.vectors);
            for i in 0..n {
                for j in 0..n {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((orth[(i, j)] - want).abs() < 1e-13);
                }
            }
            assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn pseudo_inverse_gives_minimum_norm_solution() {
        // Rank-one matrix e1 e1ᵀ: the solution of A x = (2, 0) is (2, 0).
        let a = Matrix::from_fn(2, 2, |i, j| if i == 0 && j == 0 { 1.0f64 } else { 0.0 });
        let x = pinv_solve_symmetric(&a, &[2.0, 5.0], 1e-12);
        assert!((x[0] - 2.0).abs() < 1e-15 && x[1].abs() < 1e-15);
    }

    #[test]
    fn works_in_single_precision() {
        let a = Matrix::from_fn(2, 2, |i, j| if i == j { 2.0f32 } else { 1.0 });
        let eig = jacobi_eigen(&a);
        assert!((eig.values[0] - 1.0).abs() < 1e-6);
    }
}
