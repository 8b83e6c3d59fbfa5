//! Dense complex linear algebra for the small (n ≤ 16) matrices of the filter model.

mod eigen;

use std::ops::{Index, IndexMut};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Scalar, C};

pub use eigen::{eigenvalues, hessenberg};

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix<T: Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<C<T>>,
}

impl<T: Scalar> CMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn diagonal(values: &[C<T>]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Submatrix with row `r` and column `c` removed.
    pub fn minor(&self, r: usize, c: usize) -> Self {
        let mut data = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for i in (0..self.rows).filter(|&i| i != r) {
            for j in (0..self.cols).filter(|&j| j != c) {
                data.push(self[(i, j)]);
            }
        }
        Self {
            rows: self.rows - 1,
            cols: self.cols - 1,
            data,
        }
    }

    pub fn scale(&self, k: C<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * k).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(C::zero(), |acc, k| acc + self[(i, k)] * other[(k, j)])
        })
    }

    /// Maximum absolute column sum.
    pub fn norm1(&self) -> T {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].norm()).sum::<T>())
            .fold(T::zero(), T::max)
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn lu(&self) -> Lu<T> {
        Lu::new(self)
    }

    /// Determinant by LU factorization. The determinant of a 0×0 matrix is 1.
    pub fn det(&self) -> C<T> {
        assert!(self.is_square(), "determinant of a non-square matrix");
        if self.rows == 0 {
            return C::one();
        }
        self.lu().det()
    }

    /// Signed cofactor `(-1)^(r+c) det(minor(r, c))`.
    pub fn cofactor(&self, r: usize, c: usize) -> C<T> {
        let d = self.minor(r, c).det();
        if (r + c).is_multiple_of(2) {
            d
        } else {
            -d
        }
    }
}

impl<T: Scalar> Index<(usize, usize)> for CMatrix<T> {
    type Output = C<T>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T: Scalar> IndexMut<(usize, usize)> for CMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// LU factorization with partial pivoting, `P·A = L·U`.
#[derive(Debug, Clone)]
pub struct Lu<T: Scalar> {
    lu: CMatrix<T>,
    perm: Vec<usize>,
    swaps: usize,
    singular: bool,
}

impl<T: Scalar> Lu<T> {
    fn new(a: &CMatrix<T>) -> Self {
        assert!(a.is_square(), "LU of a non-square matrix");
        let n = a.rows;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        let mut singular = false;
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold((k, -T::one()), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pmax == T::zero() {
                singular = true;
                continue;
            }
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
                perm.swap(k, p);
                swaps += 1;
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] = lu[(i, j)] - f * u;
                }
            }
        }
        Self {
            lu,
            perm,
            swaps,
            singular,
        }
    }

    pub fn is_singular(&self) -> bool {
        self.singular
    }

    pub fn det(&self) -> C<T> {
        if self.singular {
            return C::zero();
        }
        let n = self.lu.rows;
        let d = (0..n).fold(C::one(), |acc, i| acc * self.lu[(i, i)]);
        if self.swaps % 2 == 1 {
            -d
        } else {
            d
        }
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[C<T>]) -> Option<Vec<C<T>>> {
        if self.singular {
            return None;
        }
        let n = self.lu.rows;
        let mut x: Vec<C<T>> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for k in 0..i {
                let l = self.lu[(i, k)];
                x[i] = x[i] - l * x[k];
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let u = self.lu[(i, k)];
                x[i] = x[i] - u * x[k];
            }
            x[i] = x[i] / self.lu[(i, i)];
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<CMatrix<T>> {
        let n = self.lu.rows;
        let mut inv = CMatrix::zeros(n, n);
        let mut e = vec![C::zero(); n];
        for j in 0..n {
            e.iter_mut().for_each(|z| *z = C::zero());
            e[j] = C::one();
            let col = self.solve(&e)?;
            for (i, v) in col.into_iter().enumerate() {
                inv[(i, j)] = v;
            }
        }
        Some(inv)
    }
}

/// Inverse together with the 1-norm condition number `‖A‖₁‖A⁻¹‖₁`.
pub fn inverse_with_condition<T: Scalar>(a: &CMatrix<T>) -> Result<(CMatrix<T>, T)> {
    let inv = a
        .lu()
        .inverse()
        .ok_or_else(|| Error::NumericalFailure("exactly singular matrix".into()))?;
    if !inv.is_finite() {
        return Err(Error::NumericalFailure("non-finite inverse".into()));
    }
    let cond = a.norm1() * inv.norm1();
    Ok((inv, cond))
}

/// Condition number above which a matrix is treated as numerically singular.
pub fn singular_threshold<T: Scalar>() -> T {
    T::one() / (T::epsilon() * T::of(1e4))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cplx;

    fn m2(a: [[(f64, f64); 2]; 2]) -> CMatrix<f64> {
        CMatrix::from_fn(2, 2, |i, j| cplx(a[i][j].0, a[i][j].1))
    }

    #[test]
    fn det_of_2x2() {
        let a = m2([[(1.0, 0.0), (0.0, -1.0)], [(0.0, -1.0), (1.0, 0.0)]]);
        let d = a.det();
        assert!((d - cplx(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn inverse_times_matrix_is_identity() {
        let a = CMatrix::from_fn(4, 4, |i, j| {
            cplx(((i * 7 + j * 3) % 5) as f64 - 2.0, ((i + 2 * j) % 3) as f64)
        });
        let inv = a.lu().inverse().unwrap();
        let p = a.matmul(&inv);
        assert!(p.sub(&CMatrix::identity(4)).max_abs() < 1e-12);
    }

    #[test]
    fn singular_matrix_is_flagged() {
        let a = m2([[(1.0, 0.0), (2.0, 0.0)], [(2.0, 0.0), (4.0, 0.0)]]);
        assert!(a.lu().is_singular());
        assert_eq!(a.det(), C::zero());
        assert!(inverse_with_condition(&a).is_err());
    }

    #[test]
    fn cofactor_signs() {
        let a = CMatrix::from_fn(3, 3, |i, j| cplx((3 * i + j + 1) as f64, 0.0));
        // minor(0,1) = [[4,6],[7,9]] -> det = -6, cofactor = 6
        assert!((a.cofactor(0, 1) - cplx(6.0, 0.0)).norm() < 1e-12);
        assert_eq!(CMatrix::<f64>::zeros(0, 0).det(), C::one());
    }
}
