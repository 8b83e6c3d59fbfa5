//! Normalized coupling-matrix model of an n-resonator filter.
//!
//! The system matrix is `A(s) = q + s·I − j·m`, where `q` is zero except for
//! `q11 = 1/qe1` and `qnn = 1/qen`. Written as `A(s) = s·I − M` with
//! `M = j·m − q`, the poles of the filter are the eigenvalues of `M`.


use crate::error::{invalid, Result};
use crate::linalg::CMatrix;
use crate::prototype::CouplingTargets;
use crate::scalar::{imag, real, Scalar, C};

/// Real symmetric coupling matrix together with the normalized external
/// quality factors of the first and last resonator.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingMatrix<T: Scalar> {
    n: usize,
    m: Vec<T>,
    qe1: T,
    qen: T,
}

impl<T: Scalar> CouplingMatrix<T> {
    /// All-zero couplings for `n` resonators.
    pub fn new(n: usize, qe1: T, qen: T) -> Result<Self> {
        if n == 0 {
            return Err(invalid("coupling matrix needs at least one resonator"));
        }
        check_qe(qe1, qen)?;
        Ok(Self {
            n,
            m: vec![T::zero(); n * n],
            qe1,
            qen,
        })
    }

    /// Builds from row-major entries. Only the upper triangle (including the
    /// diagonal) is read; the lower triangle is mirrored from it.
    pub fn from_rows(rows: &[Vec<T>], qe1: T, qen: T) -> Result<Self> {
        let n = rows.len();
        let mut cm = Self::new(n, qe1, qen)?;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(invalid(format!(
                    "coupling matrix row {} has {} entries, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
            for (j, v) in row.iter().enumerate().skip(i) {
                if !v.is_finite() {
                    return Err(invalid(format!("non-finite coupling m[{}][{}]", i + 1, j + 1)));
                }
                cm.set(i, j, *v);
            }
        }
        Ok(cm)
    }

    /// Builds the synchronously tuned ladder matrix `m(i,i+1) = k_i / fbw`,
    /// `qe = Q_e · fbw`.
    pub fn from_couplings(targets: &CouplingTargets<T>, fbw: T) -> Result<Self> {
        if !(fbw > T::zero() && fbw < T::one()) {
            return Err(invalid(format!("fractional bandwidth must lie in (0, 1), got {fbw}")));
        }
        let n = targets.k.len() + 1;
        let mut cm = Self::new(n, targets.q_ea * fbw, targets.q_eb * fbw)?;
        for (i, &k) in targets.k.iter().enumerate() {
            cm.set(i, i + 1, k / fbw);
        }
        Ok(cm)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.m[i * self.n + j]
    }

    /// Sets `m_ij` and `m_ji` together.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.m[i * self.n + j] = v;
        self.m[j * self.n + i] = v;
    }

    #[inline]
    pub fn qe1(&self) -> T {
        self.qe1
    }

    #[inline]
    pub fn qen(&self) -> T {
        self.qen
    }

    pub fn set_qe1(&mut self, v: T) -> Result<()> {
        check_qe(v, self.qen)?;
        self.qe1 = v;
        Ok(())
    }

    pub fn set_qen(&mut self, v: T) -> Result<()> {
        check_qe(self.qe1, v)?;
        self.qen = v;
        Ok(())
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.m.chunks(self.n).map(<[T]>::to_vec).collect()
    }

    /// Superdiagonal couplings `m(i,i+1)`.
    pub fn mainline(&self) -> Vec<T> {
        (0..self.n - 1).map(|i| self.get(i, i + 1)).collect()
    }

    /// True when every entry outside the diagonal and first superdiagonal is zero.
    pub fn is_ladder(&self) -> bool {
        (0..self.n).all(|i| (i + 2..self.n).all(|j| self.get(i, j) == T::zero()))
    }

    /// The `q` matrix diagonal contribution at resonator `i`.
    fn q_diag(&self, i: usize) -> T {
        let mut q = T::zero();
        if i == 0 {
            q = q + T::one() / self.qe1;
        }
        if i == self.n - 1 {
            q = q + T::one() / self.qen;
        }
        q
    }

    /// `A(s) = q + s·I − j·m`.
    pub fn assemble_a(&self, s: C<T>) -> CMatrix<T> {
        CMatrix::from_fn(self.n, self.n, |i, j| {
            let mut a = -imag(self.get(i, j));
            if i == j {
                a = a + s + real(self.q_diag(i));
            }
            a
        })
    }

    /// `M = j·m − q`, so that `A(s) = s·I − M`.
    pub fn effective_m(&self) -> CMatrix<T> {
        CMatrix::from_fn(self.n, self.n, |i, j| {
            let mut v = imag(self.get(i, j));
            if i == j {
                v = v - real(self.q_diag(i));
            }
            v
        })
    }

    /// `M` with the input loading sign flipped (`+1/qe1` at (1,1)). Its
    /// characteristic polynomial is `det A − (2/qe1)·cof11(A)`.
    pub fn reflection_m(&self) -> CMatrix<T> {
        let mut mf = self.effective_m();
        mf[(0, 0)] = mf[(0, 0)] + real(T::of(2.0) / self.qe1);
        mf
    }

    /// Mirror image (resonator `i` ↔ `n−1−i`, `qe1` ↔ `qen`).
    pub fn reversed(&self) -> Self {
        let n = self.n;
        let mut out = Self {
            n,
            m: vec![T::zero(); n * n],
            qe1: self.qen,
            qen: self.qe1,
        };
        for i in 0..n {
            for j in 0..n {
                out.m[i * n + j] = self.get(n - 1 - i, n - 1 - j);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.m.iter().all(|v| v.is_zero())
    }
}

fn check_qe<T: Scalar>(qe1: T, qen: T) -> Result<()> {
    if !(qe1 > T::zero() && qe1.is_finite() && qen > T::zero() && qen.is_finite()) {
        return Err(invalid(format!(
            "external quality factors must be positive and finite, got qe1 = {qe1}, qen = {qen}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cplx;
    use num_traits::Zero;

    fn pair() -> CouplingMatrix<f64> {
        let mut cm = CouplingMatrix::new(2, 1.0, 1.0).unwrap();
        cm.set(0, 1, 1.0);
        cm
    }

    #[test]
    fn two_resonator_system_matrix() {
        let a = pair().assemble_a(C::zero());
        assert_eq!(a[(0, 0)], cplx(1.0, 0.0));
        assert_eq!(a[(0, 1)], cplx(0.0, -1.0));
        assert_eq!(a[(1, 0)], cplx(0.0, -1.0));
        assert_eq!(a[(1, 1)], cplx(1.0, 0.0));
    }

    #[test]
    fn zero_coupling_effective_m() {
        let cm = CouplingMatrix::new(2, 1.0f64, 1.0).unwrap();
        let m = cm.effective_m();
        assert_eq!(m[(0, 0)], cplx(-1.0, 0.0));
        assert_eq!(m[(1, 1)], cplx(-1.0, 0.0));
        assert_eq!(m[(0, 1)], C::zero());
    }

    #[test]
    fn set_is_symmetric_and_from_rows_mirrors_upper_triangle() {
        let cm = CouplingMatrix::from_rows(
            &[vec![0.1, 0.9, 0.0], vec![123.0, 0.0, 0.7], vec![0.0, -5.0, 0.0]],
            1.0f64,
            1.2,
        )
        .unwrap();
        assert_eq!(cm.get(1, 0), 0.9);
        assert_eq!(cm.get(2, 1), 0.7);
        assert!(cm.is_ladder());
    }

    #[test]
    fn rejects_bad_loading() {
        assert!(CouplingMatrix::new(3, 0.0f64, 1.0).is_err());
        assert!(CouplingMatrix::new(3, 1.0f64, -1.0).is_err());
        assert!(CouplingMatrix::new(0, 1.0f64, 1.0).is_err());
        assert!(CouplingMatrix::from_rows(&[vec![0.0, 1.0]], 1.0f64, 1.0).is_err());
    }

    #[test]
    fn from_couplings_rejects_bad_fbw() {
        let t = CouplingTargets {
            q_ea: 10.0f64,
            q_eb: 10.0,
            k: vec![0.05],
        };
        assert!(CouplingMatrix::from_couplings(&t, 0.0).is_err());
        assert!(CouplingMatrix::from_couplings(&t, 1.0).is_err());
    }

    #[test]
    fn single_resonator_collects_both_loads() {
        let cm = CouplingMatrix::new(1, 2.0f64, 4.0).unwrap();
        let a = cm.assemble_a(C::zero());
        assert_eq!(a[(0, 0)], cplx(0.75, 0.0));
    }
}
