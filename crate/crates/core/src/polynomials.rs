//! Characteristic polynomials `E`, `F`, `P` and ripple constant `ε` of a
//! coupling-matrix filter, with `S11 = F/E` and `S21 = P/(ε·E)`.
//!
//! All roots are found by eigenvalue methods:
//! - `E`: eigenvalues of `M = j·m − q` (`A(s) = s·I − M`),
//! - `F = det A − (2/qe1)·cof11(A)`: eigenvalues of `M` with the sign of the
//!   input loading flipped,
//! - `P ∝ cof1n(A) = ±det(s·I' − M')`: finite generalized eigenvalues of the
//!   pencil `(M', I')`, where `M'`, `I'` drop the first row and last column.

use num_traits::{One, Zero};

use crate::coupling::CouplingMatrix;
use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, CMatrix};
use crate::scalar::{cplx, imag, real, Scalar, C};

/// Monic polynomial, coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialCoefficients<T: Scalar> {
    coeffs: Vec<C<T>>,
}

impl<T: Scalar> PolynomialCoefficients<T> {
    pub fn coeffs(&self) -> &[C<T>] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Horner evaluation.
    pub fn eval(&self, s: C<T>) -> C<T> {
        self.coeffs
            .iter()
            .rev()
            .fold(C::zero(), |acc, &c| acc * s + c)
    }
}

/// Expands `∏(s − λᵢ)` through the elementary symmetric sums of the roots:
/// the coefficient of `s^(N−k)` is `(−1)^k·e_k(λ)`, ending with `(−1)^N·∏λᵢ`.
pub fn char_poly_from_eigenvalues<T: Scalar>(eigenvalues: &[C<T>]) -> PolynomialCoefficients<T> {
    let n = eigenvalues.len();
    // e[k] = k-th elementary symmetric polynomial of the roots seen so far
    let mut e = vec![C::<T>::zero(); n + 1];
    e[0] = C::one();
    for (seen, &lambda) in eigenvalues.iter().enumerate() {
        for k in (1..=seen + 1).rev() {
            e[k] = e[k] + lambda * e[k - 1];
        }
    }
    let mut coeffs = vec![C::zero(); n + 1];
    for (k, ek) in e.into_iter().enumerate() {
        coeffs[n - k] = if k % 2 == 0 { ek } else { -ek };
    }
    coeffs[n] = C::one();
    PolynomialCoefficients { coeffs }
}

/// Roots of the characteristic polynomials plus the ripple constant.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacteristicPolynomials<T: Scalar> {
    /// Poles shared by S11 and S21.
    pub e_roots: Vec<C<T>>,
    /// Reflection zeros.
    pub f_roots: Vec<C<T>>,
    /// Finite transmission zeros.
    pub p_roots: Vec<C<T>>,
    pub epsilon: T,
}

impl<T: Scalar> CharacteristicPolynomials<T> {
    pub fn e_poly(&self) -> PolynomialCoefficients<T> {
        char_poly_from_eigenvalues(&self.e_roots)
    }

    pub fn f_poly(&self) -> PolynomialCoefficients<T> {
        char_poly_from_eigenvalues(&self.f_roots)
    }

    pub fn p_poly(&self) -> PolynomialCoefficients<T> {
        char_poly_from_eigenvalues(&self.p_roots)
    }
}

fn root_product<T: Scalar>(roots: &[C<T>], s: C<T>) -> C<T> {
    roots.iter().fold(C::one(), |acc, &r| acc * (s - r))
}

/// Extracts poles, reflection zeros, transmission zeros and `ε` from a
/// coupling matrix.
pub fn extract_polynomials<T: Scalar>(cm: &CouplingMatrix<T>) -> Result<CharacteristicPolynomials<T>> {
    let m = cm.effective_m();
    let e_roots = eigenvalues(&m).map_err(|e| with_condition(e, &m))?;
    let mf = cm.reflection_m();
    let f_roots = eigenvalues(&mf).map_err(|e| with_condition(e, &mf))?;
    let p_roots = transmission_zeros(&m)?;
    let epsilon = ripple_constant(cm, &e_roots, &f_roots, &p_roots)?;
    Ok(CharacteristicPolynomials {
        e_roots,
        f_roots,
        p_roots,
        epsilon,
    })
}

fn with_condition<T: Scalar>(err: Error, m: &CMatrix<T>) -> Error {
    match err {
        Error::NumericalFailure(msg) => {
            let cond = m
                .lu()
                .inverse()
                .map(|inv| (m.norm1() * inv.norm1()).to_f64_lossy())
                .unwrap_or(f64::INFINITY);
            Error::NumericalFailure(format!("{msg}; matrix 1-norm condition {cond:e}"))
        }
        other => other,
    }
}

/// Finite generalized eigenvalues of `det(s·I' − M') = 0`.
///
/// `I'` is singular, so most of the pencil's eigenvalues sit at infinity and
/// form Jordan chains that no eigen-solver separates reliably by magnitude.
/// The number of finite ones is therefore taken from the degree of
/// `det(s·I' − M')`, recovered by sampling it on a circle, and the pencil is
/// solved through the shift-and-invert reduction
/// `(M' − σ·I')⁻¹·I'·x = μ·x`, `s = σ + 1/μ`, keeping the largest `|μ|`.
fn transmission_zeros<T: Scalar>(m: &CMatrix<T>) -> Result<Vec<C<T>>> {
    let n = m.rows();
    if n < 3 {
        // M' is 1×1 (or empty) and I' is zero: a constant polynomial
        return Ok(Vec::new());
    }
    let mp = m.minor(0, n - 1);
    let ip = CMatrix::<T>::identity(n).minor(0, n - 1);
    let k = n - 1; // samples for a polynomial of degree <= n-2
    let radius = T::one().max(mp.max_abs());
    let pencil = |s: C<T>| ip.scale(s).sub(&mp);

    let two_pi = T::of(2.0) * T::PI();
    let nodes: Vec<C<T>> = (0..k)
        .map(|i| {
            let th = two_pi * T::of_usize(i) / T::of_usize(k);
            cplx(radius * th.cos(), radius * th.sin())
        })
        .collect();
    let values: Vec<C<T>> = nodes.iter().map(|&s| pencil(s).det()).collect();

    // coefficient magnitudes on the sampling circle: |c_j|·radius^j
    let kk = real(T::of_usize(k));
    let circle: Vec<T> = (0..k)
        .map(|j| {
            let sum = (0..k).fold(C::<T>::zero(), |acc, i| {
                let th = -two_pi * T::of_usize(i * j % k) / T::of_usize(k);
                acc + values[i] * cplx(th.cos(), th.sin())
            });
            (sum / kk).norm()
        })
        .collect();
    let peak = circle.iter().copied().fold(T::zero(), T::max);
    if peak == T::zero() {
        return Err(Error::NumericalFailure(
            "transmission polynomial vanishes identically".into(),
        ));
    }
    let tol = T::epsilon().sqrt() * peak;
    let degree = circle.iter().rposition(|&c| c > tol).unwrap_or(0);
    if degree == 0 {
        return Ok(Vec::new());
    }

    let (shift_idx, _) = values
        .iter()
        .enumerate()
        .map(|(i, v)| (i, v.norm()))
        .fold((0, -T::one()), |b, c| if c.1 > b.1 { c } else { b });
    let sigma = nodes[shift_idx];
    let inv = (mp.sub(&ip.scale(sigma)))
        .lu()
        .inverse()
        .ok_or_else(|| Error::NumericalFailure("shifted pencil is singular".into()))?;
    let mut mu = eigenvalues(&inv.matmul(&ip))?;
    mu.sort_by(|a, b| b.norm().partial_cmp(&a.norm()).unwrap_or(std::cmp::Ordering::Equal));
    Ok(mu
        .into_iter()
        .take(degree)
        .map(|u| sigma + C::<T>::one() / u)
        .collect())
}

/// `ε` normalizes `P/(ε·E)` to the transmission level at the band edge
/// `s = j`, where energy conservation gives `|S21|² = 1 − |F/E|²`.
fn ripple_constant<T: Scalar>(
    cm: &CouplingMatrix<T>,
    e_roots: &[C<T>],
    f_roots: &[C<T>],
    p_roots: &[C<T>],
) -> Result<T> {
    let edge = imag(T::one());
    let e = root_product(e_roots, edge).norm();
    let f = root_product(f_roots, edge).norm();
    let p = root_product(p_roots, edge).norm();
    let gap = e * e - f * f;
    if gap > T::of(1e-6) * e * e && p > T::epsilon() * e {
        return Ok(p / gap.sqrt());
    }
    // band edge is (nearly) totally reflecting or a transmission zero:
    // use the cofactor identity P/ε = 2·cof1n(A)/√(qe1·qen) off the axis
    let s0 = cplx(T::one(), T::of(0.5));
    let cof = cm.assemble_a(s0).cofactor(0, cm.order() - 1).norm();
    if cof == T::zero() {
        return Err(Error::NumericalFailure(
            "cannot normalize S21: input and output are uncoupled".into(),
        ));
    }
    Ok(root_product(p_roots, s0).norm() * (cm.qe1() * cm.qen()).sqrt() / (T::of(2.0) * cof))
}

/// `(|S11|, |S21|)` at `s` from the root products of `E`, `F` and `P`.
pub fn response_from_polynomials<T: Scalar>(
    cp: &CharacteristicPolynomials<T>,
    s: C<T>,
) -> Result<(T, T)> {
    let tol = T::epsilon() * (T::one() + s.norm());
    if cp.e_roots.iter().any(|&r| (s - r).norm() <= tol) {
        return Err(Error::SingularFrequency {
            re: s.re.to_f64_lossy(),
            im: s.im.to_f64_lossy(),
            detail: "evaluation at a pole of E".into(),
        });
    }
    let e = root_product(&cp.e_roots, s).norm();
    let f = root_product(&cp.f_roots, s).norm();
    let p = root_product(&cp.p_roots, s).norm();
    Ok((f / e, p / (cp.epsilon * e)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vieta_small_cases() {
        let p = char_poly_from_eigenvalues(&[real(1.0f64), real(2.0)]);
        assert_eq!(p.coeffs(), &[real(2.0), real(-3.0), real(1.0)]);
        let l = cplx(0.3f64, -1.2);
        let p = char_poly_from_eigenvalues(&[l]);
        assert_eq!(p.coeffs(), &[-l, C::one()]);
        assert_eq!(char_poly_from_eigenvalues::<f64>(&[]).coeffs(), &[C::one()]);
    }

    #[test]
    fn evaluation_matches_root_product() {
        let roots = [cplx(0.5f64, 1.0), cplx(-2.0, 0.25), cplx(0.0, -0.7)];
        let p = char_poly_from_eigenvalues(&roots);
        let s = cplx(0.3, 0.9);
        assert!((p.eval(s) - root_product(&roots, s)).norm() < 1e-14);
    }

    #[test]
    fn pole_evaluation_is_singular() {
        let cp = CharacteristicPolynomials {
            e_roots: vec![cplx(-1.0f64, 0.0)],
            f_roots: vec![imag(0.0)],
            p_roots: vec![],
            epsilon: 1.0,
        };
        assert!(response_from_polynomials(&cp, cplx(-1.0, 0.0)).is_err());
        assert!(response_from_polynomials(&cp, imag(1.0)).is_ok());
    }
}
