//! Eigenvalues of a general complex matrix: Householder reduction to upper
//! Hessenberg form followed by single-shift QR iteration with deflation.

use num_traits::{One, Zero};

use super::CMatrix;
use crate::error::{Error, Result};
use crate::scalar::{real, Scalar, C};

/// Unitarily similar upper Hessenberg form of a square matrix.
pub fn hessenberg<T: Scalar>(a: &CMatrix<T>) -> CMatrix<T> {
    assert!(a.is_square());
    let n = a.rows();
    let mut h = a.clone();
    let two = T::of(2.0);
    for k in 0..n.saturating_sub(2) {
        let xnorm = (k + 1..n).map(|i| h[(i, k)].norm_sqr()).sum::<T>().sqrt();
        if xnorm == T::zero() {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0.norm() == T::zero() {
            C::one()
        } else {
            x0 / real(x0.norm())
        };
        let mut v: Vec<C<T>> = (k + 1..n).map(|i| h[(i, k)]).collect();
        v[0] = v[0] + phase * real(xnorm);
        let vv = v.iter().map(|z| z.norm_sqr()).sum::<T>();
        if vv == T::zero() {
            continue;
        }
        let f = real(two / vv);
        // left: H <- (I - 2vv^H/vv) H on rows k+1..n
        for j in 0..n {
            let w = v
                .iter()
                .enumerate()
                .fold(C::zero(), |acc, (t, vi)| acc + vi.conj() * h[(k + 1 + t, j)]);
            for (t, vi) in v.iter().enumerate() {
                h[(k + 1 + t, j)] = h[(k + 1 + t, j)] - f * *vi * w;
            }
        }
        // right: H <- H (I - 2vv^H/vv) on cols k+1..n
        for i in 0..n {
            let w = v
                .iter()
                .enumerate()
                .fold(C::zero(), |acc, (t, vj)| acc + h[(i, k + 1 + t)] * *vj);
            for (t, vj) in v.iter().enumerate() {
                h[(i, k + 1 + t)] = h[(i, k + 1 + t)] - f * w * vj.conj();
            }
        }
        for i in k + 2..n {
            h[(i, k)] = C::zero();
        }
    }
    h
}

/// Eigenvalues of a square complex matrix, in the order they deflate.
pub fn eigenvalues<T: Scalar>(a: &CMatrix<T>) -> Result<Vec<C<T>>> {
    assert!(a.is_square(), "eigenvalues of a non-square matrix");
    let n = a.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    if !a.is_finite() {
        return Err(Error::NumericalFailure(
            "eigenvalue solver received non-finite entries".into(),
        ));
    }
    let mut h = hessenberg(a);
    let eps = T::epsilon();
    let scale = h.max_abs();
    let tiny = T::min_positive_value() / eps;
    let max_iter = 60 * n;

    let mut out = Vec::with_capacity(n);
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    loop {
        if hi == 0 {
            out.push(h[(0, 0)]);
            break;
        }
        // look for a negligible subdiagonal entry
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let mut diag = h[(lo, lo)].norm() + h[(lo - 1, lo - 1)].norm();
            if diag == T::zero() {
                diag = scale;
            }
            if sub <= eps * diag || sub <= tiny {
                h[(lo, lo - 1)] = C::zero();
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            out.push(h[(hi, hi)]);
            hi -= 1;
            iter = 0;
            continue;
        }

        iter += 1;
        total += 1;
        if total > max_iter {
            return Err(Error::NumericalFailure(format!(
                "QR iteration did not converge after {total} steps (matrix scale {:e})",
                scale.to_f64_lossy()
            )));
        }

        let shift = if iter.is_multiple_of(11) {
            // exceptional shift to break cycles
            h[(hi, hi)] + real(h[(hi, hi - 1)].norm() * T::of(0.75))
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };
        qr_step(&mut h, lo, hi, shift);
    }
    Ok(out)
}

/// Eigenvalue of the trailing 2×2 block closer to its (2,2) entry.
fn wilkinson_shift<T: Scalar>(a: C<T>, b: C<T>, c: C<T>, d: C<T>) -> C<T> {
    let half = real(T::of(0.5));
    let tr = (a + d) * half;
    let disc = ((a - d) * half * ((a - d) * half) + b * c).sqrt();
    let l1 = tr + disc;
    let l2 = tr - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// One explicitly shifted QR step on the active window `lo..=hi`.
fn qr_step<T: Scalar>(h: &mut CMatrix<T>, lo: usize, hi: usize, shift: C<T>) {
    for i in lo..=hi {
        h[(i, i)] = h[(i, i)] - shift;
    }
    let mut rots: Vec<(T, C<T>)> = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
        for j in k..=hi {
            let x = h[(k, j)];
            let y = h[(k + 1, j)];
            h[(k, j)] = real(c) * x + s * y;
            h[(k + 1, j)] = real(c) * y - s.conj() * x;
        }
        h[(k + 1, k)] = C::zero();
        rots.push((c, s));
    }
    for (t, &(c, s)) in rots.iter().enumerate() {
        let k = lo + t;
        for i in lo..=(k + 1).min(hi) {
            let x = h[(i, k)];
            let y = h[(i, k + 1)];
            h[(i, k)] = real(c) * x + s.conj() * y;
            h[(i, k + 1)] = real(c) * y - s * x;
        }
    }
    for i in lo..=hi {
        h[(i, i)] = h[(i, i)] + shift;
    }
}

/// Rotation `[[c, s], [-s̄, c]]` with real `c` that maps `(a, b)` to `(r, 0)`.
fn givens<T: Scalar>(a: C<T>, b: C<T>) -> (T, C<T>) {
    let na = a.norm();
    let nb = b.norm();
    if nb == T::zero() {
        return (T::one(), C::zero());
    }
    if na == T::zero() {
        return (T::zero(), (b.conj() / real(nb)));
    }
    let r = na.hypot(nb);
    let c = na / r;
    let s = (a / real(na)) * b.conj() / real(r);
    (c, s)
}
