//! Two-port scattering parameters of a coupling-matrix model.
//!
//! S11 = 1 − (2/qe1)·[A⁻¹]₁₁ and S21 = (2/√(qe1·qen))·[A⁻¹]ₙ₁. Two independent
//! routes are provided: a dense LU inverse, and Cramer's rule through the
//! cofactors of `A`. The sign of S11 is fixed so that uncoupled resonators
//! reflect with S11 = −1.

use num_traits::One;

use crate::coupling::CouplingMatrix;
use crate::error::{invalid, Error, Result};
use crate::linalg::{inverse_with_condition, singular_threshold};
use crate::prototype::FilterSpec;
use crate::scalar::{imag, real, Scalar, C};

/// Minimum depth of an |S11| dip, in dB, for it to count as a reflection zero.
pub const REFLECTION_ZERO_FLOOR_DB: f64 = -40.0;

/// Full 2×2 scattering matrix at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SParams<T: Scalar> {
    pub s11: C<T>,
    pub s21: C<T>,
    pub s12: C<T>,
    pub s22: C<T>,
}

fn singular<T: Scalar>(s: C<T>, detail: String) -> Error {
    Error::SingularFrequency {
        re: s.re.to_f64_lossy(),
        im: s.im.to_f64_lossy(),
        detail,
    }
}

/// All four S-parameters via the LU inverse of `A(s)`.
pub fn s_matrix<T: Scalar>(cm: &CouplingMatrix<T>, s: C<T>) -> Result<SParams<T>> {
    let n = cm.order();
    let a = cm.assemble_a(s);
    let (inv, cond) = inverse_with_condition(&a).map_err(|e| singular(s, e.to_string()))?;
    if !(cond < singular_threshold()) {
        return Err(singular(s, format!("condition number {:e}", cond.to_f64_lossy())));
    }
    let two = T::of(2.0);
    let t = real(two / (cm.qe1() * cm.qen()).sqrt());
    Ok(SParams {
        s11: C::<T>::one() - real(two / cm.qe1()) * inv[(0, 0)],
        s21: t * inv[(n - 1, 0)],
        s12: t * inv[(0, n - 1)],
        s22: C::<T>::one() - real(two / cm.qen()) * inv[(n - 1, n - 1)],
    })
}

/// `(S11, S21)` at complex frequency `s` via the matrix inverse.
pub fn s_parameters<T: Scalar>(cm: &CouplingMatrix<T>, s: C<T>) -> Result<(C<T>, C<T>)> {
    s_matrix(cm, s).map(|p| (p.s11, p.s21))
}

/// `(S11, S21)` via `A⁻¹ = adj(A)/Δ`, using the cofactors `cof11` and `cof1n`.
pub fn s_parameters_cramer<T: Scalar>(cm: &CouplingMatrix<T>, s: C<T>) -> Result<(C<T>, C<T>)> {
    let n = cm.order();
    let a = cm.assemble_a(s);
    let delta = a.det();
    // Hadamard bound: |det A| <= prod of row 2-norms
    let bound = (0..n)
        .map(|i| (0..n).map(|j| a[(i, j)].norm_sqr()).sum::<T>().sqrt())
        .fold(T::one(), |acc, r| acc * r);
    if !(delta.norm() > T::epsilon() * T::of(1e2) * bound) {
        return Err(singular(
            s,
            format!("|det A| = {:e}", delta.norm().to_f64_lossy()),
        ));
    }
    let cof11 = a.cofactor(0, 0);
    let cof1n = a.cofactor(0, n - 1);
    let two = T::of(2.0);
    let s11 = C::<T>::one() - real(two / cm.qe1()) * cof11 / delta;
    let s21 = real(two / (cm.qe1() * cm.qen()).sqrt()) * cof1n / delta;
    Ok((s11, s21))
}

/// Narrowband bandpass-to-prototype mapping `Ω = (f/f0 − f0/f) / FBW`.
#[inline]
pub fn omega<T: Scalar>(f: T, f0: T, fbw: T) -> T {
    (f / f0 - f0 / f) / fbw
}

/// Frequencies mapping to Ω = −1 and Ω = +1.
pub fn band_edges<T: Scalar>(f0: T, fbw: T) -> (T, T) {
    let half = fbw / T::of(2.0);
    let root = (T::one() + half * half).sqrt();
    (f0 * (root - half), f0 * (root + half))
}

/// What the grid of a [`FrequencyResponse`] is measured in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridDomain {
    /// Physical frequency, Hz.
    Hertz,
    /// Normalized prototype frequency Ω.
    Normalized,
}

/// Sampled two-port response.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyResponse<T: Scalar> {
    pub grid: Vec<T>,
    pub domain: GridDomain,
    pub s11: Vec<C<T>>,
    pub s21: Vec<C<T>>,
    /// Output reflection, when known.
    pub s22: Option<Vec<C<T>>>,
    pub spec: Option<FilterSpec<T>>,
}

impl<T: Scalar> FrequencyResponse<T> {
    pub fn new(grid: Vec<T>, domain: GridDomain, s11: Vec<C<T>>, s21: Vec<C<T>>) -> Result<Self> {
        if grid.len() != s11.len() || grid.len() != s21.len() {
            return Err(invalid(format!(
                "response sequences differ in length: grid {}, s11 {}, s21 {}",
                grid.len(),
                s11.len(),
                s21.len()
            )));
        }
        if grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(invalid("frequency grid must be strictly increasing"));
        }
        Ok(Self {
            grid,
            domain,
            s11,
            s21,
            s22: None,
            spec: None,
        })
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn s11_db(&self) -> Vec<T> {
        self.s11.iter().map(|z| to_db(z.norm())).collect()
    }

    pub fn s21_db(&self) -> Vec<T> {
        self.s21.iter().map(|z| to_db(z.norm())).collect()
    }

    /// True if no |S11| or |S21| sample exceeds `1 + tol`.
    pub fn is_passive(&self, tol: T) -> bool {
        self.s11
            .iter()
            .chain(&self.s21)
            .all(|z| z.norm() <= T::one() + tol)
    }

    /// Largest |S11| in dB over the grid points inside `[lo, hi]`.
    pub fn max_s11_db_within(&self, lo: T, hi: T) -> Option<T> {
        self.grid
            .iter()
            .zip(&self.s11)
            .filter(|(f, _)| **f >= lo && **f <= hi)
            .map(|(_, z)| to_db(z.norm()))
            .reduce(T::max)
    }
}

#[inline]
pub(crate) fn to_db<T: Scalar>(mag: T) -> T {
    T::of(20.0) * mag.log10()
}

fn linear_grid<T: Scalar>(start: T, stop: T, points: usize) -> Vec<T> {
    let span = stop - start;
    let last = T::of_usize(points - 1);
    (0..points)
        .map(|i| {
            if i == points - 1 {
                stop
            } else {
                start + span * T::of_usize(i) / last
            }
        })
        .collect()
}

/// Sweeps the bandpass response over `points` equally spaced frequencies.
pub fn sweep<T: Scalar>(
    cm: &CouplingMatrix<T>,
    spec: &FilterSpec<T>,
    f_start: T,
    f_stop: T,
    points: usize,
) -> Result<FrequencyResponse<T>> {
    spec.validate()?;
    if points < 2 {
        return Err(invalid(format!("a sweep needs at least 2 points, got {points}")));
    }
    if !(f_start > T::zero() && f_start < f_stop && f_stop.is_finite()) {
        return Err(invalid(format!(
            "sweep range must satisfy 0 < f_start < f_stop, got {f_start} .. {f_stop}"
        )));
    }
    let fbw = spec.fbw();
    let grid = linear_grid(f_start, f_stop, points);
    let mut resp = evaluate(cm, &grid, GridDomain::Hertz, |f| omega(f, spec.f0, fbw))?;
    resp.spec = Some(*spec);
    Ok(resp)
}

/// Sweeps the prototype-domain response over `points` equally spaced Ω values.
pub fn sweep_normalized<T: Scalar>(
    cm: &CouplingMatrix<T>,
    omega_start: T,
    omega_stop: T,
    points: usize,
) -> Result<FrequencyResponse<T>> {
    if points < 2 || !(omega_start < omega_stop) {
        return Err(invalid("normalized sweep needs points >= 2 and start < stop"));
    }
    let grid = linear_grid(omega_start, omega_stop, points);
    evaluate(cm, &grid, GridDomain::Normalized, |w| w)
}

fn evaluate<T: Scalar>(
    cm: &CouplingMatrix<T>,
    grid: &[T],
    domain: GridDomain,
    to_omega: impl Fn(T) -> T,
) -> Result<FrequencyResponse<T>> {
    let mut s11 = Vec::with_capacity(grid.len());
    let mut s21 = Vec::with_capacity(grid.len());
    let mut s22 = Vec::with_capacity(grid.len());
    for &x in grid {
        let p = s_matrix(cm, imag(to_omega(x)))?;
        s11.push(p.s11);
        s21.push(p.s21);
        s22.push(p.s22);
    }
    let mut resp = FrequencyResponse::new(grid.to_vec(), domain, s11, s21)?;
    resp.s22 = Some(s22);
    Ok(resp)
}

/// Passband figures of merit read off a sampled response.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseMetrics<T> {
    pub f_center: T,
    pub bandwidth_at_level: T,
    pub max_inband_s11_db: T,
    pub reflection_zero_count: usize,
}

/// Locates the widest contiguous band where |S11| stays below `level_db` and
/// reports its center, width, worst-case reflection and reflection-zero count.
pub fn analyze_response<T: Scalar>(
    resp: &FrequencyResponse<T>,
    level_db: T,
) -> Result<ResponseMetrics<T>> {
    if resp.is_empty() {
        return Err(invalid("cannot analyze an empty response"));
    }
    if !(level_db < T::zero()) {
        return Err(invalid(format!("level must be negative dB, got {level_db}")));
    }
    let db = resp.s11_db();
    let below: Vec<bool> = db.iter().map(|&v| v < level_db).collect();

    // widest run of consecutive points below the level
    let mut best: Option<(usize, usize)> = None;
    let mut i = 0;
    while i < db.len() {
        if below[i] {
            let start = i;
            while i + 1 < db.len() && below[i + 1] {
                i += 1;
            }
            let width = resp.grid[i] - resp.grid[start];
            if best.is_none_or(|(s, e)| width > resp.grid[e] - resp.grid[s]) {
                best = Some((start, i));
            }
        }
        i += 1;
    }
    let (start, end) = best.ok_or(Error::NoPassband {
        level_db: level_db.to_f64_lossy(),
    })?;

    let crossing = |a: usize, b: usize| {
        // linear interpolation in dB between an outside and an inside sample
        let (fa, fb) = (resp.grid[a], resp.grid[b]);
        let (da, dbv) = (db[a], db[b]);
        if da == dbv {
            fb
        } else {
            fa + (fb - fa) * (level_db - da) / (dbv - da)
        }
    };
    let lo = if start > 0 {
        crossing(start - 1, start)
    } else {
        resp.grid[start]
    };
    let hi = if end + 1 < db.len() {
        crossing(end + 1, end)
    } else {
        resp.grid[end]
    };

    let floor = T::of(REFLECTION_ZERO_FLOOR_DB);
    let zeros = (start.max(1)..=end.min(db.len().saturating_sub(2)))
        .filter(|&i| db[i] < db[i - 1] && db[i] < db[i + 1] && db[i] <= floor)
        .count();
    let max_inband = db[start..=end].iter().copied().fold(T::neg_infinity(), T::max);

    Ok(ResponseMetrics {
        f_center: (lo + hi) / T::of(2.0),
        bandwidth_at_level: (hi - lo).max(T::zero()),
        max_inband_s11_db: max_inband,
        reflection_zero_count: zeros,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cplx;
    use num_traits::Zero;

    #[test]
    fn critically_coupled_pair_transmits_fully() {
        let mut cm = CouplingMatrix::new(2, 1.0f64, 1.0).unwrap();
        cm.set(0, 1, 1.0);
        let (s11, s21) = s_parameters_cramer(&cm, C::zero()).unwrap();
        assert!(s11.norm() < 1e-15);
        assert!((s21 - cplx(0.0, 1.0)).norm() < 1e-15);
        let (s11, s21) = s_parameters(&cm, C::zero()).unwrap();
        assert!(s11.norm() < 1e-15);
        assert!((s21 - cplx(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn uncoupled_resonators_reflect_totally() {
        let cm = CouplingMatrix::new(2, 1.0f64, 1.0).unwrap();
        for f in [s_parameters::<f64>, s_parameters_cramer::<f64>] {
            let (s11, s21) = f(&cm, C::zero()).unwrap();
            assert!((s11 - cplx(-1.0, 0.0)).norm() < 1e-15);
            assert_eq!(s21, C::zero());
        }
    }

    #[test]
    fn far_out_of_band_reflects() {
        let mut cm = CouplingMatrix::new(3, 1.0f64, 1.0).unwrap();
        cm.set(0, 1, 0.8);
        cm.set(1, 2, 0.8);
        let (s11, s21) = s_parameters(&cm, cplx(0.0, 1e6)).unwrap();
        assert!(s21.norm() < 1e-12);
        assert!((s11.norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn mapping_fixed_point_and_band_edges() {
        let (f0, fbw) = (10e9f64, 0.05);
        assert_eq!(omega(f0, f0, fbw), 0.0);
        let (lo, hi) = band_edges(f0, fbw);
        assert!((omega(lo, f0, fbw) + 1.0).abs() < 1e-12);
        assert!((omega(hi, f0, fbw) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sweep_rejects_bad_grids() {
        let cm = CouplingMatrix::new(2, 1.0f64, 1.0).unwrap();
        let spec = FilterSpec::new(2, 10e9, 0.5e9, 0.1).unwrap();
        assert!(sweep(&cm, &spec, 9e9, 11e9, 1).is_err());
        assert!(sweep(&cm, &spec, 11e9, 9e9, 11).is_err());
        assert!(sweep(&cm, &spec, 0.0, 9e9, 11).is_err());
    }

    #[test]
    fn response_rejects_unsorted_grid_and_ragged_data() {
        let z = vec![C::<f64>::zero(); 3];
        assert!(FrequencyResponse::new(vec![1.0, 1.0, 2.0], GridDomain::Hertz, z.clone(), z.clone())
            .is_err());
        assert!(FrequencyResponse::new(vec![1.0, 2.0], GridDomain::Hertz, z.clone(), z).is_err());
    }

    #[test]
    fn total_reflection_has_no_passband() {
        let one = vec![cplx(1.0f64, 0.0); 5];
        let zero = vec![C::zero(); 5];
        let r = FrequencyResponse::new(vec![1.0, 2.0, 3.0, 4.0, 5.0], GridDomain::Hertz, one, zero)
            .unwrap();
        assert!(matches!(
            analyze_response(&r, -20.0),
            Err(Error::NoPassband { .. })
        ));
        assert!(analyze_response(&r, 3.0).is_err());
    }
}
