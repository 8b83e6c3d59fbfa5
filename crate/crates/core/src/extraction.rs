//! Coupling coefficients and external quality factors recovered from sampled
//! magnitude responses.

use crate::coupling::CouplingMatrix;
use crate::error::{invalid, Error, Result};
use crate::response::{to_db, FrequencyResponse};
use crate::scalar::Scalar;

/// Minimum peak prominence, as a fraction of the largest |S21| sample.
pub const PEAK_PROMINENCE: f64 = 0.01;

/// Two split resonance frequencies of a coupled pair, `f_p1 < f_p2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakPair<T> {
    f_p1: T,
    f_p2: T,
}

impl<T: Scalar> PeakPair<T> {
    /// Orders the two frequencies; both must be positive.
    pub fn new(a: T, b: T) -> Result<Self> {
        if !(a > T::zero() && b > T::zero() && a.is_finite() && b.is_finite()) {
            return Err(invalid(format!("peak frequencies must be positive, got {a} and {b}")));
        }
        Ok(Self {
            f_p1: a.min(b),
            f_p2: a.max(b),
        })
    }

    pub fn f_p1(&self) -> T {
        self.f_p1
    }

    pub fn f_p2(&self) -> T {
        self.f_p2
    }
}

/// Coupling coefficient `|f_p2² − f_p1²| / (f_p2² + f_p1²)`.
///
/// Magnitude only: electric and magnetic coupling are indistinguishable in
/// magnitude data.
pub fn extract_k<T: Scalar>(peaks: &PeakPair<T>) -> T {
    let a = peaks.f_p1 * peaks.f_p1;
    let b = peaks.f_p2 * peaks.f_p2;
    (b - a).abs() / (b + a)
}

#[derive(Debug, Clone, Copy)]
struct Peak<T> {
    freq: T,
    level_db: T,
}

fn detect_peaks<T: Scalar>(resp: &FrequencyResponse<T>) -> Result<Vec<Peak<T>>> {
    if resp.len() < 3 {
        return Err(invalid(format!("peak search needs at least 3 samples, got {}", resp.len())));
    }
    let mag: Vec<T> = resp.s21.iter().map(|z| z.norm()).collect();
    let db = resp.s21_db();
    let top = mag.iter().copied().fold(T::zero(), T::max);
    let min_prominence = T::of(PEAK_PROMINENCE) * top;
    let last = mag.len() - 1;

    let mut peaks = Vec::new();
    for i in 1..last {
        if !(mag[i] > mag[i - 1] && mag[i] > mag[i + 1]) {
            continue;
        }
        // lowest point on each side before reaching higher ground; an equal
        // peak to the left claims the shared base
        let mut left = mag[i];
        for &v in mag[..i].iter().rev() {
            if v >= mag[i] {
                break;
            }
            left = left.min(v);
        }
        let mut right = mag[i];
        for &v in &mag[i + 1..] {
            if v > mag[i] {
                break;
            }
            right = right.min(v);
        }
        if mag[i] - left.max(right) < min_prominence {
            continue;
        }
        let (freq, level_db) = parabolic_vertex(
            (resp.grid[i - 1], db[i - 1]),
            (resp.grid[i], db[i]),
            (resp.grid[i + 1], db[i + 1]),
        );
        peaks.push(Peak { freq, level_db });
    }
    Ok(peaks)
}

/// Vertex of the parabola through three samples; falls back to the middle
/// sample when the points are collinear.
fn parabolic_vertex<T: Scalar>(p0: (T, T), p1: (T, T), p2: (T, T)) -> (T, T) {
    let (x0, y0) = p0;
    let (x1, y1) = p1;
    let (x2, y2) = p2;
    let d0 = x1 - x0;
    let d2 = x1 - x2;
    let num = d0 * d0 * (y1 - y2) - d2 * d2 * (y1 - y0);
    let den = d0 * (y1 - y2) - d2 * (y1 - y0);
    if den == T::zero() || !den.is_finite() {
        return (x1, y1);
    }
    let xv = x1 - T::of(0.5) * num / den;
    if !(xv > x0 && xv < x2) {
        return (x1, y1);
    }
    // Lagrange form evaluated at the vertex
    let l0 = (xv - x1) * (xv - x2) / ((x0 - x1) * (x0 - x2));
    let l1 = (xv - x0) * (xv - x2) / ((x1 - x0) * (x1 - x2));
    let l2 = (xv - x0) * (xv - x1) / ((x2 - x0) * (x2 - x1));
    (xv, y0 * l0 + y1 * l1 + y2 * l2)
}

/// Frequencies of the prominent |S21| maxima, refined by parabolic
/// interpolation of the dB magnitude, in ascending order.
pub fn find_peaks<T: Scalar>(resp: &FrequencyResponse<T>) -> Result<Vec<T>> {
    Ok(detect_peaks(resp)?.into_iter().map(|p| p.freq).collect())
}

/// The two strongest |S21| peaks of a coupled-pair response.
pub fn peak_pair<T: Scalar>(resp: &FrequencyResponse<T>) -> Result<PeakPair<T>> {
    let mut peaks = detect_peaks(resp)?;
    if peaks.len() < 2 {
        return Err(Error::InsufficientPeaks {
            found: peaks.len(),
            required: 2,
        });
    }
    peaks.sort_by(|a, b| {
        b.level_db
            .partial_cmp(&a.level_db)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    PeakPair::new(peaks[0].freq, peaks[1].freq)
}

/// External quality factor `f0 / Δf` of a singly loaded resonator, where
/// `Δf` is the full width of |S21| at half power below its peak.
pub fn extract_qe<T: Scalar>(resp: &FrequencyResponse<T>, f0: T) -> Result<T> {
    if !(f0 > T::zero()) {
        return Err(invalid(format!("resonant frequency must be positive, got {f0}")));
    }
    if resp.len() < 3 {
        return Err(invalid("Q extraction needs at least 3 samples"));
    }
    let db = resp.s21_db();
    let (ipk, _) = db
        .iter()
        .enumerate()
        .fold((0, T::neg_infinity()), |b, (i, &v)| if v > b.1 { (i, v) } else { b });
    let peak_db = if ipk > 0 && ipk + 1 < db.len() {
        parabolic_vertex(
            (resp.grid[ipk - 1], db[ipk - 1]),
            (resp.grid[ipk], db[ipk]),
            (resp.grid[ipk + 1], db[ipk + 1]),
        )
        .1
    } else {
        db[ipk]
    };
    let half_power_db = peak_db - T::of(10.0) * T::of(2.0).log10();
    let power = |i: usize| resp.s21[i].norm_sqr();
    let target = T::of(10.0).powf(half_power_db / T::of(10.0));

    let crossing = |inside: usize, outside: usize| {
        let (pi, po) = (power(inside), power(outside));
        let (fi, fo) = (resp.grid[inside], resp.grid[outside]);
        fi + (fo - fi) * (pi - target) / (pi - po)
    };
    let lo = (0..ipk)
        .rev()
        .find(|&i| db[i] < half_power_db)
        .map(|i| crossing(i + 1, i))
        .ok_or_else(|| Error::InsufficientSpan("lower half-power point lies below the grid".into()))?;
    let hi = (ipk + 1..db.len())
        .find(|&i| db[i] < half_power_db)
        .map(|i| crossing(i - 1, i))
        .ok_or_else(|| Error::InsufficientSpan("upper half-power point lies above the grid".into()))?;
    Ok(f0 / (hi - lo))
}

/// Largest |S21| sample in dB.
pub fn peak_transmission_db<T: Scalar>(resp: &FrequencyResponse<T>) -> T {
    resp.s21
        .iter()
        .map(|z| to_db(z.norm()))
        .fold(T::neg_infinity(), T::max)
}

/// Normalized coupling `m` whose split resonances, under the bandpass mapping
/// with fractional bandwidth `fbw`, reproduce coupling coefficient `k`
/// exactly through [`extract_k`].
pub fn normalized_coupling_for_k<T: Scalar>(k: T, fbw: T) -> Result<T> {
    if !(k >= T::zero() && k < T::one()) {
        return Err(invalid(format!("coupling coefficient must lie in [0, 1), got {k}")));
    }
    // f_p2/f_p1 = r with r² = (1+k)/(1−k); peaks sit at x − 1/x = ±c, x = f/f0
    let r = ((T::one() + k) / (T::one() - k)).sqrt();
    let c = r.sqrt() - T::one() / r.sqrt();
    Ok(c / fbw)
}

/// Two synchronously tuned resonators coupled by `m12`, with port loading
/// weak enough to resolve both split peaks and asymmetric enough to keep the
/// peak |S21| below −20 dB.
pub fn weakly_coupled_pair<T: Scalar>(m12: T) -> Result<CouplingMatrix<T>> {
    if !(m12 > T::zero()) {
        return Err(invalid("pair coupling must be positive"));
    }
    let qe1 = T::of(50.0) / m12;
    let mut cm = CouplingMatrix::new(2, qe1, T::of(400.0) * qe1)?;
    cm.set(0, 1, m12);
    Ok(cm)
}

/// One resonator driven with normalized external Q `qe` at the input and a
/// negligible output load, so its loaded Q equals the external Q.
pub fn singly_loaded_resonator<T: Scalar>(qe: T) -> Result<CouplingMatrix<T>> {
    CouplingMatrix::new(1, qe, T::of(1e5) * qe)
}
