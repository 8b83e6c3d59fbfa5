//! Chebyshev low-pass prototypes and their conversion into the coupling
//! coefficients and external quality factors of a bandpass design.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::scalar::Scalar;

/// Bandpass design intent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterSpec<T> {
    /// Number of resonators.
    pub order: usize,
    /// Center frequency, Hz.
    pub f0: T,
    /// Absolute bandwidth, Hz.
    pub bandwidth: T,
    /// Passband ripple L_AR, dB.
    pub ripple_db: T,
}

impl<T: Scalar> FilterSpec<T> {
    /// Builds and validates a spec.
    pub fn new(order: usize, f0: T, bandwidth: T, ripple_db: T) -> Result<Self> {
        let spec = Self {
            order,
            f0,
            bandwidth,
            ripple_db,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Builds a spec from a fractional bandwidth instead of an absolute one.
    pub fn with_fbw(order: usize, f0: T, fbw: T, ripple_db: T) -> Result<Self> {
        Self::new(order, f0, fbw * f0, ripple_db)
    }

    pub fn validate(&self) -> Result<()> {
        if self.order < 2 {
            return Err(invalid(format!("order must be at least 2, got {}", self.order)));
        }
        if !(self.f0.is_finite() && self.f0 > T::zero()) {
            return Err(invalid(format!("f0 must be positive, got {}", self.f0)));
        }
        if !(self.bandwidth > T::zero() && self.bandwidth < self.f0) {
            return Err(invalid(format!(
                "bandwidth must lie in (0, f0), got {} with f0 = {}",
                self.bandwidth, self.f0
            )));
        }
        if !(self.ripple_db.is_finite() && self.ripple_db > T::zero()) {
            return Err(invalid(format!(
                "ripple_db must be positive, got {}",
                self.ripple_db
            )));
        }
        Ok(())
    }

    /// Fractional bandwidth `bandwidth / f0`.
    #[inline]
    pub fn fbw(&self) -> T {
        self.bandwidth / self.f0
    }

    /// Chebyshev ripple factor `sqrt(10^(L_AR/10) - 1)`.
    pub fn ripple_factor(&self) -> T {
        (T::of(10.0).powf(self.ripple_db / T::of(10.0)) - T::one()).sqrt()
    }
}

/// `β = ln(coth(L_AR / 17.37))`, the ripple parameter of the g-value
/// formulas. With the rounded constant, `sinh(β/2)` is only approximately
/// `1/ε`; everything built on the prototype uses this `β`.
pub(crate) fn ripple_beta<T: Scalar>(ripple_db: T) -> T {
    (T::one() / (ripple_db / T::of(17.37)).tanh()).ln()
}

/// Element values `g0..g(n+1)` of a low-pass prototype with Ω_c = 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowpassPrototype<T> {
    pub g: Vec<T>,
}

impl<T: Scalar> LowpassPrototype<T> {
    /// Number of reactive elements.
    pub fn order(&self) -> usize {
        self.g.len() - 2
    }
}

/// Chebyshev element values for `order` reactive elements and a passband
/// ripple of `ripple_db`.
pub fn chebyshev_g_values<T: Scalar>(order: usize, ripple_db: T) -> Result<LowpassPrototype<T>> {
    if order < 1 {
        return Err(invalid("prototype order must be at least 1"));
    }
    if !(ripple_db.is_finite() && ripple_db > T::zero()) {
        return Err(invalid(format!("ripple must be positive, got {ripple_db}")));
    }
    let n = T::of_usize(order);
    let pi = T::PI();
    let two = T::of(2.0);
    let beta = ripple_beta(ripple_db);
    let gamma = (beta / (two * n)).sinh();

    let a = |i: usize| ((two * T::of_usize(i) - T::one()) * pi / (two * n)).sin();
    let b = |i: usize| gamma * gamma + (T::of_usize(i) * pi / n).sin().powi(2);

    let mut g = Vec::with_capacity(order + 2);
    g.push(T::one());
    g.push(two * a(1) / gamma);
    for i in 2..=order {
        let prev = g[i - 1];
        g.push(T::of(4.0) * a(i - 1) * a(i) / (b(i - 1) * prev));
    }
    g.push(if order % 2 == 1 {
        T::one()
    } else {
        let c = T::one() / (beta / T::of(4.0)).tanh();
        c * c
    });
    Ok(LowpassPrototype { g })
}

/// External quality factors and inter-resonator coupling coefficients of a
/// bandpass design, in the bandpass (un-normalized) domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingTargets<T> {
    pub q_ea: T,
    pub q_eb: T,
    /// `k[i]` couples resonators `i+1` and `i+2`.
    pub k: Vec<T>,
}

/// Converts a bandpass spec into external Q values and coupling coefficients.
pub fn spec_to_couplings<T: Scalar>(spec: &FilterSpec<T>) -> Result<CouplingTargets<T>> {
    spec.validate()?;
    let proto = chebyshev_g_values(spec.order, spec.ripple_db)?;
    Ok(couplings_from_prototype(&proto, spec.fbw()))
}

pub(crate) fn couplings_from_prototype<T: Scalar>(
    proto: &LowpassPrototype<T>,
    fbw: T,
) -> CouplingTargets<T> {
    let g = &proto.g;
    let n = proto.order();
    let half = T::of(0.5);
    // The Chebyshev ladder is mirror symmetric; averaging each mirrored pair
    // removes the rounding that would otherwise break exact palindromes.
    let raw: Vec<T> = (1..n).map(|i| fbw / (g[i] * g[i + 1]).sqrt()).collect();
    let k = (0..raw.len())
        .map(|i| (raw[i] + raw[raw.len() - 1 - i]) * half)
        .collect();
    let q = (g[0] * g[1] / fbw + g[n] * g[n + 1] / fbw) * half;
    CouplingTargets { q_ea: q, q_eb: q, k }
}
