//! Synthesis and analysis of coupled-resonator bandpass filters.
//!
//! A bandpass spec is turned into Chebyshev prototype values, coupling
//! coefficients and external quality factors, and a normalized coupling
//! matrix. The matrix yields S-parameter sweeps, characteristic polynomials
//! through eigenvalue methods, and can be refined by a derivative-free
//! optimizer. The inverse direction recovers coupling coefficients and
//! external Q from sampled responses.
//!
//! Numerics are generic over [`Scalar`] (`f32` or `f64`); the `*64` / `*32`
//! aliases below name the concrete types. File IO works in `f64`.

// `!(x > 0)` style checks are used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coupling;
pub mod error;
pub mod extraction;
pub mod io;
pub mod linalg;
pub mod optimizer;
pub mod polynomials;
pub mod prototype;
pub mod reference;
pub mod response;
pub mod scalar;
pub mod synthesis;
pub mod waveguide;

pub use coupling::CouplingMatrix;
pub use error::{Error, Result};
pub use extraction::PeakPair;
pub use optimizer::{CostConfig, OptimizationProblem, OptimizationResult};
pub use polynomials::{CharacteristicPolynomials, PolynomialCoefficients};
pub use prototype::{CouplingTargets, FilterSpec, LowpassPrototype};
pub use response::{FrequencyResponse, ResponseMetrics};
pub use scalar::Scalar;
pub use waveguide::WaveguideSpec;

pub type FilterSpec64 = FilterSpec<f64>;
pub type LowpassPrototype64 = LowpassPrototype<f64>;
pub type CouplingTargets64 = CouplingTargets<f64>;
pub type CouplingMatrix64 = CouplingMatrix<f64>;
pub type FrequencyResponse64 = FrequencyResponse<f64>;
pub type CharacteristicPolynomials64 = CharacteristicPolynomials<f64>;
pub type OptimizationProblem64 = OptimizationProblem<f64>;
pub type WaveguideSpec64 = WaveguideSpec<f64>;

pub type FilterSpec32 = FilterSpec<f32>;
pub type LowpassPrototype32 = LowpassPrototype<f32>;
pub type CouplingTargets32 = CouplingTargets<f32>;
pub type CouplingMatrix32 = CouplingMatrix<f32>;
pub type FrequencyResponse32 = FrequencyResponse<f32>;
pub type CharacteristicPolynomials32 = CharacteristicPolynomials<f32>;
pub type OptimizationProblem32 = OptimizationProblem<f32>;
pub type WaveguideSpec32 = WaveguideSpec<f32>;
