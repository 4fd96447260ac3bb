//! Short-time, non-Markovian dynamics of a damped harmonic oscillator coupled
//! to Ohmic, sub-Ohmic and super-Ohmic thermal reservoirs, and the resulting
//! evolution of quadrature squeezing.
//!
//! The pipeline is
//! [`bath`] kernels → [`coefficients::coefficient_path`] →
//! [`dynamics::variance_series`] → [`dynamics::squeezing_summary`],
//! with [`coefficients::markovian_path`] as the memoryless baseline.

pub mod bath;
pub mod coefficients;
pub mod dynamics;
pub mod numerics;
pub mod special;

pub use bath::{BathContext, BathError, SpectralDensity, ThermalMode};
pub use coefficients::{CoefficientError, CoefficientPath, MarkovianCoefficients};
pub use dynamics::{DynamicsError, SqueezedState, SqueezingSummary, VarianceSeries};
pub use numerics::{NumericsError, TimeGrid};
