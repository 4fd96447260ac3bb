//! Generic numerical engines: adaptive quadrature, fixed-step RK4 paths and
//! threshold-crossing detection on sampled series. Nothing in here knows
//! about the physics.

mod crossings;
mod grid;
mod ode;
mod quadrature;

pub use crossings::{find_crossings, Crossing, Direction};
pub use grid::TimeGrid;
pub use ode::ode_path;
pub use quadrature::{
    integrate_adaptive, integrate_adaptive_with, integrate_semi_infinite, truncation_point,
    QuadratureConfig, QuadratureResult, DEFAULT_ABS_TOL, DEFAULT_REL_TOL,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("invalid integration interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },

    #[error("integrand returned {value} at x = {at}")]
    NonFiniteIntegrand { at: f64, value: f64 },

    #[error(
        "quadrature did not converge after {panels} panels: best estimate {value:e} \
         with error {error_estimate:e}"
    )]
    NotConverged {
        value: f64,
        error_estimate: f64,
        panels: usize,
    },

    #[error("right-hand side is not finite at t = {at}")]
    NonFiniteRhs { at: f64 },

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),
}
