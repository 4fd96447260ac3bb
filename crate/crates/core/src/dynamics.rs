//! Gaussian-state evolution: quadrature variances of an initially squeezed
//! state, squeezing intervals, and the characteristic / Wigner functions.
//!
//! Variances live in the frame co-rotating at ω₀:
//!
//! ```text
//! (Δx)²(t) = Δ_Γ(t) + e^{-Γ(t)} σ²/2
//! (Δy)²(t) = Δ_Γ(t) + e^{-Γ(t)} / (2σ²)
//! ```

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::coefficients::CoefficientPath;
use crate::numerics::{find_crossings, Crossing, Direction, TimeGrid};

/// Variance threshold below which the x quadrature counts as squeezed.
pub const SQUEEZING_LEVEL: f64 = 0.5;

const EXTREMUM_GUARD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("squeezing ratio sigma2 must be positive and finite, got {0}")]
    InvalidSqueezing(f64),

    #[error("only squeezing angle 0 is supported, got {0}")]
    UnsupportedAngle(f64),

    #[error("the Wigner map is only available for zero displacement (alpha0 = {0})")]
    UnsupportedDisplacement(Complex64),

    #[error("t = {0} is not a point of the coefficient grid")]
    OffGrid(f64),
}

/// Squeezed coherent state `S(z) D(α₀)|0⟩` with real squeezing parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezedState {
    sigma2: f64,
    alpha0: Complex64,
}

impl SqueezedState {
    /// `sigma2 = e^{-2 s_sq}` is twice the initial x variance. Only `phi = 0`
    /// is accepted.
    pub fn new(sigma2: f64, alpha0: Complex64, phi: f64) -> Result<Self, DynamicsError> {
        if !(sigma2.is_finite() && sigma2 > 0.0) {
            return Err(DynamicsError::InvalidSqueezing(sigma2));
        }
        if phi != 0.0 {
            return Err(DynamicsError::UnsupportedAngle(phi));
        }
        Ok(Self { sigma2, alpha0 })
    }

    pub fn vacuum(sigma2: f64) -> Result<Self, DynamicsError> {
        Self::new(sigma2, Complex64::new(0.0, 0.0), 0.0)
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn alpha0(&self) -> Complex64 {
        self.alpha0
    }

    pub fn phi(&self) -> f64 {
        0.0
    }

    /// Squeezing magnitude `s_sq = -ln(σ²)/2`.
    pub fn squeezing_magnitude(&self) -> f64 {
        -0.5 * self.sigma2.ln()
    }

    /// Initial characteristic function
    /// `χ₀(ξ) = exp[-½|ξ C - ξ* e^{-iφ} S|² + i(ξ* α₀* + ξ α₀)]`.
    pub fn initial_characteristic(&self, xi: Complex64) -> Complex64 {
        let s = self.squeezing_magnitude();
        let (c, sh) = (s.cosh(), s.sinh());
        let spread = (xi * c - xi.conj() * sh).norm_sqr();
        let phase = xi.conj() * self.alpha0.conj() + xi * self.alpha0;
        (Complex64::new(-0.5 * spread, 0.0) + Complex64::i() * phase).exp()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VarianceSeries {
    pub grid: TimeGrid,
    pub var_x: Vec<f64>,
    pub var_y: Vec<f64>,
    pub uncertainty: Vec<f64>,
    pub squeezed: Vec<bool>,
    pub crossings: Vec<Crossing>,
}

impl VarianceSeries {
    pub fn min_uncertainty(&self) -> f64 {
        self.uncertainty
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

fn variance_pair(path: &CoefficientPath, i: usize, sigma2: f64) -> (f64, f64) {
    let decay = (-path.big_gamma[i]).exp();
    let dg = path.delta_big_gamma[i];
    (dg + decay * sigma2 / 2.0, dg + decay / (2.0 * sigma2))
}

pub fn variance_series(path: &CoefficientPath, state: &SqueezedState) -> VarianceSeries {
    let n = path.len();
    let (mut var_x, mut var_y) = (Vec::with_capacity(n), Vec::with_capacity(n));
    for i in 0..n {
        let (x, y) = variance_pair(path, i, state.sigma2);
        var_x.push(x);
        var_y.push(y);
    }
    let uncertainty = var_x.iter().zip(&var_y).map(|(x, y)| x * y).collect();
    let squeezed = var_x.iter().map(|&v| v < SQUEEZING_LEVEL).collect();
    let crossings = find_crossings(&path.grid, &var_x, SQUEEZING_LEVEL);
    VarianceSeries {
        grid: path.grid,
        var_x,
        var_y,
        uncertainty,
        squeezed,
        crossings,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SqueezingSummary {
    pub initially_squeezed: bool,
    /// First time the state leaves the squeezed region.
    pub first_loss_time: Option<f64>,
    /// Start of the final non-squeezed stretch that lasts to the end of the grid.
    pub final_loss_time: Option<f64>,
    /// Strict interior local extrema of `(Δx)²`.
    pub oscillation_count: usize,
    pub num_squeezing_intervals: usize,
}

pub fn squeezing_summary(vs: &VarianceSeries) -> SqueezingSummary {
    let initially_squeezed = vs.squeezed.first().copied().unwrap_or(false);
    let still_squeezed = vs.squeezed.last().copied().unwrap_or(false);

    let first_loss_time = vs
        .crossings
        .iter()
        .find(|c| c.direction == Direction::Rising)
        .map(|c| c.time);
    let final_loss_time = match vs.crossings.last() {
        Some(c) if !still_squeezed && c.direction == Direction::Rising => Some(c.time),
        _ => None,
    };

    let oscillation_count = vs
        .var_x
        .windows(3)
        .filter(|w| {
            let (l, m, r) = (w[0], w[1], w[2]);
            (m - l > EXTREMUM_GUARD && m - r > EXTREMUM_GUARD)
                || (l - m > EXTREMUM_GUARD && r - m > EXTREMUM_GUARD)
        })
        .count();

    let re_entries = vs
        .crossings
        .iter()
        .filter(|c| c.direction == Direction::Falling)
        .count();

    SqueezingSummary {
        initially_squeezed,
        first_loss_time,
        final_loss_time,
        oscillation_count,
        num_squeezing_intervals: re_entries + usize::from(initially_squeezed),
    }
}

fn grid_index(path: &CoefficientPath, t: f64) -> Result<usize, DynamicsError> {
    path.grid
        .index_of(t)
        .filter(|&i| i < path.len())
        .ok_or(DynamicsError::OffGrid(t))
}

/// `χ_t(ξ) = e^{-Δ_Γ(t)|ξ|²} χ₀(e^{-Γ(t)/2} e^{-iω₀t} ξ)` at a grid time.
///
/// Along the direction `ξ = e^{iω₀t} k` with real `k` the second derivative
/// in `k` at the origin is `-2 (Δx)²(t)`; along `i e^{iω₀t} k` it is
/// `-2 (Δy)²(t)`.
pub fn characteristic_function(
    path: &CoefficientPath,
    t: f64,
    state: &SqueezedState,
    xi: Complex64,
) -> Result<Complex64, DynamicsError> {
    let i = grid_index(path, t)?;
    let t = path.grid.time(i);
    let rotation = Complex64::from_polar((-0.5 * path.big_gamma[i]).exp(), -t);
    let damping = (-path.delta_big_gamma[i] * xi.norm_sqr()).exp();
    Ok(state.initial_characteristic(rotation * xi) * damping)
}

/// Wigner function at grid time `t` and phase-space point `α = α_x + iα_y`,
/// normalized so that `∫W dα_x dα_y = 1` and its second moments are the
/// quadrature variances.
pub fn wigner(
    path: &CoefficientPath,
    t: f64,
    state: &SqueezedState,
    alpha: Complex64,
) -> Result<f64, DynamicsError> {
    if state.alpha0 != Complex64::new(0.0, 0.0) {
        return Err(DynamicsError::UnsupportedDisplacement(state.alpha0));
    }
    let i = grid_index(path, t)?;
    let (var_x, var_y) = variance_pair(path, i, state.sigma2);
    Ok(gaussian_wigner(var_x, var_y, alpha))
}

fn gaussian_wigner(var_x: f64, var_y: f64, alpha: Complex64) -> f64 {
    let norm = 1.0 / (2.0 * PI * (var_x * var_y).sqrt());
    norm * (-alpha.re * alpha.re / (2.0 * var_x) - alpha.im * alpha.im / (2.0 * var_y)).exp()
}

/// Variances `((Δx)², (Δy)²)` at a grid time.
pub fn variances_at(
    path: &CoefficientPath,
    t: f64,
    state: &SqueezedState,
) -> Result<(f64, f64), DynamicsError> {
    let i = grid_index(path, t)?;
    Ok(variance_pair(path, i, state.sigma2))
}
