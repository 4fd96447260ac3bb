//! Time-dependent diffusion and dissipation coefficients and the two memory
//! integrals built from them:
//!
//! ```text
//! Δ(t)   = 2 ∫₀^t cos(ω₀t') ν(t') dt'
//! γ(t)   =   ∫₀^t sin(ω₀t') μ(t') dt'
//! Γ(t)   = 2 ∫₀^t γ(t') dt'
//! Δ_Γ(t) = e^{-Γ(t)} ∫₀^t e^{Γ(t')} Δ(t') dt'
//! ```
//!
//! All four are advanced together as one initial-value problem,
//! `dΔ_Γ/dt = Δ - 2γ Δ_Γ` being the derivative of the last line.

use std::f64::consts::PI;

use rayon::prelude::*;
use thiserror::Error;

use crate::bath::{
    dissipation_kernel, noise_kernel, spectral_density, spectral_distribution, BathContext,
    BathError, SpectralDensity,
};
use crate::numerics::{ode_path, NumericsError, TimeGrid};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoefficientError {
    #[error("kernel evaluation failed: {0}")]
    Kernel(#[from] BathError),

    #[error("coefficient integration failed: {0}")]
    Integration(#[from] NumericsError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientPath {
    pub grid: TimeGrid,
    /// Diffusion coefficient Δ(t), units of ω₀.
    pub delta: Vec<f64>,
    /// Dissipation coefficient γ(t), units of ω₀.
    pub gamma: Vec<f64>,
    /// Accumulated damping exponent Γ(t).
    pub big_gamma: Vec<f64>,
    /// Exponentially weighted accumulated diffusion Δ_Γ(t).
    pub delta_big_gamma: Vec<f64>,
}

impl CoefficientPath {
    pub fn len(&self) -> usize {
        self.delta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.delta.is_empty()
    }

    pub fn min_delta(&self) -> f64 {
        self.delta.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Long-time (Markovian) limits of Δ(t) and γ(t).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarkovianCoefficients {
    pub delta_m: f64,
    pub gamma_m: f64,
}

impl MarkovianCoefficients {
    /// `Δ_M / (2γ_M)`, the stationary quadrature variance. Equals N(ω₀) + 1/2.
    pub fn stationary_variance(&self) -> f64 {
        self.delta_m / (2.0 * self.gamma_m)
    }
}

/// ν and μ tabulated at every RK4 stage time `k·h/2`.
struct KernelTable {
    half_step: f64,
    nu: Vec<f64>,
    mu: Vec<f64>,
}

impl KernelTable {
    fn build(
        sd: &SpectralDensity,
        ctx: &BathContext,
        grid: &TimeGrid,
    ) -> Result<Self, CoefficientError> {
        let half_step = 0.5 * grid.step();
        let samples = 2 * (grid.points() - 1) + 1;
        let nu = (0..samples)
            .into_par_iter()
            .map(|k| noise_kernel(sd, ctx, k as f64 * half_step))
            .collect::<Result<Vec<_>, _>>()?;
        let mu = (0..samples)
            .map(|k| dissipation_kernel(sd, k as f64 * half_step))
            .collect();
        Ok(Self { half_step, nu, mu })
    }

    fn at(&self, t: f64) -> (f64, f64) {
        let k = (t / self.half_step).round() as usize;
        (self.nu[k], self.mu[k])
    }
}

pub fn coefficient_path(
    sd: &SpectralDensity,
    ctx: &BathContext,
    grid: &TimeGrid,
) -> Result<CoefficientPath, CoefficientError> {
    let kernels = KernelTable::build(sd, ctx, grid)?;

    let states = ode_path(
        |t, y: &[f64; 4]| {
            let (nu, mu) = kernels.at(t);
            let (sin, cos) = t.sin_cos();
            [
                2.0 * cos * nu,
                sin * mu,
                2.0 * y[1],
                y[0] - 2.0 * y[1] * y[3],
            ]
        },
        [0.0; 4],
        grid,
    )?;

    let mut path = CoefficientPath {
        grid: *grid,
        delta: Vec::with_capacity(states.len()),
        gamma: Vec::with_capacity(states.len()),
        big_gamma: Vec::with_capacity(states.len()),
        delta_big_gamma: Vec::with_capacity(states.len()),
    };
    for [d, g, bg, dbg] in states {
        path.delta.push(d);
        path.gamma.push(g);
        path.big_gamma.push(bg);
        path.delta_big_gamma.push(dbg);
    }
    Ok(path)
}

/// `Δ_M = π I(ω₀)`, `γ_M = π J(ω₀) / 2`.
pub fn markovian_coefficients(
    sd: &SpectralDensity,
    ctx: &BathContext,
) -> Result<MarkovianCoefficients, CoefficientError> {
    Ok(MarkovianCoefficients {
        delta_m: PI * spectral_distribution(sd, ctx, 1.0)?,
        gamma_m: 0.5 * PI * spectral_density(sd, 1.0)?,
    })
}

/// Closed-form path with the coefficients frozen at their Markovian values.
pub fn markovian_path(mc: &MarkovianCoefficients, grid: &TimeGrid) -> CoefficientPath {
    let n = grid.points();
    let delta_big_gamma = grid
        .times()
        .map(|t| {
            if mc.gamma_m > 0.0 {
                -(-2.0 * mc.gamma_m * t).exp_m1() * mc.stationary_variance()
            } else {
                mc.delta_m * t
            }
        })
        .collect();
    CoefficientPath {
        grid: *grid,
        delta: vec![mc.delta_m; n],
        gamma: vec![mc.gamma_m; n],
        big_gamma: grid.times().map(|t| 2.0 * mc.gamma_m * t).collect(),
        delta_big_gamma,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bath::{occupation, ThermalMode};
    use approx::assert_relative_eq;

    fn fig2(s: f64) -> SpectralDensity {
        SpectralDensity::new(0.1, s, 0.1).unwrap()
    }

    fn high_t() -> BathContext {
        BathContext::new(1500.0, ThermalMode::HighTemperature).unwrap()
    }

    #[test]
    fn starts_at_zero_with_expected_slopes() {
        let grid = TimeGrid::from_periods(2.0, 200).unwrap();
        let path = coefficient_path(&fig2(1.0), &high_t(), &grid).unwrap();
        assert_eq!(path.delta[0], 0.0);
        assert_eq!(path.gamma[0], 0.0);
        assert_eq!(path.big_gamma[0], 0.0);
        assert_eq!(path.delta_big_gamma[0], 0.0);

        let h = grid.step();
        let slope_delta = path.delta[1] / h;
        assert_relative_eq!(slope_delta, 3.0, max_relative = 1e-3);
        // γ grows quadratically: γ ≈ μ'(0) t³/3 near zero
        assert!((path.gamma[1] / h).abs() < 1e-6);
    }

    #[test]
    fn ohmic_diffusion_goes_negative() {
        let grid = TimeGrid::from_periods(10.0, 200).unwrap();
        let path = coefficient_path(&fig2(1.0), &high_t(), &grid).unwrap();
        assert!(path.min_delta() < 0.0);
    }

    #[test]
    fn matches_composite_simpson() {
        let sd = fig2(1.0);
        let ctx = high_t();
        let grid = TimeGrid::from_periods(10.0, 200).unwrap();
        let path = coefficient_path(&sd, &ctx, &grid).unwrap();
        let h = grid.step();
        let integrand: Vec<f64> = grid
            .times()
            .map(|t| 2.0 * t.cos() * noise_kernel(&sd, &ctx, t).unwrap())
            .collect();
        for check in 1..=10 {
            let i = 200 * check;
            let simpson = integrand[..=i]
                .iter()
                .enumerate()
                .map(|(k, f)| {
                    let w = if k == 0 || k == i {
                        1.0
                    } else if k % 2 == 1 {
                        4.0
                    } else {
                        2.0
                    };
                    w * f
                })
                .sum::<f64>()
                * h
                / 3.0;
            let rel = ((path.delta[i] - simpson) / simpson).abs();
            assert!(
                rel <= 1e-6,
                "t={} ode={} simpson={}",
                grid.time(i),
                path.delta[i],
                simpson
            );
        }
    }

    #[test]
    fn step_halving_is_fourth_order() {
        let sd = fig2(1.0);
        let ctx = high_t();
        let grid = TimeGrid::from_periods(30.0, 100).unwrap();
        let deviations = |coarse: &TimeGrid| {
            let a = coefficient_path(&sd, &ctx, coarse).unwrap();
            let b = coefficient_path(&sd, &ctx, &coarse.refined()).unwrap();
            let dev = |x: &[f64], y: &[f64]| {
                x.iter()
                    .enumerate()
                    .map(|(i, v)| (v - y[2 * i]).abs())
                    .fold(0.0, f64::max)
            };
            [
                dev(&a.delta, &b.delta),
                dev(&a.gamma, &b.gamma),
                dev(&a.big_gamma, &b.big_gamma),
                dev(&a.delta_big_gamma, &b.delta_big_gamma),
            ]
        };
        let d1 = deviations(&grid);
        let d2 = deviations(&grid.refined());
        for (a, b) in d1.iter().zip(&d2) {
            assert!(a / b >= 8.0, "ratio {} ({a} / {b})", a / b);
        }
    }

    #[test]
    fn markovian_values() {
        let mc = markovian_coefficients(&fig2(1.0), &high_t()).unwrap();
        assert_relative_eq!(
            mc.gamma_m,
            PI * 0.01 * (-10.0f64).exp() / 2.0,
            max_relative = 1e-14
        );
        assert_relative_eq!(mc.gamma_m, 7.131_404_290_765_751e-7, max_relative = 1e-9);
        assert_relative_eq!(mc.delta_m, 2.139_421_287_229_725e-3, max_relative = 1e-9);
        assert_relative_eq!(mc.stationary_variance(), 1500.0, max_relative = 1e-13);

        let sup = markovian_coefficients(&fig2(3.0), &high_t()).unwrap();
        assert_relative_eq!(sup.delta_m / mc.delta_m, 100.0, max_relative = 1e-12);
    }

    #[test]
    fn markovian_ratio_is_occupation_in_exact_mode() {
        for temperature in [0.05, 1.0, 1500.0] {
            let ctx = BathContext::new(temperature, ThermalMode::Exact).unwrap();
            let mc = markovian_coefficients(&fig2(1.0), &ctx).unwrap();
            let expected = occupation(&ctx, 1.0).unwrap() + 0.5;
            assert_relative_eq!(mc.stationary_variance(), expected, max_relative = 1e-12);
            assert!(mc.stationary_variance() >= 0.5);
        }
    }

    #[test]
    fn markovian_closed_form() {
        let mc = MarkovianCoefficients {
            delta_m: 3.0e-3,
            gamma_m: 1.0e-3,
        };
        let t_e = 1.0 / (2.0 * mc.gamma_m);
        let grid = TimeGrid::new(2.0 * t_e, t_e / 100.0).unwrap();
        let path = markovian_path(&mc, &grid);
        assert_eq!(path.delta_big_gamma[0], 0.0);
        assert_eq!(path.big_gamma[0], 0.0);
        assert_relative_eq!(
            path.delta_big_gamma[100],
            1.5 * (1.0 - (-1.0f64).exp()),
            max_relative = 1e-12
        );

        let long = TimeGrid::new(60.0 * t_e, t_e).unwrap();
        let path = markovian_path(&mc, &long);
        assert_relative_eq!(
            *path.delta_big_gamma.last().unwrap(),
            1.5,
            max_relative = 1e-15
        );
    }

    #[test]
    fn markovian_without_damping_is_linear() {
        let mc = MarkovianCoefficients {
            delta_m: 0.2,
            gamma_m: 0.0,
        };
        let grid = TimeGrid::new(1.0, 0.25).unwrap();
        let path = markovian_path(&mc, &grid);
        for (i, v) in path.delta_big_gamma.iter().enumerate() {
            assert_relative_eq!(*v, 0.05 * i as f64, max_relative = 1e-15);
        }
    }

    #[test]
    fn exact_mode_period_average_approaches_markovian() {
        let sd = fig2(1.0);
        let ctx = BathContext::new(1500.0, ThermalMode::Exact).unwrap();
        let grid = TimeGrid::from_periods(50.0, 200).unwrap();
        let path = coefficient_path(&sd, &ctx, &grid).unwrap();
        let mc = markovian_coefficients(&sd, &ctx).unwrap();
        let last_period = &path.delta[path.len() - 201..path.len() - 1];
        let mean = last_period.iter().sum::<f64>() / 200.0;
        assert!(
            ((mean - mc.delta_m) / mc.delta_m).abs() < 0.05,
            "{mean} vs {}",
            mc.delta_m
        );
    }
}
