//! Reservoir description: power-law spectral density with exponential cutoff,
//! thermal occupation, and the time-domain kernels
//!
//! * noise kernel `ν(t) = ∫₀^∞ I(ω) cos(ωt) dω`, with `I(ω) = J(ω)[N(ω) + 1/2]`
//! * dissipation kernel `μ(t) = ∫₀^∞ J(ω) sin(ωt) dω`
//!
//! Units: ω₀ = 1, times in 1/ω₀, temperature as k_BT/ω₀.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use thiserror::Error;

use crate::numerics::{
    integrate_adaptive, integrate_semi_infinite, truncation_point, NumericsError, QuadratureResult,
    DEFAULT_REL_TOL,
};
use crate::special::power_exp_fourier;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BathError {
    #[error("{name} must be positive and finite, got {value}")]
    InvalidParameter { name: &'static str, value: f64 },

    #[error("{quantity} is undefined at ω = {omega}")]
    Domain { quantity: &'static str, omega: f64 },

    #[error("{kernel} kernel at t = {t}: {source}")]
    Quadrature {
        kernel: &'static str,
        t: f64,
        #[source]
        source: NumericsError,
    },
}

fn positive(name: &'static str, value: f64) -> Result<f64, BathError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(BathError::InvalidParameter { name, value })
    }
}

/// `J(ω) = g² ω_c^{1-s} ω^s e^{-ω/ω_c}` with `ω_c = r` (in units of ω₀).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralDensity {
    g: f64,
    s: f64,
    r: f64,
}

impl SpectralDensity {
    pub const SUB_OHMIC: f64 = 0.5;
    pub const OHMIC: f64 = 1.0;
    pub const SUPER_OHMIC: f64 = 3.0;

    pub fn new(g: f64, s: f64, r: f64) -> Result<Self, BathError> {
        Ok(Self {
            g: positive("g", g)?,
            s: positive("s", s)?,
            r: positive("r", r)?,
        })
    }

    pub fn coupling(&self) -> f64 {
        self.g
    }

    pub fn ohmicity(&self) -> f64 {
        self.s
    }

    /// Cutoff ratio ω_c/ω₀, which is also ω_c itself in these units.
    pub fn cutoff(&self) -> f64 {
        self.r
    }

    fn prefactor(&self) -> f64 {
        self.g * self.g * self.r.powf(1.0 - self.s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ThermalMode {
    /// `N + 1/2 = k_BT/ω`.
    HighTemperature,
    /// Bose–Einstein occupation.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathContext {
    temperature: f64,
    mode: ThermalMode,
}

impl BathContext {
    pub fn new(temperature: f64, mode: ThermalMode) -> Result<Self, BathError> {
        Ok(Self {
            temperature: positive("temperature", temperature)?,
            mode,
        })
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn mode(&self) -> ThermalMode {
        self.mode
    }

    /// Warning text when the high-temperature surrogate is used outside the
    /// regime `k_BT ≫ max(ω₀, ω_c)`.
    pub fn validity_warning(&self, sd: &SpectralDensity) -> Option<String> {
        let floor = 10.0 * sd.cutoff().max(1.0);
        (self.mode == ThermalMode::HighTemperature && self.temperature < floor).then(|| {
            format!(
                "high-temperature mode with k_BT/ω₀ = {} below {floor}; \
                 consider the exact occupation",
                self.temperature
            )
        })
    }

    /// `N(ω) + 1/2` in the selected mode.
    fn half_shifted_occupation(&self, omega: f64) -> f64 {
        match self.mode {
            ThermalMode::HighTemperature => self.temperature / omega,
            ThermalMode::Exact => 0.5 / (0.5 * omega / self.temperature).tanh(),
        }
    }
}

pub fn spectral_density(sd: &SpectralDensity, omega: f64) -> Result<f64, BathError> {
    if !(omega >= 0.0) || !omega.is_finite() {
        return Err(BathError::Domain {
            quantity: "spectral density",
            omega,
        });
    }
    if omega == 0.0 {
        return Ok(0.0);
    }
    Ok(density_unchecked(sd, omega))
}

fn density_unchecked(sd: &SpectralDensity, omega: f64) -> f64 {
    sd.prefactor() * omega.powf(sd.s) * (-omega / sd.r).exp()
}

/// Mean thermal occupation `N(ω)`. In high-temperature mode this is the
/// surrogate `k_BT/ω - 1/2`.
pub fn occupation(ctx: &BathContext, omega: f64) -> Result<f64, BathError> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(BathError::Domain {
            quantity: "occupation",
            omega,
        });
    }
    Ok(match ctx.mode {
        ThermalMode::HighTemperature => ctx.temperature / omega - 0.5,
        ThermalMode::Exact => 1.0 / (omega / ctx.temperature).exp_m1(),
    })
}

/// `I(ω) = J(ω)[N(ω) + 1/2]`.
pub fn spectral_distribution(
    sd: &SpectralDensity,
    ctx: &BathContext,
    omega: f64,
) -> Result<f64, BathError> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(BathError::Domain {
            quantity: "spectral distribution",
            omega,
        });
    }
    Ok(density_unchecked(sd, omega) * ctx.half_shifted_occupation(omega))
}

/// Noise kernel `ν(t)`. Closed form in high-temperature mode, adaptive
/// quadrature with the exact occupation otherwise.
pub fn noise_kernel(sd: &SpectralDensity, ctx: &BathContext, t: f64) -> Result<f64, BathError> {
    match ctx.mode {
        ThermalMode::HighTemperature => {
            // I(ω) = g² T ω_c^{1-s} ω^{s-1} e^{-ω/ω_c}
            let (cos_part, _) = power_exp_fourier(sd.s - 1.0, sd.r, t);
            Ok(sd.prefactor() * ctx.temperature * cos_part)
        }
        ThermalMode::Exact => Ok(noise_kernel_quadrature(sd, ctx, t, DEFAULT_REL_TOL)?.value),
    }
}

/// Dissipation kernel `μ(t)`, closed form. Independent of temperature.
pub fn dissipation_kernel(sd: &SpectralDensity, t: f64) -> f64 {
    let (_, sin_part) = power_exp_fourier(sd.s, sd.r, t);
    sd.prefactor() * sin_part
}

#[derive(Clone, Copy)]
enum Trig {
    Cos,
    Sin,
}

impl Trig {
    fn eval(self, x: f64) -> f64 {
        match self {
            Trig::Cos => x.cos(),
            Trig::Sin => x.sin(),
        }
    }
}

/// `∫₀^∞ w(ω) trig(ωt) dω` for a weight with the cutoff decay.
///
/// When the truncated range spans several periods `P = 2π/t`, the integral is
/// folded onto one period, `∫₀^P [Σ_k w(kP + u)] trig(ut) du`. The folded sum
/// has no cancellation and the phase `ut` stays below 2π, so the rounding of
/// large `ωt` no longer limits the accuracy of strongly cancelling kernels.
/// `ω = u²` (or `u = v²` after folding) is used when the weight behaves like
/// `ω^{p}` with `p ≤ 0` at the origin or has a non-integer power.
fn cutoff_transform<W>(
    weight: W,
    trig: Trig,
    t: f64,
    smooth_at_origin: bool,
    cutoff: f64,
    rel_tol: f64,
) -> Result<QuadratureResult, NumericsError>
where
    W: Fn(f64) -> f64,
{
    let upper = truncation_point(cutoff, rel_tol);
    let period = std::f64::consts::TAU / t.abs();
    if !(period < upper) {
        let f = |w: f64| weight(w) * trig.eval(w * t);
        return if smooth_at_origin {
            integrate_semi_infinite(f, cutoff, rel_tol)
        } else {
            integrate_adaptive(|u| 2.0 * u * f(u * u), 0.0, upper.sqrt(), rel_tol, 0.0)
        };
    }

    let periods = (upper / period).ceil() as usize;
    let folded = |u: f64| -> f64 {
        let sum = compensated_sum((0..periods).map(|k| weight(k as f64 * period + u)));
        sum * trig.eval(u * t)
    };
    if smooth_at_origin {
        integrate_adaptive(folded, 0.0, period, rel_tol, 0.0)
    } else {
        integrate_adaptive(
            |v| 2.0 * v * folded(v * v),
            0.0,
            period.sqrt(),
            rel_tol,
            0.0,
        )
    }
}

/// Neumaier-compensated sum.
fn compensated_sum(terms: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut carry) = (0.0_f64, 0.0_f64);
    for x in terms {
        let next = sum + x;
        carry += if sum.abs() >= x.abs() {
            (sum - next) + x
        } else {
            (x - next) + sum
        };
        sum = next;
    }
    sum + carry
}

fn needs_root_substitution(power: f64) -> bool {
    power <= 0.0 || power.fract() != 0.0
}

/// `ν(t)` by direct quadrature of `I(ω) cos(ωt)` in the context's mode.
pub fn noise_kernel_quadrature(
    sd: &SpectralDensity,
    ctx: &BathContext,
    t: f64,
    rel_tol: f64,
) -> Result<QuadratureResult, BathError> {
    cutoff_transform(
        |w| density_unchecked(sd, w) * ctx.half_shifted_occupation(w),
        Trig::Cos,
        t,
        !needs_root_substitution(sd.s - 1.0),
        sd.r,
        rel_tol,
    )
    .map_err(|source| BathError::Quadrature {
        kernel: "noise",
        t,
        source,
    })
}

/// `μ(t)` by direct quadrature of `J(ω) sin(ωt)`.
pub fn dissipation_kernel_quadrature(
    sd: &SpectralDensity,
    t: f64,
    rel_tol: f64,
) -> Result<QuadratureResult, BathError> {
    cutoff_transform(
        |w| density_unchecked(sd, w),
        Trig::Sin,
        t,
        !needs_root_substitution(sd.s),
        sd.r,
        rel_tol,
    )
    .map_err(|source| BathError::Quadrature {
        kernel: "dissipation",
        t,
        source,
    })
}

/// Scaled spectral distribution `Ī = I/(g² k_BT)` at each `ω̄ = ω/ω₀`.
pub fn scaled_spectrum_series(
    sd: &SpectralDensity,
    ctx: &BathContext,
    omega_bar: &[f64],
) -> Result<Vec<(f64, f64)>, BathError> {
    let scale = sd.g * sd.g * ctx.temperature;
    omega_bar
        .iter()
        .map(|&w| Ok((w, spectral_distribution(sd, ctx, w)? / scale)))
        .collect()
}
