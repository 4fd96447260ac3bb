use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::NumericsError;

pub const DEFAULT_REL_TOL: f64 = 1e-10;
pub const DEFAULT_ABS_TOL: f64 = 1e-14;

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
// Abscissae in descending order; the last one is the panel centre.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_980_755_451,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the odd-indexed abscissae XGK[1], XGK[3], ...
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    /// Absolute error estimate, always non-negative.
    pub error_estimate: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Maximum bisection depth of any panel.
    pub max_depth: u32,
    /// Maximum number of live panels before giving up.
    pub max_panels: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            max_depth: 60,
            max_panels: 20_000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    depth: u32,
    value: f64,
    error: f64,
    abs_value: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    // Largest error first; ties broken by position so the order is total.
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn eval<F: Fn(f64) -> f64>(f: &F, x: f64) -> Result<f64, NumericsError> {
    let y = f(x);
    if y.is_finite() {
        Ok(y)
    } else {
        Err(NumericsError::NonFiniteIntegrand { at: x, value: y })
    }
}

fn kronrod_panel<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    depth: u32,
) -> Result<Panel, NumericsError> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let f_center = eval(f, center)?;
    let mut gauss = 0.0;
    let mut kronrod = WGK[10] * f_center;
    let mut abs_sum = kronrod.abs();
    let mut values = [(0.0, 0.0); 10];

    for (j, (&x, &w)) in XGK[..10].iter().zip(&WGK[..10]).enumerate() {
        let dx = half * x;
        let lo = eval(f, center - dx)?;
        let hi = eval(f, center + dx)?;
        values[j] = (lo, hi);
        kronrod += w * (lo + hi);
        abs_sum += w * (lo.abs() + hi.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (lo + hi);
        }
    }

    let mean = 0.5 * kronrod;
    let mut asc = WGK[10] * (f_center - mean).abs();
    for (&(lo, hi), &w) in values.iter().zip(&WGK[..10]) {
        asc += w * ((lo - mean).abs() + (hi - mean).abs());
    }

    let value = kronrod * half;
    let abs_value = abs_sum * half.abs();
    let asc = asc * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();

    if asc != 0.0 && error != 0.0 {
        error = asc * (200.0 * error / asc).powf(1.5).min(1.0);
    }
    if abs_value > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * abs_value);
    }

    Ok(Panel {
        a,
        b,
        depth,
        value,
        error,
        abs_value,
    })
}

/// Adaptive Gauss–Kronrod (10/21) quadrature of `f` over `[a, b]` with the
/// default [`QuadratureConfig`].
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<QuadratureResult, NumericsError> {
    integrate_adaptive_with(f, a, b, rel_tol, abs_tol, &QuadratureConfig::default())
}

/// Adaptive quadrature with explicit limits.
///
/// The panel with the largest error estimate is bisected until the summed
/// error drops below `max(abs_tol, rel_tol * |value|)`. An error that has
/// reached the rounding floor of the integrand (a small multiple of machine
/// epsilon times `∫|f|`) also counts as converged, since no further splitting
/// can improve it.
pub fn integrate_adaptive_with<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    config: &QuadratureConfig,
) -> Result<QuadratureResult, NumericsError> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(NumericsError::InvalidInterval { a, b });
    }

    let first = kronrod_panel(&f, a, b, 0)?;
    let mut evaluations = 21;
    let mut heap = BinaryHeap::new();
    heap.push(first);

    loop {
        let (value, error, abs_value) = heap.iter().fold((0.0, 0.0, 0.0), |acc, p| {
            (acc.0 + p.value, acc.1 + p.error, acc.2 + p.abs_value)
        });
        let tol = abs_tol.max(rel_tol * value.abs());
        if error <= tol || error <= 100.0 * f64::EPSILON * abs_value {
            return Ok(QuadratureResult {
                value,
                error_estimate: error,
                evaluations,
            });
        }

        let worst = *heap.peek().expect("at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        if worst.depth >= config.max_depth
            || heap.len() >= config.max_panels
            || mid <= worst.a
            || mid >= worst.b
        {
            return Err(NumericsError::NotConverged {
                value,
                error_estimate: error,
                panels: heap.len(),
            });
        }

        heap.pop();
        heap.push(kronrod_panel(&f, worst.a, mid, worst.depth + 1)?);
        heap.push(kronrod_panel(&f, mid, worst.b, worst.depth + 1)?);
        evaluations += 42;
    }
}

/// Upper limit used to truncate an integrand decaying like `exp(-x / scale)`
/// so that the discarded tail is below `rel_tol` of the total.
pub fn truncation_point(scale: f64, rel_tol: f64) -> f64 {
    scale * (1.0 / rel_tol).ln() + 20.0 * scale
}

/// Integral over `[0, ∞)` of an integrand with exponential decay on the
/// length `scale`. The range is truncated at [`truncation_point`] and handed
/// to [`integrate_adaptive`] with no absolute floor, so tiny results are still
/// resolved relative to their own size (or to the rounding floor).
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(
    f: F,
    scale: f64,
    rel_tol: f64,
) -> Result<QuadratureResult, NumericsError> {
    let upper = truncation_point(scale, rel_tol);
    integrate_adaptive(f, 0.0, upper, rel_tol, 0.0)
}
