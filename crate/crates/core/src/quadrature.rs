//! Globally adaptive Gauss-Kronrod (10/21) quadrature, plus the weighted
//! variants used for Riemann-Liouville kernels with an integrable endpoint
//! singularity.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::special::PosReal;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_subdivisions: 2000,
        }
    }
}

impl QuadConfig {
    pub fn validate(&self) -> Result<(), QuadError> {
        let ok = self.abs_tol > 0.0
            && self.rel_tol > 0.0
            && self.abs_tol.is_finite()
            && self.rel_tol.is_finite()
            && self.max_subdivisions >= 1;
        if ok {
            Ok(())
        } else {
            Err(QuadError::InvalidConfig(*self))
        }
    }

    /// Same budget with tolerances scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> QuadConfig {
        QuadConfig {
            abs_tol: self.abs_tol * factor,
            rel_tol: self.rel_tol * factor,
            max_subdivisions: self.max_subdivisions,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

impl QuadResult {
    pub fn scale(self, factor: f64) -> QuadResult {
        QuadResult {
            value: self.value * factor,
            error_estimate: self.error_estimate * factor.abs(),
            evaluations: self.evaluations,
        }
    }

    /// Sum of two results; errors add.
    pub fn combine(self, other: QuadResult) -> QuadResult {
        QuadResult {
            value: self.value + other.value,
            error_estimate: self.error_estimate + other.error_estimate,
            evaluations: self.evaluations + other.evaluations,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("invalid integration range [{0}, {1}]")]
    InvalidRange(f64, f64),
    #[error("invalid quadrature configuration {0:?}")]
    InvalidConfig(QuadConfig),
    #[error("integrand is not finite at x = {0}")]
    NonFinite(f64),
    #[error("tolerance not reached after {subdivisions} subdivisions (value {value}, error estimate {error_estimate})")]
    NotConverged {
        value: f64,
        error_estimate: f64,
        evaluations: usize,
        subdivisions: usize,
    },
}

impl QuadError {
    /// Best available result when the failure carried one.
    pub fn best_effort(&self) -> Option<QuadResult> {
        match *self {
            QuadError::NotConverged {
                value,
                error_estimate,
                evaluations,
                ..
            } => Some(QuadResult {
                value,
                error_estimate,
                evaluations,
            }),
            _ => None,
        }
    }
}

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
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const GK_POINTS: usize = 21;

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One 21-point Kronrod panel with the QUADPACK error heuristic.
fn gauss_kronrod_21<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Result<Panel, QuadError> {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let eval = |x: f64| {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(QuadError::NonFinite(x))
        }
    };

    let f_center = eval(center)?;
    let mut res_k = WGK[10] * f_center;
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let y1 = eval(center - dx)?;
        let y2 = eval(center + dx)?;
        fv1[j] = y1;
        fv2[j] = y2;
        res_k += WGK[j] * (y1 + y2);
        res_abs += WGK[j] * (y1.abs() + y2.abs());
        // odd indices are the embedded Gauss nodes
        if j % 2 == 1 {
            res_g += WG[j / 2] * (y1 + y2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (f_center - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(Panel { lo, hi, value, error })
}

fn check_range(a: f64, b: f64) -> Result<(), QuadError> {
    if a.is_finite() && b.is_finite() && a < b {
        Ok(())
    } else {
        Err(QuadError::InvalidRange(a, b))
    }
}

/// Sorted, deduplicated cut points strictly inside (a, b), with a and b at the ends.
fn cut_points(a: f64, b: f64, breaks: &[f64]) -> Vec<f64> {
    let min_gap = 1e-13 * (b - a);
    let mut inner: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|&c| c.is_finite() && c > a + min_gap && c < b - min_gap)
        .collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup_by(|x, y| (*x - *y).abs() <= min_gap);
    let mut pts = Vec::with_capacity(inner.len() + 2);
    pts.push(a);
    pts.extend(inner);
    pts.push(b);
    pts
}

/// ∫ₐᵇ f.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<QuadResult, QuadError> {
    integrate_with_breaks(f, a, b, &[], cfg)
}

/// ∫ₐᵇ f with the initial partition cut at `breaks` (points outside (a, b) are ignored).
///
/// Panels are refined largest-error-first until the summed error estimate
/// meets `max(abs_tol, rel_tol·|value|)`.
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    cfg: &QuadConfig,
) -> Result<QuadResult, QuadError> {
    cfg.validate()?;
    check_range(a, b)?;

    let pts = cut_points(a, b, breaks);
    let mut heap = BinaryHeap::with_capacity(pts.len() + 2 * cfg.max_subdivisions);
    let mut evaluations = 0;
    for w in pts.windows(2) {
        heap.push(gauss_kronrod_21(&f, w[0], w[1])?);
        evaluations += GK_POINTS;
    }
    let mut subdivisions = 0;

    loop {
        let (value, error) = heap
            .iter()
            .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error));
        if error <= cfg.abs_tol.max(cfg.rel_tol * value.abs()) {
            return Ok(QuadResult {
                value,
                error_estimate: error,
                evaluations,
            });
        }
        if subdivisions >= cfg.max_subdivisions {
            return Err(QuadError::NotConverged {
                value,
                error_estimate: error,
                evaluations,
                subdivisions,
            });
        }
        let worst = heap.pop().expect("heap holds at least one panel");
        let mid = 0.5 * (worst.lo + worst.hi);
        if !(mid > worst.lo && mid < worst.hi) {
            // panel cannot be split further in f64
            heap.push(worst);
            return Err(QuadError::NotConverged {
                value,
                error_estimate: error,
                evaluations,
                subdivisions,
            });
        }
        heap.push(gauss_kronrod_21(&f, worst.lo, mid)?);
        heap.push(gauss_kronrod_21(&f, mid, worst.hi)?);
        evaluations += 2 * GK_POINTS;
        subdivisions += 1;
    }
}

/// ∫ₐˣ (t − a)^{α−1} f(t) dt.
pub fn integrate_left_weighted<F: Fn(f64) -> f64>(
    f: F,
    alpha: PosReal,
    a: f64,
    x: f64,
    cfg: &QuadConfig,
) -> Result<QuadResult, QuadError> {
    integrate_left_weighted_with_breaks(f, alpha, a, x, &[], cfg)
}

/// ∫ₓᵇ (b − t)^{α−1} f(t) dt.
pub fn integrate_right_weighted<F: Fn(f64) -> f64>(
    f: F,
    alpha: PosReal,
    x: f64,
    b: f64,
    cfg: &QuadConfig,
) -> Result<QuadResult, QuadError> {
    integrate_right_weighted_with_breaks(f, alpha, x, b, &[], cfg)
}

/// Left-weighted integral with cut points in t.
///
/// For α < 1 the singular weight is removed by u = (t − a)^α, which turns the
/// problem into (1/α)∫₀^{(x−a)^α} f(a + u^{1/α}) du. For α ≥ 1 the weight is
/// bounded and is integrated directly.
pub fn integrate_left_weighted_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    alpha: PosReal,
    a: f64,
    x: f64,
    breaks: &[f64],
    cfg: &QuadConfig,
) -> Result<QuadResult, QuadError> {
    check_range(a, x)?;
    let alpha = alpha.get();
    if alpha >= 1.0 {
        let exponent = alpha - 1.0;
        return integrate_with_breaks(|t| (t - a).max(0.0).powf(exponent) * f(t), a, x, breaks, cfg);
    }
    let inv = 1.0 / alpha;
    let upper = (x - a).powf(alpha);
    let u_breaks: Vec<f64> = breaks
        .iter()
        .filter(|&&c| c > a && c < x)
        .map(|&c| (c - a).powf(alpha))
        .collect();
    let inner = integrate_with_breaks(
        |u| f((a + u.powf(inv)).min(x)),
        0.0,
        upper,
        &u_breaks,
        &cfg.with_abs(cfg.abs_tol * alpha),
    )?;
    Ok(inner.scale(inv))
}

/// Right-weighted integral with cut points in t; mirror of
/// [`integrate_left_weighted_with_breaks`] via u = (b − t)^α.
pub fn integrate_right_weighted_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    alpha: PosReal,
    x: f64,
    b: f64,
    breaks: &[f64],
    cfg: &QuadConfig,
) -> Result<QuadResult, QuadError> {
    check_range(x, b)?;
    let alpha = alpha.get();
    if alpha >= 1.0 {
        let exponent = alpha - 1.0;
        return integrate_with_breaks(|t| (b - t).max(0.0).powf(exponent) * f(t), x, b, breaks, cfg);
    }
    let inv = 1.0 / alpha;
    let upper = (b - x).powf(alpha);
    let u_breaks: Vec<f64> = breaks
        .iter()
        .filter(|&&c| c > x && c < b)
        .map(|&c| (b - c).powf(alpha))
        .collect();
    let inner = integrate_with_breaks(
        |u| f((b - u.powf(inv)).max(x)),
        0.0,
        upper,
        &u_breaks,
        &cfg.with_abs(cfg.abs_tol * alpha),
    )?;
    Ok(inner.scale(inv))
}

impl QuadConfig {
    fn with_abs(&self, abs_tol: f64) -> QuadConfig {
        QuadConfig { abs_tol, ..*self }
    }
}

/// Running integral F(t) = ∫_{origin}^{t} ρ(s) ds on a fixed range, backed by a
/// table of panel-boundary values so each query only integrates the
/// remainder inside one panel.
///
/// `origin` may be either end of the range; queries measure from it, so a
/// table anchored at the right end returns ∫_t^{origin}.
pub struct CumulativeIntegral<F> {
    density: F,
    origin: f64,
    nodes: Vec<f64>,
    values: Vec<f64>,
    table_error: f64,
    first_panel: FirstPanel,
    cfg: QuadConfig,
}

/// How the panel touching the origin is integrated.
#[derive(Debug, Clone, Copy)]
pub enum FirstPanel {
    /// The density is smooth at the origin.
    Plain,
    /// The density is (distance to origin)^{α−1}·φ(s); the table's density
    /// closure must return φ only.
    Weighted(PosReal),
}

impl<F: Fn(f64) -> f64> CumulativeIntegral<F> {
    /// Build the table with `panels` equal panels between `origin` and `end`.
    pub fn new(
        density: F,
        origin: f64,
        end: f64,
        panels: usize,
        first_panel: FirstPanel,
        cfg: &QuadConfig,
    ) -> Result<Self, QuadError> {
        if !(origin.is_finite() && end.is_finite() && origin != end) || panels == 0 {
            return Err(QuadError::InvalidRange(origin, end));
        }
        let mut table = CumulativeIntegral {
            density,
            origin,
            nodes: Vec::with_capacity(panels + 1),
            values: Vec::with_capacity(panels + 1),
            table_error: 0.0,
            first_panel,
            cfg: *cfg,
        };
        let step = (end - origin) / panels as f64;
        table.nodes.push(origin);
        table.values.push(0.0);
        let mut acc = 0.0;
        for i in 1..=panels {
            let node = if i == panels { end } else { origin + step * i as f64 };
            let prev = table.nodes[i - 1];
            let piece = table.segment(prev, node)?;
            acc += piece.value;
            table.table_error += piece.error_estimate;
            table.nodes.push(node);
            table.values.push(acc);
        }
        Ok(table)
    }

    /// Unsigned integral of the density over the segment between `from`
    /// (closer to the origin) and `to`.
    fn segment(&self, from: f64, to: f64) -> Result<QuadResult, QuadError> {
        if from == to {
            return Ok(QuadResult {
                value: 0.0,
                error_estimate: 0.0,
                evaluations: 0,
            });
        }
        let (lo, hi) = if from < to { (from, to) } else { (to, from) };
        let touches_origin = from == self.origin;
        match self.first_panel {
            FirstPanel::Weighted(alpha) => {
                let origin = self.origin;
                if touches_origin {
                    if origin <= lo {
                        integrate_left_weighted(&self.density, alpha, lo, hi, &self.cfg)
                    } else {
                        integrate_right_weighted(&self.density, alpha, lo, hi, &self.cfg)
                    }
                } else {
                    let exponent = alpha.get() - 1.0;
                    integrate(
                        |s| (s - origin).abs().powf(exponent) * (self.density)(s),
                        lo,
                        hi,
                        &self.cfg,
                    )
                }
            }
            FirstPanel::Plain => integrate(&self.density, lo, hi, &self.cfg),
        }
    }

    /// Integral from the origin to `t`, with its error estimate.
    pub fn eval(&self, t: f64) -> Result<QuadResult, QuadError> {
        let forward = self.nodes[self.nodes.len() - 1] > self.origin;
        let dist = if forward { t - self.origin } else { self.origin - t };
        let span = (self.nodes[self.nodes.len() - 1] - self.origin).abs();
        if !(dist >= 0.0 && dist <= span * (1.0 + 1e-12)) {
            return Err(QuadError::InvalidRange(self.origin, t));
        }
        let panels = self.nodes.len() - 1;
        let idx = ((dist / span * panels as f64).floor() as usize).min(panels);
        // step back if rounding put us past t
        let idx = if idx > 0 && ((forward && self.nodes[idx] > t) || (!forward && self.nodes[idx] < t)) {
            idx - 1
        } else {
            idx
        };
        let rest = self.segment(self.nodes[idx], t)?;
        Ok(QuadResult {
            value: self.values[idx] + rest.value,
            error_estimate: self.table_error + rest.error_estimate,
            evaluations: rest.evaluations,
        })
    }

    pub fn total(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn table_error(&self) -> f64 {
        self.table_error
    }
}
