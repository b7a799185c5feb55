use crate::fractional::FracOrder;
use crate::models::{Interval, WeightModel};
use crate::quadrature::{CumulativeIntegral, FirstPanel, QuadConfig, QuadError, QuadResult};

/// Panels per half of the cumulative tables behind [`KernelK`].
const KERNEL_PANELS: usize = 32;

type Density<'a> = Box<dyn Fn(f64) -> f64 + Send + Sync + 'a>;

/// The midpoint kernel
///
/// k(t) = ∫ₐᵗ (s − a)^{α−1} g(s) ds for t ≤ m,
/// k(t) = −∫ₜᵇ (b − s)^{α−1} g(s) ds for t > m.
pub struct KernelK<'a> {
    alpha: FracOrder,
    interval: Interval,
    left: CumulativeIntegral<Density<'a>>,
    right: CumulativeIntegral<Density<'a>>,
}

impl<'a> KernelK<'a> {
    pub fn new(g: &'a WeightModel, alpha: FracOrder, interval: Interval, cfg: &QuadConfig) -> Result<Self, QuadError> {
        let m = interval.midpoint();
        let weighted = FirstPanel::Weighted(alpha.as_pos());
        let left = CumulativeIntegral::new(
            Box::new(move |s| g.eval(s)) as Density<'a>,
            interval.a(),
            m,
            KERNEL_PANELS,
            weighted,
            cfg,
        )?;
        let right = CumulativeIntegral::new(
            Box::new(move |s| g.eval(s)) as Density<'a>,
            interval.b(),
            m,
            KERNEL_PANELS,
            weighted,
            cfg,
        )?;
        Ok(KernelK {
            alpha,
            interval,
            left,
            right,
        })
    }

    pub fn alpha(&self) -> FracOrder {
        self.alpha
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    /// Combined error of the two precomputed tables.
    pub fn table_error(&self) -> f64 {
        self.left.table_error() + self.right.table_error()
    }

    fn eval(&self, t: f64) -> Result<QuadResult, QuadError> {
        if t <= self.interval.midpoint() {
            self.left.eval(t)
        } else {
            self.right.eval(t).map(|r| r.scale(-1.0))
        }
    }
}

/// k(t) with its error estimate. `cfg` only matters for panels evaluated on
/// demand; the tables were built with the configuration given at
/// construction.
pub fn eval_kernel(k: &KernelK<'_>, t: f64, _cfg: &QuadConfig) -> Result<QuadResult, QuadError> {
    if !k.interval.contains(t) {
        return Err(QuadError::InvalidRange(k.interval.a(), t));
    }
    k.eval(t)
}
