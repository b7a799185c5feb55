use fracineq_core::models::{check_symmetry, grid_minimum};
use fracineq_core::{parse_function, parse_weight, Claim, FracOrder, FunctionModel, InstanceRecord, Interval, WeightModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{HarnessError, InstanceConfig};

/// Resampling attempts before generation gives up.
pub const MAX_ATTEMPTS: usize = 64;

/// Hypotheses an instance must satisfy before it is handed to a suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Requirements {
    pub convex: bool,
    /// |f′| convex and |f′|^q convex for the sampled q.
    pub derivative_convex: bool,
    pub symmetric_weight: bool,
}

impl Requirements {
    pub const NONE: Requirements = Requirements {
        convex: false,
        derivative_convex: false,
        symmetric_weight: false,
    };
}

/// One sampled instance.
#[derive(Debug, Clone)]
pub struct Instance {
    pub index: u64,
    pub f: FunctionModel,
    pub g: WeightModel,
    pub interval: Interval,
    pub alpha: FracOrder,
    pub q: f64,
    pub p: f64,
    /// Evaluation point for the weighted identity: cycles through a, b, the
    /// midpoint and a uniform draw.
    pub x: f64,
}

impl Instance {
    pub fn record(&self, seed: u64) -> InstanceRecord {
        InstanceRecord {
            f: self.f.spec().to_string(),
            negate_f: self.f.is_negated(),
            g: Some(self.g.spec().to_string()),
            a: self.interval.a(),
            b: self.interval.b(),
            alpha: Some(self.alpha.get()),
            q: Some(self.q),
            p: Some(self.p),
            x: Some(self.x),
            seed: Some(seed),
            index: Some(self.index),
        }
    }
}

fn uniform(rng: &mut ChaCha8Rng, [lo, hi]: [f64; 2]) -> f64 {
    lo + (hi - lo) * rng.gen::<f64>()
}

fn pick<'a>(rng: &mut ChaCha8Rng, pool: &'a [String]) -> &'a str {
    &pool[rng.gen_range(0..pool.len())]
}

/// Instance `index` of the stream selected by `cfg.seed`, with no hypotheses
/// beyond a valid domain and a nonnegative weight.
pub fn gen_instance(cfg: &InstanceConfig, index: u64) -> Result<Instance, HarnessError> {
    gen_instance_with(cfg, index, Requirements::NONE)
}

/// Deterministic in (seed, index, req). Each index owns its own ChaCha8
/// stream, so instances do not depend on evaluation order.
pub fn gen_instance_with(cfg: &InstanceConfig, index: u64, req: Requirements) -> Result<Instance, HarnessError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index);
    let mut last = String::new();
    for _ in 0..MAX_ATTEMPTS {
        match sample(cfg, index, req, &mut rng) {
            Ok(inst) => return Ok(inst),
            Err(reason) => last = reason,
        }
    }
    Err(HarnessError::Generation {
        index,
        attempts: MAX_ATTEMPTS,
        last,
    })
}

fn sample(cfg: &InstanceConfig, index: u64, req: Requirements, rng: &mut ChaCha8Rng) -> Result<Instance, String> {
    let f_spec = pick(rng, &cfg.function_pool).to_string();
    let g_spec = pick(rng, &cfg.weight_pool).to_string();
    let a = uniform(rng, cfg.a_range);
    let b = a + uniform(rng, cfg.length_range);
    let alpha = uniform(rng, cfg.alpha_range);
    let q = uniform(rng, cfg.q_range);
    let u = rng.gen::<f64>();

    let interval = Interval::new(a, b).map_err(|e| e.to_string())?;
    let f = parse_function(&f_spec).map_err(|e| e.to_string())?;
    let g = parse_weight(&g_spec, interval).map_err(|e| e.to_string())?;
    let alpha = FracOrder::new(alpha).map_err(|e| e.to_string())?;
    f.check_domain(&interval).map_err(|e| e.to_string())?;
    if req.convex {
        f.validate_claim(Claim::Convex, &interval).map_err(|e| e.to_string())?;
    }
    if req.derivative_convex {
        f.validate_claim(Claim::AbsDerivativeConvex, &interval)
            .map_err(|e| e.to_string())?;
        f.validate_claim(Claim::AbsDerivativePowConvex(q), &interval)
            .map_err(|e| e.to_string())?;
    }
    let min = grid_minimum(&g, &interval, 257).map_err(|e| e.to_string())?;
    if min < 0.0 {
        return Err(format!("{g_spec} is negative on {interval}"));
    }
    if req.symmetric_weight {
        let asym = check_symmetry(&g, &interval, 257).map_err(|e| e.to_string())?;
        if asym > 1e-12 {
            return Err(format!("{g_spec} is not symmetric on {interval}"));
        }
    }
    let x = match index % 4 {
        0 => a,
        1 => b,
        2 => interval.midpoint(),
        _ => a + (b - a) * u,
    };
    Ok(Instance {
        index,
        f,
        g,
        interval,
        alpha,
        q,
        p: q / (q - 1.0),
        x,
    })
}
