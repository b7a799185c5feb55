//! Test functions f (with exact derivatives and convexity claims), weights g,
//! and the grid checks that validate them on a concrete interval.
//!
//! Functions and weights are built from a small textual mini-language:
//!
//! ```text
//! function := "exp" [":" k ":" c] | "pow:" p | "quad:" c2 "," c1 "," c0
//!           | "maxaffine:" "(" m "," b ")" {"," "(" m "," b ")"} | "abslin:" c ["," s]
//! weight   := "one" | "sym:poly:" p "," c | "sym:bump:" k | "sym:cosine:" k | "asym:lin:" m "," b
//! ```

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("cannot parse {what} spec {spec:?}: {reason}")]
    Parse {
        what: &'static str,
        spec: String,
        reason: String,
    },
    #[error("invalid interval [{0}, {1}]")]
    Interval(f64, f64),
    #[error("evaluation produced a non-finite value at x = {0}")]
    Evaluation(f64),
    #[error("grid check needs at least {min} points, got {got}")]
    GridSize { min: usize, got: usize },
    #[error("{0}")]
    Hypothesis(String),
}

/// The closed interval [a, b] with a < b.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "(f64, f64)", into = "(f64, f64)")]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self, ModelError> {
        if a.is_finite() && b.is_finite() && a < b {
            Ok(Interval { a, b })
        } else {
            Err(ModelError::Interval(a, b))
        }
    }

    #[inline]
    pub fn a(&self) -> f64 {
        self.a
    }

    #[inline]
    pub fn b(&self) -> f64 {
        self.b
    }

    #[inline]
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.a && x <= self.b
    }

    /// `n` equally spaced points including both ends.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        linspace(self.a, self.b, n)
    }
}

impl TryFrom<(f64, f64)> for Interval {
    type Error = ModelError;

    fn try_from((a, b): (f64, f64)) -> Result<Self, Self::Error> {
        Interval::new(a, b)
    }
}

impl From<Interval> for (f64, f64) {
    fn from(iv: Interval) -> Self {
        (iv.a, iv.b)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.a, self.b)
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.5 * (lo + hi)],
        _ => {
            let step = (hi - lo) / (n - 1) as f64;
            (0..n)
                .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
                .collect()
        }
    }
}

/// A convexity property a theorem may require of f.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Claim {
    /// f is convex.
    Convex,
    /// |f′| is convex.
    AbsDerivativeConvex,
    /// |f′|^q is convex for the given q.
    AbsDerivativePowConvex(f64),
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Claim::Convex => write!(f, "f convex"),
            Claim::AbsDerivativeConvex => write!(f, "|f'| convex"),
            Claim::AbsDerivativePowConvex(q) => write!(f, "|f'|^{q} convex"),
        }
    }
}

/// Convexity properties declared by a function family.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Claims {
    pub convex: bool,
    pub abs_derivative_convex: bool,
    /// |f′|^q is convex for every q at or above this threshold.
    pub abs_derivative_pow_min_q: Option<f64>,
}

impl Claims {
    const ALL: Claims = Claims {
        convex: true,
        abs_derivative_convex: true,
        abs_derivative_pow_min_q: Some(1.0),
    };

    pub fn declares(&self, claim: Claim) -> bool {
        match claim {
            Claim::Convex => self.convex,
            Claim::AbsDerivativeConvex => self.abs_derivative_convex,
            Claim::AbsDerivativePowConvex(q) => self.abs_derivative_pow_min_q.is_some_and(|q0| q >= q0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Family {
    Exp { k: f64, c: f64 },
    Pow { p: f64 },
    Quad { c2: f64, c1: f64, c0: f64 },
    MaxAffine { pieces: Vec<(f64, f64)>, kinks: Vec<f64> },
    AbsLin { c: f64, s: f64 },
}

/// An evaluable test function with its exact derivative.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionModel {
    spec: String,
    family: Family,
    sign: f64,
    claims: Claims,
}

impl FunctionModel {
    pub fn spec(&self) -> &str {
        &self.spec
    }

    /// Declared claims; a negated model declares none.
    pub fn claims(&self) -> Claims {
        if self.is_negated() {
            Claims::default()
        } else {
            self.claims
        }
    }

    /// Whether this model is the negation of a parsed spec.
    pub fn is_negated(&self) -> bool {
        self.sign < 0.0
    }

    /// −f. Used for negative controls.
    pub fn negated(&self) -> FunctionModel {
        FunctionModel {
            sign: -self.sign,
            ..self.clone()
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let v = match &self.family {
            Family::Exp { k, c } => c * (k * x).exp(),
            Family::Pow { p } => x.powf(*p),
            Family::Quad { c2, c1, c0 } => (c2 * x + c1) * x + c0,
            Family::MaxAffine { pieces, .. } => pieces
                .iter()
                .map(|(m, b)| m * x + b)
                .fold(f64::NEG_INFINITY, f64::max),
            Family::AbsLin { c, s } => c * (x - s).abs(),
        };
        self.sign * v
    }

    /// f′(x); at kinks the right-hand slope.
    pub fn derivative(&self, x: f64) -> f64 {
        self.slope(x, true)
    }

    /// f′(x); at kinks the left-hand slope.
    pub fn derivative_left(&self, x: f64) -> f64 {
        self.slope(x, false)
    }

    fn slope(&self, x: f64, right: bool) -> f64 {
        let v = match &self.family {
            Family::Exp { k, c } => c * k * (k * x).exp(),
            Family::Pow { p } => {
                if *p == 1.0 {
                    1.0
                } else {
                    p * x.powf(p - 1.0)
                }
            }
            Family::Quad { c2, c1, .. } => 2.0 * c2 * x + c1,
            Family::MaxAffine { pieces, .. } => {
                let top = pieces
                    .iter()
                    .map(|(m, b)| m * x + b)
                    .fold(f64::NEG_INFINITY, f64::max);
                let tie = 4.0 * f64::EPSILON * (1.0 + top.abs());
                let active = pieces.iter().filter(|(m, b)| m * x + b >= top - tie).map(|(m, _)| *m);
                if right {
                    active.fold(f64::NEG_INFINITY, f64::max)
                } else {
                    active.fold(f64::INFINITY, f64::min)
                }
            }
            Family::AbsLin { c, s } => {
                if x > *s || (right && x == *s) {
                    *c
                } else {
                    -c
                }
            }
        };
        self.sign * v
    }

    /// Abscissas where f′ jumps.
    pub fn kinks(&self) -> &[f64] {
        match &self.family {
            Family::MaxAffine { kinks, .. } => kinks,
            Family::AbsLin { s, .. } => std::slice::from_ref(s),
            _ => &[],
        }
    }

    /// Smallest x at which the family is defined, if bounded below.
    pub fn domain_lower_bound(&self) -> Option<f64> {
        match self.family {
            Family::Pow { p } if p.fract() != 0.0 || p > 1.0 => Some(0.0),
            _ => None,
        }
    }

    pub fn check_domain(&self, iv: &Interval) -> Result<(), ModelError> {
        match self.domain_lower_bound() {
            Some(lo) if iv.a() < lo => Err(ModelError::Hypothesis(format!(
                "{} requires a >= {lo}, got interval {iv}",
                self.spec
            ))),
            _ => Ok(()),
        }
    }

    /// The function whose convexity a claim asserts.
    pub fn claim_target(&self, claim: Claim) -> impl Fn(f64) -> f64 + '_ {
        move |x| match claim {
            Claim::Convex => self.eval(x),
            Claim::AbsDerivativeConvex => self.derivative(x).abs(),
            Claim::AbsDerivativePowConvex(q) => self.derivative(x).abs().powf(q),
        }
    }

    /// Check that `claim` is declared and survives the midpoint-convexity grid
    /// test on `iv`. Returns the observed violation.
    pub fn validate_claim(&self, claim: Claim, iv: &Interval) -> Result<f64, ModelError> {
        self.check_domain(iv)?;
        if !self.claims().declares(claim) {
            return Err(ModelError::Hypothesis(format!("{} does not claim {claim}", self.describe())));
        }
        let h = self.claim_target(claim);
        let violation = check_convexity(&h, iv, CONVEXITY_GRID)?;
        let scale = iv.grid(CONVEXITY_GRID).into_iter().map(|x| h(x).abs()).fold(0.0, f64::max);
        if violation <= CONVEXITY_RTOL * (1.0 + scale) {
            Ok(violation)
        } else {
            Err(ModelError::Hypothesis(format!(
                "{} fails {claim} on {iv}: violation {violation:e}",
                self.describe()
            )))
        }
    }

    /// Human-readable spec including negation.
    pub fn describe(&self) -> String {
        if self.is_negated() {
            format!("-({})", self.spec)
        } else {
            self.spec.clone()
        }
    }
}

/// Grid size used when validating convexity claims.
pub const CONVEXITY_GRID: usize = 64;
/// Relative tolerance of the convexity grid test.
pub const CONVEXITY_RTOL: f64 = 1e-12;

fn parse_error(what: &'static str, spec: &str, reason: impl Into<String>) -> ModelError {
    ModelError::Parse {
        what,
        spec: spec.to_string(),
        reason: reason.into(),
    }
}

fn parse_reals(what: &'static str, spec: &str, body: &str, sep: char) -> Result<Vec<f64>, ModelError> {
    body.split(sep)
        .map(|tok| {
            let tok = tok.trim();
            tok.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| parse_error(what, spec, format!("bad number {tok:?}")))
        })
        .collect()
}

fn exact_count(what: &'static str, spec: &str, values: Vec<f64>, n: usize) -> Result<Vec<f64>, ModelError> {
    if values.len() == n {
        Ok(values)
    } else {
        Err(parse_error(what, spec, format!("expected {n} parameters, got {}", values.len())))
    }
}

/// Parse a function spec (see the module docs for the grammar).
pub fn parse_function(spec: &str) -> Result<FunctionModel, ModelError> {
    const WHAT: &str = "function";
    let spec = spec.trim();
    let (head, body) = match spec.split_once(':') {
        Some((h, b)) => (h, Some(b)),
        None => (spec, None),
    };
    let (family, claims) = match (head, body) {
        ("exp", None) => (Family::Exp { k: 1.0, c: 1.0 }, Claims::ALL),
        ("exp", Some(body)) => {
            let v = exact_count(WHAT, spec, parse_reals(WHAT, spec, body, ':')?, 2)?;
            let (k, c) = (v[0], v[1]);
            if k <= 0.0 || c <= 0.0 {
                return Err(parse_error(WHAT, spec, "exp needs k > 0 and c > 0"));
            }
            (Family::Exp { k, c }, Claims::ALL)
        }
        ("pow", Some(body)) => {
            let p = exact_count(WHAT, spec, parse_reals(WHAT, spec, body, ',')?, 1)?[0];
            if p < 1.0 {
                return Err(parse_error(WHAT, spec, "pow exponent must be >= 1"));
            }
            let claims = if p == 1.0 {
                Claims::ALL
            } else {
                Claims {
                    convex: true,
                    abs_derivative_convex: p >= 2.0,
                    // (p x^{p-1})^q is convex on [0, ∞) once q(p-1) >= 1
                    abs_derivative_pow_min_q: Some((1.0 / (p - 1.0)).max(1.0)),
                }
            };
            (Family::Pow { p }, claims)
        }
        ("quad", Some(body)) => {
            let v = exact_count(WHAT, spec, parse_reals(WHAT, spec, body, ',')?, 3)?;
            if v[0] < 0.0 {
                return Err(parse_error(WHAT, spec, "quad needs c2 >= 0"));
            }
            (
                Family::Quad {
                    c2: v[0],
                    c1: v[1],
                    c0: v[2],
                },
                Claims::ALL,
            )
        }
        ("maxaffine", Some(body)) => {
            let pieces = parse_pieces(spec, body)?;
            let kinks = envelope_kinks(&pieces);
            let first = pieces[0].0.abs();
            let flat_abs = pieces.iter().all(|(m, _)| m.abs() == first);
            let claims = Claims {
                convex: true,
                abs_derivative_convex: flat_abs,
                abs_derivative_pow_min_q: flat_abs.then_some(1.0),
            };
            (Family::MaxAffine { pieces, kinks }, claims)
        }
        ("abslin", Some(body)) => {
            let v = parse_reals(WHAT, spec, body, ',')?;
            let (c, s) = match v.as_slice() {
                [c] => (*c, 0.0),
                [c, s] => (*c, *s),
                _ => return Err(parse_error(WHAT, spec, "abslin takes c or c,s")),
            };
            if c < 0.0 {
                return Err(parse_error(WHAT, spec, "abslin needs c >= 0"));
            }
            (Family::AbsLin { c, s }, Claims::ALL)
        }
        _ => return Err(parse_error(WHAT, spec, "unknown function family")),
    };
    Ok(FunctionModel {
        spec: spec.to_string(),
        family,
        sign: 1.0,
        claims,
    })
}

fn parse_pieces(spec: &str, body: &str) -> Result<Vec<(f64, f64)>, ModelError> {
    const WHAT: &str = "function";
    let mut pieces = Vec::new();
    let mut rest = body.trim();
    while !rest.is_empty() {
        let inner_start = rest
            .strip_prefix('(')
            .ok_or_else(|| parse_error(WHAT, spec, "expected '('"))?;
        let close = inner_start
            .find(')')
            .ok_or_else(|| parse_error(WHAT, spec, "missing ')'"))?;
        let v = exact_count(WHAT, spec, parse_reals(WHAT, spec, &inner_start[..close], ',')?, 2)?;
        pieces.push((v[0], v[1]));
        rest = inner_start[close + 1..].trim_start();
        if let Some(after) = rest.strip_prefix(',') {
            rest = after.trim_start();
            if rest.is_empty() {
                return Err(parse_error(WHAT, spec, "trailing ','"));
            }
        } else if !rest.is_empty() {
            return Err(parse_error(WHAT, spec, "expected ',' between pieces"));
        }
    }
    if pieces.is_empty() {
        return Err(parse_error(WHAT, spec, "maxaffine needs at least one piece"));
    }
    Ok(pieces)
}

/// Abscissas where the upper envelope of the affine pieces switches piece.
fn envelope_kinks(pieces: &[(f64, f64)]) -> Vec<f64> {
    let top = |x: f64| pieces.iter().map(|(m, b)| m * x + b).fold(f64::NEG_INFINITY, f64::max);
    let mut kinks = Vec::new();
    for (i, &(m1, b1)) in pieces.iter().enumerate() {
        for &(m2, b2) in &pieces[i + 1..] {
            if m1 == m2 {
                continue;
            }
            let x = (b2 - b1) / (m1 - m2);
            let v = m1 * x + b1;
            if v >= top(x) - 1e-12 * (1.0 + v.abs()) {
                kinks.push(x);
            }
        }
    }
    kinks.sort_by(f64::total_cmp);
    kinks.dedup_by(|x, y| (*x - *y).abs() <= 1e-12 * (1.0 + x.abs()));
    kinks
}

#[derive(Debug, Clone, PartialEq)]
enum WeightFamily {
    One,
    SymPoly { p: f64, c: f64 },
    SymBump { k: f64 },
    SymCosine { k: f64 },
    AsymLin { m: f64, b: f64 },
}

/// A continuous weight g on an interval.
///
/// `sym:*` weights are defined as h(|x − midpoint|), so g(a + b − x) = g(x)
/// holds exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightModel {
    spec: String,
    family: WeightFamily,
    interval: Interval,
    symmetric_by_construction: bool,
    nonnegative_by_construction: bool,
}

impl WeightModel {
    pub fn spec(&self) -> &str {
        &self.spec
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn symmetric_by_construction(&self) -> bool {
        self.symmetric_by_construction
    }

    pub fn nonnegative_by_construction(&self) -> bool {
        self.nonnegative_by_construction
    }

    pub fn is_one(&self) -> bool {
        self.family == WeightFamily::One
    }

    pub fn eval(&self, x: f64) -> f64 {
        let d = (x - self.interval.midpoint()).abs();
        match self.family {
            WeightFamily::One => 1.0,
            WeightFamily::SymPoly { p, c } => d.powf(p) + c,
            WeightFamily::SymBump { k } => (-k * d * d).exp(),
            WeightFamily::SymCosine { k } => 1.0 + 0.5 * (2.0 * PI * k * d / self.interval.length()).cos(),
            WeightFamily::AsymLin { m, b } => m * x + b,
        }
    }

    /// Points where g may fail to be smooth.
    pub fn kinks(&self) -> Vec<f64> {
        match self.family {
            WeightFamily::SymPoly { p, .. } if p.fract() != 0.0 || (p as i64) % 2 == 1 => {
                vec![self.interval.midpoint()]
            }
            _ => Vec::new(),
        }
    }
}

/// Parse a weight spec relative to the interval `iv` (symmetric weights are
/// centred at its midpoint).
pub fn parse_weight(spec: &str, iv: Interval) -> Result<WeightModel, ModelError> {
    const WHAT: &str = "weight";
    let spec = spec.trim();
    let (family, symmetric, nonneg) = if spec == "one" {
        (WeightFamily::One, true, true)
    } else if let Some(body) = spec.strip_prefix("sym:poly:") {
        let v = exact_count(WHAT, spec, parse_reals(WHAT, spec, body, ',')?, 2)?;
        if v[0] <= 0.0 {
            return Err(parse_error(WHAT, spec, "sym:poly needs p > 0"));
        }
        (WeightFamily::SymPoly { p: v[0], c: v[1] }, true, v[1] >= 0.0)
    } else if let Some(body) = spec.strip_prefix("sym:bump:") {
        let k = exact_count(WHAT, spec, parse_reals(WHAT, spec, body, ',')?, 1)?[0];
        if k < 0.0 {
            return Err(parse_error(WHAT, spec, "sym:bump needs k >= 0"));
        }
        (WeightFamily::SymBump { k }, true, true)
    } else if let Some(body) = spec.strip_prefix("sym:cosine:") {
        let k = exact_count(WHAT, spec, parse_reals(WHAT, spec, body, ',')?, 1)?[0];
        (WeightFamily::SymCosine { k }, true, true)
    } else if let Some(body) = spec.strip_prefix("asym:lin:") {
        let v = exact_count(WHAT, spec, parse_reals(WHAT, spec, body, ',')?, 2)?;
        (WeightFamily::AsymLin { m: v[0], b: v[1] }, false, false)
    } else {
        return Err(parse_error(WHAT, spec, "unknown weight family"));
    };
    Ok(WeightModel {
        spec: spec.to_string(),
        family,
        interval: iv,
        symmetric_by_construction: symmetric,
        nonnegative_by_construction: nonneg,
    })
}

/// Largest midpoint-convexity gap h((x+y)/2) − (h(x)+h(y))/2 over all pairs of
/// an `n`-point grid on `iv`. Non-positive (up to rounding) for convex h.
pub fn check_convexity<H: Fn(f64) -> f64>(h: H, iv: &Interval, n: usize) -> Result<f64, ModelError> {
    if n < 3 {
        return Err(ModelError::GridSize { min: 3, got: n });
    }
    let xs = iv.grid(n);
    let vals = xs
        .iter()
        .map(|&x| finite(h(x), x))
        .collect::<Result<Vec<_>, _>>()?;
    let mut worst = f64::NEG_INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            let mid = 0.5 * (xs[i] + xs[j]);
            let gap = finite(h(mid), mid)? - 0.5 * (vals[i] + vals[j]);
            worst = worst.max(gap);
        }
    }
    Ok(worst)
}

/// max over an `n`-point grid of |g(a + b − x) − g(x)|.
pub fn check_symmetry(g: &WeightModel, iv: &Interval, n: usize) -> Result<f64, ModelError> {
    if n < 1 {
        return Err(ModelError::GridSize { min: 1, got: n });
    }
    let mut worst: f64 = 0.0;
    for x in iv.grid(n) {
        let mirror = iv.a() + iv.b() - x;
        let d = finite(g.eval(mirror), mirror)? - finite(g.eval(x), x)?;
        worst = worst.max(d.abs());
    }
    Ok(worst)
}

/// Smallest value of g on an `n`-point grid.
pub fn grid_minimum(g: &WeightModel, iv: &Interval, n: usize) -> Result<f64, ModelError> {
    iv.grid(n.max(2))
        .into_iter()
        .map(|x| finite(g.eval(x), x))
        .try_fold(f64::INFINITY, |m, v| v.map(|v| m.min(v)))
}

fn finite(v: f64, x: f64) -> Result<f64, ModelError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(ModelError::Evaluation(x))
    }
}

/// Estimate of sup |g| on a subinterval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupNorm {
    pub value: f64,
    pub argmax_estimate: f64,
}

/// Default number of scan points for [`sup_norm`].
pub const SUP_NORM_SCAN: usize = 1024;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// sup |g| on [lo, hi]: a dense `n`-point scan, then golden-section refinement
/// inside the bracket around the best sample down to width 1e-12·(hi − lo).
pub fn sup_norm(g: &WeightModel, lo: f64, hi: f64, n: usize) -> Result<SupNorm, ModelError> {
    if n < 2 {
        return Err(ModelError::GridSize { min: 2, got: n });
    }
    if lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) {
        return Err(ModelError::Interval(lo, hi));
    }
    let abs_g = |x: f64| finite(g.eval(x), x).map(f64::abs);
    let xs = linspace(lo, hi, n);
    let mut best = 0;
    let mut best_val = f64::NEG_INFINITY;
    for (i, &x) in xs.iter().enumerate() {
        let v = abs_g(x)?;
        if v > best_val {
            best_val = v;
            best = i;
        }
    }
    let mut left = xs[best.saturating_sub(1)];
    let mut right = xs[(best + 1).min(n - 1)];
    let width = 1e-12 * (hi - lo);
    let mut c = right - INV_PHI * (right - left);
    let mut d = left + INV_PHI * (right - left);
    let mut fc = abs_g(c)?;
    let mut fd = abs_g(d)?;
    let (mut arg, mut val) = (xs[best], best_val);
    while right - left > width {
        if fc >= fd {
            right = d;
            d = c;
            fd = fc;
            c = right - INV_PHI * (right - left);
            fc = abs_g(c)?;
        } else {
            left = c;
            c = d;
            fc = fd;
            d = left + INV_PHI * (right - left);
            fd = abs_g(d)?;
        }
        for (x, v) in [(c, fc), (d, fd)] {
            if v > val {
                val = v;
                arg = x;
            }
        }
    }
    Ok(SupNorm {
        value: val,
        argmax_estimate: arg,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit() -> Interval {
        Interval::new(0.0, 1.0).unwrap()
    }

    #[test]
    fn interval_invariants() {
        let iv = Interval::new(-1.0, 3.0).unwrap();
        assert_eq!(iv.midpoint() - iv.a(), iv.b() - iv.midpoint());
        assert!(Interval::new(1.0, 1.0).is_err());
        assert!(Interval::new(2.0, 1.0).is_err());
        assert!(Interval::new(f64::NAN, 1.0).is_err());
        assert_eq!(iv.grid(5), vec![-1.0, 0.0, 1.0, 2.0, 3.0]);
    }

    #[test]
    fn parse_examples() {
        let f = parse_function("exp").unwrap();
        assert_eq!(f.eval(0.3), 0.3f64.exp());
        assert_eq!(f.derivative(0.3), 0.3f64.exp());
        let f = parse_function("pow:2").unwrap();
        assert_eq!(f.eval(3.0), 9.0);
        assert_eq!(f.derivative(3.0), 6.0);
        let f = parse_function("maxaffine:(-1,0.5),(1,-0.5)").unwrap();
        assert_eq!(f.eval(0.0), 0.5);
        assert_eq!(f.eval(1.0), 0.5);
        assert_eq!(f.derivative(0.2), -1.0);
        assert_eq!(f.derivative(0.5), 1.0);
        assert_eq!(f.derivative(0.8), 1.0);
        assert_eq!(f.kinks(), &[0.5]);
        let f = parse_function("exp:2:3").unwrap();
        assert_relative_eq!(f.derivative(0.5), 6.0 * 1f64.exp());
        let f = parse_function("abslin:2,1").unwrap();
        assert_eq!(f.eval(0.0), 2.0);
        assert_eq!(f.derivative(1.0), 2.0);
        assert_eq!(f.derivative(0.5), -2.0);
        let f = parse_function("quad:1,-2,3").unwrap();
        assert_eq!(f.eval(2.0), 3.0);
        assert_eq!(f.derivative(2.0), 2.0);
    }

    #[test]
    fn parse_rejections() {
        for bad in [
            "", "log", "pow:0.5", "pow:", "pow:2,3", "quad:-1,0,0", "quad:1,2", "exp:0:1", "exp:1",
            "maxaffine:", "maxaffine:(1,2", "maxaffine:(1,2),", "maxaffine:(1,2)(3,4)", "abslin:-1",
            "abslin:1,2,3", "pow:nan", "pow:inf",
        ] {
            assert!(parse_function(bad).is_err(), "{bad:?} should not parse");
        }
        for bad in ["", "two", "sym:poly:1", "sym:poly:0,1", "sym:bump:-1", "asym:lin:1", "sym:cosine:x"] {
            assert!(parse_weight(bad, unit()).is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn family_claims() {
        let c = parse_function("pow:1.5").unwrap().claims();
        assert!(c.convex && !c.abs_derivative_convex);
        assert!(c.declares(Claim::AbsDerivativePowConvex(2.0)));
        assert!(!c.declares(Claim::AbsDerivativePowConvex(1.5)));
        let c = parse_function("maxaffine:(-1,0.5),(0.5,-1)").unwrap().claims();
        assert!(c.convex && !c.abs_derivative_convex);
        let c = parse_function("maxaffine:(-1,1),(1,-3)").unwrap().claims();
        assert!(c.abs_derivative_convex);
    }

    #[test]
    fn claims_validate_on_interval() {
        let iv = Interval::new(0.0, 4.0).unwrap();
        for spec in ["exp", "pow:2", "pow:3", "quad:1,0,0", "maxaffine:(-1,2),(0.5,-1)", "abslin:1,2"] {
            let f = parse_function(spec).unwrap();
            f.validate_claim(Claim::Convex, &iv).unwrap();
        }
        let f = parse_function("pow:2").unwrap();
        assert!(f.validate_claim(Claim::Convex, &Interval::new(-1.0, 1.0).unwrap()).is_err());
        let g = parse_function("maxaffine:(-1,2),(0.5,-1)").unwrap();
        assert!(g.validate_claim(Claim::AbsDerivativeConvex, &iv).is_err());
        let neg = parse_function("quad:1,0,0").unwrap().negated();
        assert!(neg.validate_claim(Claim::Convex, &iv).is_err());
        assert_eq!(neg.eval(2.0), -4.0);
        assert_eq!(neg.negated().claims(), parse_function("quad:1,0,0").unwrap().claims());
    }

    #[test]
    fn convexity_grid_examples() {
        let iv = unit();
        assert!(check_convexity(|x| x * x, &iv, 64).unwrap() <= 1e-15);
        assert!(check_convexity(f64::exp, &iv, 64).unwrap() <= 1e-15);
        // for -x² the gap is (x−y)²/4, largest for the endpoint pair
        let gap = check_convexity(|x| -x * x, &iv, 64).unwrap();
        assert_relative_eq!(gap, 0.25, max_relative = 1e-12);
        assert!(check_convexity(|x| x, &iv, 2).is_err());
        assert!(matches!(
            check_convexity(|x| 1.0 / (x - 0.5), &iv, 3),
            Err(ModelError::Evaluation(_))
        ));
    }

    #[test]
    fn weight_examples() {
        let iv = unit();
        let one = parse_weight("one", iv).unwrap();
        assert!(one.symmetric_by_construction() && one.nonnegative_by_construction());
        assert_eq!(check_symmetry(&one, &iv, 33).unwrap(), 0.0);

        let poly = parse_weight("sym:poly:1,0", iv).unwrap();
        assert_relative_eq!(poly.eval(0.2), 0.3, max_relative = 1e-15);
        assert_relative_eq!(poly.eval(0.8), poly.eval(0.2), max_relative = 1e-15);

        let bump = parse_weight("sym:bump:2", iv).unwrap();
        assert_relative_eq!(bump.eval(0.1), (-2.0f64 * 0.16).exp());
        assert!(check_symmetry(&bump, &iv, 101).unwrap() <= 2e-15);

        let lin = parse_weight("asym:lin:1,0", iv).unwrap();
        assert!(!lin.symmetric_by_construction());
        assert_eq!(check_symmetry(&lin, &iv, 11).unwrap(), 1.0);
        assert!(check_symmetry(&lin, &iv, 0).is_err());

        let cosine = parse_weight("sym:cosine:1", Interval::new(2.0, 5.0).unwrap()).unwrap();
        assert!(grid_minimum(&cosine, &cosine.interval(), 101).unwrap() >= 0.5 - 1e-15);
        assert!(!parse_weight("sym:poly:2,-1", iv).unwrap().nonnegative_by_construction());
    }

    #[test]
    fn sup_norm_examples() {
        let iv = unit();
        let one = parse_weight("one", iv).unwrap();
        assert_eq!(sup_norm(&one, 0.2, 0.7, 16).unwrap().value, 1.0);
        let bump = parse_weight("sym:bump:2", iv).unwrap();
        let s = sup_norm(&bump, 0.0, 1.0, SUP_NORM_SCAN).unwrap();
        assert_relative_eq!(s.value, 1.0, max_relative = 1e-15);
        assert!((s.argmax_estimate - 0.5).abs() < 1e-6);
        // off-grid maximum: n = 4 puts no sample at the peak
        let s = sup_norm(&bump, 0.0, 1.0, 4).unwrap();
        assert_relative_eq!(s.value, 1.0, max_relative = 1e-15);
        let poly = parse_weight("sym:poly:1,0", iv).unwrap();
        let s = sup_norm(&poly, 0.0, 0.5, SUP_NORM_SCAN).unwrap();
        assert_eq!(s.value, 0.5);
        assert_eq!(s.argmax_estimate, 0.0);
        assert!(sup_norm(&poly, 0.5, 0.5, 8).is_err());
        assert!(sup_norm(&poly, 0.0, 0.5, 1).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn weight_spec() -> impl Strategy<Value = String> {
            prop_oneof![
                Just("one".to_string()),
                (0.5f64..3.0, 0.0f64..2.0).prop_map(|(p, c)| format!("sym:poly:{p},{c}")),
                (0.0f64..5.0).prop_map(|k| format!("sym:bump:{k}")),
                (0.0f64..3.0).prop_map(|k| format!("sym:cosine:{k}")),
            ]
        }

        fn function_spec() -> impl Strategy<Value = String> {
            prop_oneof![
                Just("exp".to_string()),
                (0.2f64..1.5, 0.5f64..2.0).prop_map(|(k, c)| format!("exp:{k}:{c}")),
                (1.0f64..4.0).prop_map(|p| format!("pow:{p}")),
                (0.0f64..2.0, -2.0f64..2.0, -1.0f64..1.0).prop_map(|(a, b, c)| format!("quad:{a},{b},{c}")),
                (-2.0f64..0.0, 0.0f64..2.0, -1.0f64..1.0)
                    .prop_map(|(m1, m2, b)| format!("maxaffine:({m1},{b}),({m2},0)")),
                (0.0f64..2.0, 0.0f64..3.0).prop_map(|(c, s)| format!("abslin:{c},{s}")),
            ]
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn symmetric_weights_are_exact(spec in weight_spec(), a in -2.0f64..2.0, len in 0.3f64..3.0) {
                let iv = Interval::new(a, a + len).unwrap();
                let g = parse_weight(&spec, iv).unwrap();
                let s = check_symmetry(&g, &iv, 257).unwrap();
                let norm = sup_norm(&g, iv.a(), iv.b(), 64).unwrap().value;
                prop_assert!(s <= 1e-15 * (1.0 + norm), "asymmetry {s}");
            }

            #[test]
            fn sup_norm_monotone(spec in weight_spec(), a in -2.0f64..2.0, len in 0.3f64..3.0,
                                 f1 in 0.0f64..0.45, f2 in 0.55f64..1.0) {
                let iv = Interval::new(a, a + len).unwrap();
                let g = parse_weight(&spec, iv).unwrap();
                let inner = sup_norm(&g, a + f1 * len, a + f2 * len, SUP_NORM_SCAN).unwrap();
                let outer = sup_norm(&g, iv.a(), iv.b(), SUP_NORM_SCAN).unwrap();
                prop_assert!(inner.value <= outer.value + 1e-9 * (1.0 + outer.value));
                // dominates every sample
                for x in linspace(a + f1 * len, a + f2 * len, 50) {
                    prop_assert!(inner.value >= g.eval(x).abs());
                }
            }

            #[test]
            fn derivative_consistency(spec in function_spec(), a in 0.0f64..2.0, len in 0.5f64..3.0) {
                let f = parse_function(&spec).unwrap();
                let iv = Interval::new(a, a + len).unwrap();
                let h = 1e-6 * len;
                for x in iv.grid(33) {
                    if f.domain_lower_bound().is_some_and(|lo| x - h < lo) {
                        continue;
                    }
                    if f.kinks().iter().any(|k| (x - k).abs() <= 2.0 * h) {
                        continue;
                    }
                    let fd = (f.eval(x + h) - f.eval(x - h)) / (2.0 * h);
                    let d = f.derivative(x);
                    prop_assert!((d - fd).abs() <= 1e-5 * (1.0 + d.abs()), "{spec} at {x}: {d} vs {fd}");
                }
            }

            #[test]
            fn declared_claims_hold(spec in function_spec(), a in 0.0f64..2.0, len in 0.5f64..3.0, q in 1.0f64..4.0) {
                let f = parse_function(&spec).unwrap();
                let iv = Interval::new(a, a + len).unwrap();
                for claim in [Claim::Convex, Claim::AbsDerivativeConvex, Claim::AbsDerivativePowConvex(q)] {
                    if f.claims().declares(claim) {
                        prop_assert!(f.validate_claim(claim, &iv).is_ok(), "{spec} {claim} on {iv}");
                    }
                }
            }
        }
    }
}
