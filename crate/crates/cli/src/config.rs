use serde::{Deserialize, Serialize};

use crate::HarnessError;

/// Pools and ranges from which random instances are drawn.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceConfig {
    pub function_pool: Vec<String>,
    pub weight_pool: Vec<String>,
    /// Range for the left end a.
    pub a_range: [f64; 2],
    /// Range for the length b − a.
    pub length_range: [f64; 2],
    pub alpha_range: [f64; 2],
    pub q_range: [f64; 2],
    pub seed: u64,
}

impl Default for InstanceConfig {
    fn default() -> Self {
        InstanceConfig {
            function_pool: [
                "exp",
                "pow:2",
                "pow:3",
                "quad:1,0,0",
                "maxaffine:(-1,2),(0.5,-1)",
                "abslin:1,2",
            ]
            .map(String::from)
            .to_vec(),
            weight_pool: ["one", "sym:bump:2", "sym:cosine:1", "sym:poly:2,1"]
                .map(String::from)
                .to_vec(),
            a_range: [0.0, 2.0],
            length_range: [0.5, 3.0],
            alpha_range: [0.2, 3.0],
            q_range: [1.2, 4.0],
            seed: 0,
        }
    }
}

impl InstanceConfig {
    pub fn with_seed(self, seed: u64) -> Self {
        InstanceConfig { seed, ..self }
    }

    /// Pin α to a single value.
    pub fn with_alpha(self, alpha: f64) -> Self {
        InstanceConfig {
            alpha_range: [alpha, alpha],
            ..self
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |msg: String| Err(HarnessError::Config(msg));
        if self.function_pool.is_empty() {
            return bad("function pool is empty".into());
        }
        if self.weight_pool.is_empty() {
            return bad("weight pool is empty".into());
        }
        for (name, [lo, hi]) in [
            ("a_range", self.a_range),
            ("length_range", self.length_range),
            ("alpha_range", self.alpha_range),
            ("q_range", self.q_range),
        ] {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return bad(format!("{name} [{lo}, {hi}] is not an ordered finite range"));
            }
        }
        if self.length_range[0] <= 0.0 {
            return bad("length_range must be positive".into());
        }
        if self.alpha_range[0] <= 0.0 {
            return bad("alpha_range must be positive".into());
        }
        if self.q_range[0] <= 1.0 {
            return bad("q_range must lie above 1".into());
        }
        Ok(())
    }
}
