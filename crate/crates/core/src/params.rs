//! Constants of the hitting-set pipeline.
//!
//! `ParamSet::paper()` carries the constants of the proofs. They make bucket
//! sizes astronomically large at any feasible input size, so every sampling
//! step degenerates to keeping everything. `ParamSet::desk()` shrinks them to
//! values where the rounding machinery actually halves neighborhoods. The
//! by-construction certificates (potential bounds, rounding inequality,
//! aux-weight bounds) hold for every parameter choice; quality constants are
//! measured and reported.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Paper,
    Desk,
}

/// Sampling rate of the high-probability regime in round `i`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HighGamma {
    /// `1 / (100 (K - i)^2)`
    InverseSquare,
    Constant(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamSet {
    pub mode: Mode,
    /// `K = ceil(k_factor * log2 log2 N)`.
    pub k_factor: f64,
    /// Bucket size exponent: `b = (1/γ)^beta`.
    pub beta: f64,
    /// Low regime: `γ_i = max(gamma0 * gamma_decay^i, gamma0 / log2 N)`.
    pub gamma0: f64,
    pub gamma_decay: f64,
    pub high_gamma: HighGamma,
    /// The high regime runs rounds `0..=K - floor`.
    pub high_floor_hitting: u32,
    pub high_floor_mis: u32,
    /// Minimum number of low-level neighbors for a `u` to enter the low regime.
    /// `None` means the proof value `ceil(10 log2(N)^25)`.
    pub degree_floor: Option<u64>,
    pub bad_bucket_exp: f64,
    pub bad_node_exp: f64,
    pub bad_node_exp_mis: f64,
    /// `+ c_add * ceil(log2 N)^2` slack in the shrinkage checks.
    pub c_add: f64,
    /// Selected MIS nodes with this many selected out-neighbors are dropped.
    pub outdeg_cap: u64,
    /// Required importance fraction for the single-halving contract.
    pub importance_halving: f64,
    /// Required importance fraction for the top-level contract.
    pub importance_target: f64,
}

impl ParamSet {
    pub fn paper() -> Self {
        ParamSet {
            mode: Mode::Paper,
            k_factor: 100.0,
            beta: 6.0,
            gamma0: 1e-7,
            gamma_decay: 0.99,
            high_gamma: HighGamma::InverseSquare,
            high_floor_hitting: 50,
            high_floor_mis: 20,
            degree_floor: None,
            bad_bucket_exp: 0.8,
            bad_node_exp: 0.3,
            bad_node_exp_mis: 0.2,
            c_add: 16.0,
            outdeg_cap: u64::MAX,
            importance_halving: 0.9,
            importance_target: 0.75,
        }
    }

    pub fn desk() -> Self {
        ParamSet {
            mode: Mode::Desk,
            k_factor: 3.0,
            beta: 2.0,
            gamma0: 0.05,
            gamma_decay: 0.99,
            high_gamma: HighGamma::Constant(0.25),
            high_floor_hitting: 4,
            high_floor_mis: 1,
            degree_floor: Some(8),
            outdeg_cap: 2500,
            ..ParamSet::paper()
        }
    }

    pub fn for_mode(mode: Mode) -> Self {
        match mode {
            Mode::Paper => Self::paper(),
            Mode::Desk => Self::desk(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            self.k_factor,
            self.beta,
            self.gamma0,
            self.gamma_decay,
            self.bad_bucket_exp,
            self.bad_node_exp,
            self.bad_node_exp_mis,
            self.c_add,
        ];
        if positive.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
            return Err(Error::Infeasible("parameters must be positive and finite".into()));
        }
        if let HighGamma::Constant(g) = self.high_gamma {
            if !(g > 0.0 && g < 1.0) {
                return Err(Error::Infeasible(format!("high-regime rate {g} outside (0,1)")));
            }
        }
        Ok(())
    }

    /// `ceil(log2 N)`, at least 1.
    pub fn log_n(&self, n_bound: u64) -> u32 {
        crate::scan::small_key_limit(n_bound)
    }

    /// Level threshold separating the two regimes.
    pub fn big_k(&self, n_bound: u64) -> u32 {
        let lg = (n_bound.max(4) as f64).log2();
        (self.k_factor * lg.log2()).ceil().max(1.0) as u32
    }

    pub fn low_gamma(&self, round: u32, n_bound: u64) -> f64 {
        let lg = (n_bound.max(4) as f64).log2();
        (self.gamma0 * self.gamma_decay.powi(round as i32)).max(self.gamma0 / lg)
    }

    pub fn high_gamma(&self, round: u32, big_k: u32) -> f64 {
        match self.high_gamma {
            HighGamma::InverseSquare => {
                let d = (big_k as f64 - round as f64).max(1.0);
                1.0 / (100.0 * d * d)
            }
            HighGamma::Constant(g) => g,
        }
    }

    pub fn degree_floor(&self, n_bound: u64) -> u64 {
        match self.degree_floor {
            Some(d) => d,
            None => {
                let lg = (n_bound.max(2) as f64).log2();
                let v = (10.0 * lg.powf(25.0)).ceil();
                if v >= u64::MAX as f64 {
                    u64::MAX
                } else {
                    v as u64
                }
            }
        }
    }

    pub fn additive_cap(&self, n_bound: u64) -> f64 {
        let l = self.log_n(n_bound) as f64;
        self.c_add * l * l
    }
}

impl Default for ParamSet {
    fn default() -> Self {
        Self::desk()
    }
}
