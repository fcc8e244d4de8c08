//! Accumulation of per-round multiplicative and additive losses.

use crate::error::{contract, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct LossSchedule {
    pub gammas: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LossBounds {
    pub f: f64,
    pub f_lower: f64,
    pub g: f64,
    pub g_lower: f64,
}

/// Values after `i` rounds of `f <- (1+γ) f + γ` and `f' <- (1-γ) f' - γ`,
/// together with the closed forms `Z Π(1+2γ) + Σ 2γ` and
/// `Z Π(1-2γ) - Σ 2γ` that bound them.
pub fn iterative_loss_bound(schedule: &LossSchedule, z: f64, i: usize) -> Result<LossBounds> {
    if i > schedule.gammas.len() {
        return Err(contract(format!("round {i} beyond schedule of {}", schedule.gammas.len())));
    }
    let gammas = &schedule.gammas[..i];
    if gammas.iter().any(|&g| g < 0.0) {
        return Err(contract("negative loss rate"));
    }
    let total: f64 = schedule.gammas.iter().sum();
    if total > 0.5 {
        return Err(contract(format!("loss rates sum to {total} > 1/2")));
    }
    let (mut f, mut fl) = (z, z);
    let (mut prod_up, mut prod_down, mut add) = (1.0, 1.0, 0.0);
    for &g in gammas {
        f = (1.0 + g) * f + g;
        fl = (1.0 - g) * fl - g;
        prod_up *= 1.0 + 2.0 * g;
        prod_down *= 1.0 - 2.0 * g;
        add += 2.0 * g;
    }
    Ok(LossBounds { f, f_lower: fl, g: z * prod_up + add, g_lower: z * prod_down - add })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_loss() {
        let b = iterative_loss_bound(&LossSchedule { gammas: vec![0.0; 4] }, 3.0, 4).unwrap();
        assert_eq!((b.f, b.f_lower, b.g, b.g_lower), (3.0, 3.0, 3.0, 3.0));
    }

    #[test]
    fn one_round() {
        let b = iterative_loss_bound(&LossSchedule { gammas: vec![0.1] }, 1.0, 1).unwrap();
        assert!((b.f - 1.2).abs() < 1e-12);
        assert!((b.g - 1.4).abs() < 1e-12);
        assert!((b.f_lower - 0.8).abs() < 1e-12);
        assert!((b.g_lower - 0.6).abs() < 1e-12);
    }

    #[test]
    fn oversized_schedule_rejected() {
        let s = LossSchedule { gammas: vec![0.3, 0.3] };
        assert!(iterative_loss_bound(&s, 1.0, 1).is_err());
    }
}
