use serde::{Deserialize, Serialize};

use super::special::{gamma_rate, poisson_rate};
use crate::error::{ensure, Result};

/// The tail inequalities used throughout, each with its own parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Chernoff {
    /// `P(X <= mu - t) <= exp(-t^2 / (2 mu))`, `t > 0`.
    BernoulliLower { mu: f64, t: f64 },
    /// `P(|X - mu| >= eps mu) <= 2 exp(-eps^2 mu / 3)`, `0 < eps <= 3/2`.
    BernoulliTwoSided { mu: f64, eps: f64 },
    /// `P(X >= mu + t) <= exp(-mu phi(t/mu))`, `t >= 0`.
    PoissonizedUpper { mu: f64, t: f64 },
    /// `P(X <= mu - t) <= exp(-mu phi(-t/mu))`, `0 <= t <= mu`.
    PoissonizedLower { mu: f64, t: f64 },
    /// `P(W_nu >= alpha nu) <= exp(-nu (alpha - ln alpha - 1))`, `alpha > 1`.
    GammaUpper { nu: f64, alpha: f64 },
    /// `P(W_nu <= alpha nu) <= exp(-nu (alpha - ln alpha - 1))`, `alpha < 1`.
    GammaLower { nu: f64, alpha: f64 },
    /// `P(V <= (1 - alpha) sum d) <= exp(-alpha^2/2 (sum d)^2 / sum d^2)`.
    WeightedLower { d: Vec<f64>, alpha: f64 },
}

impl Chernoff {
    /// The right-hand side of the inequality.
    pub fn bound(&self) -> Result<f64> {
        match *self {
            Chernoff::BernoulliLower { mu, t } => {
                ensure!(mu > 0.0 && t > 0.0, "C1 needs mu > 0 and t > 0");
                Ok((-t * t / (2.0 * mu)).exp())
            }
            Chernoff::BernoulliTwoSided { mu, eps } => {
                ensure!(mu > 0.0, "C3 needs mu > 0");
                ensure!(eps > 0.0 && eps <= 1.5, "C3 needs 0 < eps <= 3/2, got {eps}");
                Ok(2.0 * (-eps * eps * mu / 3.0).exp())
            }
            Chernoff::PoissonizedUpper { mu, t } => {
                ensure!(mu > 0.0 && t >= 0.0, "upper tail needs mu > 0 and t >= 0");
                Ok((-mu * poisson_rate(t / mu)).exp())
            }
            Chernoff::PoissonizedLower { mu, t } => {
                ensure!(mu > 0.0 && (0.0..=mu).contains(&t), "lower tail needs 0 <= t <= mu");
                Ok((-mu * poisson_rate(-t / mu)).exp())
            }
            Chernoff::GammaUpper { nu, alpha } => {
                ensure!(nu > 0.0 && alpha > 1.0, "C4 needs nu > 0 and alpha > 1, got alpha = {alpha}");
                Ok((-nu * gamma_rate(alpha)).exp())
            }
            Chernoff::GammaLower { nu, alpha } => {
                ensure!(
                    nu > 0.0 && alpha > 0.0 && alpha < 1.0,
                    "C4' needs nu > 0 and 0 < alpha < 1, got alpha = {alpha}"
                );
                Ok((-nu * gamma_rate(alpha)).exp())
            }
            Chernoff::WeightedLower { ref d, alpha } => {
                ensure!(alpha > 0.0 && alpha < 1.0, "C5 needs 0 < alpha < 1, got {alpha}");
                ensure!(d.iter().all(|&x| x >= 0.0), "C5 needs non-negative weights");
                let s: f64 = d.iter().sum();
                let s2: f64 = d.iter().map(|x| x * x).sum();
                ensure!(s2 > 0.0, "C5 needs a positive weight");
                Ok((-alpha * alpha / 2.0 * s * s / s2).exp())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_weights_reduce_to_a_count() {
        let b = Chernoff::WeightedLower { d: vec![3.0; 40], alpha: 0.1 }.bound().unwrap();
        assert!((b - (-0.005f64 * 40.0).exp()).abs() < 1e-15);
    }

    #[test]
    fn domains_are_enforced() {
        assert!(Chernoff::BernoulliTwoSided { mu: 1.0, eps: 1.6 }.bound().is_err());
        assert!(Chernoff::GammaLower { nu: 1.0, alpha: 1.0 }.bound().is_err());
        assert!(Chernoff::GammaUpper { nu: 1.0, alpha: 0.9 }.bound().is_err());
        assert!(Chernoff::PoissonizedLower { mu: 1.0, t: 2.0 }.bound().is_err());
        assert!(Chernoff::WeightedLower { d: vec![1.0], alpha: 1.0 }.bound().is_err());
    }

    #[test]
    fn zero_and_full_deviation() {
        assert_eq!(Chernoff::PoissonizedUpper { mu: 5.0, t: 0.0 }.bound().unwrap(), 1.0);
        assert_eq!(Chernoff::PoissonizedLower { mu: 5.0, t: 5.0 }.bound().unwrap(), (-5.0f64).exp());
    }

    /// The Poisson-style bound dominates exact binomial tails.
    #[test]
    fn upper_tail_bounds_a_binomial() {
        let (n, p) = (50u32, 0.2f64);
        let mu = n as f64 * p;
        let mut pmf = vec![0.0; n as usize + 1];
        for k in 0..=n {
            let ln_c = crate::analytic::ln_choose(n as u64, k as u64).unwrap();
            pmf[k as usize] = (ln_c + k as f64 * p.ln() + (n - k) as f64 * (1.0 - p).ln()).exp();
        }
        for k in 11..=n as usize {
            let tail: f64 = pmf[k..].iter().sum();
            let b = Chernoff::PoissonizedUpper { mu, t: k as f64 - mu }.bound().unwrap();
            assert!(tail <= b, "k = {k}");
        }
        for k in 0..10usize {
            let tail: f64 = pmf[..=k].iter().sum();
            let b = Chernoff::BernoulliLower { mu, t: mu - k as f64 }.bound().unwrap();
            assert!(tail <= b, "k = {k}");
        }
    }
}
