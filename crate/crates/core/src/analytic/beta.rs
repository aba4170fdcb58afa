use serde::Serialize;
use statrs::function::beta::{beta_reg, ln_beta};

use crate::error::{ensure, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaComponent {
    pub weight: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl BetaComponent {
    fn density(&self, x: f64, y: f64) -> f64 {
        ((self.alpha - 1.0) * x.ln() + (self.beta - 1.0) * y.ln() - ln_beta(self.alpha, self.beta)).exp()
    }

    /// `prod_{j<l} (alpha + j)/(alpha + beta + j)`.
    fn moment(&self, l: u32) -> f64 {
        (0..l).map(|j| (self.alpha + j as f64) / (self.alpha + self.beta + j as f64)).product()
    }
}

/// Limit law of the scaled max-tree size of vertex `r` in `G_1^n` (or in the
/// `delta` process): a two-component beta mixture. Zero-weight components
/// (`r = 1`) are dropped.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BetaMixture {
    pub r: u32,
    pub delta: Option<f64>,
    pub components: Vec<BetaComponent>,
}

pub fn beta_mixture(r: u32, delta: Option<f64>) -> Result<BetaMixture> {
    ensure!(r >= 1, "root index must be at least 1");
    let rf = r as f64;
    let raw = match delta {
        None => [
            BetaComponent { weight: 1.0 / (2.0 * rf - 1.0), alpha: 1.0, beta: rf - 0.5 },
            BetaComponent { weight: 2.0 * (rf - 1.0) / (2.0 * rf - 1.0), alpha: 0.5, beta: rf },
        ],
        Some(d) => {
            // At delta = -1 the second component degenerates to Beta(0, r).
            ensure!(d.is_finite() && d > -1.0, "delta = {d} must exceed -1");
            let a = (1.0 + d) / (2.0 + d);
            let den = (2.0 + d) * rf - 1.0;
            [
                BetaComponent { weight: (1.0 + d) / den, alpha: 1.0, beta: rf - 1.0 + a },
                BetaComponent { weight: (2.0 + d) * (rf - 1.0) / den, alpha: a, beta: rf },
            ]
        }
    };
    let components = raw.into_iter().filter(|c| c.weight > 0.0).collect();
    Ok(BetaMixture { r, delta, components })
}

impl BetaMixture {
    pub fn pdf(&self, x: f64) -> f64 {
        self.density_at(x, 1.0 - x)
    }

    /// The density at `x` given both `x` and `y = 1 - x`, so that points
    /// close to 1 keep full precision when `y` is known exactly.
    pub fn density_at(&self, x: f64, y: f64) -> f64 {
        if x <= 0.0 || y <= 0.0 {
            return 0.0;
        }
        self.components.iter().map(|c| c.weight * c.density(x, y)).sum()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x >= 1.0 {
            return 1.0;
        }
        self.components.iter().map(|c| c.weight * beta_reg(c.alpha, c.beta, x)).sum()
    }

    /// `E[Z^l]`.
    pub fn moment(&self, l: u32) -> f64 {
        self.components.iter().map(|c| c.weight * c.moment(l)).sum()
    }

    pub fn mean(&self) -> f64 {
        self.moment(1)
    }

    pub fn variance(&self) -> f64 {
        self.moment(2) - self.mean().powi(2)
    }
}

fn odd_product(r: u32, l: u32) -> f64 {
    (0..l).map(|j| 1.0 / (2.0 * (r + j) as f64 + 1.0)).product()
}

/// Limit of `E[(X(n)/n)^l]` given that `r` looped: `2^l l! prod 1/(2(r+j)+1)`.
pub fn looped_root_moment(r: u32, l: u32) -> f64 {
    (1..=l).map(|i| 2.0 * i as f64).product::<f64>() * odd_product(r, l)
}

/// Limit of `E[(X(n)/n)^l]` given that `r` attached: `(2l-1)!! prod 1/(2(r+j)+1)`.
pub fn attached_root_moment(r: u32, l: u32) -> f64 {
    (1..=l).map(|i| (2 * i - 1) as f64).product::<f64>() * odd_product(r, l)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_one_is_a_single_beta() {
        let b = beta_mixture(1, None).unwrap();
        assert_eq!(b.components, vec![BetaComponent { weight: 1.0, alpha: 1.0, beta: 0.5 }]);
        assert!((b.mean() - 2.0 / 3.0).abs() < 1e-15);
        assert!((looped_root_moment(1, 1) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn root_two_mean() {
        let b = beta_mixture(2, None).unwrap();
        assert!((b.mean() - 4.0 / 15.0).abs() < 1e-15);
    }

    #[test]
    fn moments_match_the_martingale_limits() {
        for r in 1..8 {
            let b = beta_mixture(r, None).unwrap();
            let rf = r as f64;
            for l in 0..8 {
                let want = looped_root_moment(r, l) / (2.0 * rf - 1.0)
                    + attached_root_moment(r, l) * 2.0 * (rf - 1.0) / (2.0 * rf - 1.0);
                assert!((b.moment(l) - want).abs() < 1e-14 * want.max(1e-300), "r {r} l {l}");
            }
        }
    }

    #[test]
    fn delta_zero_is_the_base_mixture() {
        for r in 1..6 {
            let a = beta_mixture(r, None).unwrap();
            let b = beta_mixture(r, Some(0.0)).unwrap();
            assert_eq!(a.components.len(), b.components.len());
            for (x, y) in a.components.iter().zip(&b.components) {
                assert!((x.weight - y.weight).abs() < 1e-15);
                assert!((x.alpha - y.alpha).abs() < 1e-15 && (x.beta - y.beta).abs() < 1e-15);
            }
        }
        assert!(beta_mixture(3, Some(-1.0)).is_err());
        assert!(beta_mixture(0, None).is_err());
    }

    /// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton's method.
    fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
        (0..n)
            .map(|i| {
                let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
                let mut dp = 0.0;
                for _ in 0..100 {
                    let (mut p0, mut p1) = (1.0, x);
                    for k in 2..=n {
                        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                        p0 = p1;
                        p1 = p2;
                    }
                    dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                    let dx = p1 / dp;
                    x -= dx;
                    if dx.abs() < 1e-16 {
                        break;
                    }
                }
                (x, 2.0 / ((1.0 - x * x) * dp * dp))
            })
            .collect()
    }

    /// Integral over `[0, b]` on panels that halve geometrically toward 0,
    /// which resolves an algebraic singularity there.
    fn integrate_from_zero<F: Fn(f64) -> f64>(f: F, b: f64) -> f64 {
        let rule = gauss_legendre(20);
        let mut sum = 0.0;
        let mut width = b;
        while width > 1e-300 {
            let (mid, half) = (0.75 * width, 0.25 * width);
            sum += rule.iter().map(|&(t, w)| w * half * f(mid + half * t)).sum::<f64>();
            width *= 0.5;
        }
        sum
    }

    /// Integral of `g(x) * density(x)` over `(0, 1)`, split at 1/2 so that
    /// each half is graded toward its own endpoint.
    fn integrate_unit<G: Fn(f64) -> f64>(b: &BetaMixture, g: G) -> f64 {
        integrate_from_zero(|x| g(x) * b.density_at(x, 1.0 - x), 0.5)
            + integrate_from_zero(|y| g(1.0 - y) * b.density_at(1.0 - y, y), 0.5)
    }

    #[test]
    fn pdf_integrates_to_one_and_reproduces_moments() {
        for (r, delta) in [(1, None), (2, None), (5, None), (3, Some(0.7)), (2, Some(-0.5))] {
            let b = beta_mixture(r, delta).unwrap();
            assert!((integrate_unit(&b, |_| 1.0) - 1.0).abs() < 1e-8, "r {r}");
            for l in 1..=6 {
                let m = integrate_unit(&b, |x| x.powi(l as i32));
                assert!((m - b.moment(l)).abs() < 1e-8, "r {r} l {l}");
            }
        }
    }

    #[test]
    fn cdf_is_the_integrated_pdf() {
        let b = beta_mixture(3, None).unwrap();
        for x in [0.05, 0.2, 0.5, 0.9] {
            let num = integrate_from_zero(|t| b.pdf(t), x);
            assert!((num - b.cdf(x)).abs() < 1e-10, "x {x}");
        }
        assert_eq!(b.cdf(0.0), 0.0);
        assert_eq!(b.cdf(1.0), 1.0);
    }
}
