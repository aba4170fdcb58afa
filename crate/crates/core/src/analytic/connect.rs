use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{ensure, Result};

/// `P(vertex j has m loops) = prod_{k<m} (2k+1)/(2(j-1)m + 2k+1)`.
pub fn all_loops_probability(j: u64, m: u64) -> f64 {
    (0..m).map(|k| (2 * k + 1) as f64 / (2 * (j - 1) * m + 2 * k + 1) as f64).product()
}

/// `prod_{j=2}^n (1 - prod_{k<m} (2k+1)/(2(j-1)m + 2k+1))`: the probability
/// that every vertex after the first keeps an edge to an earlier vertex. For
/// `m = 1` this is the probability that `G_1^n` is connected.
pub fn connect_probability(n: u64, m: u64) -> Result<f64> {
    ensure!(n >= 1 && m >= 1, "need n >= 1 and m >= 1");
    let ln: f64 = (2..=n).map(|j| (-all_loops_probability(j, m)).ln_1p()).sum();
    Ok(ln.exp())
}

/// The same product in exact rational arithmetic.
pub fn connect_probability_exact(n: u64, m: u64) -> Result<BigRational> {
    ensure!(n >= 1 && m >= 1, "need n >= 1 and m >= 1");
    let mut total = BigRational::one();
    for j in 2..=n {
        let mut p = BigRational::one();
        for k in 0..m {
            p *= BigRational::new(BigInt::from(2 * k + 1), BigInt::from(2 * (j - 1) * m + 2 * k + 1));
        }
        total *= BigRational::one() - p;
    }
    Ok(total)
}

/// Exact probability that `G_1^n` is connected.
pub fn connected_g1_exact(n: u64) -> Result<f64> {
    connect_probability(n, 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn small_values() {
        assert_eq!(connect_probability(1, 3).unwrap(), 1.0);
        assert_eq!(connect_probability_exact(2, 1).unwrap(), BigRational::new(2.into(), 3.into()));
        assert_eq!(connect_probability_exact(3, 1).unwrap(), BigRational::new(8.into(), 15.into()));
        assert!((connected_g1_exact(3).unwrap() - 8.0 / 15.0).abs() < 1e-15);
    }

    #[test]
    fn float_and_exact_agree() {
        for m in 1..4 {
            for n in [5, 17, 60] {
                let a = connect_probability(n, m).unwrap();
                let b = connect_probability_exact(n, m).unwrap().to_f64().unwrap();
                assert!((a - b).abs() < 1e-13, "n {n} m {m}");
            }
        }
    }

    #[test]
    fn g1_connectivity_decays_like_root_pi_over_n() {
        let n = 10_000u64;
        let want = 0.5 * (std::f64::consts::PI / n as f64).sqrt();
        let got = connected_g1_exact(n).unwrap();
        assert!((got / want - 1.0).abs() < 0.02, "{got} vs {want}");
    }
}
