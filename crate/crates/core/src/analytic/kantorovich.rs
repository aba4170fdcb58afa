use crate::error::{ensure, Result};

/// Both sides of `(sum xi x)(sum xi / x) <= (hi + lo)^2 / (4 hi lo)`.
pub fn kantorovich_schweitzer(xi: &[f64], x: &[f64], lo: f64, hi: f64) -> Result<(f64, f64)> {
    ensure!(xi.len() == x.len() && !x.is_empty(), "weights and values must have the same non-zero length");
    ensure!(lo > 0.0 && lo <= hi, "need 0 < lo <= hi");
    ensure!(xi.iter().all(|&w| w >= 0.0), "weights must be non-negative");
    let total: f64 = xi.iter().sum();
    ensure!((total - 1.0).abs() < 1e-9, "weights sum to {total}, not 1");
    ensure!(x.iter().all(|&v| v >= lo && v <= hi), "values must lie in [{lo}, {hi}]");
    let a: f64 = xi.iter().zip(x).map(|(w, v)| w * v).sum();
    let b: f64 = xi.iter().zip(x).map(|(w, v)| w / v).sum();
    Ok((a * b, (hi + lo) * (hi + lo) / (4.0 * hi * lo)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn equal_values() {
        let (l, r) = kantorovich_schweitzer(&[0.5, 0.5], &[2.0, 2.0], 1.0, 3.0).unwrap();
        assert!((l - 1.0).abs() < 1e-15 && l <= r);
        let (l, r) = kantorovich_schweitzer(&[1.0], &[2.0], 2.0, 2.0).unwrap();
        assert_eq!((l, r), (1.0, 1.0));
        assert!(kantorovich_schweitzer(&[1.0], &[4.0], 1.0, 3.0).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100_000))]
        #[test]
        fn inequality_holds(
            raw in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 1..12),
            lo in 1e-3f64..10.0,
            spread in 1.0f64..1e3,
        ) {
            let hi = lo * spread;
            let total: f64 = raw.iter().map(|p| p.0).sum::<f64>();
            prop_assume!(total > 1e-9);
            let xi: Vec<f64> = raw.iter().map(|p| p.0 / total).collect();
            let x: Vec<f64> = raw.iter().map(|p| (lo + (hi - lo) * p.1).clamp(lo, hi)).collect();
            let (l, r) = kantorovich_schweitzer(&xi, &x, lo, hi).unwrap();
            prop_assert!(l <= r * (1.0 + 1e-12));
        }
    }
}
