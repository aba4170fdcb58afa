use rand::Rng;

use crate::error::{ensure, Result};

/// Unit-mean exponential increments `w_1..w_len` and their prefix sums.
///
/// `sums[0] = 0` and `sums[j] = W_j`. Prefix sums are accumulated with
/// Neumaier compensation, so `W_j` is the correctly rounded running total up
/// to a few ulps even for tens of millions of terms.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentialProcess {
    increments: Vec<f64>,
    sums: Vec<f64>,
}

/// Draws one unit exponential by inversion, `w = -ln(1 - U)`.
///
/// `U = 0` would give `w = 0`; such draws are discarded and redrawn.
pub fn sample_unit_exponential<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.random();
        let w = -(-u).ln_1p();
        if w > 0.0 {
            return w;
        }
    }
}

impl ExponentialProcess {
    /// Samples `count` exponentials in stream order `w_1, ..., w_count`.
    ///
    /// A draw that would leave `W_j == W_{j-1}` after rounding is redrawn from
    /// the same stream, so the sums are strictly increasing.
    pub fn sample<R: Rng + ?Sized>(count: usize, rng: &mut R) -> Result<Self> {
        ensure!(count >= 1, "exponential process needs count >= 1");
        let mut acc = Compensated::default();
        let mut increments = Vec::with_capacity(count);
        let mut sums = Vec::with_capacity(count + 1);
        sums.push(0.0);
        while increments.len() < count {
            let w = sample_unit_exponential(rng);
            let mut next = acc;
            next.add(w);
            if next.value() > *sums.last().unwrap() {
                acc = next;
                increments.push(w);
                sums.push(acc.value());
            }
        }
        Ok(Self { increments, sums })
    }

    /// Builds the process from given increments (used for replay and for
    /// forcing values in tests).
    pub fn from_increments(increments: Vec<f64>) -> Result<Self> {
        ensure!(!increments.is_empty(), "exponential process needs count >= 1");
        let mut acc = Compensated::default();
        let mut sums = Vec::with_capacity(increments.len() + 1);
        sums.push(0.0);
        for (i, &w) in increments.iter().enumerate() {
            ensure!(w.is_finite() && w > 0.0, "increment w_{} = {} is not positive", i + 1, w);
            acc.add(w);
            let v = acc.value();
            ensure!(v > sums[i], "prefix sums stop increasing at j = {}", i + 1);
            sums.push(v);
        }
        Ok(Self { increments, sums })
    }

    /// Replaces `w_j` (1-based) with a fresh draw and recomputes `W_j..`.
    pub(crate) fn redraw<R: Rng + ?Sized>(&mut self, j: usize, rng: &mut R) {
        loop {
            self.increments[j - 1] = sample_unit_exponential(rng);
            let mut acc = Compensated::default();
            let mut ok = true;
            for (i, &w) in self.increments.iter().enumerate() {
                acc.add(w);
                self.sums[i + 1] = acc.value();
                if self.sums[i + 1] <= self.sums[i] {
                    ok = false;
                }
            }
            if ok {
                return;
            }
        }
    }

    /// Number of increments.
    pub fn len(&self) -> usize {
        self.increments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.increments.is_empty()
    }

    /// `w_i`, 1-based.
    pub fn increment(&self, i: usize) -> f64 {
        self.increments[i - 1]
    }

    pub fn increments(&self) -> &[f64] {
        &self.increments
    }

    /// `W_j` for `0 <= j <= len`.
    pub fn sum(&self, j: usize) -> f64 {
        self.sums[j]
    }

    /// `W_0, W_1, ..., W_len`.
    pub fn sums(&self) -> &[f64] {
        &self.sums
    }

    /// `W_len`, the normalizer.
    pub fn total(&self) -> f64 {
        self.sums[self.sums.len() - 1]
    }

    /// `Omega_{mj} = W_{mj} - W_{m(j-1)}`, the block increment of vertex `j`.
    pub fn block_increment(&self, m: usize, j: usize) -> f64 {
        self.sums[m * j] - self.sums[m * (j - 1)]
    }

    /// Normalized right endpoints `R_k = W_k / W_len` for `k = 1..len-1`.
    pub fn right_endpoints(&self) -> Vec<f64> {
        let total = self.total();
        self.sums[1..self.sums.len() - 1].iter().map(|w| w / total).collect()
    }
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Compensated {
    sum: f64,
    comp: f64,
}

impl Compensated {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn forced_unit_increments_give_integer_sums() {
        let p = ExponentialProcess::from_increments(vec![1.0, 1.0, 1.0]).unwrap();
        assert_eq!(p.sums(), &[0.0, 1.0, 2.0, 3.0]);
        assert_eq!(p.total(), 3.0);
        assert_eq!(p.block_increment(1, 2), 1.0);
        assert_eq!(p.right_endpoints(), vec![1.0 / 3.0, 2.0 / 3.0]);
    }

    #[test]
    fn zero_count_is_rejected() {
        let mut s = rng::stream(1);
        assert!(ExponentialProcess::sample(0, &mut s).is_err());
        assert!(ExponentialProcess::from_increments(vec![]).is_err());
        assert!(ExponentialProcess::from_increments(vec![1.0, 0.0]).is_err());
    }

    #[test]
    fn sums_strictly_increase() {
        for seed in 0..20 {
            let p = ExponentialProcess::sample(500, &mut rng::stream(seed)).unwrap();
            assert!(p.sums().windows(2).all(|w| w[0] < w[1]));
            assert!(p.increments().iter().all(|&w| w > 0.0));
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = ExponentialProcess::sample(100, &mut rng::stream(9)).unwrap();
        let b = ExponentialProcess::sample(100, &mut rng::stream(9)).unwrap();
        assert_eq!(a, b);
        let c = ExponentialProcess::from_increments(a.increments().to_vec()).unwrap();
        assert_eq!(a, c);
    }

    #[test]
    fn mean_of_a_million_draws_is_within_four_standard_errors() {
        let p = ExponentialProcess::sample(1_000_000, &mut rng::stream(2024)).unwrap();
        let mean = p.total() / 1e6;
        // Var(w) = 1, so the standard error is 1e-3.
        assert!((mean - 1.0).abs() < 4e-3, "mean {mean}");
    }

    /// Double-double accumulation as an independent reference for the
    /// compensated prefix sums.
    fn two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        let bb = s - a;
        (s, (a - (s - bb)) + (b - bb))
    }

    #[test]
    fn prefix_sums_keep_relative_error_below_1e12_at_ten_million() {
        let p = ExponentialProcess::sample(10_000_000, &mut rng::stream(5)).unwrap();
        let (mut hi, mut lo) = (0.0f64, 0.0f64);
        for (j, &w) in p.increments().iter().enumerate() {
            let (s, e) = two_sum(hi, w);
            let (h2, l2) = two_sum(s, e + lo);
            hi = h2;
            lo = l2;
            if (j + 1) % 1_000_000 == 0 {
                let exact = hi + lo;
                let rel = ((p.sum(j + 1) - exact) / exact).abs();
                assert!(rel < 1e-12, "j = {}: rel err {rel}", j + 1);
            }
        }
    }
}
