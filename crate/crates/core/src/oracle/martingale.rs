use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Result};

/// Largest order checked.
pub const MAX_ORDER: u32 = 6;

/// How the root of a maximal recursive tree started.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootKind {
    /// The root looped on itself: track `X`, the tree size.
    Looped,
    /// The root attached to an earlier vertex: track `Y = X - 1/2`.
    Attached,
}

fn rational(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

/// `y (y+1) ... (y+l-1)`.
fn rising(y: &BigRational, l: u32) -> BigRational {
    (0..l).fold(BigRational::one(), |acc, i| acc * (y + rational(i as i64, 1)))
}

/// Exact `E[Z^{(l)}(t+1) | Z(t)]` and `((2(t+l)+1)/(2t+1)) Z^{(l)}(t)` for
/// `Z = X` or `Z = X - 1/2`. The tree grows by one vertex with probability
/// `2Z/(2t+1)` (its total degree over `2t+1` points).
pub fn martingale_step_sides(kind: RootKind, x: u64, t: u64, r: u64, l: u32) -> Result<(BigRational, BigRational)> {
    ensure!(r >= 1 && r <= t, "need 1 <= r <= t, got r = {r}, t = {t}");
    ensure!(x >= 1 && x <= t, "need 1 <= X <= t, got X = {x}, t = {t}");
    ensure!(l <= MAX_ORDER, "order l = {l} exceeds {MAX_ORDER}");
    let z = match kind {
        RootKind::Looped => rational(x as i64, 1),
        RootKind::Attached => rational(2 * x as i64 - 1, 2),
    };
    let grow = &z * rational(2, 2 * t as i64 + 1);
    let stay = BigRational::one() - &grow;
    let next = &z + BigRational::one();
    let expectation = &grow * rising(&next, l) + stay * rising(&z, l);
    let claimed = rational(2 * (t + l as u64) as i64 + 1, 2 * t as i64 + 1) * rising(&z, l);
    Ok((expectation, claimed))
}

pub fn martingale_step_check(kind: RootKind, x: u64, t: u64, r: u64, l: u32) -> Result<bool> {
    let (a, b) = martingale_step_sides(kind, x, t, r, l)?;
    Ok(a == b)
}
