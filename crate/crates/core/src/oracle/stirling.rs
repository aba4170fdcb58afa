use crate::error::{ensure, Error, Result};

/// Largest order handled in exact `u128` arithmetic.
pub const MAX_ORDER: usize = 20;

fn table() -> [[u128; MAX_ORDER + 1]; MAX_ORDER + 1] {
    let mut s = [[0u128; MAX_ORDER + 1]; MAX_ORDER + 1];
    s[0][0] = 1;
    for l in 0..MAX_ORDER {
        for k in 1..=l + 1 {
            s[l + 1][k] = l as u128 * s[l][k] + s[l][k - 1];
        }
    }
    s
}

fn check(l: usize, k: usize) -> Result<()> {
    if l > MAX_ORDER {
        return Err(Error::ResourceLimit(format!("Stirling numbers are exact only up to l = {MAX_ORDER}, got {l}")));
    }
    ensure!(k >= 1 && k <= l, "need 1 <= k <= l, got k = {k}, l = {l}");
    Ok(())
}

/// Signless Stirling number of the first kind: permutations of `[l]` with `k` cycles.
pub fn stirling_s(l: usize, k: usize) -> Result<u128> {
    check(l, k)?;
    Ok(table()[l][k])
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Both sides of `sum_{j=k}^{l} s(l, j) C(j, k-1) = l s(l, k)`.
pub fn stirling_identity_sides(l: usize, k: usize) -> Result<(u128, u128)> {
    check(l, k)?;
    let s = table();
    let lhs = (k..=l).map(|j| s[l][j] * binomial(j, k - 1)).sum();
    Ok((lhs, l as u128 * s[l][k]))
}

pub fn stirling_identity_check(l: usize, k: usize) -> Result<bool> {
    let (lhs, rhs) = stirling_identity_sides(l, k)?;
    Ok(lhs == rhs)
}
