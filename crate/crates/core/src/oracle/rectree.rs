use std::ops::{Add, Mul};

use num_rational::BigRational;
use num_traits::One;

use crate::error::{ensure, Error, Result};

/// Largest tree size enumerated: `(8 - 1)! = 5040` trees.
pub const MAX_TREE_SIZE: usize = 8;

fn check(nu: usize, z_len: usize) -> Result<()> {
    if nu > MAX_TREE_SIZE {
        return Err(Error::ResourceLimit(format!(
            "recursive trees are enumerated only up to {MAX_TREE_SIZE} vertices, got {nu}"
        )));
    }
    ensure!(nu >= 1, "need at least one vertex");
    ensure!(z_len + 1 >= nu, "need at least {} weights, got {z_len}", nu - 1);
    Ok(())
}

/// Visits the parent vectors of all `(nu - 1)!` recursive trees on `[nu]`:
/// vertex `j >= 2` picks a parent in `[j - 1]`.
fn for_each_tree(nu: usize, mut f: impl FnMut(&[usize])) {
    // parent[j] for j = 2..=nu stored at index j - 2, values 1-based.
    let mut parent = vec![1usize; nu.saturating_sub(1)];
    loop {
        f(&parent);
        let mut i = parent.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if parent[i] < i + 1 {
                parent[i] += 1;
                break;
            }
            parent[i] = 1;
        }
    }
}

/// `sum over trees of prod_i z_i^{outdeg(i)}`, by enumeration.
pub fn recursive_tree_gf<T>(nu: usize, z: &[T]) -> Result<T>
where
    T: Clone + One + Add<Output = T> + Mul<Output = T> + num_traits::Zero,
{
    check(nu, z.len())?;
    let mut total = T::zero();
    for_each_tree(nu, |parent| {
        let term = parent.iter().fold(T::one(), |acc, &p| acc * z[p - 1].clone());
        total = total.clone() + term;
    });
    Ok(total)
}

/// `prod_{j=1}^{nu-1} (z_1 + ... + z_j)`.
pub fn recursive_tree_product<T>(nu: usize, z: &[T]) -> Result<T>
where
    T: Clone + One + Add<Output = T> + Mul<Output = T> + num_traits::Zero,
{
    check(nu, z.len())?;
    let mut prefix = T::zero();
    let mut product = T::one();
    for zj in &z[..nu - 1] {
        prefix = prefix + zj.clone();
        product = product * prefix.clone();
    }
    Ok(product)
}

/// Exact comparison of the enumerated generating function with the product.
pub fn recursive_tree_gf_check(nu: usize, z: &[BigRational]) -> Result<bool> {
    Ok(recursive_tree_gf(nu, z)? == recursive_tree_product(nu, z)?)
}

/// Floating-point comparison with relative tolerance `1e-10`.
pub fn recursive_tree_gf_check_f64(nu: usize, z: &[f64]) -> Result<bool> {
    let a = recursive_tree_gf(nu, z)?;
    let b = recursive_tree_product(nu, z)?;
    Ok((a - b).abs() <= 1e-10 * a.abs().max(b.abs()).max(f64::MIN_POSITIVE))
}

/// Number of recursive trees on `[nu]` with out-degree sequence `d`.
pub fn recursive_tree_count(d: &[usize]) -> Result<u64> {
    let nu = d.len();
    check(nu, nu)?;
    let mut count = 0;
    for_each_tree(nu, |parent| {
        let mut out = vec![0usize; nu];
        for &p in parent {
            out[p - 1] += 1;
        }
        if out == d {
            count += 1;
        }
    });
    Ok(count)
}
