//! Ordered forests: one rooted tree followed by unrooted trees.
//!
//! `U(z) = T(z) - T(z)^2/2` counts unrooted labelled trees, and the number
//! of such forests on `n` nodes with `k` trees is `n! [z^n] T U^(k-1)`.

use num_bigint::{BigInt, BigUint};

use super::factorial;
use super::series::{integral_count, series_tree_t, Rational, Series};
use super::exact_m_nm;
use crate::enumerate::BigCount;
use crate::error::{check_limit, Error, Result};

/// Largest `n` accepted by the forest functions.
pub const FOREST_MAX_N: usize = 30;

/// `U(z) = T - T^2/2` to the given order.
pub fn unrooted_tree_series(order: usize) -> Result<Series<Rational>> {
    let t = series_tree_t(order)?;
    let half = Rational::new(1.into(), 2.into());
    Ok(&t - &(&t * &t).scale(&half))
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidInput("forest size must be positive".into()));
    }
    check_limit("forest size", n, FOREST_MAX_N)
}

/// Number of ordered forests on `n` labelled nodes made of one rooted tree
/// followed by `k - 1` unrooted trees.
pub fn ordered_forests_rooted_first(n: usize, k: usize) -> Result<BigCount> {
    check_size(n)?;
    if k == 0 {
        return Err(Error::InvalidInput("a forest needs at least one tree".into()));
    }
    if k > n {
        return Ok(BigCount::default());
    }
    let t = series_tree_t(n)?;
    let u = unrooted_tree_series(n)?;
    let mut acc = t;
    for _ in 1..k {
        acc = &acc * &u;
    }
    let scale = Rational::from_integer(BigInt::from(factorial(n as u64)));
    integral_count(&(acc.coeff(n)? * scale))
}

/// `M_{n,m}` rebuilt from forest counts,
/// `m! 2^m n^(n-m) / (n-m)! * G~_{n,n-m}`, checked against the closed form.
pub fn forest_crosscheck(n: usize, m: usize) -> Result<BigCount> {
    check_size(n)?;
    if m >= n {
        return Err(Error::InvalidInput(format!("need m < n, got n = {n}, m = {m}")));
    }
    let g = ordered_forests_rooted_first(n, n - m)?;
    let numer = factorial(m as u64)
        * BigUint::from(2u32).pow(m as u32)
        * BigUint::from(n).pow((n - m) as u32)
        * g;
    let denom = factorial((n - m) as u64);
    let value = integral_count(&Rational::new(BigInt::from(numer), BigInt::from(denom)))?;
    let closed = exact_m_nm(n as u64, m as u64)?;
    if value != closed {
        return Err(Error::Contract(format!(
            "forest identity fails at n = {n}, m = {m}: {value} != {closed}"
        )));
    }
    Ok(value)
}
