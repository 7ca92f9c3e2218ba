//! Direct evaluation of the composition recurrence for `F_n`.
//!
//! Removing the driver that parks at the root splits a tree parking
//! function into smaller ones. Either the root subtree is empty of
//! earlier drivers (first sum) or one child subtree `k` carries the
//! overflow into the root (second sum).

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::factorial;
use super::series::integral_count;
use crate::enumerate::BigCount;
use crate::error::{check_limit, Error, Result};

/// Largest `n` accepted by [`recurrence_f_n`].
pub const RECURRENCE_MAX_N: usize = 9;

/// Ordered compositions of `total` into positive parts, `total = 0` giving
/// the single empty composition.
fn compositions(total: usize) -> Vec<Vec<usize>> {
    if total == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=total {
        for mut rest in compositions(total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `(sum parts)! / prod(parts!)`.
fn multinomial(parts: &[usize]) -> BigUint {
    let total: usize = parts.iter().sum();
    let denom = parts
        .iter()
        .fold(BigUint::one(), |acc, &k| acc * factorial(k as u64));
    factorial(total as u64) / denom
}

fn product_of(f: &[BigUint], parts: &[usize]) -> BigUint {
    parts.iter().fold(BigUint::one(), |acc, &k| acc * &f[k])
}

fn ratio(numer: BigUint, denom: BigUint) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

/// `F_n` from the recurrence with `F_1 = 1`.
pub fn recurrence_f_n(n: usize) -> Result<BigCount> {
    if n == 0 {
        return Err(Error::InvalidInput("recurrence is defined for n >= 1".into()));
    }
    check_limit("recurrence size", n, RECURRENCE_MAX_N)?;
    let mut f = vec![BigUint::zero(), BigUint::one()];
    for size in 2..=n {
        let mut total = BigRational::zero();
        for parts in compositions(size - 1) {
            let r = parts.len();
            let mut with_root = parts.clone();
            with_root.push(1);
            let term = product_of(&f, &parts)
                * multinomial(&with_root)
                * multinomial(&parts)
                * BigUint::from(size);
            total += ratio(term, factorial(r as u64));
        }
        for k in 1..size {
            for parts in compositions(size - 1 - k) {
                let r = parts.len();
                let mut inner = vec![k];
                inner.extend_from_slice(&parts);
                let mut with_root = inner.clone();
                with_root.push(1);
                let term = &f[k]
                    * product_of(&f, &parts)
                    * multinomial(&with_root)
                    * multinomial(&inner)
                    * BigUint::from(k * (size - k));
                total += ratio(term, factorial(r as u64));
            }
        }
        f.push(integral_count(&total)?);
    }
    Ok(f.swap_remove(n))
}
