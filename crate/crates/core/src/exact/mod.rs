//! Exact counts with arbitrary precision.
//!
//! The closed forms here are sums of rationals. Each is accumulated over a
//! common denominator and divided out at the end; a nonzero remainder
//! means the formula was mis-evaluated and panics.

mod forest;
mod recurrence;
pub mod series;

pub use forest::{forest_crosscheck, ordered_forests_rooted_first, unrooted_tree_series, FOREST_MAX_N};
pub use recurrence::{recurrence_f_n, RECURRENCE_MAX_N};
pub use series::{
    series_c, series_f, series_m, series_q_bivariate, series_tree_t, BivariateSeries, Rational,
    Series, UPoly, BIVARIATE_MAX_ORDER, UNIVARIATE_MAX_ORDER,
};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::enumerate::BigCount;
use crate::error::{Error, Result};

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// `x (x-1) ... (x-k+1)`; zero when `k > x`.
pub fn falling_factorial(x: u64, k: u64) -> BigUint {
    if k > x {
        return BigUint::zero();
    }
    (0..k).fold(BigUint::one(), |acc, i| acc * (x - i))
}

/// Falling factorial for any integer `a`.
pub fn falling_factorial_signed(a: i64, k: u64) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * (a - i as i64))
}

/// `a (a-1) ... (a-k+1) / k!` for any integer `a`, so that
/// `gen_binomial(-1, 0) = 1` and `gen_binomial(0, 1) = 0`.
pub fn gen_binomial(a: i64, k: u64) -> BigInt {
    let (q, r) = falling_factorial_signed(a, k).div_rem(&BigInt::from(factorial(k)));
    debug_assert!(r.is_zero());
    q
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    falling_factorial(n, k) / factorial(k)
}

/// `T_n = n^(n-1)` rooted labelled trees.
pub fn tree_number(n: u64) -> BigCount {
    assert!(n >= 1);
    BigUint::from(n).pow(n as u32 - 1)
}

/// `P_{n,m} = (n+1-m)(n+1)^(m-1)`, ordinary parking functions of length
/// `m` on a one-way street of `n` spaces.
pub fn classic_p(n: u64, m: u64) -> Result<BigCount> {
    if m > n {
        return Err(Error::InvalidInput(format!("need m <= n, got m = {m}, n = {n}")));
    }
    if m == 0 {
        return Ok(BigCount::one());
    }
    Ok(BigUint::from(n + 1 - m) * BigUint::from(n + 1).pow(m as u32 - 1))
}

fn exact_division(numerator: BigUint, denominator: &BigUint, what: &str) -> BigUint {
    let (q, r) = numerator.div_rem(denominator);
    assert!(r.is_zero(), "{what}: closed form produced a non-integer");
    q
}

/// `sum_{j<n} w(j) (2n)^j (n-1)!/j!`, an integer.
fn scaled_power_sum(n: u64, weight: impl Fn(u64) -> u64) -> BigUint {
    let mut total = BigUint::zero();
    // walk j downward so (n-1)!/j! grows by one factor per step
    let powers: Vec<BigUint> = {
        let mut p = Vec::with_capacity(n as usize);
        let mut cur = BigUint::one();
        for _ in 0..n {
            p.push(cur.clone());
            cur *= 2 * n;
        }
        p
    };
    let mut ratio = BigUint::one();
    for j in (0..n).rev() {
        total += &powers[j as usize] * &ratio * weight(j);
        ratio *= j.max(1);
    }
    total
}

/// `C_n`: parking functions of length `n` on connected `n`-mappings.
pub fn exact_c_n(n: u64) -> BigCount {
    assert!(n >= 1);
    factorial(n) * scaled_power_sum(n, |_| 1)
}

/// `M_n = n! (n-1)! sum_{j<n} (n-j) (2n)^j / j!`.
pub fn exact_m_n(n: u64) -> BigCount {
    assert!(n >= 1);
    factorial(n) * scaled_power_sum(n, |j| n - j)
}

/// `F_n = ((n-1)!)^2 sum_{j<n} (n-j) (2n)^j / j!`.
pub fn exact_f_n(n: u64) -> BigCount {
    assert!(n >= 1);
    factorial(n - 1) * scaled_power_sum(n, |j| n - j)
}

/// `M_{n,m}`, total mapping parking functions with `m` drivers.
pub fn exact_m_nm(n: u64, m: u64) -> Result<BigCount> {
    if n == 0 || m > n {
        return Err(Error::InvalidInput(format!("need 0 <= m <= n and n >= 1, got n = {n}, m = {m}")));
    }
    // M = (n-1)! m! n^(n-m) / (n-m)! * sum_j C(2m-n-j, m-j) (2n)^j (n-j) / j!
    // and the j-sum times m! is an integer
    let (ni, mi) = (n as i64, m as i64);
    let mut binoms = vec![BigInt::zero(); m as usize + 1];
    // C(a, k) -> C(a+1, k+1) = C(a, k) (a+1)/(k+1), starting from C(m-n, 0) = 1
    binoms[m as usize] = BigInt::one();
    for j in (1..=m).rev() {
        let a = 2 * mi - ni - j as i64;
        let k = m - j;
        binoms[j as usize - 1] = &binoms[j as usize] * (a + 1) / BigInt::from(k + 1);
    }
    let mut sum = BigInt::zero();
    let mut power = BigInt::one();
    let mut m_over_j = BigInt::from(factorial(m));
    for j in 0..=m {
        if !binoms[j as usize].is_zero() {
            sum += &binoms[j as usize] * &power * (ni - j as i64) * &m_over_j;
        }
        power *= 2 * ni;
        m_over_j /= BigInt::from(j + 1);
    }
    let sum = sum
        .to_biguint()
        .expect("mapping parking count must be non-negative");
    let numerator = factorial(n - 1) * BigUint::from(n).pow((n - m) as u32) * sum;
    Ok(exact_division(numerator, &factorial(n - m), "M_{n,m}"))
}

/// `F_{n,m} = M_{n,m} / n`.
pub fn exact_f_nm(n: u64, m: u64) -> Result<BigCount> {
    let total = exact_m_nm(n, m)?;
    Ok(exact_division(total, &BigUint::from(n), "F_{n,m}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn factorials_and_binomials() {
        assert_eq!(falling_factorial(5, 3), big(60));
        assert_eq!(falling_factorial(3, 4), big(0));
        assert_eq!(falling_factorial(0, 0), big(1));
        assert_eq!(gen_binomial(-1, 0), BigInt::from(1));
        assert_eq!(gen_binomial(0, 1), BigInt::from(0));
        assert_eq!(gen_binomial(-1, 3), BigInt::from(-1));
        assert_eq!(gen_binomial(-3, 2), BigInt::from(6));
        assert_eq!(gen_binomial(2, 5), BigInt::from(0));
        assert_eq!(binomial(10, 3), big(120));
    }

    #[test]
    fn classic_parking_counts() {
        assert_eq!(classic_p(3, 3).unwrap(), big(16));
        assert_eq!(classic_p(2, 2).unwrap(), big(3));
        for n in 0..6 {
            assert_eq!(classic_p(n, 0).unwrap(), big(1));
        }
        assert!(classic_p(2, 3).is_err());
    }

    #[test]
    fn diagonal_counts() {
        assert_eq!(exact_f_n(1), big(1));
        assert_eq!(exact_f_n(2), big(6));
        assert_eq!(exact_m_n(2), big(12));
        assert_eq!(exact_c_n(2), big(10));
        assert_eq!(exact_c_n(1), big(1));
        for n in 1..=50 {
            assert_eq!(exact_m_n(n), exact_f_n(n) * n);
        }
    }

    #[test]
    fn general_counts() {
        for n in 1..=12 {
            assert_eq!(exact_m_nm(n, 0).unwrap(), big(n).pow(n as u32));
        }
        assert_eq!(exact_m_nm(2, 1).unwrap(), big(8));
        assert_eq!(exact_f_nm(3, 2).unwrap(), big(72));
        for n in 1..=30 {
            assert_eq!(exact_m_nm(n, n).unwrap(), exact_m_n(n));
            assert_eq!(exact_f_nm(n, n).unwrap(), exact_f_n(n));
        }
        assert!(exact_m_nm(3, 4).is_err());
        assert!(exact_m_nm(0, 0).is_err());
    }

    #[test]
    fn single_driver_always_parks() {
        // n^n mappings, n choices, everyone parks
        for n in 1..=20u64 {
            assert_eq!(exact_m_nm(n, 1).unwrap(), big(n).pow(n as u32 + 1));
        }
    }

    #[test]
    fn general_counts_against_gen_binomial_sum() {
        // direct term-by-term evaluation with rationals
        use num_rational::BigRational;
        for n in 1..=15u64 {
            for m in 0..=n {
                let mut sum = BigRational::zero();
                for j in 0..=m {
                    let b = gen_binomial(2 * m as i64 - n as i64 - j as i64, m - j);
                    let term = BigRational::new(
                        b * BigInt::from(2 * n).pow(j as u32) * BigInt::from(n - j),
                        BigInt::from(factorial(j)),
                    );
                    sum += term;
                }
                let pre = BigRational::new(
                    BigInt::from(factorial(n - 1) * factorial(m) * big(n).pow((n - m) as u32)),
                    BigInt::from(factorial(n - m)),
                );
                let value = pre * sum;
                assert!(value.is_integer());
                assert_eq!(value.to_integer(), BigInt::from(exact_m_nm(n, m).unwrap()));
            }
        }
    }
}
