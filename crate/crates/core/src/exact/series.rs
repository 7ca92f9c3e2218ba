//! Truncated power series in `z` with exact coefficients.
//!
//! Coefficients are either rationals (univariate series) or dense
//! polynomials in a second variable `u` with rational coefficients
//! (bivariate series). A series of order `N` knows its coefficients of
//! `z^0 ..= z^N`; every operation is exact up to that order.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::factorial;
use crate::enumerate::BigCount;
use crate::error::{check_limit, Error, Result};

pub type Rational = BigRational;

/// Largest truncation order accepted by [`series_q_bivariate`].
pub const BIVARIATE_MAX_ORDER: usize = 40;
/// Largest truncation order accepted by the univariate constructors.
pub const UNIVARIATE_MAX_ORDER: usize = 200;

/// Ring operations a series coefficient has to support.
pub trait Coefficient: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign_ref(&mut self, rhs: &Self);
    fn sub_assign_ref(&mut self, rhs: &Self);
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn scale(&self, factor: &Rational) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

impl Coefficient for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_assign_ref(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn sub_assign_ref(&mut self, rhs: &Self) {
        *self -= rhs;
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn scale(&self, factor: &Rational) -> Self {
        self * factor
    }
}

/// Dense polynomial in `u` with rational coefficients, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct UPoly {
    coeffs: Vec<Rational>,
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !Zero::is_zero(*c))
            .map(|(k, c)| format!("({c})u^{k}"))
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// Coefficient of `u^k`.
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Zero::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Multiplies by `u`.
    pub fn times_u(&self) -> Self {
        if self.coeffs.is_empty() {
            return self.clone();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Zero::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    /// Value at `u = 0`.
    pub fn at_zero(&self) -> Rational {
        self.coeff(0)
    }
}

impl Coefficient for UPoly {
    fn zero() -> Self {
        Self::default()
    }
    fn one() -> Self {
        Self::constant(One::one())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add_assign_ref(&mut self, rhs: &Self) {
        if rhs.coeffs.len() > self.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), Zero::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
        *self = Self::new(std::mem::take(&mut self.coeffs));
    }
    fn sub_assign_ref(&mut self, rhs: &Self) {
        if rhs.coeffs.len() > self.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), Zero::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
        *self = Self::new(std::mem::take(&mut self.coeffs));
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Self::default();
        }
        let mut out = vec![<Rational as Zero>::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if Zero::is_zero(a) {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }
    fn scale(&self, factor: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * factor).collect())
    }
}

/// Power series truncated after `z^order`.
#[derive(Clone, PartialEq)]
pub struct Series<C> {
    coeffs: Vec<C>,
}

impl<C: Coefficient> fmt::Debug for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Series")
            .field("order", &self.order())
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

fn integer_ratio(numer: usize, denom: usize) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

impl<C: Coefficient> Series<C> {
    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![C::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(C::one(), order)
    }

    pub fn constant(c: C, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The series `z`.
    pub fn variable(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = C::one();
        }
        s
    }

    /// Pads with zeros or truncates to the requested order.
    pub fn from_coeffs(mut coeffs: Vec<C>, order: usize) -> Self {
        coeffs.resize(order + 1, C::zero());
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// Coefficient of `z^k`; asking beyond the order is an error.
    pub fn coeff(&self, k: usize) -> Result<&C> {
        self.coeffs.get(k).ok_or(Error::SizeLimit {
            what: "series coefficient index",
            value: k,
            limit: self.order(),
        })
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_coeffs(self.coeffs[..=order.min(self.order())].to_vec(), order)
    }

    pub fn map_coeffs(&self, f: impl Fn(&C) -> C) -> Self {
        Self { coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        self.map_coeffs(|c| c.scale(factor))
    }

    /// Multiplies every coefficient by `c` (a series constant in `z`).
    pub fn scale_by(&self, c: &C) -> Self {
        self.map_coeffs(|a| a.mul_ref(c))
    }

    /// Multiplies by `z`; the order grows by one.
    pub fn shift_up(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(C::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    /// Divides by `z`; needs a zero constant term, the order drops by one.
    pub fn shift_down(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::InvalidInput("cannot divide by z: nonzero constant term".into()));
        }
        if self.order() == 0 {
            return Err(Error::InvalidInput("cannot divide an order-0 series by z".into()));
        }
        Ok(Self { coeffs: self.coeffs[1..].to_vec() })
    }

    /// `z d/dz`, which keeps the order.
    pub fn z_derivative(&self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c.scale(&integer_ratio(k, 1)))
                .collect(),
        }
    }

    /// `exp(self)` for a series with zero constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::InvalidInput("exp needs a zero constant term".into()));
        }
        let order = self.order();
        // E' = A' E  =>  n E_n = sum_{k=1}^{n} k A_k E_{n-k}
        let weighted: Vec<C> = self.z_derivative().coeffs;
        let mut out = Vec::with_capacity(order + 1);
        out.push(C::one());
        for n in 1..=order {
            let mut acc = C::zero();
            for k in 1..=n {
                if !weighted[k].is_zero() {
                    acc.add_assign_ref(&weighted[k].mul_ref(&out[n - k]));
                }
            }
            out.push(acc.scale(&integer_ratio(1, n)));
        }
        Ok(Self { coeffs: out })
    }

    /// `log(self)` for a series with constant term one.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::InvalidInput("log needs constant term one".into()));
        }
        let order = self.order();
        // B L' = B'  =>  n L_n = n B_n - sum_{k=1}^{n-1} k L_k B_{n-k}
        let mut out: Vec<C> = Vec::with_capacity(order + 1);
        out.push(C::zero());
        let mut weighted: Vec<C> = vec![C::zero()];
        for n in 1..=order {
            let mut acc = self.coeffs[n].scale(&integer_ratio(n, 1));
            for k in 1..n {
                if !weighted[k].is_zero() {
                    acc.sub_assign_ref(&weighted[k].mul_ref(&self.coeffs[n - k]));
                }
            }
            let ln = acc.scale(&integer_ratio(1, n));
            weighted.push(ln.scale(&integer_ratio(n, 1)));
            out.push(ln);
        }
        Ok(Self { coeffs: out })
    }

    /// `1 / self` for a series with constant term one.
    pub fn reciprocal(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::InvalidInput("reciprocal needs constant term one".into()));
        }
        let order = self.order();
        let mut out: Vec<C> = Vec::with_capacity(order + 1);
        out.push(C::one());
        for n in 1..=order {
            let mut acc = C::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    acc.sub_assign_ref(&self.coeffs[k].mul_ref(&out[n - k]));
                }
            }
            out.push(acc);
        }
        Ok(Self { coeffs: out })
    }

    /// `self(inner(z))` for `inner` with zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::InvalidInput("composition needs a zero constant term".into()));
        }
        let order = self.order().min(inner.order());
        let inner = inner.truncate(order);
        let mut acc = Self::constant(self.coeffs[order].clone(), order);
        for k in (0..order).rev() {
            acc = &acc * &inner;
            acc.coeffs[0].add_assign_ref(&self.coeffs[k]);
        }
        Ok(acc)
    }
}

impl Series<Rational> {
    /// `self(c z)`.
    pub fn scale_variable(&self, c: &Rational) -> Self {
        let mut power = <Rational as One>::one();
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| {
                let out = a * &power;
                power *= c;
                out
            })
            .collect();
        Self { coeffs }
    }

    /// `(k!)^2 [z^k]`, the count behind a doubly exponential series.
    pub fn double_factorial_count(&self, k: usize) -> Result<BigCount> {
        let f = BigInt::from(factorial(k as u64));
        integral_count(&(self.coeff(k)? * Rational::from_integer(&f * &f)))
    }
}

impl Series<UPoly> {
    /// Coefficient of `z^k u^j`.
    pub fn coeff2(&self, k: usize, j: usize) -> Result<Rational> {
        Ok(self.coeff(k)?.coeff(j))
    }

    /// Multiplies by `u`.
    pub fn times_u(&self) -> Self {
        self.map_coeffs(UPoly::times_u)
    }

    /// Sets `u = 0`.
    pub fn at_u_zero(&self) -> Series<Rational> {
        Series { coeffs: self.coeffs.iter().map(UPoly::at_zero).collect() }
    }
}

impl<'a, C: Coefficient> Add for &'a Series<C> {
    type Output = Series<C>;
    fn add(self, rhs: Self) -> Series<C> {
        let order = self.order().min(rhs.order());
        let coeffs = (0..=order)
            .map(|k| {
                let mut c = self.coeffs[k].clone();
                c.add_assign_ref(&rhs.coeffs[k]);
                c
            })
            .collect();
        Series { coeffs }
    }
}

impl<'a, C: Coefficient> Sub for &'a Series<C> {
    type Output = Series<C>;
    fn sub(self, rhs: Self) -> Series<C> {
        let order = self.order().min(rhs.order());
        let coeffs = (0..=order)
            .map(|k| {
                let mut c = self.coeffs[k].clone();
                c.sub_assign_ref(&rhs.coeffs[k]);
                c
            })
            .collect();
        Series { coeffs }
    }
}

impl<'a, C: Coefficient> Neg for &'a Series<C> {
    type Output = Series<C>;
    fn neg(self) -> Series<C> {
        &Series::zero(self.order()) - self
    }
}

impl<'a, C: Coefficient> Mul for &'a Series<C> {
    type Output = Series<C>;
    fn mul(self, rhs: Self) -> Series<C> {
        let order = self.order().min(rhs.order());
        let mut coeffs = vec![C::zero(); order + 1];
        for (i, a) in self.coeffs.iter().take(order + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(order + 1 - i).enumerate() {
                if !b.is_zero() {
                    coeffs[i + j].add_assign_ref(&a.mul_ref(b));
                }
            }
        }
        Series { coeffs }
    }
}

/// Converts a rational that must be a non-negative integer.
pub(crate) fn integral_count(r: &Rational) -> Result<BigCount> {
    if !r.is_integer() || r.is_negative() {
        return Err(Error::Contract(format!("expected a non-negative integer, got {r}")));
    }
    Ok(r.to_integer().to_biguint().unwrap_or_else(BigUint::zero))
}

fn check_univariate_order(order: usize) -> Result<()> {
    if order == 0 {
        return Err(Error::InvalidInput("truncation order must be positive".into()));
    }
    check_limit("univariate truncation order", order, UNIVARIATE_MAX_ORDER)
}

/// The tree function `T = z exp(T)` by fixed-point iteration.
///
/// Each pass fixes at least one more coefficient because `T` has no
/// constant term, so exactly `order` passes are run; pass `i` only works
/// to order `i`.
pub fn series_tree_t(order: usize) -> Result<Series<Rational>> {
    check_univariate_order(order)?;
    let mut t = Series::<Rational>::zero(0);
    for _ in 0..order {
        t = t.exp()?.shift_up();
    }
    Ok(t)
}

fn half_tree_at_2z(order: usize) -> Result<Series<Rational>> {
    // T(2z)/2
    let t = series_tree_t(order)?;
    Ok(t.scale_variable(&Rational::from_integer(2.into()))
        .scale(&integer_ratio(1, 2)))
}

/// `F(z) = T(2z) + ln(1 - T(2z)/2)`; `F_n = (n!)^2 [z^n] F`.
pub fn series_f(order: usize) -> Result<Series<Rational>> {
    let half = half_tree_at_2z(order)?;
    let t2 = half.scale(&Rational::from_integer(2.into()));
    let one_minus = &Series::one(order) - &half;
    Ok(&t2 + &one_minus.log()?)
}

/// `C(z) = ln(1 / (1 - T(2z)/2))`.
pub fn series_c(order: usize) -> Result<Series<Rational>> {
    let half = half_tree_at_2z(order)?;
    let one_minus = &Series::one(order) - &half;
    Ok(-&one_minus.log()?)
}

/// `M(z) = 1 / (1 - T(2z)/2)`.
pub fn series_m(order: usize) -> Result<Series<Rational>> {
    let half = half_tree_at_2z(order)?;
    (&Series::one(order) - &half).reciprocal()
}

/// `Q(z,u) = z exp(Q (2 + u (1 - Q)))` and the generating functions built
/// from it, all with coefficients `z^n u^(n-m) / (n! m!)`.
#[derive(Debug, Clone)]
pub struct BivariateSeries {
    pub order: usize,
    pub q: Series<UPoly>,
    /// `ln(Q (1 - Q) / z)`, tree parking functions.
    pub f_tilde: Series<UPoly>,
    /// `ln(1 / ((1 - Q)(1 - u Q)))`, connected mapping parking functions.
    pub c_tilde: Series<UPoly>,
    /// `1 / ((1 - Q)(1 - u Q))`, mapping parking functions.
    pub m_tilde: Series<UPoly>,
}

fn fixed_point_q(order: usize) -> Result<Series<UPoly>> {
    let two = UPoly::constant(Rational::from_integer(2.into()));
    let mut q = Series::<UPoly>::zero(0);
    for _ in 0..order {
        let q_sq = &q * &q;
        // Q (2 + u - u Q) = 2Q + uQ - uQ^2
        let exponent = &(&q.scale_by(&two) + &q.times_u()) - &q_sq.times_u();
        q = exponent.exp()?.shift_up();
    }
    Ok(q)
}

pub fn series_q_bivariate(order: usize) -> Result<BivariateSeries> {
    if order == 0 {
        return Err(Error::InvalidInput("truncation order must be positive".into()));
    }
    check_limit("bivariate truncation order", order, BIVARIATE_MAX_ORDER)?;
    // one extra order so that Q(1-Q)/z is still known to `order`
    let q_ext = fixed_point_q(order + 1)?;
    let q = q_ext.truncate(order);
    let one = Series::<UPoly>::one(order);
    let one_minus_q = &one - &q;
    let one_minus_uq = &one - &q.times_u();
    let product = &one_minus_q * &one_minus_uq;
    let m_tilde = product.reciprocal()?;
    let c_tilde = -&product.log()?;
    let q_one_minus_q = &q_ext * &(&Series::one(order + 1) - &q_ext);
    let f_tilde = q_one_minus_q.shift_down()?.log()?;
    Ok(BivariateSeries { order, q, f_tilde, c_tilde, m_tilde })
}

impl BivariateSeries {
    fn count(&self, series: &Series<UPoly>, n: usize, m: usize) -> Result<BigCount> {
        if m > n {
            return Err(Error::InvalidInput(format!("need m <= n, got m = {m}, n = {n}")));
        }
        let scale = BigInt::from(factorial(n as u64) * factorial(m as u64));
        integral_count(&(series.coeff2(n, n - m)? * Rational::from_integer(scale)))
    }

    /// `M_{n,m} = n! m! [z^n u^(n-m)] M~`.
    pub fn count_m(&self, n: usize, m: usize) -> Result<BigCount> {
        self.count(&self.m_tilde, n, m)
    }

    /// `F_{n,m} = n! m! [z^n u^(n-m)] F~`.
    pub fn count_f(&self, n: usize, m: usize) -> Result<BigCount> {
        self.count(&self.f_tilde, n, m)
    }

    /// `C_{n,m} = n! m! [z^n u^(n-m)] C~`.
    pub fn count_c(&self, n: usize, m: usize) -> Result<BigCount> {
        self.count(&self.c_tilde, n, m)
    }
}
