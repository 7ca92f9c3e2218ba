//! Asymptotic formulas, exact probabilities and Monte-Carlo estimates.
//!
//! With `rho = m/n` the probability `p_{n,m} = M_{n,m} / n^(n+m)` that a
//! random mapping and a random sequence form a parking function tends to a
//! positive constant below `rho = 1/2`, decays like `n^(-1/6)` at
//! `rho = 1/2`, and exponentially above it.

use std::f64::consts::{E, LN_2, PI};

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::enumerate::PruferCode;
use crate::error::{check_limit, Error, Result};
use crate::exact::{exact_f_n, exact_m_nm, Rational};
use crate::graph::{MappingFn, RootedTree};
use crate::park::Parker;

/// `Gamma(2/3)` to double precision.
pub const GAMMA_TWO_THIRDS: f64 = 1.354_117_939_426_400_4;
/// Default half-width of the band around `rho = 1/2` treated as critical.
pub const DEFAULT_DELTA: f64 = 0.05;
/// Largest `n` accepted by [`prob_exact`].
pub const PROB_EXACT_MAX_N: usize = 2000;
/// Trials handled by one random stream in [`mc_probability`].
pub const MC_CHUNK: u64 = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    SubCritical,
    Critical,
    SuperCritical,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::SubCritical => "sub-critical",
            Regime::Critical => "critical",
            Regime::SuperCritical => "super-critical",
        }
    }

    /// Regime of `m/n` with a critical band of half-width `delta`.
    pub fn classify(n: usize, m: usize, delta: f64) -> Self {
        let rho = m as f64 / n as f64;
        if 2 * m == n || (rho - 0.5).abs() < delta {
            Regime::Critical
        } else if rho < 0.5 {
            Regime::SubCritical
        } else {
            Regime::SuperCritical
        }
    }
}

/// Asymptotic estimate of `M_{n,m}`, kept as a natural logarithm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeEstimate {
    pub regime: Regime,
    pub n: usize,
    pub m: usize,
    pub ln_estimate: f64,
}

impl RegimeEstimate {
    /// The estimate itself; infinite once it leaves the `f64` range.
    pub fn estimate(&self) -> f64 {
        self.ln_estimate.exp()
    }

    /// The estimate divided by `n^(n+m)`.
    pub fn probability(&self) -> f64 {
        (self.ln_estimate - (self.n + self.m) as f64 * (self.n as f64).ln()).exp()
    }
}

fn ln_factorial(k: usize) -> f64 {
    libm::lgamma(k as f64 + 1.0)
}

/// Asymptotic value of `M_{n,m}` for `1 <= m <= n`.
///
/// Inside the band `|m/n - 1/2| < delta` the estimate is
/// `C_{1/2} n^(-1/6) n^(n+m)`, which at `m = n/2` is the critical formula.
pub fn asymp_m(n: usize, m: usize, delta: f64) -> Result<RegimeEstimate> {
    if m == 0 || m > n {
        return Err(Error::InvalidInput(format!("need 1 <= m <= n, got n = {n}, m = {m}")));
    }
    let regime = Regime::classify(n, m, delta);
    let (nf, mf) = (n as f64, m as f64);
    let ln_n = nf.ln();
    let ln_estimate = match regime {
        Regime::SubCritical => (nf + mf + 0.5) * ln_n + 0.5 * (nf - 2.0 * mf).ln() - (nf - mf).ln(),
        Regime::Critical => c_half().ln() + (nf + mf - 1.0 / 6.0) * ln_n,
        Regime::SuperCritical => {
            ln_factorial(m) - ln_factorial(n - m) + (2.0 * nf - mf + 1.5) * ln_n
                + (2.0 * mf - nf + 1.0) * LN_2
                - 2.5 * (2.0 * mf - nf).ln()
        }
    };
    Ok(RegimeEstimate { regime, n, m, ln_estimate })
}

/// `C_<(rho) = sqrt(1 - 2 rho) / (1 - rho)`.
pub fn c_less(rho: f64) -> f64 {
    (1.0 - 2.0 * rho).sqrt() / (1.0 - rho)
}

/// `C_{1/2} = sqrt(6/pi) Gamma(2/3) / 3^(1/3)`.
pub fn c_half() -> f64 {
    (6.0 / PI).sqrt() * libm::tgamma(2.0 / 3.0) / 3f64.cbrt()
}

/// `C_>(rho) = 2 sqrt(rho / ((1 - rho)(2 rho - 1)^5))`.
pub fn c_greater(rho: f64) -> f64 {
    2.0 * (rho / ((1.0 - rho) * (2.0 * rho - 1.0).powi(5))).sqrt()
}

/// `D_>(rho) = (4 rho / e^2)^rho e / (2 (1 - rho)^(1 - rho))`.
pub fn d_greater(rho: f64) -> f64 {
    (4.0 * rho / (E * E)).powf(rho) * E / (2.0 * (1.0 - rho).powf(1.0 - rho))
}

/// Constants of the limiting probability for a fixed load factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "regime", rename_all = "kebab-case")]
pub enum ProbConstants {
    SubCritical { c_less: f64 },
    Critical { c_half: f64 },
    SuperCritical { c_greater: f64, d_greater: f64 },
}

impl ProbConstants {
    /// `p_{n, rho n}` predicted from the constants.
    pub fn probability(&self, n: usize) -> f64 {
        let nf = n as f64;
        match *self {
            ProbConstants::SubCritical { c_less } => c_less,
            ProbConstants::Critical { c_half } => c_half * nf.powf(-1.0 / 6.0),
            ProbConstants::SuperCritical { c_greater, d_greater } => {
                (c_greater.ln() - nf.ln() + nf * d_greater.ln()).exp()
            }
        }
    }
}

pub fn prob_constants(rho: f64) -> Result<ProbConstants> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::InvalidInput(format!("load factor must lie in (0, 1), got {rho}")));
    }
    Ok(if rho < 0.5 {
        ProbConstants::SubCritical { c_less: c_less(rho) }
    } else if rho == 0.5 {
        ProbConstants::Critical { c_half: c_half() }
    } else {
        ProbConstants::SuperCritical { c_greater: c_greater(rho), d_greater: d_greater(rho) }
    })
}

/// Limiting probability `L(rho)` on `[0, 1]`.
pub fn limit_l(rho: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::InvalidInput(format!("load factor must lie in [0, 1], got {rho}")));
    }
    Ok(if rho <= 0.5 { c_less(rho) } else { 0.0 })
}

/// `ln x` for an arbitrarily large positive integer.
pub fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().map_or(f64::NAN, f64::ln);
    }
    let shift = bits - 64;
    (x >> shift).to_f64().map_or(f64::NAN, f64::ln) + shift as f64 * LN_2
}

/// `M_{n,m} / n^(n+m)` with numerator and denominator kept apart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactProbability {
    pub numer: BigUint,
    pub denom: BigUint,
}

impl ExactProbability {
    pub fn to_rational(&self) -> Rational {
        Rational::new(BigInt::from(self.numer.clone()), BigInt::from(self.denom.clone()))
    }

    /// Correctly scaled even when both parts overflow `f64`.
    pub fn to_f64(&self) -> f64 {
        if self.numer.is_zero() {
            return 0.0;
        }
        let shift = self.denom.bits() as i64 - self.numer.bits() as i64 + 64;
        let q = if shift >= 0 {
            (&self.numer << shift as u64) / &self.denom
        } else {
            &self.numer / (&self.denom << (-shift) as u64)
        };
        libm::ldexp(q.to_f64().unwrap_or(f64::NAN), -shift as i32)
    }

    pub fn ln(&self) -> f64 {
        ln_big(&self.numer) - ln_big(&self.denom)
    }
}

pub fn prob_exact(n: usize, m: usize) -> Result<ExactProbability> {
    check_limit("prob_exact n", n, PROB_EXACT_MAX_N)?;
    let numer = exact_m_nm(n as u64, m as u64)?;
    let denom = BigUint::from(n).pow((n + m) as u32);
    Ok(ExactProbability { numer, denom })
}

/// Uniform rooted labelled tree: random Prüfer code and random root.
pub fn sample_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<RootedTree> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    let code = (0..n.saturating_sub(2)).map(|_| rng.gen_range(1..=n)).collect();
    let root = rng.gen_range(1..=n);
    Ok(PruferCode::new(n, code, root)?.decode())
}

/// Uniform mapping `[n] -> [n]`.
pub fn sample_mapping<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<MappingFn> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    Ok(MappingFn::from_succ_unchecked((0..n).map(|_| rng.gen_range(1..=n)).collect()))
}

/// Uniform sequence in `[n]^m`.
pub fn sample_sequence<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Vec<usize> {
    (0..m).map(|_| rng.gen_range(1..=n)).collect()
}

/// Generator for chunk `chunk` of a run seeded with `seed`.
pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub successes: u64,
    pub trials: u64,
    pub estimate: f64,
    pub stderr: f64,
}

/// Fraction of random (mapping, sequence) pairs that park.
///
/// Trials are split into chunks of [`MC_CHUNK`], each with its own stream,
/// so the result does not depend on the number of worker threads.
pub fn mc_probability(n: usize, m: usize, trials: u64, seed: u64) -> Result<McEstimate> {
    if n == 0 || m > n {
        return Err(Error::InvalidInput(format!("need n >= 1 and m <= n, got n = {n}, m = {m}")));
    }
    if trials == 0 {
        return Err(Error::InvalidInput("at least one trial is needed".into()));
    }
    let chunks = trials.div_ceil(MC_CHUNK);
    let successes: u64 = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = chunk_rng(seed, chunk);
            let mut parker = Parker::new(n);
            let count = MC_CHUNK.min(trials - chunk * MC_CHUNK);
            let mut succ = vec![0usize; n];
            let mut prefs = vec![0usize; m];
            let mut hits = 0;
            for _ in 0..count {
                succ.iter_mut().for_each(|x| *x = rng.gen_range(1..=n));
                prefs.iter_mut().for_each(|x| *x = rng.gen_range(1..=n));
                let f = MappingFn::from_succ_unchecked(std::mem::take(&mut succ));
                if parker.parks_unchecked(&f, &prefs) {
                    hits += 1;
                }
                succ = f.into_successors();
            }
            hits
        })
        .sum();
    let estimate = successes as f64 / trials as f64;
    let stderr = (estimate * (1.0 - estimate) / trials as f64).sqrt();
    Ok(McEstimate { successes, trials, estimate, stderr })
}

/// `E(X_n) = F_n / n^(n-1)`, parking functions per tree on average.
pub fn expected_pfs_per_tree(n: usize) -> Result<Rational> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    Ok(Rational::new(
        BigInt::from(exact_f_n(n as u64)),
        BigInt::from(BigUint::from(n).pow(n as u32 - 1)),
    ))
}

/// `ln` of `sqrt(2 pi) 2^(n+1) n^(n-1/2) / e^n`.
pub fn ln_expected_pfs_asymptotic(n: usize) -> f64 {
    let nf = n as f64;
    0.5 * (2.0 * PI).ln() + (nf + 1.0) * LN_2 + (nf - 0.5) * nf.ln() - nf
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[test]
    fn gamma_constant() {
        assert!((libm::tgamma(2.0 / 3.0) - GAMMA_TWO_THIRDS).abs() < 1e-14);
        assert!((c_half() - 1.297_53).abs() < 1e-4);
        let alt = 2f64.sqrt() * 3f64.powf(1.0 / 6.0) * GAMMA_TWO_THIRDS / PI.sqrt();
        assert!((c_half() - alt).abs() < 1e-12);
    }

    #[test]
    fn constants_and_limit() {
        assert!((c_less(0.3) - 0.903_508).abs() < 1e-5);
        assert!((c_less(1e-9) - 1.0).abs() < 1e-6);
        assert_eq!(limit_l(0.0).unwrap(), 1.0);
        assert_eq!(limit_l(0.5).unwrap(), 0.0);
        assert_eq!(limit_l(0.8).unwrap(), 0.0);
        assert!(limit_l(1.5).is_err());
        assert!(prob_constants(0.0).is_err());
        assert!(matches!(prob_constants(0.5).unwrap(), ProbConstants::Critical { .. }));
        let mut last = 1.0;
        for i in 1..=50 {
            let l = limit_l(i as f64 / 100.0).unwrap();
            assert!(l < last);
            last = l;
        }
    }

    #[test]
    fn exact_probabilities() {
        assert_eq!(prob_exact(1, 1).unwrap().to_f64(), 1.0);
        assert_eq!(prob_exact(2, 2).unwrap().to_rational(), Rational::new(3.into(), 4.into()));
        for n in 1..10 {
            assert_eq!(prob_exact(n, 0).unwrap().to_f64(), 1.0);
        }
        let p = prob_exact(400, 400).unwrap();
        assert!((p.to_f64().ln() - p.ln()).abs() < 1e-9);
        assert!(prob_exact(PROB_EXACT_MAX_N + 1, 1).is_err());
    }

    #[test]
    fn super_critical_branch_at_full_load() {
        // reduces to sqrt(2 pi) 2^(n+1) n^(2n) / (sqrt(n) e^n)
        let n = 500usize;
        let nf = n as f64;
        let direct = 0.5 * (2.0 * PI).ln() + (nf + 1.0) * LN_2 + (2.0 * nf - 0.5) * nf.ln() - nf;
        let est = asymp_m(n, n, DEFAULT_DELTA).unwrap();
        assert_eq!(est.regime, Regime::SuperCritical);
        assert!((est.ln_estimate - direct).abs() < 1e-3);
    }

    #[test]
    fn sub_critical_branch_accuracy() {
        let est = asymp_m(100, 30, DEFAULT_DELTA).unwrap();
        assert_eq!(est.regime, Regime::SubCritical);
        let exact = ln_big(&exact_m_nm(100, 30).unwrap());
        assert!(((exact - est.ln_estimate).exp() - 1.0).abs() < 0.1);
    }

    #[test]
    fn critical_branch_tag() {
        let est = asymp_m(200, 100, 0.0).unwrap();
        assert_eq!(est.regime, Regime::Critical);
        assert!((est.probability() - c_half() * 200f64.powf(-1.0 / 6.0)).abs() < 1e-12);
        assert!(asymp_m(10, 0, DEFAULT_DELTA).is_err());
    }

    #[test]
    fn expected_value() {
        assert_eq!(expected_pfs_per_tree(1).unwrap(), Rational::from_integer(1.into()));
        assert_eq!(expected_pfs_per_tree(2).unwrap(), Rational::from_integer(3.into()));
        let mut last = f64::INFINITY;
        for n in [50usize, 100, 200, 400] {
            let e = expected_pfs_per_tree(n).unwrap();
            let ln_e = ln_big(&e.numer().to_biguint().unwrap()) - ln_big(&e.denom().to_biguint().unwrap());
            let dev = (ln_e - ln_expected_pfs_asymptotic(n)).abs();
            assert!(dev < last);
            last = dev;
        }
        assert!(last < 0.015);
    }

    #[test]
    fn samplers_single_node() {
        let mut rng = chunk_rng(1, 0);
        assert_eq!(sample_tree(1, &mut rng).unwrap().parents(), &[0]);
        assert_eq!(sample_mapping(1, &mut rng).unwrap().successors(), &[1]);
    }

    #[test]
    fn tree_sampler_uniform_on_three_nodes() {
        let mut rng = chunk_rng(2024, 0);
        let draws = 90_000;
        let mut cells: HashMap<Vec<usize>, u64> = HashMap::new();
        for _ in 0..draws {
            *cells.entry(sample_tree(3, &mut rng).unwrap().parents().to_vec()).or_default() += 1;
        }
        assert_eq!(cells.len(), 9);
        let expected = draws as f64 / 9.0;
        let chi2: f64 = cells.values().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        // 8 degrees of freedom, p = 0.001
        assert!(chi2 < 26.12, "chi2 = {chi2}");
    }

    #[test]
    fn monte_carlo_basics() {
        let e = mc_probability(4, 0, 1000, 7).unwrap();
        assert_eq!(e.estimate, 1.0);
        let a = mc_probability(6, 3, 5000, 99).unwrap();
        let b = mc_probability(6, 3, 5000, 99).unwrap();
        assert_eq!(a, b);
        let p = prob_exact(2, 2).unwrap().to_f64();
        let e = mc_probability(2, 2, 200_000, 3).unwrap();
        assert!((e.estimate - p).abs() < 4.0 * e.stderr);
        assert!(mc_probability(3, 4, 10, 0).is_err());
        assert!(mc_probability(3, 2, 0, 0).is_err());
    }
}
