//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Oracles here are computed independently of the library where
//! the library value is the thing under test.

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use parkgraph::asymptotics::{asymp_m, mc_probability, prob_exact, DEFAULT_DELTA};
use parkgraph::bijection::phi_general;
use parkgraph::enumerate::{
    all_mappings, all_sequences, all_trees, brute_c, brute_f, brute_m, count_pf_single,
};
use parkgraph::exact::{
    exact_c_n, exact_f_nm, exact_m_nm, series_c, series_f, series_m, series_q_bivariate, BivariateSeries,
    Series,
};
use parkgraph::structure::{char_mapping_full, char_tree_subtree, count_ordered_tree_pfs, make_chain, make_star};
use parkgraph::{is_parking_function, park, MappingFn, ParkOutcome, ParkSeq};

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn big(x: u128) -> BigUint {
    BigUint::from(x)
}

fn falling(x: u128, k: u128) -> u128 {
    if k > x {
        return 0;
    }
    (0..k).map(|i| x - i).product()
}

fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    let shift = bits.saturating_sub(64);
    (x >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// Bivariate series to order 40, shared by two criteria.
fn bivariate() -> &'static BivariateSeries {
    use std::sync::OnceLock;
    static CELL: OnceLock<BivariateSeries> = OnceLock::new();
    CELL.get_or_init(|| series_q_bivariate(40).expect("order 40 is within limits"))
}

fn criterion_1() -> Check {
    ensure(brute_f(1, 1).unwrap() == big(1), || "F_1 != 1".into())?;
    ensure(brute_f(2, 2).unwrap() == big(6), || "F_2 != 6".into())?;
    ensure(brute_c(2, 2).unwrap() == big(10), || "C_2 != 10".into())?;
    ensure(brute_m(2, 2).unwrap() == big(12), || "M_2 != 12".into())?;
    ensure(exact_c_n(2) == big(10), || "closed form C_2 != 10".into())?;
    let mut cells: Vec<(usize, usize)> = (1..=4).flat_map(|n| (0..=n).map(move |m| (n, m))).collect();
    cells.extend([0, 1, 3, 5].map(|m| (5, m)));
    for (n, m) in cells {
        let (bf, bm) = (brute_f(n, m).unwrap(), brute_m(n, m).unwrap());
        let (ef, em) = (exact_f_nm(n as u64, m as u64).unwrap(), exact_m_nm(n as u64, m as u64).unwrap());
        ensure(bf == ef, || format!("F({n},{m}): brute {bf} vs exact {ef}"))?;
        ensure(bm == em, || format!("M({n},{m}): brute {bm} vs exact {em}"))?;
    }
    Ok(())
}

fn criterion_2() -> Check {
    for n in 1..=40u64 {
        for m in 0..=n {
            let total = exact_m_nm(n, m).unwrap();
            ensure((&total % n).is_zero(), || format!("n does not divide M({n},{m})"))?;
        }
    }
    // F from the tree series, M from the closed form
    let bi = bivariate();
    for n in 1..=40usize {
        for m in 0..=n {
            let f = bi.count_f(n, m).unwrap();
            let total = exact_m_nm(n as u64, m as u64).unwrap();
            ensure(total == &f * n, || format!("M({n},{m}) != n F({n},{m})"))?;
        }
    }
    let (fs, ms) = (series_f(50).unwrap(), series_m(50).unwrap());
    for n in 1..=50 {
        let f = fs.double_factorial_count(n).unwrap();
        let m = ms.double_factorial_count(n).unwrap();
        ensure(m == &f * n, || format!("M_{n} != n F_{n}"))?;
    }
    Ok(())
}

fn criterion_3() -> Check {
    let bi = bivariate();
    for n in 1..=10usize {
        for m in 0..=n {
            let s = bi.count_m(n, m).unwrap();
            let e = exact_m_nm(n as u64, m as u64).unwrap();
            ensure(s == e, || format!("series M({n},{m}) = {s}, closed form {e}"))?;
        }
    }
    let order = 40;
    let (f, c, m) = (series_f(order).unwrap(), series_c(order).unwrap(), series_m(order).unwrap());
    ensure(c.exp().unwrap() == m, || "M != exp(C)".into())?;
    ensure(&Series::one(order) + &f.z_derivative() == m, || "M != 1 + zF'".into())
}

fn criterion_4() -> Check {
    let mut cells: Vec<(usize, usize)> = (1..=3).flat_map(|n| (0..=n).map(move |m| (n, m))).collect();
    cells.extend([(4, 0), (4, 2), (4, 4)]);
    for (n, m) in cells {
        let mut image: HashSet<(Vec<usize>, Vec<usize>)> = HashSet::new();
        let mut triples = 0u64;
        for t in all_trees(n).unwrap() {
            for s in all_sequences(n, m) {
                let s = ParkSeq::new(s);
                let ParkOutcome::Success(pi) = park(&t, &s).unwrap() else { continue };
                for w in 1..=n {
                    triples += 1;
                    let f = phi_general(&t, &s, w).unwrap();
                    ensure(park(&f, &s).unwrap() == ParkOutcome::Success(pi.clone()), || {
                        format!("output function changed at n = {n}, m = {m}")
                    })?;
                    image.insert((f.successors().to_vec(), s.prefs().to_vec()));
                }
            }
        }
        ensure(image.len() as u64 == triples, || format!("not injective at n = {n}, m = {m}"))?;
        // every parking pair is hit: count them directly
        let mut pairs = 0u64;
        for f in all_mappings(n).unwrap() {
            for s in all_sequences(n, m) {
                let s = ParkSeq::new(s);
                if is_parking_function(&f, &s).unwrap() {
                    pairs += 1;
                    ensure(image.contains(&(f.successors().to_vec(), s.prefs().to_vec())), || {
                        format!("pair missed at n = {n}, m = {m}")
                    })?;
                }
            }
        }
        ensure(pairs == triples, || format!("image size {triples} vs {pairs} pairs"))?;
        let expected = exact_m_nm(n as u64, m as u64).unwrap();
        ensure(big(pairs as u128) == expected, || format!("cardinality {pairs} vs M = {expected}"))?;
    }
    Ok(())
}

fn criterion_5() -> Check {
    for n in 1..=4 {
        for f in all_mappings(n).unwrap() {
            for s in all_sequences(n, n) {
                let s = ParkSeq::new(s);
                ensure(char_mapping_full(&f, &s).unwrap() == is_parking_function(&f, &s).unwrap(), || {
                    format!("mapping criterion disagrees on {:?} {:?}", f.successors(), s.prefs())
                })?;
            }
        }
        for t in all_trees(n).unwrap() {
            for m in 0..=n {
                for s in all_sequences(n, m) {
                    let s = ParkSeq::new(s);
                    ensure(char_tree_subtree(&t, &s).unwrap() == is_parking_function(&t, &s).unwrap(), || {
                        format!("subtree criterion disagrees on {:?} {:?}", t.parents(), s.prefs())
                    })?;
                }
            }
        }
    }
    Ok(())
}

fn criterion_6() -> Check {
    for n in 1..=5u128 {
        for m in 0..=n {
            let star = falling(n, m) + if m >= 2 { m * (m - 1) / 2 * falling(n - 1, m - 1) } else { 0 };
            let chain = if m == 0 { 1 } else { (n + 1 - m) * (n + 1).pow(m as u32 - 1) };
            let (nu, mu) = (n as usize, m as usize);
            let s_star = count_pf_single(&make_star(nu), mu).unwrap();
            let s_chain = count_pf_single(&make_chain(nu), mu).unwrap();
            ensure(s_star == big(star), || format!("S(star_{n}, {m}) = {s_star}, expected {star}"))?;
            ensure(s_chain == big(chain), || format!("S(chain_{n}, {m}) = {s_chain}, expected {chain}"))?;
            for t in all_trees(nu).unwrap() {
                let c = count_pf_single(&t, mu).unwrap();
                ensure(big(star) <= c && c <= big(chain), || {
                    format!("S({:?}, {m}) = {c} outside [{star}, {chain}]", t.parents())
                })?;
            }
        }
    }
    Ok(())
}

fn criterion_7() -> Check {
    for n in 1..=5usize {
        let fact = big((1..=n as u128).product());
        for t in all_trees(n).unwrap() {
            let c = count_ordered_tree_pfs(&t).unwrap();
            ensure(c == fact, || format!("{:?}: {c} ordered parking functions", t.parents()))?;
        }
    }
    Ok(())
}

fn criterion_8() -> Check {
    const GAMMA_TWO_THIRDS: f64 = 1.354_117_939_426_400_416_945_288_028_154_5;
    let pi = std::f64::consts::PI;
    let c_less = 0.4f64.sqrt() / 0.7;
    let c_half = (6.0 / pi).sqrt() * GAMMA_TWO_THIRDS / 3f64.powf(1.0 / 3.0);
    ensure((c_half - 1.298).abs() < 1e-3, || format!("C_1/2 = {c_half}"))?;

    let ratio = prob_exact(400, 120).unwrap().to_f64() / c_less;
    ensure((0.95..=1.05).contains(&ratio), || format!("p(400,120)/C_< = {ratio}"))?;
    let mut last = f64::INFINITY;
    for n in [100usize, 200, 400] {
        let dev = (prob_exact(n, 3 * n / 10).unwrap().to_f64() / c_less - 1.0).abs();
        ensure(dev < last, || format!("sub-critical deviation not decreasing at n = {n}"))?;
        last = dev;
    }

    let mut last = f64::INFINITY;
    for n in [100usize, 250, 500, 1000] {
        let scaled = prob_exact(n, n / 2).unwrap().to_f64() * (n as f64).powf(1.0 / 6.0);
        let dev = (scaled / c_half - 1.0).abs();
        ensure(dev < last, || format!("critical deviation not decreasing at n = {n}"))?;
        last = dev;
    }
    ensure(last < 0.15, || format!("critical deviation {last} at n = 1000"))?;

    let mut last = f64::INFINITY;
    for n in [100usize, 200, 400] {
        let m = 3 * n / 4;
        let (nf, mf) = (n as f64, m as f64);
        let ln_fact = |k: usize| (1..=k).map(|i| (i as f64).ln()).sum::<f64>();
        let ln_asym = ln_fact(m) - ln_fact(n - m) + (2.0 * nf - mf + 1.5) * nf.ln()
            + (2.0 * mf - nf + 1.0) * 2f64.ln()
            - 2.5 * (2.0 * mf - nf).ln();
        let library = asymp_m(n, m, DEFAULT_DELTA).unwrap().ln_estimate;
        ensure((library - ln_asym).abs() < 1e-6, || format!("asymptotic formula differs at n = {n}"))?;
        let dev = ((ln_big(&exact_m_nm(n as u64, m as u64).unwrap()) - ln_asym).exp() - 1.0).abs();
        ensure(dev < last, || format!("super-critical deviation not decreasing at n = {n}"))?;
        last = dev;
    }
    ensure(last < 0.15, || format!("super-critical deviation {last} at n = 400"))
}

fn criterion_9() -> Check {
    for (n, m) in [(3usize, 2usize), (5, 5), (10, 4)] {
        let p = if n <= 5 {
            brute_m(n, m).unwrap().to_f64().unwrap() / (n as f64).powi((n + m) as i32)
        } else {
            prob_exact(n, m).unwrap().to_f64()
        };
        let est = mc_probability(n, m, 100_000, 0x5eed + n as u64).unwrap();
        let sigma = (p * (1.0 - p) / est.trials as f64).sqrt();
        ensure((est.estimate - p).abs() <= 4.0 * sigma, || {
            format!("({n},{m}): estimate {} vs exact {p}, sigma {sigma}", est.estimate)
        })?;
    }
    Ok(())
}

fn criterion_10() -> Check {
    let f = MappingFn::new(vec![5, 7, 1, 12, 13, 10, 14, 10, 2, 13, 5, 18, 12, 7, 5, 14, 13, 5, 14]).unwrap();
    let s = ParkSeq::new(vec![10, 5, 14, 10, 13, 14]);
    ensure(park(&f, &s).unwrap() == ParkOutcome::Success(vec![10, 5, 14, 13, 12, 7]), || {
        "wrong output function".into()
    })?;
    let s7 = ParkSeq::new(vec![10, 5, 14, 10, 13, 14, 7]);
    ensure(park(&f, &s7).unwrap() == ParkOutcome::Failure { driver: 7 }, || "seventh driver parked".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("exact counts match brute force", criterion_1),
        ("M = n F relations", criterion_2),
        ("series oracle agreement", criterion_3),
        ("bijection is bijective and keeps parking paths", criterion_4),
        ("characterizations match simulation", criterion_5),
        ("star and chain bracket every tree", criterion_6),
        ("ordered parking functions number n!", criterion_7),
        ("asymptotic convergence trends", criterion_8),
        ("Monte-Carlo consistency", criterion_9),
        ("19-node mapping golden case", criterion_10),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("criterion {:>2}: PASS  {name} ({secs:.1}s)", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2}: FAIL  {name} ({secs:.1}s): {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
