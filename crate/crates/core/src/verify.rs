//! Quick invariant sweep used by the `verify` command.

use serde::Serialize;

use crate::bijection::{phi_general, phi_general_inverse};
use crate::enumerate::{all_mappings, all_sequences, all_trees, brute_c, brute_count, count_pf_single, Family};
use crate::error::Result;
use crate::exact::{
    classic_p, exact_c_n, exact_f_nm, exact_m_n, exact_m_nm, series_c, series_f, series_m, series_q_bivariate, Series,
};
use crate::graph::{MappingFn, ParkOutcome, ParkSeq};
use crate::park::{is_parking_function, park};
use crate::structure::{char_mapping_full, char_tree_subtree, count_ordered_tree_pfs, make_chain, star_count};

/// Largest size the sweep accepts.
pub const VERIFY_MAX_N: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn report(name: &'static str, outcome: Result<Option<String>>) -> CheckReport {
    match outcome {
        Ok(None) => CheckReport { name, passed: true, detail: String::new() },
        Ok(Some(why)) => CheckReport { name, passed: false, detail: why },
        Err(e) => CheckReport { name, passed: false, detail: e.to_string() },
    }
}

fn brute_vs_exact(max_n: usize) -> Result<Option<String>> {
    for n in 1..=max_n {
        for m in 0..=n {
            let (bf, bm) = (
                brute_count(Family::Trees, n, m, max_n)?,
                brute_count(Family::Mappings, n, m, max_n)?,
            );
            let (ef, em) = (exact_f_nm(n as u64, m as u64)?, exact_m_nm(n as u64, m as u64)?);
            if bf != ef || bm != em {
                return Ok(Some(format!("n = {n}, m = {m}: brute ({bf}, {bm}) vs exact ({ef}, {em})")));
            }
        }
        if brute_c(n, n)? != exact_c_n(n as u64) {
            return Ok(Some(format!("connected count differs at n = {n}")));
        }
    }
    Ok(None)
}

fn relations() -> Result<Option<String>> {
    for n in 1..=30u64 {
        for m in 0..=n {
            if exact_m_nm(n, m)? != exact_f_nm(n, m)? * n {
                return Ok(Some(format!("M != nF at n = {n}, m = {m}")));
            }
        }
    }
    Ok(None)
}

fn series(order: usize) -> Result<Option<String>> {
    let (f, c, m) = (series_f(order)?, series_c(order)?, series_m(order)?);
    if c.exp()? != m {
        return Ok(Some("M != exp(C)".into()));
    }
    if &Series::one(order) + &f.z_derivative() != m {
        return Ok(Some("M != 1 + zF'".into()));
    }
    for n in 1..=order {
        if m.double_factorial_count(n)? != exact_m_n(n as u64) {
            return Ok(Some(format!("univariate M differs at n = {n}")));
        }
    }
    let bi = series_q_bivariate(order.min(8))?;
    for n in 1..=bi.order {
        for k in 0..=n {
            if bi.count_m(n, k)? != exact_m_nm(n as u64, k as u64)? {
                return Ok(Some(format!("bivariate M differs at n = {n}, m = {k}")));
            }
        }
    }
    Ok(None)
}

fn bijection(max_n: usize) -> Result<Option<String>> {
    for n in 1..=max_n {
        for m in 0..=n {
            let mut images = 0u64;
            for t in all_trees(n)? {
                for s in all_sequences(n, m) {
                    let s = ParkSeq::new(s);
                    let ParkOutcome::Success(pos) = park(&t, &s)? else { continue };
                    for w in 1..=n {
                        let f = phi_general(&t, &s, w)?;
                        if park(&f, &s)? != ParkOutcome::Success(pos.clone()) {
                            return Ok(Some(format!("parking paths differ at n = {n}, m = {m}")));
                        }
                        if phi_general_inverse(&f, &s)? != (t.clone(), w) {
                            return Ok(Some(format!("round trip fails at n = {n}, m = {m}")));
                        }
                        images += 1;
                    }
                }
            }
            if crate::BigCount::from(images) != exact_m_nm(n as u64, m as u64)? {
                return Ok(Some(format!("image size differs at n = {n}, m = {m}")));
            }
        }
    }
    Ok(None)
}

fn characterizations(max_n: usize) -> Result<Option<String>> {
    for n in 1..=max_n {
        for f in all_mappings(n)? {
            for s in all_sequences(n, n) {
                let s = ParkSeq::new(s);
                if char_mapping_full(&f, &s)? != is_parking_function(&f, &s)? {
                    return Ok(Some(format!("mapping criterion fails for {:?}", f.successors())));
                }
            }
        }
        for t in all_trees(n)? {
            for m in 0..=n {
                for s in all_sequences(n, m) {
                    let s = ParkSeq::new(s);
                    if char_tree_subtree(&t, &s)? != is_parking_function(&t, &s)? {
                        return Ok(Some(format!("tree criterion fails for {:?}", t.parents())));
                    }
                }
            }
        }
    }
    Ok(None)
}

fn extremal_and_ordered(max_n: usize) -> Result<Option<String>> {
    for n in 1..=max_n {
        for m in 0..=n {
            let lower = star_count(n, m);
            let upper = classic_p(n as u64, m as u64)?;
            if count_pf_single(&make_chain(n), m)? != upper {
                return Ok(Some(format!("chain count differs at n = {n}, m = {m}")));
            }
            for t in all_trees(n)? {
                let c = count_pf_single(&t, m)?;
                if c > upper || c < lower {
                    return Ok(Some(format!("bounds fail at n = {n}, m = {m}")));
                }
            }
        }
        let fact = crate::exact::factorial(n as u64);
        for t in all_trees(n)? {
            if count_ordered_tree_pfs(&t)? != fact {
                return Ok(Some(format!("ordered count differs for {:?}", t.parents())));
            }
        }
    }
    Ok(None)
}

fn golden_mapping() -> Result<Option<String>> {
    let f = MappingFn::new(vec![5, 7, 1, 12, 13, 10, 14, 10, 2, 13, 5, 18, 12, 7, 5, 14, 13, 5, 14])?;
    let s = ParkSeq::new(vec![10, 5, 14, 10, 13, 14]);
    if park(&f, &s)? != ParkOutcome::Success(vec![10, 5, 14, 13, 12, 7]) {
        return Ok(Some("unexpected output function".into()));
    }
    let s7 = ParkSeq::new(vec![10, 5, 14, 10, 13, 14, 7]);
    if park(&f, &s7)? != (ParkOutcome::Failure { driver: 7 }) {
        return Ok(Some("seventh driver should fail".into()));
    }
    Ok(None)
}

/// Runs every check on sizes up to `max_n` (capped at [`VERIFY_MAX_N`]).
pub fn run_all(max_n: usize) -> Vec<CheckReport> {
    let max_n = max_n.clamp(1, VERIFY_MAX_N);
    let small = max_n.min(4);
    vec![
        report("golden 19-node mapping", golden_mapping()),
        report("brute force equals closed forms", brute_vs_exact(max_n)),
        report("M = nF relation", relations()),
        report("series identities", series(12)),
        report("bijection round trip", bijection(small.min(3))),
        report("characterizations", characterizations(small)),
        report("extremal bounds and ordered counts", extremal_and_ordered(max_n)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_sweep_passes() {
        for r in run_all(3) {
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
    }
}
