use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, ensure, Context, Result};
use serde::Serialize;

use parkgraph::asymptotics::{asymp_m, chunk_rng, mc_probability, prob_exact, sample_mapping, sample_tree};
use parkgraph::asymptotics::{DEFAULT_DELTA, PROB_EXACT_MAX_N};
use parkgraph::bijection::{phi_general, phi_general_inverse};
use parkgraph::enumerate::{brute_count, Family, DEFAULT_BRUTE_MAX_N};
use parkgraph::exact::{exact_f_nm, exact_m_nm, series_q_bivariate};
use parkgraph::io::{parse_json, to_canonical_json, GraphDoc, MappingPair, PrefsDoc, TreeTriple};
use parkgraph::{is_parking_function, park, ParkOutcome, ParkSeq, RoadNet};

use crate::output::{emit, render_rows, sig12, Format};
use crate::{CountMode, Direction, Kind};

/// Largest `n` accepted by `count --mode exact`.
const EXACT_COUNT_MAX_N: usize = 5000;
/// Largest brute-force size anyone may request through the environment.
const BRUTE_HARD_MAX_N: usize = 7;

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Parses `7`, `2..5` (inclusive) or `1,3,8`.
pub fn parse_sizes(text: &str) -> Result<Vec<usize>> {
    let text = text.trim();
    let values: Vec<usize> = if let Some((a, b)) = text.split_once("..") {
        let (a, b): (usize, usize) = (a.trim().parse()?, b.trim().trim_start_matches('=').parse()?);
        ensure!(a <= b, "empty range {text}");
        (a..=b).collect()
    } else {
        text.split(',').map(|x| x.trim().parse::<usize>()).collect::<Result<_, _>>()?
    };
    ensure!(!values.is_empty(), "empty list {text}");
    Ok(values)
}

/// Parses `0.1,0.5` or `start:stop:step`.
pub fn parse_rhos(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let values: Vec<f64> = if parts.len() == 3 {
        let (start, stop, step): (f64, f64, f64) =
            (parts[0].trim().parse()?, parts[1].trim().parse()?, parts[2].trim().parse()?);
        ensure!(step > 0.0 && stop >= start, "bad load factor range {text}");
        let steps = ((stop - start) / step + 1e-9).floor() as usize;
        (0..=steps).map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12).collect()
    } else {
        text.split(',').map(|x| x.trim().parse::<f64>()).collect::<Result<_, _>>()?
    };
    for &r in &values {
        ensure!((0.0..=1.0).contains(&r), "load factor {r} outside [0, 1]");
    }
    Ok(values)
}

fn parse_prefs(prefs: Option<&str>, prefs_file: Option<&Path>) -> Result<ParkSeq> {
    match (prefs, prefs_file) {
        (Some(list), None) => {
            if list.trim().is_empty() {
                return Ok(ParkSeq::default());
            }
            let v = list.split(',').map(|x| x.trim().parse::<usize>()).collect::<Result<Vec<_>, _>>()?;
            Ok(ParkSeq::new(v))
        }
        (None, Some(path)) => Ok(parse_json::<PrefsDoc>(&read(path)?)?.into()),
        _ => bail!("give exactly one of --prefs or --prefs-file"),
    }
}

#[derive(Serialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
enum SimulationReport {
    Success { positions: Vec<usize> },
    Failure { driver: usize },
}

pub fn simulate(
    graph: &Path,
    prefs: Option<&str>,
    prefs_file: Option<&Path>,
    format: Format,
    out: Option<&Path>,
) -> Result<ExitCode> {
    let g = parse_json::<GraphDoc>(&read(graph)?)?.into_graph()?;
    let s = parse_prefs(prefs, prefs_file)?;
    let outcome = park(&g, &s)?;
    let (report, code) = match outcome {
        ParkOutcome::Success(positions) => (SimulationReport::Success { positions }, ExitCode::SUCCESS),
        ParkOutcome::Failure { driver } => (SimulationReport::Failure { driver }, ExitCode::from(1)),
    };
    let text = match format {
        Format::Json => to_canonical_json(&report),
        Format::Csv => match &report {
            SimulationReport::Success { positions } => {
                let list: Vec<String> = positions.iter().map(usize::to_string).collect();
                format!("all {} drivers parked; positions: {}\n", positions.len(), list.join(" "))
            }
            SimulationReport::Failure { driver } => format!("driver {driver} failed\n"),
        },
    };
    emit(&text, out)?;
    Ok(code)
}

#[derive(Serialize)]
struct CountRow {
    n: usize,
    m: usize,
    #[serde(rename = "F")]
    trees: String,
    #[serde(rename = "M")]
    mappings: String,
    #[serde(rename = "match")]
    matches: bool,
}

fn brute_cap() -> Result<usize> {
    match std::env::var("PARKGRAPH_MAX_BRUTE_N") {
        Ok(v) => {
            let cap: usize = v.trim().parse().context("PARKGRAPH_MAX_BRUTE_N must be a number")?;
            ensure!(cap <= BRUTE_HARD_MAX_N, "PARKGRAPH_MAX_BRUTE_N may be at most {BRUTE_HARD_MAX_N}");
            Ok(cap)
        }
        Err(_) => Ok(DEFAULT_BRUTE_MAX_N),
    }
}

pub fn count(
    mode: CountMode,
    n_spec: &str,
    m_spec: Option<&str>,
    order: Option<usize>,
    format: Format,
    out: Option<&Path>,
) -> Result<ExitCode> {
    let sizes = parse_sizes(n_spec)?;
    ensure!(sizes.iter().all(|&n| n >= 1), "sizes must be positive");
    let drivers = m_spec.map(parse_sizes).transpose()?;
    let max_n = *sizes.iter().max().unwrap();
    let cells: Vec<(usize, usize)> = sizes
        .iter()
        .flat_map(|&n| {
            let ms: Vec<usize> = match &drivers {
                Some(ms) => ms.iter().copied().filter(|&m| m <= n).collect(),
                None => (0..=n).collect(),
            };
            ms.into_iter().map(move |m| (n, m))
        })
        .collect();

    let closed = |n: usize, m: usize| -> Result<_> {
        Ok((exact_f_nm(n as u64, m as u64)?, exact_m_nm(n as u64, m as u64)?))
    };
    let mut rows = Vec::with_capacity(cells.len());
    match mode {
        CountMode::Brute => {
            let cap = brute_cap()?;
            ensure!(max_n <= cap, "brute force is limited to n <= {cap} (set PARKGRAPH_MAX_BRUTE_N to raise it)");
            for (n, m) in cells {
                let f = brute_count(Family::Trees, n, m, cap)?;
                let mm = brute_count(Family::Mappings, n, m, cap)?;
                let matches = (f.clone(), mm.clone()) == closed(n, m)?;
                rows.push(CountRow { n, m, trees: f.to_string(), mappings: mm.to_string(), matches });
            }
        }
        CountMode::Exact => {
            ensure!(max_n <= EXACT_COUNT_MAX_N, "exact counts are limited to n <= {EXACT_COUNT_MAX_N}");
            for (n, m) in cells {
                let (f, mm) = closed(n, m)?;
                let matches = mm == &f * n;
                rows.push(CountRow { n, m, trees: f.to_string(), mappings: mm.to_string(), matches });
            }
        }
        CountMode::Series => {
            let order = order.unwrap_or(max_n);
            ensure!(order >= max_n, "truncation order {order} is below the largest n = {max_n}");
            let bi = series_q_bivariate(order)?;
            for (n, m) in cells {
                let (f, mm) = (bi.count_f(n, m)?, bi.count_m(n, m)?);
                let matches = (f.clone(), mm.clone()) == closed(n, m)?;
                rows.push(CountRow { n, m, trees: f.to_string(), mappings: mm.to_string(), matches });
            }
        }
    }
    let all_match = rows.iter().all(|r| r.matches);
    emit(&render_rows(&rows, format)?, out)?;
    Ok(if all_match { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn not_parking(what: &str) -> Result<ExitCode> {
    eprintln!("error: the preferences are not a parking function for the given {what}");
    Ok(ExitCode::from(1))
}

pub fn bijection(direction: Direction, input: &Path, out: Option<&Path>) -> Result<ExitCode> {
    let text = read(input)?;
    match direction {
        Direction::Fwd => {
            let doc: TreeTriple = parse_json(&text)?;
            let t = doc.tree.into_tree()?;
            let s = ParkSeq::new(doc.prefs);
            s.validate(t.n())?;
            ensure!((1..=t.n()).contains(&doc.marked), "marked node {} is not in 1..={}", doc.marked, t.n());
            if !is_parking_function(&t, &s)? {
                return not_parking("tree");
            }
            let f = phi_general(&t, &s, doc.marked)?;
            let pair = MappingPair { mapping: (&f).into(), prefs: s.into_prefs() };
            emit(&to_canonical_json(&pair), out)?;
        }
        Direction::Inv => {
            let doc: MappingPair = parse_json(&text)?;
            let f = doc.mapping.into_mapping()?;
            let s = ParkSeq::new(doc.prefs);
            s.validate(f.size())?;
            if !is_parking_function(&f, &s)? {
                return not_parking("mapping");
            }
            let (t, w) = phi_general_inverse(&f, &s)?;
            let triple = TreeTriple { tree: (&t).into(), prefs: s.into_prefs(), marked: w };
            emit(&to_canonical_json(&triple), out)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct PhaseRow {
    rho: String,
    n: usize,
    p_exact: String,
    p_mc: String,
    mc_stderr: String,
    asymptotic: String,
    regime: &'static str,
}

pub fn phase(
    rho_spec: &str,
    n_spec: &str,
    trials: u64,
    seed: u64,
    format: Format,
    out: Option<&Path>,
) -> Result<ExitCode> {
    let rhos = parse_rhos(rho_spec)?;
    let sizes = parse_sizes(n_spec)?;
    for &n in &sizes {
        ensure!((1..=PROB_EXACT_MAX_N).contains(&n), "n must lie in 1..={PROB_EXACT_MAX_N}");
    }
    let mut rows = Vec::new();
    for (i, &rho) in rhos.iter().enumerate() {
        for (j, &n) in sizes.iter().enumerate() {
            let m = ((rho * n as f64 + 1e-9).floor() as usize).min(n);
            let p_exact = prob_exact(n, m)?.to_f64();
            let (p_mc, mc_stderr) = if trials > 0 {
                let cell = (i * sizes.len() + j) as u64;
                let cell_seed = seed.wrapping_add(cell.wrapping_mul(0x9e37_79b9_7f4a_7c15));
                let est = mc_probability(n, m, trials, cell_seed)?;
                (sig12(est.estimate), sig12(est.stderr))
            } else {
                (String::new(), String::new())
            };
            let (asymptotic, regime) = if m == 0 {
                (1.0, "sub-critical")
            } else {
                let est = asymp_m(n, m, DEFAULT_DELTA)?;
                (est.probability(), est.regime.as_str())
            };
            rows.push(PhaseRow {
                rho: sig12(rho),
                n,
                p_exact: sig12(p_exact),
                p_mc,
                mc_stderr,
                asymptotic: sig12(asymptotic),
                regime,
            });
        }
    }
    emit(&render_rows(&rows, format)?, out)?;
    Ok(ExitCode::SUCCESS)
}

pub fn sample(kind: Kind, n: usize, count: usize, seed: u64, out: Option<&Path>) -> Result<ExitCode> {
    ensure!(n >= 1, "n must be positive");
    let mut text = String::new();
    for i in 0..count {
        let mut rng = chunk_rng(seed, i as u64);
        let doc: GraphDoc = match kind {
            Kind::Tree => (&sample_tree(n, &mut rng)?).into(),
            Kind::Mapping => (&sample_mapping(n, &mut rng)?).into(),
        };
        text.push_str(&serde_json::to_string(&doc)?);
        text.push('\n');
    }
    emit(&text, out)?;
    Ok(ExitCode::SUCCESS)
}

pub fn verify(n: usize, format: Format, out: Option<&Path>) -> Result<ExitCode> {
    let reports = parkgraph::verify::run_all(n);
    let text = match format {
        Format::Json => to_canonical_json(&reports),
        Format::Csv => reports
            .iter()
            .map(|r| {
                if r.passed {
                    format!("PASS  {}\n", r.name)
                } else {
                    format!("FAIL  {}: {}\n", r.name, r.detail)
                }
            })
            .collect(),
    };
    emit(&text, out)?;
    Ok(if reports.iter().all(|r| r.passed) { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
