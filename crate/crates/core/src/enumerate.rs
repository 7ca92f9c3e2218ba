//! Exhaustive generation of trees, mappings and preference sequences, and
//! the brute-force counting oracles built on them.
//!
//! Every generator is indexable: object number `i` can be rebuilt from `i`
//! alone, which lets the counting sweeps split index ranges across rayon
//! workers and still produce schedule-independent totals.

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::error::{check_limit, Error, Result};
use crate::graph::{MappingFn, RoadNet, RootedTree};
use crate::park::Parker;

pub type BigCount = BigUint;

/// Largest `n` for which [`all_trees`] will run (7^6 = 117,649 trees).
pub const ALL_TREES_MAX_N: usize = 7;
/// Largest `n` for which [`all_mappings`] will run.
pub const ALL_MAPPINGS_MAX_N: usize = 6;
/// Default cap on `n` for the `brute_*` family sweeps.
pub const DEFAULT_BRUTE_MAX_N: usize = 5;
/// Upper bound on `n^m` accepted by a single-graph exhaustive count.
pub const SINGLE_COUNT_BUDGET: u128 = 1 << 36;

/// Prüfer code of the underlying unrooted tree plus the root label.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PruferCode {
    pub n: usize,
    pub code: Vec<usize>,
    pub root: usize,
}

impl PruferCode {
    pub fn new(n: usize, code: Vec<usize>, root: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("Prüfer code for an empty tree".into()));
        }
        if code.len() != n.saturating_sub(2) {
            return Err(Error::InvalidInput(format!(
                "Prüfer code for n = {n} must have length {}, got {}",
                n.saturating_sub(2),
                code.len()
            )));
        }
        if root == 0 || root > n || code.iter().any(|&c| c == 0 || c > n) {
            return Err(Error::InvalidInput(format!("labels must lie in 1..={n}")));
        }
        Ok(Self { n, code, root })
    }

    /// Builds the rooted tree.
    pub fn decode(&self) -> RootedTree {
        let n = self.n;
        let mut adj = vec![Vec::new(); n];
        for (a, b) in prufer_edges(n, &self.code) {
            adj[a - 1].push(b);
            adj[b - 1].push(a);
        }
        let mut parent = vec![0usize; n];
        let mut seen = vec![false; n];
        let mut stack = vec![self.root];
        seen[self.root - 1] = true;
        while let Some(v) = stack.pop() {
            for &u in &adj[v - 1] {
                if !seen[u - 1] {
                    seen[u - 1] = true;
                    parent[u - 1] = v;
                    stack.push(u);
                }
            }
        }
        RootedTree::from_parent_unchecked(parent)
    }

    pub fn encode(t: &RootedTree) -> Self {
        let n = t.n();
        let mut adj = vec![Vec::new(); n];
        for v in 1..=n {
            if let Some(p) = t.parent(v) {
                adj[v - 1].push(p);
                adj[p - 1].push(v);
            }
        }
        let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
        let mut removed = vec![false; n];
        let mut code = Vec::with_capacity(n.saturating_sub(2));
        if n > 2 {
            let mut ptr = (0..n).find(|&i| degree[i] == 1).unwrap();
            let mut leaf = ptr;
            for _ in 0..n - 2 {
                let next = adj[leaf]
                    .iter()
                    .map(|&u| u - 1)
                    .find(|&u| !removed[u])
                    .unwrap();
                code.push(next + 1);
                removed[leaf] = true;
                degree[next] -= 1;
                if degree[next] == 1 && next < ptr {
                    leaf = next;
                } else {
                    ptr += 1;
                    while degree[ptr] != 1 || removed[ptr] {
                        ptr += 1;
                    }
                    leaf = ptr;
                }
            }
        }
        Self { n, code, root: t.root() }
    }
}

/// Edges of the unrooted tree with the given Prüfer code.
fn prufer_edges(n: usize, code: &[usize]) -> Vec<(usize, usize)> {
    if n == 1 {
        return Vec::new();
    }
    if n == 2 {
        return vec![(1, 2)];
    }
    let mut degree = vec![1usize; n];
    for &c in code {
        degree[c - 1] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut ptr = (0..n).find(|&i| degree[i] == 1).unwrap();
    let mut leaf = ptr;
    for &c in code {
        let x = c - 1;
        edges.push((leaf + 1, c));
        degree[leaf] -= 1;
        degree[x] -= 1;
        if degree[x] == 1 && x < ptr {
            leaf = x;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    // the last two nodes of degree one; node n is always one of them
    edges.push((leaf + 1, n));
    edges
}

/// `n^(n-1)`, the number of rooted labelled trees.
pub fn tree_count(n: usize) -> u64 {
    if n == 0 {
        0
    } else {
        (n as u64).pow(n as u32 - 1)
    }
}

/// `n^n`, the number of mappings.
pub fn mapping_count(n: usize) -> u64 {
    (n as u64).pow(n as u32)
}

/// Tree number `index` in `0..n^(n-1)`: root `index % n + 1`, remaining
/// base-`n` digits form the Prüfer code (most significant first).
pub fn tree_from_index(n: usize, index: u64) -> RootedTree {
    let base = n as u64;
    let root = (index % base) as usize + 1;
    let mut rest = index / base;
    let mut code = vec![0usize; n.saturating_sub(2)];
    for slot in code.iter_mut().rev() {
        *slot = (rest % base) as usize + 1;
        rest /= base;
    }
    PruferCode { n, code, root }.decode()
}

/// Mapping number `index` in `0..n^n`, successors read as base-`n` digits.
pub fn mapping_from_index(n: usize, index: u64) -> MappingFn {
    let base = n as u64;
    let mut rest = index;
    let mut succ = vec![0usize; n];
    for slot in succ.iter_mut().rev() {
        *slot = (rest % base) as usize + 1;
        rest /= base;
    }
    MappingFn::from_succ_unchecked(succ)
}

/// Every rooted labelled tree on `1..=n`, each exactly once.
pub fn all_trees(n: usize) -> Result<impl Iterator<Item = RootedTree> + Clone> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    check_limit("all_trees n", n, ALL_TREES_MAX_N)?;
    Ok((0..tree_count(n)).map(move |i| tree_from_index(n, i)))
}

/// Every mapping `[n] -> [n]`.
pub fn all_mappings(n: usize) -> Result<impl Iterator<Item = MappingFn> + Clone> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    check_limit("all_mappings n", n, ALL_MAPPINGS_MAX_N)?;
    Ok((0..mapping_count(n)).map(move |i| mapping_from_index(n, i)))
}

/// All sequences in `[n]^m` in odometer (lexicographic) order.
#[derive(Debug, Clone)]
pub struct Sequences {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Sequences {
    pub fn new(n: usize, m: usize) -> Self {
        let current = if n == 0 && m > 0 { None } else { Some(vec![1; m]) };
        Self { n, current }
    }
}

impl Iterator for Sequences {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let cur = self.current.as_mut().unwrap();
        let mut i = cur.len();
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if cur[i] < self.n {
                cur[i] += 1;
                break;
            }
            cur[i] = 1;
        }
        Some(out)
    }
}

pub fn all_sequences(n: usize, m: usize) -> Sequences {
    Sequences::new(n, m)
}

fn count_parking_dfs<G: RoadNet + ?Sized>(g: &G, parker: &mut Parker, remaining: usize) -> u64 {
    if remaining == 0 {
        return 1;
    }
    let mut total = 0;
    for start in 0..g.size() {
        if let Some(v) = parker.admit(g, start) {
            total += count_parking_dfs(g, parker, remaining - 1);
            parker.release(v);
        }
    }
    total
}

/// `S(g, m)` as a machine integer; a failing prefix prunes all its extensions.
pub(crate) fn count_parking_u64<G: RoadNet + ?Sized>(g: &G, m: usize, parker: &mut Parker) -> u64 {
    parker.clear();
    count_parking_dfs(g, parker, m)
}

fn check_single_budget(n: usize, m: usize) -> Result<()> {
    let space = (n as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    if space > SINGLE_COUNT_BUDGET {
        return Err(Error::SizeLimit {
            what: "sequence space n^m",
            value: usize::try_from(space).unwrap_or(usize::MAX),
            limit: SINGLE_COUNT_BUDGET as usize,
        });
    }
    Ok(())
}

/// Number of sequences in `[n]^m` that are parking functions for `g`.
pub fn count_pf_single<G: RoadNet + ?Sized>(g: &G, m: usize) -> Result<BigCount> {
    check_single_budget(g.size(), m)?;
    let mut parker = Parker::new(g.size());
    Ok(BigCount::from(count_parking_u64(g, m, &mut parker)))
}

/// Graph families swept by the brute-force totals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Trees,
    Mappings,
    ConnectedMappings,
}

/// Total number of parking functions of length `m` summed over a family of
/// size-`n` graphs, refusing `n > max_n`.
pub fn brute_count(family: Family, n: usize, m: usize, max_n: usize) -> Result<BigCount> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    check_limit("brute-force n", n, max_n)?;
    check_single_budget(n, m)?;
    let total: u128 = match family {
        Family::Trees => {
            check_limit("all_trees n", n, ALL_TREES_MAX_N)?;
            (0..tree_count(n))
                .into_par_iter()
                .map_init(
                    || Parker::new(n),
                    |parker, i| count_parking_u64(&tree_from_index(n, i), m, parker) as u128,
                )
                .sum()
        }
        Family::Mappings | Family::ConnectedMappings => {
            check_limit("all_mappings n", n, ALL_MAPPINGS_MAX_N)?;
            let only_connected = family == Family::ConnectedMappings;
            (0..mapping_count(n))
                .into_par_iter()
                .map_init(
                    || Parker::new(n),
                    |parker, i| {
                        let f = mapping_from_index(n, i);
                        if only_connected && !connected(&f) {
                            0
                        } else {
                            count_parking_u64(&f, m, parker) as u128
                        }
                    },
                )
                .sum()
        }
    };
    Ok(BigCount::from(total))
}

/// `F_{n,m}` by exhaustion over all trees and sequences.
pub fn brute_f(n: usize, m: usize) -> Result<BigCount> {
    brute_count(Family::Trees, n, m, DEFAULT_BRUTE_MAX_N)
}

/// `M_{n,m}` by exhaustion over all mappings and sequences.
pub fn brute_m(n: usize, m: usize) -> Result<BigCount> {
    brute_count(Family::Mappings, n, m, DEFAULT_BRUTE_MAX_N)
}

/// `C_{n,m}` by exhaustion over connected mappings.
pub fn brute_c(n: usize, m: usize) -> Result<BigCount> {
    brute_count(Family::ConnectedMappings, n, m, DEFAULT_BRUTE_MAX_N)
}

struct DisjointSets {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), rank: vec![0; n] }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}

/// Number of weakly connected components of the functional digraph.
pub fn component_count(f: &MappingFn) -> usize {
    let n = f.n();
    let mut sets = DisjointSets::new(n);
    let merges = (0..n).filter(|&i| sets.union(i, f.apply(i + 1) - 1)).count();
    n - merges
}

/// `true` iff the functional digraph is weakly connected.
pub fn connected(f: &MappingFn) -> bool {
    component_count(f) == 1
}
