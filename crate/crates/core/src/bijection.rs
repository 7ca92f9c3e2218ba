//! Bijections between tree parking functions with a marked node and
//! mapping parking functions.
//!
//! The nodes on the path from the marked node to the root become the
//! cyclic nodes of the mapping. The path is cut after every right-to-left
//! maximum of the ranks, and each piece is closed into a cycle. Edges
//! leaving such a maximum are never used by any driver, so the parking
//! paths stay the same and the sequence is not touched.

use crate::error::{Error, Result};
use crate::graph::{MappingFn, ParkOutcome, ParkSeq, RoadNet, RootedTree, ROOT};
use crate::park::Parker;
use crate::structure::validate_node;

/// `rank[v - 1]` is the index (1-based) of the driver parking at `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankAssignment {
    rank: Vec<usize>,
}

impl RankAssignment {
    /// Inverts a complete output permutation.
    pub fn from_positions(positions: &[usize]) -> Result<Self> {
        let n = positions.len();
        let mut rank = vec![0; n];
        for (k, &v) in positions.iter().enumerate() {
            if v == 0 || v > n || rank[v - 1] != 0 {
                return Err(Error::NotAPermutation { n });
            }
            rank[v - 1] = k + 1;
        }
        Ok(Self { rank })
    }

    pub fn n(&self) -> usize {
        self.rank.len()
    }

    /// Rank of node `v` (1-based).
    pub fn rank(&self, v: usize) -> usize {
        self.rank[v - 1]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.rank
    }
}

/// Parks `s` on `g`, requiring every one of exactly `n` drivers to succeed.
pub fn ranks<G: RoadNet + ?Sized>(g: &G, s: &ParkSeq) -> Result<RankAssignment> {
    let n = g.size();
    if s.m() != n {
        return Err(Error::Contract(format!("need exactly n = {n} drivers, got {}", s.m())));
    }
    let positions = parked_positions(g, s)?;
    RankAssignment::from_positions(&positions)
}

fn parked_positions<G: RoadNet + ?Sized>(g: &G, s: &ParkSeq) -> Result<Vec<usize>> {
    match Parker::new(g.size()).run(g, s.prefs())? {
        ParkOutcome::Success(positions) => Ok(positions),
        ParkOutcome::Failure { driver } => Err(Error::Contract(format!(
            "not a parking function: driver {driver} fails"
        ))),
    }
}

/// `(t, s, w) -> f` for `m = n`.
pub fn phi(t: &RootedTree, s: &ParkSeq, w: usize) -> Result<MappingFn> {
    let n = t.n();
    validate_node(n, w)?;
    let k = ranks(t, s)?;
    let path = t.path_to_root(w);
    // right-to-left maxima, scanning from the root end
    let mut is_max = vec![false; path.len()];
    let mut best = 0;
    for (i, &v) in path.iter().enumerate().rev() {
        if k.rank(v) > best {
            best = k.rank(v);
            is_max[i] = true;
        }
    }
    let mut succ: Vec<usize> = (1..=n).map(|v| t.parent(v).unwrap_or(v)).collect();
    // each maximum closes a cycle back to the node after the previous maximum
    let mut cycle_start = w;
    for (i, &v) in path.iter().enumerate() {
        if is_max[i] {
            succ[v - 1] = cycle_start;
            if let Some(&next) = path.get(i + 1) {
                cycle_start = next;
            }
        }
    }
    Ok(MappingFn::from_succ_unchecked(succ))
}

/// `(f, s) -> (t, w)` for `m = n`, inverse of [`phi`].
pub fn phi_inverse(f: &MappingFn, s: &ParkSeq) -> Result<(RootedTree, usize)> {
    let n = f.n();
    let k = ranks(f, s)?;
    let cyclic = f.cyclic_nodes();
    // highest-rank cyclic node of every cycle
    let mut visited = vec![false; n];
    let mut tops = Vec::new();
    for start in 1..=n {
        if !cyclic[start - 1] || visited[start - 1] {
            continue;
        }
        let mut top = start;
        let mut v = start;
        loop {
            visited[v - 1] = true;
            if k.rank(v) > k.rank(top) {
                top = v;
            }
            v = f.apply(v);
            if v == start {
                break;
            }
        }
        tops.push(top);
    }
    tops.sort_by_key(|&c| std::cmp::Reverse(k.rank(c)));
    let mut parent = f.successors().to_vec();
    for pair in tops.windows(2) {
        parent[pair[0] - 1] = f.apply(pair[1]);
    }
    let root = *tops.last().expect("a mapping has at least one cycle");
    parent[root - 1] = ROOT;
    let w = f.apply(tops[0]);
    Ok((RootedTree::from_parent_unchecked(parent), w))
}

/// Appends the nodes left free by `positions` in ascending label order.
fn extend_with_free(s: &ParkSeq, positions: &[usize], n: usize) -> ParkSeq {
    let mut taken = vec![false; n];
    for &v in positions {
        taken[v - 1] = true;
    }
    let mut prefs = s.prefs().to_vec();
    prefs.extend((1..=n).filter(|&v| !taken[v - 1]));
    ParkSeq::new(prefs)
}

/// `(t, s, w) -> f` for any `m <= n`; the sequence `s` is kept as it is.
pub fn phi_general(t: &RootedTree, s: &ParkSeq, w: usize) -> Result<MappingFn> {
    let n = t.n();
    validate_node(n, w)?;
    check_length(s, n)?;
    let positions = parked_positions(t, s)?;
    phi(t, &extend_with_free(s, &positions, n), w)
}

/// Inverse of [`phi_general`].
pub fn phi_general_inverse(f: &MappingFn, s: &ParkSeq) -> Result<(RootedTree, usize)> {
    let n = f.n();
    check_length(s, n)?;
    let positions = parked_positions(f, s)?;
    phi_inverse(f, &extend_with_free(s, &positions, n))
}

fn check_length(s: &ParkSeq, n: usize) -> Result<()> {
    if s.m() > n {
        return Err(Error::Contract(format!("{} drivers cannot park on {n} nodes", s.m())));
    }
    Ok(())
}
