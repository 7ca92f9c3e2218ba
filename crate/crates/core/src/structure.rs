//! Structural facts about parking functions: the predecessor-count and
//! subtree characterizations, subtree reallocation, the extremal star and
//! chain trees, relabelling, and ordered tree parking functions.

use crate::enumerate::BigCount;
use crate::error::{check_limit, Error, Result};
use crate::graph::{validate_prefs, MappingFn, ParkSeq, RoadNet, RootedTree, ROOT};
use crate::park::Parker;

/// Default size limit for [`char_tree_subtree`], whose cost is the number
/// of root-containing subtrees.
pub const SUBTREE_CHECK_MAX_N: usize = 12;
/// Size limit for [`count_ordered_tree_pfs`] (sweeps `n^n` sequences).
pub const ORDERED_COUNT_MAX_N: usize = 8;

/// Reachability `i ⪯ j` (a directed path from `i` to `j`) as bitset rows.
#[derive(Debug, Clone)]
pub struct Reachability {
    n: usize,
    words: usize,
    // row i: the set of j with i ⪯ j
    rows: Vec<u64>,
}

impl Reachability {
    pub fn new<G: RoadNet + ?Sized>(g: &G) -> Self {
        let n = g.size();
        let words = n.div_ceil(64).max(1);
        let mut rows = vec![0u64; n * words];
        for i in 0..n {
            let row = &mut rows[i * words..(i + 1) * words];
            let mut v = i;
            for _ in 0..n {
                if row[v / 64] & (1 << (v % 64)) != 0 {
                    break;
                }
                row[v / 64] |= 1 << (v % 64);
                match g.next_index(v) {
                    Some(u) => v = u,
                    None => break,
                }
            }
        }
        Self { n, words, rows }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `i ⪯ j` for 1-based labels.
    pub fn precedes(&self, i: usize, j: usize) -> bool {
        let (i, j) = (i - 1, j - 1);
        self.rows[i * self.words + j / 64] & (1 << (j % 64)) != 0
    }

    /// `p(j)`: the number of `i` with `i ⪯ j`.
    pub fn predecessor_count(&self, j: usize) -> usize {
        (1..=self.n).filter(|&i| self.precedes(i, j)).count()
    }
}

pub fn predecessor_relation(f: &MappingFn) -> Reachability {
    Reachability::new(f)
}

/// `p[j]` counts the predecessors of node `j + 1`, `q[j]` the drivers whose
/// preferred node is such a predecessor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredecessorCounts {
    pub p: Vec<usize>,
    pub q: Vec<usize>,
}

pub fn predecessor_counts(f: &MappingFn, s: &ParkSeq) -> Result<PredecessorCounts> {
    let n = f.n();
    s.validate(n)?;
    let reach = Reachability::new(f);
    let p = (1..=n).map(|j| reach.predecessor_count(j)).collect();
    let q = (1..=n)
        .map(|j| s.prefs().iter().filter(|&&sk| reach.precedes(sk, j)).count())
        .collect();
    Ok(PredecessorCounts { p, q })
}

/// Parking test for `m = n` via `q(j) >= p(j)` for every node `j`.
pub fn char_mapping_full(f: &MappingFn, s: &ParkSeq) -> Result<bool> {
    if s.m() != f.n() {
        return Err(Error::Contract(format!(
            "the predecessor characterization needs m = n, got m = {} and n = {}",
            s.m(),
            f.n()
        )));
    }
    let counts = predecessor_counts(f, s)?;
    Ok(counts.q.iter().zip(&counts.p).all(|(q, p)| q >= p))
}

/// Every subtree of `t` that contains the root, as a bitmask over
/// zero-based node indices. Each subtree appears exactly once.
pub fn root_subtrees(t: &RootedTree) -> Result<Vec<u64>> {
    check_limit("subtree enumeration n", t.n(), SUBTREE_CHECK_MAX_N)?;
    Ok(subtrees_at(&t.children(), t.root()))
}

// Subtrees hanging at v that contain v: for every child, either prune the
// child's whole branch or keep the child and recurse.
fn subtrees_at(children: &[Vec<usize>], v: usize) -> Vec<u64> {
    let mut acc = vec![1u64 << (v - 1)];
    for &c in &children[v - 1] {
        let below = subtrees_at(children, c);
        let mut next = Vec::with_capacity(acc.len() * (below.len() + 1));
        for &a in &acc {
            next.push(a);
            next.extend(below.iter().map(|&b| a | b));
        }
        acc = next;
    }
    acc
}

/// Parking test via subtrees: at most `|T'|` drivers prefer a node of any
/// root-containing subtree `T'`.
pub fn char_tree_subtree(t: &RootedTree, s: &ParkSeq) -> Result<bool> {
    char_tree_subtree_with_limit(t, s, SUBTREE_CHECK_MAX_N)
}

pub fn char_tree_subtree_with_limit(t: &RootedTree, s: &ParkSeq, limit: usize) -> Result<bool> {
    check_limit("subtree characterization n", t.n(), limit.min(64))?;
    s.validate(t.n())?;
    let mut load = vec![0u32; t.n()];
    for &p in s.prefs() {
        load[p - 1] += 1;
    }
    let ok = subtrees_at(&t.children(), t.root()).into_iter().all(|mask| {
        let drivers: u32 = (0..t.n())
            .filter(|&i| mask & (1 << i) != 0)
            .map(|i| load[i])
            .sum();
        drivers <= mask.count_ones()
    });
    Ok(ok)
}

/// Moves the subtree rooted at `u_root` from its parent `v` to `w`.
pub fn reallocate(t: &RootedTree, u_root: usize, v: usize, w: usize) -> Result<RootedTree> {
    let n = t.n();
    for (name, x) in [("u_root", u_root), ("v", v), ("w", w)] {
        if x == 0 || x > n {
            return Err(Error::Structural(format!("{name} = {x} is not a node of the tree")));
        }
    }
    if t.parent(u_root) != Some(v) {
        return Err(Error::Structural(format!("node {u_root} is not attached to {v}")));
    }
    if t.precedes(w, u_root) {
        return Err(Error::Structural(format!(
            "target {w} lies inside the subtree rooted at {u_root}"
        )));
    }
    let mut parent = t.parents().to_vec();
    parent[u_root - 1] = w;
    Ok(RootedTree::from_parent_unchecked(parent))
}

/// Root `n` with every other node attached to it.
pub fn make_star(n: usize) -> RootedTree {
    assert!(n >= 1, "star needs at least one node");
    let mut parent = vec![n; n];
    parent[n - 1] = ROOT;
    RootedTree::from_parent_unchecked(parent)
}

/// Root `n`, node `j` attached to `j + 1`.
pub fn make_chain(n: usize) -> RootedTree {
    assert!(n >= 1, "chain needs at least one node");
    let mut parent: Vec<usize> = (2..=n + 1).collect();
    parent[n - 1] = ROOT;
    RootedTree::from_parent_unchecked(parent)
}

/// Conjugates `f` by the permutation `sigma` (1-based, `sigma[i-1] = σ(i)`):
/// the result maps `σ(i)` to `σ(f(i))`.
pub fn relabel(f: &MappingFn, sigma: &[usize]) -> Result<MappingFn> {
    let n = f.n();
    if sigma.len() != n {
        return Err(Error::NotAPermutation { n });
    }
    let mut hit = vec![false; n];
    for &x in sigma {
        if x == 0 || x > n || std::mem::replace(&mut hit[x - 1], true) {
            return Err(Error::NotAPermutation { n });
        }
    }
    let mut succ = vec![0usize; n];
    for i in 1..=n {
        succ[sigma[i - 1] - 1] = sigma[f.apply(i) - 1];
    }
    Ok(MappingFn::from_succ_unchecked(succ))
}

/// Number of `s ∈ [n]^n` parking on `t` such that, whenever a driver parks
/// at `w`, every proper predecessor of `w` is already occupied.
pub fn count_ordered_tree_pfs(t: &RootedTree) -> Result<BigCount> {
    let n = t.n();
    check_limit("ordered parking count n", n, ORDERED_COUNT_MAX_N)?;
    // strictly below w: all u != w with u ⪯ w
    let below: Vec<u64> = (1..=n)
        .map(|w| {
            (1..=n)
                .filter(|&u| u != w && t.precedes(u, w))
                .fold(0u64, |m, u| m | (1 << (u - 1)))
        })
        .collect();
    let mut parker = Parker::new(n);
    Ok(BigCount::from(ordered_dfs(t, &below, &mut parker, 0, n)))
}

fn ordered_dfs(t: &RootedTree, below: &[u64], parker: &mut Parker, occupied: u64, remaining: usize) -> u64 {
    if remaining == 0 {
        return 1;
    }
    let mut total = 0;
    for start in 0..t.n() {
        if let Some(v) = parker.admit(t, start) {
            if occupied & below[v] == below[v] {
                total += ordered_dfs(t, below, parker, occupied | (1 << v), remaining - 1);
            }
            parker.release(v);
        }
    }
    total
}

/// `n^(m falling) + C(m,2) (n-1)^(m-1 falling)`: parking functions on the star.
pub fn star_count(n: usize, m: usize) -> BigCount {
    use crate::exact::{binomial, falling_factorial};
    let mut total = falling_factorial(n as u64, m as u64);
    if m >= 2 {
        total += binomial(m as u64, 2) * falling_factorial(n as u64 - 1, m as u64 - 1);
    }
    total
}

pub(crate) fn validate_node(n: usize, w: usize) -> Result<()> {
    validate_prefs(&[w], n).map_err(|_| Error::Contract(format!("node {w} is not in 1..={n}")))
}
