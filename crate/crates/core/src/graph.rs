//! Road networks the drivers move on: rooted labelled trees and mappings.
//!
//! Nodes carry the labels `1..=n`. Arrays are stored in label order, so the
//! entry for label `v` lives at index `v - 1`. A tree stores its parent
//! array with `0` marking the root; a mapping stores its successor array.

use crate::error::{Error, Result};

/// Sentinel used in a parent array for the root.
pub const ROOT: usize = 0;

/// A graph in which every node has at most one outgoing edge.
///
/// Indices here are zero-based (`label - 1`); `next_index` returns `None`
/// when the node has no outgoing edge (the root of a tree).
pub trait RoadNet {
    fn size(&self) -> usize;
    fn next_index(&self, index: usize) -> Option<usize>;
}

/// Rooted labelled tree with edges oriented towards the root.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RootedTree {
    parent: Vec<usize>,
    root: usize,
}

impl RootedTree {
    /// Validates a parent array (1-based labels, `0` for the root).
    pub fn new(parent: Vec<usize>) -> Result<Self> {
        let n = parent.len();
        if n == 0 {
            return Err(Error::InvalidTree("a tree needs at least one node".into()));
        }
        let roots: Vec<usize> = (0..n).filter(|&i| parent[i] == ROOT).collect();
        if roots.len() != 1 {
            return Err(Error::InvalidTree(format!(
                "expected exactly one root entry, found {}",
                roots.len()
            )));
        }
        for (i, &p) in parent.iter().enumerate() {
            if p > n {
                return Err(Error::InvalidTree(format!(
                    "parent of node {} is {p}, outside 0..={n}",
                    i + 1
                )));
            }
        }
        // 0 = unknown, 1 = on the current walk, 2 = reaches the root
        let mut state = vec![0u8; n];
        state[roots[0]] = 2;
        let mut walk = Vec::new();
        for start in 0..n {
            let mut v = start;
            while state[v] == 0 {
                state[v] = 1;
                walk.push(v);
                v = parent[v] - 1;
            }
            if state[v] == 1 {
                return Err(Error::InvalidTree(format!("node {} lies on a cycle", v + 1)));
            }
            for u in walk.drain(..) {
                state[u] = 2;
            }
        }
        Ok(Self { root: roots[0] + 1, parent })
    }

    pub(crate) fn from_parent_unchecked(parent: Vec<usize>) -> Self {
        let root = parent.iter().position(|&p| p == ROOT).expect("root entry") + 1;
        Self { parent, root }
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// Parent of `v`, or `None` for the root.
    pub fn parent(&self, v: usize) -> Option<usize> {
        match self.parent[v - 1] {
            ROOT => None,
            p => Some(p),
        }
    }

    /// The parent array in label order, root entry `0`.
    pub fn parents(&self) -> &[usize] {
        &self.parent
    }

    /// Children of every node, indexed by `label - 1`, each list ascending.
    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut children = vec![Vec::new(); self.n()];
        for v in 1..=self.n() {
            if let Some(p) = self.parent(v) {
                children[p - 1].push(v);
            }
        }
        children
    }

    /// The nodes `v, parent(v), ..., root`.
    pub fn path_to_root(&self, v: usize) -> Vec<usize> {
        let mut path = vec![v];
        let mut cur = v;
        while let Some(p) = self.parent(cur) {
            path.push(p);
            cur = p;
        }
        path
    }

    /// `true` iff the path from `v` to the root passes through `w`
    /// (`v ⪯ w`, reflexive).
    pub fn precedes(&self, v: usize, w: usize) -> bool {
        let mut cur = v;
        loop {
            if cur == w {
                return true;
            }
            match self.parent(cur) {
                Some(p) => cur = p,
                None => return false,
            }
        }
    }

    /// Nodes of the subtree hanging at `v` (including `v`), ascending.
    pub fn subtree_nodes(&self, v: usize) -> Vec<usize> {
        (1..=self.n()).filter(|&u| self.precedes(u, v)).collect()
    }

    /// The functional digraph obtained by adding a loop at the root.
    pub fn to_mapping(&self) -> MappingFn {
        let succ = (1..=self.n())
            .map(|v| self.parent(v).unwrap_or(v))
            .collect();
        MappingFn { succ }
    }
}

impl RoadNet for RootedTree {
    fn size(&self) -> usize {
        self.parent.len()
    }

    #[inline]
    fn next_index(&self, index: usize) -> Option<usize> {
        match self.parent[index] {
            ROOT => None,
            p => Some(p - 1),
        }
    }
}

/// A total function `f: [n] -> [n]`, seen as its functional digraph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MappingFn {
    succ: Vec<usize>,
}

impl MappingFn {
    pub fn new(succ: Vec<usize>) -> Result<Self> {
        let n = succ.len();
        if n == 0 {
            return Err(Error::InvalidMapping("a mapping needs at least one node".into()));
        }
        if let Some((i, &s)) = succ.iter().enumerate().find(|(_, &s)| s == 0 || s > n) {
            return Err(Error::InvalidMapping(format!(
                "image of node {} is {s}, outside 1..={n}",
                i + 1
            )));
        }
        Ok(Self { succ })
    }

    pub(crate) fn from_succ_unchecked(succ: Vec<usize>) -> Self {
        Self { succ }
    }

    pub fn identity(n: usize) -> Self {
        Self { succ: (1..=n).collect() }
    }

    /// The cyclic permutation `1 -> 2 -> ... -> n -> 1`.
    pub fn cycle(n: usize) -> Self {
        Self { succ: (1..=n).map(|v| v % n + 1).collect() }
    }

    pub fn n(&self) -> usize {
        self.succ.len()
    }

    pub fn apply(&self, v: usize) -> usize {
        self.succ[v - 1]
    }

    pub fn successors(&self) -> &[usize] {
        &self.succ
    }

    pub fn into_successors(self) -> Vec<usize> {
        self.succ
    }

    /// Marks the nodes lying on a cycle, indexed by `label - 1`.
    pub fn cyclic_nodes(&self) -> Vec<bool> {
        let n = self.n();
        // 0 = unvisited, otherwise 1 + id of the walk that first reached it
        let mut seen = vec![0usize; n];
        let mut cyclic = vec![false; n];
        for start in 0..n {
            if seen[start] != 0 {
                continue;
            }
            let stamp = start + 1;
            let mut v = start;
            while seen[v] == 0 {
                seen[v] = stamp;
                v = self.succ[v] - 1;
            }
            if seen[v] == stamp {
                let entry = v;
                loop {
                    cyclic[v] = true;
                    v = self.succ[v] - 1;
                    if v == entry {
                        break;
                    }
                }
            }
        }
        cyclic
    }
}

impl RoadNet for MappingFn {
    fn size(&self) -> usize {
        self.succ.len()
    }

    #[inline]
    fn next_index(&self, index: usize) -> Option<usize> {
        Some(self.succ[index] - 1)
    }
}

/// Preferred parking spaces of `m` drivers, in arrival order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ParkSeq {
    prefs: Vec<usize>,
}

impl ParkSeq {
    pub fn new(prefs: Vec<usize>) -> Self {
        Self { prefs }
    }

    pub fn m(&self) -> usize {
        self.prefs.len()
    }

    pub fn prefs(&self) -> &[usize] {
        &self.prefs
    }

    pub fn into_prefs(self) -> Vec<usize> {
        self.prefs
    }

    /// Checks that every preference lies in `1..=n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        validate_prefs(&self.prefs, n)
    }
}

impl From<Vec<usize>> for ParkSeq {
    fn from(prefs: Vec<usize>) -> Self {
        Self::new(prefs)
    }
}

pub(crate) fn validate_prefs(prefs: &[usize], n: usize) -> Result<()> {
    match prefs.iter().position(|&p| p == 0 || p > n) {
        Some(k) => Err(Error::PreferenceOutOfRange { driver: k + 1, value: prefs[k], n }),
        None => Ok(()),
    }
}

/// Result of running the parking procedure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParkOutcome {
    /// `positions[k]` is the node where driver `k + 1` parked.
    Success(Vec<usize>),
    /// The first driver (1-based) who found no free node.
    Failure { driver: usize },
}

impl ParkOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self, ParkOutcome::Success(_))
    }

    pub fn positions(&self) -> Option<&[usize]> {
        match self {
            ParkOutcome::Success(pi) => Some(pi),
            ParkOutcome::Failure { .. } => None,
        }
    }
}
