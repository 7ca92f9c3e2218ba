//! The parking procedure.
//!
//! Drivers arrive one after the other. A driver tries the preferred node
//! first and, while the current node is occupied, follows the unique
//! outgoing edge. On a tree the walk ends unsuccessfully at an occupied
//! root. On a mapping the walk is cut after `n` nodes: the nodes reachable
//! from the start are exactly `start, f(start), ..., f^(n-1)(start)`, so if
//! all of those are taken the driver would circle forever.

use crate::error::Result;
use crate::graph::{validate_prefs, MappingFn, ParkOutcome, ParkSeq, RoadNet, RootedTree};

/// Reusable occupancy buffer for repeated simulations on graphs of size `n`.
#[derive(Debug, Clone)]
pub struct Parker {
    occupied: Vec<bool>,
}

impl Parker {
    pub fn new(n: usize) -> Self {
        Self { occupied: vec![false; n] }
    }

    pub fn clear(&mut self) {
        self.occupied.iter_mut().for_each(|o| *o = false);
    }

    fn fit(&mut self, n: usize) {
        if self.occupied.len() != n {
            self.occupied = vec![false; n];
        } else {
            self.clear();
        }
    }

    /// Lets one driver with zero-based preference `start` look for a node.
    /// Returns the zero-based node taken, leaving it marked occupied.
    #[inline]
    pub fn admit<G: RoadNet + ?Sized>(&mut self, g: &G, start: usize) -> Option<usize> {
        let n = self.occupied.len();
        let mut v = start;
        for _ in 0..n {
            if !self.occupied[v] {
                self.occupied[v] = true;
                return Some(v);
            }
            v = g.next_index(v)?;
        }
        None
    }

    /// Frees a zero-based node taken earlier by [`Parker::admit`].
    #[inline]
    pub fn release(&mut self, index: usize) {
        self.occupied[index] = false;
    }

    pub fn is_occupied(&self, index: usize) -> bool {
        self.occupied[index]
    }

    /// Runs the procedure for 1-based preferences.
    pub fn run<G: RoadNet + ?Sized>(&mut self, g: &G, prefs: &[usize]) -> Result<ParkOutcome> {
        validate_prefs(prefs, g.size())?;
        Ok(self.run_unchecked(g, prefs))
    }

    pub(crate) fn run_unchecked<G: RoadNet + ?Sized>(&mut self, g: &G, prefs: &[usize]) -> ParkOutcome {
        self.fit(g.size());
        let mut positions = Vec::with_capacity(prefs.len());
        for (k, &p) in prefs.iter().enumerate() {
            match self.admit(g, p - 1) {
                Some(v) => positions.push(v + 1),
                None => return ParkOutcome::Failure { driver: k + 1 },
            }
        }
        ParkOutcome::Success(positions)
    }

    /// Only answers whether every driver parks.
    pub(crate) fn parks_unchecked<G: RoadNet + ?Sized>(&mut self, g: &G, prefs: &[usize]) -> bool {
        self.fit(g.size());
        prefs.iter().all(|&p| self.admit(g, p - 1).is_some())
    }
}

pub fn park<G: RoadNet + ?Sized>(g: &G, s: &ParkSeq) -> Result<ParkOutcome> {
    Parker::new(g.size()).run(g, s.prefs())
}

pub fn park_mapping(f: &MappingFn, s: &ParkSeq) -> Result<ParkOutcome> {
    park(f, s)
}

pub fn park_tree(t: &RootedTree, s: &ParkSeq) -> Result<ParkOutcome> {
    park(t, s)
}

pub fn tree_as_mapping(t: &RootedTree) -> MappingFn {
    t.to_mapping()
}

pub fn is_parking_function<G: RoadNet + ?Sized>(g: &G, s: &ParkSeq) -> Result<bool> {
    validate_prefs(s.prefs(), g.size())?;
    Ok(Parker::new(g.size()).parks_unchecked(g, s.prefs()))
}
