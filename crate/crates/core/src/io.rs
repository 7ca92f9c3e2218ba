//! JSON documents for graphs, preference sequences and bijection records.
//!
//! ```json
//! {"kind": "tree", "n": 3, "parent": [0, 1, 1]}
//! {"kind": "mapping", "n": 3, "succ": [2, 3, 1]}
//! {"prefs": [1, 1, 2]}
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{MappingFn, ParkSeq, RoadNet, RootedTree};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GraphDoc {
    Tree { n: usize, parent: Vec<usize> },
    Mapping { n: usize, succ: Vec<usize> },
}

/// A validated graph of either kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Graph {
    Tree(RootedTree),
    Mapping(MappingFn),
}

impl RoadNet for Graph {
    fn size(&self) -> usize {
        match self {
            Graph::Tree(t) => t.size(),
            Graph::Mapping(f) => f.size(),
        }
    }

    fn next_index(&self, index: usize) -> Option<usize> {
        match self {
            Graph::Tree(t) => t.next_index(index),
            Graph::Mapping(f) => f.next_index(index),
        }
    }
}

fn check_len(n: usize, len: usize) -> Result<()> {
    if n != len {
        return Err(Error::InvalidInput(format!("declared n = {n} but the array has {len} entries")));
    }
    Ok(())
}

impl GraphDoc {
    pub fn into_graph(self) -> Result<Graph> {
        match self {
            GraphDoc::Tree { n, parent } => {
                check_len(n, parent.len())?;
                Ok(Graph::Tree(RootedTree::new(parent)?))
            }
            GraphDoc::Mapping { n, succ } => {
                check_len(n, succ.len())?;
                Ok(Graph::Mapping(MappingFn::new(succ)?))
            }
        }
    }

    pub fn into_tree(self) -> Result<RootedTree> {
        match self.into_graph()? {
            Graph::Tree(t) => Ok(t),
            Graph::Mapping(_) => Err(Error::InvalidInput("expected a tree, found a mapping".into())),
        }
    }

    pub fn into_mapping(self) -> Result<MappingFn> {
        match self.into_graph()? {
            Graph::Mapping(f) => Ok(f),
            Graph::Tree(_) => Err(Error::InvalidInput("expected a mapping, found a tree".into())),
        }
    }
}

impl From<&RootedTree> for GraphDoc {
    fn from(t: &RootedTree) -> Self {
        GraphDoc::Tree { n: t.n(), parent: t.parents().to_vec() }
    }
}

impl From<&MappingFn> for GraphDoc {
    fn from(f: &MappingFn) -> Self {
        GraphDoc::Mapping { n: f.n(), succ: f.successors().to_vec() }
    }
}

impl From<&Graph> for GraphDoc {
    fn from(g: &Graph) -> Self {
        match g {
            Graph::Tree(t) => t.into(),
            Graph::Mapping(f) => f.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrefsDoc {
    pub prefs: Vec<usize>,
}

impl From<PrefsDoc> for ParkSeq {
    fn from(d: PrefsDoc) -> Self {
        ParkSeq::new(d.prefs)
    }
}

/// A tree parking function with a marked node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeTriple {
    pub tree: GraphDoc,
    pub prefs: Vec<usize>,
    pub marked: usize,
}

/// A mapping parking function.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MappingPair {
    pub mapping: GraphDoc,
    pub prefs: Vec<usize>,
}

/// Canonical text form: pretty-printed with a trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents always serialize");
    s.push('\n');
    s
}

pub fn parse_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("malformed JSON: {e}")))
}
