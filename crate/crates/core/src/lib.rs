//! Parking functions on rooted labelled trees and on mappings.
//!
//! Drivers with preferred nodes arrive one by one and follow the unique
//! outgoing edges until they find a free node. The crate simulates the
//! procedure, enumerates small instances, counts parking functions exactly
//! through closed forms and generating functions, implements the
//! bijection between tree and mapping parking functions, and evaluates the
//! asymptotic phase transition at load factor `1/2`.

pub mod asymptotics;
pub mod bijection;
pub mod enumerate;
pub mod error;
pub mod exact;
pub mod graph;
pub mod io;
pub mod park;
pub mod structure;
pub mod verify;

pub use enumerate::BigCount;
pub use error::{Error, Result};
pub use graph::{MappingFn, ParkOutcome, ParkSeq, RoadNet, RootedTree, ROOT};
pub use park::{is_parking_function, park, park_mapping, park_tree, tree_as_mapping, Parker};
