//! Aggregate R-tree with simulated page-access accounting.

mod access;
mod best_first;
mod meter;
mod tree;

pub use access::Boundary;
pub use best_first::{best_first, BestFirst, BestFirstPoints, EntryRef, Queued};
pub use meter::AccessMeter;
pub use tree::{fanout_for, AggRTree, Child, Entry, Node, NodeId};
