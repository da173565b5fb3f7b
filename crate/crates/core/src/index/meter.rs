use std::collections::HashSet;

use super::tree::NodeId;

/// Counts simulated page reads for one query.
///
/// With the buffer enabled, a node already read during the query is free.
#[derive(Clone, Debug, Default)]
pub struct AccessMeter {
    reads: u64,
    memo: Option<HashSet<(u64, NodeId)>>,
}

impl AccessMeter {
    pub fn new() -> Self {
        Self::default()
    }

    /// A meter with an unbounded per-query buffer.
    pub fn buffered() -> Self {
        Self { reads: 0, memo: Some(HashSet::new()) }
    }

    /// Turn the buffer on (keeping the read count) or clear it.
    pub fn set_buffered(&mut self, on: bool) {
        self.memo = on.then(HashSet::new);
    }

    pub fn is_buffered(&self) -> bool {
        self.memo.is_some()
    }

    /// Record a read of node `node` of the tree identified by `tree_uid`.
    #[inline]
    pub fn read(&mut self, tree_uid: u64, node: NodeId) {
        match &mut self.memo {
            Some(seen) => {
                if seen.insert((tree_uid, node)) {
                    self.reads += 1;
                }
            }
            None => self.reads += 1,
        }
    }

    pub fn reads(&self) -> u64 {
        self.reads
    }

    pub fn reset(&mut self) {
        self.reads = 0;
        if let Some(seen) = &mut self.memo {
            seen.clear();
        }
    }
}
