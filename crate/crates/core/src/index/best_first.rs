use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::geometry::Point;

use super::meter::AccessMeter;
use super::tree::{AggRTree, Child, Entry, NodeId};

/// Position of an entry: tree (index into the traversal's tree list), node and
/// slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EntryRef {
    pub tree: usize,
    pub node: NodeId,
    pub slot: usize,
}

/// A queued entry with its key and caller-defined tag.
#[derive(Clone, Debug)]
pub struct Queued<T> {
    pub key: f64,
    pub at: EntryRef,
    pub tag: T,
}

impl<T> PartialEq for Queued<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T> Eq for Queued<T> {}

impl<T> PartialOrd for Queued<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T> Ord for Queued<T> {
    // Reversed: BinaryHeap is a max-heap and we want the smallest key first.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .key
            .total_cmp(&self.key)
            .then(other.at.node.cmp(&self.at.node))
            .then(other.at.slot.cmp(&self.at.slot))
            .then(other.at.tree.cmp(&self.at.tree))
    }
}

/// Best-first traversal over one or more trees sharing a single priority
/// queue ordered by (key, node id, slot).
///
/// Nothing is expanded automatically: the caller pops an entry and decides
/// whether to expand it.
pub struct BestFirst<'t, T> {
    trees: Vec<&'t AggRTree>,
    heap: BinaryHeap<Queued<T>>,
}

impl<'t, T> BestFirst<'t, T> {
    pub fn new(trees: Vec<&'t AggRTree>) -> Self {
        Self { trees, heap: BinaryHeap::new() }
    }

    pub fn tree(&self, idx: usize) -> &'t AggRTree {
        self.trees[idx]
    }

    pub fn entry(&self, at: EntryRef) -> &'t Entry {
        &self.trees[at.tree].node(at.node).entries[at.slot]
    }

    /// The stored point behind a point entry.
    pub fn point(&self, at: EntryRef) -> Option<&'t Point> {
        match self.entry(at).child {
            Child::Point(i) => Some(self.trees[at.tree].point(i)),
            Child::Node(_) => None,
        }
    }

    /// Read node `node` of tree `tree` and enqueue all its entries.
    pub fn push_node(
        &mut self,
        tree: usize,
        node: NodeId,
        meter: &mut AccessMeter,
        mut key_tag: impl FnMut(&Entry) -> (f64, T),
    ) {
        let t = self.trees[tree];
        meter.read(t.uid(), node);
        for (slot, e) in t.node(node).entries.iter().enumerate() {
            let (key, tag) = key_tag(e);
            self.heap.push(Queued { key, at: EntryRef { tree, node, slot }, tag });
        }
    }

    pub fn push_root(&mut self, tree: usize, meter: &mut AccessMeter, key_tag: impl FnMut(&Entry) -> (f64, T)) {
        self.push_node(tree, AggRTree::ROOT, meter, key_tag);
    }

    /// Expand an inner entry: read its child node and enqueue the children.
    /// Point entries are left alone.
    pub fn expand(&mut self, at: EntryRef, meter: &mut AccessMeter, key_tag: impl FnMut(&Entry) -> (f64, T)) {
        if let Child::Node(c) = self.entry(at).child {
            self.push_node(at.tree, c, meter, key_tag);
        }
    }

    pub fn pop(&mut self) -> Option<Queued<T>> {
        self.heap.pop()
    }

    pub fn peek(&self) -> Option<&Queued<T>> {
        self.heap.peek()
    }

    /// Queued items in arbitrary order.
    pub fn queued(&self) -> impl Iterator<Item = &Queued<T>> {
        self.heap.iter()
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    /// Drop every queued item for which `keep` is false.
    pub fn retain(&mut self, keep: impl FnMut(&Queued<T>) -> bool) {
        self.heap.retain(keep);
    }
}

/// Points of `tree` in nondecreasing `key` order, expanding inner entries as
/// they surface. `key` must not decrease from an entry to its children.
pub fn best_first<'t, K>(tree: &'t AggRTree, key: K, meter: &'t mut AccessMeter) -> BestFirstPoints<'t, K>
where
    K: FnMut(&Entry) -> f64,
{
    BestFirstPoints { bf: BestFirst::new(vec![tree]), key, meter, started: false }
}

pub struct BestFirstPoints<'t, K> {
    bf: BestFirst<'t, ()>,
    key: K,
    meter: &'t mut AccessMeter,
    started: bool,
}

impl<'t, K: FnMut(&Entry) -> f64> Iterator for BestFirstPoints<'t, K> {
    type Item = (f64, &'t Point);

    fn next(&mut self) -> Option<Self::Item> {
        if !self.started {
            self.started = true;
            let key = &mut self.key;
            self.bf.push_root(0, self.meter, |e| (key(e), ()));
        }
        while let Some(item) = self.bf.pop() {
            if let Some(p) = self.bf.point(item.at) {
                return Some((item.key, p));
            }
            let key = &mut self.key;
            self.bf.expand(item.at, self.meter, |e| (key(e), ()));
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tree(xs: &[f64]) -> AggRTree {
        let pts = xs.iter().enumerate().map(|(i, &x)| Point::new(i as u64, vec![x]).unwrap()).collect();
        AggRTree::bulk_load_with_fanout(pts, 4).unwrap()
    }

    #[test]
    fn emits_in_distance_order() {
        let t = tree(&[10.0, 0.0, 1.0]);
        let mut m = AccessMeter::new();
        let order: Vec<u64> = best_first(&t, |e| e.mbr.min_dist2(&[0.0]), &mut m).map(|(_, p)| p.id).collect();
        assert_eq!(order, vec![1, 2, 0]);
    }

    #[test]
    fn constant_key_emits_every_point_once() {
        let xs: Vec<f64> = (0..123).map(|i| (i * 37 % 101) as f64).collect();
        let t = tree(&xs);
        let mut m = AccessMeter::new();
        let mut ids: Vec<u64> = best_first(&t, |_| 1.0, &mut m).map(|(_, p)| p.id).collect();
        ids.sort();
        assert_eq!(ids, (0..123).collect::<Vec<_>>());
        assert_eq!(m.reads(), t.node_count() as u64);
    }
}
