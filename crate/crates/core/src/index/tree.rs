use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::geometry::{Point, Rect};

pub type NodeId = usize;

static NEXT_UID: AtomicU64 = AtomicU64::new(1);

/// Bytes per entry: `2·d` 8-byte coordinates, an 8-byte child reference and an
/// 8-byte aggregate count.
pub fn fanout_for(page_size_bytes: usize, dim: usize) -> usize {
    (page_size_bytes / (16 * dim + 16)).max(4)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Child {
    Node(NodeId),
    /// Index into [`AggRTree::points`].
    Point(usize),
}

#[derive(Clone, Debug)]
pub struct Entry {
    pub mbr: Rect,
    /// Number of points in the subtree.
    pub count: u64,
    pub child: Child,
}

impl Entry {
    pub fn is_point(&self) -> bool {
        matches!(self.child, Child::Point(_))
    }
}

#[derive(Clone, Debug)]
pub struct Node {
    /// 0 for leaves.
    pub level: u32,
    pub entries: Vec<Entry>,
}

/// Aggregate R-tree: every entry carries the point count of its subtree.
///
/// Built once by Sort-Tile-Recursive packing and immutable afterwards. Node ids
/// follow depth-first creation order from the root.
#[derive(Debug)]
pub struct AggRTree {
    uid: u64,
    dim: usize,
    fanout: usize,
    nodes: Vec<Node>,
    points: Vec<Point>,
    by_id: HashMap<u64, usize>,
    parent: Vec<NodeId>,
    point_leaf: Vec<NodeId>,
}

struct Item {
    center: Vec<f64>,
    mbr: Rect,
    count: u64,
    child: Child,
    order: usize,
}

impl AggRTree {
    pub fn bulk_load(points: Vec<Point>, page_size_bytes: usize) -> Result<Self> {
        let first = points.first().ok_or(Error::Empty("dataset"))?;
        let dim = first.dim();
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        Self::bulk_load_with_fanout(points, fanout_for(page_size_bytes, dim))
    }

    pub fn bulk_load_with_fanout(points: Vec<Point>, fanout: usize) -> Result<Self> {
        let first = points.first().ok_or(Error::Empty("dataset"))?;
        let dim = first.dim();
        let fanout = fanout.max(2);
        let mut by_id = HashMap::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: p.dim() });
            }
            if by_id.insert(p.id, i).is_some() {
                return Err(Error::DuplicateId(p.id));
            }
        }

        let mut staging: Vec<Node> = Vec::new();
        let mut items: Vec<Item> = points
            .iter()
            .enumerate()
            .map(|(i, p)| Item {
                center: p.coords().to_vec(),
                mbr: Rect::from_point(p.coords()),
                count: 1,
                child: Child::Point(i),
                order: i,
            })
            .collect();
        let mut level = 0u32;
        loop {
            let groups = items.len().div_ceil(fanout);
            let sizes = balanced(items.len(), groups);
            let tiles = str_tiles(items, &sizes, 0, dim);
            let mut next = Vec::with_capacity(tiles.len());
            for (order, tile) in tiles.into_iter().enumerate() {
                let mut mbr = Rect::empty(dim);
                let mut count = 0;
                let entries: Vec<Entry> = tile
                    .into_iter()
                    .map(|it| {
                        mbr.expand_rect(&it.mbr);
                        count += it.count;
                        Entry { mbr: it.mbr, count: it.count, child: it.child }
                    })
                    .collect();
                let id = staging.len();
                staging.push(Node { level, entries });
                next.push(Item { center: mbr.center(), mbr, count, child: Child::Node(id), order });
            }
            if next.len() == 1 {
                break;
            }
            items = next;
            level += 1;
        }

        // Renumber depth-first from the root.
        let root_staged = staging.len() - 1;
        let mut remap = vec![usize::MAX; staging.len()];
        let mut order = Vec::with_capacity(staging.len());
        let mut stack = vec![root_staged];
        while let Some(n) = stack.pop() {
            remap[n] = order.len();
            order.push(n);
            for e in staging[n].entries.iter().rev() {
                if let Child::Node(c) = e.child {
                    stack.push(c);
                }
            }
        }
        let mut slots: Vec<Option<Node>> = staging.into_iter().map(Some).collect();
        let nodes = order
            .iter()
            .map(|&old| {
                let mut node = slots[old].take().expect("each node visited once");
                for e in &mut node.entries {
                    if let Child::Node(c) = e.child {
                        e.child = Child::Node(remap[c]);
                    }
                }
                node
            })
            .collect::<Vec<Node>>();

        let mut parent = vec![usize::MAX; nodes.len()];
        let mut point_leaf = vec![usize::MAX; points.len()];
        for (id, node) in nodes.iter().enumerate() {
            for e in &node.entries {
                match e.child {
                    Child::Node(c) => parent[c] = id,
                    Child::Point(i) => point_leaf[i] = id,
                }
            }
        }

        Ok(Self {
            uid: NEXT_UID.fetch_add(1, Ordering::Relaxed),
            dim,
            fanout,
            nodes,
            points,
            by_id,
            parent,
            point_leaf,
        })
    }

    pub fn uid(&self) -> u64 {
        self.uid
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn fanout(&self) -> usize {
        self.fanout
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub const ROOT: NodeId = 0;

    pub fn root(&self) -> &Node {
        &self.nodes[Self::ROOT]
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn height(&self) -> u32 {
        self.root().level + 1
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.level == 0).count()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, idx: usize) -> &Point {
        &self.points[idx]
    }

    pub fn lookup(&self, id: u64) -> Option<&Point> {
        self.by_id.get(&id).map(|&i| &self.points[i])
    }

    /// Index of the stored point identical (id and coordinates) to `p`.
    pub fn index_of(&self, p: &Point) -> Option<usize> {
        self.by_id.get(&p.id).copied().filter(|&i| self.points[i].coords() == p.coords())
    }

    /// Whether stored point `idx` lies in the subtree below `child`.
    pub fn subtree_holds(&self, child: Child, idx: usize) -> bool {
        match child {
            Child::Point(i) => i == idx,
            Child::Node(n) => {
                let mut cur = self.point_leaf[idx];
                loop {
                    if cur == n {
                        return true;
                    }
                    // Preorder ids: ancestors have smaller ids.
                    if cur < n || cur == Self::ROOT {
                        return false;
                    }
                    cur = self.parent[cur];
                }
            }
        }
    }

    pub fn contains_object(&self, p: &Point) -> bool {
        self.index_of(p).is_some()
    }

    /// Sum of root entry counts.
    pub fn total(&self) -> u64 {
        self.root().entries.iter().map(|e| e.count).sum()
    }

    /// Every point under `entry`, without touching any meter.
    pub fn subtree_points(&self, entry: &Entry) -> Vec<&Point> {
        let mut out = Vec::new();
        let mut stack = vec![entry.child];
        while let Some(c) = stack.pop() {
            match c {
                Child::Point(i) => out.push(&self.points[i]),
                Child::Node(n) => stack.extend(self.nodes[n].entries.iter().map(|e| e.child)),
            }
        }
        out
    }

    /// Check structural invariants: MBR containment, aggregate counts, minimum
    /// fill of non-root nodes and point-entry shape.
    pub fn audit(&self) -> std::result::Result<(), String> {
        let min_fill = self.fanout.div_ceil(2);
        for (id, node) in self.nodes.iter().enumerate() {
            if node.entries.len() > self.fanout {
                return Err(format!("node {id} overfull"));
            }
            if id != Self::ROOT && node.entries.len() < min_fill {
                return Err(format!("node {id} has {} < {min_fill} entries", node.entries.len()));
            }
            for e in &node.entries {
                match e.child {
                    Child::Point(i) => {
                        if node.level != 0 || e.count != 1 || !e.mbr.is_point() {
                            return Err(format!("bad point entry in node {id}"));
                        }
                        if e.mbr.lo() != self.points[i].coords() {
                            return Err(format!("point entry mbr mismatch in node {id}"));
                        }
                    }
                    Child::Node(c) => {
                        let child = &self.nodes[c];
                        if child.level + 1 != node.level {
                            return Err(format!("level mismatch under node {id}"));
                        }
                        let sum: u64 = child.entries.iter().map(|x| x.count).sum();
                        if sum != e.count {
                            return Err(format!("count {} != child sum {sum} (node {id})", e.count));
                        }
                        if !child.entries.iter().all(|x| e.mbr.contains_rect(&x.mbr)) {
                            return Err(format!("mbr of node {c} not contained in parent"));
                        }
                    }
                }
            }
        }
        if self.total() != self.points.len() as u64 {
            return Err("root counts do not sum to total".into());
        }
        Ok(())
    }
}

/// `parts` sizes summing to `total`, differing by at most one.
fn balanced(total: usize, parts: usize) -> Vec<usize> {
    let base = total / parts;
    let rem = total % parts;
    (0..parts).map(|i| base + usize::from(i < rem)).collect()
}

/// Smallest `s` with `s^k >= g`.
fn slabs(g: usize, k: u32) -> usize {
    let mut s = (g as f64).powf(1.0 / k as f64).ceil().max(1.0) as usize;
    while s > 1 && (s - 1).checked_pow(k).is_some_and(|v| v >= g) {
        s -= 1;
    }
    while s.checked_pow(k).is_some_and(|v| v < g) {
        s += 1;
    }
    s
}

/// Sort-Tile-Recursive grouping into tiles of exactly the given sizes.
fn str_tiles(mut items: Vec<Item>, sizes: &[usize], axis: usize, dim: usize) -> Vec<Vec<Item>> {
    items.sort_by(|a, b| a.center[axis].total_cmp(&b.center[axis]).then(a.order.cmp(&b.order)));
    if sizes.len() == 1 {
        return vec![items];
    }
    let mut out = Vec::with_capacity(sizes.len());
    if axis + 1 == dim {
        let mut rest = items.into_iter();
        for &s in sizes {
            out.push(rest.by_ref().take(s).collect());
        }
        return out;
    }
    let s = slabs(sizes.len(), (dim - axis) as u32);
    let per_slab = balanced(sizes.len(), s.min(sizes.len()));
    let mut rest = items.into_iter();
    let mut start = 0;
    for groups in per_slab {
        let slab_sizes = &sizes[start..start + groups];
        start += groups;
        let n: usize = slab_sizes.iter().sum();
        let slab: Vec<Item> = rest.by_ref().take(n).collect();
        out.extend(str_tiles(slab, slab_sizes, axis + 1, dim));
    }
    out
}
