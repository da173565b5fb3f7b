use crate::geometry::{Point, Rect};

use super::meter::AccessMeter;
use super::tree::{AggRTree, Child, Entry, NodeId};

/// Whether a distance equal to the radius is inside the range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Boundary {
    Closed,
    Strict,
}

impl Boundary {
    #[inline]
    pub fn admits(self, d2: f64, r2: f64) -> bool {
        match self {
            Boundary::Closed => d2 <= r2,
            Boundary::Strict => d2 < r2,
        }
    }
}

impl AggRTree {
    /// Points inside the closed window `w` whose ancestor entries all pass
    /// `filter`.
    pub fn window_query(
        &self,
        w: &Rect,
        meter: &mut AccessMeter,
        filter: Option<&dyn Fn(&Entry) -> bool>,
    ) -> Vec<&Point> {
        let mut out = Vec::new();
        self.window_visit(w, meter, filter, &mut |p| {
            out.push(p);
            true
        });
        out
    }

    /// True as soon as some point in `w` satisfies `pred`.
    pub fn window_any(&self, w: &Rect, meter: &mut AccessMeter, mut pred: impl FnMut(&Point) -> bool) -> bool {
        !self.window_visit(w, meter, None, &mut |p| !pred(p))
    }

    /// Depth-first window traversal; `visit` returns false to stop. Returns
    /// false if stopped early.
    pub fn window_visit<'a>(
        &'a self,
        w: &Rect,
        meter: &mut AccessMeter,
        filter: Option<&dyn Fn(&Entry) -> bool>,
        visit: &mut dyn FnMut(&'a Point) -> bool,
    ) -> bool {
        if w.is_empty() {
            return true;
        }
        let mut stack: Vec<NodeId> = vec![Self::ROOT];
        while let Some(n) = stack.pop() {
            meter.read(self.uid(), n);
            for e in self.node(n).entries.iter().rev() {
                if !w.intersects(&e.mbr) || filter.is_some_and(|f| !f(e)) {
                    continue;
                }
                match e.child {
                    Child::Node(c) => stack.push(c),
                    Child::Point(i) => {
                        let p = self.point(i);
                        if w.contains_point(p.coords()) && !visit(p) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Number of points within `radius` of `center`, not counting `exclude`.
    pub fn range_count(
        &self,
        center: &[f64],
        radius: f64,
        mode: Boundary,
        exclude: Option<&Point>,
        meter: &mut AccessMeter,
    ) -> u64 {
        self.range_count2(center, radius * radius, mode, exclude, u64::MAX, meter)
    }

    /// Like [`range_count`](Self::range_count) with a squared radius. Stops
    /// once `cap` is reached, so the result is `min(count, cap)`.
    ///
    /// Subtrees entirely inside the ball contribute their aggregate count
    /// without being read.
    pub fn range_count2(
        &self,
        center: &[f64],
        r2: f64,
        mode: Boundary,
        exclude: Option<&Point>,
        cap: u64,
        meter: &mut AccessMeter,
    ) -> u64 {
        if cap == 0 {
            return 0;
        }
        let excluded = exclude.and_then(|p| self.index_of(p));
        let mut count = 0u64;
        let mut stack: Vec<NodeId> = vec![Self::ROOT];
        while let Some(n) = stack.pop() {
            meter.read(self.uid(), n);
            for e in &self.node(n).entries {
                if !mode.admits(e.mbr.min_dist2(center), r2) {
                    continue;
                }
                match e.child {
                    Child::Point(i) => {
                        if Some(i) != excluded {
                            count += 1;
                        }
                    }
                    Child::Node(c) => {
                        if mode.admits(e.mbr.max_dist2(center), r2) {
                            count += e.count;
                            if excluded.is_some_and(|x| self.subtree_holds(e.child, x)) {
                                count -= 1;
                            }
                        } else {
                            stack.push(c);
                        }
                    }
                }
                if count >= cap {
                    return cap;
                }
            }
        }
        count
    }

    /// Reads every node once and returns all points. Mostly for tests.
    pub fn scan(&self, meter: &mut AccessMeter) -> Vec<&Point> {
        self.window_query(&Rect::unbounded(self.dim()), meter, None)
    }
}
