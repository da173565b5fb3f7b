//! Inverse ε-range queries.

use crate::geometry::{dist2, Point, QuerySet, Rect};
use crate::index::{AccessMeter, AggRTree, Child, NodeId};
use crate::predicate::eps_rule;

use super::{Outcome, QueryOptions};

/// Relative slack on the pairwise test so rounding never reports a false
/// empty answer.
const VALIDATE_MARGIN: f64 = 1e-12;

/// False when two query points are more than `2ε` apart, in which case no
/// object can have both in its ε-ball.
pub fn ieps_fast_validate(q: &QuerySet, eps: f64) -> bool {
    let limit = 4.0 * eps * eps * (1.0 + VALIDATE_MARGIN);
    let m = q.members();
    for (i, a) in m.iter().enumerate() {
        for b in &m[i + 1..] {
            if dist2(a.coords(), b.coords()) > limit {
                return false;
            }
        }
    }
    true
}

/// Intersection of the boxes bounding every query point's ε-ball.
pub fn ieps_filter_rect(q: &QuerySet, eps: f64) -> Rect {
    let d = q.dim();
    let mut lo = vec![f64::NEG_INFINITY; d];
    let mut hi = vec![f64::INFINITY; d];
    for m in q.members() {
        for i in 0..d {
            lo[i] = lo[i].max(m.coords()[i] - eps);
            hi[i] = hi[i].min(m.coords()[i] + eps);
        }
    }
    Rect::new(lo, hi).unwrap_or_else(|_| Rect::empty(d))
}

/// Objects of `t` within distance `eps` (inclusive) of every query point.
pub fn ieps_query<'t>(t: &'t AggRTree, q: &QuerySet, eps: f64, meter: &mut AccessMeter) -> Vec<&'t Point> {
    if !ieps_fast_validate(q, eps) {
        return Vec::new();
    }
    let mut found = Vec::new();
    traverse(t, q, eps, meter, &mut found, None);
    found
}

pub(crate) fn run(t: &AggRTree, q: &QuerySet, eps: f64, opts: &QueryOptions, meter: &mut AccessMeter) -> Outcome {
    if !ieps_fast_validate(q, eps) {
        return Outcome::empty();
    }
    let mut found = Vec::new();
    let mut pruned = Vec::new();
    traverse(t, q, eps, meter, &mut found, opts.trace.then_some(&mut pruned));
    Outcome {
        candidates: found.len(),
        refinement_checks: found.len(),
        results: found.iter().map(|p| p.id).collect(),
        pruned,
        ..Outcome::default()
    }
}

fn traverse<'t>(
    t: &'t AggRTree,
    q: &QuerySet,
    eps: f64,
    meter: &mut AccessMeter,
    found: &mut Vec<&'t Point>,
    mut trace: Option<&mut Vec<u64>>,
) {
    // Padded so rounding in `q ± ε` never cuts off a point on a sphere; the
    // distance test below is exact.
    let scale = q.bbox().lo().iter().chain(q.bbox().hi()).fold(eps, |m, c| m.max(c.abs()));
    let filter = ieps_filter_rect(q, eps).inflated(VALIDATE_MARGIN * (1.0 + scale));
    let r2 = eps * eps;
    let reachable = |mbr: &Rect| {
        filter.intersects(mbr) && q.members().iter().all(|m| mbr.min_dist2(m.coords()) <= r2)
    };
    if filter.is_empty() {
        if let Some(tr) = trace.as_deref_mut() {
            tr.extend(t.points().iter().map(|p| p.id));
        }
        return;
    }
    let mut stack: Vec<NodeId> = vec![AggRTree::ROOT];
    while let Some(n) = stack.pop() {
        meter.read(t.uid(), n);
        for e in t.node(n).entries.iter().rev() {
            if !reachable(&e.mbr) {
                if let Some(tr) = trace.as_deref_mut() {
                    tr.extend(t.subtree_points(e).iter().map(|p| p.id));
                }
                continue;
            }
            match e.child {
                Child::Node(c) => stack.push(c),
                Child::Point(i) => {
                    let p = t.point(i);
                    if q.members().iter().all(|m| eps_rule(dist2(p.coords(), m.coords()), eps)) {
                        found.push(p);
                    } else if let Some(tr) = trace.as_deref_mut() {
                        tr.push(p.id);
                    }
                }
            }
        }
    }
}
