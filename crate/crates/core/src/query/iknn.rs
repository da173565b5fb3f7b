//! Inverse k-nearest-neighbour queries.
//!
//! An object `o` is a result iff fewer than `k` objects other than `o` are
//! strictly closer to `o` than its farthest query point. During traversal an
//! entry is pruned once a lower bound on that number, for every point in the
//! entry, reaches `k`. The bound has three parts: the other query points, the
//! non-query points known to lie in the convex hull of `Q` (never farther than
//! the farthest query), and entries that are provably closer than every
//! point's farthest query.

use crate::geometry::hull::HULL_TOL;
use crate::geometry::{dist2, farthest_query2, Point, QuerySet, Rect};
use crate::index::{AccessMeter, AggRTree, BestFirst, Boundary, Entry, EntryRef};
use crate::predicate::knn_rule;

use super::{Outcome, QueryOptions};

/// False iff `|Q| > k`, in which case the answer is empty.
pub fn iknn_fast_validate(q: &QuerySet, k: usize) -> bool {
    q.len() <= k
}

/// The number of further dominating objects an entry tolerates:
/// `k − |H| − |Q|`, plus one for entries that may lie inside the hull.
pub fn prune_threshold(k: usize, q_count: usize, hull_count: u64, inside_hull: bool) -> i64 {
    k as i64 - hull_count as i64 - q_count as i64 + i64::from(inside_hull)
}

/// An entry with the number of its points that may be counted as closer.
#[derive(Clone, Debug)]
pub struct LedgerEntry {
    pub mbr: Rect,
    pub count: u64,
}

/// Entries seen so far, split by where they currently live.
#[derive(Clone, Debug, Default)]
pub struct PruneLedger {
    pub candidates: Vec<LedgerEntry>,
    pub pruned: Vec<LedgerEntry>,
    pub queue: Vec<LedgerEntry>,
}

/// Sum of the counts of ledger entries provably closer to every point of `e`
/// than that point's farthest query.
pub fn prune_count(e: &Rect, q: &QuerySet, ledger: &PruneLedger) -> u64 {
    let (_, m2) = farthest_query2(e, q);
    ledger
        .candidates
        .iter()
        .chain(&ledger.pruned)
        .chain(&ledger.queue)
        .filter(|x| e.max_dist2_rect(&x.mbr) < m2)
        .map(|x| x.count)
        .sum()
}

/// Lower bound on the number of non-query data points inside the hull of `Q`.
#[derive(Clone, Copy, Debug, Default)]
pub struct HullCounter {
    count: u64,
}

impl HullCounter {
    pub fn count(&self) -> u64 {
        self.count
    }

    /// Count `e` if every point under it is a non-query point inside the
    /// hull. Returns whether it was counted.
    ///
    /// Hull membership is tolerant, so the box is inflated past that tolerance
    /// first: only points clearly inside are counted.
    pub fn offer(&mut self, e: &Entry, point: Option<&Point>, q: &QuerySet) -> bool {
        let scale = q.bbox().lo().iter().chain(q.bbox().hi()).fold(1.0f64, |m, c| m.max(c.abs()));
        let margin = 4.0 * HULL_TOL * scale;
        let inside = match point {
            Some(p) => !q.has_location(p.coords()) && q.rect_in_hull(&Rect::from_point(p.coords()).inflated(margin)),
            None => q.count_in(&e.mbr) == 0 && q.rect_in_hull(&e.mbr.inflated(margin)),
        };
        if inside {
            self.count += e.count;
        }
        inside
    }
}

/// Objects of `t` having every query point among their `k` nearest neighbours.
pub fn iknn_query<'t>(t: &'t AggRTree, q: &QuerySet, k: usize, meter: &mut AccessMeter) -> Vec<&'t Point> {
    let out = run(t, None, q, k, &QueryOptions::default(), meter);
    out.results.iter().filter_map(|&id| t.lookup(id)).collect()
}

pub(crate) fn run(
    data: &AggRTree,
    cands: Option<&AggRTree>,
    q: &QuerySet,
    k: usize,
    opts: &QueryOptions,
    meter: &mut AccessMeter,
) -> Outcome {
    if !iknn_fast_validate(q, k) {
        return Outcome::empty();
    }
    let mut f = Filter::new(data, cands, q, k, opts.trace);
    f.traverse(meter);
    let survivors = f.recheck();

    let mut results = Vec::new();
    for c in &survivors {
        let (_, r2) = farthest_query2(*c, q);
        let closer = data.range_count2(c.coords(), r2, Boundary::Strict, Some(c), k as u64, meter);
        if knn_rule(closer, k) {
            results.push(c.id);
        }
    }
    Outcome {
        results,
        candidates: f.candidates.len(),
        refinement_checks: survivors.len(),
        pruned: f.trace.unwrap_or_default(),
        validated_empty: false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    /// Counts towards pruning only (bichromatic data tree).
    Data,
    /// Candidate only (bichromatic candidate tree).
    Cand,
    /// Monochromatic: both.
    Both,
}

impl Side {
    fn prunes(self) -> bool {
        self != Side::Cand
    }

    fn candidate(self) -> bool {
        self != Side::Data
    }
}

#[derive(Clone, Copy, Debug)]
struct Tag {
    side: Side,
    hull_counted: bool,
    /// Points under the entry that may be counted as closer: zero for
    /// candidate-side and hull-counted entries, otherwise the aggregate count
    /// minus query points that could be inside.
    weight: u64,
}

struct Settled<'t> {
    at: EntryRef,
    mbr: &'t Rect,
    weight: u64,
}

struct Candidate<'t> {
    at: EntryRef,
    point: &'t Point,
    inside: bool,
}

struct Filter<'t, 'q> {
    bf: BestFirst<'t, Tag>,
    q: &'q QuerySet,
    k: usize,
    bichromatic: bool,
    hull: HullCounter,
    settled: Vec<Settled<'t>>,
    candidates: Vec<Candidate<'t>>,
    trace: Option<Vec<u64>>,
}

impl<'t, 'q> Filter<'t, 'q> {
    fn new(data: &'t AggRTree, cands: Option<&'t AggRTree>, q: &'q QuerySet, k: usize, trace: bool) -> Self {
        let mut trees = vec![data];
        trees.extend(cands);
        Self {
            bf: BestFirst::new(trees),
            q,
            k,
            bichromatic: cands.is_some(),
            hull: HullCounter::default(),
            settled: Vec::new(),
            candidates: Vec::new(),
            trace: trace.then(Vec::new),
        }
    }

    fn key_tag(q: &QuerySet, e: &Entry, side: Side, hull_counted: bool) -> (f64, Tag) {
        let weight = if side.prunes() && !hull_counted { e.count.saturating_sub(q.count_in(&e.mbr)) } else { 0 };
        (farthest_query2(&e.mbr, q).1, Tag { side, hull_counted, weight })
    }

    fn traverse(&mut self, meter: &mut AccessMeter) {
        let q = self.q;
        if self.bichromatic {
            self.bf.push_root(0, meter, |e| Self::key_tag(q, e, Side::Data, false));
            self.bf.push_root(1, meter, |e| Self::key_tag(q, e, Side::Cand, false));
        } else {
            self.bf.push_root(0, meter, |e| Self::key_tag(q, e, Side::Both, false));
        }

        while let Some(item) = self.bf.pop() {
            let e = self.bf.entry(item.at);
            let point = self.bf.point(item.at);
            let mut tag = item.tag;
            let inside = match point {
                Some(p) => q.has_location(p.coords()) || q.point_in_hull(p.coords()),
                None => e.mbr.intersects(q.bbox()),
            };
            let prune = self.prunable(item.at, &e.mbr, item.key, inside, tag.side);

            if tag.side.prunes() && !tag.hull_counted && self.hull.offer(e, point, q) {
                tag.hull_counted = true;
                tag.weight = 0;
            }

            if prune {
                if tag.side.candidate() {
                    if let Some(tr) = &mut self.trace {
                        tr.extend(self.bf.tree(item.at.tree).subtree_points(e).iter().map(|p| p.id));
                    }
                }
                self.settled.push(Settled { at: item.at, mbr: &e.mbr, weight: tag.weight });
            } else if let Some(p) = point {
                self.settled.push(Settled { at: item.at, mbr: &e.mbr, weight: tag.weight });
                if tag.side.candidate() {
                    self.candidates.push(Candidate { at: item.at, point: p, inside });
                }
            } else {
                self.bf.expand(item.at, meter, |c| Self::key_tag(q, c, tag.side, tag.hull_counted));
            }
        }
    }

    /// Re-test every candidate against the final ledger and hull count.
    fn recheck(&mut self) -> Vec<&'t Point> {
        let mut keep = Vec::new();
        for i in 0..self.candidates.len() {
            let c = &self.candidates[i];
            let (at, p, inside) = (c.at, c.point, c.inside);
            let mbr = &self.bf.entry(at).mbr;
            let m2 = farthest_query2(mbr, self.q).1;
            if self.prunable(at, mbr, m2, inside, Side::Cand) {
                if let Some(tr) = &mut self.trace {
                    tr.push(p.id);
                }
            } else {
                keep.push(p);
            }
        }
        keep
    }

    /// Whether no point under the entry can be a result. `m2` is the squared
    /// `max_q minDist(e, q)`.
    fn prunable(&self, at: EntryRef, mbr: &Rect, m2: f64, inside: bool, side: Side) -> bool {
        let threshold = prune_threshold(self.k, self.q.len(), self.hull.count(), inside);
        let need = threshold + tie_slack(mbr, m2, self.q) as i64;
        if need < 0 {
            return true;
        }
        // A bichromatic candidate may also be stored in the data tree, where
        // it would be counted as closer than itself.
        let watch_self = self.bichromatic && side == Side::Cand;
        let mut self_hit = false;
        let mut count: i64 = 0;
        let queued = self.bf.queued().filter(|x| x.tag.weight > 0).map(|x| (x.at, &self.bf.entry(x.at).mbr, x.tag.weight));
        let settled = self.settled.iter().filter(|s| s.weight > 0).map(|s| (s.at, s.mbr, s.weight));
        for (other, omb, w) in settled.chain(queued) {
            if other == at || mbr.max_dist2_rect(omb) >= m2 {
                continue;
            }
            count += w as i64;
            if watch_self && !self_hit && mbr.intersects(omb) {
                self_hit = true;
            }
            if count > need + i64::from(self_hit) {
                return true;
            }
        }
        false
    }
}

/// Bound on how many query points beyond one can tie as the farthest query of
/// a point in `mbr`. Tied farthest queries are not strictly closer, so each
/// extra one weakens the bound.
fn tie_slack(mbr: &Rect, m2: f64, q: &QuerySet) -> u64 {
    let possible: Vec<&Point> = q.members().iter().filter(|m| mbr.max_dist2(m.coords()) >= m2).collect();
    if possible.len() < 2 {
        return 0;
    }
    for (i, a) in possible.iter().enumerate() {
        for b in &possible[i + 1..] {
            if a.coords() == b.coords() || bisector_meets(mbr, a.coords(), b.coords()) {
                return possible.len() as u64 - 1;
            }
        }
    }
    0
}

/// The hyperplane of points equidistant from `a` and `b` touches `mbr`
/// (with a little tolerance in the conservative direction).
fn bisector_meets(mbr: &Rect, a: &[f64], b: &[f64]) -> bool {
    // f(x) = 2 x·(b − a) − (|b|² − |a|²) vanishes on the bisector.
    let c = dist2(b, &vec![0.0; b.len()]) - dist2(a, &vec![0.0; a.len()]);
    let (mut lo, mut hi) = (-c, -c);
    let mut scale = c.abs();
    for i in 0..a.len() {
        let g = 2.0 * (b[i] - a[i]);
        let (x, y) = (g * mbr.lo()[i], g * mbr.hi()[i]);
        lo += x.min(y);
        hi += x.max(y);
        scale += x.abs().max(y.abs());
    }
    let tol = 1e-9 * (1.0 + scale);
    lo <= tol && hi >= -tol
}
