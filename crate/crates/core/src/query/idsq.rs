//! Inverse dynamic-skyline queries.
//!
//! A candidate `c ∉ Q` is a result iff no other object dominates any query
//! point with respect to `c`. Filtering combines pruning regions from pairs of
//! query points, regions contributed by data points as they are met, and (in
//! 2D) rules derived from the bounding box of `Q`.

use crate::geometry::{dominates_coords, mid_margin, pruning_region_safe, region_prunes, Point, QuerySet, Rect};
use crate::index::{AccessMeter, AggRTree, BestFirst, Entry};

use super::{Outcome, QueryOptions};

/// False when some query point has another query point in each of the `2^d`
/// orthants around it, which leaves no possible result. A point on an orthant
/// boundary counts for every orthant it touches; a point at the same location
/// counts for none.
pub fn idsq_fast_validate(q: &QuerySet) -> bool {
    let d = q.dim();
    if d >= usize::BITS as usize {
        return true;
    }
    let m = q.members();
    for a in m {
        let mut covered = vec![false; 1 << d];
        for b in m {
            if b.coords() == a.coords() {
                continue;
            }
            // Orthant masks: bit i set means "above a in dimension i".
            let mut fixed = 0usize;
            let mut free = 0usize;
            for i in 0..d {
                let (x, y) = (b.coords()[i], a.coords()[i]);
                if x > y {
                    fixed |= 1 << i;
                } else if x == y {
                    free |= 1 << i;
                }
            }
            // Every subset of the free dimensions.
            let mut sub = free;
            loop {
                covered[fixed | sub] = true;
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & free;
            }
        }
        if covered.iter().all(|&c| c) {
            return false;
        }
    }
    true
}

/// Whether an object hidden inside the tested box could be the very object a
/// rule is built from.
#[derive(Clone, Copy, Debug)]
enum Guard<'a> {
    /// Skip rules whose source object lies inside the box.
    Location,
    /// Skip rules built from this object.
    Object(&'a Point),
}

impl Guard<'_> {
    fn blocks(&self, x: &Rect, source: &Point) -> bool {
        match self {
            Guard::Location => x.contains_point(source.coords()),
            Guard::Object(c) => c.same_object(source),
        }
    }
}

/// Union of pruning regions, kept as a list and tested region by region.
#[derive(Clone, Debug, Default)]
pub struct PruneSpace {
    pairs: Vec<Rect>,
    objects: Vec<(Rect, Point)>,
}

impl PruneSpace {
    /// Regions `PR_qi(qj)` for every ordered pair of distinct query points.
    pub fn from_queries(q: &QuerySet) -> Self {
        let mut pairs = Vec::new();
        for a in q.members() {
            for b in q.members() {
                if a.coords() != b.coords() {
                    pairs.push(pruning_region_safe(a.coords(), b.coords()));
                }
            }
        }
        Self { pairs, objects: Vec::new() }
    }

    /// Add `PR_q(o)` for every query point `q`.
    pub fn add_object(&mut self, o: &Point, q: &QuerySet) {
        for m in q.members() {
            if m.coords() != o.coords() {
                self.objects.push((pruning_region_safe(m.coords(), o.coords()), o.clone()));
            }
        }
    }

    pub fn len(&self) -> usize {
        self.pairs.len() + self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `x` lies wholly inside a region built from two query points.
    pub fn pair_prune(&self, x: &Rect) -> bool {
        self.pairs.iter().any(|r| region_prunes(r, x))
    }

    /// `x` lies wholly inside a region from a data object that `x` cannot
    /// contain.
    pub fn object_prune(&self, x: &Rect) -> bool {
        self.object_prune_guarded(x, Guard::Location)
    }

    fn object_prune_guarded(&self, x: &Rect, guard: Guard<'_>) -> bool {
        self.objects.iter().any(|(r, o)| region_prunes(r, x) && !guard.blocks(x, o))
    }
}

/// Query-box context for the 2D rules. Needs `|Q| ≥ 2` and a box with
/// positive width and height.
#[derive(Clone, Debug)]
pub struct QBoxContext {
    lo: [f64; 2],
    hi: [f64; 2],
    center: [f64; 2],
    /// Direction (−1 or +1 per axis) from the centre to each corner holding a
    /// query point.
    corners: Vec<[f64; 2]>,
    /// `(axis, upper)` for each box side holding a query point that is not a
    /// corner.
    edges: Vec<(usize, bool)>,
    /// Closest two objects beyond each side `(axis, upper)`, indexed
    /// `2 * axis + upper`, whose other coordinate lies within the box.
    bands: [Vec<Point>; 4],
}

impl QBoxContext {
    pub fn new(q: &QuerySet) -> Option<Self> {
        if q.dim() != 2 || q.len() < 2 {
            return None;
        }
        let b = q.bbox();
        let lo = [b.lo()[0], b.lo()[1]];
        let hi = [b.hi()[0], b.hi()[1]];
        if !(lo[0] < hi[0] && lo[1] < hi[1]) {
            return None;
        }
        let center = [0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1])];
        let mut corners = Vec::new();
        let mut edges = Vec::new();
        for m in q.members() {
            let c = m.coords();
            let on = |i: usize| (c[i] == lo[i], c[i] == hi[i]);
            let (x, y) = (on(0), on(1));
            let at_x = x.0 || x.1;
            let at_y = y.0 || y.1;
            if at_x && at_y {
                let dir = [if x.1 { 1.0 } else { -1.0 }, if y.1 { 1.0 } else { -1.0 }];
                if !corners.contains(&dir) {
                    corners.push(dir);
                }
            } else if at_x || at_y {
                let side = if at_x { (0, x.1) } else { (1, y.1) };
                if !edges.contains(&side) {
                    edges.push(side);
                }
            }
        }
        Some(Self { lo, hi, center, corners, edges, bands: Default::default() })
    }

    pub fn qbox(&self) -> Rect {
        Rect::new(self.lo.to_vec(), self.hi.to_vec()).expect("finite box")
    }

    /// Record a data object if it lies beyond one side of the box while its
    /// other coordinate is within the box.
    pub fn observe(&mut self, o: &Point) {
        let c = o.coords();
        for axis in 0..2 {
            let other = 1 - axis;
            if !(self.lo[other] <= c[other] && c[other] <= self.hi[other]) {
                continue;
            }
            let upper = if c[axis] > self.hi[axis] {
                true
            } else if c[axis] < self.lo[axis] {
                false
            } else {
                continue;
            };
            let band = &mut self.bands[2 * axis + usize::from(upper)];
            // Closest to the box first.
            let closer = |p: &Point| if upper { c[axis] < p.coords()[axis] } else { c[axis] > p.coords()[axis] };
            let pos = band.iter().position(|p| closer(p)).unwrap_or(band.len());
            if pos < 2 {
                band.insert(pos, o.clone());
                band.truncate(2);
            }
        }
    }

    fn prunes(&self, x: &Rect, guard: Guard<'_>) -> bool {
        let (lo, hi) = (x.lo(), x.hi());
        // I: beyond the centre towards a query corner, and outside the box.
        for dir in &self.corners {
            let beyond = (0..2).all(|i| {
                let m = mid_margin(self.lo[i], self.hi[i]);
                if dir[i] > 0.0 { lo[i] > self.center[i] + m } else { hi[i] < self.center[i] - m }
            });
            let outside = (0..2).any(|i| if dir[i] > 0.0 { lo[i] > self.hi[i] } else { hi[i] < self.lo[i] });
            if beyond && outside {
                return true;
            }
        }
        // II: strictly beyond a side holding a non-corner query point.
        for &(axis, upper) in &self.edges {
            if if upper { lo[axis] > self.hi[axis] } else { hi[axis] < self.lo[axis] } {
                return true;
            }
        }
        // IV: beyond the line halfway between a side and the nearest object
        // past it.
        for axis in 0..2 {
            for upper in [false, true] {
                let Some(o) = self.bands[2 * axis + usize::from(upper)].iter().find(|o| !guard.blocks(x, o)) else {
                    continue;
                };
                let oc = o.coords()[axis];
                let hit = if upper {
                    lo[axis] > 0.5 * (oc + self.hi[axis]) + mid_margin(oc, self.hi[axis])
                } else {
                    hi[axis] < 0.5 * (oc + self.lo[axis]) - mid_margin(oc, self.lo[axis])
                };
                if hit {
                    return true;
                }
            }
        }
        false
    }
}

/// Conditions I, II and IV for a 2D box or point. Objects recorded in `ctx`
/// that may lie inside `x` are not used against it.
pub fn qbox_prune_2d(x: &Rect, ctx: &QBoxContext) -> bool {
    ctx.prunes(x, Guard::Location)
}

/// Among objects inside one open quadrant of the box spanned by `q1` and `q2`
/// that holds neither query point, only an object extreme in both coordinates
/// (towards the quadrant's outer corner) can be a result, and only if it is
/// the sole object at that spot. Returns it, or `None` if every object can go.
///
/// Returns `None` as well when the box is degenerate or the points do not all
/// lie in one such quadrant.
pub fn region_unique_candidate<'a>(points: &[&'a Point], q1: &Point, q2: &Point) -> Option<&'a Point> {
    let dir = condition_iii_quadrant(points.first()?, q1, q2)?;
    if points.iter().any(|p| condition_iii_quadrant(p, q1, q2) != Some(dir)) {
        return None;
    }
    let ext = |i: usize| {
        points.iter().map(|p| dir[i] * p.coords()[i]).fold(f64::NEG_INFINITY, f64::max)
    };
    let target = [ext(0), ext(1)];
    let mut at = points.iter().filter(|p| (0..2).all(|i| dir[i] * p.coords()[i] == target[i]));
    match (at.next(), at.next()) {
        (Some(p), None) => Some(p),
        _ => None,
    }
}

/// The direction of the open quadrant of box(q1, q2) that contains `p` and
/// holds neither query point.
fn condition_iii_quadrant(p: &Point, q1: &Point, q2: &Point) -> Option<[f64; 2]> {
    let (a, b, c) = (q1.coords(), q2.coords(), p.coords());
    if a.len() != 2 || a[0] == b[0] || a[1] == b[1] {
        return None;
    }
    let mut dir = [0.0; 2];
    for i in 0..2 {
        let (l, h) = (a[i].min(b[i]), a[i].max(b[i]));
        let (m, tol) = (0.5 * (l + h), mid_margin(l, h));
        dir[i] = if m + tol < c[i] && c[i] < h {
            1.0
        } else if l < c[i] && c[i] < m - tol {
            -1.0
        } else {
            return None;
        };
    }
    let toward = |q: &[f64]| [if q[0] > 0.5 * (a[0] + b[0]) { 1.0 } else { -1.0 }, if q[1] > 0.5 * (a[1] + b[1]) { 1.0 } else { -1.0 }];
    (dir != toward(a) && dir != toward(b)).then_some(dir)
}

/// Whether every query point is in the dynamic skyline of `c`: for each `q`,
/// no other object inside the box mirrored through `c` dominates `q`.
pub fn idsq_refine(t: &AggRTree, c: &Point, q: &QuerySet, meter: &mut AccessMeter) -> bool {
    q.members().iter().all(|m| !t.window_any(&reflection_window(c.coords(), m.coords()), meter, |p| {
        !p.same_object(c) && dominates_coords(p.coords(), m.coords(), c.coords())
    }))
}

/// Box spanned by `q` and its reflection through `c`, padded by a few ulps so
/// rounding never drops a boundary point; the exact test happens per point.
fn reflection_window(c: &[f64], q: &[f64]) -> Rect {
    let mut lo = Vec::with_capacity(c.len());
    let mut hi = Vec::with_capacity(c.len());
    for i in 0..c.len() {
        let r = (q[i] - c[i]).abs();
        let pad = 1e-12 * (1.0 + c[i].abs() + r);
        lo.push(c[i] - r - pad);
        hi.push(c[i] + r + pad);
    }
    Rect::new(lo, hi).expect("finite window")
}

/// Candidates for a single query point by brute force: objects in the
/// skyline of their own orthant around `q`, computed per orthant.
pub fn partition_skyline<'a>(points: &[&'a Point], q: &Point) -> Vec<&'a Point> {
    let orthant = |p: &Point| -> Vec<bool> { p.coords().iter().zip(q.coords()).map(|(a, b)| a >= b).collect() };
    points
        .iter()
        .copied()
        .filter(|p| !p.same_object(q))
        .filter(|p| {
            let o = orthant(p);
            !points.iter().any(|r| {
                !r.same_object(p) && r.coords() != q.coords() && orthant(r) == o && dominates_coords(r.coords(), p.coords(), q.coords())
            })
        })
        .collect()
}

/// Objects of `t` outside `Q` that have every query point in their dynamic
/// skyline.
pub fn idsq_query<'t>(t: &'t AggRTree, q: &QuerySet, meter: &mut AccessMeter) -> Vec<&'t Point> {
    let out = run(t, None, q, &QueryOptions::default(), meter);
    out.results.iter().filter_map(|&id| t.lookup(id)).collect()
}

pub(crate) fn run(
    data: &AggRTree,
    cands: Option<&AggRTree>,
    q: &QuerySet,
    opts: &QueryOptions,
    meter: &mut AccessMeter,
) -> Outcome {
    if !idsq_fast_validate(q) {
        return Outcome::empty();
    }
    let bichromatic = cands.is_some();
    let use_qbox = opts.qbox.unwrap_or(q.dim() == 2);
    let mut space = PruneSpace::from_queries(q);
    let mut qbox = if use_qbox { QBoxContext::new(q) } else { None };
    let mut trace = opts.trace.then(Vec::new);

    let mut trees = vec![data];
    trees.extend(cands);
    let mut bf: BestFirst<'_, bool> = BestFirst::new(trees);
    let key = |e: &Entry| q.members().iter().map(|m| e.mbr.max_dist2(m.coords())).fold(f64::INFINITY, f64::min);
    // Tag: whether the entry comes from the candidate side.
    bf.push_root(0, meter, |e| (key(e), !bichromatic));
    if bichromatic {
        bf.push_root(1, meter, |e| (key(e), true));
    }
    let data_side = |tree: usize| tree == 0;

    let mut candidates: Vec<&Point> = Vec::new();
    while let Some(item) = bf.pop() {
        let e = bf.entry(item.at);
        let point = bf.point(item.at);
        let is_query = point.is_some_and(|p| q.contains_object(p));
        let pruned = !is_query
            && (qbox.as_ref().is_some_and(|c| c.prunes(&e.mbr, Guard::Location))
                || space.pair_prune(&e.mbr)
                || space.object_prune(&e.mbr));
        match point {
            Some(p) => {
                if data_side(item.at.tree) {
                    if !is_query {
                        space.add_object(p, q);
                    }
                    if let Some(c) = &mut qbox {
                        c.observe(p);
                    }
                }
                if item.tag && !is_query {
                    if pruned {
                        if let Some(tr) = &mut trace {
                            tr.push(p.id);
                        }
                    } else {
                        candidates.push(p);
                    }
                }
            }
            None if pruned => {
                if item.tag {
                    if let Some(tr) = &mut trace {
                        tr.extend(bf.tree(item.at.tree).subtree_points(e).iter().map(|p| p.id));
                    }
                }
            }
            None => {
                let tag = item.tag;
                bf.expand(item.at, meter, |c| (key(c), tag));
            }
        }
    }
    let filtered = candidates.len();

    // Re-test survivors against everything learned during the traversal.
    let mut survivors: Vec<&Point> = candidates
        .into_iter()
        .filter(|c| {
            let x = Rect::from_point(c.coords());
            let guard = Guard::Object(c);
            let drop = qbox.as_ref().is_some_and(|ctx| ctx.prunes(&x, guard))
                || space.pair_prune(&x)
                || space.object_prune_guarded(&x, guard);
            if drop {
                if let Some(tr) = &mut trace {
                    tr.push(c.id);
                }
            }
            !drop
        })
        .collect();
    if qbox.is_some() && !bichromatic {
        survivors = condition_iii(survivors, q, trace.as_mut());
    }

    let mut results = Vec::new();
    for c in &survivors {
        if idsq_refine(data, c, q, meter) {
            results.push(c.id);
        }
    }
    Outcome {
        results,
        candidates: filtered,
        refinement_checks: survivors.len(),
        pruned: trace.unwrap_or_default(),
        validated_empty: false,
    }
}

/// Apply the one-candidate-per-quadrant rule for every pair of query points.
fn condition_iii<'a>(mut cands: Vec<&'a Point>, q: &QuerySet, mut trace: Option<&mut Vec<u64>>) -> Vec<&'a Point> {
    let m = q.members();
    for (i, q1) in m.iter().enumerate() {
        for q2 in &m[i + 1..] {
            let mut groups: Vec<([f64; 2], Vec<&Point>)> = Vec::new();
            for c in &cands {
                if let Some(dir) = condition_iii_quadrant(c, q1, q2) {
                    match groups.iter_mut().find(|g| g.0 == dir) {
                        Some(g) => g.1.push(c),
                        None => groups.push((dir, vec![c])),
                    }
                }
            }
            if groups.is_empty() {
                continue;
            }
            let mut drop: Vec<&Point> = Vec::new();
            for (_, pts) in &groups {
                let keep = region_unique_candidate(pts, q1, q2);
                drop.extend(pts.iter().filter(|p| !keep.is_some_and(|k| k.same_object(p))));
            }
            if let Some(tr) = trace.as_deref_mut() {
                tr.extend(drop.iter().map(|p| p.id));
            }
            cands.retain(|c| !drop.iter().any(|d| d.same_object(c)));
        }
    }
    cands
}
