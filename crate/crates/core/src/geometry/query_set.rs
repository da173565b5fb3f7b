use crate::error::{Error, Result};

use super::hull::Hull;
use super::point::Point;
use super::rect::{Extent, Rect};

/// The query objects `Q` with cached bounding box and hull.
#[derive(Clone, Debug)]
pub struct QuerySet {
    members: Vec<Point>,
    bbox: Rect,
    hull: Hull,
}

impl QuerySet {
    pub fn new(members: Vec<Point>) -> Result<Self> {
        let first = members.first().ok_or(Error::Empty("query set"))?;
        let dim = first.dim();
        if let Some(p) = members.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, got: p.dim() });
        }
        let bbox = Rect::bounding(dim, members.iter().map(Point::coords));
        let hull = Hull::build(dim, members.iter().map(Point::coords));
        Ok(Self { members, bbox, hull })
    }

    pub fn members(&self) -> &[Point] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.bbox.dim()
    }

    /// Minimal bounding rectangle of the query points.
    pub fn bbox(&self) -> &Rect {
        &self.bbox
    }

    pub fn hull(&self) -> &Hull {
        &self.hull
    }

    pub fn contains_object(&self, p: &Point) -> bool {
        self.members.iter().any(|q| q.same_object(p))
    }

    /// Some query point sits at exactly these coordinates.
    pub fn has_location(&self, c: &[f64]) -> bool {
        self.members.iter().any(|q| q.coords() == c)
    }

    /// Number of query points whose location lies in the closed box.
    pub fn count_in(&self, r: &Rect) -> u64 {
        self.members.iter().filter(|q| r.contains_point(q.coords())).count() as u64
    }

    /// Closed convex-hull membership.
    pub fn point_in_hull(&self, p: &[f64]) -> bool {
        let tol = super::hull::HULL_TOL;
        if (0..p.len()).any(|i| p[i] < self.bbox.lo()[i] - tol || p[i] > self.bbox.hi()[i] + tol) {
            return false;
        }
        self.hull.contains(p)
    }

    /// Every corner of the box is in the hull.
    pub fn rect_in_hull(&self, r: &Rect) -> bool {
        if r.is_empty() {
            return true;
        }
        if !self.bbox.contains_rect(r) {
            return false;
        }
        r.corners().all(|c| self.point_in_hull(&c))
    }
}

/// The query point farthest from `o` and the corresponding distance bound.
///
/// For a point the bound is the exact distance to its farthest query; for a box
/// it is `max_q minDist(box, q)`, a lower bound on the farthest-query distance of
/// every point inside. Ties go to the lowest id.
pub fn farthest_query<'q, E: Extent + ?Sized>(o: &E, q: &'q QuerySet) -> (&'q Point, f64) {
    let (best, d2) = farthest_query2(o, q);
    (best, d2.sqrt())
}

pub(crate) fn farthest_query2<'q, E: Extent + ?Sized>(o: &E, q: &'q QuerySet) -> (&'q Point, f64) {
    let mut best = &q.members[0];
    let mut best_d = o.min_dist2_to(best.coords());
    for m in &q.members[1..] {
        let d = o.min_dist2_to(m.coords());
        if d > best_d || (d == best_d && m.id < best.id) {
            best = m;
            best_d = d;
        }
    }
    (best, best_d)
}

/// Conservative test that every point of `e2` is strictly closer to every point
/// `p` of `e` than `p`'s farthest query: `maxDist(e, e2) < max_q minDist(e, q)`.
pub fn entry_dominance(e: &Rect, e2: &Rect, q: &QuerySet) -> bool {
    let (_, m2) = farthest_query2(e, q);
    e.max_dist2_rect(e2) < m2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(id: u64, c: &[f64]) -> Point {
        Point::new(id, c.to_vec()).unwrap()
    }

    fn qs(pts: &[(u64, &[f64])]) -> QuerySet {
        QuerySet::new(pts.iter().map(|(i, c)| p(*i, c)).collect()).unwrap()
    }

    fn rect(lo: &[f64], hi: &[f64]) -> Rect {
        Rect::new(lo.to_vec(), hi.to_vec()).unwrap()
    }

    #[test]
    fn farthest_examples() {
        let q = qs(&[(0, &[1.0, 0.0]), (1, &[3.0, 0.0])]);
        let (f, d) = farthest_query(&p(9, &[0.0, 0.0]), &q);
        assert_eq!((f.id, d), (1, 3.0));

        let (f, d) = farthest_query(&p(9, &[2.0, 0.0]), &q);
        assert_eq!((f.id, d), (0, 1.0));

        let q = qs(&[(5, &[2.0, 2.0])]);
        let (f, d) = farthest_query(&rect(&[0.0, 0.0], &[1.0, 1.0]), &q);
        assert_eq!(f.id, 5);
        assert!((d - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn farthest_tie_prefers_low_id_regardless_of_order() {
        let q = qs(&[(7, &[3.0, 0.0]), (2, &[1.0, 0.0])]);
        let (f, _) = farthest_query(&p(9, &[2.0, 0.0]), &q);
        assert_eq!(f.id, 2);
    }

    #[test]
    fn entry_dominance_examples() {
        let q = qs(&[(0, &[10.0, 0.0])]);
        assert!(entry_dominance(&rect(&[0.0, 0.0], &[1.0, 0.0]), &rect(&[1.5, 0.0], &[2.0, 0.0]), &q));

        let q = qs(&[(0, &[1.0, 0.0])]);
        let a = Rect::from_point(&[0.0, 0.0]);
        let b = Rect::from_point(&[5.0, 0.0]);
        assert!(!entry_dominance(&a, &b, &q));

        let q = qs(&[(0, &[10.0, 10.0])]);
        let u = rect(&[0.0, 0.0], &[1.0, 1.0]);
        assert!(entry_dominance(&u, &u, &q));
    }

    #[test]
    fn hull_queries() {
        let q = qs(&[(0, &[0.0, 0.0]), (1, &[1.0, 0.0]), (2, &[0.0, 1.0])]);
        assert!(q.point_in_hull(&[0.25, 0.25]));
        assert!(!q.point_in_hull(&[1.0, 1.0]));
        assert!(q.rect_in_hull(&rect(&[0.1, 0.1], &[0.3, 0.3])));
        assert!(!q.rect_in_hull(&rect(&[0.1, 0.1], &[0.6, 0.6])));

        let q = qs(&[(0, &[0.0, 0.0]), (1, &[1.0, 0.0]), (2, &[2.0, 0.0])]);
        assert!(q.point_in_hull(&[1.0, 0.0]));
    }

    #[test]
    fn empty_query_set_rejected() {
        assert!(matches!(QuerySet::new(vec![]), Err(Error::Empty(_))));
        let err = QuerySet::new(vec![p(0, &[0.0]), p(1, &[0.0, 1.0])]).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }
}
