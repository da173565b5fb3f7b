//! Brute-force ground truth by exhaustive scan.

use crate::geometry::Point;
use crate::predicate::{self, Predicate};

/// `q ∈ P(r)` judged against `points`.
pub fn brute_membership(points: &[Point], r: &Point, q: &Point, pred: Predicate) -> bool {
    predicate::holds(points, r, q, pred)
}

/// Inverse query answer, monochromatic: candidates are `points` themselves
/// (minus `query` for skylines).
pub fn brute_inverse(points: &[Point], query: &[Point], pred: Predicate) -> Vec<u64> {
    brute_inverse_bichromatic(points, points, query, pred)
}

/// Inverse query answer with candidates drawn from `candidates` and judged
/// against `points`. Sorted ids.
pub fn brute_inverse_bichromatic(points: &[Point], candidates: &[Point], query: &[Point], pred: Predicate) -> Vec<u64> {
    if let Predicate::Knn(k) = pred {
        if query.len() > k {
            return Vec::new();
        }
    }
    let mut out: Vec<u64> = candidates
        .iter()
        .filter(|r| {
            !(pred == Predicate::DynamicSkyline && query.iter().any(|q| q.same_object(r)))
        })
        .filter(|r| query.iter().all(|q| predicate::holds(points, r, q, pred)))
        .map(|r| r.id)
        .collect();
    out.sort_unstable();
    out
}
